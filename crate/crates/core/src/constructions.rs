//! Propagation of Betti numbers, Bott-Chern numbers and non-Kählerness degrees through
//! projective bundles and blow-ups.
//!
//! Everything here is formal on cohomological models: a blow-up only checks the
//! dimension arithmetic `dim Y + r = dim X`, never that `Y` embeds in `X`. Summands with
//! an index outside the table are zero.

use thiserror::Error;

use crate::diamond::{
    self, BettiVector, BigradedTable, DeltaVector, DiamondError, ManifoldModel, Mode,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid-rank: rank {0} < 1")]
    InvalidRank(i64),
    #[error("codim-too-small: codimension {0} < 2")]
    CodimTooSmall(i64),
    #[error("dimension-mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
    #[error("disconnected-center: b_0 of the center is {0}")]
    DisconnectedCenter(i64),
    #[error("not-invertible: {0}")]
    NotInvertible(String),
    #[error(transparent)]
    Model(#[from] DiamondError),
}

fn rank_of(r: i64) -> Result<usize, ConstructionError> {
    if r < 1 {
        return Err(ConstructionError::InvalidRank(r));
    }
    Ok(r as usize)
}

fn codim_of(r: i64) -> Result<usize, ConstructionError> {
    if r < 2 {
        return Err(ConstructionError::CodimTooSmall(r));
    }
    Ok(r as usize)
}

/// Adds `sign · Σ_{i=lo}^{hi} shift_{2i}(src)` onto `target`, entrywise, for Betti vectors
/// and Bott-Chern tables (the latter shifted diagonally by `(i, i)`).
fn add_shifted(
    betti: &mut BettiVector,
    bott_chern: &mut BigradedTable,
    src: &ManifoldModel,
    shifts: std::ops::RangeInclusive<i64>,
    sign: i64,
) {
    let n = betti.dim() as i64;
    for k in 0..=2 * n {
        let add: i64 = shifts.clone().map(|i| src.betti().get(k - 2 * i)).sum();
        betti.set(k as usize, betti.get(k) + sign * add);
    }
    for p in 0..=n {
        for q in 0..=n {
            let add: i64 = shifts
                .clone()
                .map(|i| src.bott_chern().get(p - i, q - i))
                .sum();
            bott_chern.set(p as usize, q as usize, bott_chern.get(p, q) + sign * add);
        }
    }
}

/// Model of the projectivization `P(E)` of a rank-`r` bundle over `m`:
/// `b_k = Σ_{i<r} b_{k-2i}` and `h^{p,q} = Σ_{i<r} h^{p-i,q-i}`.
pub fn projectivize(m: &ManifoldModel, r: i64) -> Result<ManifoldModel, ConstructionError> {
    let r = rank_of(r)? as i64;
    let dim = m.dim() + r as usize - 1;
    let mut betti = BettiVector::zeros(dim);
    let mut bott_chern = BigradedTable::zeros(dim);
    add_shifted(&mut betti, &mut bott_chern, m, 0..=r - 1, 1);
    Ok(ManifoldModel::new(
        format!("proj({}, rank={r})", m.name),
        betti,
        bott_chern,
    )?)
}

/// `Δ^k(P(E)) = Σ_{i<r} Δ^{k-2i}(X)` for a base of dimension `n_base`.
pub fn delta_projectivize(
    dv: &DeltaVector,
    r: i64,
    n_base: usize,
) -> Result<DeltaVector, ConstructionError> {
    let r = rank_of(r)? as i64;
    if dv.dim() != n_base {
        return Err(ConstructionError::DimensionMismatch(format!(
            "delta vector has dimension {} but the base has dimension {n_base}",
            dv.dim()
        )));
    }
    let dim = n_base + r as usize - 1;
    let values = (0..=2 * dim as i64)
        .map(|k| (0..r).map(|i| dv.get(k - 2 * i)).sum())
        .collect();
    Ok(DeltaVector::new(dim, values)?)
}

/// `m × CP^k`, the projectivization of the trivial bundle of rank `k + 1`.
pub fn product_with_cpk(m: &ManifoldModel, k: i64) -> Result<ManifoldModel, ConstructionError> {
    if k < 1 {
        return Err(ConstructionError::InvalidParameter(format!("k = {k} < 1")));
    }
    Ok(projectivize(m, k + 1)?.with_name(format!("prodcp({}, k={k})", m.name)))
}

fn check_blowup_dims(x_dim: usize, y_dim: usize, r: usize) -> Result<(), ConstructionError> {
    if y_dim + r != x_dim {
        return Err(ConstructionError::DimensionMismatch(format!(
            "center of dimension {y_dim} with codimension {r} does not fit an ambient of dimension {x_dim}"
        )));
    }
    Ok(())
}

/// Model of the blow-up of `x` along a center `y` of codimension `r >= 2`:
/// `b_k(X̃) = b_k(X) + Σ_{i=1}^{r-1} b_{k-2i}(Y)` and likewise for `h_BC`.
pub fn blow_up(
    x: &ManifoldModel,
    y: &ManifoldModel,
    r: i64,
) -> Result<ManifoldModel, ConstructionError> {
    let r = codim_of(r)?;
    check_blowup_dims(x.dim(), y.dim(), r)?;
    let mut betti = x.betti().clone();
    let mut bott_chern = x.bott_chern().clone();
    add_shifted(&mut betti, &mut bott_chern, y, 1..=r as i64 - 1, 1);
    Ok(ManifoldModel::new(
        format!("blowup({}, center={}, codim={r})", x.name, y.name),
        betti,
        bott_chern,
    )?)
}

/// [`blow_up`] that additionally requires a connected center (`b_0 = 1`).
pub fn blow_up_strict(
    x: &ManifoldModel,
    y: &ManifoldModel,
    r: i64,
) -> Result<ManifoldModel, ConstructionError> {
    if y.betti().get(0) != 1 {
        return Err(ConstructionError::DisconnectedCenter(y.betti().get(0)));
    }
    blow_up(x, y, r)
}

/// `Δ^k(X̃) = Δ^k(X) + Σ_{i=1}^{r-1} Δ^{k-2i}(Y)`.
pub fn delta_blow_up(
    dx: &DeltaVector,
    dy: &DeltaVector,
    r: i64,
) -> Result<DeltaVector, ConstructionError> {
    let r = codim_of(r)? as i64;
    check_blowup_dims(dx.dim(), dy.dim(), r as usize)?;
    let values = (0..=2 * dx.dim() as i64)
        .map(|k| dx.get(k) + (1..r).map(|i| dy.get(k - 2 * i)).sum::<i64>())
        .collect();
    Ok(DeltaVector::new(dx.dim(), values)?)
}

/// Exceptional divisor of a blow-up along `y` of codimension `r`: the projectivized
/// normal bundle, so the model is `projectivize(y, r)`.
pub fn exceptional_divisor(y: &ManifoldModel, r: i64) -> Result<ManifoldModel, ConstructionError> {
    codim_of(r)?;
    Ok(projectivize(y, r)?.with_name(format!("excdiv({}, codim={r})", y.name)))
}

/// Re-embeds a codimension-`codim_y` submanifold of `x` as `Y × {pt}` inside `x × CP^k`,
/// returning the new ambient and the new codimension `codim_y + k`.
pub fn heredity_lift(
    x: &ManifoldModel,
    codim_y: i64,
    k: i64,
) -> Result<(ManifoldModel, i64), ConstructionError> {
    if codim_y < 1 {
        return Err(ConstructionError::InvalidParameter(format!(
            "codim_y = {codim_y} < 1"
        )));
    }
    if codim_y > x.dim() as i64 {
        return Err(ConstructionError::InvalidParameter(format!(
            "codim_y = {codim_y} exceeds the ambient dimension {}",
            x.dim()
        )));
    }
    Ok((product_with_cpk(x, k)?, codim_y + k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// One step of a blow-up/blow-down sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupStep {
    pub direction: Direction,
    pub center: ManifoldModel,
    pub codim: i64,
}

/// State after a step of [`evaluate_blowup_sequence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceState {
    pub model: ManifoldModel,
    pub delta: DeltaVector,
    pub verdict: bool,
}

/// Inverse of [`blow_up`] along `y`: subtracts the shifted copies of the center.
pub fn blow_down(
    x_tilde: &ManifoldModel,
    y: &ManifoldModel,
    r: i64,
) -> Result<ManifoldModel, ConstructionError> {
    let r = codim_of(r)?;
    check_blowup_dims(x_tilde.dim(), y.dim(), r)?;
    let mut betti = x_tilde.betti().clone();
    let mut bott_chern = x_tilde.bott_chern().clone();
    add_shifted(&mut betti, &mut bott_chern, y, 1..=r as i64 - 1, -1);
    if let Some((k, v)) = betti.as_slice().iter().enumerate().find(|(_, &v)| v < 0) {
        return Err(ConstructionError::NotInvertible(format!(
            "blowing down along {} would leave b_{k} = {v}",
            y.name
        )));
    }
    let n = bott_chern.dim() as i64;
    for p in 0..=n {
        for q in 0..=n {
            let v = bott_chern.get(p, q);
            if v < 0 {
                return Err(ConstructionError::NotInvertible(format!(
                    "blowing down along {} would leave h_BC({p},{q}) = {v}",
                    y.name
                )));
            }
        }
    }
    Ok(ManifoldModel::new(
        format!("blowdown({}, center={}, codim={r})", x_tilde.name, y.name),
        betti,
        bott_chern,
    )?)
}

/// Runs a sequence of blow-ups and blow-downs and reports the model, degrees and
/// verdict after every step.
///
/// A down-step that exactly undoes an earlier up-step (same center and codimension,
/// applied to the model that step produced) restores the recorded model, name included.
/// Any other down-step subtracts the shifted sums and fails if an entry would go negative.
pub fn evaluate_blowup_sequence(
    start: &ManifoldModel,
    steps: &[BlowupStep],
) -> Result<Vec<SequenceState>, ConstructionError> {
    // (model before the up-step, the up-step, model after it)
    let mut history: Vec<(ManifoldModel, &BlowupStep, ManifoldModel)> = Vec::new();
    let mut current = start.clone();
    let mut states = Vec::with_capacity(steps.len());
    for step in steps {
        current = match step.direction {
            Direction::Up => {
                let next = blow_up(&current, &step.center, step.codim)?;
                history.push((current, step, next.clone()));
                next
            }
            Direction::Down => {
                let recorded = history.last().filter(|(_, up, after)| {
                    up.center == step.center && up.codim == step.codim && *after == current
                });
                match recorded {
                    Some(_) => history.pop().expect("just matched").0,
                    None => blow_down(&current, &step.center, step.codim)?,
                }
            }
        };
        let delta = diamond::delta(&current);
        let verdict = diamond::is_ddbar(&current, Mode::Lenient)?;
        states.push(SequenceState {
            model: current.clone(),
            delta,
            verdict,
        });
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diamond::{delta, is_ddbar};

    fn binom(n: i64, k: i64) -> i64 {
        if k < 0 || k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn torus(n: usize) -> ManifoldModel {
        let ni = n as i64;
        ManifoldModel::new(
            format!("torus:{n}"),
            BettiVector::new(n, (0..=2 * ni).map(|k| binom(2 * ni, k)).collect()).unwrap(),
            BigradedTable::from_fn(n, |p, q| binom(ni, p as i64) * binom(ni, q as i64)),
        )
        .unwrap()
    }

    fn point() -> ManifoldModel {
        ManifoldModel::new(
            "point",
            BettiVector::new(0, vec![1]).unwrap(),
            BigradedTable::from_rows(0, vec![vec![1]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn projectivize_rank_one_is_identity() {
        let t = torus(2);
        let p = projectivize(&t, 1).unwrap();
        assert_eq!(p.betti(), t.betti());
        assert_eq!(p.bott_chern(), t.bott_chern());
    }

    #[test]
    fn projectivize_point_gives_projective_space() {
        for k in 1..=4 {
            let p = projectivize(&point(), k + 1).unwrap();
            assert_eq!(p.dim(), k as usize);
            for j in 0..=2 * k {
                assert_eq!(p.betti().get(j), i64::from(j % 2 == 0));
            }
            for a in 0..=k {
                for b in 0..=k {
                    assert_eq!(p.bott_chern().get(a, b), i64::from(a == b));
                }
            }
        }
    }

    #[test]
    fn ruled_surface_over_curve() {
        let p = projectivize(&torus(1), 2).unwrap();
        assert_eq!(p.betti().as_slice(), &[1, 2, 2, 2, 1]);
        assert_eq!(
            p.bott_chern().rows(),
            vec![vec![1, 1, 0], vec![1, 2, 1], vec![0, 1, 1]]
        );
    }

    #[test]
    fn blow_up_surface_at_point() {
        let b = blow_up(&torus(2), &point(), 2).unwrap();
        assert_eq!(b.betti().as_slice(), &[1, 4, 7, 4, 1]);
        assert_eq!(b.bott_chern().get(1, 1), 5);
        assert_eq!(b.bott_chern().get(2, 0), 1);
        assert_eq!(is_ddbar(&b, Mode::Strict), Ok(true));
    }

    #[test]
    fn blow_up_threefold_along_curve() {
        let b = blow_up(&torus(3), &torus(1), 2).unwrap();
        assert_eq!(b.betti().get(2), 16);
        assert_eq!(b.betti().get(3), 22);
        assert_eq!(b.bott_chern().get(1, 1), 10);
        assert_eq!(is_ddbar(&b, Mode::Strict), Ok(true));
    }

    #[test]
    fn parameter_errors() {
        assert_eq!(
            projectivize(&point(), 0),
            Err(ConstructionError::InvalidRank(0))
        );
        assert_eq!(
            blow_up(&torus(2), &torus(1), 1),
            Err(ConstructionError::CodimTooSmall(1))
        );
        assert!(matches!(
            blow_up(&torus(3), &point(), 2),
            Err(ConstructionError::DimensionMismatch(_))
        ));
        assert!(matches!(
            exceptional_divisor(&point(), 1),
            Err(ConstructionError::CodimTooSmall(1))
        ));
        assert!(matches!(
            product_with_cpk(&point(), 0),
            Err(ConstructionError::InvalidParameter(_))
        ));
        assert!(matches!(
            heredity_lift(&torus(2), 0, 1),
            Err(ConstructionError::InvalidParameter(_))
        ));
        assert!(matches!(
            heredity_lift(&torus(2), 1, 0),
            Err(ConstructionError::InvalidParameter(_))
        ));
        let two_points = ManifoldModel::new(
            "two points",
            BettiVector::new(0, vec![2]).unwrap(),
            BigradedTable::from_rows(0, vec![vec![2]]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            blow_up_strict(&torus(2), &two_points, 2),
            Err(ConstructionError::DisconnectedCenter(2))
        );
        assert!(blow_up(&torus(2), &two_points, 2).is_ok());
    }

    #[test]
    fn delta_level_formulas() {
        let zero = DeltaVector::new(1, vec![0, 0, 0]).unwrap();
        assert!(delta_projectivize(&zero, 3, 1).unwrap().is_zero());
        assert_eq!(delta_projectivize(&zero, 1, 1).unwrap(), zero);
        assert!(delta_projectivize(&zero, 2, 2).is_err());

        let dx = DeltaVector::new(3, vec![0; 7]).unwrap();
        let dy = DeltaVector::new(1, vec![0, 2, 0]).unwrap();
        let out = delta_blow_up(&dx, &dy, 2).unwrap();
        assert_eq!(out.as_slice(), &[0, 0, 0, 2, 0, 0, 0]);
        let dz = DeltaVector::new(1, vec![0; 3]).unwrap();
        assert!(delta_blow_up(&dx, &dz, 2).unwrap().is_zero());
    }

    #[test]
    fn heredity_lift_bookkeeping() {
        let (ambient, codim) = heredity_lift(&torus(2), 1, 1).unwrap();
        assert_eq!(codim, 2);
        assert_eq!(ambient.dim(), 3);
        assert_eq!(is_ddbar(&ambient, Mode::Strict), Ok(true));
        let cp2 = projectivize(&point(), 3).unwrap();
        let (ambient, codim) = heredity_lift(&cp2, 2, 3).unwrap();
        assert_eq!((ambient.dim(), codim), (5, 5));
    }

    #[test]
    fn sequence_round_trip() {
        let steps = vec![
            BlowupStep {
                direction: Direction::Up,
                center: torus(1),
                codim: 2,
            },
            BlowupStep {
                direction: Direction::Down,
                center: torus(1),
                codim: 2,
            },
        ];
        let states = evaluate_blowup_sequence(&torus(3), &steps).unwrap();
        assert_eq!(states.len(), 2);
        assert_eq!(states[1].model, torus(3));
        assert!(states.iter().all(|s| s.verdict));
    }

    #[test]
    fn unrecorded_down_step_subtracts() {
        let blown = blow_up(&torus(2), &point(), 2).unwrap().with_name("custom");
        let steps = vec![BlowupStep {
            direction: Direction::Down,
            center: point(),
            codim: 2,
        }];
        let states = evaluate_blowup_sequence(&blown, &steps).unwrap();
        assert_eq!(states[0].model.betti(), torus(2).betti());
        assert_eq!(states[0].model.bott_chern(), torus(2).bott_chern());
        assert_eq!(delta(&states[0].model), delta(&torus(2)));
    }

    #[test]
    fn impossible_down_step() {
        let cp3 = projectivize(&point(), 4).unwrap();
        let steps = vec![BlowupStep {
            direction: Direction::Down,
            center: torus(1),
            codim: 2,
        }];
        assert!(matches!(
            evaluate_blowup_sequence(&cp3, &steps),
            Err(ConstructionError::NotInvertible(_))
        ));
    }
}

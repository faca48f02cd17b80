//! Invariant suites run by `ddbar verify`, plus the seeded generators they draw from.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bicomplex::{self, Bicomplex, CohomologySummary, StructureEquations, Term};
use crate::constructions::{self, ConstructionError};
use crate::diamond::{self, BettiVector, BigradedTable, ManifoldModel, Mode};
use crate::gauss::GaussRational;
use crate::registry::{self, RegistryError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    DeltaNonneg,
    RouteIndependence,
    Prop22,
    Prop23,
    Duality,
    Froelicher,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::DeltaNonneg,
        Suite::RouteIndependence,
        Suite::Prop22,
        Suite::Prop23,
        Suite::Duality,
        Suite::Froelicher,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DeltaNonneg => "delta-nonneg",
            Suite::RouteIndependence => "route-independence",
            Suite::Prop22 => "prop22",
            Suite::Prop23 => "prop23",
            Suite::Duality => "duality",
            Suite::Froelicher => "froelicher",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub count: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            count: 100,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, holds: bool, counterexample: impl FnOnce() -> String) {
        self.checked += 1;
        if !holds {
            self.failures.push(counterexample());
        }
    }
}

/// Structurally valid model with arbitrary small entries; not necessarily realizable.
pub fn random_model(rng: &mut impl Rng, n: usize) -> ManifoldModel {
    let betti = BettiVector::new(n, (0..=2 * n).map(|_| rng.gen_range(0..=6)).collect())
        .expect("2n+1 entries");
    let bott_chern = BigradedTable::from_fn(n, |_, _| rng.gen_range(0..=6));
    ManifoldModel::new(format!("random:{n}"), betti, bott_chern).expect("same dimension")
}

fn small_gaussian(rng: &mut impl Rng) -> GaussRational {
    loop {
        let re = rng.gen_range(-2..=2);
        let im = rng.gen_range(-1..=1);
        let den = rng.gen_range(1..=2);
        if re != 0 || im != 0 {
            return GaussRational::from_fractions((re, den), (im, 1));
        }
    }
}

/// Random two-step nilpotent structure equations on `m` generators: the first `k`
/// generators are closed and the differentials of the rest lie in the span of `(2,0)`
/// and `(1,1)` products of closed generators, so `d² = 0` holds automatically.
pub fn random_two_step(rng: &mut impl Rng, m: usize) -> StructureEquations {
    let closed = rng.gen_range(1..m.max(2)).min(m);
    let mut s = StructureEquations::new(format!("two-step:{m}"), m);
    for a in closed + 1..=m {
        for b in 1..=closed {
            for c in b + 1..=closed {
                if rng.gen_bool(0.5) {
                    s.terms20.push(Term::new(a, b, c, small_gaussian(rng)));
                }
            }
            for c in 1..=closed {
                if rng.gen_bool(0.4) {
                    s.terms11.push(Term::new(a, b, c, small_gaussian(rng)));
                }
            }
        }
    }
    s
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The fixture grid: point, tori of dimension 1..3, CP^1, CP^2, Iwasawa, Kodaira-Thurston.
pub fn fixture_grid() -> Result<Vec<ManifoldModel>, RegistryError> {
    [
        "point",
        "torus:1",
        "torus:2",
        "torus:3",
        "cpn:1",
        "cpn:2",
        "iwasawa",
        "kodaira-thurston",
    ]
    .iter()
    .map(|name| registry::builtin_model(name))
    .collect()
}

/// The grid plus realizable models obtained from it by products and blow-ups, so that
/// centers of codimension 3 and 4 occur.
pub fn extended_grid() -> Result<Vec<ManifoldModel>, RegistryError> {
    let base = fixture_grid()?;
    let by_name = |n: &str| base.iter().find(|m| m.name == n).cloned().expect("in grid");
    let mut out = base.clone();
    let derived: Result<Vec<ManifoldModel>, ConstructionError> = (|| {
        Ok(vec![
            constructions::product_with_cpk(&by_name("iwasawa"), 1)?,
            constructions::product_with_cpk(&by_name("kodaira-thurston"), 1)?,
            constructions::product_with_cpk(&by_name("torus:2"), 2)?,
            constructions::blow_up(&by_name("torus:3"), &by_name("torus:1"), 2)?,
            constructions::blow_up(&by_name("iwasawa"), &by_name("point"), 3)?,
        ])
    })();
    out.extend(derived.map_err(|e| RegistryError::Shape(e.to_string()))?);
    Ok(out)
}

fn ddbar(m: &ManifoldModel) -> Result<bool, String> {
    diamond::is_ddbar(m, Mode::Strict).map_err(|e| format!("{}: {e}", m.name))
}

fn engine_fixtures(
    opts: VerifyOptions,
) -> Result<Vec<(StructureEquations, Bicomplex)>, RegistryError> {
    let mut structures = vec![registry::iwasawa(), registry::kodaira_thurston()];
    structures.extend((1..=3).map(StructureEquations::abelian));
    let mut rng = rng_for(opts.seed);
    structures.extend((0..opts.count).map(|_| {
        let m = rng.gen_range(2..=3);
        random_two_step(&mut rng, m)
    }));
    structures
        .into_iter()
        .map(|s| {
            let b = bicomplex::build_ce_bicomplex(&s)?;
            Ok((s, b))
        })
        .collect()
}

fn check_delta_nonneg(opts: VerifyOptions, report: &mut SuiteReport) -> Result<(), RegistryError> {
    let mut models = Vec::new();
    for name in registry::builtin_names() {
        models.push(registry::builtin_model(&name)?);
    }
    for (s, b) in engine_fixtures(opts)? {
        models.push(bicomplex::summarize(&b, &s.name)?.model());
    }
    for m in &models {
        let d = diamond::delta(m);
        report.check(d.first_negative().is_none(), || {
            format!("{}: delta {:?} has a negative entry", m.name, d.as_slice())
        });
    }
    Ok(())
}

fn check_route_independence(opts: VerifyOptions, report: &mut SuiteReport) {
    let mut rng = rng_for(opts.seed);
    for _ in 0..opts.count {
        let n = rng.gen_range(0..=4);
        let m = random_model(&mut rng, n);
        let r = rng.gen_range(1..=5);
        let direct = diamond::delta(&constructions::projectivize(&m, r).expect("r >= 1"));
        let shifted = constructions::delta_projectivize(&diamond::delta(&m), r, n).expect("r >= 1");
        report.check(direct == shifted, || {
            format!(
                "projectivize rank {r} of {:?}/{:?}: {:?} vs {:?}",
                m.betti().as_slice(),
                m.bott_chern().rows(),
                direct.as_slice(),
                shifted.as_slice()
            )
        });

        let x_dim = rng.gen_range(2..=5);
        let r = rng.gen_range(2..=x_dim);
        let x = random_model(&mut rng, x_dim);
        let y = random_model(&mut rng, x_dim - r);
        let r = r as i64;
        let direct = diamond::delta(&constructions::blow_up(&x, &y, r).expect("admissible"));
        let shifted = constructions::delta_blow_up(&diamond::delta(&x), &diamond::delta(&y), r)
            .expect("admissible");
        report.check(direct == shifted, || {
            format!(
                "blow-up codim {r}: x {:?}/{:?}, y {:?}/{:?}: {:?} vs {:?}",
                x.betti().as_slice(),
                x.bott_chern().rows(),
                y.betti().as_slice(),
                y.bott_chern().rows(),
                direct.as_slice(),
                shifted.as_slice()
            )
        });
    }
}

fn random_realizable(opts: VerifyOptions) -> Result<Vec<ManifoldModel>, RegistryError> {
    let mut rng = rng_for(opts.seed ^ 0x5eed);
    (0..opts.count.min(20))
        .map(|i| {
            let m = rng.gen_range(2..=3);
            let mut s = random_two_step(&mut rng, m);
            s.name = format!("two-step:{m}#{i}");
            let b = bicomplex::build_ce_bicomplex(&s)?;
            Ok(bicomplex::summarize(&b, &s.name)?.model())
        })
        .collect()
}

fn check_prop22(opts: VerifyOptions, report: &mut SuiteReport) -> Result<(), RegistryError> {
    let mut bases = extended_grid()?;
    bases.extend(random_realizable(opts)?);
    for x in &bases {
        let base = match ddbar(x) {
            Ok(v) => v,
            Err(e) => {
                report.check(false, || e);
                continue;
            }
        };
        for r in 1..=4 {
            let p = constructions::projectivize(x, r).expect("r >= 1");
            let got = ddbar(&p);
            report.check(got == Ok(base), || {
                format!(
                    "proj({}, rank={r}): {got:?} but base verdict {base}",
                    x.name
                )
            });
        }
        for k in 1..=3 {
            for codim in 1..=x.dim() as i64 {
                let (ambient, new_codim) =
                    constructions::heredity_lift(x, codim, k).expect("valid");
                let got = ddbar(&ambient);
                report.check(new_codim == codim + k && got == Ok(base), || {
                    format!(
                        "heredity_lift({}, codim={codim}, k={k}) gave codim {new_codim}, verdict {got:?}",
                        x.name
                    )
                });
            }
        }
    }
    Ok(())
}

fn check_prop23(opts: VerifyOptions, report: &mut SuiteReport) -> Result<(), RegistryError> {
    let mut models = extended_grid()?;
    models.extend(random_realizable(opts)?);
    for x in &models {
        for y in &models {
            if y.dim() >= x.dim() {
                continue;
            }
            let r = (x.dim() - y.dim()) as i64;
            if !(2..=4).contains(&r) {
                continue;
            }
            let blown = constructions::blow_up_strict(x, y, r).expect("admissible");
            let divisor = constructions::exceptional_divisor(y, r).expect("r >= 2");
            let (vx, vy, vb, ve) = (ddbar(x), ddbar(y), ddbar(&blown), ddbar(&divisor));
            let expected = match (&vx, &vy) {
                (Ok(a), Ok(b)) => Ok(*a && *b),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            report.check(vb.is_ok() && vb == expected, || {
                format!(
                    "blowup({}, center={}, codim={r}): {vb:?}, expected {expected:?}",
                    x.name, y.name
                )
            });
            let via_divisor = match (&vx, &ve) {
                (Ok(a), Ok(b)) => Ok(*a && *b),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            report.check(vb.is_ok() && vb == via_divisor, || {
                format!(
                    "blowup({}, center={}, codim={r}): {vb:?}, exceptional divisor route {via_divisor:?}",
                    x.name, y.name
                )
            });
        }
    }
    Ok(())
}

fn summaries(opts: VerifyOptions) -> Result<Vec<(Bicomplex, CohomologySummary)>, RegistryError> {
    engine_fixtures(opts)?
        .into_iter()
        .map(|(s, b)| {
            let summary = bicomplex::summarize(&b, &s.name)?;
            Ok((b, summary))
        })
        .collect()
}

fn check_duality(opts: VerifyOptions, report: &mut SuiteReport) -> Result<(), RegistryError> {
    for (b, s) in summaries(opts)? {
        let n = s.n as i64;
        let dual =
            (0..=n).all(|p| (0..=n).all(|q| s.aeppli.get(n - p, n - q) == s.bott_chern.get(p, q)));
        report.check(dual, || {
            format!(
                "{}: aeppli {:?} not dual to bott-chern {:?}",
                s.name,
                s.aeppli.rows(),
                s.bott_chern.rows()
            )
        });
        report.check(s.bott_chern == s.bott_chern.transpose(), || {
            format!(
                "{}: bott-chern {:?} not symmetric",
                s.name,
                s.bott_chern.rows()
            )
        });
        let del = bicomplex::del_cohomology_numbers(&b)?;
        report.check(del == s.dolbeault.transpose(), || {
            format!(
                "{}: ∂-cohomology {:?} is not the transposed Dolbeault table",
                s.name,
                del.rows()
            )
        });
    }
    Ok(())
}

fn check_froelicher(opts: VerifyOptions, report: &mut SuiteReport) -> Result<(), RegistryError> {
    for (_, s) in summaries(opts)? {
        for k in 0..=2 * s.n as i64 {
            let dolbeault = s.dolbeault.antidiagonal_sum(k);
            let betti = s.betti.get(k);
            report.check(dolbeault >= betti, || {
                format!("{}: Σ h_∂̄ = {dolbeault} < b_{k} = {betti}", s.name)
            });
        }
    }
    Ok(())
}

pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Result<SuiteReport, RegistryError> {
    let mut report = SuiteReport::default();
    match suite {
        Suite::DeltaNonneg => check_delta_nonneg(opts, &mut report)?,
        Suite::RouteIndependence => check_route_independence(opts, &mut report),
        Suite::Prop22 => check_prop22(opts, &mut report)?,
        Suite::Prop23 => check_prop23(opts, &mut report)?,
        Suite::Duality => check_duality(opts, &mut report)?,
        Suite::Froelicher => check_froelicher(opts, &mut report)?,
    }
    Ok(report)
}

//! Finite double complexes over the Gaussian rationals and their cohomology dimensions.
//!
//! A [`Bicomplex`] stores the spaces `A^{p,q}` (`0 <= p, q <= n`) by dimension together
//! with the matrices of `∂: A^{p,q} -> A^{p+1,q}` and `∂̄: A^{p,q} -> A^{p,q+1}`.
//! [`build_ce_bicomplex`] produces the Chevalley-Eilenberg double complex of a complex
//! nilpotent Lie algebra from its structure equations; its invariant cohomology is what
//! the registry uses for the nilmanifold fixtures.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::diamond::{
    self, BettiVector, BigradedTable, DeltaVector, ManifoldModel, Mode, ValidationReport,
};
use crate::gauss::GaussRational;
use crate::linalg::{exact_rank, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BicomplexError {
    #[error("not-integrable: {0}")]
    NotIntegrable(String),
    #[error("jacobi-violation: {0}")]
    JacobiViolation(String),
    #[error("index-error: {0}")]
    Index(String),
    #[error("invalid bicomplex: {0}")]
    Invalid(ValidationReport),
}

pub const CHECK_SHAPE: &str = "shape";
pub const CHECK_DEL_SQUARED: &str = "del-squared";
pub const CHECK_DELBAR_SQUARED: &str = "delbar-squared";
pub const CHECK_ANTICOMMUTE: &str = "anticommute";

/// A finite bigraded complex with anticommuting differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicomplex {
    n: usize,
    spaces: Vec<usize>,
    del: Vec<Matrix>,
    delbar: Vec<Matrix>,
}

impl Bicomplex {
    /// Assembles a bicomplex from per-bidegree data, each indexed `[p][q]`.
    ///
    /// No identities are checked here; see [`validate_bicomplex`].
    pub fn new(
        n: usize,
        spaces: Vec<Vec<usize>>,
        del: Vec<Vec<Matrix>>,
        delbar: Vec<Vec<Matrix>>,
    ) -> Result<Self, BicomplexError> {
        let square = |len: usize, rows: &[usize]| len == n + 1 && rows.iter().all(|&r| r == n + 1);
        let spaces_ok = square(
            spaces.len(),
            &spaces.iter().map(Vec::len).collect::<Vec<_>>(),
        );
        let del_ok = square(del.len(), &del.iter().map(Vec::len).collect::<Vec<_>>());
        let delbar_ok = square(
            delbar.len(),
            &delbar.iter().map(Vec::len).collect::<Vec<_>>(),
        );
        if !(spaces_ok && del_ok && delbar_ok) {
            return Err(BicomplexError::Index(format!(
                "bicomplex data must be indexed by 0 <= p, q <= {n}"
            )));
        }
        Ok(Self {
            n,
            spaces: spaces.into_iter().flatten().collect(),
            del: del.into_iter().flatten().collect(),
            delbar: delbar.into_iter().flatten().collect(),
        })
    }

    /// The bicomplex with the given space sizes and zero differentials.
    pub fn zero(n: usize, spaces: Vec<Vec<usize>>) -> Result<Self, BicomplexError> {
        let dim = |p: usize, q: usize| -> usize {
            spaces.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
        };
        let del = (0..=n)
            .map(|p| {
                (0..=n)
                    .map(|q| Matrix::zeros(dim(p + 1, q), dim(p, q)))
                    .collect()
            })
            .collect();
        let delbar = (0..=n)
            .map(|p| {
                (0..=n)
                    .map(|q| Matrix::zeros(dim(p, q + 1), dim(p, q)))
                    .collect()
            })
            .collect();
        Self::new(n, spaces, del, delbar)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, p: i64, q: i64) -> Option<usize> {
        let n = self.n as i64;
        (0..=n)
            .contains(&p)
            .then_some(())
            .filter(|_| (0..=n).contains(&q))
            .map(|_| p as usize * (self.n + 1) + q as usize)
    }

    /// `dim A^{p,q}`, zero outside the square.
    pub fn space(&self, p: i64, q: i64) -> usize {
        self.idx(p, q).map_or(0, |i| self.spaces[i])
    }

    pub fn total_dim(&self, k: i64) -> usize {
        (0..=k).map(|p| self.space(p, k - p)).sum()
    }

    /// Matrix of `∂` on `A^{p,q}`; a correctly shaped zero matrix outside the square.
    pub fn del(&self, p: i64, q: i64) -> Cow<'_, Matrix> {
        match self.idx(p, q) {
            Some(i) => Cow::Borrowed(&self.del[i]),
            None => Cow::Owned(Matrix::zeros(self.space(p + 1, q), self.space(p, q))),
        }
    }

    /// Matrix of `∂̄` on `A^{p,q}`; a correctly shaped zero matrix outside the square.
    pub fn delbar(&self, p: i64, q: i64) -> Cow<'_, Matrix> {
        match self.idx(p, q) {
            Some(i) => Cow::Borrowed(&self.delbar[i]),
            None => Cow::Owned(Matrix::zeros(self.space(p, q + 1), self.space(p, q))),
        }
    }

    /// The same complex with the roles of `∂` and `∂̄` exchanged and bidegrees transposed.
    pub fn swapped(&self) -> Bicomplex {
        let n = self.n as i64;
        let grid = |f: &dyn Fn(i64, i64) -> Matrix| -> Vec<Vec<Matrix>> {
            (0..=n)
                .map(|p| (0..=n).map(|q| f(p, q)).collect())
                .collect()
        };
        Bicomplex {
            n: self.n,
            spaces: (0..=n)
                .flat_map(|p| (0..=n).map(move |q| (p, q)))
                .map(|(p, q)| self.space(q, p))
                .collect(),
            del: grid(&|p, q| self.delbar(q, p).into_owned())
                .into_iter()
                .flatten()
                .collect(),
            delbar: grid(&|p, q| self.del(q, p).into_owned())
                .into_iter()
                .flatten()
                .collect(),
        }
    }

    /// Total differential `d = ∂ + ∂̄` from degree `k` to `k+1`, blocks ordered by `p`.
    fn total_differential(&self, k: i64) -> Matrix {
        let offsets = |deg: i64| -> Vec<usize> {
            let mut acc = 0;
            (0..=deg.max(-1))
                .map(|p| {
                    let o = acc;
                    acc += self.space(p, deg - p);
                    o
                })
                .collect()
        };
        let src = offsets(k);
        let dst = offsets(k + 1);
        let mut d = Matrix::zeros(self.total_dim(k + 1), self.total_dim(k));
        for p in 0..=k {
            let q = k - p;
            if self.space(p, q) == 0 {
                continue;
            }
            let col = src[p as usize];
            if self.space(p + 1, q) > 0 {
                d.put_block(dst[p as usize + 1], col, &self.del(p, q));
            }
            if self.space(p, q + 1) > 0 {
                d.put_block(dst[p as usize], col, &self.delbar(p, q));
            }
        }
        d
    }
}

/// Checks matrix shapes and the identities `∂² = 0`, `∂̄² = 0`, `∂∂̄ + ∂̄∂ = 0`.
pub fn validate_bicomplex(b: &Bicomplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = b.n as i64;
    for p in 0..=n {
        for q in 0..=n {
            let i = b.idx(p, q).expect("in range");
            let (del, delbar) = (&b.del[i], &b.delbar[i]);
            let src = b.space(p, q);
            if (del.rows(), del.cols()) != (b.space(p + 1, q), src) {
                report.push(
                    CHECK_SHAPE,
                    format!(
                        "∂ on ({p},{q}) is {}x{}, expected {}x{src}",
                        del.rows(),
                        del.cols(),
                        b.space(p + 1, q)
                    ),
                );
            }
            if (delbar.rows(), delbar.cols()) != (b.space(p, q + 1), src) {
                report.push(
                    CHECK_SHAPE,
                    format!(
                        "∂̄ on ({p},{q}) is {}x{}, expected {}x{src}",
                        delbar.rows(),
                        delbar.cols(),
                        b.space(p, q + 1)
                    ),
                );
            }
        }
    }
    if !report.ok() {
        return report;
    }
    for p in 0..=n {
        for q in 0..=n {
            if !b.del(p + 1, q).mul(&b.del(p, q)).is_zero() {
                report.push(CHECK_DEL_SQUARED, format!("∂∘∂ ≠ 0 on ({p},{q})"));
            }
            if !b.delbar(p, q + 1).mul(&b.delbar(p, q)).is_zero() {
                report.push(CHECK_DELBAR_SQUARED, format!("∂̄∘∂̄ ≠ 0 on ({p},{q})"));
            }
            let a = b.del(p, q + 1).mul(&b.delbar(p, q));
            let c = b.delbar(p + 1, q).mul(&b.del(p, q));
            if !a.add(&c).is_zero() {
                report.push(CHECK_ANTICOMMUTE, format!("∂∂̄ + ∂̄∂ ≠ 0 on ({p},{q})"));
            }
        }
    }
    report
}

fn ensure_valid(b: &Bicomplex) -> Result<(), BicomplexError> {
    let report = validate_bicomplex(b);
    if report.ok() {
        Ok(())
    } else {
        Err(BicomplexError::Invalid(report))
    }
}

/// One term `coeff · x_left ∧ x_right` of `dφ_target`, with 1-based generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub target: usize,
    pub left: usize,
    pub right: usize,
    pub coeff: GaussRational,
}

impl Term {
    pub fn new(target: usize, left: usize, right: usize, coeff: GaussRational) -> Self {
        Self {
            target,
            left,
            right,
            coeff,
        }
    }
}

/// Structure equations of a complex Lie algebra with an invariant complex structure,
/// written on a coframe `φ_1..φ_m` of `(1,0)`-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureEquations {
    pub name: String,
    pub dim: usize,
    /// `(2,0)` terms: `coeff · φ_left ∧ φ_right`.
    pub terms20: Vec<Term>,
    /// `(1,1)` terms: `coeff · φ_left ∧ φ̄_right`.
    pub terms11: Vec<Term>,
    /// `(0,2)` terms: `coeff · φ̄_left ∧ φ̄_right`. Must be empty for an integrable structure.
    pub terms02: Vec<Term>,
}

impl StructureEquations {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
            terms20: Vec::new(),
            terms11: Vec::new(),
            terms02: Vec::new(),
        }
    }

    /// The abelian algebra of dimension `m`: every differential vanishes.
    pub fn abelian(m: usize) -> Self {
        Self::new(format!("abelian:{m}"), m)
    }
}

/// Sparse element of the exterior algebra: generator bitmask -> coefficient.
type Form = BTreeMap<u32, GaussRational>;

/// Sign of `x_A ∧ x_B` relative to the sorted monomial of `A ∪ B`, for disjoint masks.
fn wedge_sign(a: u32, b: u32) -> bool {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if y >= 31 {
            0
        } else {
            a & !((1u32 << (y + 1)) - 1)
        };
        inversions += above.count_ones();
    }
    inversions % 2 == 1
}

fn accumulate(form: &mut Form, mask: u32, coeff: GaussRational) {
    let entry = form.entry(mask).or_insert_with(GaussRational::zero);
    *entry += &coeff;
    if entry.is_zero() {
        form.remove(&mask);
    }
}

/// Normalizes `coeff · x_u ∧ x_v` into a sorted monomial.
fn two_form(u: usize, v: usize, coeff: GaussRational) -> Option<(u32, GaussRational)> {
    match u.cmp(&v) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some(((1 << u) | (1 << v), coeff)),
        std::cmp::Ordering::Greater => Some(((1 << u) | (1 << v), -coeff)),
    }
}

/// Extends images of generators to the degree-one graded derivation on a monomial.
fn apply_derivation(images: &[Form], mask: u32) -> Form {
    let mut out = Form::new();
    let bits: Vec<u32> = (0..32).filter(|&g| mask & (1 << g) != 0).collect();
    for (j, &g) in bits.iter().enumerate() {
        let left = bits[..j].iter().fold(0u32, |acc, &x| acc | (1 << x));
        let right = bits[j + 1..].iter().fold(0u32, |acc, &x| acc | (1 << x));
        for (&w, c) in &images[g as usize] {
            if w & (left | right) != 0 {
                continue;
            }
            let negative = (j % 2 == 1) ^ wedge_sign(left, w) ^ wedge_sign(left | w, right);
            let coeff = if negative { -c } else { c.clone() };
            accumulate(&mut out, left | w | right, coeff);
        }
    }
    out
}

fn apply_to_form(images: &[Form], form: &Form) -> Form {
    let mut out = Form::new();
    for (&mask, c) in form {
        for (m2, c2) in apply_derivation(images, mask) {
            accumulate(&mut out, m2, c * &c2);
        }
    }
    out
}

/// Lexicographically ordered `k`-subsets of `0..m`, as bitmasks.
fn subsets(m: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, m: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..m {
            if m - i < k {
                break;
            }
            rec(i + 1, m, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, 0, &mut out);
    out
}

fn generator_name(g: usize, m: usize) -> String {
    if g < m {
        format!("φ_{}", g + 1)
    } else {
        format!("φ̄_{}", g - m + 1)
    }
}

/// Builds the Chevalley-Eilenberg double complex of the structure equations.
///
/// Generators `0..m` are `φ_1..φ_m` and `m..2m` are `φ̄_1..φ̄_m`; the basis of `A^{p,q}`
/// is `φ_I ∧ φ̄_J` with `(I, J)` in lexicographic order. `∂` and `∂̄` are the bidegree
/// components of `d` extended as graded derivations, and `d² = 0` is checked on every
/// generator before any matrix is assembled.
pub fn build_ce_bicomplex(s: &StructureEquations) -> Result<Bicomplex, BicomplexError> {
    let m = s.dim;
    if m > 16 {
        return Err(BicomplexError::Index(format!("dimension {m} exceeds 16")));
    }
    if let Some(t) = s.terms02.first() {
        return Err(BicomplexError::NotIntegrable(format!(
            "dφ_{} has a (0,2)-component {}·φ̄_{}∧φ̄_{}",
            t.target, t.coeff, t.left, t.right
        )));
    }
    for t in s.terms20.iter().chain(&s.terms11) {
        for idx in [t.target, t.left, t.right] {
            if idx == 0 || idx > m {
                return Err(BicomplexError::Index(format!(
                    "generator index {idx} outside 1..={m}"
                )));
            }
        }
    }

    let mut del_img = vec![Form::new(); 2 * m];
    let mut delbar_img = vec![Form::new(); 2 * m];
    for t in &s.terms20 {
        let (a, b, c) = (t.target - 1, t.left - 1, t.right - 1);
        if let Some((w, k)) = two_form(b, c, t.coeff.clone()) {
            accumulate(&mut del_img[a], w, k);
        }
        if let Some((w, k)) = two_form(m + b, m + c, t.coeff.conj()) {
            accumulate(&mut delbar_img[m + a], w, k);
        }
    }
    for t in &s.terms11 {
        let (a, b, c) = (t.target - 1, t.left - 1, t.right - 1);
        if let Some((w, k)) = two_form(b, m + c, t.coeff.clone()) {
            accumulate(&mut delbar_img[a], w, k);
        }
        // conjugate of φ_b ∧ φ̄_c is φ̄_b ∧ φ_c
        if let Some((w, k)) = two_form(m + b, c, t.coeff.conj()) {
            accumulate(&mut del_img[m + a], w, k);
        }
    }

    let d_img: Vec<Form> = del_img
        .iter()
        .zip(&delbar_img)
        .map(|(x, y)| {
            let mut f = x.clone();
            for (&w, c) in y {
                accumulate(&mut f, w, c.clone());
            }
            f
        })
        .collect();
    for (g, dg) in d_img.iter().enumerate() {
        let ddg = apply_to_form(&d_img, dg);
        if !ddg.is_empty() {
            return Err(BicomplexError::JacobiViolation(format!(
                "d(d{}) ≠ 0",
                generator_name(g, m)
            )));
        }
    }

    let basis: Vec<Vec<u32>> = (0..=m)
        .flat_map(|p| (0..=m).map(move |q| (p, q)))
        .map(|(p, q)| {
            let js = subsets(m, q);
            subsets(m, p)
                .into_iter()
                .flat_map(|i| js.iter().map(move |&j| i | (j << m)))
                .collect()
        })
        .collect();
    let position: HashMap<u32, usize> = basis
        .iter()
        .flat_map(|b| b.iter().enumerate().map(|(i, &mask)| (mask, i)))
        .collect();
    let at = |p: usize, q: usize| -> Option<&Vec<u32>> {
        (p <= m && q <= m).then(|| &basis[p * (m + 1) + q])
    };

    let matrix = |images: &[Form], p: usize, q: usize, tp: usize, tq: usize| -> Matrix {
        let src = at(p, q).expect("source in range");
        let rows = at(tp, tq).map_or(0, Vec::len);
        let mut mat = Matrix::zeros(rows, src.len());
        if rows == 0 {
            return mat;
        }
        for (col, &mask) in src.iter().enumerate() {
            for (w, c) in apply_derivation(images, mask) {
                mat.set(position[&w], col, c);
            }
        }
        mat
    };

    let spaces = (0..=m)
        .map(|p| (0..=m).map(|q| at(p, q).map_or(0, Vec::len)).collect())
        .collect();
    let del = (0..=m)
        .map(|p| (0..=m).map(|q| matrix(&del_img, p, q, p + 1, q)).collect())
        .collect();
    let delbar = (0..=m)
        .map(|p| {
            (0..=m)
                .map(|q| matrix(&delbar_img, p, q, p, q + 1))
                .collect()
        })
        .collect();
    Bicomplex::new(m, spaces, del, delbar)
}

pub(crate) fn betti_unchecked(b: &Bicomplex) -> BettiVector {
    let n = b.n as i64;
    let ranks: Vec<usize> = (0..=2 * n)
        .map(|k| exact_rank(&b.total_differential(k)))
        .collect();
    let values = (0..=2 * n)
        .map(|k| {
            let prev = if k > 0 { ranks[k as usize - 1] } else { 0 };
            (b.total_dim(k) - ranks[k as usize] - prev) as i64
        })
        .collect();
    BettiVector::new(b.n, values).expect("2n+1 entries")
}

fn table(b: &Bicomplex, f: impl Fn(i64, i64) -> usize) -> BigradedTable {
    BigradedTable::from_fn(b.n, |p, q| f(p as i64, q as i64) as i64)
}

pub(crate) fn dolbeault_unchecked(b: &Bicomplex) -> BigradedTable {
    table(b, |p, q| {
        b.space(p, q) - exact_rank(&b.delbar(p, q)) - exact_rank(&b.delbar(p, q - 1))
    })
}

pub(crate) fn del_cohomology_unchecked(b: &Bicomplex) -> BigradedTable {
    table(b, |p, q| {
        b.space(p, q) - exact_rank(&b.del(p, q)) - exact_rank(&b.del(p - 1, q))
    })
}

pub(crate) fn bott_chern_unchecked(b: &Bicomplex) -> BigradedTable {
    table(b, |p, q| {
        let closed = b.space(p, q) - exact_rank(&b.del(p, q).vstack(&b.delbar(p, q)));
        let ddbar = b.del(p - 1, q).mul(&b.delbar(p - 1, q - 1));
        closed - exact_rank(&ddbar)
    })
}

pub(crate) fn aeppli_unchecked(b: &Bicomplex) -> BigradedTable {
    table(b, |p, q| {
        let ddbar = b.del(p, q + 1).mul(&b.delbar(p, q));
        let kernel = b.space(p, q) - exact_rank(&ddbar);
        let images = b.del(p - 1, q).hstack(&b.delbar(p, q - 1));
        kernel - exact_rank(&images)
    })
}

/// `b_k = dim ker d - rank d` on total degree `k`.
pub fn betti_numbers(b: &Bicomplex) -> Result<BettiVector, BicomplexError> {
    ensure_valid(b)?;
    Ok(betti_unchecked(b))
}

/// `h_∂̄^{p,q} = dim ker ∂̄ - rank ∂̄` at `(p,q)`.
pub fn dolbeault_numbers(b: &Bicomplex) -> Result<BigradedTable, BicomplexError> {
    ensure_valid(b)?;
    Ok(dolbeault_unchecked(b))
}

/// `h_∂^{p,q}`, the `∂`-cohomology dimensions indexed by the original bidegrees.
pub fn del_cohomology_numbers(b: &Bicomplex) -> Result<BigradedTable, BicomplexError> {
    ensure_valid(b)?;
    Ok(del_cohomology_unchecked(b))
}

/// `h_BC^{p,q} = dim(ker ∂ ∩ ker ∂̄) - rank(∂∂̄: A^{p-1,q-1} -> A^{p,q})`.
pub fn bott_chern_numbers(b: &Bicomplex) -> Result<BigradedTable, BicomplexError> {
    ensure_valid(b)?;
    Ok(bott_chern_unchecked(b))
}

/// `h_A^{p,q} = dim ker ∂∂̄ - dim(im ∂ + im ∂̄)` at `(p,q)`.
pub fn aeppli_numbers(b: &Bicomplex) -> Result<BigradedTable, BicomplexError> {
    ensure_valid(b)?;
    Ok(aeppli_unchecked(b))
}

/// Every cohomology table of a bicomplex plus the resulting degrees and verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySummary {
    pub name: String,
    pub n: usize,
    pub betti: BettiVector,
    pub dolbeault: BigradedTable,
    pub bott_chern: BigradedTable,
    pub aeppli: BigradedTable,
    pub delta: DeltaVector,
    pub ddbar_verdict: bool,
}

impl CohomologySummary {
    pub fn model(&self) -> ManifoldModel {
        ManifoldModel::new(
            self.name.clone(),
            self.betti.clone(),
            self.bott_chern.clone(),
        )
        .expect("tables share dimension")
    }
}

pub fn summarize(b: &Bicomplex, name: &str) -> Result<CohomologySummary, BicomplexError> {
    ensure_valid(b)?;
    let betti = betti_unchecked(b);
    let bott_chern = bott_chern_unchecked(b);
    let model = ManifoldModel::new(name, betti.clone(), bott_chern.clone())
        .expect("tables share dimension");
    let delta = diamond::delta(&model);
    let ddbar_verdict = diamond::is_ddbar(&model, Mode::Lenient).expect("lenient never fails");
    Ok(CohomologySummary {
        name: name.to_string(),
        n: b.n,
        betti,
        dolbeault: dolbeault_unchecked(b),
        bott_chern,
        aeppli: aeppli_unchecked(b),
        delta,
        ddbar_verdict,
    })
}

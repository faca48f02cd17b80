//! Cohomological models of compact complex manifolds, their non-Kählerness degrees
//! and the ddbar decision.
//!
//! A [`ManifoldModel`] carries only the data the degrees depend on: the complex
//! dimension `n`, the Betti numbers `b_0..b_{2n}` and the Bott-Chern numbers
//! `h_BC^{p,q}` for `0 <= p, q <= n`. The degree
//!
//! ```text
//! Δ^k = Σ_{p+q=k} h_BC^{p,q} + Σ_{p+q=2n-k} h_BC^{p,q} - 2 b_k
//! ```
//!
//! is nonnegative on every compact complex manifold and vanishes identically exactly
//! on ddbar-manifolds. Entries are stored signed so that the formula can be evaluated
//! on arbitrary tables, which is how non-realizable input is detected.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiamondError {
    #[error("shape-error: {0}")]
    Shape(String),
    #[error("non-realizable: Δ^{k} = {value} < 0")]
    NonRealizable { k: usize, value: i64 },
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
}

/// Betti numbers `b_0..b_{2n}` of a complex `n`-dimensional manifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiVector {
    n: usize,
    b: Vec<i64>,
}

impl BettiVector {
    pub fn new(n: usize, b: Vec<i64>) -> Result<Self, DiamondError> {
        if b.len() != 2 * n + 1 {
            return Err(DiamondError::Shape(format!(
                "betti vector of dimension {n} needs {} entries, got {}",
                2 * n + 1,
                b.len()
            )));
        }
        Ok(Self { n, b })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            b: vec![0; 2 * n + 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `b_k`, reading 0 outside `[0, 2n]`.
    pub fn get(&self, k: i64) -> i64 {
        if k < 0 {
            return 0;
        }
        self.b.get(k as usize).copied().unwrap_or(0)
    }

    pub fn set(&mut self, k: usize, v: i64) {
        self.b[k] = v;
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.b
    }
}

/// A table `(p, q) -> h^{p,q}` for `0 <= p, q <= n`; lookups outside the square are 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigradedTable {
    n: usize,
    h: Vec<i64>,
}

impl BigradedTable {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            h: vec![0; (n + 1) * (n + 1)],
        }
    }

    /// Builds a table from rows indexed by `p`, each holding the entries for `q = 0..=n`.
    pub fn from_rows(n: usize, rows: Vec<Vec<i64>>) -> Result<Self, DiamondError> {
        if rows.len() != n + 1 || rows.iter().any(|r| r.len() != n + 1) {
            return Err(DiamondError::Shape(format!(
                "bigraded table of dimension {n} needs {0}x{0} entries",
                n + 1
            )));
        }
        Ok(Self {
            n,
            h: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut t = Self::zeros(n);
        for p in 0..=n {
            for q in 0..=n {
                t.set(p, q, f(p, q));
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: i64, q: i64) -> i64 {
        let n = self.n as i64;
        if p < 0 || q < 0 || p > n || q > n {
            return 0;
        }
        self.h[p as usize * (self.n + 1) + q as usize]
    }

    pub fn set(&mut self, p: usize, q: usize, v: i64) {
        self.h[p * (self.n + 1) + q] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.h.chunks(self.n + 1).map(<[i64]>::to_vec).collect()
    }

    /// `Σ_{p+q=k} h^{p,q}`.
    pub fn antidiagonal_sum(&self, k: i64) -> i64 {
        (0..=k).map(|p| self.get(p, k - p)).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |p, q| self.get(q as i64, p as i64))
    }
}

/// Cohomological model of a compact connected complex manifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ManifoldModel {
    pub name: String,
    betti: BettiVector,
    bott_chern: BigradedTable,
}

impl ManifoldModel {
    pub fn new(
        name: impl Into<String>,
        betti: BettiVector,
        bott_chern: BigradedTable,
    ) -> Result<Self, DiamondError> {
        if betti.dim() != bott_chern.dim() {
            return Err(DiamondError::Shape(format!(
                "betti dimension {} does not match bott-chern dimension {}",
                betti.dim(),
                bott_chern.dim()
            )));
        }
        Ok(Self {
            name: name.into(),
            betti,
            bott_chern,
        })
    }

    pub fn dim(&self) -> usize {
        self.betti.dim()
    }

    pub fn betti(&self) -> &BettiVector {
        &self.betti
    }

    pub fn bott_chern(&self) -> &BigradedTable {
        &self.bott_chern
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// The non-Kählerness degrees `Δ^0..Δ^{2n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaVector {
    n: usize,
    delta: Vec<i64>,
}

impl DeltaVector {
    pub fn new(n: usize, delta: Vec<i64>) -> Result<Self, DiamondError> {
        if delta.len() != 2 * n + 1 {
            return Err(DiamondError::Shape(format!(
                "delta vector of dimension {n} needs {} entries, got {}",
                2 * n + 1,
                delta.len()
            )));
        }
        Ok(Self { n, delta })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Δ^k`, reading 0 outside `[0, 2n]`.
    pub fn get(&self, k: i64) -> i64 {
        if k < 0 {
            return 0;
        }
        self.delta.get(k as usize).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.delta.iter().all(|&d| d == 0)
    }

    /// First degree with a negative entry.
    pub fn first_negative(&self) -> Option<(usize, i64)> {
        self.delta.iter().copied().enumerate().find(|&(_, d)| d < 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, check: &str, detail: impl Into<String>) {
        self.violations.push(Violation {
            check: check.to_string(),
            detail: detail.into(),
        });
    }

    pub fn has(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.check, v.detail))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Decision mode for [`is_ddbar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Refuse models that fail [`validate_model`].
    #[default]
    Strict,
    /// Only answer whether the degree formula vanishes identically.
    Lenient,
}

pub const CHECK_NONNEGATIVE: &str = "nonnegative";
pub const CHECK_CONNECTED: &str = "connected";
pub const CHECK_POINCARE: &str = "poincare-duality";
pub const CHECK_CONJUGATION: &str = "conjugation-symmetry";
pub const CHECK_BC_BOTTOM: &str = "bc-bottom";
pub const CHECK_BC_TOP: &str = "bc-top";
pub const CHECK_DELTA: &str = "delta-nonnegative";

/// Runs every realizability check and reports all violations; never aborts.
pub fn validate_model(m: &ManifoldModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = m.dim() as i64;
    let b = m.betti();
    let h = m.bott_chern();

    for (k, &v) in b.as_slice().iter().enumerate() {
        if v < 0 {
            report.push(CHECK_NONNEGATIVE, format!("b_{k} = {v}"));
        }
    }
    for p in 0..=n {
        for q in 0..=n {
            let v = h.get(p, q);
            if v < 0 {
                report.push(CHECK_NONNEGATIVE, format!("h_BC({p},{q}) = {v}"));
            }
        }
    }
    if b.get(0) != 1 {
        report.push(CHECK_CONNECTED, format!("b_0 = {}", b.get(0)));
    }
    for k in 0..n {
        let (lo, hi) = (b.get(k), b.get(2 * n - k));
        if lo != hi {
            report.push(
                CHECK_POINCARE,
                format!("b_{k} = {lo} but b_{} = {hi}", 2 * n - k),
            );
        }
    }
    for p in 0..=n {
        for q in p + 1..=n {
            if h.get(p, q) != h.get(q, p) {
                report.push(
                    CHECK_CONJUGATION,
                    format!(
                        "h_BC({p},{q}) = {} but h_BC({q},{p}) = {}",
                        h.get(p, q),
                        h.get(q, p)
                    ),
                );
            }
        }
    }
    if h.get(0, 0) != 1 {
        report.push(CHECK_BC_BOTTOM, format!("h_BC(0,0) = {}", h.get(0, 0)));
    }
    if h.get(n, n) != 1 {
        report.push(CHECK_BC_TOP, format!("h_BC({n},{n}) = {}", h.get(n, n)));
    }
    for (k, &d) in delta(m).as_slice().iter().enumerate() {
        if d < 0 {
            report.push(CHECK_DELTA, format!("Δ^{k} = {d}"));
        }
    }
    report
}

/// Evaluates the defining formula of the non-Kählerness degrees for `k = 0..=2n`.
pub fn delta(m: &ManifoldModel) -> DeltaVector {
    let n = m.dim() as i64;
    let h = m.bott_chern();
    let delta = (0..=2 * n)
        .map(|k| h.antidiagonal_sum(k) + h.antidiagonal_sum(2 * n - k) - 2 * m.betti().get(k))
        .collect();
    DeltaVector { n: m.dim(), delta }
}

/// Decides the ddbar-property: true iff every degree vanishes.
pub fn is_ddbar(m: &ManifoldModel, mode: Mode) -> Result<bool, DiamondError> {
    let d = delta(m);
    if mode == Mode::Strict {
        if let Some((k, value)) = d.first_negative() {
            return Err(DiamondError::NonRealizable { k, value });
        }
        let report = validate_model(m);
        if !report.ok() {
            return Err(DiamondError::Invalid(report));
        }
    }
    Ok(d.is_zero())
}

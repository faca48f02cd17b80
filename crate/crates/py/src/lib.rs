use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ddbar::bicomplex::CohomologySummary;
use ddbar::constructions;
use ddbar::diamond::{self, BettiVector, BigradedTable, DeltaVector, ManifoldModel, Mode};
use ddbar::registry::{self, Builtin};
use ddbar::verify::{self, Suite, VerifyOptions};
use ddbar::{exact_rank, Matrix};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Cohomological model of a compact complex manifold.
#[pyclass(name = "Model", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyModel {
    inner: ManifoldModel,
}

impl From<ManifoldModel> for PyModel {
    fn from(inner: ManifoldModel) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(name: String, betti: Vec<i64>, bott_chern: Vec<Vec<i64>>) -> PyResult<Self> {
        let n = bott_chern
            .len()
            .checked_sub(1)
            .ok_or_else(|| err("empty bott_chern table"))?;
        let betti = BettiVector::new(n, betti).map_err(err)?;
        let table = BigradedTable::from_rows(n, bott_chern).map_err(err)?;
        Ok(ManifoldModel::new(name, betti, table).map_err(err)?.into())
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn betti(&self) -> Vec<i64> {
        self.inner.betti().as_slice().to_vec()
    }

    #[getter]
    fn bott_chern(&self) -> Vec<Vec<i64>> {
        self.inner.bott_chern().rows()
    }

    fn delta(&self) -> Vec<i64> {
        diamond::delta(&self.inner).as_slice().to_vec()
    }

    #[pyo3(signature = (strict = true))]
    fn is_ddbar(&self, strict: bool) -> PyResult<bool> {
        let mode = if strict { Mode::Strict } else { Mode::Lenient };
        diamond::is_ddbar(&self.inner, mode).map_err(err)
    }

    /// List of `(check, detail)` pairs; empty when the model passes every check.
    fn validate(&self) -> Vec<(String, String)> {
        diamond::validate_model(&self.inner)
            .violations
            .into_iter()
            .map(|v| (v.check, v.detail))
            .collect()
    }

    fn to_ddm(&self) -> String {
        registry::model_to_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(name={:?}, dim={})",
            self.inner.name,
            self.inner.dim()
        )
    }
}

fn delta_of(values: Vec<i64>) -> PyResult<DeltaVector> {
    if values.len().is_multiple_of(2) {
        return Err(err("a delta vector has odd length 2n+1"));
    }
    DeltaVector::new(values.len() / 2, values).map_err(err)
}

#[pyfunction]
fn builtin(name: &str) -> PyResult<PyModel> {
    Ok(registry::builtin_model(name).map_err(err)?.into())
}

#[pyfunction]
fn builtin_names() -> Vec<String> {
    registry::builtin_names()
}

#[pyfunction]
fn from_ddm(text: &str) -> PyResult<PyModel> {
    Ok(registry::model_from_str(text).map_err(err)?.into())
}

#[pyfunction]
fn projectivize(m: &PyModel, rank: i64) -> PyResult<PyModel> {
    Ok(constructions::projectivize(&m.inner, rank)
        .map_err(err)?
        .into())
}

#[pyfunction]
fn product_with_cpk(m: &PyModel, k: i64) -> PyResult<PyModel> {
    Ok(constructions::product_with_cpk(&m.inner, k)
        .map_err(err)?
        .into())
}

#[pyfunction]
#[pyo3(signature = (x, y, codim, strict = true))]
fn blow_up(x: &PyModel, y: &PyModel, codim: i64, strict: bool) -> PyResult<PyModel> {
    let out = if strict {
        constructions::blow_up_strict(&x.inner, &y.inner, codim)
    } else {
        constructions::blow_up(&x.inner, &y.inner, codim)
    };
    Ok(out.map_err(err)?.into())
}

#[pyfunction]
fn exceptional_divisor(y: &PyModel, codim: i64) -> PyResult<PyModel> {
    Ok(constructions::exceptional_divisor(&y.inner, codim)
        .map_err(err)?
        .into())
}

#[pyfunction]
fn heredity_lift(x: &PyModel, codim_y: i64, k: i64) -> PyResult<(PyModel, i64)> {
    let (ambient, codim) = constructions::heredity_lift(&x.inner, codim_y, k).map_err(err)?;
    Ok((ambient.into(), codim))
}

#[pyfunction]
fn delta_projectivize(delta: Vec<i64>, rank: i64) -> PyResult<Vec<i64>> {
    let dv = delta_of(delta)?;
    let n = dv.dim();
    let out = constructions::delta_projectivize(&dv, rank, n).map_err(err)?;
    Ok(out.as_slice().to_vec())
}

#[pyfunction]
fn delta_blow_up(dx: Vec<i64>, dy: Vec<i64>, codim: i64) -> PyResult<Vec<i64>> {
    let out = constructions::delta_blow_up(&delta_of(dx)?, &delta_of(dy)?, codim).map_err(err)?;
    Ok(out.as_slice().to_vec())
}

/// Evaluates a construction expression; relative `file:` paths resolve against the cwd.
#[pyfunction]
fn construct(expression: &str) -> PyResult<PyModel> {
    Ok(ddbar::expr::construct(expression, Path::new("."), true)
        .map_err(err)?
        .into())
}

fn summary_dict<'py>(py: Python<'py>, s: &CohomologySummary) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("name", &s.name)?;
    d.set_item("dim", s.n)?;
    d.set_item("betti", s.betti.as_slice().to_vec())?;
    d.set_item("dolbeault", s.dolbeault.rows())?;
    d.set_item("bott_chern", s.bott_chern.rows())?;
    d.set_item("aeppli", s.aeppli.rows())?;
    d.set_item("delta", s.delta.as_slice().to_vec())?;
    d.set_item("verdict", s.ddbar_verdict)?;
    Ok(d)
}

/// Runs the bicomplex engine on a `.ceq` document.
#[pyfunction]
fn ce_compute<'py>(py: Python<'py>, ceq: &str) -> PyResult<Bound<'py, PyDict>> {
    let s = registry::structure_from_str(ceq).map_err(err)?;
    let summary = registry::engine_summary(&s).map_err(err)?;
    summary_dict(py, &summary)
}

/// Runs the bicomplex engine on built-in structure equations (`iwasawa`, `abelian:3`, ...).
#[pyfunction]
fn ce_builtin<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
    let Builtin::Structure(s) = registry::builtin(name).map_err(err)? else {
        return Err(err(format!("'{name}' is not a structure-equation builtin")));
    };
    let summary = registry::engine_summary(&s).map_err(err)?;
    summary_dict(py, &summary)
}

/// Runs an invariant suite; returns `(passed, checks, failures)`.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0, count = 100))]
fn run_suite(suite: &str, seed: u64, count: usize) -> PyResult<(bool, usize, Vec<String>)> {
    let suite: Suite = suite.parse().map_err(err)?;
    let report = verify::run_suite(suite, VerifyOptions { seed, count }).map_err(err)?;
    Ok((report.ok(), report.checked, report.failures))
}

/// Exact rank of an integer matrix given as a list of rows.
#[pyfunction]
fn rank(rows: Vec<Vec<i64>>) -> PyResult<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(err("ragged matrix"));
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(exact_rank(&Matrix::from_i64(&refs)))
}

#[pymodule]
fn pyddbar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(builtin, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    m.add_function(wrap_pyfunction!(from_ddm, m)?)?;
    m.add_function(wrap_pyfunction!(projectivize, m)?)?;
    m.add_function(wrap_pyfunction!(product_with_cpk, m)?)?;
    m.add_function(wrap_pyfunction!(blow_up, m)?)?;
    m.add_function(wrap_pyfunction!(exceptional_divisor, m)?)?;
    m.add_function(wrap_pyfunction!(heredity_lift, m)?)?;
    m.add_function(wrap_pyfunction!(delta_projectivize, m)?)?;
    m.add_function(wrap_pyfunction!(delta_blow_up, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(ce_compute, m)?)?;
    m.add_function(wrap_pyfunction!(ce_builtin, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    Ok(())
}

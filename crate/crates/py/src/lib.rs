//! Python bindings for `thetaglue-core`.

use std::sync::Arc;

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use thetaglue_core::lattices::{self as lat, LatticeError, RangeReading};
use thetaglue_core::symexpand::{Role, SymPattern, SymSlot};
use thetaglue_core::{modforms, QExp, ThetaKind};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lattice_err(e: LatticeError) -> PyErr {
    match e {
        LatticeError::InvalidSpec(_) => value_err(e),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Truncated power series in `q^(1/4)`.
#[pyclass(name = "QSeries", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyQSeries(thetaglue_core::QSeries);

#[pymethods]
impl PyQSeries {
    /// Build from `(quarters, coefficient)` pairs, truncated at `trunc_quarters`.
    #[new]
    fn new(terms: Vec<(u32, BigInt)>, trunc_quarters: u32) -> Self {
        PyQSeries(thetaglue_core::QSeries::from_terms(terms.into_iter().map(|(e, c)| (QExp(e), c)), QExp(trunc_quarters)))
    }

    #[staticmethod]
    fn from_qs_text(text: &str) -> PyResult<Self> {
        thetaglue_core::QSeries::from_qs_text(text).map(PyQSeries).map_err(value_err)
    }

    #[getter]
    fn trunc_quarters(&self) -> u32 {
        self.0.trunc().quarters()
    }

    /// Nonzero terms as `(quarters, coefficient)`.
    fn terms(&self) -> Vec<(u32, BigInt)> {
        self.0.terms().map(|(e, c)| (e.quarters(), c.clone())).collect()
    }

    /// Coefficient of `q^n`.
    fn coeff(&self, n: u32) -> PyResult<BigInt> {
        self.0.coeff_at_power(n).map_err(value_err)
    }

    fn coeff_quarters(&self, e: u32) -> PyResult<BigInt> {
        self.0.coeff(QExp(e)).map_err(value_err)
    }

    fn agrees_with(&self, other: &PyQSeries) -> bool {
        self.0.agrees_with(&other.0)
    }

    /// Exponents (in quarters) where the two series differ.
    fn diff(&self, other: &PyQSeries) -> Vec<(u32, BigInt, BigInt)> {
        self.0.diff(&other.0).into_iter().map(|(e, a, b)| (e.quarters(), a, b)).collect()
    }

    fn truncate(&self, trunc_quarters: u32) -> Self {
        PyQSeries(self.0.truncate(QExp(trunc_quarters)))
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn to_qs_text(&self) -> String {
        self.0.to_qs_text()
    }

    fn __add__(&self, other: &PyQSeries) -> Self {
        PyQSeries(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyQSeries) -> Self {
        PyQSeries(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyQSeries) -> Self {
        PyQSeries(self.0.mul(&other.0))
    }

    fn __pow__(&self, n: u32, _modulo: Option<u32>) -> Self {
        PyQSeries(self.0.pow(n))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QSeries({})", self.0)
    }
}

/// Theta, `E4`, `Δ24`, `h_n` and `ρ_n` at one truncation order.
#[pyclass(name = "ModformCache", frozen)]
struct PyModformCache(Arc<modforms::ModformCache>);

#[pymethods]
impl PyModformCache {
    /// `order` is the truncation in integer powers of `q`.
    #[new]
    fn new(order: u32) -> PyResult<Self> {
        modforms::ModformCache::with_order(order).map(|c| PyModformCache(Arc::new(c))).map_err(value_err)
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.trunc().quarters() / 4
    }

    /// `theta(2)`, `theta(3)` or `theta(4)`.
    fn theta(&self, i: u8) -> PyResult<PyQSeries> {
        let kind = ThetaKind::from_index(i).ok_or_else(|| value_err(format!("no theta_{i}")))?;
        Ok(PyQSeries(self.0.theta(kind)))
    }

    fn e4(&self) -> PyQSeries {
        PyQSeries((*self.0.e4()).clone())
    }

    fn delta24(&self) -> PyQSeries {
        PyQSeries((*self.0.delta24()).clone())
    }

    fn h(&self, n: i64) -> PyResult<PyQSeries> {
        self.0.h(n).map(|s| PyQSeries((*s).clone())).map_err(value_err)
    }

    fn rho(&self, n: i64) -> PyResult<PyQSeries> {
        self.0.rho(n).map(|s| PyQSeries((*s).clone())).map_err(value_err)
    }

    fn tau(&self, m: u32) -> PyResult<BigInt> {
        self.0.tau(m).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("ModformCache(order={})", self.order())
    }
}

#[pyclass(name = "LatticeSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLatticeSpec(lat::LatticeSpec);

#[pymethods]
impl PyLatticeSpec {
    /// `family` is ODD_8M, EVEN_8M4 or FOUR_BLOCK.
    #[new]
    #[pyo3(signature = (family, m, epsilon = 0))]
    fn new(family: &str, m: Vec<i64>, epsilon: u8) -> PyResult<Self> {
        let family: lat::LatticeFamily = family.parse().map_err(lattice_err)?;
        lat::LatticeSpec::new(family, m, epsilon).map(PyLatticeSpec).map_err(lattice_err)
    }

    /// Parse the key=value text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        lat::LatticeSpec::parse(text).map(PyLatticeSpec).map_err(lattice_err)
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.0.family().name()
    }

    #[getter]
    fn m(&self) -> Vec<i64> {
        self.0.m().to_vec()
    }

    #[getter]
    fn epsilon(&self) -> u8 {
        self.0.epsilon()
    }

    #[getter]
    fn dims(&self) -> Vec<u32> {
        self.0.dims()
    }

    #[getter]
    fn rank(&self) -> u32 {
        self.0.rank()
    }

    #[getter]
    fn root_count(&self) -> u64 {
        self.0.root_count()
    }

    /// Glue generators as strings such as `(X1,X2,X2)`.
    fn generators(&self) -> Vec<String> {
        lat::glue::generators(&self.0).iter().map(ToString::to_string).collect()
    }

    fn glue_group(&self) -> Vec<String> {
        lat::glue_group(&self.0).iter().map(ToString::to_string).collect()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LatticeSpec({})", self.0)
    }
}

#[pyfunction]
fn theta_by_cosets(spec: &PyLatticeSpec, cache: &PyModformCache) -> PyResult<PyQSeries> {
    lat::theta_by_cosets(&spec.0, &cache.0).map(PyQSeries).map_err(lattice_err)
}

/// `reading` is "displayed" (default) or "derivation".
#[pyfunction]
#[pyo3(signature = (spec, cache, reading = "displayed"))]
fn theta_by_theorem(spec: &PyLatticeSpec, cache: &PyModformCache, reading: &str) -> PyResult<PyQSeries> {
    let reading: RangeReading = reading.parse().map_err(value_err)?;
    lat::theta_by_theorem_with(&spec.0, &cache.0, reading).map(PyQSeries).map_err(lattice_err)
}

/// Direct lattice-point count below `q^order`.
#[pyfunction]
fn theta_by_enumeration(spec: &PyLatticeSpec, order: u32) -> PyResult<PyQSeries> {
    lat::theta_by_enumeration(&spec.0, QExp::from_power(order)).map(PyQSeries).map_err(lattice_err)
}

/// `(integral, even, determinant)` with the determinant as a string.
#[pyfunction]
fn check_even_unimodular(spec: &PyLatticeSpec) -> (bool, bool, String) {
    let r = lat::check_even_unimodular(&spec.0);
    (r.integral, r.even, r.determinant.to_string())
}

fn slots(spec: Vec<(String, usize, i64)>) -> PyResult<SymPattern> {
    let mut out = Vec::with_capacity(spec.len());
    for (role, block_size, shift) in spec {
        let role = match role.as_str() {
            "h" => Role::H,
            "rho" => Role::Rho,
            other => return Err(value_err(format!("unknown role {other:?}"))),
        };
        if block_size == 0 {
            return Err(value_err("block size must be positive"));
        }
        out.push(SymSlot { role, block_size, shift });
    }
    Ok(SymPattern::new(out))
}

/// Summands of `sym{...}` given slots `(role, block_size, shift)`.
#[pyfunction]
fn sym_expand(pattern: Vec<(String, usize, i64)>) -> PyResult<Vec<String>> {
    let p = slots(pattern)?;
    let monos = p.expand(p.arity()).map_err(value_err)?;
    Ok(monos.iter().map(ToString::to_string).collect())
}

#[pyfunction]
fn sym_eval(pattern: Vec<(String, usize, i64)>, m: Vec<i64>, cache: &PyModformCache) -> PyResult<PyQSeries> {
    let p = slots(pattern)?;
    thetaglue_core::symexpand::sym_eval(&p, &m, &cache.0).map(PyQSeries).map_err(value_err)
}

#[pymodule]
fn thetaglue(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQSeries>()?;
    m.add_class::<PyModformCache>()?;
    m.add_class::<PyLatticeSpec>()?;
    m.add_function(wrap_pyfunction!(theta_by_cosets, m)?)?;
    m.add_function(wrap_pyfunction!(theta_by_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(theta_by_enumeration, m)?)?;
    m.add_function(wrap_pyfunction!(check_even_unimodular, m)?)?;
    m.add_function(wrap_pyfunction!(sym_expand, m)?)?;
    m.add_function(wrap_pyfunction!(sym_eval, m)?)?;
    Ok(())
}

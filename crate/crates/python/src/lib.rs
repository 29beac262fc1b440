//! Python bindings: symbols are passed as `Symbol` objects (or any string
//! accepted by `Symbol.parse`); structured results come back as dicts.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qc_toeplitz::circle_fourier::{coefficients, FourierSeries, GridFunction};
use qc_toeplitz::fredholm::winding_number;
use qc_toeplitz::oscillation::{bmo_profile, default_depth};
use qc_toeplitz::symbol::{compare_symbols, example_h, factorize, realize, ClassifyOptions, FactorOptions};
use qc_toeplitz::toeplitz::{finite_section, kernel_count_index_estimate};
use qc_toeplitz::transforms::hilbert;
use qc_toeplitz::{verify, CircleGrid, Error, SymbolSpec, Thresholds};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Validation { .. } | Error::Precondition { .. } => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn grid(size: usize) -> PyResult<CircleGrid> {
    CircleGrid::new(size).map_err(py_err)
}

fn pairs(s: &FourierSeries) -> Vec<(i64, Complex64)> {
    s.iter().collect()
}

/// A symbol tree on the circle.
#[pyclass(name = "Symbol", frozen, from_py_object)]
#[derive(Clone)]
struct PySymbol {
    spec: SymbolSpec,
}

#[pymethods]
impl PySymbol {
    /// Parses `char:n`, `trig:[n,re,im;...]`, `h:M[:scale]` or a JSON tree.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySymbol { spec: SymbolSpec::parse(text).map_err(py_err)? })
    }

    #[staticmethod]
    fn character(n: i64) -> Self {
        PySymbol { spec: SymbolSpec::char(n) }
    }

    #[staticmethod]
    fn trig(coeffs: Vec<(i64, Complex64)>) -> Self {
        PySymbol { spec: SymbolSpec::trig(&coeffs) }
    }

    #[staticmethod]
    #[pyo3(signature = (terms, scale = 1.0))]
    fn builtin_h(terms: usize, scale: f64) -> Self {
        PySymbol { spec: SymbolSpec::builtin_h(terms, scale) }
    }

    fn exp(&self) -> PyResult<Self> {
        let spec = SymbolSpec::exp(self.spec.clone());
        spec.validate().map_err(py_err)?;
        Ok(PySymbol { spec })
    }

    fn exp_i(&self) -> PyResult<Self> {
        let spec = SymbolSpec::exp_i(self.spec.clone());
        spec.validate().map_err(py_err)?;
        Ok(PySymbol { spec })
    }

    fn hilbert(&self) -> PyResult<Self> {
        let spec = SymbolSpec::hilbert(self.spec.clone());
        spec.validate().map_err(py_err)?;
        Ok(PySymbol { spec })
    }

    fn conjugate(&self) -> Self {
        PySymbol { spec: SymbolSpec::conjugate(self.spec.clone()) }
    }

    fn __mul__(&self, other: &PySymbol) -> Self {
        PySymbol { spec: SymbolSpec::product(vec![self.spec.clone(), other.spec.clone()]) }
    }

    fn is_real(&self) -> bool {
        self.spec.is_real()
    }

    fn to_json(&self) -> String {
        self.spec.to_json()
    }

    /// Values on the uniform grid of `size` points.
    #[pyo3(signature = (size = 1024))]
    fn samples(&self, size: usize) -> PyResult<Vec<Complex64>> {
        Ok(self.realize(size)?.into_values())
    }

    fn __repr__(&self) -> String {
        format!("Symbol({})", self.spec.to_json())
    }
}

impl PySymbol {
    fn realize(&self, size: usize) -> PyResult<GridFunction> {
        realize(&self.spec, grid(size)?, &Thresholds::default()).map_err(py_err)
    }
}

fn symbol(obj: &Bound<'_, PyAny>) -> PyResult<PySymbol> {
    if let Ok(s) = obj.extract::<PySymbol>() {
        return Ok(s);
    }
    let text: String = obj.extract()?;
    PySymbol::parse(&text)
}

/// Fourier coefficients `[(n, a(n))]`, `|n| <= degree`.
#[pyfunction]
#[pyo3(signature = (sym, degree = 16, size = 1024))]
fn fourier_coefficients(sym: &Bound<'_, PyAny>, degree: usize, size: usize) -> PyResult<Vec<(i64, Complex64)>> {
    let f = symbol(sym)?.realize(size)?;
    Ok(pairs(&coefficients(&f, degree).map_err(py_err)?))
}

/// Coefficients of the Hilbert transform (multiplier `-i·sgn n`).
#[pyfunction]
#[pyo3(signature = (sym, degree = 16, size = 1024))]
fn hilbert_coefficients(sym: &Bound<'_, PyAny>, degree: usize, size: usize) -> PyResult<Vec<(i64, Complex64)>> {
    let f = symbol(sym)?.realize(size)?;
    Ok(pairs(&hilbert(&coefficients(&f, degree).map_err(py_err)?)))
}

#[pyfunction]
#[pyo3(signature = (sym, size = 1024, radius = None))]
fn winding(sym: &Bound<'_, PyAny>, size: usize, radius: Option<f64>) -> PyResult<i64> {
    let f = symbol(sym)?.realize(size)?;
    Ok(winding_number(&f, radius, &Thresholds::default()).map_err(py_err)?.winding)
}

/// Fredholm index of the Toeplitz operator with this symbol.
#[pyfunction]
#[pyo3(signature = (sym, size = 1024, radius = None))]
fn operator_index(sym: &Bound<'_, PyAny>, size: usize, radius: Option<f64>) -> PyResult<i64> {
    Ok(-winding(sym, size, radius)?)
}

#[pyfunction]
#[pyo3(signature = (sym, degree = 64, size = 1024))]
fn factor<'py>(py: Python<'py>, sym: &Bound<'py, PyAny>, degree: usize, size: usize) -> PyResult<Bound<'py, PyAny>> {
    let f = symbol(sym)?.realize(size)?;
    let fac = factorize(&f, FactorOptions::new(degree), &Thresholds::default()).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("winding", fac.winding)?;
    d.set_item("residual", fac.residual)?;
    d.set_item("unimodularity_defect", fac.unimodularity_defect)?;
    d.set_item("log_modulus", pairs(&fac.log_modulus))?;
    d.set_item("phase", pairs(&fac.phase))?;
    Ok(d.into_any())
}

/// `[(arc_length, worst_oscillation)]` from the full circle down.
#[pyfunction]
#[pyo3(signature = (sym, size = 1024, depth = None))]
fn oscillation_profile(sym: &Bound<'_, PyAny>, size: usize, depth: Option<usize>) -> PyResult<Vec<(f64, f64)>> {
    let f = symbol(sym)?.realize(size)?;
    let p = bmo_profile(&f, depth.unwrap_or_else(|| default_depth(size))).map_err(py_err)?;
    Ok(p.levels.iter().map(|l| (l.arc_length, l.worst_oscillation)).collect())
}

#[pyfunction]
#[pyo3(signature = (sym, size = 1024))]
fn vmo_consistent(sym: &Bound<'_, PyAny>, size: usize) -> PyResult<bool> {
    let f = symbol(sym)?.realize(size)?;
    Ok(bmo_profile(&f, default_depth(size)).map_err(py_err)?.vmo_verdict().consistent)
}

/// `"same"`, `"different"` or `"inconclusive"`.
#[pyfunction]
#[pyo3(signature = (first, second, size = 512, degree = 32))]
fn compare(first: &Bound<'_, PyAny>, second: &Bound<'_, PyAny>, size: usize, degree: usize) -> PyResult<String> {
    let f1 = symbol(first)?.realize(size)?;
    let f2 = symbol(second)?.realize(size)?;
    let c = compare_symbols(&f1, &f2, ClassifyOptions::new(degree), &Thresholds::default()).map_err(py_err)?;
    let v = serde_json::to_value(c.decision.relation).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(v.as_str().unwrap_or_default().to_string())
}

#[pyfunction]
#[pyo3(signature = (terms, size = None))]
fn example_h_summary<'py>(py: Python<'py>, terms: usize, size: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let size = size.unwrap_or_else(|| (4 * terms + 2).next_power_of_two().max(1024));
    let e = example_h(terms, grid(size)?).map_err(py_err)?;
    to_dict(py, &e.summary())
}

/// Spectral norm of the `n × n` section of the symbol's Toeplitz matrix.
#[pyfunction]
#[pyo3(signature = (sym, n, degree = 16, size = 1024))]
fn section_norm(sym: &Bound<'_, PyAny>, n: usize, degree: usize, size: usize) -> PyResult<f64> {
    let f = symbol(sym)?.realize(size)?;
    let s = coefficients(&f, degree).map_err(py_err)?;
    Ok(finite_section(&s, n).map_err(py_err)?.norm())
}

/// Singular values below `eps` of the `n × n` section.
#[pyfunction]
#[pyo3(signature = (sym, n, eps = 1e-6, degree = 16, size = 1024))]
fn kernel_count(sym: &Bound<'_, PyAny>, n: usize, eps: f64, degree: usize, size: usize) -> PyResult<usize> {
    let f = symbol(sym)?.realize(size)?;
    let s = coefficients(&f, degree).map_err(py_err)?;
    let s = s.with_degree(s.iter().filter(|(_, c)| c.norm() > 1e-14).map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0));
    Ok(kernel_count_index_estimate(&s, n, eps, &Thresholds::default()).map_err(py_err)?.count)
}

/// Runs one acceptance criterion (1–8) and returns its outcome.
#[pyfunction]
#[pyo3(signature = (id, seed = verify::DEFAULT_SEED))]
fn run_criterion<'py>(py: Python<'py>, id: u8, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let outcome = match id {
        1 => verify::criterion_1(seed),
        2 => verify::criterion_2(seed),
        3 => verify::criterion_3(seed),
        4 => verify::criterion_4(seed),
        5 => verify::criterion_5(seed),
        6 => verify::criterion_6(),
        7 => verify::criterion_7(seed),
        8 => verify::criterion_8(seed),
        _ => return Err(PyValueError::new_err(format!("no criterion {id}"))),
    }
    .map_err(py_err)?;
    to_dict(py, &outcome)
}

#[pymodule]
fn qctoeplitz(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySymbol>()?;
    m.add_function(wrap_pyfunction!(fourier_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(winding, m)?)?;
    m.add_function(wrap_pyfunction!(operator_index, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(oscillation_profile, m)?)?;
    m.add_function(wrap_pyfunction!(vmo_consistent, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(example_h_summary, m)?)?;
    m.add_function(wrap_pyfunction!(section_norm, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_count, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    Ok(())
}

//! Python bindings: `import pyfpconv`.
//!
//! Floats cross the boundary as Python `float`; with `format="f32"` they are
//! narrowed to binary32 first.

use fpconv::datasets::{self, DEFAULT_SEED};
use fpconv::harness::{self, Algorithm, Checks, Scope};
use fpconv::render::render_decoded;
use fpconv::{decode, DecimalFP, DecodedFloat, Error, FloatClass, FloatFormat, RenderPolicy};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn format_of(name: &str) -> PyResult<FloatFormat> {
    match name {
        "f32" | "binary32" => Ok(FloatFormat::BINARY32),
        "f64" | "binary64" => Ok(FloatFormat::BINARY64),
        _ => Err(PyValueError::new_err(format!("unknown format {name:?}, expected f32 or f64"))),
    }
}

fn bits_of(value: f64, format: FloatFormat) -> u64 {
    if format == FloatFormat::BINARY32 {
        (value as f32).to_bits() as u64
    } else {
        value.to_bits()
    }
}

fn decoded(value: f64, format: &str) -> PyResult<DecodedFloat> {
    let format = format_of(format)?;
    Ok(decode(bits_of(value, format), format))
}

fn algorithm(name: &str) -> PyResult<Algorithm> {
    Algorithm::from_name(name).map_err(py_err)
}

fn policy(name: &str) -> PyResult<RenderPolicy> {
    RenderPolicy::from_name(name).map_err(py_err)
}

fn class_name(class: FloatClass) -> &'static str {
    match class {
        FloatClass::Zero => "zero",
        FloatClass::Subnormal => "subnormal",
        FloatClass::Normal => "normal",
        FloatClass::Infinity => "infinity",
        FloatClass::NaN => "nan",
    }
}

/// A float decoded as `(-1)^negative * m * 2^p`.
#[pyclass(name = "Decoded", frozen, get_all)]
struct PyDecoded {
    negative: bool,
    m: u64,
    p: i32,
    class_: &'static str,
    format: &'static str,
}

#[pymethods]
impl PyDecoded {
    fn __repr__(&self) -> String {
        let sign = if self.negative { "-" } else { "" };
        format!("Decoded({sign}{} * 2^{}, {}, {})", self.m, self.p, self.class_, self.format)
    }
}

/// A decimal `(-1)^negative * w * 10^q`; `w` is kept as its digit string.
#[pyclass(name = "Decimal", frozen)]
struct PyDecimal {
    negative: bool,
    w: String,
    #[pyo3(get)]
    q: i32,
    #[pyo3(get)]
    digits: u32,
}

impl PyDecimal {
    fn from_decimal(dec: &DecimalFP) -> Self {
        PyDecimal {
            negative: dec.sign.is_negative(),
            w: dec.w.to_string(),
            q: dec.q,
            digits: fpconv::significant_digits(dec),
        }
    }
}

#[pymethods]
impl PyDecimal {
    #[getter]
    fn negative(&self) -> bool {
        self.negative
    }

    #[getter]
    fn w<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        py.import("builtins")?.getattr("int")?.call1((self.w.as_str(),))
    }

    fn __repr__(&self) -> String {
        let sign = if self.negative { "-" } else { "" };
        format!("Decimal({sign}{}e{})", self.w, self.q)
    }
}

#[pyfunction]
#[pyo3(name = "decode", signature = (value, format = "f64"))]
fn py_decode(value: f64, format: &str) -> PyResult<PyDecoded> {
    let d = decoded(value, format)?;
    Ok(PyDecoded {
        negative: d.sign.is_negative(),
        m: d.m,
        p: d.p,
        class_: class_name(d.class),
        format: d.format.name(),
    })
}

/// Shortest round-tripping digits of `value`.
#[pyfunction]
#[pyo3(signature = (value, format = "f64", algo = "fastpath"))]
fn convert(value: f64, format: &str, algo: &str) -> PyResult<PyDecimal> {
    let d = decoded(value, format)?;
    let dec = algorithm(algo)?.convert(&d).map_err(py_err)?;
    Ok(PyDecimal::from_decimal(&dec))
}

#[pyfunction]
#[pyo3(signature = (value, format = "f64", algo = "fastpath", policy = "minimal"))]
fn render(value: f64, format: &str, algo: &str, policy: &str) -> PyResult<String> {
    let d = decoded(value, format)?;
    let policy = self::policy(policy)?;
    let dec = if d.is_finite() {
        algorithm(algo)?.convert(&d).map_err(py_err)?
    } else {
        DecimalFP::zero(d.sign)
    };
    Ok(render_decoded(&d, &dec, policy).text)
}

/// Shortest text over every digit choice and notation that reads back to `value`.
#[pyfunction]
#[pyo3(signature = (value, format = "f64"))]
fn to_shortest_string(value: f64, format: &str) -> PyResult<String> {
    let d = decoded(value, format)?;
    Ok(fpconv::to_shortest_string(&d).map_err(py_err)?.text)
}

/// Correctly rounded bit pattern of a decimal literal.
#[pyfunction]
#[pyo3(signature = (text, format = "f64"))]
fn parse_exact(text: &str, format: &str) -> PyResult<u64> {
    fpconv::parse_exact(text, format_of(format)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (value, format = "f64"))]
fn minimal_digit_count(value: f64, format: &str) -> PyResult<u32> {
    let d = decoded(value, format)?;
    if d.is_zero() {
        return Ok(1);
    }
    fpconv::minimal_digit_count(&d).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, seed = DEFAULT_SEED, format = "f64"))]
fn generate_unit(n: usize, seed: u64, format: &str) -> PyResult<Vec<f64>> {
    let format = format_of(format)?;
    let ds = datasets::generate_unit(n, seed, format);
    Ok(ds
        .values
        .iter()
        .map(|&bits| {
            if format == FloatFormat::BINARY32 {
                f32::from_bits(bits as u32) as f64
            } else {
                f64::from_bits(bits)
            }
        })
        .collect())
}

/// Count, integer count and mean minimal digit count of a generated dataset.
#[pyfunction]
#[pyo3(signature = (n, seed = DEFAULT_SEED, format = "f64"))]
fn unit_stats<'py>(py: Python<'py>, n: usize, seed: u64, format: &str) -> PyResult<Bound<'py, PyDict>> {
    let ds = datasets::generate_unit(n, seed, format_of(format)?);
    let s = py.detach(|| datasets::stats(&ds));
    let out = PyDict::new(py);
    out.set_item("count", s.count)?;
    out.set_item("integer_count", s.integer_count)?;
    out.set_item("mean_minimal_digits", s.mean_minimal_digits)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(name = "bench", signature = (data, algo = "fastpath", policy = "minimal", repeats = 10, seed = DEFAULT_SEED, format = "f64"))]
fn py_bench<'py>(
    py: Python<'py>,
    data: &str,
    algo: &str,
    policy: &str,
    repeats: u32,
    seed: u64,
    format: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let ds = datasets::resolve(data, format_of(format)?, seed).map_err(py_err)?;
    let (algorithm, policy) = (algorithm(algo)?, self::policy(policy)?);
    let r = py.detach(|| harness::bench(&ds, algorithm, policy, repeats)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("algorithm", r.algorithm.name())?;
    out.set_item("policy", r.policy.name())?;
    out.set_item("dataset", r.dataset)?;
    out.set_item("count", r.count)?;
    out.set_item("ns_per_float", r.ns_per_float)?;
    out.set_item("variability_pct", r.variability_pct)?;
    out.set_item("mean_chars", r.mean_chars)?;
    out.set_item("mean_sig_digits", r.mean_sig_digits)?;
    out.set_item("fallback_rate", r.fallback_rate)?;
    out.set_item("mean_scale_iterations", r.mean_scale_iterations)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (scope, seed = 1))]
fn verify<'py>(py: Python<'py>, scope: &str, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let scope = Scope::parse(scope, seed).map_err(py_err)?;
    let s = py.detach(|| harness::verify(&scope, Checks::ALL));
    let out = PyDict::new(py);
    out.set_item("passed", s.passed())?;
    out.set_item("checked", s.checked)?;
    out.set_item("violations", s.violation_count)?;
    out.set_item("examples", s.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>())?;
    out.set_item("fallback_rate", s.fallback_rate())?;
    out.set_item("dragon2_failure_rate", s.dragon2_failure_rate())?;
    Ok(out)
}

#[pymodule]
fn pyfpconv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDecoded>()?;
    m.add_class::<PyDecimal>()?;
    m.add_function(wrap_pyfunction!(py_decode, m)?)?;
    m.add_function(wrap_pyfunction!(convert, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(to_shortest_string, m)?)?;
    m.add_function(wrap_pyfunction!(parse_exact, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_digit_count, m)?)?;
    m.add_function(wrap_pyfunction!(generate_unit, m)?)?;
    m.add_function(wrap_pyfunction!(unit_stats, m)?)?;
    m.add_function(wrap_pyfunction!(py_bench, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

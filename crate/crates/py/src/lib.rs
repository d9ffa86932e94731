//! Python bindings: sequence-space norms, asymptotic moduli, the absolute
//! norm on the plane, Orlicz reports, Lipschitz-free quantities, the pair
//! checker and the example verifiers.
//!
//! Structured results (reports, verdicts) cross the boundary as plain
//! dicts/lists built from the library's serialized form, so the Python
//! schema matches the CLI's `--json` output exactly.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use maxprop_core::moduli::{ModulusSpec, ScalarCurve};
use maxprop_core::{FiniteVector, Molecule, OrliczFunction, Phi, SequenceNorm};

fn verr(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    match v {
        Value::Null => Ok(py.None()),
        Value::Bool(b) => b.into_py_any(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py_any(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py)
            }
        }
        Value::String(s) => s.into_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

fn to_py_report<T: serde::Serialize>(py: Python<'_>, report: &T) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(report).map_err(verr)?;
    json_to_py(py, &value)
}

/// Evaluate a sequence-space norm spec (e.g. "lp:p=2", "james:p=2",
/// "lorentz:p=2,w=1 0.5") on a finitely supported vector.
#[pyfunction]
fn norm(space: &str, vector: Vec<f64>) -> PyResult<f64> {
    let norm = SequenceNorm::parse(space).map_err(verr)?;
    let x = FiniteVector::new(vector).map_err(verr)?;
    norm.eval(&x).map_err(verr)
}

/// James p-variation norm of a vector.
#[pyfunction]
#[pyo3(signature = (vector, p = 2.0))]
fn james_norm(vector: Vec<f64>, p: f64) -> PyResult<f64> {
    let x = FiniteVector::new(vector).map_err(verr)?;
    maxprop_core::james_norm(&x, p).map_err(verr)
}

fn role_spec<'a>(
    desc: &'a maxprop_core::SpaceDescriptor,
    role: &str,
) -> PyResult<&'a ModulusSpec> {
    match role {
        "convexity" => Ok(&desc.delta),
        "weakstar-convexity" => desc.delta_star.as_ref().ok_or_else(|| {
            verr(format!("space {} is not cataloged as a dual space", desc.display))
        }),
        "smoothness" => Ok(&desc.rho),
        other => Err(verr(format!(
            "unknown role {other:?} (expected convexity, weakstar-convexity or smoothness)"
        ))),
    }
}

/// Certified (lower, upper) values of a cataloged space's modulus at each t;
/// the two coincide when the modulus is known exactly.
#[pyfunction]
#[pyo3(signature = (space, ts, role = "convexity"))]
fn modulus_bounds(space: &str, ts: Vec<f64>, role: &str) -> PyResult<Vec<(f64, f64, f64)>> {
    let desc = maxprop_core::parse_space(space).map_err(verr)?;
    let spec = role_spec(&desc, role)?;
    if let Some(bad) = ts.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(verr(format!("t must be finite and >= 0, got {bad}")));
    }
    Ok(ts.iter().map(|&t| (t, spec.lower_value(t), spec.upper_value(t))).collect())
}

/// Full descriptor of a cataloged space (flags, moduli, notes) as a dict.
#[pyfunction]
fn describe_space(py: Python<'_>, space: &str) -> PyResult<Py<PyAny>> {
    let desc = maxprop_core::parse_space(space).map_err(verr)?;
    to_py_report(py, &desc)
}

fn parse_phi(spec: &str) -> PyResult<Phi> {
    let spec = spec.trim();
    if spec == "identity" {
        return Phi::from_curve(&ScalarCurve::Identity).map_err(verr);
    }
    if spec == "kink" {
        return Phi::from_curve(&ScalarCurve::C0Kink).map_err(verr);
    }
    if let Some(p) = spec.strip_prefix("pow") {
        let p: f64 = p.trim().parse().map_err(|_| verr(format!("bad exponent in {spec:?}")))?;
        if !(1.0..=64.0).contains(&p) {
            return Err(verr(format!("exponent must be in [1, 64], got {p}")));
        }
        return Phi::from_curve(&ScalarCurve::PowerType { p }).map_err(verr);
    }
    Err(verr(format!(
        "unknown phi spec {spec:?} (expected \"identity\", \"kink\" or \"pow P\")"
    )))
}

/// The absolute norm N_2^phi(s, t) = |s| + |s| phi(|t|/|s|) on the plane.
/// phi is "identity" (gives l1), "kink" (gives max) or "pow P" (gives l_P).
#[pyfunction]
fn n2phi(phi: &str, s: f64, t: f64) -> PyResult<f64> {
    if !s.is_finite() || !t.is_finite() {
        return Err(verr("coordinates must be finite"));
    }
    Ok(maxprop_core::n2phi_norm(&parse_phi(phi)?, s, t))
}

/// Decide the maximizing-property chain for a pair of cataloged spaces.
/// Returns the full verdict (claims with rules and certificates) as a dict.
#[pyfunction]
fn check_pair(py: Python<'_>, x: &str, y: &str) -> PyResult<Py<PyAny>> {
    let x = maxprop_core::parse_space(x).map_err(verr)?;
    let y = maxprop_core::parse_space(y).map_err(verr)?;
    to_py_report(py, &maxprop_core::check_pair(&x, &y))
}

/// Indices, doubling behavior and reflexivity of an Orlicz function
/// ("pow P", "exp", or "poly C1 C2 ...").
#[pyfunction]
fn orlicz_report(py: Python<'_>, phi: &str) -> PyResult<Py<PyAny>> {
    let phi = OrliczFunction::parse(phi).map_err(verr)?;
    to_py_report(py, &phi.report())
}

/// Re-run the verification suite for one explicit example construction
/// ("opA", "opB", "opD", "james" or "schur"); returns the report dict.
#[pyfunction]
#[pyo3(signature = (example, n = None, tol = 1e-9))]
fn verify_example(py: Python<'_>, example: &str, n: Option<usize>, tol: f64) -> PyResult<Py<PyAny>> {
    match example {
        "opA" | "opB" | "opD" => {
            let op = match example {
                "opA" => maxprop_core::op_a_failing_pair(),
                "opB" => maxprop_core::op_b_weakstar_failure(),
                _ => maxprop_core::op_d_l2_linf(),
            };
            let report = maxprop_core::run_verification(&op, n.unwrap_or(100), tol).map_err(verr)?;
            to_py_report(py, &report)
        }
        "james" => {
            let report = maxprop_core::james_remark_analysis(n.unwrap_or(100), tol).map_err(verr)?;
            to_py_report(py, &report)
        }
        "schur" => {
            let report =
                maxprop_core::verify_schur_example(n.unwrap_or(8), tol.max(1e-12)).map_err(verr)?;
            to_py_report(py, &report)
        }
        other => Err(verr(format!(
            "unknown example {other:?} (expected opA, opB, opD, james or schur)"
        ))),
    }
}

fn euclidean_space(points: Vec<Vec<f64>>) -> PyResult<maxprop_core::FiniteMetricSpace> {
    maxprop_core::FiniteMetricSpace::from_euclidean_points(&points).map_err(verr)
}

/// Lipschitz-free norm of the molecule sum_k coeffs[k] delta(points[k+1])
/// over the metric space of the given Euclidean points (points[0] is the
/// base point). Computed by transport, cross-checked by LP duality on
/// small instances.
#[pyfunction]
fn free_norm(points: Vec<Vec<f64>>, coeffs: Vec<f64>) -> PyResult<f64> {
    let space = euclidean_space(points)?;
    let molecule = Molecule::new(coeffs).map_err(verr)?;
    Ok(maxprop_core::free_norm(&space, &molecule).map_err(verr)?.value)
}

/// Best Lipschitz constant of a function given by one value per point
/// (base point first) on the metric space of the given Euclidean points.
#[pyfunction]
fn lipschitz_constant(points: Vec<Vec<f64>>, values: Vec<f64>) -> PyResult<f64> {
    let space = euclidean_space(points)?;
    maxprop_core::lipschitz_constant(&space, &values).map_err(verr)
}

#[pymodule]
fn maxprop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(james_norm, m)?)?;
    m.add_function(wrap_pyfunction!(modulus_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(describe_space, m)?)?;
    m.add_function(wrap_pyfunction!(n2phi, m)?)?;
    m.add_function(wrap_pyfunction!(check_pair, m)?)?;
    m.add_function(wrap_pyfunction!(orlicz_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify_example, m)?)?;
    m.add_function(wrap_pyfunction!(free_norm, m)?)?;
    m.add_function(wrap_pyfunction!(lipschitz_constant, m)?)?;
    Ok(())
}

//! Python bindings. Reports cross the boundary as JSON and come back as
//! plain dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use genseq_core::algebra::{euclid_data, parse_poly, BivarPoly, GroundField};
use genseq_core::engine::{self, Mode, ValuationSpec};
use genseq_core::extension::{self, MonomialExtension};
use genseq_core::report::rs;
use genseq_core::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::InvalidSpec(_) | Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(format!("{}: {e}", e.kind())),
    }
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

fn parse_json(s: &str) -> PyResult<Value> {
    serde_json::from_str(s).map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))
}

/// Valuation data: field, jumping pairs, constants and mode.
#[pyclass(name = "Spec", from_py_object)]
#[derive(Clone)]
struct PySpec {
    inner: ValuationSpec,
}

#[pymethods]
impl PySpec {
    /// `pairs` are `(p_i, q_i)`; `prime = None` means the rationals.
    #[new]
    #[pyo3(signature = (pairs, prime = None, discrete = false))]
    fn new(pairs: Vec<(u64, u64)>, prime: Option<u64>, discrete: bool) -> PyResult<Self> {
        let field = match prime {
            None => GroundField::Rationals,
            Some(p) => GroundField::prime(p).map_err(err)?,
        };
        let mut inner = ValuationSpec::simple(field, &pairs);
        if discrete {
            inner = inner.with_mode(Mode::Discrete);
        }
        inner.validate().map_err(err)?;
        Ok(PySpec { inner })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PySpec { inner: ValuationSpec::from_json(&parse_json(s)?).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn truncated(&self, depth: usize) -> PyResult<Self> {
        Ok(PySpec { inner: self.inner.truncated(depth).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Spec({})", self.inner.to_json())
    }
}

/// Jumping polynomials of a spec with their independent data.
#[pyclass(name = "JumpingSequence")]
struct PyJumpingSequence {
    js: engine::JumpingSequence,
    ind: engine::IndependentData,
}

impl PyJumpingSequence {
    fn poly(&self, s: &str) -> PyResult<BivarPoly> {
        parse_poly(self.js.field(), self.js.vars(), s).map_err(err)
    }
}

#[pymethods]
impl PyJumpingSequence {
    #[new]
    fn new(spec: &PySpec) -> PyResult<Self> {
        let js = engine::build_jumping_sequence(&spec.inner).map_err(err)?;
        let ind = engine::extract_independent(&js).map_err(err)?;
        Ok(PyJumpingSequence { js, ind })
    }

    #[getter]
    fn polys(&self) -> Vec<String> {
        self.js.polys().iter().map(BivarPoly::to_string).collect()
    }

    /// Values `β_i` as strings like `"23/6"`.
    #[getter]
    fn betas(&self) -> Vec<String> {
        self.js.betas().iter().map(|b| b.to_string()).collect()
    }

    #[getter]
    fn k(&self) -> Vec<u64> {
        self.ind.k.clone()
    }

    fn exps(&self, i: usize) -> PyResult<Vec<u64>> {
        if i == 0 || i > self.js.depth() {
            return Err(PyValueError::new_err(format!("index {i} outside 1..={}", self.js.depth())));
        }
        Ok(self.js.exps(i).to_vec())
    }

    /// Value of a polynomial in `u, v`.
    fn value(&self, poly: &str) -> PyResult<String> {
        let it = engine::initial_term(&self.js, &self.poly(poly)?).map_err(err)?;
        Ok(rs(&it.value))
    }

    fn expand(&self, py: Python<'_>, poly: &str) -> PyResult<Py<PyAny>> {
        let e = engine::expand(&self.js, &self.poly(poly)?).map_err(err)?;
        to_py(py, &e.to_json(&self.js))
    }

    /// All b- and b̄-inequality records.
    fn inequality_checks(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let mut recs = engine::check_b_inequality(&self.js);
        recs.extend(engine::check_barb_inequality(&self.js, &self.ind));
        to_py(py, &serde_json::to_value(recs).expect("records serialize"))
    }
}

/// `u = x^t δ`, `v = y` over a spec.
#[pyclass(name = "Extension")]
struct PyExtension {
    inner: MonomialExtension,
}

#[pymethods]
impl PyExtension {
    #[new]
    #[pyo3(signature = (t, spec, delta = "1"))]
    fn new(t: u64, spec: &PySpec, delta: &str) -> PyResult<Self> {
        let d = parse_poly(spec.inner.field, genseq_core::algebra::Vars::XY, delta).map_err(err)?;
        Ok(PyExtension { inner: MonomialExtension::new(t, d, spec.inner.clone()).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyExtension { inner: MonomialExtension::from_json(&parse_json(s)?).map_err(err)? })
    }

    #[getter]
    fn t(&self) -> u64 {
        self.inner.t
    }

    /// Upstairs checks; `depth = None` uses every pair.
    #[pyo3(signature = (depth = None))]
    fn dual(&self, py: Python<'_>, depth: Option<usize>) -> PyResult<Py<PyAny>> {
        let ds = extension::build_dual_sequences(&self.inner, depth.unwrap_or(self.inner.spec.depth())).map_err(err)?;
        let recs = extension::dual_checks(&self.inner, &ds).map_err(err)?;
        let up = ds.up.as_ref().map(|u| u.polys().iter().map(BivarPoly::to_string).collect::<Vec<_>>());
        to_py(
            py,
            &serde_json::json!({"upstairs": up, "first_failure": ds.first_failure, "checks": recs}),
        )
    }

    #[pyo3(signature = (depth = None))]
    fn ladder(&self, py: Python<'_>, depth: Option<usize>) -> PyResult<Py<PyAny>> {
        let cert = extension::ladder(&self.inner, depth.unwrap_or(self.inner.spec.depth())).map_err(err)?;
        to_py(py, &cert.to_json())
    }
}

#[pyfunction]
fn euclid(py: Python<'_>, p: u64, q: u64) -> PyResult<Py<PyAny>> {
    let d = euclid_data(p, q).map_err(err)?;
    to_py(py, &serde_json::to_value(d).expect("serializes"))
}

#[pymodule]
fn genseq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add_class::<PyJumpingSequence>()?;
    m.add_class::<PyExtension>()?;
    m.add_function(wrap_pyfunction!(euclid, m)?)?;
    Ok(())
}

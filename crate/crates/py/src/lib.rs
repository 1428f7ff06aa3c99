//! Python bindings. Rationals cross the boundary as strings such as `"-3/4"`.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use cusco_core::analysis::{is_hyperplane_minimal, is_quasicontinuous, is_subcontinuous};
use cusco_core::cli::{self, Entity, Options};
use cusco_core::convex2d::{planar_hyperplane_minimal, planar_quasicontinuous, Curve2};
use cusco_core::minimal::{
    is_minimal_cusco, is_minimal_usco, minimal_cusco_from, minimal_cusco_within, minimal_usco_within,
    unique_minimal_usco, Envelope,
};
use cusco_core::rat::parse_rat;
use cusco_core::subdiff::{differentiability_points, subdifferential, ConvexPWAffine};
use cusco_core::svmap::{csc, is_cusco, is_usco};
use cusco_core::{Error, MultiMap, PWFun, Rat};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat(s: &str) -> PyResult<Rat> {
    parse_rat(s).map_err(value_err)
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn envelope(variant: &str) -> PyResult<Envelope> {
    variant.parse().map_err(value_err)
}

/// Rejected constructions raise `ValueError` carrying the failing clause.
fn built<T>(r: cusco_core::Result<T>) -> PyResult<T> {
    r.map_err(|e| match e {
        Error::Rejected(v) => PyValueError::new_err(format!("rejected: {v}")),
        other => value_err(other),
    })
}

#[pyclass(name = "Verdict", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyVerdict(cusco_core::Verdict);

#[pymethods]
impl PyVerdict {
    #[getter]
    fn holds(&self) -> bool {
        self.0.holds
    }

    #[getter]
    fn clause(&self) -> String {
        self.0.clause.to_string()
    }

    /// `(point, detail)` pairs.
    #[getter]
    fn witnesses(&self) -> Vec<(String, String)> {
        self.0.witnesses.iter().map(|w| (w.point.to_string(), w.detail.clone())).collect()
    }

    fn __bool__(&self) -> bool {
        self.0.holds
    }

    fn __repr__(&self) -> String {
        format!("Verdict({})", self.0)
    }
}

fn verdict(v: cusco_core::Verdict) -> PyVerdict {
    PyVerdict(v)
}

#[pyclass(name = "Function", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFunction(PWFun);

#[pymethods]
impl PyFunction {
    /// Piecewise function from breakpoints, piece lines (`"affine m c"` or
    /// `"recip p s o"`), and breakpoint values (`None` for undefined).
    #[new]
    fn new(breakpoints: Vec<String>, pieces: Vec<String>, values: Vec<Option<String>>) -> PyResult<Self> {
        let name = "f";
        let mut text = format!("function {name}\n breakpoints {}\n", breakpoints.join(" "));
        for p in &pieces {
            text.push_str(&format!(" {p}\n"));
        }
        for (t, v) in breakpoints.iter().zip(&values) {
            match v {
                Some(v) => text.push_str(&format!(" at {t} = {v}\n")),
                None => text.push_str(&format!(" at {t} undefined\n")),
            }
        }
        if values.len() != breakpoints.len() {
            return Err(PyValueError::new_err("need one value per breakpoint"));
        }
        text.push_str("end\n");
        match cli::parse_spec(&text).map_err(value_err)?.get(name) {
            Some(Entity::Function(f)) => Ok(PyFunction(f.clone())),
            _ => unreachable!("function block parses to a function"),
        }
    }

    #[staticmethod]
    fn constant(a: &str, b: &str, c: &str) -> PyResult<Self> {
        PWFun::constant(rat(a)?, rat(b)?, rat(c)?).map(PyFunction).map_err(value_err)
    }

    fn breakpoints(&self) -> Vec<String> {
        strings(self.0.breakpoints())
    }

    fn __call__(&self, x: &str) -> PyResult<Option<String>> {
        Ok(self.0.eval(&rat(x)?).map_err(value_err)?.map(|y| y.to_string()))
    }

    fn is_quasicontinuous(&self) -> PyVerdict {
        verdict(is_quasicontinuous(&self.0))
    }

    fn is_subcontinuous(&self) -> PyVerdict {
        verdict(is_subcontinuous(&self.0))
    }

    fn is_hyperplane_minimal(&self) -> PyVerdict {
        verdict(is_hyperplane_minimal(&self.0))
    }

    /// Cluster set at `x`, as text such as `"[0, +inf)"`.
    fn cluster_set(&self, x: &str) -> PyResult<String> {
        Ok(csc(&self.0, &rat(x)?).map_err(value_err)?.to_string())
    }

    fn minimal_cusco(&self) -> PyResult<PyMap> {
        built(minimal_cusco_from(&self.0)).map(PyMap)
    }

    fn to_spec(&self, name: &str) -> String {
        cli::serialize(name, &Entity::Function(self.0.clone()))
    }

    fn __eq__(&self, other: &PyFunction) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Function({})", self.0)
    }
}

#[pyclass(name = "Map", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMap(MultiMap);

#[pymethods]
impl PyMap {
    /// The map `t -> [lower(t), upper(t)]`.
    #[staticmethod]
    fn between(lower: &PyFunction, upper: &PyFunction) -> PyResult<Self> {
        MultiMap::between(&lower.0, &upper.0).map(PyMap).map_err(value_err)
    }

    fn breakpoints(&self) -> Vec<String> {
        strings(self.0.breakpoints())
    }

    /// Components of the value at `x` as `(lo, hi)` pairs.
    fn value_at(&self, x: &str) -> PyResult<Vec<(String, String)>> {
        let v = self.0.value_at(&rat(x)?).map_err(value_err)?;
        Ok(v.components().iter().map(|c| (c.lo().to_string(), c.hi().to_string())).collect())
    }

    fn is_usco(&self) -> PyVerdict {
        verdict(is_usco(&self.0))
    }

    fn is_cusco(&self) -> PyVerdict {
        verdict(is_cusco(&self.0))
    }

    fn is_minimal_usco(&self) -> PyVerdict {
        verdict(is_minimal_usco(&self.0))
    }

    fn is_minimal_cusco(&self) -> PyVerdict {
        verdict(is_minimal_cusco(&self.0))
    }

    fn unique_minimal_usco(&self) -> PyResult<PyMap> {
        built(unique_minimal_usco(&self.0)).map(|g| PyMap(g.into_map()))
    }

    #[pyo3(signature = (variant = "inf"))]
    fn minimal_usco_within(&self, variant: &str) -> PyResult<PyMap> {
        built(minimal_usco_within(&self.0, envelope(variant)?)).map(|g| PyMap(g.into_map()))
    }

    #[pyo3(signature = (variant = "inf"))]
    fn minimal_cusco_within(&self, variant: &str) -> PyResult<PyMap> {
        built(minimal_cusco_within(&self.0, envelope(variant)?)).map(PyMap)
    }

    fn to_spec(&self, name: &str) -> String {
        cli::serialize(name, &Entity::Map(self.0.clone()))
    }

    fn __eq__(&self, other: &PyMap) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Map({})", self.0)
    }
}

#[pyclass(name = "Curve", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCurve(Curve2);

#[pymethods]
impl PyCurve {
    fn is_quasicontinuous(&self) -> PyVerdict {
        verdict(planar_quasicontinuous(&self.0))
    }

    fn is_hyperplane_minimal(&self) -> PyVerdict {
        verdict(planar_hyperplane_minimal(&self.0))
    }

    fn to_spec(&self, name: &str) -> String {
        cli::serialize(name, &Entity::Curve(self.0.clone()))
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.0)
    }
}

#[pyclass(name = "ConvexFunction", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConvex(ConvexPWAffine);

#[pymethods]
impl PyConvex {
    #[new]
    fn new(breakpoints: Vec<String>, slopes: Vec<String>, anchor: &str) -> PyResult<Self> {
        let bps = breakpoints.iter().map(|s| rat(s)).collect::<PyResult<_>>()?;
        let slopes = slopes.iter().map(|s| rat(s)).collect::<PyResult<_>>()?;
        ConvexPWAffine::new(bps, slopes, rat(anchor)?).map(PyConvex).map_err(value_err)
    }

    fn __call__(&self, x: &str) -> PyResult<String> {
        Ok(self.0.value_at(&rat(x)?).map_err(value_err)?.to_string())
    }

    fn subdifferential(&self) -> PyMap {
        PyMap(subdifferential(&self.0))
    }

    /// Interior points where the function is not differentiable.
    fn kinks(&self) -> Vec<String> {
        differentiability_points(&self.0).excluded.iter().map(ToString::to_string).collect()
    }

    fn to_spec(&self, name: &str) -> String {
        cli::serialize(name, &Entity::Convex(self.0.clone()))
    }

    fn __repr__(&self) -> String {
        format!("ConvexFunction({})", self.0)
    }
}

fn wrap(py: Python<'_>, e: &Entity) -> PyResult<Py<PyAny>> {
    Ok(match e {
        Entity::Function(f) => Py::new(py, PyFunction(f.clone()))?.into_any(),
        Entity::Map(m) => Py::new(py, PyMap(m.clone()))?.into_any(),
        Entity::Curve(c) => Py::new(py, PyCurve(c.clone()))?.into_any(),
        Entity::Convex(g) => Py::new(py, PyConvex(g.clone()))?.into_any(),
    })
}

/// Parse specification text into `[(name, entity), ...]` in file order.
#[pyfunction]
fn parse_spec(py: Python<'_>, text: &str) -> PyResult<Vec<(String, Py<PyAny>)>> {
    let doc = cli::parse_spec(text).map_err(value_err)?;
    doc.entities().iter().map(|(n, e)| Ok((n.clone(), wrap(py, e)?))).collect()
}

/// Run a command-line subcommand on an entity of `text`; returns
/// `(exit_code, output)`.
#[pyfunction]
#[pyo3(signature = (command, text, name, at = None, step = None, variant = "inf", depth = 6))]
fn run(
    command: &str,
    text: &str,
    name: &str,
    at: Option<&str>,
    step: Option<&str>,
    variant: &str,
    depth: u32,
) -> PyResult<(i32, String)> {
    let cmd = cli::Command::from_name(command).ok_or_else(|| PyKeyError::new_err(format!("unknown command `{command}`")))?;
    let doc = cli::parse_spec(text).map_err(value_err)?;
    let opts = Options {
        at: at.map(rat).transpose()?,
        step: step.map(rat).transpose()?,
        envelope: envelope(variant)?,
        depth,
    };
    let report = cli::run(cmd, &doc, name, &opts).map_err(value_err)?;
    Ok((report.exit_code, report.to_text()))
}

#[pymodule]
fn cusco(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVerdict>()?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PyMap>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyConvex>()?;
    m.add_function(wrap_pyfunction!(parse_spec, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}

//! Python bindings: the polytope / stratification pipeline and its JSON
//! reports, exposed as two classes plus a handful of functions.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

use torideg::exact::{parse_rat, rat_str};
use torideg::json;
use torideg::pipeline::{assemble, BuildOptions, MarkingMode, PipelineError, Stratification};
use torideg::polytope::{GradedPoint, LatticePolytope};
use torideg::stratify::Marking;
use torideg::svg::render_svg;
use torideg::valuation::{quasi_valuation, quasi_valuation_via_min};
use torideg::worked;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A full-dimensional lattice polytope given by its vertices.
#[pyclass(name = "Polytope")]
struct PyPolytope {
    inner: LatticePolytope,
}

#[pymethods]
impl PyPolytope {
    #[new]
    fn new(dim: usize, vertices: Vec<Vec<i64>>) -> PyResult<Self> {
        LatticePolytope::new(dim, vertices)
            .map(|inner| PyPolytope { inner })
            .map_err(value_error)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn vertices(&self) -> Vec<Vec<i64>> {
        self.inner.vertices().to_vec()
    }

    fn lattice_points(&self, m: i64) -> PyResult<Vec<Vec<i64>>> {
        if m < 1 {
            return Err(value_error("dilation factor must be positive"));
        }
        Ok(self.inner.lattice_points(m))
    }

    /// Exact Euclidean volume as a `p/q` string.
    fn volume(&self) -> String {
        rat_str(&self.inner.volume())
    }

    /// `(normal, witness)`: the witness is `(m, eta)` of a non-decomposable
    /// graded point of minimal level, or `None`.
    fn is_normal(&self) -> (bool, Option<(i64, Vec<i64>)>) {
        let (ok, witness) = self.inner.is_normal();
        (ok, witness.map(|w| (w.level, w.point)))
    }

    fn face_count(&self) -> usize {
        self.inner.face_lattice().face_count()
    }

    fn maximal_chain_count(&self) -> usize {
        self.inner.face_lattice().maximal_chains.len()
    }

    /// The full face-lattice report as a JSON string.
    fn faces_json(&self) -> String {
        let report = json::faces_report(&self.inner.face_lattice());
        serde_json::to_string_pretty(&report).expect("report serialization")
    }

    fn __repr__(&self) -> String {
        format!(
            "Polytope(dim={}, vertices={})",
            self.inner.dim(),
            self.inner.vertices().len()
        )
    }
}

fn marking_from_python(
    polytope: &LatticePolytope,
    marking: Option<&Bound<'_, PyAny>>,
) -> PyResult<MarkingMode> {
    let Some(value) = marking else {
        return Ok(MarkingMode::Barycentric);
    };
    if let Ok(name) = value.extract::<String>() {
        return match name.as_str() {
            "barycentric" => Ok(MarkingMode::Barycentric),
            "integral" => Ok(MarkingMode::Integral),
            other => Err(value_error(format!(
                "unknown marking mode `{other}`; use `barycentric`, `integral` or a dict"
            ))),
        };
    }
    let dict = value
        .cast::<PyDict>()
        .map_err(|_| value_error("marking must be a mode string or a {face_id: [\"p/q\", ...]} dict"))?;
    let lattice = polytope.face_lattice();
    let mut points = BTreeMap::new();
    for (key, coords) in dict.iter() {
        let face = if let Ok(id) = key.extract::<usize>() {
            id
        } else {
            let name: String = key.extract()?;
            json::parse_face_key(&name, &lattice).map_err(value_error)?
        };
        let point = coords
            .extract::<Vec<String>>()?
            .iter()
            .map(|c| parse_rat(c).map_err(value_error))
            .collect::<PyResult<Vec<_>>>()?;
        points.insert(face, point);
    }
    Ok(MarkingMode::Explicit(Marking { points }))
}

fn multipliers_from_python(
    polytope: &LatticePolytope,
    multipliers: Option<&Bound<'_, PyDict>>,
) -> PyResult<BTreeMap<usize, i64>> {
    let Some(dict) = multipliers else {
        return Ok(BTreeMap::new());
    };
    let lattice = polytope.face_lattice();
    let mut out = BTreeMap::new();
    for (key, value) in dict.iter() {
        let face = if let Ok(id) = key.extract::<usize>() {
            id
        } else {
            let name: String = key.extract()?;
            json::parse_face_key(&name, &lattice).map_err(value_error)?
        };
        out.insert(face, value.extract::<i64>()?);
    }
    Ok(out)
}

/// An assembled run: face lattice, marking, extremal data, triangulation.
#[pyclass(name = "Stratification")]
struct PyStratification {
    inner: Stratification,
}

#[pymethods]
impl PyStratification {
    #[new]
    #[pyo3(signature = (polytope, marking=None, multipliers=None, alternative_order=false))]
    fn new(
        polytope: &PyPolytope,
        marking: Option<&Bound<'_, PyAny>>,
        multipliers: Option<&Bound<'_, PyDict>>,
        alternative_order: bool,
    ) -> PyResult<Self> {
        let mode = marking_from_python(&polytope.inner, marking)?;
        let mults = multipliers_from_python(&polytope.inner, multipliers)?;
        assemble(
            polytope.inner.clone(),
            mode,
            BuildOptions { multipliers: mults, alternative_order },
        )
        .map(|inner| PyStratification { inner })
        .map_err(value_error)
    }

    fn simplex_count(&self) -> usize {
        self.inner.tri.simplices.len()
    }

    /// Marked point of a face, as `p/q` strings.
    fn marking_point(&self, face: usize) -> PyResult<Vec<String>> {
        if face >= self.inner.lattice.face_count() {
            return Err(value_error(format!("face id {face} out of range")));
        }
        Ok(self.inner.marking.point(face).iter().map(rat_str).collect())
    }

    fn extremal_degree(&self, face: usize) -> PyResult<i64> {
        if face >= self.inner.lattice.face_count() {
            return Err(value_error(format!("face id {face} out of range")));
        }
        Ok(self.inner.extremal.degree(face))
    }

    /// Quasi-valuation of one graded point: `{face_id: "p/q"}`.
    fn nu(&self, m: i64, eta: Vec<i64>) -> PyResult<BTreeMap<usize, String>> {
        let point = GradedPoint::new(m, eta);
        let value = quasi_valuation(
            std::slice::from_ref(&point),
            &self.inner.tri,
            &self.inner.extremal,
            &self.inner.order,
        )
        .map_err(value_error)?;
        Ok(value.0.iter().map(|(f, c)| (*f, rat_str(c))).collect())
    }

    /// Quasi-valuation of a formal sum of graded points, computed by the
    /// defining minimum over all maximal chains.
    fn nu_min_oracle(&self, terms: Vec<(i64, Vec<i64>)>) -> PyResult<BTreeMap<usize, String>> {
        let points: Vec<GradedPoint> = terms
            .into_iter()
            .map(|(m, eta)| GradedPoint::new(m, eta))
            .collect();
        let value = quasi_valuation_via_min(
            &points,
            &self.inner.tri,
            &self.inner.extremal,
            &self.inner.order,
        )
        .map_err(value_error)?;
        Ok(value.0.iter().map(|(f, c)| (*f, rat_str(c))).collect())
    }

    /// Indices of the maximal chains whose simplex contains `eta / m`.
    fn locate(&self, m: i64, eta: Vec<i64>) -> PyResult<Vec<usize>> {
        let point = GradedPoint::new(m, eta);
        let ratio = point
            .ratio()
            .ok_or_else(|| value_error("the origin lies in every chain"))?;
        self.inner.tri.locate(&ratio).map_err(value_error)
    }

    fn triangulation_json(&self) -> String {
        serde_json::to_string_pretty(&json::triangulation_report(&self.inner))
            .expect("report serialization")
    }

    #[pyo3(signature = (level_bound=None))]
    fn fan_json(&self, level_bound: Option<i64>) -> PyResult<String> {
        let bound = level_bound.unwrap_or(self.inner.lattice.dim() as i64 + 2);
        let report = json::fan_report(&self.inner, bound).map_err(value_error)?;
        Ok(serde_json::to_string_pretty(&report).expect("report serialization"))
    }

    #[pyo3(signature = (level_bound=None, degree_bound=3))]
    fn algebra_json(&self, level_bound: Option<i64>, degree_bound: i64) -> PyResult<String> {
        let lb = level_bound.unwrap_or(self.inner.lattice.dim() as i64 + 2);
        let report =
            json::algebra_report(&self.inner, lb, degree_bound).map_err(value_error)?;
        Ok(serde_json::to_string_pretty(&report).expect("report serialization"))
    }

    #[pyo3(signature = (level_bound=None, degree_bound=2))]
    fn shadow_json(&self, level_bound: Option<i64>, degree_bound: i64) -> PyResult<String> {
        let lb = level_bound.unwrap_or(self.inner.lattice.dim() as i64 + 2);
        let report =
            json::shadow_report_json(&self.inner, lb, degree_bound).map_err(value_error)?;
        Ok(serde_json::to_string_pretty(&report).expect("report serialization"))
    }

    fn render_svg(&self) -> PyResult<String> {
        render_svg(&self.inner.tri).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Stratification(dim={}, simplices={})",
            self.inner.lattice.dim(),
            self.inner.tri.simplices.len()
        )
    }
}

/// Parses a polytope JSON document (`{"dim": n, "vertices": [...]}`).
#[pyfunction]
fn polytope_from_json(text: &str) -> PyResult<PyPolytope> {
    json::parse_polytope(text)
        .map(|inner| PyPolytope { inner })
        .map_err(|e: PipelineError| value_error(e))
}

/// Replays the bundled worked examples; returns `(name, passed, detail)`
/// triples.
#[pyfunction]
fn reference_checks() -> Vec<(String, bool, String)> {
    worked::run_reference_checks()
        .into_iter()
        .map(|v| (v.name.to_string(), v.pass, v.detail))
        .collect()
}

#[pymodule]
fn torideg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyStratification>()?;
    m.add_function(wrap_pyfunction!(polytope_from_json, m)?)?;
    m.add_function(wrap_pyfunction!(reference_checks, m)?)?;
    Ok(())
}

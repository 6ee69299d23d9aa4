//! Python bindings for the `arrowhead` library.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use arrowhead::analysis::{self, ClassifyOptions, RuleSelection};
use arrowhead::curve::{self, DEFAULT_CAP};
use arrowhead::render::{self, ChartStyle, CurveStyle, KnitSpec, Projection};
use arrowhead::rules;

fn err(e: arrowhead::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn points_to_vec(points: &[arrowhead::Point]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}

fn address(digits: Vec<usize>, d: usize) -> PyResult<arrowhead::Address> {
    arrowhead::Address::from_digits(&digits, d).map_err(err)
}

/// The regular d-simplex and its midpoint contractions.
#[pyclass(name = "SimplexGeometry", frozen)]
struct PySimplexGeometry(arrowhead::SimplexGeometry);

#[pymethods]
impl PySimplexGeometry {
    #[new]
    fn new(d: usize) -> PyResult<Self> {
        arrowhead::SimplexGeometry::new(d).map(Self).map_err(err)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    fn vertices(&self) -> Vec<Vec<f64>> {
        points_to_vec(self.0.vertices())
    }

    fn edge_length(&self, level: usize) -> f64 {
        self.0.edge_length(level)
    }

    fn contract(&self, i: usize, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let x = arrowhead::Point::new(x).map_err(err)?;
        Ok(self.0.contract(i, &x).map_err(err)?.into_coords())
    }

    fn apply_address(&self, digits: Vec<usize>, vertex: usize) -> PyResult<Vec<f64>> {
        let a = address(digits, self.0.dimension())?;
        Ok(self.0.apply_address(&a, vertex).map_err(err)?.into_coords())
    }

    fn simplex_vertices(&self, digits: Vec<usize>) -> PyResult<Vec<Vec<f64>>> {
        let a = address(digits, self.0.dimension())?;
        Ok(points_to_vec(&self.0.simplex_vertices(&a).map_err(err)?))
    }

    #[pyo3(signature = (digits, point, tolerance = arrowhead::geometry::DEFAULT_TOLERANCE))]
    fn vertex_index_of_point(
        &self,
        digits: Vec<usize>,
        point: Vec<f64>,
        tolerance: f64,
    ) -> PyResult<Option<usize>> {
        let a = address(digits, self.0.dimension())?;
        let q = arrowhead::Point::new(point).map_err(err)?;
        self.0.vertex_index_of_point(&a, &q, tolerance).map_err(err)
    }
}

/// A validated reproduction rule table.
#[pyclass(name = "ReproductionRule", frozen, eq)]
#[derive(PartialEq)]
struct PyRule(arrowhead::ReproductionRule);

#[pymethods]
impl PyRule {
    #[new]
    fn new(rows: Vec<Vec<usize>>, d: usize) -> PyResult<Self> {
        arrowhead::ReproductionRule::new(rows, d).map(Self).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        rules::parse_rule(text).map(Self).map_err(err)
    }

    #[staticmethod]
    fn canonical(d: usize) -> PyResult<Self> {
        rules::canonical_rule(d).map(Self).map_err(err)
    }

    #[staticmethod]
    fn preset(name: &str, d: usize) -> PyResult<Self> {
        rules::preset(name, d)
            .map_err(err)?
            .map(Self)
            .ok_or_else(|| PyValueError::new_err(format!("unknown preset {name:?}")))
    }

    #[staticmethod]
    fn at(d: usize, index: u128) -> PyResult<Option<Self>> {
        Ok(rules::rule_at(d, index).map_err(err)?.map(Self))
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<usize>> {
        self.0.rows().to_vec()
    }

    fn index(&self) -> Option<u128> {
        rules::rule_index(&self.0)
    }

    fn serialize(&self) -> String {
        rules::serialize_rule(&self.0)
    }

    fn compact(&self) -> String {
        self.0.to_compact()
    }

    fn __repr__(&self) -> String {
        format!("ReproductionRule({:?}, {})", self.0.rows(), self.0.dimension())
    }
}

/// Addresses of the level-n simplices in curve order.
#[pyclass(name = "AddressSequence", frozen)]
struct PySequence(curve::AddressSequence);

#[pymethods]
impl PySequence {
    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    #[getter]
    fn level(&self) -> usize {
        self.0.level()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn addresses(&self) -> Vec<Vec<u8>> {
        self.0.iter().map(<[u8]>::to_vec).collect()
    }

    fn last_entries(&self) -> Vec<usize> {
        self.0.last_entries()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    /// Curve points as `(address digits, vertex)` pairs.
    fn point_refs(&self) -> Vec<(Vec<u8>, usize)> {
        curve::curve_point_refs(&self.0)
            .into_iter()
            .map(|r| (r.address.digits().to_vec(), r.vertex))
            .collect()
    }

    /// `(enter, exit)` vertex of each simplex.
    fn activity(&self) -> Vec<(usize, usize)> {
        curve::simplex_activity(&self.0)
            .into_iter()
            .map(|a| (a.enter, a.exit))
            .collect()
    }

    fn polyline(&self) -> PyResult<Vec<Vec<f64>>> {
        let geom = arrowhead::SimplexGeometry::new(self.0.dimension()).map_err(err)?;
        let line = curve::polyline(&geom, &self.0).map_err(err)?;
        Ok(points_to_vec(&line.points))
    }

    #[pyo3(signature = (tolerance = arrowhead::geometry::DEFAULT_TOLERANCE))]
    fn is_valid_curve(&self, tolerance: f64) -> PyResult<bool> {
        let geom = arrowhead::SimplexGeometry::new(self.0.dimension()).map_err(err)?;
        let report = curve::verify_curve(&geom, &self.0, tolerance).map_err(err)?;
        Ok(report.is_valid())
    }
}

/// The grouped binary sequence of one level.
#[pyclass(name = "BinarySequence", frozen)]
struct PyBinarySequence(analysis::BinarySequence);

#[pymethods]
impl PyBinarySequence {
    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    #[getter]
    fn level(&self) -> usize {
        self.0.level()
    }

    fn bits(&self) -> Vec<bool> {
        self.0.bits().to_vec()
    }

    fn groups(&self) -> Vec<Vec<bool>> {
        self.0.groups().map(<[bool]>::to_vec).collect()
    }

    fn is_symmetric(&self) -> bool {
        self.0.is_symmetric()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyfunction]
#[pyo3(signature = (rule, n, cap = DEFAULT_CAP))]
fn expand_addresses(rule: &PyRule, n: usize, cap: u128) -> PyResult<PySequence> {
    curve::expand_addresses_with_cap(&rule.0, n, cap)
        .map(PySequence)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (rule, n, cap = DEFAULT_CAP))]
fn binary_sequence(rule: &PyRule, n: usize, cap: u128) -> PyResult<PyBinarySequence> {
    analysis::rule_sequence(&rule.0, n, cap)
        .map(PyBinarySequence)
        .map_err(err)
}

/// Per-row isomorphisms as mapping lists.
#[pyfunction]
fn isomorphisms(rule: &PyRule) -> Vec<Vec<usize>> {
    analysis::extract_isomorphisms(&rule.0)
        .into_iter()
        .map(|iso| iso.mapping().to_vec())
        .collect()
}

/// Per-chunk first mismatch (`None` where the chunk matches).
#[pyfunction]
#[pyo3(signature = (rule, n, cap = DEFAULT_CAP))]
fn self_similarity(rule: &PyRule, n: usize, cap: u128) -> PyResult<Vec<Option<usize>>> {
    let report = analysis::verify_self_similarity(&rule.0, n, cap).map_err(err)?;
    Ok(report.chunks.iter().map(|c| c.first_mismatch).collect())
}

#[pyfunction]
fn validate_rule(rows: Vec<Vec<usize>>, d: usize) -> PyResult<PyRule> {
    rules::validate_rule(&rows, d)
        .map(PyRule)
        .map_err(|v| err(v.into()))
}

/// `(enumerated, closed_form)` rule counts; either may be `None` on overflow.
#[pyfunction]
fn count_rules(d: usize) -> PyResult<(Option<u128>, Option<u128>)> {
    let c = rules::count_rules(d).map_err(err)?;
    Ok((c.enumerated, c.formula))
}

#[pyfunction]
#[pyo3(signature = (d, limit = None))]
fn enumerate_rules(d: usize, limit: Option<usize>) -> PyResult<Vec<PyRule>> {
    let it = rules::enumerate_rules(d).map_err(err)?;
    Ok(it.take(limit.unwrap_or(usize::MAX)).map(PyRule).collect())
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    rules::PRESET_NAMES.to_vec()
}

/// Classification as CSV text, identical to the command-line output.
#[pyfunction]
#[pyo3(signature = (d, max_level = 3, sample = None, seed = 0, jobs = None))]
fn classify(
    d: usize,
    max_level: usize,
    sample: Option<usize>,
    seed: u64,
    jobs: Option<usize>,
) -> PyResult<String> {
    let mut options = ClassifyOptions::new(max_level);
    options.jobs = jobs;
    if let Some(count) = sample {
        options.selection = RuleSelection::Sample { count, seed };
    }
    let reports = analysis::classify_rules(d, &options).map_err(err)?;
    Ok(analysis::classification_csv(&reports, max_level))
}

fn sequences(rule: &PyRule, levels: &[usize]) -> PyResult<Vec<analysis::BinarySequence>> {
    levels
        .iter()
        .map(|&n| analysis::rule_sequence(&rule.0, n, DEFAULT_CAP).map_err(err))
        .collect()
}

#[pyfunction]
fn render_chart(rule: &PyRule, levels: Vec<usize>) -> PyResult<String> {
    render::render_sequence_chart(&sequences(rule, &levels)?, &ChartStyle::default()).map_err(err)
}

#[pyfunction]
fn render_knit(rule: &PyRule, levels: Vec<usize>, stitches: Vec<usize>) -> PyResult<String> {
    render::render_knit_chart(&sequences(rule, &levels)?, &KnitSpec::new(stitches)).map_err(err)
}

/// SVG drawing of the level-n curve. Two axes project orthographically;
/// three axes use a camera at the given angles.
#[pyfunction]
#[pyo3(signature = (rule, n, axes = vec![0, 1], azimuth = 30.0, elevation = 20.0, wireframe = false))]
fn render_curve(
    rule: &PyRule,
    n: usize,
    axes: Vec<usize>,
    azimuth: f64,
    elevation: f64,
    wireframe: bool,
) -> PyResult<String> {
    let projection = match axes[..] {
        [x, y] => Projection::Axes { x, y },
        [a, b, c] => Projection::Camera {
            axes: [a, b, c],
            azimuth_deg: azimuth,
            elevation_deg: elevation,
        },
        _ => return Err(PyValueError::new_err("axes takes two or three indices")),
    };
    let geom = arrowhead::SimplexGeometry::new(rule.0.dimension()).map_err(err)?;
    let seq = curve::expand_addresses(&rule.0, n).map_err(err)?;
    let line = curve::polyline(&geom, &seq).map_err(err)?;
    let frames = wireframe.then(|| render::simplex_wireframe(&geom, &seq));
    render::render_curve_svg(&line, &projection, &CurveStyle::default(), frames.as_deref())
        .map_err(err)
}

/// OBJ export of a curve in two or three dimensions.
#[pyfunction]
#[pyo3(signature = (rule, n, wireframe = false))]
fn render_obj(rule: &PyRule, n: usize, wireframe: bool) -> PyResult<String> {
    let geom = arrowhead::SimplexGeometry::new(rule.0.dimension()).map_err(err)?;
    let seq = curve::expand_addresses(&rule.0, n).map_err(err)?;
    let line = curve::polyline(&geom, &seq).map_err(err)?;
    let frames = wireframe.then(|| render::simplex_wireframe(&geom, &seq));
    render::export_obj(&line, frames.as_deref()).map_err(err)
}

#[pymodule]
fn arrowhead_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySimplexGeometry>()?;
    m.add_class::<PyRule>()?;
    m.add_class::<PySequence>()?;
    m.add_class::<PyBinarySequence>()?;
    m.add_function(wrap_pyfunction!(expand_addresses, m)?)?;
    m.add_function(wrap_pyfunction!(binary_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(isomorphisms, m)?)?;
    m.add_function(wrap_pyfunction!(self_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(validate_rule, m)?)?;
    m.add_function(wrap_pyfunction!(count_rules, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_rules, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(render_chart, m)?)?;
    m.add_function(wrap_pyfunction!(render_knit, m)?)?;
    m.add_function(wrap_pyfunction!(render_curve, m)?)?;
    m.add_function(wrap_pyfunction!(render_obj, m)?)?;
    Ok(())
}

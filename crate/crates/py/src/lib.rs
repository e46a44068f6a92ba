//! Python bindings. Documents cross the boundary as JSON text; results come
//! back as small wrapper classes.

use luxforge_core::control::{self, ControlPolicy, NamedPolicy, Schedule, SimulationTrace};
use luxforge_core::export::{field_to_csv, field_to_pgm};
use luxforge_core::generator::{self, DesignScore, LightingDesign};
use luxforge_core::geometry::{
    point_in_room, validate_room, workplane_grid, Point2, RoomFunction, RoomModel, ValidatedRoom, DEFAULT_SPACING,
    DEFAULT_WORKPLANE_HEIGHT,
};
use luxforge_core::patterns::PatternLibrary;
use luxforge_core::photometry::{illuminance_field, IlluminanceField};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(luxforge, LuxforgeError, PyValueError, "Engine error; the message starts with its name.");

fn err<E: Into<luxforge_core::Error>>(e: E) -> PyErr {
    let e = e.into();
    LuxforgeError::new_err(format!("{}: {e}", e.name()))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(err)
}

fn function_from(name: &str) -> PyResult<RoomFunction> {
    parse(&format!("\"{name}\""))
}

#[pyclass(module = "luxforge", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Room {
    inner: ValidatedRoom,
}

#[pymethods]
impl Room {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let model: RoomModel = parse(text)?;
        Ok(Self {
            inner: validate_room(&model).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (width, depth, height, function = "bedroom"))]
    fn rectangle(width: f64, depth: f64, height: f64, function: &str) -> PyResult<Self> {
        let model = RoomModel::rectangle(width, depth, height, function_from(function)?);
        Ok(Self {
            inner: validate_room(&model).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.model().to_json()
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area()
    }

    #[getter]
    fn perimeter(&self) -> f64 {
        self.inner.perimeter()
    }

    #[getter]
    fn ceiling_height(&self) -> f64 {
        self.inner.ceiling_height()
    }

    #[getter]
    fn function(&self) -> String {
        serde_json::to_value(self.inner.function())
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        point_in_room(&self.inner, Point2::new(x, y))
    }

    #[pyo3(signature = (spacing = DEFAULT_SPACING, height = DEFAULT_WORKPLANE_HEIGHT))]
    fn workplane_grid(&self, spacing: f64, height: f64) -> PyResult<Vec<(f64, f64, f64)>> {
        let grid = workplane_grid(&self.inner, spacing, height).map_err(err)?;
        Ok(grid.points.iter().map(|p| (p.x, p.y, p.z)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Room(area={:.3}, function='{}')", self.area(), self.function())
    }
}

#[pyclass(module = "luxforge", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Design {
    inner: LightingDesign,
}

#[pymethods]
impl Design {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse(text)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn pattern_id(&self) -> String {
        self.inner.pattern_id.clone()
    }

    #[getter]
    fn fixture_count(&self) -> usize {
        self.inner.fixtures.len()
    }

    #[getter]
    fn positions(&self) -> Vec<(f64, f64, f64)> {
        self.inner
            .fixtures
            .iter()
            .map(|f| (f.position.x, f.position.y, f.position.z))
            .collect()
    }

    #[getter]
    fn zones(&self) -> std::collections::BTreeMap<String, Vec<usize>> {
        self.inner.zones.clone()
    }

    fn validate(&self, room: &Room) -> PyResult<()> {
        generator::validate_design(&self.inner, &room.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Design(id='{}', fixtures={})", self.inner.id, self.inner.fixtures.len())
    }
}

#[pyclass(module = "luxforge", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct Score {
    average_lux: f64,
    min_lux: f64,
    max_lux: f64,
    uniformity: f64,
    task_lux: Option<f64>,
    meets_ambient: bool,
    meets_task: bool,
    scalar_score: f64,
}

impl From<DesignScore> for Score {
    fn from(s: DesignScore) -> Self {
        Self {
            average_lux: s.average_lux,
            min_lux: s.min_lux,
            max_lux: s.max_lux,
            uniformity: s.uniformity,
            task_lux: s.task_lux,
            meets_ambient: s.meets_ambient,
            meets_task: s.meets_task,
            scalar_score: s.scalar_score,
        }
    }
}

#[pyclass(module = "luxforge", frozen)]
pub struct Field {
    inner: IlluminanceField,
}

#[pymethods]
impl Field {
    #[getter]
    fn lux(&self) -> Vec<f64> {
        self.inner.lux.clone()
    }

    #[getter]
    fn points(&self) -> Vec<(f64, f64, f64)> {
        self.inner.points().iter().map(|p| (p.x, p.y, p.z)).collect()
    }

    #[getter]
    fn average(&self) -> f64 {
        self.inner.stats.average
    }

    #[getter]
    fn min(&self) -> f64 {
        self.inner.stats.min
    }

    #[getter]
    fn max(&self) -> f64 {
        self.inner.stats.max
    }

    #[getter]
    fn uniformity(&self) -> f64 {
        self.inner.stats.uniformity
    }

    fn to_csv(&self) -> String {
        field_to_csv(&self.inner)
    }

    fn to_pgm(&self) -> String {
        field_to_pgm(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.lux.len()
    }
}

#[pyclass(module = "luxforge", frozen)]
pub struct Trace {
    inner: SimulationTrace,
}

#[pymethods]
impl Trace {
    #[getter]
    fn energy_wh(&self) -> f64 {
        self.inner.energy_wh
    }

    #[getter]
    fn fixture_energy_wh(&self) -> Vec<f64> {
        self.inner.fixture_energy_wh.clone()
    }

    /// Per-tick fixture levels.
    #[getter]
    fn dims(&self) -> Vec<Vec<f64>> {
        self.inner.ticks.iter().map(|t| t.dims.clone()).collect()
    }

    #[getter]
    fn sensor_lux(&self) -> Vec<f64> {
        self.inner.ticks.iter().map(|t| t.sensor_lux).collect()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("trace serializes")
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Ranked `(design, score)` pairs for every applicable pattern.
#[pyfunction]
#[pyo3(signature = (room, seed = 0, spacing = DEFAULT_SPACING, room_ref = "room.json"))]
fn generate(room: &Room, seed: u64, spacing: f64, room_ref: &str) -> PyResult<Vec<(Design, Score)>> {
    let ranked = generator::generate_ranked(&room.inner, room_ref, &PatternLibrary::default_library(), seed, spacing)
        .map_err(err)?;
    Ok(ranked
        .into_iter()
        .map(|r| (Design { inner: r.design }, r.score.into()))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (design, room, spacing = DEFAULT_SPACING, workplane_height = DEFAULT_WORKPLANE_HEIGHT, dims = None))]
fn illuminance(
    design: &Design,
    room: &Room,
    spacing: f64,
    workplane_height: f64,
    dims: Option<Vec<f64>>,
) -> PyResult<Field> {
    let dims = dims.unwrap_or_else(|| design.inner.levels());
    let inner = illuminance_field(&design.inner.fixtures, &dims, &room.inner, spacing, workplane_height).map_err(err)?;
    Ok(Field { inner })
}

/// Runs a policy (JSON) over a schedule (JSON).
#[pyfunction]
fn simulate(design: &Design, room: &Room, policy: &str, schedule: &str) -> PyResult<Trace> {
    let policy: ControlPolicy = parse(policy)?;
    let schedule: Schedule = parse(schedule)?;
    let inner = control::simulate(&design.inner, &room.inner, &policy, &schedule).map_err(err)?;
    Ok(Trace { inner })
}

/// `(name, energy_wh, savings_percent)` rows; the first policy is the baseline.
#[pyfunction]
fn compare(design: &Design, room: &Room, policies: Vec<(String, String)>, schedule: &str) -> PyResult<Vec<(String, f64, f64)>> {
    let named = policies
        .into_iter()
        .map(|(name, text)| Ok(NamedPolicy { name, policy: parse(&text)? }))
        .collect::<PyResult<Vec<_>>>()?;
    let schedule: Schedule = parse(schedule)?;
    let report = control::compare_policies(&design.inner, &room.inner, &named, &schedule).map_err(err)?;
    Ok(report
        .entries
        .into_iter()
        .map(|e| (e.name, e.energy_wh, e.savings_percent))
        .collect())
}

#[pyfunction]
fn default_library() -> String {
    PatternLibrary::default_library().to_json()
}

#[pymodule]
fn luxforge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LuxforgeError", m.py().get_type::<LuxforgeError>())?;
    m.add_class::<Room>()?;
    m.add_class::<Design>()?;
    m.add_class::<Score>()?;
    m.add_class::<Field>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(illuminance, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(default_library, m)?)?;
    Ok(())
}

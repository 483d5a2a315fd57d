//! Python bindings: schedules, exact simulation, bounds, key lengths and
//! collision-search plans.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use qlimits_core::bht::{self, BhtWorkModel};
use qlimits_core::bounds::{self, BoundKind, BoundQuery, Unknown};
use qlimits_core::dynamics::{self, AdiabaticKind};
use qlimits_core::keylength::{self, CosmicForm, CosmologyParams};
use qlimits_core::{scenario, QlError};

create_exception!(qlimits, QlimitsError, PyValueError, "Solver, domain or parse failure.");

fn err(e: QlError) -> PyErr {
    QlimitsError::new_err(format!("[{}] {}", e.kind(), e))
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (value.to_string(),))?.unbind())
}

/// Search register of `n` qubits with a single marked state.
#[pyclass(module = "qlimits", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct SearchSpace(dynamics::SearchSpace);

#[pymethods]
impl SearchSpace {
    #[new]
    fn new(n: u32) -> PyResult<Self> {
        dynamics::SearchSpace::new(n).map(SearchSpace).map_err(err)
    }

    #[getter]
    fn bits(&self) -> u32 {
        self.0.bits()
    }

    /// `2^(-n/2)`, the overlap of the initial and solution states.
    #[getter]
    fn overlap(&self) -> f64 {
        self.0.overlap()
    }

    /// Eigenenergies `(E+, E-)` in joules for mean frequency and detuning in rad/s.
    fn eigenenergies(&self, omega: f64, delta_omega: f64) -> PyResult<(f64, f64)> {
        dynamics::eigenenergies(self.0, omega, delta_omega).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("SearchSpace(n={})", self.0.bits())
    }
}

/// Piecewise-constant control `(omega_i, omega_s)` in rad/s.
#[pyclass(module = "qlimits", frozen, from_py_object)]
#[derive(Clone)]
struct ControlSchedule(dynamics::ControlSchedule);

#[pymethods]
impl ControlSchedule {
    /// Builds a schedule from `(duration_s, omega_i, omega_s)` triples.
    #[new]
    fn new(segments: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        let segments = segments
            .into_iter()
            .map(|(d, wi, ws)| dynamics::Segment::new(d, wi, ws))
            .collect();
        dynamics::ControlSchedule::new(segments)
            .map(ControlSchedule)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (space, work, duration=None))]
    fn ballistic(space: SearchSpace, work: f64, duration: Option<f64>) -> PyResult<Self> {
        match duration {
            Some(t) => dynamics::ballistic_schedule_for(space.0, work, t),
            None => dynamics::ballistic_schedule(space.0, work),
        }
        .map(ControlSchedule)
        .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (space, pulse_energy, pulse_phase=std::f64::consts::PI, iterations=None))]
    fn grover(space: SearchSpace, pulse_energy: f64, pulse_phase: f64, iterations: Option<u32>) -> PyResult<Self> {
        let k = iterations.unwrap_or_else(|| dynamics::grover_iterations(space.0));
        dynamics::grover_pulsed_schedule(space.0, pulse_energy, pulse_phase, k)
            .map(ControlSchedule)
            .map_err(err)
    }

    /// `kind` is `"local"` or `"linear"`.
    #[staticmethod]
    #[pyo3(signature = (space, energy_scale, error_budget, kind="local", segments=256))]
    fn adiabatic(
        space: SearchSpace,
        energy_scale: f64,
        error_budget: f64,
        kind: &str,
        segments: usize,
    ) -> PyResult<Self> {
        let kind = match kind {
            "local" => AdiabaticKind::Local,
            "linear" => AdiabaticKind::Linear,
            other => return Err(QlimitsError::new_err(format!("unknown adiabatic kind {other:?}"))),
        };
        dynamics::adiabatic_schedule(space.0, energy_scale, error_budget, kind, segments)
            .map(ControlSchedule)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        dynamics::ControlSchedule::from_json(text)
            .map(ControlSchedule)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn segments(&self) -> Vec<(f64, f64, f64)> {
        self.0
            .segments()
            .iter()
            .map(|s| (s.duration, s.omega_i, s.omega_s))
            .collect()
    }

    #[getter]
    fn total_duration(&self) -> f64 {
        self.0.total_duration()
    }

    #[getter]
    fn control_bandwidth(&self) -> f64 {
        self.0.control_bandwidth()
    }

    fn __len__(&self) -> usize {
        self.0.segments().len()
    }
}

/// Sampled observables of an evolution.
#[pyclass(module = "qlimits", frozen)]
struct Trace(dynamics::Trace);

#[pymethods]
impl Trace {
    #[getter]
    fn t(&self) -> Vec<f64> {
        self.0.points.iter().map(|p| p.t).collect()
    }

    #[getter]
    fn p_s(&self) -> Vec<f64> {
        self.0.points.iter().map(|p| p.observables.p_s).collect()
    }

    #[getter]
    fn p_i(&self) -> Vec<f64> {
        self.0.points.iter().map(|p| p.observables.p_i).collect()
    }

    /// `⟨s|ψ⟩*⟨i|ψ⟩` as Python complex numbers.
    #[getter]
    fn overlap_product(&self) -> Vec<num_complex::Complex64> {
        self.0.points.iter().map(|p| p.observables.overlap_product).collect()
    }

    #[getter]
    fn norm_error(&self) -> Vec<f64> {
        self.0.points.iter().map(|p| p.norm_error).collect()
    }

    #[getter]
    fn underflow(&self) -> bool {
        self.0.underflow
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn __len__(&self) -> usize {
        self.0.points.len()
    }
}

/// Evolves the initial state `|i⟩` through `schedule`, sampling every `dt` seconds.
#[pyfunction]
fn evolve(space: SearchSpace, schedule: &ControlSchedule, dt: f64) -> PyResult<Trace> {
    let psi = dynamics::EffectiveState::initial(space.0);
    dynamics::evolve(&psi, &schedule.0, dt).map(Trace).map_err(err)
}

/// Same evolution in the full `2^n`-dimensional space (`n <= 14`).
#[pyfunction]
#[pyo3(signature = (space, schedule, dt, solution_index=0))]
fn full_space_reference(
    space: SearchSpace,
    schedule: &ControlSchedule,
    dt: f64,
    solution_index: u64,
) -> PyResult<Trace> {
    dynamics::full_space_reference(space.0, &schedule.0, dt, solution_index)
        .map(Trace)
        .map_err(err)
}

fn parse_kind(kind: &str) -> PyResult<BoundKind> {
    match kind {
        "classical" => Ok(BoundKind::Classical),
        "quantum" => Ok(BoundKind::Quantum),
        "gate" => Ok(BoundKind::Gate),
        "ballistic" => Ok(BoundKind::Ballistic),
        other => Err(QlimitsError::new_err(format!("unknown bound kind {other:?}"))),
    }
}

/// Solves a bound for `unknown` (`"work"`, `"time"`, `"psuccess"` or `"n"`)
/// and returns the result as a dict.
#[pyfunction]
#[pyo3(signature = (kind, unknown, *, n=None, work=None, power=None, time=None, temperature=None, p_success=None, corrected_errors=None))]
#[allow(clippy::too_many_arguments)]
fn solve_bound(
    py: Python<'_>,
    kind: &str,
    unknown: &str,
    n: Option<f64>,
    work: Option<f64>,
    power: Option<f64>,
    time: Option<f64>,
    temperature: Option<f64>,
    p_success: Option<f64>,
    corrected_errors: Option<u32>,
) -> PyResult<Py<PyAny>> {
    let mut q = BoundQuery::new(Unknown::parse(unknown).map_err(err)?);
    q.n = n;
    q.work = work;
    q.power = power;
    q.time = time;
    q.temperature = temperature;
    q.success_probability = p_success;
    q.corrected_errors = corrected_errors;
    let r = bounds::solve_bound(parse_kind(kind)?, &q).map_err(err)?;
    json_to_py(py, &r.to_json())
}

#[pyfunction]
fn landauer_energy(temperature: f64) -> f64 {
    bounds::landauer_energy(temperature)
}

#[pyfunction]
fn work_floor(spectrum: Vec<f64>, overlaps: Vec<num_complex::Complex64>, m: u32) -> PyResult<f64> {
    bounds::work_floor(&spectrum, &overlaps, m).map_err(err)
}

#[pyfunction]
fn equivalent_quantum_keylength(work: f64, time: f64, p_success: f64) -> PyResult<u32> {
    keylength::equivalent_quantum_keylength(work, time, p_success).map_err(err)
}

#[pyfunction]
fn max_recoverable_keylength(work: f64, time: f64, p_success: f64) -> PyResult<u32> {
    keylength::max_recoverable_keylength(work, time, p_success).map_err(err)
}

#[pyfunction]
fn max_deterministic_keylength(work: f64, time: f64) -> PyResult<u32> {
    keylength::max_deterministic_keylength(work, time).map_err(err)
}

/// Returns `(bits, below_floor)`.
#[pyfunction]
fn classical_keylength(work: f64, time: f64, temperature: f64, p_success: f64) -> PyResult<(u32, bool)> {
    keylength::classical_keylength(work, time, temperature, p_success)
        .map(|c| (c.bits, c.below_floor))
        .map_err(err)
}

/// `form` is `"fromOmega"` or `"fromDensity"`; the Hubble constant is in km/s/Mpc.
#[pyfunction]
#[pyo3(signature = (h0=CosmologyParams::PLANCK_H0_KM_S_MPC, omega_lambda=CosmologyParams::PLANCK_OMEGA_LAMBDA, rho_matter=CosmologyParams::PLANCK_RHO_MATTER, form="fromOmega"))]
fn cosmic_energy(h0: f64, omega_lambda: f64, rho_matter: f64, form: &str) -> PyResult<f64> {
    let params = CosmologyParams::new(h0, omega_lambda, rho_matter).map_err(err)?;
    let form = CosmicForm::parse(form).map_err(err)?;
    Ok(keylength::cosmic_energy(&params, form))
}

/// Key-length table rows for the named registry scenarios.
#[pyfunction]
fn keylength_report(py: Python<'_>, names: Vec<String>) -> PyResult<Py<PyAny>> {
    let list = names
        .iter()
        .map(|n| scenario::scenario(n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let rows = keylength::build_report(&list);
    json_to_py(py, &keylength::report_to_json(&list, &rows))
}

#[pyfunction]
fn scenario_info(py: Python<'_>, name: &str) -> PyResult<Py<PyAny>> {
    let s = scenario::scenario(name).map_err(err)?;
    json_to_py(py, &serde_json::to_value(s).expect("scenarios serialize"))
}

#[pyfunction]
fn bht_work(n: f64, k: f64, total_time: f64, temperature: f64, p_success: f64) -> PyResult<f64> {
    bht::bht_work(n, k, total_time, temperature, p_success).map_err(err)
}

#[pyfunction]
fn bht_optimal(py: Python<'_>, n: u32, total_time: f64, temperature: f64, p_success: f64) -> PyResult<Py<PyAny>> {
    let plan = bht::bht_optimal(n, total_time, temperature, p_success).map_err(err)?;
    json_to_py(py, &plan.to_json())
}

/// `model` is `"optimum"` or `"closed_form"`.
#[pyfunction]
#[pyo3(signature = (budget, total_time, temperature, p_success, model="optimum"))]
fn bht_min_image_bits(budget: f64, total_time: f64, temperature: f64, p_success: f64, model: &str) -> PyResult<u32> {
    let model = match model {
        "optimum" => BhtWorkModel::Optimum,
        "closed_form" => BhtWorkModel::ClosedForm,
        other => return Err(QlimitsError::new_err(format!("unknown model {other:?}"))),
    };
    bht::bht_min_image_bits(budget, total_time, temperature, p_success, model).map_err(err)
}

#[pymodule]
fn qlimits(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QlimitsError", m.py().get_type::<QlimitsError>())?;
    m.add("CONSTANTS_VERSION", qlimits_core::constants::CONSTANTS_VERSION)?;
    m.add("HBAR", qlimits_core::constants::HBAR)?;
    m.add_class::<SearchSpace>()?;
    m.add_class::<ControlSchedule>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(full_space_reference, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bound, m)?)?;
    m.add_function(wrap_pyfunction!(landauer_energy, m)?)?;
    m.add_function(wrap_pyfunction!(work_floor, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent_quantum_keylength, m)?)?;
    m.add_function(wrap_pyfunction!(max_recoverable_keylength, m)?)?;
    m.add_function(wrap_pyfunction!(max_deterministic_keylength, m)?)?;
    m.add_function(wrap_pyfunction!(classical_keylength, m)?)?;
    m.add_function(wrap_pyfunction!(cosmic_energy, m)?)?;
    m.add_function(wrap_pyfunction!(keylength_report, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_info, m)?)?;
    m.add_function(wrap_pyfunction!(bht_work, m)?)?;
    m.add_function(wrap_pyfunction!(bht_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(bht_min_image_bits, m)?)?;
    Ok(())
}

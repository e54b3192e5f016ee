//! Python bindings: states, unfoldings, the four criteria, factor extraction,
//! the Schmidt-rank oracle and state-file I/O.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use puresep::criteria::run_report;
use puresep::density::partial_trace;
use puresep::generators;
use puresep::io;
use puresep::unfolding::build_unfolding;
use puresep::{Criterion, DimensionProfile, PureState, ScanMode, SepError, ToleranceConfig};

create_exception!(puresep_py, SeparabilityError, PyValueError);

fn err(e: SepError) -> PyErr {
    SeparabilityError::new_err(e.to_string())
}

fn profile(dims: &[usize]) -> PyResult<DimensionProfile> {
    DimensionProfile::new(dims).map_err(err)
}

fn criterion(name: &str) -> PyResult<Criterion> {
    Criterion::ALL
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown criterion {name:?}")))
}

fn tolerance(tol: Option<&Tolerance>) -> ToleranceConfig {
    tol.map(|t| t.0).unwrap_or_default()
}

fn json_to_py(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "Tolerance", module = "puresep_py", skip_from_py_object)]
#[derive(Clone)]
struct Tolerance(ToleranceConfig);

#[pymethods]
impl Tolerance {
    /// Unset fields keep their defaults; `det` follows `rank**2` when only `rank` is given.
    #[new]
    #[pyo3(signature = (*, norm=None, zero=None, det=None, rank=None, fid=None))]
    fn new(
        norm: Option<f64>,
        zero: Option<f64>,
        det: Option<f64>,
        rank: Option<f64>,
        fid: Option<f64>,
    ) -> PyResult<Self> {
        let mut t = ToleranceConfig::default();
        if let Some(r) = rank {
            t = t.with_rank(r);
        }
        t.norm = norm.unwrap_or(t.norm);
        t.zero = zero.unwrap_or(t.zero);
        t.det = det.unwrap_or(t.det);
        t.fid = fid.unwrap_or(t.fid);
        t.validate().map_err(err)?;
        Ok(Self(t))
    }

    #[getter]
    fn norm(&self) -> f64 {
        self.0.norm
    }
    #[getter]
    fn zero(&self) -> f64 {
        self.0.zero
    }
    #[getter]
    fn det(&self) -> f64 {
        self.0.det
    }
    #[getter]
    fn rank(&self) -> f64 {
        self.0.rank
    }
    #[getter]
    fn fid(&self) -> f64 {
        self.0.fid
    }

    fn is_indecisive(&self, margin: f64) -> bool {
        self.0.is_indecisive(margin)
    }

    fn __repr__(&self) -> String {
        let t = &self.0;
        format!(
            "Tolerance(norm={:e}, zero={:e}, det={:e}, rank={:e}, fid={:e})",
            t.norm, t.zero, t.det, t.rank, t.fid
        )
    }
}

#[pyclass(name = "PureState", module = "puresep_py", skip_from_py_object)]
#[derive(Clone)]
struct State(PureState);

#[pymethods]
impl State {
    /// Amplitudes in flat order, last party fastest. With `normalize`, any
    /// nonzero vector is rescaled; otherwise it must already be unit norm.
    #[new]
    #[pyo3(signature = (dims, amplitudes, normalize=false))]
    fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let p = profile(&dims)?;
        let s = if normalize {
            PureState::normalized(p, amplitudes)
        } else {
            let s = PureState::new(p, amplitudes).map_err(err)?;
            s.require_normalized(&ToleranceConfig::default()).map(|_| s)
        };
        s.map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, levels=2))]
    fn cat(n: usize, levels: usize) -> PyResult<Self> {
        generators::cat_state(n, levels).map(Self).map_err(err)
    }

    #[staticmethod]
    fn w(n: usize) -> PyResult<Self> {
        generators::w_state(n).map(Self).map_err(err)
    }

    #[staticmethod]
    fn basis(dims: Vec<usize>, levels: Vec<usize>) -> PyResult<Self> {
        PureState::basis(profile(&dims)?, &levels)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (dims, seed=0))]
    fn random(dims: Vec<usize>, seed: u64) -> PyResult<Self> {
        generators::random_state(&profile(&dims)?, seed)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (dims, seed=0))]
    fn random_product(dims: Vec<usize>, seed: u64) -> PyResult<Self> {
        generators::random_product_state(&profile(&dims)?, seed)
            .map(Self)
            .map_err(err)
    }

    /// Tensor product of single-party states.
    #[staticmethod]
    fn product(factors: Vec<PyRef<'_, State>>) -> PyResult<Self> {
        let factors: Vec<PureState> = factors.iter().map(|f| f.0.clone()).collect();
        generators::product_state(&factors, &ToleranceConfig::default())
            .map(Self)
            .map_err(err)
    }

    /// Moves `eps` along the part of `direction` orthogonal to this state, then renormalizes.
    fn perturb(&self, direction: &State, eps: f64) -> PyResult<Self> {
        generators::perturb(&self.0, &direction.0, eps)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims().to_vec()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    #[getter]
    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn __len__(&self) -> usize {
        self.0.amplitudes().len()
    }

    fn fidelity(&self, other: &State) -> PyResult<f64> {
        self.0.fidelity(&other.0).map_err(err)
    }

    fn with_global_phase(&self, theta: f64) -> Self {
        Self(self.0.with_global_phase(theta))
    }

    fn permute_parties(&self, perm: Vec<usize>) -> PyResult<Self> {
        self.0.permute_parties(&perm).map(Self).map_err(err)
    }

    /// Mode-k unfolding as a list of rows (complement index by d_k).
    fn unfolding(&self, k: usize) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(build_unfolding(&self.0, k).map_err(err)?.matrix().to_rows())
    }

    fn partial_trace(&self, k: usize) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(partial_trace(&self.0, k).map_err(err)?.matrix.to_rows())
    }

    fn __repr__(&self) -> String {
        format!("PureState(dims={:?})", self.0.dims())
    }
}

#[pyclass(name = "CriterionReport", module = "puresep_py")]
struct Report {
    #[pyo3(get)]
    criterion: String,
    #[pyo3(get)]
    separable: bool,
    #[pyo3(get)]
    per_party: Vec<Option<f64>>,
    witness: Option<Py<PyAny>>,
}

#[pymethods]
impl Report {
    /// The failing coordinates as a dict, or None for separable states.
    #[getter]
    fn witness(&self, py: Python<'_>) -> Option<Py<PyAny>> {
        self.witness.as_ref().map(|w| w.clone_ref(py))
    }

    fn __repr__(&self) -> String {
        format!(
            "CriterionReport({}, separable={})",
            self.criterion, self.separable
        )
    }
}

fn report(py: Python<'_>, r: &puresep::CriterionReport) -> PyResult<Report> {
    let witness = match &r.witness {
        Some(w) => {
            let text =
                serde_json::to_string(w).map_err(|e| PyValueError::new_err(e.to_string()))?;
            Some(json_to_py(py, &text)?)
        }
        None => None,
    };
    Ok(Report {
        criterion: r.criterion.name().to_string(),
        separable: r.separable,
        per_party: r.per_party.clone(),
        witness,
    })
}

#[pyclass(name = "Verdict", module = "puresep_py")]
struct PyVerdict {
    #[pyo3(get)]
    separable: bool,
    reports: Vec<Py<Report>>,
    #[pyo3(get)]
    factors: Option<Vec<State>>,
    #[pyo3(get)]
    fidelity: Option<f64>,
}

#[pymethods]
impl PyVerdict {
    #[getter]
    fn reports(&self, py: Python<'_>) -> Vec<Py<Report>> {
        self.reports.iter().map(|r| r.clone_ref(py)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Verdict(separable={})", self.separable)
    }
}

/// Runs one criterion. `name` is one of det, rank, minors, prop.
#[pyfunction]
#[pyo3(signature = (state, name, tol=None, exhaustive=false))]
fn check(
    py: Python<'_>,
    state: &State,
    name: &str,
    tol: Option<&Tolerance>,
    exhaustive: bool,
) -> PyResult<Report> {
    let tol = tolerance(tol);
    tol.validate().map_err(err)?;
    state.0.require_normalized(&tol).map_err(err)?;
    let mode = if exhaustive {
        ScanMode::Exhaustive
    } else {
        ScanMode::FirstViolation
    };
    let r = run_report(&state.0, &tol, criterion(name)?, mode).map_err(err)?;
    report(py, &r)
}

/// Runs the given criteria (all four by default); raises if they disagree.
#[pyfunction]
#[pyo3(signature = (state, criteria=None, tol=None, exhaustive=false))]
fn classify(
    py: Python<'_>,
    state: &State,
    criteria: Option<Vec<String>>,
    tol: Option<&Tolerance>,
    exhaustive: bool,
) -> PyResult<PyVerdict> {
    let chosen = match criteria {
        Some(names) => names
            .iter()
            .map(|n| criterion(n))
            .collect::<PyResult<Vec<_>>>()?,
        None => Criterion::ALL.to_vec(),
    };
    let mode = if exhaustive {
        ScanMode::Exhaustive
    } else {
        ScanMode::FirstViolation
    };
    let v = puresep::classify(&state.0, &tolerance(tol), &chosen, mode).map_err(err)?;
    let reports = v
        .reports
        .iter()
        .map(|r| Py::new(py, report(py, r)?))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(PyVerdict {
        separable: v.separable,
        reports,
        factors: v.factors.map(|f| f.into_iter().map(State).collect()),
        fidelity: v.fidelity,
    })
}

/// Single-party factors of a separable state and the fidelity of their product.
#[pyfunction]
#[pyo3(signature = (state, tol=None))]
fn extract_factors(state: &State, tol: Option<&Tolerance>) -> PyResult<(Vec<State>, f64)> {
    let f = puresep::extract_factors(&state.0, &tolerance(tol)).map_err(err)?;
    Ok((f.factors.into_iter().map(State).collect(), f.fidelity))
}

#[pyclass(name = "OracleReport", module = "puresep_py")]
struct Oracle {
    #[pyo3(get)]
    singular_values: Vec<Vec<f64>>,
    #[pyo3(get)]
    schmidt_numbers: Vec<usize>,
    #[pyo3(get)]
    margins: Vec<f64>,
    #[pyo3(get)]
    separable: bool,
}

#[pymethods]
impl Oracle {
    fn __repr__(&self) -> String {
        format!(
            "OracleReport(schmidt_numbers={:?}, separable={})",
            self.schmidt_numbers, self.separable
        )
    }
}

/// Schmidt spectrum across every single-party cut.
#[pyfunction]
#[pyo3(signature = (state, tol=None))]
fn oracle(state: &State, tol: Option<&Tolerance>) -> PyResult<Oracle> {
    let r = puresep::oracle_schmidt(&state.0, &tolerance(tol)).map_err(err)?;
    Ok(Oracle {
        singular_values: r.singular_values,
        schmidt_numbers: r.schmidt_numbers,
        margins: r.margins,
        separable: r.separable,
    })
}

/// Parses state-file text; returns (state, comments, rescaled).
#[pyfunction]
#[pyo3(signature = (text, tol=None))]
fn parse_state(text: &str, tol: Option<&Tolerance>) -> PyResult<(State, Vec<String>, bool)> {
    let f = io::parse_state(text, &tolerance(tol)).map_err(err)?;
    Ok((State(f.state), f.comments, f.rescaled))
}

#[pyfunction]
#[pyo3(signature = (state, comments=Vec::new()))]
fn format_state(state: &State, comments: Vec<String>) -> String {
    io::format_state(&state.0, &comments)
}

#[pyfunction]
#[pyo3(signature = (path, tol=None))]
fn read_state(path: PathBuf, tol: Option<&Tolerance>) -> PyResult<(State, Vec<String>, bool)> {
    let f = io::read_state(&path, &tolerance(tol)).map_err(err)?;
    Ok((State(f.state), f.comments, f.rescaled))
}

#[pyfunction]
#[pyo3(signature = (path, state, comments=Vec::new()))]
fn write_state(path: PathBuf, state: &State, comments: Vec<String>) -> PyResult<()> {
    io::write_state(&path, &state.0, &comments).map_err(err)
}

#[pymodule]
fn puresep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SeparabilityError", m.py().get_type::<SeparabilityError>())?;
    m.add_class::<Tolerance>()?;
    m.add_class::<State>()?;
    m.add_class::<Report>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<Oracle>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(extract_factors, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(parse_state, m)?)?;
    m.add_function(wrap_pyfunction!(format_state, m)?)?;
    m.add_function(wrap_pyfunction!(read_state, m)?)?;
    m.add_function(wrap_pyfunction!(write_state, m)?)?;
    Ok(())
}

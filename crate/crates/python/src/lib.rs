//! Python bindings: the circle-map model, its annulus extension, and the
//! experiment drivers.

use ::glorenz as core;
use core::annulus::{self, FamilyKind};
use core::atlas::{self, SideHint};
use core::lab;
use core::symbolic::{self, Word};
use core::{CirclePoint, Error, ModelParams, Side, SignedPoint, PHI};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. }
        | Error::Validation(_)
        | Error::InvalidParameter { .. }
        | Error::ExpansionTooWeak { .. }
        | Error::LambdaBelowPhi(_)
        | Error::DegenerateArc(_)
        | Error::EmptyWord
        | Error::BadWord(_)
        | Error::ConeBoundViolated { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Converts a serializable report into plain Python objects.
fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "+" | "plus" => Ok(Side::Plus),
        "-" | "minus" => Ok(Side::Minus),
        _ => Err(PyValueError::new_err(format!(
            "side must be '+' or '-', got {side:?}"
        ))),
    }
}

fn parse_word(text: &str) -> PyResult<Word> {
    text.parse().map_err(err)
}

#[pyclass(name = "MapModel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMapModel(core::MapModel);

#[pymethods]
impl PyMapModel {
    #[new]
    #[pyo3(signature = (alpha=0.6, beta=0.3, theta1=0.15, theta2=0.0, c_minus=0.5, lambda_min_required=PHI))]
    fn new(
        alpha: f64,
        beta: f64,
        theta1: f64,
        theta2: f64,
        c_minus: f64,
        lambda_min_required: f64,
    ) -> PyResult<Self> {
        let params = ModelParams {
            c_minus,
            alpha,
            beta,
            theta1,
            theta2,
            lambda_min_required,
        };
        core::MapModel::new(params).map(PyMapModel).map_err(err)
    }

    #[getter]
    fn lambda_min(&self) -> f64 {
        self.0.lambda_min()
    }

    #[getter]
    fn q1(&self) -> f64 {
        self.0.q1().value()
    }

    #[getter]
    fn q2(&self) -> f64 {
        self.0.q2().value()
    }

    #[getter]
    fn a_star(&self) -> f64 {
        self.0.a_star()
    }

    #[getter]
    fn b_star(&self) -> f64 {
        self.0.b_star()
    }

    fn map_point(&self, x: f64) -> f64 {
        self.0.map_point(x)
    }

    fn derivative(&self, x: f64) -> PyResult<f64> {
        self.0.derivative(CirclePoint::new(x)).map_err(err)
    }

    fn fixed_points(&self) -> PyResult<(Option<f64>, Option<f64>)> {
        let (p1, p2) = self.0.fixed_points().map_err(err)?;
        Ok((p1.map(CirclePoint::value), p2.map(CirclePoint::value)))
    }

    fn verify_hypotheses<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &core::verify_hypotheses(&self.0))
    }

    #[pyo3(signature = (tol=1e-9))]
    fn classify<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &atlas::classify(&self.0, tol))
    }

    #[pyo3(signature = (x, depth, side="+"))]
    fn itinerary(&self, x: f64, depth: usize, side: &str) -> PyResult<String> {
        let sp = SignedPoint::new(x, parse_side(side)?);
        Ok(symbolic::itinerary(&self.0, sp, depth).to_string())
    }

    /// The four kneading words keyed `pp`, `pm`, `mp`, `mm`.
    fn kneading(&self, depth: usize) -> [(String, String); 4] {
        let kd = symbolic::kneading_data(&self.0, depth);
        [
            ("pp".into(), kd.w_pp.to_string()),
            ("pm".into(), kd.w_pm.to_string()),
            ("mp".into(), kd.w_mp.to_string()),
            ("mm".into(), kd.w_mm.to_string()),
        ]
    }

    fn is_admissible(&self, word: &str, depth: usize) -> PyResult<bool> {
        let kd = symbolic::kneading_data(&self.0, depth);
        Ok(symbolic::is_admissible(&parse_word(word)?, &kd, depth).is_admissible())
    }

    /// `(start, end, midpoint)` of the cylinder of a finite word.
    fn realize(&self, word: &str) -> PyResult<(f64, f64, f64)> {
        let c = symbolic::realize(&self.0, &parse_word(word)?).map_err(err)?;
        Ok((
            c.interval.start().value(),
            c.interval.end().value(),
            c.midpoint.value(),
        ))
    }

    fn attractor_span<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let s = atlas::attractor_span(&self.0, SideHint::Auto).map_err(err)?;
        to_py(
            py,
            &serde_json::json!({"span": s.span, "length": s.length, "full": s.full,
                                "missed_points": s.coverage.missed_points}),
        )
    }

    fn trapping_interval<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &atlas::trapping_interval(&self.0).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        let p = self.0.params();
        format!(
            "MapModel(alpha={}, beta={}, theta1={}, theta2={}, c_minus={})",
            p.alpha, p.beta, p.theta1, p.theta2, p.c_minus
        )
    }
}

#[pyclass(name = "SkewModel", frozen)]
struct PySkewModel(annulus::SkewModel);

#[pymethods]
impl PySkewModel {
    #[new]
    #[pyo3(signature = (model, kappa=0.2, eta1=0.0, eta2=0.0))]
    fn new(model: &PyMapModel, kappa: f64, eta1: f64, eta2: f64) -> PyResult<Self> {
        annulus::build_skew(model.0.clone(), kappa, eta1, eta2)
            .map(PySkewModel)
            .map_err(err)
    }

    fn apply(&self, x: f64, y: f64) -> PyResult<(f64, f64)> {
        let (x1, y1) = self.0.apply(CirclePoint::new(x), y).map_err(err)?;
        Ok((x1.value(), y1))
    }

    #[pyo3(signature = (nx=1000, ny=100))]
    fn verify_cones<'py>(
        &self,
        py: Python<'py>,
        nx: usize,
        ny: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &annulus::verify_cones(&self.0, nx, ny))
    }

    #[pyo3(signature = (depth, samples, seed=0))]
    fn cloud(
        &self,
        py: Python<'_>,
        depth: usize,
        samples: usize,
        seed: u64,
    ) -> PyResult<Vec<(f64, f64)>> {
        let c = py
            .detach(|| annulus::attractor_cloud(&self.0, depth, samples, seed, None))
            .map_err(err)?;
        Ok(c.points)
    }
}

#[pyfunction]
fn golden_bound(l_ab: f64, l_bc: f64, lambda_: f64) -> PyResult<(f64, f64, bool)> {
    let g = atlas::golden_bound(l_ab, l_bc, lambda_).map_err(err)?;
    Ok((g.lhs, g.rhs, g.holds))
}

/// `-1`, `0` or `1` as `u` is below, level with or above `v`.
#[pyfunction]
fn lex_compare(u: &str, v: &str) -> PyResult<i8> {
    let order = symbolic::lex_compare(&parse_word(u)?, &parse_word(v)?);
    Ok(if order.is_less() {
        -1
    } else if order.is_greater() {
        1
    } else {
        0
    })
}

#[pyfunction]
#[pyo3(signature = (family="rotation", step=1e-3))]
fn family_degree(family: &str, step: f64) -> PyResult<[[i64; 2]; 2]> {
    let kind = match family {
        "rotation" => FamilyKind::Rotation,
        "constant" => FamilyKind::Constant,
        "swapped" => FamilyKind::Swapped,
        _ => return Err(PyValueError::new_err(format!("unknown family {family:?}"))),
    };
    let base = ModelParams::default();
    let d = annulus::family_degree(|s, u| kind.model(base, s, u), step).map_err(err)?;
    Ok(d.entries)
}

/// Runs a command-line subcommand from a JSON config; returns the files
/// written into `out`.
#[pyfunction]
fn run(py: Python<'_>, command: &str, config: &str, out: &str) -> PyResult<Vec<String>> {
    let cmd = match command {
        "verify" => lab::Command::Verify,
        "classify" => lab::Command::Classify,
        "kneading" => lab::Command::Kneading,
        "itinerary" => lab::Command::Itinerary,
        "admissible" => lab::Command::Admissible,
        "realize" => lab::Command::Realize,
        "conjugacy" => lab::Command::Conjugacy,
        "sweep" => lab::Command::Sweep,
        "path" => lab::Command::Path,
        "histogram" => lab::Command::Histogram,
        "attractor2d" => lab::Command::Attractor2d,
        "degree" => lab::Command::Degree,
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown command {command:?}"
            )))
        }
    };
    let cfg = lab::load_config(config).map_err(err)?;
    let files = py
        .detach(|| lab::run_command(cmd, &cfg, std::path::Path::new(out)))
        .map_err(err)?;
    Ok(files.into_iter().map(|p| p.display().to_string()).collect())
}

#[pymodule]
fn glorenz_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMapModel>()?;
    m.add_class::<PySkewModel>()?;
    m.add_function(wrap_pyfunction!(golden_bound, m)?)?;
    m.add_function(wrap_pyfunction!(lex_compare, m)?)?;
    m.add_function(wrap_pyfunction!(family_degree, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("PHI", PHI)?;
    Ok(())
}

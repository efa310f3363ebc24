//! JSON run configuration. Every block is optional and falls back to the
//! defaults below; unknown keys are rejected.

use crate::annulus::{FamilyKind, SkewModel, SkewParams, MAX_CLOUD_DEPTH};
use crate::error::{Error, Result};
use crate::model::{MapModel, ModelParams, Side};
use crate::singularity::EigenvalueTriple;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub grid_nx: usize,
    pub grid_ny: usize,
    pub alpha_range: [f64; 2],
    pub beta_range: [f64; 2],
    /// Explicit `(alpha, beta)` cells replacing the regular grid, listed row
    /// by row from the lowest row up, `grid_nx` per row.
    pub cells: Option<Vec<[f64; 2]>>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid_nx: 512,
            grid_ny: 512,
            alpha_range: [0.70, 0.80],
            beta_range: [0.20, 0.30],
            cells: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathConfig {
    /// `(alpha, beta)` at step 0.
    pub start: [f64; 2],
    pub end: [f64; 2],
    /// Number of segments; the path has `steps + 1` points.
    pub steps: usize,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig {
            start: [0.77, 0.22],
            end: [0.79, 0.22],
            steps: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HistogramConfig {
    pub orbit_length: usize,
    pub burn_in: usize,
    pub bins: usize,
    pub seed: u64,
}

impl Default for HistogramConfig {
    fn default() -> Self {
        HistogramConfig {
            orbit_length: 1_000_000,
            burn_in: 1000,
            bins: 1024,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineConfig {
    /// Iteration cap for the segment engine.
    pub max_n: usize,
    /// Coverage resolution for the segment engine.
    pub eps: f64,
    /// Symbolic depth for kneading words, itineraries and conjugacies.
    pub depth: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_n: 200,
            eps: 1e-9,
            depth: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub x: f64,
    #[serde(default = "plus")]
    pub side: Side,
}

fn plus() -> Side {
    Side::Plus
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConjugacyConfig {
    /// `theta1` of the second model; its rotations are found by shooting.
    pub target_theta1: f64,
    /// Explicit rotations of the second model, skipping the shooting.
    pub target: Option<[f64; 2]>,
    pub radius: f64,
    pub min_depth: usize,
    pub grid: usize,
}

impl Default for ConjugacyConfig {
    fn default() -> Self {
        ConjugacyConfig {
            target_theta1: 0.10,
            target: None,
            radius: 0.05,
            min_depth: 20,
            grid: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CloudConfig {
    pub depth: usize,
    pub samples: usize,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
}

impl Default for CloudConfig {
    fn default() -> Self {
        CloudConfig {
            depth: 12,
            samples: 200_000,
            width: 800,
            height: 400,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DegreeConfig {
    pub family: FamilyKind,
    pub step: f64,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        DegreeConfig {
            family: FamilyKind::Rotation,
            step: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularityConfig {
    pub eigenvalues: EigenvalueTriple,
    #[serde(default = "default_order")]
    pub order: u32,
    #[serde(default = "default_resonance_tol")]
    pub tol: f64,
}

fn default_order() -> u32 {
    4
}

fn default_resonance_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub model: ModelParams,
    pub skew: SkewParams,
    pub sweep: SweepConfig,
    pub path: PathConfig,
    pub histogram: HistogramConfig,
    pub engine: EngineConfig,
    pub point: Option<PointConfig>,
    pub word: Option<String>,
    pub conjugacy: ConjugacyConfig,
    pub cloud: CloudConfig,
    pub degree: DegreeConfig,
    pub singularity: Option<SingularityConfig>,
    /// Output directory used when the command line gives none.
    pub output: Option<String>,
}

fn invalid(field: &str) -> Error {
    Error::Validation(field.to_string())
}

fn check(ok: bool, field: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid(field))
    }
}

fn finite_range(r: [f64; 2]) -> bool {
    r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]
}

/// Maps model construction errors onto the offending config field.
fn model_field(params: &ModelParams, err: Error) -> Error {
    match err {
        Error::InvalidParameter { field, .. } => invalid(field),
        Error::DegenerateArc(_) => invalid("c_minus"),
        Error::ExpansionTooWeak { required, .. } => {
            // minimal slope of branch i is (1 - theta_i) / L_i
            let weak1 = (1.0 - params.theta1) / params.c_minus <= required;
            invalid(if weak1 { "theta1" } else { "theta2" })
        }
        other => other,
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        check(
            m.lambda_min_required.is_finite() && m.lambda_min_required >= 1.0,
            "lambda_min_required",
        )?;
        MapModel::new(*m).map_err(|e| model_field(m, e))?;
        let s = &self.skew;
        check(s.kappa > 0.0 && s.kappa <= 0.25, "kappa")?;
        check(s.eta1.abs() + s.kappa < 1.0, "eta1")?;
        check(s.eta2.abs() + s.kappa < 1.0, "eta2")?;

        let sw = &self.sweep;
        check(sw.grid_nx >= 2, "grid_nx")?;
        check(sw.grid_ny >= 2, "grid_ny")?;
        check(finite_range(sw.alpha_range), "alpha_range")?;
        check(finite_range(sw.beta_range), "beta_range")?;
        if let Some(cells) = &sw.cells {
            check(cells.len() == sw.grid_nx * sw.grid_ny, "cells")?;
            check(cells.iter().flatten().all(|v| v.is_finite()), "cells")?;
        }

        let p = &self.path;
        check(p.start.iter().chain(&p.end).all(|v| v.is_finite()), "start")?;
        check(p.steps >= 1, "steps")?;

        let h = &self.histogram;
        check(h.bins >= 1, "bins")?;
        check(h.orbit_length >= h.bins, "orbit_length")?;

        let e = &self.engine;
        check(e.max_n >= 1, "max_n")?;
        check(e.eps > 0.0 && e.eps < 1.0, "eps")?;
        check(e.depth >= 1, "depth")?;

        if let Some(pt) = &self.point {
            check(pt.x.is_finite(), "x")?;
        }
        let c = &self.conjugacy;
        check((0.0..1.0).contains(&c.target_theta1), "target_theta1")?;
        check(c.radius > 0.0 && c.radius < 0.5, "radius")?;
        check(c.grid >= 1, "grid")?;

        let cl = &self.cloud;
        check(cl.depth <= MAX_CLOUD_DEPTH, "cloud.depth")?;
        check(cl.samples >= 1, "samples")?;
        check(cl.width >= 1 && cl.height >= 1, "width")?;

        check(self.degree.step > 0.0 && self.degree.step <= 0.25, "step")?;
        if let Some(sg) = &self.singularity {
            check(sg.order >= 3, "order")?;
            check(sg.tol >= 0.0, "tol")?;
        }
        Ok(())
    }

    pub fn map_model(&self) -> Result<MapModel> {
        MapModel::new(self.model)
    }

    /// The skew model, subject to the analytic cone bound.
    pub fn skew_model(&self) -> Result<SkewModel> {
        SkewModel::from_params(self.model, self.skew)
    }
}

/// Parses and validates a configuration document.
pub fn load_config(text: &str) -> Result<Config> {
    let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

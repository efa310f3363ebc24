use super::config::Config;
use super::raster::{render_ppm, Palette};
use crate::atlas::{attractor_span_with, classify, trapping_interval, Dynamics, SideHint, Stratum};
use crate::circle::CirclePoint;
use crate::error::Result;
use crate::model::{MapModel, STRATUM_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub stratum: Stratum,
    pub dynamics: Dynamics,
    pub margin: f64,
    pub lambda_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub nx: usize,
    pub ny: usize,
    /// Row-major from the lowest `beta` row up, `alpha` ascending in a row.
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub nx: usize,
    pub ny: usize,
    pub counts: BTreeMap<String, usize>,
    pub degenerate_cells: usize,
}

fn lerp(r: [f64; 2], i: usize, n: usize) -> f64 {
    r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64
}

/// Classifies every cell of the sweep grid (cells in parallel, output in
/// grid order).
pub fn run_sweep(cfg: &Config) -> Result<Sweep> {
    let sw = &cfg.sweep;
    let (nx, ny) = (sw.grid_nx, sw.grid_ny);
    let cells: Vec<[f64; 2]> = match &sw.cells {
        Some(c) => c.clone(),
        None => (0..ny)
            .flat_map(|j| {
                (0..nx).map(move |i| [lerp(sw.alpha_range, i, nx), lerp(sw.beta_range, j, ny)])
            })
            .collect(),
    };
    let rows = cells
        .par_iter()
        .map(|&[alpha, beta]| {
            let m = MapModel::new(cfg.model.with_rotations(alpha, beta))?;
            let v = classify(&m, STRATUM_TOL);
            Ok(SweepRow {
                alpha,
                beta,
                stratum: v.stratum,
                dynamics: v.dynamics,
                margin: v.margin,
                lambda_min: m.lambda_min(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { nx, ny, rows })
}

pub fn sweep_csv(s: &Sweep) -> String {
    let mut out = String::from("alpha,beta,stratum,dynamics,margin,lambda_min\n");
    for r in &s.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.alpha,
            r.beta,
            r.stratum.label(),
            r.dynamics,
            r.margin,
            r.lambda_min
        )
        .unwrap();
    }
    out
}

/// One pixel per cell colored by stratum, highest `beta` row on top.
pub fn sweep_ppm(s: &Sweep, palette: &Palette) -> Result<Vec<u8>> {
    let labels: Vec<&str> = (0..s.ny)
        .rev()
        .flat_map(|j| {
            s.rows[j * s.nx..(j + 1) * s.nx]
                .iter()
                .map(|r| r.stratum.label())
        })
        .collect();
    render_ppm(&labels, s.nx, s.ny, palette)
}

pub fn sweep_summary(s: &Sweep) -> SweepSummary {
    let mut counts = BTreeMap::new();
    for r in &s.rows {
        *counts.entry(r.stratum.label().to_string()).or_insert(0) += 1;
    }
    SweepSummary {
        nx: s.nx,
        ny: s.ny,
        degenerate_cells: counts
            .get(Stratum::Degenerate.label())
            .copied()
            .unwrap_or(0),
        counts,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathRow {
    pub step: usize,
    pub alpha: f64,
    pub beta: f64,
    pub stratum: Stratum,
    pub span_length: f64,
    pub span_full: bool,
    pub trap_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathRun {
    pub rows: Vec<PathRow>,
    /// Steps whose span length differs from the previous step's by more
    /// than [`JUMP_THRESHOLD`].
    pub jumps: Vec<usize>,
}

pub const JUMP_THRESHOLD: f64 = 0.25;

impl PathRun {
    pub fn first_jump(&self) -> Option<usize> {
        self.jumps.first().copied()
    }
}

pub fn run_path(cfg: &Config) -> Result<PathRun> {
    let p = &cfg.path;
    let rows = (0..=p.steps)
        .into_par_iter()
        .map(|step| {
            let t = step as f64 / p.steps as f64;
            let alpha = p.start[0] + t * (p.end[0] - p.start[0]);
            let beta = p.start[1] + t * (p.end[1] - p.start[1]);
            let m = MapModel::new(cfg.model.with_rotations(alpha, beta))?;
            let v = classify(&m, STRATUM_TOL);
            let span = attractor_span_with(&m, SideHint::Auto, cfg.engine.max_n, cfg.engine.eps)?;
            Ok(PathRow {
                step,
                alpha,
                beta,
                stratum: v.stratum,
                span_length: span.length,
                span_full: span.full,
                trap_margin: trapping_interval(&m).ok().map(|t| t.invariance_margin),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let jumps = rows
        .windows(2)
        .filter(|w| (w[1].span_length - w[0].span_length).abs() > JUMP_THRESHOLD)
        .map(|w| w[1].step)
        .collect();
    Ok(PathRun { rows, jumps })
}

pub fn path_csv(run: &PathRun) -> String {
    let mut out = String::from("step,alpha,beta,stratum,span_length,span_full,trap_margin\n");
    for r in &run.rows {
        let trap = r.trap_margin.map(|m| m.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.step,
            r.alpha,
            r.beta,
            r.stratum.label(),
            r.span_length,
            r.span_full,
            trap
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub start: f64,
    pub counts: Vec<u64>,
}

/// Visit counts of one orbit from a seeded random start, after burn-in.
pub fn run_histogram(cfg: &Config) -> Result<Histogram> {
    let h = &cfg.histogram;
    let m = cfg.map_model()?;
    let mut rng = ChaCha8Rng::seed_from_u64(h.seed);
    let start: f64 = rng.gen();
    let mut x = start;
    for _ in 0..h.burn_in {
        x = m.map_point(x);
    }
    let mut counts = vec![0u64; h.bins];
    for _ in 0..h.orbit_length {
        x = m.map_point(x);
        let bin = ((CirclePoint::new(x).value() * h.bins as f64) as usize).min(h.bins - 1);
        counts[bin] += 1;
    }
    Ok(Histogram { start, counts })
}

pub fn histogram_csv(hist: &Histogram) -> String {
    let n = hist.counts.len();
    let mut out = String::from("bin,lo,hi,count\n");
    for (i, c) in hist.counts.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i,
            i as f64 / n as f64,
            (i + 1) as f64 / n as f64,
            c
        )
        .unwrap();
    }
    out
}

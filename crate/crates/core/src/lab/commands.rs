//! One driver per command-line subcommand. Each reads the validated config
//! and writes its outputs into a directory, returning the files written.

use super::config::Config;
use super::raster::Palette;
use super::runs::{
    histogram_csv, path_csv, run_histogram, run_path, run_sweep, sweep_csv, sweep_ppm,
    sweep_summary,
};
use crate::annulus::{attractor_cloud, family_degree, leaf_span_2d, render_pgm, verify_cones};
use crate::atlas::{
    attractor_span_with, classify, horseshoe_certificate, horseshoe_strip, trapping_interval,
    SideHint, Stratum,
};
use crate::error::{Error, Result};
use crate::model::{verify_hypotheses, MapModel, ModelParams, SignedPoint, STRATUM_TOL};
use crate::singularity::check_singularity_conditions;
use crate::symbolic::{
    build_conjugacy, is_admissible, itinerary, kneading_data, match_kneading, realize, Word,
};
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Classify,
    Kneading,
    Itinerary,
    Admissible,
    Realize,
    Conjugacy,
    Sweep,
    Path,
    Histogram,
    Attractor2d,
    Degree,
}

struct Out<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Out<'_> {
    fn bytes(&mut self, name: &str, data: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, data)?;
        self.written.push(path);
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        text.push('\n');
        self.bytes(name, text.as_bytes())
    }
}

fn required_word(cfg: &Config) -> Result<Word> {
    let text = cfg
        .word
        .as_deref()
        .ok_or_else(|| Error::Validation("word".into()))?;
    text.parse().map_err(|_| Error::Validation("word".into()))
}

pub fn run_command(cmd: Command, cfg: &Config, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Out {
        dir,
        written: Vec::new(),
    };
    match cmd {
        Command::Verify => verify(cfg, &mut out)?,
        Command::Classify => classify_cmd(cfg, &mut out)?,
        Command::Kneading => kneading(cfg, &mut out)?,
        Command::Itinerary => {
            let pt = cfg.point.ok_or_else(|| Error::Validation("point".into()))?;
            let m = cfg.map_model()?;
            let w = itinerary(&m, SignedPoint::new(pt.x, pt.side), cfg.engine.depth);
            out.json(
                "itinerary.json",
                &json!({"config": cfg, "point": pt, "depth": cfg.engine.depth, "itinerary": w.to_string()}),
            )?;
        }
        Command::Admissible => {
            let w = required_word(cfg)?;
            let m = cfg.map_model()?;
            let kd = kneading_data(&m, cfg.engine.depth);
            let verdict = is_admissible(&w, &kd, cfg.engine.depth);
            out.json(
                "admissible.json",
                &json!({"config": cfg, "word": w.to_string(), "admissible": verdict.is_admissible(), "verdict": verdict}),
            )?;
        }
        Command::Realize => {
            let w = required_word(cfg)?;
            let m = cfg.map_model()?;
            let cyl = realize(&m, &w)?;
            out.json(
                "realize.json",
                &json!({"config": cfg, "word": w.to_string(), "cylinder": cyl, "length": cyl.len()}),
            )?;
        }
        Command::Conjugacy => conjugacy(cfg, &mut out)?,
        Command::Sweep => {
            let s = run_sweep(cfg)?;
            out.bytes("sweep.csv", sweep_csv(&s).as_bytes())?;
            out.bytes("sweep.ppm", &sweep_ppm(&s, &Palette::default())?)?;
            let legend = Palette::default().0;
            out.json(
                "sweep.json",
                &json!({"config": cfg, "summary": sweep_summary(&s), "palette": legend}),
            )?;
        }
        Command::Path => {
            let run = run_path(cfg)?;
            out.bytes("path.csv", path_csv(&run).as_bytes())?;
            out.json(
                "path.json",
                &json!({"config": cfg, "jumps": run.jumps, "first_jump": run.first_jump()}),
            )?;
        }
        Command::Histogram => {
            let h = run_histogram(cfg)?;
            out.bytes("histogram.csv", histogram_csv(&h).as_bytes())?;
        }
        Command::Attractor2d => attractor2d(cfg, &mut out)?,
        Command::Degree => {
            let base = cfg.model;
            let family = cfg.degree.family;
            let d = family_degree(|s, u| family.model(base, s, u), cfg.degree.step)?;
            out.json("degree.json", &json!({"config": cfg, "degree": d}))?;
        }
    }
    Ok(out.written)
}

fn verify(cfg: &Config, out: &mut Out) -> Result<()> {
    let m = cfg.map_model()?;
    let hyp = verify_hypotheses(&m);
    let cones = match cfg.skew_model() {
        Ok(s) => json!(verify_cones(&s, 1000, 100)),
        Err(e) => json!({"error": e.to_string()}),
    };
    let singularity = match &cfg.singularity {
        Some(sg) => Some(check_singularity_conditions(
            sg.eigenvalues,
            sg.order,
            sg.tol,
        )?),
        None => None,
    };
    out.json(
        "verify.json",
        &json!({"config": cfg, "hypotheses": hyp, "cones": cones, "singularity": singularity}),
    )
}

fn classify_cmd(cfg: &Config, out: &mut Out) -> Result<()> {
    let m = cfg.map_model()?;
    let v = classify(&m, STRATUM_TOL);
    let span = attractor_span_with(&m, SideHint::Auto, cfg.engine.max_n, cfg.engine.eps)?;
    let trap = trapping_interval(&m).ok();
    let horseshoe = match &trap {
        Some(t) if matches!(v.stratum, Stratum::LPlus | Stratum::LMinus) => {
            Some(horseshoe_certificate(&m, horseshoe_strip(t)))
        }
        _ => None,
    };
    let horseshoe = match horseshoe {
        Some(Ok(h)) => json!(h),
        Some(Err(e)) => json!({"error": e.to_string()}),
        None => serde_json::Value::Null,
    };
    out.json(
        "classify.json",
        &json!({
            "config": cfg,
            "verdict": v,
            "span": {"arc": span.span, "length": span.length, "full": span.full,
                     "iterations": span.coverage.iterations_used,
                     "covered_fraction": span.coverage.covered_fraction,
                     "missed_points": span.coverage.missed_points},
            "trapping": trap,
            "horseshoe": horseshoe,
        }),
    )
}

fn kneading(cfg: &Config, out: &mut Out) -> Result<()> {
    let m = cfg.map_model()?;
    let kd = kneading_data(&m, cfg.engine.depth);
    let words: serde_json::Map<String, serde_json::Value> = kd
        .words()
        .iter()
        .map(|(entry, w)| (format!("{entry:?}"), json!(w.to_string())))
        .collect();
    let recursion = kd.check_recursion(&m);
    out.json(
        "kneading.json",
        &json!({
            "config": cfg,
            "depth": kd.depth,
            "words": words,
            "a1_empty": kd.a1_empty,
            "b1_empty": kd.b1_empty,
            "recursion_holds": recursion.is_none(),
            "recursion_failure": recursion,
        }),
    )
}

fn conjugacy(cfg: &Config, out: &mut Out) -> Result<()> {
    let c = &cfg.conjugacy;
    let mx = cfg.map_model()?;
    let base = ModelParams {
        theta1: c.target_theta1,
        ..cfg.model
    };
    let (params, matched_depth) = match c.target {
        Some([a, b]) => (base.with_rotations(a, b), None),
        None => {
            let shot = match_kneading(&mx, base, c.radius, c.min_depth)?;
            (shot.params, Some(shot.matched_depth))
        }
    };
    let my = MapModel::new(params)?;
    let h = build_conjugacy(&mx, &my, cfg.engine.depth, c.grid)?;
    let mut csv = String::from("x,h\n");
    for (x, y) in &h.pairs {
        writeln!(csv, "{x},{y}").unwrap();
    }
    out.bytes("conjugacy.csv", csv.as_bytes())?;
    out.json(
        "conjugacy.json",
        &json!({
            "config": cfg,
            "target": params,
            "matched_depth": matched_depth,
            "depth": h.depth,
            "defect": h.defect,
            "monotone": h.monotone,
        }),
    )
}

fn attractor2d(cfg: &Config, out: &mut Out) -> Result<()> {
    let skew = cfg.skew_model()?;
    let cones = verify_cones(&skew, 1000, 100);
    let region = match classify(skew.base(), STRATUM_TOL).stratum {
        Stratum::LPlus | Stratum::LMinus => Some(trapping_interval(skew.base())?.r_l),
        _ => None,
    };
    let cl = &cfg.cloud;
    let cloud = attractor_cloud(&skew, cl.depth, cl.samples, cl.seed, region)?;
    let span = leaf_span_2d(&skew, cl.depth)?;
    let mut csv = String::from("x,y\n");
    for (x, y) in &cloud.points {
        writeln!(csv, "{x},{y}").unwrap();
    }
    out.bytes("cloud.csv", csv.as_bytes())?;
    out.bytes(
        "attractor.pgm",
        &render_pgm(&cloud.points, cl.width, cl.height),
    )?;
    out.json(
        "attractor2d.json",
        &json!({
            "config": cfg,
            "cones": cones,
            "seed_region": region,
            "points": cloud.points.len(),
            "dropped": cloud.dropped,
            "leaf_span": {"arc": span.span, "length": span.length, "full": span.full,
                          "thickness": span.thickness, "pieces": span.pieces.len()},
            "raster": {"width": cl.width, "height": cl.height},
        }),
    )
}

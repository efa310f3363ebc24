//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use glorenz::annulus::{build_skew, family_degree, verify_cones, FamilyKind};
use glorenz::atlas::{
    classify, golden_bound, horseshoe_certificate, horseshoe_strip, iterate_segments,
    sampled_clearance, trapping_interval, Dynamics, Stratum,
};
use glorenz::lab::{load_config, run_path, JUMP_THRESHOLD};
use glorenz::model::STRATUM_TOL;
use glorenz::symbolic::{
    build_conjugacy, itinerary, kneading_data, lex_compare, match_kneading, realize, Letter, Word,
};
use glorenz::{Arc, CirclePoint, MapModel, ModelParams, SignedPoint, PHI};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

type Outcome = Result<String, String>;

fn m0(a: f64, b: f64) -> MapModel {
    MapModel::new(ModelParams::m0(a, b)).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn golden_ratio_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut violations = 0;
    for _ in 0..100_000 {
        let (a, b) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let lambda = rng.gen_range(PHI..=2.0);
        let g = golden_bound(a, b, lambda).map_err(|e| e.to_string())?;
        // direct evaluation of both sides
        let lhs = (lambda * a).max(lambda * lambda * b);
        let rhs = lambda / PHI * (a + b);
        if !g.holds || lhs < rhs - 1e-12 {
            violations += 1;
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    let g = golden_bound(PHI / (PHI * PHI), 1.0 / (PHI * PHI), PHI).map_err(|e| e.to_string())?;
    ensure(
        (g.lhs - 1.0).abs() < 1e-9 && (g.rhs - 1.0).abs() < 1e-9,
        format!("equality case lhs={} rhs={}", g.lhs, g.rhs),
    )?;
    Ok(format!(
        "0 violations in 1e5 triples; equality case lhs={:.12} rhs={:.12}",
        g.lhs, g.rhs
    ))
}

fn fixed_point_criterion() -> Outcome {
    let mut checked = 0;
    let mut exceptions = 0;
    for i in 0..100 {
        for j in 0..100 {
            let (a, b) = ((i as f64 + 0.5) / 100.0, (j as f64 + 0.5) / 100.0);
            let m = m0(a, b);
            if classify(&m, STRATUM_TOL).margin <= 1e-6 {
                continue;
            }
            checked += 1;
            let (p1, p2) = m.fixed_points_unchecked();
            let c = m.c_minus();
            if p1.is_some() != (a > c) || p2.is_some() != (b < c) {
                exceptions += 1;
            }
            // a returned fixed point must be one
            for p in [p1, p2].into_iter().flatten() {
                if CirclePoint::new(m.map_point(p.value())).dist(p) > 1e-9 {
                    exceptions += 1;
                }
            }
        }
    }
    ensure(exceptions == 0, format!("{exceptions} exceptions"))?;
    Ok(format!("{checked} cells off strata, 0 exceptions"))
}

fn order_proposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    let mut pairs = 0;
    while pairs < 1000 {
        let m = m0(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        if classify(&m, STRATUM_TOL).margin <= 1e-6 {
            continue;
        }
        let (u, v): (f64, f64) = (rng.gen_range(1e-9..1.0), rng.gen_range(1e-9..1.0));
        let (x1, x2) = (u.min(v), u.max(v));
        if x2 - x1 < 1e-9 {
            continue;
        }
        pairs += 1;
        let up1 = itinerary(&m, SignedPoint::plus(x1), 40);
        let down2 = itinerary(&m, SignedPoint::minus(x2), 40);
        if !lex_compare(&up1, &down2).is_less() {
            failures += 1;
        }
        for x in [x1, x2] {
            let up = itinerary(&m, SignedPoint::plus(x), 40);
            let down = itinerary(&m, SignedPoint::minus(x), 40);
            if !lex_compare(&down, &up).is_le() {
                failures += 1;
            }
        }
    }
    ensure(failures == 0, format!("{failures} exceptions"))?;
    Ok("1000 pairs, 0 exceptions".into())
}

fn kneading_at_double_loop() -> Outcome {
    let kd = kneading_data(&m0(0.5, 0.5), 50);
    let lower = Word::repeat(Letter::A1, 50);
    let upper = Word::repeat(Letter::B0, 50);
    ensure(
        kd.w_mm.truncate(50) == lower,
        format!("omega_-(c-) = {}", kd.w_mm),
    )?;
    ensure(
        kd.w_mp.truncate(50) == upper,
        format!("omega_+(c-) = {}", kd.w_mp),
    )?;
    let mut checked = 0;
    for i in 0..20 {
        for j in 0..20 {
            let m = m0((i as f64 + 0.5) / 20.0, (j as f64 + 0.5) / 20.0);
            if classify(&m, STRATUM_TOL).margin <= 1e-6 {
                continue;
            }
            checked += 1;
            if let Some((entry, k)) = kneading_data(&m, 50).check_recursion(&m) {
                return Err(format!(
                    "recursion {entry:?} fails at index {k} for cell ({i}, {j})"
                ));
            }
        }
    }
    Ok(format!(
        "A1^50 and B0^50 match; recursion identities hold on {checked} cells"
    ))
}

fn quadrants() -> Outcome {
    let probes = [
        ((0.707, 0.30), Stratum::LPlus),
        ((0.79, 0.20), Stratum::LMinus),
        ((0.78, 0.24), Stratum::Tilde),
        ((0.72, 0.26), Stratum::Tilde),
    ];
    for ((a, b), want) in probes {
        let v = classify(&m0(a, b), STRATUM_TOL);
        ensure(
            v.stratum == want,
            format!("({a}, {b}) -> {}", v.stratum.label()),
        )?;
        if want == Stratum::Tilde {
            ensure(
                v.dynamics == Dynamics::TwoSided,
                format!("({a}, {b}) dynamics {}", v.dynamics),
            )?;
        }
    }
    Ok("L+, L-, tilde, tilde (TwoSided)".into())
}

fn transitivity_coverage() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 1.0f64;
    let mut slowest = 0;
    for (a, b) in [(0.25, 0.75), (0.25, 0.25), (0.6, 0.3)] {
        let m = m0(a, b);
        for _ in 0..100 {
            let seed = Arc::with_len(CirclePoint::new(rng.gen::<f64>()), 1e-3);
            let cov = iterate_segments(&m, seed, 60, 1e-9).map_err(|e| e.to_string())?;
            let reached = cov.history.iter().position(|&f| f >= 0.999);
            match reached {
                Some(n) => slowest = slowest.max(n),
                None => {
                    return Err(format!(
                        "({a}, {b}) seed {seed}: covered {}",
                        cov.covered_fraction
                    ))
                }
            }
            worst = worst.min(cov.covered_fraction);
        }
    }
    Ok(format!(
        "300 seeds; worst covered fraction {worst:.9}; 0.999 reached by iteration {slowest}"
    ))
}

fn lorenz_decomposition() -> Outcome {
    let m = m0(0.707, 0.30);
    let t = trapping_interval(&m).map_err(|e| e.to_string())?;
    ensure(t.invariance_margin > 0.0, "trapping margin not positive")?;
    let clearance = sampled_clearance(&m, &t.r_l, 10_000);
    ensure(clearance > 0.0, format!("sampled clearance {clearance}"))?;
    let r_h = horseshoe_strip(&t);
    let h = horseshoe_certificate(&m, r_h).map_err(|e| e.to_string())?;
    ensure(
        h.crossing_margins.iter().all(|&x| x > 0.0),
        format!("crossings {:?}", h.crossing_margins),
    )?;
    ensure(
        h.orientations == [1, 1],
        format!("orientations {:?}", h.orientations),
    )?;
    ensure(r_h.contains(CirclePoint::new(m.c_minus())), "R_H misses c-")?;
    ensure(
        h.discontinuity_escapes,
        format!("escape margin {}", h.escape_margin),
    )?;
    Ok(format!(
        "trap margin {:.3e} (sampled {:.3e}); crossings {:.3e}, {:.3e}; escape {:.3e}",
        t.invariance_margin,
        clearance,
        h.crossing_margins[0],
        h.crossing_margins[1],
        h.escape_margin
    ))
}

fn realization_round_trip() -> Outcome {
    let m = m0(0.6, 0.3);
    let bound = 2.0 * 1.7f64.powi(-29);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let x: f64 = rng.gen_range(1e-9..1.0);
        let w = itinerary(&m, SignedPoint::plus(x), 30);
        let cyl = realize(&m, &w).map_err(|e| e.to_string())?;
        let d = cyl.midpoint.dist(CirclePoint::new(x));
        worst = worst.max(d);
        ensure(d <= bound, format!("x = {x}: distance {d:.3e}"))?;
    }
    Ok(format!("worst distance {worst:.3e} <= {bound:.3e}"))
}

fn conjugacy() -> Outcome {
    let mx = m0(0.6, 0.3);
    let own = build_conjugacy(&mx, &mx, 30, 1000).map_err(|e| e.to_string())?;
    ensure(own.defect < 1e-6, format!("self defect {:.3e}", own.defect))?;
    let base = ModelParams {
        theta1: 0.10,
        ..ModelParams::default()
    };
    let shot = match_kneading(&mx, base, 0.05, 20).map_err(|e| e.to_string())?;
    let my = MapModel::new(shot.params).map_err(|e| e.to_string())?;
    let h = build_conjugacy(&mx, &my, 30, 1000).map_err(|e| e.to_string())?;
    ensure(h.monotone, "h is not monotone")?;
    ensure(h.defect < 1e-5, format!("defect {:.3e}", h.defect))?;
    Ok(format!(
        "self defect {:.3e}; shot (alpha, beta) = ({:.6}, {:.6}) matched to depth {}; defect {:.3e}, monotone",
        own.defect, shot.params.alpha, shot.params.beta, shot.matched_depth, h.defect
    ))
}

fn two_dimensional_hypotheses() -> Outcome {
    let base = m0(0.6, 0.3);
    let skew = build_skew(base.clone(), 0.2, 0.0, 0.0).map_err(|e| e.to_string())?;
    let r = verify_cones(&skew, 1000, 100);
    ensure(r.passed, format!("cone report failed: {r:?}"))?;
    ensure(
        r.worst_cone_factor <= 0.9,
        format!("cone factor {}", r.worst_cone_factor),
    )?;
    ensure(
        r.worst_product <= 0.25,
        format!("product {}", r.worst_product),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 100_000 {
        let x = CirclePoint::new(rng.gen::<f64>());
        let y = rng.gen_range(-1.0..1.0);
        let Ok((x1, _)) = skew.apply(x, y) else {
            continue;
        };
        n += 1;
        worst = worst.max(x1.dist(CirclePoint::new(base.map_point(x.value()))));
    }
    ensure(worst <= 1e-12, format!("commutation error {worst:.3e}"))?;
    Ok(format!(
        "cone factor {:.4}, product {:.4}, min expansion {:.4}; commutation error {worst:.1e}",
        r.worst_cone_factor, r.worst_product, r.min_expansion
    ))
}

fn essentialness() -> Outcome {
    let base = ModelParams::default();
    let rot = family_degree(|s, u| FamilyKind::Rotation.model(base, s, u), 1e-3)
        .map_err(|e| e.to_string())?;
    ensure(
        rot.entries == [[1, 0], [0, 1]] && rot.essential,
        format!("rotation {:?}", rot.entries),
    )?;
    let cst = family_degree(|s, u| FamilyKind::Constant.model(base, s, u), 1e-3)
        .map_err(|e| e.to_string())?;
    ensure(
        cst.determinant == 0 && !cst.essential,
        format!("constant {:?}", cst.entries),
    )?;
    Ok(format!(
        "rotation {:?} essential; constant det {}",
        rot.entries, cst.determinant
    ))
}

fn collision_path() -> Outcome {
    let cfg = load_config(
        r#"{"path": {"start": [0.77, 0.22], "end": [0.79, 0.22], "steps": 20},
            "engine": {"max_n": 200, "eps": 1e-9}}"#,
    )
    .map_err(|e| e.to_string())?;
    let run = run_path(&cfg).map_err(|e| e.to_string())?;
    let trace: Vec<String> = run
        .rows
        .iter()
        .map(|r| format!("{:.3}:{}:{:.3}", r.alpha, r.stratum.label(), r.span_length))
        .collect();
    let mut problems = Vec::new();
    for r in &run.rows {
        if r.alpha < 0.78 - 1e-3 - 1e-12 && r.span_length >= 0.75 {
            problems.push(format!(
                "alpha {:.3} span {:.3} (want < 0.75)",
                r.alpha, r.span_length
            ));
        }
        if r.alpha > 0.78 + 1e-3 + 1e-12 && !(r.span_full && r.span_length == 1.0) {
            problems.push(format!(
                "alpha {:.3} span {:.3} (want full)",
                r.alpha, r.span_length
            ));
        }
    }
    if run.jumps.len() != 1 {
        problems.push(format!(
            "{} jumps > {JUMP_THRESHOLD} at steps {:?}",
            run.jumps.len(),
            run.jumps
        ));
    }
    if problems.is_empty() {
        Ok(format!("one jump at step {:?}", run.first_jump()))
    } else {
        Err(format!(
            "{}; trace [{}]",
            problems.join("; "),
            trace.join(" ")
        ))
    }
}

fn double_loop_ray() -> Outcome {
    // cusp 1 just below c+ and cusp 2 just above it
    for mu in [1e-2, 1e-3, 1e-4] {
        let v = classify(&m0(1.0 - mu, 0.9 * mu), STRATUM_TOL);
        ensure(
            v.stratum == Stratum::LMinus,
            format!("mu = {mu}: {}", v.stratum.label()),
        )?;
    }
    let n = 200;
    let mut checked = 0;
    for i in -n..=n {
        for j in -n..=n {
            let (da, db) = (1e-2 * i as f64 / n as f64, 1e-2 * j as f64 / n as f64);
            if da.hypot(db) > 1e-2 {
                continue;
            }
            checked += 1;
            let v = classify(&m0(da.rem_euclid(1.0), db.rem_euclid(1.0)), STRATUM_TOL);
            ensure(
                v.stratum != Stratum::LPlus,
                format!("L+ at offset ({da}, {db})"),
            )?;
        }
    }
    Ok(format!(
        "ray classifies L- at all three mu; no L+ among {checked} points of the 1e-2 disc"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("golden-ratio lemma", golden_ratio_lemma),
        ("fixed-point criterion", fixed_point_criterion),
        ("order of one-sided itineraries", order_proposition),
        (
            "kneading at the double loop (0.5, 0.5)",
            kneading_at_double_loop,
        ),
        ("quadrants around (0.75, 0.25)", quadrants),
        ("transitivity coverage", transitivity_coverage),
        ("up-Lorenz decomposition", lorenz_decomposition),
        ("realization round trip", realization_round_trip),
        ("leaf-space conjugacy", conjugacy),
        ("annulus hypotheses", two_dimensional_hypotheses),
        ("essential families", essentialness),
        ("collision path", collision_path),
        ("double-loop ray", double_loop_ray),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use super::classify::{classify, Stratum};
use super::segments::map_piece;
use crate::circle::{dist_ccw, split_arc_at, Arc, CirclePoint};
use crate::error::{Error, Result};
use crate::model::{bisect_increasing, MapModel, STRATUM_TOL};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrappingKind {
    /// Strip around `c₊` (up attractor).
    Up,
    /// Strip around `c₋` (down attractor).
    Down,
    /// Closure of `Σ₊` at the double heteroclinic point; zero clearance.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrappingCertificate {
    pub kind: TrappingKind,
    pub l1: CirclePoint,
    pub l2: CirclePoint,
    pub r_l: Arc,
    /// Clearance of the images of the two pieces of `R_L` inside `R_L`.
    pub invariance_margin: f64,
    pub samples_checked: usize,
}

pub const TRAP_SAMPLES: usize = 10_000;

/// Smallest clearance of `f(x)` inside `r` over `n` evenly spaced samples
/// of `r` (negative when some image leaves `r`).
pub fn sampled_clearance(model: &MapModel, r: &Arc, n: usize) -> f64 {
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let x = r.point_at(r.len() * (i as f64 + 0.5) / n as f64);
        let y = CirclePoint::new(model.map_point(x.value()));
        let clearance = if r.contains(y) {
            dist_ccw(r.start(), y).min(dist_ccw(y, r.end()))
        } else {
            -dist_ccw(r.end(), y).min(dist_ccw(y, r.start()))
        };
        worst = worst.min(clearance);
    }
    worst
}

/// Leaf `l = p + t(q - p)` (ccw from `p`) balancing the two clearances it
/// controls: its own displacement `|f(l) - l|` and its distance to `q`.
fn balance_leaf(model: &MapModel, p: f64, q: f64) -> (f64, f64) {
    let span = q - p;
    let leaf = |t: f64| p + t * span;
    let clearances = |t: f64| {
        let l = leaf(t);
        let fl = model.map_point(CirclePoint::new(l).value());
        let moved = CirclePoint::new(fl).dist(CirclePoint::new(l));
        (moved, (q - l).abs())
    };
    let t = bisect_increasing(
        |t| {
            let (moved, room) = clearances(t);
            moved - room
        },
        0.0,
        1e-9,
        1.0 - 1e-9,
    );
    let (moved, room) = clearances(t);
    (CirclePoint::new(leaf(t)).value(), moved.min(room))
}

/// Separating leaves and an attracting strip `R_L` for the Lorenz piece of
/// an `L⁺`/`L⁻` model, re-verified on samples.
pub fn trapping_interval(model: &MapModel) -> Result<TrappingCertificate> {
    let v = classify(model, STRATUM_TOL);
    let (q1, q2) = (model.q1().value(), model.q2().value());
    let (p1, p2) = match (v.p1, v.p2) {
        (Some(a), Some(b)) => (a.value(), b.value()),
        _ => return Err(Error::NoTrappingInterval),
    };
    let (kind, l1, l2, margin, r_l) = match v.stratum {
        Stratum::LPlus => {
            // l1 between q2 and p1, l2 between p2 and q1; strip through c+
            let (l1, m1) = balance_leaf(model, p1, q2);
            let (l2, m2) = balance_leaf(model, p2, q1);
            (TrappingKind::Up, l1, l2, m1.min(m2), Arc::new(l2, l1))
        }
        Stratum::LMinus => {
            // l1 between p1 and q2, l2 between q1 and p2; strip through c-
            let (l1, m1) = balance_leaf(model, p1, q2);
            let (l2, m2) = balance_leaf(model, p2, q1);
            (TrappingKind::Down, l1, l2, m1.min(m2), Arc::new(l1, l2))
        }
        Stratum::HE1andHE2 | Stratum::Degenerate => {
            let r_l = v.sigma_plus.expect("sigma components exist");
            return Ok(TrappingCertificate {
                kind: TrappingKind::Boundary,
                l1: CirclePoint::new(p1),
                l2: CirclePoint::new(p2),
                r_l,
                invariance_margin: 0.0,
                samples_checked: 0,
            });
        }
        _ => return Err(Error::NoTrappingInterval),
    };
    let sampled = sampled_clearance(model, &r_l, TRAP_SAMPLES);
    if margin <= 0.0 || sampled < 0.5 * margin {
        return Err(Error::NoTrappingInterval);
    }
    Ok(TrappingCertificate {
        kind,
        l1: CirclePoint::new(l1),
        l2: CirclePoint::new(l2),
        r_l,
        invariance_margin: margin,
        samples_checked: TRAP_SAMPLES,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorseshoeCertificate {
    pub r_h: Arc,
    /// `R_H ∩ Σ1` and `R_H ∩ Σ2`.
    pub i_a: Arc,
    pub i_b: Arc,
    pub image_a: Arc,
    pub image_b: Arc,
    /// How far each image overshoots `closure(R_H)` on its tighter side.
    pub crossing_margins: [f64; 2],
    pub orientations: [i8; 2],
    /// Distance from `R_H` to the nearer of `q1`, `q2` (the one-sided images
    /// of the discontinuity inside `R_H`).
    pub escape_margin: f64,
    pub discontinuity_escapes: bool,
}

fn crossing_margin(image: &Arc, r: &Arc) -> f64 {
    if image.is_full() || image.len() >= 1.0 {
        return 0.5 * (1.0 - r.len());
    }
    if !image.covers(r, 0.0) {
        let lead = dist_ccw(image.start(), r.start());
        let trail = dist_ccw(r.end(), image.end());
        return -(1.0 - lead).min(1.0 - trail).min(r.len());
    }
    dist_ccw(image.start(), r.start()).min(dist_ccw(r.end(), image.end()))
}

/// Markov crossing certificate for the singular fake horseshoe in a strip
/// `R_H` containing exactly one discontinuity.
pub fn horseshoe_certificate(model: &MapModel, r_h: Arc) -> Result<HorseshoeCertificate> {
    let c = CirclePoint::new(model.c_minus());
    let has_plus = r_h.contains(CirclePoint::ZERO);
    let has_minus = r_h.contains(c);
    if r_h.is_full() || has_plus == has_minus {
        return Err(Error::Precondition(
            "the strip must contain exactly one discontinuity".into(),
        ));
    }
    // the horseshoe lives on the side away from the attractor
    let wanted_minus = match classify(model, STRATUM_TOL).stratum {
        Stratum::LPlus => Some(true),
        Stratum::LMinus => Some(false),
        _ => None,
    };
    if wanted_minus.is_some_and(|w| w != has_minus) {
        return Err(Error::Precondition(format!(
            "the strip must contain {}",
            if has_minus { "c+" } else { "c-" }
        )));
    }
    let pieces = split_arc_at(&r_h, &[CirclePoint::ZERO, c]);
    let (i_a, i_b) = if has_minus {
        (pieces[0], pieces[1])
    } else {
        (pieces[1], pieces[0])
    };
    let image_a = map_piece(model, &i_a);
    let image_b = map_piece(model, &i_b);
    let margin_a = crossing_margin(&image_a, &r_h);
    let margin_b = crossing_margin(&image_b, &r_h);
    if margin_a <= 0.0 {
        return Err(Error::NotMarkov {
            piece: "I_A",
            margin: margin_a,
        });
    }
    if margin_b <= 0.0 {
        return Err(Error::NotMarkov {
            piece: "I_B",
            margin: margin_b,
        });
    }
    let escape = |q: CirclePoint| {
        if r_h.closure_contains(q, 0.0) {
            -dist_ccw(r_h.start(), q).min(dist_ccw(q, r_h.end()))
        } else {
            dist_ccw(r_h.end(), q).min(dist_ccw(q, r_h.start()))
        }
    };
    let escape_margin = escape(model.q1()).min(escape(model.q2()));
    let orientation = |img: &Arc| if img.len() > 0.0 { 1 } else { -1 };
    Ok(HorseshoeCertificate {
        r_h,
        i_a,
        i_b,
        image_a,
        image_b,
        crossing_margins: [margin_a, margin_b],
        orientations: [orientation(&image_a), orientation(&image_b)],
        escape_margin,
        discontinuity_escapes: escape_margin > 0.0,
    })
}

/// The strip complementary to a trapping strip, carrying the horseshoe.
pub fn horseshoe_strip(trap: &TrappingCertificate) -> Arc {
    Arc::new(trap.r_l.end(), trap.r_l.start())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;

    fn m0(a: f64, b: f64) -> MapModel {
        MapModel::new(ModelParams::m0(a, b)).unwrap()
    }

    #[test]
    fn up_trapping_strip() {
        let m = m0(0.707, 0.3);
        let t = trapping_interval(&m).unwrap();
        assert_eq!(t.kind, TrappingKind::Up);
        assert!(t.l2.value() > 0.70 && t.l2.value() < 0.707);
        assert!(t.l1.value() > 0.30 && t.l1.value() < 0.309);
        assert!(t.invariance_margin > 0.0);
        assert!(t.r_l.contains(CirclePoint::ZERO));
        assert!(sampled_clearance(&m, &t.r_l, 10_000) >= 0.5 * t.invariance_margin);
    }

    #[test]
    fn midpoint_leaves_are_also_trapping() {
        // independent check with hand-picked leaves
        let m = m0(0.707, 0.3);
        let r = Arc::new(0.7035, 0.3045);
        assert!(sampled_clearance(&m, &r, 10_000) > 0.0);
    }

    #[test]
    fn down_trapping_strip() {
        let m = m0(0.79, 0.2);
        let t = trapping_interval(&m).unwrap();
        assert_eq!(t.kind, TrappingKind::Down);
        assert!(t.r_l.contains(CirclePoint::new(0.5)));
        assert!(t.invariance_margin > 0.0);
    }

    #[test]
    fn trapping_outside_lorenz_regions() {
        assert_eq!(
            trapping_interval(&m0(0.6, 0.3)),
            Err(Error::NoTrappingInterval)
        );
        let t = trapping_interval(&m0(0.75, 0.25)).unwrap();
        assert_eq!(t.kind, TrappingKind::Boundary);
        assert_eq!(t.invariance_margin, 0.0);
        assert!((t.r_l.start().value() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn horseshoe_for_up_attractor() {
        let m = m0(0.707, 0.3);
        let h = horseshoe_certificate(&m, Arc::new(0.3045, 0.7035)).unwrap();
        assert!((h.image_a.start().value() - 0.3008).abs() < 1e-4);
        assert!((h.image_a.end().value() - 0.707).abs() < 1e-12);
        assert!((h.image_b.start().value() - 0.3).abs() < 1e-12);
        assert!((h.image_b.end().value() - 0.707).abs() < 1e-12);
        assert_eq!(h.orientations, [1, 1]);
        assert!(h.crossing_margins.iter().all(|&x| x > 0.0));
        assert!(h.discontinuity_escapes);
    }

    #[test]
    fn horseshoe_for_down_attractor() {
        let m = m0(0.79, 0.2);
        let t = trapping_interval(&m).unwrap();
        let h = horseshoe_certificate(&m, horseshoe_strip(&t)).unwrap();
        assert!(h.r_h.contains(CirclePoint::ZERO));
        assert_eq!(h.orientations, [1, 1]);
        assert!(h.discontinuity_escapes);
    }

    #[test]
    fn strip_must_hold_one_discontinuity() {
        let m = m0(0.707, 0.3);
        assert!(matches!(
            horseshoe_certificate(&m, Arc::new(0.7, 0.6)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            horseshoe_certificate(&m, Arc::new(0.7, 0.3)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            horseshoe_certificate(&m, Arc::new(0.1, 0.2)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            horseshoe_certificate(&m, Arc::new(0.45, 0.55)),
            Err(Error::NotMarkov { .. })
        ));
    }
}

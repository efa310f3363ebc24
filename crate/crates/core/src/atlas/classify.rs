use crate::circle::{Arc, CirclePoint};
use crate::error::{Error, Result};
use crate::model::{Branch, BranchProfile, MapModel, ModelParams};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stratum {
    #[serde(rename = "O--")]
    OMinusMinus,
    #[serde(rename = "O+-")]
    OPlusMinus,
    #[serde(rename = "O-+")]
    OMinusPlus,
    #[serde(rename = "O++_Lplus")]
    LPlus,
    #[serde(rename = "O++_Lminus")]
    LMinus,
    #[serde(rename = "O++_tilde")]
    Tilde,
    #[serde(rename = "H1+")]
    H1Plus,
    #[serde(rename = "H1-")]
    H1Minus,
    #[serde(rename = "H2+")]
    H2Plus,
    #[serde(rename = "H2-")]
    H2Minus,
    #[serde(rename = "H12+")]
    H12Plus,
    #[serde(rename = "H12-")]
    H12Minus,
    HE1,
    HE2,
    HE1andHE2,
    Degenerate,
}

impl Stratum {
    pub const ALL: [Stratum; 16] = [
        Stratum::OMinusMinus,
        Stratum::OPlusMinus,
        Stratum::OMinusPlus,
        Stratum::LPlus,
        Stratum::LMinus,
        Stratum::Tilde,
        Stratum::H1Plus,
        Stratum::H1Minus,
        Stratum::H2Plus,
        Stratum::H2Minus,
        Stratum::H12Plus,
        Stratum::H12Minus,
        Stratum::HE1,
        Stratum::HE2,
        Stratum::HE1andHE2,
        Stratum::Degenerate,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Stratum::OMinusMinus => "O--",
            Stratum::OPlusMinus => "O+-",
            Stratum::OMinusPlus => "O-+",
            Stratum::LPlus => "O++_Lplus",
            Stratum::LMinus => "O++_Lminus",
            Stratum::Tilde => "O++_tilde",
            Stratum::H1Plus => "H1+",
            Stratum::H1Minus => "H1-",
            Stratum::H2Plus => "H2+",
            Stratum::H2Minus => "H2-",
            Stratum::H12Plus => "H12+",
            Stratum::H12Minus => "H12-",
            Stratum::HE1 => "HE1",
            Stratum::HE2 => "HE2",
            Stratum::HE1andHE2 => "HE1andHE2",
            Stratum::Degenerate => "Degenerate",
        }
    }

    pub fn from_label(s: &str) -> Option<Stratum> {
        Stratum::ALL.into_iter().find(|st| st.label() == s)
    }

    /// The dynamics attached to each stratum.
    pub fn dynamics(self) -> Dynamics {
        match self {
            Stratum::OMinusMinus
            | Stratum::OPlusMinus
            | Stratum::OMinusPlus
            | Stratum::Tilde
            | Stratum::H1Plus
            | Stratum::H1Minus
            | Stratum::H2Plus
            | Stratum::H2Minus => Dynamics::TwoSided,
            Stratum::LPlus => Dynamics::UpLorenzPlusFakeHorseshoe,
            Stratum::LMinus => Dynamics::DownLorenzPlusFakeHorseshoe,
            Stratum::H12Plus | Stratum::H12Minus => Dynamics::FatLorenz,
            Stratum::HE1 | Stratum::HE2 => Dynamics::CollisionBoundary,
            Stratum::HE1andHE2 | Stratum::Degenerate => Dynamics::DoubleFullLorenz,
        }
    }

    /// Open regions of the atlas (as opposed to strata of positive codimension).
    pub fn is_open(self) -> bool {
        matches!(
            self,
            Stratum::OMinusMinus
                | Stratum::OPlusMinus
                | Stratum::OMinusPlus
                | Stratum::LPlus
                | Stratum::LMinus
                | Stratum::Tilde
        )
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dynamics {
    TwoSided,
    UpLorenzPlusFakeHorseshoe,
    DownLorenzPlusFakeHorseshoe,
    FatLorenz,
    CollisionBoundary,
    DoubleFullLorenz,
}

impl fmt::Display for Dynamics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub stratum: Stratum,
    pub dynamics: Dynamics,
    /// Smallest distance (in leaf units) to any stratum.
    pub margin: f64,
    pub p1: Option<CirclePoint>,
    pub p2: Option<CirclePoint>,
    pub sigma_plus: Option<Arc>,
    pub sigma_minus: Option<Arc>,
}

/// The two components of the circle minus `{p1, p2}`: `Σ₊ ∋ c₊` runs ccw
/// from `p2` to `p1`, `Σ₋ ∋ c₋` from `p1` to `p2`.
pub fn sigma_components(model: &MapModel) -> Result<(Arc, Arc)> {
    match model.fixed_points_unchecked() {
        (Some(p1), Some(p2)) => Ok((Arc::new(p2, p1), Arc::new(p1, p2))),
        _ => Err(Error::NoFixedPoints),
    }
}

pub fn classify(model: &MapModel, tol: f64) -> RegionVerdict {
    let c = CirclePoint::new(model.c_minus());
    let (q1, q2) = (model.q1(), model.q2());
    let d = [
        q1.dist(CirclePoint::ZERO),
        q1.dist(c),
        q2.dist(CirclePoint::ZERO),
        q2.dist(c),
    ];
    let mut margin = d.iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = |stratum: Stratum, margin: f64, p1, p2, sp, sm| RegionVerdict {
        stratum,
        dynamics: stratum.dynamics(),
        margin,
        p1,
        p2,
        sigma_plus: sp,
        sigma_minus: sm,
    };

    // cusp points on the discontinuities
    let on = |dist: f64| dist <= tol;
    let h1 = if on(d[0]) {
        Some(true)
    } else if on(d[1]) {
        Some(false)
    } else {
        None
    };
    let h2 = if on(d[2]) {
        Some(true)
    } else if on(d[3]) {
        Some(false)
    } else {
        None
    };
    let h_stratum = match (h1, h2) {
        (Some(true), Some(true)) => Some(Stratum::H12Plus),
        (Some(false), Some(false)) => Some(Stratum::H12Minus),
        // mixed signs carry the label of the first cusp
        (Some(true), _) => Some(Stratum::H1Plus),
        (Some(false), _) => Some(Stratum::H1Minus),
        (None, Some(true)) => Some(Stratum::H2Plus),
        (None, Some(false)) => Some(Stratum::H2Minus),
        (None, None) => None,
    };
    if let Some(st) = h_stratum {
        return verdict(st, margin, None, None, None, None);
    }

    // ω_i = - iff q_i lies in its own branch arc
    let q1_own = q1.value() < c.value();
    let q2_own = q2.value() > c.value();
    let (p1, p2) = model.fixed_points_unchecked();
    match (q1_own, q2_own) {
        (true, true) => return verdict(Stratum::OMinusMinus, margin, p1, p2, None, None),
        (false, true) => return verdict(Stratum::OPlusMinus, margin, p1, p2, None, None),
        (true, false) => return verdict(Stratum::OMinusPlus, margin, p1, p2, None, None),
        (false, false) => {}
    }

    let (p1, p2) = (p1.expect("p1 exists in O++"), p2.expect("p2 exists in O++"));
    let (sp, sm) = (Arc::new(p2, p1), Arc::new(p1, p2));
    let e1 = q1.dist(p2);
    let e2 = q2.dist(p1);
    margin = margin.min(e1).min(e2);
    let stratum = match (e1 <= tol, e2 <= tol) {
        (true, true) if model.is_affine() => Stratum::Degenerate,
        (true, true) => Stratum::HE1andHE2,
        (true, false) => Stratum::HE1,
        (false, true) => Stratum::HE2,
        (false, false) => {
            let q1_plus = q1.value() > p2.value();
            let q2_plus = q2.value() < p1.value();
            match (q1_plus, q2_plus) {
                (true, true) => Stratum::LPlus,
                (false, false) => Stratum::LMinus,
                _ => Stratum::Tilde,
            }
        }
    };
    verdict(stratum, margin, Some(p1), Some(p2), Some(sp), Some(sm))
}

/// Points of the two heteroclinic curves over `n` values of `alpha` in
/// `(c, 1)`: `HE1` (`q1 = p2`) and `HE2` (`q2 = p1`), given as `beta` values
/// when they fall in `(0, c)`.
pub fn he_curves(params: ModelParams, n: usize) -> Result<Vec<(f64, Option<f64>, Option<f64>)>> {
    let c = params.c_minus;
    let probe = MapModel::new(params.with_rotations(0.75, 0.25))?;
    let g2 = *probe.profile(Branch::Two);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let alpha = c + (1.0 - c) * (i as f64 + 0.5) / n as f64;
        let he1 = CirclePoint::new(alpha - g2.value(alpha - c)).value();
        let m = MapModel::new(params.with_rotations(alpha, 0.25))?;
        let he2 = m.fixed_points_unchecked().0.map(|p| p.value());
        let inside = |b: f64| b > 0.0 && b < c;
        out.push((
            alpha,
            Some(he1).filter(|&b| inside(b)),
            he2.filter(|&b| inside(b)),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::STRATUM_TOL;

    fn classify_m0(a: f64, b: f64) -> RegionVerdict {
        classify(&MapModel::new(ModelParams::m0(a, b)).unwrap(), STRATUM_TOL)
    }

    #[test]
    fn classification_examples() {
        let v = classify_m0(0.25, 0.75);
        assert_eq!(
            (v.stratum, v.dynamics),
            (Stratum::OMinusMinus, Dynamics::TwoSided)
        );
        let v = classify_m0(0.707, 0.3);
        assert_eq!(v.stratum, Stratum::LPlus);
        assert!((v.p2.unwrap().value() - 0.7).abs() < 1e-12);
        assert!((v.p1.unwrap().value() - 0.309).abs() < 1e-3);
        let v = classify_m0(0.75, 0.25);
        assert_eq!(
            (v.stratum, v.dynamics),
            (Stratum::HE1andHE2, Dynamics::DoubleFullLorenz)
        );
        assert!(v.margin < 1e-12);
    }

    #[test]
    fn quadrants_around_double_heteroclinic_point() {
        assert_eq!(classify_m0(0.707, 0.30).stratum, Stratum::LPlus);
        assert_eq!(classify_m0(0.79, 0.20).stratum, Stratum::LMinus);
        assert_eq!(classify_m0(0.78, 0.24).stratum, Stratum::Tilde);
        assert_eq!(classify_m0(0.72, 0.26).stratum, Stratum::Tilde);
    }

    #[test]
    fn homoclinic_strata() {
        assert_eq!(classify_m0(0.0, 0.0).stratum, Stratum::H12Plus);
        assert_eq!(classify_m0(0.5, 0.5).stratum, Stratum::H12Minus);
        assert_eq!(classify_m0(0.0, 0.3).stratum, Stratum::H1Plus);
        assert_eq!(classify_m0(0.6, 0.5).stratum, Stratum::H2Minus);
        assert_eq!(classify_m0(0.0, 0.5).stratum, Stratum::H1Plus);
        assert_eq!(classify_m0(0.5, 0.0).stratum, Stratum::H1Minus);
        assert_eq!(classify_m0(0.3, 1.0 - 1e-10).stratum, Stratum::H2Plus);
    }

    #[test]
    fn affine_double_heteroclinic_is_degenerate() {
        let m = MapModel::new(ModelParams {
            theta1: 0.0,
            ..ModelParams::m0(0.7, 0.3)
        })
        .unwrap();
        assert_eq!(classify(&m, STRATUM_TOL).stratum, Stratum::Degenerate);
    }

    #[test]
    fn sigma_examples() {
        let m = MapModel::new(ModelParams::m0(0.6, 0.3)).unwrap();
        let (sp, sm) = sigma_components(&m).unwrap();
        assert!((sp.start().value() - 0.7).abs() < 1e-12);
        assert!((sp.end().value() - 0.420).abs() < 1e-3);
        assert!(sp.contains(CirclePoint::ZERO) && sm.contains(CirclePoint::new(0.5)));
        let m = MapModel::new(ModelParams::m0(0.3, 0.7)).unwrap();
        assert_eq!(sigma_components(&m), Err(Error::NoFixedPoints));
        let m = MapModel::new(ModelParams::m0(0.75, 0.25)).unwrap();
        let (sp, _) = sigma_components(&m).unwrap();
        assert!(
            (sp.start().value() - 0.75).abs() < 1e-12 && (sp.end().value() - 0.25).abs() < 1e-12
        );
    }

    #[test]
    fn he_curves_cross_at_double_point() {
        let pts = he_curves(ModelParams::default(), 200).unwrap();
        // HE1 is beta = 1 - alpha for the affine second branch
        for &(a, he1, _) in &pts {
            if let Some(b) = he1 {
                assert!((b - (1.0 - a)).abs() < 1e-12);
            }
        }
        let near = pts
            .iter()
            .min_by(|x, y| (x.0 - 0.75).abs().total_cmp(&(y.0 - 0.75).abs()))
            .unwrap();
        assert!((near.1.unwrap() - near.2.unwrap()).abs() < 1e-2);
    }

    #[test]
    fn dynamics_is_a_function_of_stratum() {
        for a in 0..40 {
            for b in 0..40 {
                let v = classify_m0(a as f64 / 40.0 + 0.0123, b as f64 / 40.0 + 0.0077);
                assert_eq!(v.dynamics, v.stratum.dynamics());
            }
        }
    }
}

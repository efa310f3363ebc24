use crate::error::{Error, Result};
use crate::model::PHI;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoldenBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `max(λ ℓ_ab, λ² ℓ_bc) ≥ (λ/φ)(ℓ_ab + ℓ_bc)` for adjacent segments.
pub fn golden_bound(l_ab: f64, l_bc: f64, lambda: f64) -> Result<GoldenBound> {
    if lambda < PHI {
        return Err(Error::LambdaBelowPhi(lambda));
    }
    if !(l_ab >= 0.0 && l_bc >= 0.0) {
        return Err(Error::InvalidParameter {
            field: "length",
            reason: "segment lengths must be nonnegative".into(),
        });
    }
    let lhs = (lambda * l_ab).max(lambda * lambda * l_bc);
    let rhs = lambda / PHI * (l_ab + l_bc);
    Ok(GoldenBound {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let g = golden_bound(0.618034, 0.381966, PHI).unwrap();
        assert!((g.lhs - 1.0).abs() < 1e-6 && (g.rhs - 1.0).abs() < 1e-6 && g.holds);
        let g = golden_bound(0.5, 0.5, 1.8).unwrap();
        assert!((g.lhs - 1.62).abs() < 1e-12);
        assert!((g.rhs - 1.8 / PHI).abs() < 1e-12 && g.holds);
        let g = golden_bound(1.0, 0.0, PHI).unwrap();
        assert!((g.lhs - PHI).abs() < 1e-12 && (g.rhs - 1.0).abs() < 1e-12);
        assert_eq!(golden_bound(0.5, 0.5, 1.5), Err(Error::LambdaBelowPhi(1.5)));
    }

    proptest! {
        #[test]
        fn holds_above_phi(a in 0.0f64..1.0, b in 0.0f64..1.0, lambda in PHI..2.0) {
            prop_assert!(golden_bound(a, b, lambda).unwrap().holds);
        }
    }
}

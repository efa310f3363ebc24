//! Arithmetic conditions on the eigenvalues of the singularity.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueTriple {
    pub lambda_ss: f64,
    pub lambda_s: f64,
    pub lambda_u: f64,
}

impl EigenvalueTriple {
    pub fn new(lambda_ss: f64, lambda_s: f64, lambda_u: f64) -> Self {
        EigenvalueTriple {
            lambda_ss,
            lambda_s,
            lambda_u,
        }
    }

    fn as_array(&self) -> [f64; 3] {
        [self.lambda_ss, self.lambda_s, self.lambda_u]
    }

    /// `λss < λs < 0 < -λs < λu < -λss`.
    pub fn is_lorenz_like(&self) -> bool {
        let EigenvalueTriple {
            lambda_ss: ss,
            lambda_s: s,
            lambda_u: u,
        } = *self;
        ss < s && s < 0.0 && 0.0 < -s && -s < u && u < -ss
    }
}

/// A resonance `Σ m_j λ_j = λ_target` up to tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resonance {
    pub m: [u32; 3],
    /// 0 = λss, 1 = λs, 2 = λu.
    pub target: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityReport {
    pub lorenz_like: bool,
    pub order: u32,
    pub resonances: Vec<Resonance>,
}

impl SingularityReport {
    pub fn non_resonant(&self) -> bool {
        self.resonances.is_empty()
    }
}

/// Lorenz-like verdict plus all resonances of order `2 ≤ |m| < n`.
pub fn check_singularity_conditions(
    eigs: EigenvalueTriple,
    n: u32,
    tol: f64,
) -> Result<SingularityReport> {
    if n < 3 {
        return Err(Error::Precondition(format!("resonance order {n} < 3")));
    }
    let lam = eigs.as_array();
    let mut resonances = Vec::new();
    for total in 2..n {
        for m0 in 0..=total {
            for m1 in 0..=(total - m0) {
                let m = [m0, m1, total - m0 - m1];
                let sum: f64 = m.iter().zip(lam).map(|(&k, l)| k as f64 * l).sum();
                for (target, &l) in lam.iter().enumerate() {
                    let residual = (sum - l).abs();
                    if residual <= tol {
                        resonances.push(Resonance {
                            m,
                            target,
                            residual,
                        });
                    }
                }
            }
        }
    }
    Ok(SingularityReport {
        lorenz_like: eigs.is_lorenz_like(),
        order: n,
        resonances,
    })
}

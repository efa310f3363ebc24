//! The two-branch expanding circle-map family.
//!
//! The circle is cut by the discontinuities `c+ = 0` and `c- = c_minus` into
//! `Σ1 = (0, c-)` and `Σ2 = (c-, 1)`. Each branch wraps its arc exactly once
//! around the circle, offset by the rotation `alpha` (branch 1) or `beta`
//! (branch 2), so both one-sided limits at the ends of branch `i` equal the
//! cusp point `q_i`.

use crate::circle::{CirclePoint, TOL};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The golden ratio, lower bound for the expansion rate.
pub const PHI: f64 = 1.618_033_988_749_894_8;

/// Default tolerance for deciding that a model sits on a stratum.
pub const STRATUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub c_minus: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub lambda_min_required: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            c_minus: 0.5,
            alpha: 0.6,
            beta: 0.3,
            theta1: 0.15,
            theta2: 0.0,
            lambda_min_required: PHI,
        }
    }
}

impl ModelParams {
    /// The default model with rotations replaced.
    pub fn m0(alpha: f64, beta: f64) -> Self {
        ModelParams {
            alpha,
            beta,
            ..Default::default()
        }
    }

    pub fn with_rotations(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }
}

/// Monotone lift of one branch on its local coordinate `t ∈ [0, len]`,
/// with `value(0) = 0` and `value(len) = 1`.
pub trait BranchProfile {
    fn len(&self) -> f64;
    fn value(&self, t: f64) -> f64;
    fn slope(&self, t: f64) -> f64;
    /// Analytic lower bound on `slope` over `[0, len]`.
    fn min_slope(&self) -> f64;
    fn max_slope(&self) -> f64;
}

/// `g(t) = t/L + (θ/2π) sin(2π t/L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineProfile {
    pub len: f64,
    pub theta: f64,
}

impl BranchProfile for SineProfile {
    fn len(&self) -> f64 {
        self.len
    }

    #[inline]
    fn value(&self, t: f64) -> f64 {
        let u = t / self.len;
        u + self.theta / (2.0 * PI) * (2.0 * PI * u).sin()
    }

    #[inline]
    fn slope(&self, t: f64) -> f64 {
        (1.0 + self.theta * (2.0 * PI * t / self.len).cos()) / self.len
    }

    fn min_slope(&self) -> f64 {
        (1.0 - self.theta.abs()) / self.len
    }

    fn max_slope(&self) -> f64 {
        (1.0 + self.theta.abs()) / self.len
    }
}

impl SineProfile {
    /// Inverse of `value` on `[0, 1]`, by bisection.
    pub fn inverse(&self, v: f64) -> f64 {
        let len = self.len;
        bisect_increasing(|t| self.value(t), v, 0.0, len)
    }
}

/// Root of `h(x) = target` for increasing `h` on `[lo, hi]`, by bisection.
pub fn bisect_increasing(h: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Side of a one-sided limit: `Plus` is the right (ccw) side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedPoint {
    pub point: CirclePoint,
    pub side: Side,
}

impl SignedPoint {
    pub fn new(x: f64, side: Side) -> Self {
        SignedPoint {
            point: CirclePoint::new(x),
            side,
        }
    }

    pub fn plus(x: f64) -> Self {
        Self::new(x, Side::Plus)
    }

    pub fn minus(x: f64) -> Self {
        Self::new(x, Side::Minus)
    }
}

/// Which branch of the map a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    pub fn index(self) -> usize {
        match self {
            Branch::One => 0,
            Branch::Two => 1,
        }
    }
}

/// Position of a point relative to the two discontinuities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    CPlus,
    CMinus,
    Interior(Branch),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapModel {
    params: ModelParams,
    c: f64,
    alpha: f64,
    beta: f64,
    profiles: [SineProfile; 2],
    a_star: f64,
    b_star: f64,
    lambda_min: f64,
}

/// Snaps values within [`TOL`] of 0 (mod 1) onto 0.
fn normalize_rotation(x: f64) -> f64 {
    let v = CirclePoint::new(x).value();
    if v < TOL || v > 1.0 - TOL {
        0.0
    } else {
        v
    }
}

pub fn build_model(params: ModelParams) -> Result<MapModel> {
    MapModel::new(params)
}

impl MapModel {
    pub fn new(params: ModelParams) -> Result<Self> {
        let c = params.c_minus;
        if !(c > 0.0 && c < 1.0) || !c.is_finite() {
            return Err(Error::DegenerateArc(c));
        }
        for (field, th) in [("theta1", params.theta1), ("theta2", params.theta2)] {
            if !(0.0..1.0).contains(&th) {
                return Err(Error::InvalidParameter {
                    field,
                    reason: format!("{th} outside [0, 1)"),
                });
            }
        }
        if !params.alpha.is_finite() || !params.beta.is_finite() {
            return Err(Error::InvalidParameter {
                field: "alpha",
                reason: "rotations must be finite".into(),
            });
        }
        let profiles = [
            SineProfile {
                len: c,
                theta: params.theta1,
            },
            SineProfile {
                len: 1.0 - c,
                theta: params.theta2,
            },
        ];
        let lambda_min = profiles[0].min_slope().min(profiles[1].min_slope());
        if lambda_min <= params.lambda_min_required {
            return Err(Error::ExpansionTooWeak {
                lambda_min,
                required: params.lambda_min_required,
            });
        }
        let alpha = normalize_rotation(params.alpha);
        let beta = normalize_rotation(params.beta);
        // preimage of c+ inside each branch; collapses onto the branch end
        // when the cusp sits on c+
        let a_star = if alpha == 0.0 {
            c
        } else {
            profiles[0].inverse(1.0 - alpha)
        };
        let b_star = if beta == 0.0 {
            1.0
        } else {
            c + profiles[1].inverse(1.0 - beta)
        };
        Ok(MapModel {
            params,
            c,
            alpha,
            beta,
            profiles,
            a_star,
            b_star,
            lambda_min,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Position of the discontinuity `c-`.
    pub fn c_minus(&self) -> f64 {
        self.c
    }

    pub fn q1(&self) -> CirclePoint {
        CirclePoint::new(self.alpha)
    }

    pub fn q2(&self) -> CirclePoint {
        CirclePoint::new(self.beta)
    }

    pub fn q(&self, branch: Branch) -> CirclePoint {
        match branch {
            Branch::One => self.q1(),
            Branch::Two => self.q2(),
        }
    }

    pub fn a_star(&self) -> f64 {
        self.a_star
    }

    pub fn b_star(&self) -> f64 {
        self.b_star
    }

    pub fn a1_empty(&self) -> bool {
        self.alpha == 0.0
    }

    pub fn b1_empty(&self) -> bool {
        self.beta == 0.0
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.profiles[0]
            .max_slope()
            .max(self.profiles[1].max_slope())
    }

    pub fn profile(&self, branch: Branch) -> &SineProfile {
        &self.profiles[branch.index()]
    }

    /// Both branches are affine (the degenerate family).
    pub fn is_affine(&self) -> bool {
        self.params.theta1 == 0.0 && self.params.theta2 == 0.0
    }

    pub fn locate(&self, p: CirclePoint) -> Location {
        let x = p.value();
        if x <= TOL || x >= 1.0 - TOL {
            Location::CPlus
        } else if (x - self.c).abs() <= TOL {
            Location::CMinus
        } else if x < self.c {
            Location::Interior(Branch::One)
        } else {
            Location::Interior(Branch::Two)
        }
    }

    /// Start of a branch's arc.
    pub fn branch_start(&self, branch: Branch) -> f64 {
        match branch {
            Branch::One => 0.0,
            Branch::Two => self.c,
        }
    }

    fn rotation(&self, branch: Branch) -> f64 {
        match branch {
            Branch::One => self.alpha,
            Branch::Two => self.beta,
        }
    }

    /// Lift of `branch` at local coordinate `t ∈ [0, L_i]`; ranges over
    /// `[q_i, q_i + 1]`.
    #[inline]
    pub fn lift_local(&self, branch: Branch, t: f64) -> f64 {
        self.rotation(branch) + self.profiles[branch.index()].value(t)
    }

    /// Lift at an absolute position inside (or at the ends of) the branch arc.
    #[inline]
    pub fn lift(&self, branch: Branch, x: f64) -> f64 {
        let t = (x - self.branch_start(branch)).clamp(0.0, self.profiles[branch.index()].len);
        self.lift_local(branch, t)
    }

    /// Raw image of an interior point (no snapping).
    pub fn apply_raw(&self, x: f64) -> f64 {
        let branch = if x < self.c { Branch::One } else { Branch::Two };
        CirclePoint::new(self.lift(branch, x)).value()
    }

    /// Snaps values within [`TOL`] of a discontinuity onto it.
    pub fn snap(&self, y: f64) -> f64 {
        if y <= TOL || y >= 1.0 - TOL {
            0.0
        } else if (y - self.c).abs() <= TOL {
            self.c
        } else {
            y
        }
    }

    /// One step of the signed-point dynamics.
    ///
    /// Interior points move by the branch formula keeping their side; the
    /// discontinuities follow the automaton `(c+,+) -> (q1,+)`,
    /// `(c+,-) -> (q2,-)`, `(c-,+) -> (q2,+)`, `(c-,-) -> (q1,-)`.
    pub fn eval(&self, sp: SignedPoint) -> SignedPoint {
        let image = match (self.locate(sp.point), sp.side) {
            (Location::CPlus, Side::Plus) | (Location::CMinus, Side::Minus) => self.alpha,
            (Location::CPlus, Side::Minus) | (Location::CMinus, Side::Plus) => self.beta,
            (Location::Interior(b), _) => {
                let y = CirclePoint::new(self.lift(b, sp.point.value())).value();
                self.snap(y)
            }
        };
        SignedPoint {
            point: CirclePoint::new(image),
            side: sp.side,
        }
    }

    /// Image of a plain point; discontinuities use their right limit.
    pub fn map_point(&self, x: f64) -> f64 {
        self.eval(SignedPoint::plus(x)).point.value()
    }

    pub fn derivative(&self, p: CirclePoint) -> Result<f64> {
        match self.locate(p) {
            Location::Interior(b) => {
                let t = p.value() - self.branch_start(b);
                Ok(self.profiles[b.index()].slope(t))
            }
            _ => Err(Error::AtDiscontinuity(p.value())),
        }
    }

    /// The unique preimage of `y` in the given branch, or `None` for the
    /// branch's own cusp point (which only has the two endpoint limits).
    pub fn inverse_branch(&self, branch: Branch, y: CirclePoint) -> Option<CirclePoint> {
        let q = self.rotation(branch);
        if y.approx_eq(CirclePoint::new(q), TOL) {
            return None;
        }
        let mut target = y.value() - q;
        if target < 0.0 {
            target += 1.0;
        }
        let t = self.profiles[branch.index()].inverse(target);
        Some(CirclePoint::new(self.branch_start(branch) + t))
    }

    /// Fixed points `p1 ∈ Σ1` and `p2 ∈ Σ2`.
    ///
    /// `p1` exists iff `q1 ∈ Σ2` and `p2` exists iff `q2 ∈ Σ1`.
    pub fn fixed_points(&self) -> Result<(Option<CirclePoint>, Option<CirclePoint>)> {
        let c = CirclePoint::new(self.c);
        for (which, q) in [(1, self.q1()), (2, self.q2())] {
            if q.dist(CirclePoint::ZERO) <= STRATUM_TOL || q.dist(c) <= STRATUM_TOL {
                return Err(Error::OnStratum { which });
            }
        }
        Ok(self.fixed_points_unchecked())
    }

    /// Fixed points without the stratum guard.
    pub fn fixed_points_unchecked(&self) -> (Option<CirclePoint>, Option<CirclePoint>) {
        let p1 = (self.alpha > self.c).then(|| {
            // α + g1(x) - x - 1 is increasing on [0, c]
            let h = |x: f64| self.lift_local(Branch::One, x) - x - 1.0;
            CirclePoint::new(bisect_increasing(h, 0.0, 0.0, self.c))
        });
        let p2 = (self.beta > 0.0 && self.beta < self.c).then(|| {
            let h = |x: f64| self.lift(Branch::Two, x) - x;
            CirclePoint::new(bisect_increasing(h, 0.0, self.c, 1.0))
        });
        (p1, p2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<Check>,
    pub lambda_min: f64,
    pub passed: bool,
}

/// Checks the branch-level hypotheses on arbitrary profiles: wrapping,
/// monotonicity, expansion above `required`, and the pinch at each cusp.
pub fn verify_branches(
    profiles: [&dyn BranchProfile; 2],
    rotations: [f64; 2],
    required: f64,
) -> HypothesisReport {
    const GRID: usize = 10_000;
    let mut checks = Vec::new();

    let wrap_err = profiles
        .iter()
        .map(|g| g.value(0.0).abs().max((g.value(g.len()) - 1.0).abs()))
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "wraps_once",
        passed: wrap_err <= 1e-10,
        value: wrap_err,
    });

    let mut min_slope = f64::INFINITY;
    let mut min_step = f64::INFINITY;
    for g in profiles {
        let h = g.len() / GRID as f64;
        let mut prev = g.value(0.0);
        for k in 0..=GRID {
            let t = k as f64 * h;
            min_slope = min_slope.min(g.slope(t));
            if k > 0 {
                let v = g.value(t);
                min_step = min_step.min(v - prev);
                prev = v;
            }
        }
        min_slope = min_slope.min(g.min_slope());
    }
    checks.push(Check {
        name: "strictly_increasing",
        passed: min_slope > 0.0 && min_step > 0.0,
        value: min_slope,
    });

    let lambda_min = profiles
        .iter()
        .map(|g| g.min_slope())
        .fold(f64::INFINITY, f64::min);
    checks.push(Check {
        name: "expansion_above_required",
        passed: lambda_min > required,
        value: lambda_min - required,
    });

    let pinch_err = profiles
        .iter()
        .zip(rotations)
        .map(|(g, r)| {
            let left = CirclePoint::new(r + g.value(0.0));
            let right = CirclePoint::new(r + g.value(g.len()));
            left.dist(CirclePoint::new(r))
                .max(right.dist(CirclePoint::new(r)))
        })
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "pinch",
        passed: pinch_err <= 1e-10,
        value: pinch_err,
    });

    let passed = checks.iter().all(|c| c.passed);
    HypothesisReport {
        checks,
        lambda_min,
        passed,
    }
}

pub fn verify_hypotheses(model: &MapModel) -> HypothesisReport {
    verify_branches(
        [&model.profiles[0], &model.profiles[1]],
        [model.alpha, model.beta],
        model.params.lambda_min_required,
    )
}

use super::itinerary::{itinerary, kneading_data, KneadingData};
use super::realize::{branch_of, realize};
use super::word::{lex_compare, Letter, LexOrder, Word};
use crate::circle::CirclePoint;
use crate::error::{Error, Result};
use crate::model::{Branch, MapModel, ModelParams, SignedPoint};
use rayon::prelude::*;
use serde::Serialize;

/// Leaf-space conjugacy `h` between two kneading-equivalent models.
#[derive(Debug, Clone, Serialize)]
pub struct Conjugacy {
    /// `(x, h(x))` sorted by `x`, including `(0, 0)` and `(c, c')`.
    pub pairs: Vec<(f64, f64)>,
    /// Max over the probe grid of `dist(h(f_X x), f_Y(h x))`.
    pub defect: f64,
    pub monotone: bool,
    pub depth: usize,
}

impl Conjugacy {
    /// Piecewise-linear interpolation of `h` between the computed pairs.
    pub fn eval(&self, x: f64) -> f64 {
        let x = CirclePoint::new(x).value();
        let pairs = &self.pairs;
        let i = pairs.partition_point(|&(px, _)| px <= x);
        let (x0, y0) = if i == 0 {
            (
                pairs[pairs.len() - 1].0 - 1.0,
                pairs[pairs.len() - 1].1 - 1.0,
            )
        } else {
            pairs[i - 1]
        };
        let (x1, mut y1) = if i == pairs.len() {
            (pairs[0].0 + 1.0, pairs[0].1 + 1.0)
        } else {
            pairs[i]
        };
        if y1 < y0 {
            y1 += 1.0;
        }
        let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        CirclePoint::new(y0 + t * (y1 - y0)).value()
    }
}

/// `h(x)` as the midpoint of the `Y`-cylinder of the `X`-itinerary of `x`.
fn h_point(mx: &MapModel, my: &MapModel, x: f64, k: usize) -> Result<(Word, f64)> {
    let w = itinerary(mx, SignedPoint::plus(x), k);
    let y = realize(my, &w)?.midpoint.value();
    Ok((w, y))
}

pub fn build_conjugacy(
    mx: &MapModel,
    my: &MapModel,
    depth: usize,
    grid: usize,
) -> Result<Conjugacy> {
    let kx = kneading_data(mx, depth);
    let ky = kneading_data(my, depth);
    if let Some(index) = kx.first_mismatch(&ky) {
        return Err(Error::KneadingMismatch { index });
    }
    if grid == 0 {
        return Err(Error::Precondition(
            "conjugacy grid must be positive".into(),
        ));
    }

    let mut pairs: Vec<(f64, f64)> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let x = (i as f64 + 0.5) / grid as f64;
            h_point(mx, my, x, depth).map(|(_, y)| (x, y))
        })
        .collect::<Result<_>>()?;
    pairs.push((0.0, 0.0));
    pairs.push((mx.c_minus(), my.c_minus()));
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.dedup_by(|a, b| a.0 == b.0);
    let monotone = pairs.windows(2).all(|p| p[1].1 >= p[0].1);

    // pointwise defect on a finer grid: h at f_X(x) against f_Y applied to
    // h(x) through the branch named by the first letter
    let probes = 10 * grid;
    let defect = (0..probes)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let x = (i as f64 + 0.5) / probes as f64;
            let (w, hx) = h_point(mx, my, x, depth)?;
            let fx = mx.eval(SignedPoint::plus(x)).point.value();
            let (_, hfx) = h_point(mx, my, fx, depth)?;
            let branch = branch_of(w.first().unwrap());
            let fy = my.lift(branch, hx);
            Ok(CirclePoint::new(hfx).dist(CirclePoint::new(fy)))
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;

    Ok(Conjugacy {
        pairs,
        defect,
        monotone,
        depth,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ShootingResult {
    pub params: ModelParams,
    /// Depth to which all four kneading words agree with the target.
    pub matched_depth: usize,
}

const SHOOT_DEPTH: usize = 60;
const SHOOT_STEPS: usize = 64;

/// Bisection on `t ∈ [lo, hi]` for the first `t` whose word is not below the
/// target; returns the right end of the final bracket.
fn shoot(mut lo: f64, mut hi: f64, word_at: impl Fn(f64) -> Option<Word>, target: &Word) -> f64 {
    for _ in 0..SHOOT_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match word_at(mid).map(|w| lex_compare(&w, target)) {
            Some(LexOrder::Less(_)) => lo = mid,
            Some(LexOrder::Equal(_)) => return mid,
            _ => hi = mid,
        }
    }
    hi
}

/// Finds rotations `(alpha, beta)` near those of `target` for a model with
/// otherwise given parameters `base` so that the kneading data agree.
///
/// The upper words of both discontinuities are matched by nested bisection
/// (inner on `alpha`, outer on `beta`) over a window of `±radius`.
pub fn match_kneading(
    target: &MapModel,
    base: ModelParams,
    radius: f64,
    min_depth: usize,
) -> Result<ShootingResult> {
    let kt = kneading_data(target, SHOOT_DEPTH);
    let (a0, b0) = (target.params().alpha, target.params().beta);
    let model_at = |a: f64, b: f64| MapModel::new(base.with_rotations(a, b)).ok();

    let solve_alpha = |b: f64| {
        shoot(
            a0 - radius,
            a0 + radius,
            |a| model_at(a, b).map(|m| kneading_data(&m, SHOOT_DEPTH).w_pp),
            &kt.w_pp,
        )
    };
    let beta = shoot(
        b0 - radius,
        b0 + radius,
        |b| {
            let a = solve_alpha(b);
            model_at(a, b).map(|m| kneading_data(&m, SHOOT_DEPTH).w_mp)
        },
        &kt.w_mp,
    );
    let mut alpha = solve_alpha(beta);
    let mut beta = beta;
    // bisection only approaches coincidences of the cusp orbits with the
    // discontinuities from one side; land on them exactly
    for branch in [Branch::One, Branch::Two] {
        let Some((n, kind)) = coincidence(target, branch, SHOOT_DEPTH) else {
            continue;
        };
        let residual = |p: f64| {
            let (a, b) = match branch {
                Branch::One => (p, beta),
                Branch::Two => (alpha, p),
            };
            model_at(a, b).map(|m| coincidence_residual(&m, branch, n, kind))
        };
        let p0 = match branch {
            Branch::One => alpha,
            Branch::Two => beta,
        };
        if let Some(p) = bisect_sign_change(residual, p0 - 1e-7, p0 + 1e-7) {
            match branch {
                Branch::One => alpha = p,
                Branch::Two => beta = p,
            }
        }
    }
    let params = base.with_rotations(alpha, beta);
    let model = MapModel::new(params)?;
    let km: KneadingData = kneading_data(&model, SHOOT_DEPTH);
    let matched_depth = km.first_mismatch(&kt).unwrap_or(SHOOT_DEPTH);
    if matched_depth < min_depth {
        return Err(Error::ShootingFailed(format!(
            "kneading agrees only to depth {matched_depth} (wanted {min_depth})"
        )));
    }
    Ok(ShootingResult {
        params,
        matched_depth,
    })
}

/// Boundary hit by a cusp orbit: the discontinuities or the region cuts.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Boundary {
    CPlus,
    CMinus,
    AStar,
    BStar,
}

/// First `n` with `f^n(q_i)` on a region boundary, read off from where the
/// two one-sided itineraries of `q_i` split.
fn coincidence(model: &MapModel, branch: Branch, depth: usize) -> Option<(usize, Boundary)> {
    let q = model.q(branch).value();
    let up = itinerary(model, SignedPoint::plus(q), depth);
    let down = itinerary(model, SignedPoint::minus(q), depth);
    let n = (0..depth).find(|&i| up.get(i) != down.get(i))?;
    let kind = match up.get(n)? {
        Letter::A0 => Boundary::CPlus,
        Letter::B0 => Boundary::CMinus,
        Letter::A1 => Boundary::AStar,
        Letter::B1 => Boundary::BStar,
    };
    Some((n, kind))
}

/// Signed circle offset of `f^n(q_i)` from the boundary, iterating without
/// snapping.
fn coincidence_residual(model: &MapModel, branch: Branch, n: usize, kind: Boundary) -> f64 {
    let mut x = model.q(branch).value();
    for _ in 0..n {
        x = model.apply_raw(x);
    }
    let target = match kind {
        Boundary::CPlus => 0.0,
        Boundary::CMinus => model.c_minus(),
        Boundary::AStar => model.a_star(),
        Boundary::BStar => model.b_star(),
    };
    (x - target + 0.5).rem_euclid(1.0) - 0.5
}

fn bisect_sign_change(h: impl Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (mut h_lo, h_hi) = (h(lo)?, h(hi)?);
    if h_lo.signum() == h_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid)?;
        if v.signum() == h_lo.signum() {
            lo = mid;
            h_lo = v;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

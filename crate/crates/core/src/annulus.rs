//! Skew-product model of the return map on the annulus `S¹ × [-1, 1]`.
//!
//! Fibers `{x} × [-1, 1]` are the stable leaves; the base dynamics is the
//! circle map, and each branch squeezes its fibers by `κ ρ_i(t)` onto the
//! spine `y = η_i`, where `ρ_i(t) = sin(π t / L_i)` vanishes at both ends of
//! the branch. The image of each branch is an annulus pinched at `(q_i, η_i)`.

use crate::atlas::{classify, map_piece, trapping_interval, ArcUnion, Stratum};
use crate::circle::{split_arc_at, Arc, CirclePoint};
use crate::error::{Error, Result};
use crate::model::{Branch, BranchProfile, Location, MapModel, ModelParams, STRATUM_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_KAPPA: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SkewParams {
    pub kappa: f64,
    pub eta1: f64,
    pub eta2: f64,
}

impl Default for SkewParams {
    fn default() -> Self {
        SkewParams {
            kappa: DEFAULT_KAPPA,
            eta1: 0.0,
            eta2: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewModel {
    base: MapModel,
    kappa: f64,
    eta: [f64; 2],
}

/// `κ (π / min L_i + 1) / λ_min`, an upper bound for the cone contraction.
pub fn analytic_cone_bound(base: &MapModel, kappa: f64) -> f64 {
    let c = base.c_minus();
    let min_len = c.min(1.0 - c);
    kappa * (PI / min_len + 1.0) / base.lambda_min()
}

pub fn build_skew(base: MapModel, kappa: f64, eta1: f64, eta2: f64) -> Result<SkewModel> {
    let bound = analytic_cone_bound(&base, kappa);
    if bound >= 1.0 {
        return Err(Error::ConeBoundViolated { bound });
    }
    SkewModel::unchecked(base, kappa, eta1, eta2)
}

impl SkewModel {
    /// Builds the model without the analytic cone bound, for probing the
    /// sampled checks beyond it.
    pub fn unchecked(base: MapModel, kappa: f64, eta1: f64, eta2: f64) -> Result<SkewModel> {
        if !(kappa > 0.0 && kappa <= 0.25) {
            return Err(Error::InvalidParameter {
                field: "kappa",
                reason: format!("{kappa} outside (0, 0.25]"),
            });
        }
        for (field, eta) in [("eta1", eta1), ("eta2", eta2)] {
            if !(eta.abs() + kappa < 1.0) {
                return Err(Error::InvalidParameter {
                    field,
                    reason: format!("|{eta}| + kappa must stay below 1"),
                });
            }
        }
        Ok(SkewModel {
            base,
            kappa,
            eta: [eta1, eta2],
        })
    }

    pub fn from_params(model: ModelParams, skew: SkewParams) -> Result<SkewModel> {
        build_skew(MapModel::new(model)?, skew.kappa, skew.eta1, skew.eta2)
    }

    pub fn base(&self) -> &MapModel {
        &self.base
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn eta(&self, branch: Branch) -> f64 {
        self.eta[branch.index()]
    }

    fn locate(&self, x: CirclePoint) -> Result<(Branch, f64)> {
        match self.base.locate(x) {
            Location::Interior(b) => Ok((b, x.value() - self.base.branch_start(b))),
            _ => Err(Error::OnDiscontinuity(x.value())),
        }
    }

    /// Pinch profile of a branch at local coordinate `t`.
    pub fn pinch(&self, branch: Branch, t: f64) -> f64 {
        let len = self.base.profile(branch).len;
        (PI * t / len).sin()
    }

    fn pinch_slope(&self, branch: Branch, t: f64) -> f64 {
        let len = self.base.profile(branch).len;
        PI / len * (PI * t / len).cos()
    }

    pub fn apply(&self, x: CirclePoint, y: f64) -> Result<(CirclePoint, f64)> {
        let (branch, t) = self.locate(x)?;
        let x1 = CirclePoint::new(self.base.lift_local(branch, t));
        let y1 = self.eta(branch) + self.kappa * self.pinch(branch, t) * y;
        Ok((x1, y1))
    }

    /// Jacobian `[[f', 0], [κ ρ' y, κ ρ]]` at an interior point.
    pub fn jacobian(&self, x: CirclePoint, y: f64) -> Result<[[f64; 2]; 2]> {
        let (branch, t) = self.locate(x)?;
        let fx = self.base.profile(branch).slope(t);
        Ok([
            [fx, 0.0],
            [
                self.kappa * self.pinch_slope(branch, t) * y,
                self.kappa * self.pinch(branch, t),
            ],
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeReport {
    pub samples: usize,
    /// Largest `|v_y| / |v_x|` of images of vectors in the horizontal cone.
    pub worst_cone_factor: f64,
    /// Smallest horizontal derivative.
    pub min_expansion: f64,
    /// Largest `‖DP|fiber‖ · ‖DP⁻¹|cone‖ · ‖DP|cone‖`.
    pub worst_product: f64,
    pub cone_violations: usize,
    pub expansion_violations: usize,
    pub product_violations: usize,
    pub analytic_bound: f64,
    pub analytic_bound_holds: bool,
    pub passed: bool,
}

/// Samples `DP` on an `nx × ny` grid of cell centers.
pub fn verify_cones(skew: &SkewModel, nx: usize, ny: usize) -> ConeReport {
    let lambda_req = skew.base.lambda_min();
    let rows: Vec<(f64, f64, f64, usize, usize, usize)> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let x = CirclePoint::new((i as f64 + 0.5) / nx as f64);
            let mut acc = (0.0f64, f64::INFINITY, 0.0f64, 0usize, 0usize, 0usize);
            for j in 0..ny {
                let y = -1.0 + 2.0 * (j as f64 + 0.5) / ny as f64;
                let Ok(d) = skew.jacobian(x, y) else { continue };
                let fx = d[0][0];
                let cone = (d[1][0].abs() + d[1][1].abs()) / fx;
                // norms along the cone axis e_x and along its image line
                let fiber = d[1][1].abs();
                let forward = d[0][0].hypot(d[1][0]);
                let backward = 1.0 / forward;
                let product = fiber * backward * forward;
                acc.0 = acc.0.max(cone);
                acc.1 = acc.1.min(fx);
                acc.2 = acc.2.max(product);
                acc.3 += (cone >= 1.0) as usize;
                acc.4 += (fx < lambda_req - 1e-12) as usize;
                acc.5 += (product >= 1.0) as usize;
            }
            acc
        })
        .collect();
    let mut worst_cone_factor = 0.0f64;
    let mut min_expansion = f64::INFINITY;
    let mut worst_product = 0.0f64;
    let (mut cv, mut ev, mut pv) = (0, 0, 0);
    for r in rows {
        worst_cone_factor = worst_cone_factor.max(r.0);
        min_expansion = min_expansion.min(r.1);
        worst_product = worst_product.max(r.2);
        cv += r.3;
        ev += r.4;
        pv += r.5;
    }
    let analytic_bound = analytic_cone_bound(&skew.base, skew.kappa);
    ConeReport {
        samples: nx * ny,
        worst_cone_factor,
        min_expansion,
        worst_product,
        cone_violations: cv,
        expansion_violations: ev,
        product_violations: pv,
        analytic_bound,
        analytic_bound_holds: analytic_bound < 1.0,
        passed: cv == 0 && ev == 0 && pv == 0,
    }
}

pub const MAX_CLOUD_DEPTH: usize = 16;
const CLOUD_CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cloud {
    pub depth: usize,
    pub points: Vec<(f64, f64)>,
    /// Seeds whose orbit hit a discontinuity fiber.
    pub dropped: usize,
}

/// Iterates `samples` random points of `region × [-1, 1]` (the whole annulus
/// when `region` is `None`) `depth` times. Seeds are drawn per fixed-size
/// chunk from `seed`, so the output does not depend on the thread count.
pub fn attractor_cloud(
    skew: &SkewModel,
    depth: usize,
    samples: usize,
    seed: u64,
    region: Option<Arc>,
) -> Result<Cloud> {
    if depth > MAX_CLOUD_DEPTH {
        return Err(Error::Precondition(format!(
            "cloud depth {depth} exceeds {MAX_CLOUD_DEPTH}"
        )));
    }
    let region = region.unwrap_or(Arc::Full);
    let chunks = samples.div_ceil(CLOUD_CHUNK);
    let parts: Vec<(Vec<(f64, f64)>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let n = CLOUD_CHUNK.min(samples - k * CLOUD_CHUNK);
            let mut pts = Vec::with_capacity(n);
            let mut dropped = 0;
            'seeds: for _ in 0..n {
                let mut x = region.point_at(rng.gen::<f64>() * region.len());
                let mut y = rng.gen_range(-1.0..=1.0);
                for _ in 0..depth {
                    match skew.apply(x, y) {
                        Ok((x1, y1)) => (x, y) = (x1, y1),
                        Err(_) => {
                            dropped += 1;
                            continue 'seeds;
                        }
                    }
                }
                pts.push((x.value(), y));
            }
            (pts, dropped)
        })
        .collect();
    let mut points = Vec::with_capacity(samples);
    let mut dropped = 0;
    for (p, d) in parts {
        points.extend(p);
        dropped += d;
    }
    Ok(Cloud {
        depth,
        points,
        dropped,
    })
}

/// Binary PGM (P5, 8-bit) of point density on `[0, 1) × [-1, 1]`, log
/// scaled, with `y = 1` on the top row.
pub fn render_pgm(points: &[(f64, f64)], width: usize, height: usize) -> Vec<u8> {
    let mut counts = vec![0u32; width * height];
    for &(x, y) in points {
        let col = ((x * width as f64) as usize).min(width - 1);
        let row = (((1.0 - y) * 0.5 * height as f64) as usize).min(height - 1);
        counts[row * width + col] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(counts.iter().map(|&n| {
        if n == 0 {
            0
        } else {
            (255.0 * (1.0 + (n as f64).ln()) / (1.0 + top.ln())).round() as u8
        }
    }));
    out
}

/// A piece `arc × [y_lo, y_hi]` of an iterate of the annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub arc: Arc,
    pub y_lo: f64,
    pub y_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafSpan2d {
    pub depth: usize,
    pub seed: Arc,
    /// Smallest arc holding every fiber met by the iterate.
    pub span: Arc,
    pub length: f64,
    pub full: bool,
    /// Largest fiber extent `y_hi - y_lo` among the pieces.
    pub thickness: f64,
    pub pieces: Vec<Piece>,
}

fn map_piece_2d(skew: &SkewModel, piece: &Piece) -> Vec<Piece> {
    let base = &skew.base;
    let cuts = [CirclePoint::ZERO, CirclePoint::new(base.c_minus())];
    let mut out = Vec::new();
    for sub in split_arc_at(&piece.arc, &cuts) {
        if sub.is_empty() {
            continue;
        }
        let image = map_piece(base, &sub);
        let branch = if sub.midpoint().value() < base.c_minus() {
            Branch::One
        } else {
            Branch::Two
        };
        let len = base.profile(branch).len;
        let t0 = (sub.start().value() - base.branch_start(branch))
            .rem_euclid(1.0)
            .min(len);
        let t1 = (t0 + sub.len()).min(len);
        let r0 = skew.pinch(branch, t0).max(0.0);
        let r1 = skew.pinch(branch, t1).max(0.0);
        let r_lo = r0.min(r1);
        let r_hi = if t0 <= 0.5 * len && 0.5 * len <= t1 {
            1.0
        } else {
            r0.max(r1)
        };
        let corners = [
            r_lo * piece.y_lo,
            r_lo * piece.y_hi,
            r_hi * piece.y_lo,
            r_hi * piece.y_hi,
        ];
        let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let eta = skew.eta(branch);
        out.push(Piece {
            arc: image,
            y_lo: eta + skew.kappa * lo,
            y_hi: eta + skew.kappa * hi,
        });
    }
    out
}

/// Merges overlapping pieces (cut at `0`), taking the hull of fiber extents.
fn merge_pieces(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut flat: Vec<(f64, f64, f64, f64)> = Vec::new();
    for p in pieces {
        match p.arc {
            Arc::Full => flat.push((0.0, 1.0, p.y_lo, p.y_hi)),
            Arc::Open { start, len } => {
                let s = start.value();
                if s + len <= 1.0 {
                    flat.push((s, s + len, p.y_lo, p.y_hi));
                } else {
                    flat.push((s, 1.0, p.y_lo, p.y_hi));
                    flat.push((0.0, s + len - 1.0, p.y_lo, p.y_hi));
                }
            }
        }
    }
    flat.retain(|f| f.1 > f.0);
    flat.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64, f64, f64)> = Vec::new();
    for f in flat {
        match merged.last_mut() {
            Some(m) if f.0 < m.1 => {
                m.1 = m.1.max(f.1);
                m.2 = m.2.min(f.2);
                m.3 = m.3.max(f.3);
            }
            _ => merged.push(f),
        }
    }
    merged
        .into_iter()
        .map(|(a, b, lo, hi)| Piece {
            arc: Arc::with_len(CirclePoint::new(a), b - a),
            y_lo: lo,
            y_hi: hi,
        })
        .collect()
}

/// Pushes the attracting piece of the annulus forward `depth` times and
/// reports the arc of fibers the image meets. For `L⁺`/`L⁻` models the seed
/// is the trapping strip `R_L × [-1, 1]`, otherwise the whole annulus.
pub fn leaf_span_2d(skew: &SkewModel, depth: usize) -> Result<LeafSpan2d> {
    let seed = match classify(&skew.base, STRATUM_TOL).stratum {
        Stratum::LPlus | Stratum::LMinus => trapping_interval(&skew.base)?.r_l,
        _ => Arc::Full,
    };
    let mut pieces = vec![Piece {
        arc: seed,
        y_lo: -1.0,
        y_hi: 1.0,
    }];
    for _ in 0..depth {
        let next = pieces.iter().flat_map(|p| map_piece_2d(skew, p)).collect();
        pieces = merge_pieces(next);
    }
    let mut union = ArcUnion::new();
    for p in &pieces {
        union.insert(&p.arc);
    }
    let gap = union
        .gaps()
        .into_iter()
        .max_by(|a, b| a.len().total_cmp(&b.len()));
    let (span, length, full) = match gap {
        Some(g) if g.len() >= 1e-9 => (Arc::with_len(g.end(), 1.0 - g.len()), 1.0 - g.len(), false),
        _ => (Arc::Full, 1.0, true),
    };
    let thickness = pieces.iter().map(|p| p.y_hi - p.y_lo).fold(0.0, f64::max);
    Ok(LeafSpan2d {
        depth,
        seed,
        span,
        length,
        full,
        thickness,
        pieces,
    })
}

/// Torus families `(s, u) ↦ model` used by the degree computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `(s, u) ↦ (α, β) = (s, u)`.
    Rotation,
    /// The base model at every parameter.
    Constant,
    /// `(s, u) ↦ (α, β) = (u, s)`.
    Swapped,
}

impl FamilyKind {
    pub fn model(self, base: ModelParams, s: f64, u: f64) -> Result<MapModel> {
        let params = match self {
            FamilyKind::Rotation => base.with_rotations(s, u),
            FamilyKind::Constant => base,
            FamilyKind::Swapped => base.with_rotations(u, s),
        };
        MapModel::new(params)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeMatrix {
    /// `entries[i][j]`: signed windings of `q_{i+1}` along generator `j`.
    pub entries: [[i64; 2]; 2],
    pub determinant: i64,
    pub essential: bool,
}

pub const DEGREE_JUMP: f64 = 0.25;

/// Winding counts of the cusp positions along the two generator loops
/// `s ↦ (s, 0)` and `u ↦ (0, u)` of the parameter torus, sampled with
/// `step` and tracked by continuity.
pub fn family_degree(
    family: impl Fn(f64, f64) -> Result<MapModel>,
    step: f64,
) -> Result<DegreeMatrix> {
    if !(step > 0.0 && step <= DEGREE_JUMP) {
        return Err(Error::InvalidParameter {
            field: "step",
            reason: format!("{step} outside (0, {DEGREE_JUMP}]"),
        });
    }
    let n = (1.0 / step).ceil() as usize;
    let mut entries = [[0i64; 2]; 2];
    for j in 0..2 {
        let at = |k: usize| {
            let r = (k as f64 / n as f64).rem_euclid(1.0);
            let m = if j == 0 {
                family(r, 0.0)
            } else {
                family(0.0, r)
            }?;
            Ok::<_, Error>([m.q1().value(), m.q2().value()])
        };
        let mut prev = at(0)?;
        let mut travel = [0.0f64; 2];
        for k in 1..=n {
            let cur = at(k % n)?;
            for i in 0..2 {
                let d = cur[i] - prev[i];
                let d = d - d.round();
                if d.abs() > DEGREE_JUMP {
                    return Err(Error::TrackingLost {
                        at: k as f64 / n as f64,
                        jump: d.abs(),
                    });
                }
                travel[i] += d;
            }
            prev = cur;
        }
        for i in 0..2 {
            entries[i][j] = travel[i].round() as i64;
        }
    }
    let determinant = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
    Ok(DegreeMatrix {
        entries,
        determinant,
        essential: determinant == 1,
    })
}

use super::classify::{classify, Stratum};
use crate::circle::{split_arc_at, Arc, CirclePoint};
use crate::error::{Error, Result};
use crate::model::{Branch, MapModel, STRATUM_TOL};
use serde::{Deserialize, Serialize};

/// Cap on the number of arcs carried between iterations.
pub const ARC_BUDGET: usize = 1_000_000;

/// A finite union of open arcs, stored as sorted disjoint open intervals of
/// `[0, 1]`. Intervals that only touch stay separate, so their shared
/// endpoint counts as uncovered. The point `0` is covered only if some
/// inserted arc contains it in its interior.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArcUnion {
    items: Vec<(f64, f64)>,
    zero_covered: bool,
}

impl ArcUnion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.items
    }

    fn insert_interval(&mut self, lo: f64, hi: f64) {
        if hi <= lo {
            return;
        }
        let start = self.items.partition_point(|&(_, b)| b <= lo);
        let mut end = start;
        let (mut lo, mut hi) = (lo, hi);
        while end < self.items.len() && self.items[end].0 < hi {
            lo = lo.min(self.items[end].0);
            hi = hi.max(self.items[end].1);
            end += 1;
        }
        self.items.splice(start..end, [(lo, hi)]);
    }

    pub fn insert(&mut self, arc: &Arc) {
        match *arc {
            Arc::Full => {
                self.items = vec![(0.0, 1.0)];
                self.zero_covered = true;
            }
            Arc::Open { start, len } => {
                let s = start.value();
                if s + len <= 1.0 {
                    self.insert_interval(s, s + len);
                } else {
                    self.insert_interval(s, 1.0);
                    self.insert_interval(0.0, s + len - 1.0);
                    self.zero_covered = true;
                }
            }
        }
    }

    pub fn measure(&self) -> f64 {
        self.items.iter().map(|(a, b)| b - a).sum()
    }

    pub fn is_full(&self) -> bool {
        self.zero_covered && self.items == [(0.0, 1.0)]
    }

    /// Uncovered arcs, including zero-length ones at isolated missed points.
    pub fn gaps(&self) -> Vec<Arc> {
        let n = self.items.len();
        if n == 0 {
            return vec![Arc::Full];
        }
        let mut out = Vec::new();
        for w in self.items.windows(2) {
            out.push(Arc::with_len(CirclePoint::new(w[0].1), w[1].0 - w[0].1));
        }
        let (first, last) = (self.items[0].0, self.items[n - 1].1);
        let wrap = 1.0 - last + first;
        if !(wrap == 0.0 && self.zero_covered) {
            out.push(Arc::with_len(CirclePoint::new(last), wrap));
        }
        out
    }

    /// The union as a list of arcs, rejoining pieces cut at `0`.
    pub fn arcs(&self) -> Vec<Arc> {
        if self.is_full() {
            return vec![Arc::Full];
        }
        let mut out: Vec<Arc> = self
            .items
            .iter()
            .map(|&(a, b)| Arc::with_len(CirclePoint::new(a), b - a))
            .collect();
        let n = self.items.len();
        if self.zero_covered && n >= 2 && self.items[0].0 == 0.0 && self.items[n - 1].1 == 1.0 {
            let (first, last) = (self.items[0], self.items[n - 1]);
            out.pop();
            out[0] = Arc::with_len(CirclePoint::new(last.0), (1.0 - last.0) + first.1);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageCertificate {
    pub seed: Arc,
    pub iterations_used: usize,
    pub covered_fraction: f64,
    /// Uncovered leaves isolated at resolution `eps`.
    pub missed_points: Vec<CirclePoint>,
    /// Arcs produced by the last iteration.
    pub terminal_arcs: Vec<Arc>,
    /// Complement of the accumulated union.
    pub uncovered: Vec<Arc>,
    /// Covered fraction after each iteration (index 0 is the seed).
    pub history: Vec<f64>,
    /// False when the budget ran out first; the run is then inconclusive.
    pub converged: bool,
}

/// Image of an arc lying inside a single branch.
pub fn map_piece(model: &MapModel, piece: &Arc) -> Arc {
    let mid = piece.midpoint().value();
    let branch = if mid < model.c_minus() {
        Branch::One
    } else {
        Branch::Two
    };
    let len_b = model.profile(branch).len;
    let mut t0 = (piece.start().value() - model.branch_start(branch)).rem_euclid(1.0);
    if t0 > len_b {
        // rounding put the start just outside the branch
        t0 = if t0 > 0.5 * (1.0 + len_b) { 0.0 } else { len_b };
    }
    let t1 = (t0 + piece.len()).min(len_b);
    let y0 = model.lift_local(branch, t0);
    let y1 = model.lift_local(branch, t1);
    Arc::with_len(CirclePoint::new(y0), y1 - y0)
}

/// Images of an arc: split at the discontinuities, then mapped branchwise.
pub fn map_arc(model: &MapModel, arc: &Arc) -> Vec<Arc> {
    let cuts = [CirclePoint::ZERO, CirclePoint::new(model.c_minus())];
    split_arc_at(arc, &cuts)
        .into_iter()
        .filter(|p| !p.is_empty())
        .map(|p| map_piece(model, &p))
        .collect()
}

fn step(model: &MapModel, frontier: &[Arc]) -> Vec<Arc> {
    let mut next = ArcUnion::new();
    for a in frontier {
        for img in map_arc(model, a) {
            next.insert(&img);
        }
    }
    next.arcs()
}

/// Forward iteration of a seed arc, accumulating the union of all iterates
/// until its complement is shorter than `eps` or `max_n` steps are done.
pub fn iterate_segments(
    model: &MapModel,
    seed: Arc,
    max_n: usize,
    eps: f64,
) -> Result<CoverageCertificate> {
    if seed.is_empty() {
        return Err(Error::Precondition("seed arc is empty".into()));
    }
    if max_n == 0 {
        return Err(Error::Precondition(
            "iteration budget must be positive".into(),
        ));
    }
    let mut union = ArcUnion::new();
    union.insert(&seed);
    let mut frontier = vec![seed];
    let mut history = vec![union.measure()];
    let mut iterations = 0;
    while 1.0 - union.measure() >= eps && iterations < max_n {
        iterations += 1;
        frontier = step(model, &frontier);
        if frontier.len() > ARC_BUDGET {
            return Err(Error::ArcBudgetExceeded(frontier.len()));
        }
        for a in &frontier {
            union.insert(a);
        }
        history.push(union.measure());
    }
    let uncovered = union.gaps();
    let missed_points = uncovered
        .iter()
        .filter(|g| g.len() <= eps)
        .map(|g| g.midpoint())
        .collect();
    Ok(CoverageCertificate {
        seed,
        iterations_used: iterations,
        covered_fraction: union.measure(),
        missed_points,
        terminal_arcs: frontier,
        uncovered,
        history,
        converged: 1.0 - union.measure() < eps,
    })
}

/// Which side of the singularity the attractor is expected to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideHint {
    /// Decide from the classification.
    Auto,
    Up,
    Down,
    TwoSided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorSpan {
    /// Smallest arc containing all leaves met.
    pub span: Arc,
    pub length: f64,
    /// Every leaf but finitely many is met.
    pub full: bool,
    pub coverage: CoverageCertificate,
}

pub const SPAN_SEED_LEN: f64 = 1e-3;
pub const SPAN_MAX_N: usize = 200;
pub const SPAN_EPS: f64 = 1e-9;

pub fn attractor_span(model: &MapModel, hint: SideHint) -> Result<AttractorSpan> {
    attractor_span_with(model, hint, SPAN_MAX_N, SPAN_EPS)
}

/// Seeds a short arc at the discontinuity the attractor meets (`c₊` for
/// up and two-sided attractors, `c₋` for down ones) and measures the leaves
/// met by its forward iterates.
pub fn attractor_span_with(
    model: &MapModel,
    hint: SideHint,
    max_n: usize,
    eps: f64,
) -> Result<AttractorSpan> {
    let side = match hint {
        SideHint::Auto => match classify(model, STRATUM_TOL).stratum {
            Stratum::LPlus => SideHint::Up,
            Stratum::LMinus => SideHint::Down,
            _ => SideHint::TwoSided,
        },
        h => h,
    };
    let seed = match side {
        SideHint::Down => Arc::with_len(CirclePoint::new(model.c_minus()), SPAN_SEED_LEN),
        _ => Arc::with_len(CirclePoint::ZERO, SPAN_SEED_LEN),
    };
    let coverage = iterate_segments(model, seed, max_n, eps)?;
    if coverage.converged {
        return Ok(AttractorSpan {
            span: Arc::Full,
            length: 1.0,
            full: true,
            coverage,
        });
    }
    let gap = coverage
        .uncovered
        .iter()
        .copied()
        .max_by(|a, b| a.len().total_cmp(&b.len()))
        .expect("an unconverged run leaves a gap");
    let length = 1.0 - gap.len();
    Ok(AttractorSpan {
        span: Arc::with_len(gap.end(), length),
        length,
        full: false,
        coverage,
    })
}

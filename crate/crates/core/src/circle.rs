//! Arithmetic on the circle R/Z and on open counterclockwise arcs.
//!
//! The circle is the space of stable leaves of the cross-section; every
//! point is kept normalized in `[0, 1)`. Arcs are open: endpoint membership
//! is always excluded, so the discontinuity leaves never belong to an arc.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Absolute tolerance for comparisons on the circle.
pub const TOL: f64 = 1e-12;

/// A point of R/Z, stored in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub const ZERO: CirclePoint = CirclePoint(0.0);

    pub fn new(x: f64) -> Self {
        let v = x.rem_euclid(1.0);
        // rem_euclid(-tiny, 1.0) rounds to 1.0
        if v >= 1.0 {
            CirclePoint(0.0)
        } else {
            CirclePoint(v)
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Shortest (unsigned) distance on the circle.
    pub fn dist(self, other: CirclePoint) -> f64 {
        let d = dist_ccw(self, other);
        d.min(1.0 - d)
    }

    pub fn approx_eq(self, other: CirclePoint, tol: f64) -> bool {
        self.dist(other) <= tol
    }
}

impl From<f64> for CirclePoint {
    fn from(x: f64) -> Self {
        CirclePoint::new(x)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Counterclockwise distance from `a` to `b`, in `[0, 1)`.
pub fn dist_ccw(a: CirclePoint, b: CirclePoint) -> f64 {
    let d = (b.0 - a.0).rem_euclid(1.0);
    if d >= 1.0 {
        0.0
    } else {
        d
    }
}

/// An open counterclockwise arc.
///
/// `Open { start, len }` is the set of points at ccw distance in `(0, len)`
/// from `start`; `len = 0` is the empty arc and `len = 1` is the circle with
/// `start` removed. `Full` is the whole circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Arc {
    Full,
    Open { start: CirclePoint, len: f64 },
}

impl Arc {
    /// The arc running ccw from `start` to `end`; `start == end` is empty.
    pub fn new(start: impl Into<CirclePoint>, end: impl Into<CirclePoint>) -> Self {
        let start = start.into();
        let end = end.into();
        Arc::Open {
            start,
            len: dist_ccw(start, end),
        }
    }

    pub fn with_len(start: impl Into<CirclePoint>, len: f64) -> Self {
        Arc::Open {
            start: start.into(),
            len: len.clamp(0.0, 1.0),
        }
    }

    pub fn len(&self) -> f64 {
        match *self {
            Arc::Full => 1.0,
            Arc::Open { len, .. } => len,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(*self, Arc::Open { len, .. } if len <= 0.0)
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Arc::Full)
    }

    /// Start point; `Full` reports 0.
    pub fn start(&self) -> CirclePoint {
        match *self {
            Arc::Full => CirclePoint::ZERO,
            Arc::Open { start, .. } => start,
        }
    }

    pub fn end(&self) -> CirclePoint {
        match *self {
            Arc::Full => CirclePoint::ZERO,
            Arc::Open { start, len } => CirclePoint::new(start.0 + len),
        }
    }

    /// Point at ccw offset `s` (in units of length) from the start.
    pub fn point_at(&self, s: f64) -> CirclePoint {
        CirclePoint::new(self.start().0 + s)
    }

    pub fn midpoint(&self) -> CirclePoint {
        self.point_at(0.5 * self.len())
    }

    /// Strict interior membership; endpoints are excluded within [`TOL`].
    pub fn contains(&self, p: CirclePoint) -> bool {
        match *self {
            Arc::Full => true,
            Arc::Open { start, len } => {
                if len <= 0.0 {
                    return false;
                }
                let d = dist_ccw(start, p);
                d > TOL && d < len - TOL
            }
        }
    }

    /// Membership in the closure (endpoints included within `tol`).
    pub fn closure_contains(&self, p: CirclePoint, tol: f64) -> bool {
        match *self {
            Arc::Full => true,
            Arc::Open { start, len } => {
                let d = dist_ccw(start, p);
                d <= len + tol || d >= 1.0 - tol
            }
        }
    }

    /// True when `inner` is contained in the closure of `self`.
    pub fn covers(&self, inner: &Arc, tol: f64) -> bool {
        match (*self, *inner) {
            (Arc::Full, _) => true,
            (_, Arc::Full) => false,
            (Arc::Open { start, len }, Arc::Open { start: s2, len: l2 }) => {
                let mut off = dist_ccw(start, s2);
                if off > 1.0 - tol {
                    off -= 1.0;
                }
                off >= -tol && off + l2 <= len + tol
            }
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arc::Full => write!(f, "S1"),
            Arc::Open { start, .. } => write!(f, "({:.6} -> {:.6})", start.0, self.end().0),
        }
    }
}

/// Convenience wrapper around [`dist_ccw`] on raw values.
pub fn ccw(a: f64, b: f64) -> f64 {
    dist_ccw(CirclePoint::new(a), CirclePoint::new(b))
}

/// Whether `p` lies strictly inside `arc`.
pub fn arc_contains(arc: &Arc, p: CirclePoint) -> bool {
    arc.contains(p)
}

/// Cuts `arc` at every cut point lying in its interior.
///
/// The pieces come back in ccw order from the arc's start. A full circle is
/// cut starting from its smallest cut value.
pub fn split_arc_at(arc: &Arc, cuts: &[CirclePoint]) -> Vec<Arc> {
    let mut inside: Vec<CirclePoint> = cuts.iter().copied().filter(|c| arc.contains(*c)).collect();
    match *arc {
        Arc::Full => {
            if inside.is_empty() {
                return vec![Arc::Full];
            }
            inside.sort_by(|a, b| a.0.total_cmp(&b.0));
            inside.dedup_by(|a, b| a.dist(*b) <= TOL);
            let n = inside.len();
            if n == 1 {
                return vec![Arc::with_len(inside[0], 1.0)];
            }
            (0..n)
                .map(|i| Arc::new(inside[i], inside[(i + 1) % n]))
                .collect()
        }
        Arc::Open { start, len } => {
            inside.sort_by(|a, b| dist_ccw(start, *a).total_cmp(&dist_ccw(start, *b)));
            inside.dedup_by(|a, b| a.dist(*b) <= TOL);
            let mut out = Vec::with_capacity(inside.len() + 1);
            let mut cursor = 0.0;
            for c in inside {
                let d = dist_ccw(start, c);
                out.push(Arc::with_len(
                    CirclePoint::new(start.0 + cursor),
                    d - cursor,
                ));
                cursor = d;
            }
            out.push(Arc::with_len(
                CirclePoint::new(start.0 + cursor),
                len - cursor,
            ));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> CirclePoint {
        CirclePoint::new(x)
    }

    fn ends(a: &Arc) -> (f64, f64) {
        (a.start().value(), a.end().value())
    }

    #[test]
    fn ccw_distance_examples() {
        assert!((dist_ccw(p(0.2), p(0.7)) - 0.5).abs() < 1e-15);
        assert!((dist_ccw(p(0.7), p(0.2)) - 0.5).abs() < 1e-15);
        assert_eq!(dist_ccw(p(0.3), p(0.3)), 0.0);
    }

    #[test]
    fn normalization_stays_in_unit_interval() {
        for x in [-1e-17, -0.25, 1.0, 3.75, -3.0] {
            let v = p(x).value();
            assert!((0.0..1.0).contains(&v), "{x} -> {v}");
        }
    }

    #[test]
    fn containment_examples() {
        assert!(Arc::new(0.9, 0.2).contains(p(0.05)));
        assert!(!Arc::new(0.9, 0.2).contains(p(0.5)));
        assert!(!Arc::new(0.3, 0.3).contains(p(0.3)));
        assert!(!Arc::new(0.1, 0.4).contains(p(0.1)));
        assert!(Arc::Full.contains(p(0.0)));
    }

    #[test]
    fn split_examples() {
        let s = split_arc_at(&Arc::new(0.0, 0.6), &[p(0.5)]);
        assert_eq!(s.len(), 2);
        let (a, b) = ends(&s[0]);
        assert!(a.abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
        let (a, b) = ends(&s[1]);
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.6).abs() < 1e-15);

        let s = split_arc_at(&Arc::new(0.9, 0.2), &[p(0.0)]);
        assert_eq!(s.len(), 2);
        assert!((s[0].start().value() - 0.9).abs() < 1e-15 && s[0].end().value().abs() < 1e-12);
        assert!(s[1].start().value().abs() < 1e-12 && (s[1].end().value() - 0.2).abs() < 1e-12);

        let s = split_arc_at(&Arc::Full, &[p(0.0), p(0.5)]);
        assert_eq!(s.len(), 2);
        assert_eq!(ends(&s[0]), (0.0, 0.5));
        assert_eq!(ends(&s[1]), (0.5, 0.0));
    }

    #[test]
    fn cuts_outside_are_ignored() {
        let s = split_arc_at(&Arc::new(0.1, 0.2), &[p(0.5), p(0.1)]);
        assert_eq!(s.len(), 1);
        assert!((s[0].len() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn full_circle_single_cut_is_punctured_circle() {
        let s = split_arc_at(&Arc::Full, &[p(0.25)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].len(), 1.0);
        assert!(!s[0].contains(p(0.25)));
        assert!(s[0].contains(p(0.2)));
    }

    #[test]
    fn covers_handles_wraparound() {
        let big = Arc::new(0.8, 0.4);
        assert!(big.covers(&Arc::new(0.9, 0.1), 1e-12));
        assert!(!big.covers(&Arc::new(0.3, 0.5), 1e-12));
        assert!(big.covers(&big, 1e-12));
    }
}

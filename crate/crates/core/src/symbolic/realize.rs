use super::word::{Letter, Word};
use crate::circle::{Arc, CirclePoint, TOL};
use crate::error::{Error, Result};
use crate::model::{Branch, MapModel};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cylinder {
    pub interval: Arc,
    pub midpoint: CirclePoint,
}

impl Cylinder {
    pub fn len(&self) -> f64 {
        self.interval.len()
    }
}

pub(crate) fn branch_of(letter: Letter) -> Branch {
    if letter.is_a() {
        Branch::One
    } else {
        Branch::Two
    }
}

/// Closure of a region in unwrapped `[0, 1]` coordinates, or `None` when
/// the region is empty.
pub fn region_closure(model: &MapModel, letter: Letter) -> Option<(f64, f64)> {
    let c = model.c_minus();
    match letter {
        Letter::A0 => Some((0.0, model.a_star())),
        Letter::A1 => (!model.a1_empty()).then(|| (model.a_star(), c)),
        Letter::B0 => Some((c, model.b_star())),
        Letter::B1 => (!model.b1_empty()).then(|| (model.b_star(), 1.0)),
    }
}

/// Image of a region's closure in unwrapped coordinates together with the
/// offset `s` such that the lift of the branch at a point of the region is
/// `y + s` for an image point `y`.
fn region_image(model: &MapModel, letter: Letter) -> ((f64, f64), f64) {
    let (a, b) = (model.q1().value(), model.q2().value());
    match letter {
        Letter::A0 => ((a, 1.0), 0.0),
        Letter::A1 => ((0.0, a), 1.0),
        Letter::B0 => ((b, 1.0), 0.0),
        Letter::B1 => ((0.0, b), 1.0),
    }
}

fn pull_back(model: &MapModel, letter: Letter, y: f64, offset: f64) -> f64 {
    let branch = branch_of(letter);
    let q = model.q(branch).value();
    let profile = model.profile(branch);
    let v = (y + offset - q).clamp(0.0, 1.0);
    model.branch_start(branch) + profile.inverse(v)
}

/// The closed cylinder of points whose first `k = w.len()` letters are `w`,
/// computed by backward induction.
pub fn realize(model: &MapModel, w: &Word) -> Result<Cylinder> {
    let letters = w.letters();
    let k = match w.depth() {
        Some(0) => return Err(Error::EmptyWord),
        Some(k) => k,
        None => return Err(Error::BadWord(format!("{w} is not finite"))),
    };
    let last = letters[k - 1];
    let (mut lo, mut hi) = region_closure(model, last).ok_or(Error::EmptyCylinder { depth: 1 })?;
    for j in (0..k - 1).rev() {
        let letter = letters[j];
        let depth = k - j;
        let (r_lo, r_hi) = region_closure(model, letter).ok_or(Error::EmptyCylinder { depth })?;
        let ((i_lo, i_hi), offset) = region_image(model, letter);
        let y_lo = lo.max(i_lo);
        let y_hi = hi.min(i_hi);
        if y_lo > y_hi + TOL {
            return Err(Error::EmptyCylinder { depth });
        }
        let x_lo = pull_back(model, letter, y_lo, offset).max(r_lo);
        let x_hi = pull_back(model, letter, y_hi.max(y_lo), offset).min(r_hi);
        lo = x_lo;
        hi = x_hi.max(x_lo);
    }
    Ok(Cylinder {
        interval: Arc::with_len(lo, hi - lo),
        midpoint: CirclePoint::new(0.5 * (lo + hi)),
    })
}

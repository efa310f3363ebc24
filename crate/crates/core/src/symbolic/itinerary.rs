use super::word::{lex_compare, Letter, Word};
use crate::circle::TOL;
use crate::model::{Branch, Location, MapModel, Side, SignedPoint};
use serde::{Deserialize, Serialize};

/// Letter of the region containing a signed point; the side decides
/// membership at region boundaries.
pub fn letter_of(model: &MapModel, sp: SignedPoint) -> Letter {
    let x = sp.point.value();
    let plus = sp.side == Side::Plus;
    match model.locate(sp.point) {
        Location::CPlus => {
            if plus {
                Letter::A0
            } else if model.b1_empty() {
                Letter::B0
            } else {
                Letter::B1
            }
        }
        Location::CMinus => {
            if plus {
                Letter::B0
            } else if model.a1_empty() {
                Letter::A0
            } else {
                Letter::A1
            }
        }
        Location::Interior(Branch::One) => {
            let a = model.a_star();
            if (x - a).abs() <= TOL {
                if plus {
                    Letter::A1
                } else {
                    Letter::A0
                }
            } else if x < a {
                Letter::A0
            } else {
                Letter::A1
            }
        }
        Location::Interior(Branch::Two) => {
            let b = model.b_star();
            if (x - b).abs() <= TOL {
                if plus {
                    Letter::B1
                } else {
                    Letter::B0
                }
            } else if x < b {
                Letter::B0
            } else {
                Letter::B1
            }
        }
    }
}

/// First `k` letters of the one-sided itinerary of `sp`.
pub fn itinerary(model: &MapModel, sp: SignedPoint, k: usize) -> Word {
    let mut letters = Vec::with_capacity(k);
    let mut p = sp;
    for _ in 0..k {
        letters.push(letter_of(model, p));
        p = model.eval(p);
    }
    Word::new(letters)
}

/// The four itineraries of the two discontinuities.
///
/// `w_pp = ω₊(c₊)`, `w_pm = ω₋(c₊)`, `w_mp = ω₊(c₋)`, `w_mm = ω₋(c₋)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KneadingData {
    pub w_pp: Word,
    pub w_pm: Word,
    pub w_mp: Word,
    pub w_mm: Word,
    pub depth: usize,
    pub a1_empty: bool,
    pub b1_empty: bool,
}

/// Identifies one of the four kneading words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KneadingEntry {
    PlusPlus,
    PlusMinus,
    MinusPlus,
    MinusMinus,
}

impl KneadingData {
    pub fn words(&self) -> [(KneadingEntry, &Word); 4] {
        [
            (KneadingEntry::PlusPlus, &self.w_pp),
            (KneadingEntry::PlusMinus, &self.w_pm),
            (KneadingEntry::MinusPlus, &self.w_mp),
            (KneadingEntry::MinusMinus, &self.w_mm),
        ]
    }

    /// First index (over all four words, up to the common depth) where the
    /// two data differ.
    pub fn first_mismatch(&self, other: &KneadingData) -> Option<usize> {
        let depth = self.depth.min(other.depth);
        let mut first: Option<usize> = None;
        for ((_, u), (_, v)) in self.words().into_iter().zip(other.words()) {
            let idx = (0..depth).find(|&i| u.get(i) != v.get(i));
            first = match (first, idx) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        first
    }

    /// Checks the recursion of the kneading words through the cusp points:
    /// `ω₊(c₊) = A0⋆ω₊(q1)`, `ω₊(c₋) = B0⋆ω₊(q2)`,
    /// `ω₋(c₋) = A1⋆ω₋(q1)` (`A0⋆` when `q1 = c₊`),
    /// `ω₋(c₊) = B1⋆ω₋(q2)` (`B0^∞` when `q2 = c₊`).
    /// Returns the first failing entry and index.
    pub fn check_recursion(&self, model: &MapModel) -> Option<(KneadingEntry, usize)> {
        let k = self.depth;
        if k == 0 {
            return None;
        }
        let q1 = model.q1().value();
        let q2 = model.q2().value();
        let tail = k - 1;
        let q1_on_cplus = model.a1_empty();
        let q2_on_cplus = model.b1_empty();
        let expected = [
            (
                KneadingEntry::PlusPlus,
                Word::star(Letter::A0, &itinerary(model, SignedPoint::plus(q1), tail)),
            ),
            (
                KneadingEntry::PlusMinus,
                if q2_on_cplus {
                    Word::repeat(Letter::B0, k)
                } else {
                    Word::star(Letter::B1, &itinerary(model, SignedPoint::minus(q2), tail))
                },
            ),
            (
                KneadingEntry::MinusPlus,
                Word::star(Letter::B0, &itinerary(model, SignedPoint::plus(q2), tail)),
            ),
            (
                KneadingEntry::MinusMinus,
                Word::star(
                    if q1_on_cplus { Letter::A0 } else { Letter::A1 },
                    &itinerary(model, SignedPoint::minus(q1), tail),
                ),
            ),
        ];
        for ((entry, got), (_, want)) in self.words().into_iter().zip(expected.iter()) {
            if let Some(i) = (0..k).find(|&i| got.get(i) != want.get(i)) {
                return Some((entry, i));
            }
        }
        None
    }
}

pub fn kneading_data(model: &MapModel, depth: usize) -> KneadingData {
    let c = model.c_minus();
    KneadingData {
        w_pp: itinerary(model, SignedPoint::plus(0.0), depth),
        w_pm: itinerary(model, SignedPoint::minus(0.0), depth),
        w_mp: itinerary(model, SignedPoint::plus(c), depth),
        w_mm: itinerary(model, SignedPoint::minus(c), depth),
        depth,
        a1_empty: model.a1_empty(),
        b1_empty: model.b1_empty(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdmissibilityCondition {
    /// `ω₊(c₊) ≼ 𝔖ⁿω ≼ ω₋(c₊)`.
    Bounds,
    /// `𝔖ⁱω ≼ ω₋(c₋)` after an `A` letter.
    ACap,
    /// `ω₊(c₋) ≼ 𝔖ⁱω` after a `B` letter.
    BFloor,
    /// Letter of a region that is empty for this model.
    EmptyRegion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible_to_depth: usize,
    pub rejection: Option<(usize, AdmissibilityCondition)>,
}

impl AdmissibilityVerdict {
    pub fn is_admissible(&self) -> bool {
        self.rejection.is_none()
    }
}

/// Checks every shift of `w` up to depth `k` against the kneading bounds.
/// Comparisons that do not mismatch within the available letters pass.
pub fn is_admissible(w: &Word, kd: &KneadingData, k: usize) -> AdmissibilityVerdict {
    let w = w.truncate(k);
    let depth = w.len();
    for i in 0..depth {
        let s = w.shift_by(i);
        let letter = s.first().unwrap();
        let reject = |cond| AdmissibilityVerdict {
            admissible_to_depth: i,
            rejection: Some((i, cond)),
        };
        if lex_compare(&kd.w_pp, &s).is_greater() || lex_compare(&s, &kd.w_pm).is_greater() {
            return reject(AdmissibilityCondition::Bounds);
        }
        if letter.is_a() && lex_compare(&s, &kd.w_mm).is_greater() {
            return reject(AdmissibilityCondition::ACap);
        }
        if letter.is_b() && lex_compare(&kd.w_mp, &s).is_greater() {
            return reject(AdmissibilityCondition::BFloor);
        }
        if (letter == Letter::A1 && kd.a1_empty) || (letter == Letter::B1 && kd.b1_empty) {
            return reject(AdmissibilityCondition::EmptyRegion);
        }
    }
    AdmissibilityVerdict {
        admissible_to_depth: depth,
        rejection: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use proptest::prelude::*;

    fn m0(a: f64, b: f64) -> MapModel {
        MapModel::new(ModelParams::m0(a, b)).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn itinerary_examples() {
        let m = m0(0.6, 0.3);
        assert_eq!(itinerary(&m, SignedPoint::plus(0.25), 3), w("A1 A0 B0"));
        assert_eq!(itinerary(&m, SignedPoint::plus(0.5), 3), w("B0 A1 A0"));
    }

    #[test]
    fn kneading_on_double_homoclinic_strata() {
        let kd = kneading_data(&m0(0.5, 0.5), 50);
        assert_eq!(kd.w_mm, Word::repeat(Letter::A1, 50));
        assert_eq!(kd.w_mp, Word::repeat(Letter::B0, 50));
        assert_eq!(
            kd.w_pp,
            Word::star(Letter::A0, &Word::repeat(Letter::B0, 49))
        );
        assert_eq!(
            kd.w_pm,
            Word::star(Letter::B1, &Word::repeat(Letter::A1, 49))
        );

        let kd = kneading_data(&m0(0.0, 0.0), 50);
        assert_eq!(kd.w_pp, Word::repeat(Letter::A0, 50));
        assert_eq!(
            kd.w_mp,
            Word::star(Letter::B0, &Word::repeat(Letter::A0, 49))
        );
        assert_eq!(kd.w_pm, Word::repeat(Letter::B0, 50));
        assert_eq!(
            kd.w_mm,
            Word::star(Letter::A0, &Word::repeat(Letter::B0, 49))
        );
    }

    #[test]
    fn first_letters_of_default_model() {
        let kd = kneading_data(&m0(0.6, 0.3), 1);
        let firsts: Vec<_> = [&kd.w_pp, &kd.w_pm, &kd.w_mp, &kd.w_mm]
            .iter()
            .map(|x| x.first().unwrap())
            .collect();
        assert_eq!(firsts, vec![Letter::A0, Letter::B1, Letter::B0, Letter::A1]);
    }

    #[test]
    fn admissibility_examples() {
        let kd = kneading_data(&m0(0.0, 0.0), 40);
        assert!(is_admissible(&Word::repeat(Letter::A0, 40), &kd, 40).is_admissible());
        let v = is_admissible(
            &Word::star(Letter::B1, &Word::repeat(Letter::A0, 39)),
            &kd,
            40,
        );
        assert_eq!(v.rejection, Some((0, AdmissibilityCondition::Bounds)));
        let v = is_admissible(
            &Word::star(Letter::A0, &Word::repeat(Letter::B0, 39)),
            &kd,
            40,
        );
        assert!(v.is_admissible());
        assert_eq!(v.admissible_to_depth, 40);
    }

    #[test]
    fn recursion_holds_at_coincidences() {
        // f(q1) lands exactly on c- for this model
        for (a, b) in [
            (0.6, 0.3),
            (0.5, 0.5),
            (0.0, 0.0),
            (0.0, 0.3),
            (0.6, 0.0),
            (0.75, 0.25),
        ] {
            let m = m0(a, b);
            assert_eq!(
                kneading_data(&m, 50).check_recursion(&m),
                None,
                "({a}, {b})"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recursion_holds_off_strata(a in 0.01f64..0.99, b in 0.01f64..0.99) {
            prop_assume!((a - 0.5).abs() > 0.01 && (b - 0.5).abs() > 0.01);
            let m = m0(a, b);
            prop_assert_eq!(kneading_data(&m, 50).check_recursion(&m), None);
        }

        #[test]
        fn sides_agree_off_boundaries(a in 0.01f64..0.99, b in 0.01f64..0.99, x in 0.001f64..0.999) {
            let m = m0(a, b);
            let wp = itinerary(&m, SignedPoint::plus(x), 20);
            let wm = itinerary(&m, SignedPoint::minus(x), 20);
            prop_assert_eq!(wp, wm);
        }

        #[test]
        fn realized_itineraries_are_admissible(a in 0.01f64..0.99, b in 0.01f64..0.99, x in 0.0f64..1.0) {
            let m = m0(a, b);
            let kd = kneading_data(&m, 40);
            for sp in [SignedPoint::plus(x), SignedPoint::minus(x)] {
                let v = is_admissible(&itinerary(&m, sp, 40), &kd, 40);
                prop_assert!(v.is_admissible(), "{:?}", v);
            }
        }
    }
}

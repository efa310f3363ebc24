//! Symbolic dynamics on the leaf space: words, itineraries, kneading data,
//! admissibility, cylinder realization and conjugacies.

mod conjugacy;
mod itinerary;
mod realize;
mod word;

pub use conjugacy::{build_conjugacy, match_kneading, Conjugacy, ShootingResult};
pub use itinerary::{
    is_admissible, itinerary, kneading_data, letter_of, AdmissibilityCondition,
    AdmissibilityVerdict, KneadingData, KneadingEntry,
};
pub use realize::{realize, region_closure, Cylinder};
pub use word::{lex_compare, Letter, LexOrder, Word};

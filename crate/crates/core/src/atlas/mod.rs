//! Classification of models into the strata of the parameter torus, and the
//! certificates backing each verdict.

mod certificates;
mod classify;
mod golden;
mod segments;

pub use certificates::{
    horseshoe_certificate, horseshoe_strip, sampled_clearance, trapping_interval,
    HorseshoeCertificate, TrappingCertificate, TrappingKind,
};
pub use classify::{classify, he_curves, sigma_components, Dynamics, RegionVerdict, Stratum};
pub use golden::{golden_bound, GoldenBound};
pub use segments::{
    attractor_span, attractor_span_with, iterate_segments, map_arc, map_piece, ArcUnion,
    AttractorSpan, CoverageCertificate, SideHint, ARC_BUDGET, SPAN_EPS, SPAN_MAX_N, SPAN_SEED_LEN,
};

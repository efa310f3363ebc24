//! Two-parameter families of expanding circle maps with two discontinuities,
//! their kneading theory, a classification atlas of the parameter torus,
//! and a skew-product model on the annulus.

pub mod annulus;
pub mod atlas;
pub mod circle;
pub mod error;
pub mod lab;
pub mod model;
pub mod singularity;
pub mod symbolic;

pub use circle::{Arc, CirclePoint};
pub use error::{Error, Result};
pub use model::{
    build_model, verify_hypotheses, Branch, MapModel, ModelParams, Side, SignedPoint, PHI,
};

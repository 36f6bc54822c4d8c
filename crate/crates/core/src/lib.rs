//! Stability of minimal cones via separable variations: the spectrum of the
//! Jacobi operator of the link hypersurface combined with an axial
//! Sturm–Liouville problem in the warping direction.

pub mod axial;
pub mod cli;
pub mod config;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod model;
pub mod numerics;
pub mod report;
pub mod stability;
pub mod sturm_liouville;
pub mod surfaces;

pub use error::{Error, Result};
pub use model::{builtin_model, WarpedModel};

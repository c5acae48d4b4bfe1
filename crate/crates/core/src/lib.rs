//! Exact computations for finite-dimensional quiver algebras.
//!
//! The crate builds quotients of path algebras, represents modules as quiver
//! representations over an exact field, and computes syzygies, Ext groups,
//! stable Hom spaces and Gorenstein-projectivity. On top of that sits a
//! deformation engine which enumerates first-order lifts over the dual numbers
//! and runs obstruction calculus along `k[t]/(t^n)` to classify versal
//! deformation rings of the form `k`, `k[[t]]/(t^N)`.

pub mod algebra;
pub mod biserial;
pub mod deform;
pub mod error;
pub mod exactla;
pub mod fixtures;
pub mod homalg;
pub mod rep;

pub use algebra::{Algebra, AlgebraElement, Path, QuiverSpec};
pub use error::{Error, Result};
pub use exactla::{Field, Mat, Scalar};
pub use rep::{Morphism, Rep};

/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

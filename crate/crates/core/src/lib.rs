//! Exact computer algebra for quantum tori, matrix Lie algebras over them,
//! and extended affine Lie algebras built as interlaced extensions, together
//! with randomized exact-identity checkers for every construction.

pub mod error;
pub mod scalar;
pub mod lattice;
mod linalg;
pub mod qtorus;
pub mod matlie;
pub mod dergroup;
pub mod glwords;
pub mod interlace;
pub mod lift;
pub mod report;
pub mod sample;
pub mod parse;

pub use error::{Error, Result};

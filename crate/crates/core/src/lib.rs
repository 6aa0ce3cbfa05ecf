//! Coxeter systems, their Davis complexes and ruins, the coset coloring of
//! one-letter ruins, and exact rational homology of finite pieces.

pub mod coloring;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod homology;
pub mod nerve;
pub mod system;
pub mod words;

pub use error::{CoxeterError, Result};
pub use system::{CoxeterMatrix, CoxeterSystem, GenSet, Label};
pub use words::GroupElement;

//! Exact-arithmetic laboratory for counting restriction kernels and 0/1
//! patterns of arrangement families, with epsilon-net and fractional-Helly
//! experiments on top.
//!
//! Everything is computed over the rationals: matrices are reduced with exact
//! fraction arithmetic, subspaces are kept in a canonical echelon form so that
//! they can be hashed and counted, and all instance generators are
//! deterministic functions of their parameters and a seed.

pub mod applications;
pub mod arrangements;
pub mod cohomology;
pub mod exactq;
pub mod report;
pub mod vcdensity;

mod error;

pub use error::{Error, Result};

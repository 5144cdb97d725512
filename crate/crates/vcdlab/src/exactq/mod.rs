//! Exact linear algebra over the rationals.
//!
//! Dense matrices of arbitrary-precision fractions, reduced row echelon form,
//! kernels, and canonically represented subspaces. Canonical form matters: the
//! counting routines in this crate count *distinct* subspaces, so two equal
//! subspaces must compare and hash equal no matter how they were produced.

mod matrix;
mod rational;
mod subspace;

pub use matrix::QMatrix;
pub use rational::Rational;
pub use subspace::{induced_map_on_quotient, quotient_representatives, Subspace};

//! Exact generators for the instance families the experiments run on:
//! generic hyperplanes in projective space, the grid-of-lines sweep, and the
//! pencil construction over an incidence-graph model of line unions.
//!
//! All geometry is rational and all genericity conditions are certified by
//! rank computations at generation time; nothing is decided by sampling
//! points or by floating-point predicates.

mod grid;
mod hyperplanes;
mod pencil;
pub mod schema;

pub use grid::{GridInstance, SweepPosition};
pub use hyperplanes::{
    binomial, enumerate_realizable_patterns, gen_generic_hyperplanes, generic_pattern_count,
    HyperplaneFamily, Pattern,
};
pub use pencil::{gen_pencil_instance, PencilInstance, PencilTestPoint};

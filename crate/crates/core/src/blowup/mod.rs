//! Sequences of quadratic transforms along a valuation, tracked in explicit
//! affine charts.

pub mod chart;
pub mod chunk;
pub mod monoidal;
pub mod oracle;
pub mod ratfunc;

pub use chart::{same_ring, same_ring_from, single_quadratic_transform, strict_transform, Chart, StrictTransform};
pub use chunk::{
    advance_to, chunk_equivalence, chunk_trace, chunk_transform, is_admissible, next_chunk_data, ChunkStep,
};
pub use monoidal::{
    admissible_parameter, monoidal_checks, monoidal_sequence, parameter_denominator, MonoidalLevel, NextParameter, UnitFactor,
};
pub use oracle::{ScaledOracle, ValueOracle};
pub use ratfunc::{Germ, RatFunc};

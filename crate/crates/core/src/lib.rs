//! Exact computations with valuations dominating a regular local ring of
//! dimension two: generating sequences of jumping polynomials, sequences of
//! quadratic transforms along the valuation, and the comparison of two such
//! sequences across a monomial extension `u = x^t δ, v = y`.

pub mod algebra;
pub mod blowup;
pub mod engine;
pub mod error;
pub mod extension;
pub mod report;

pub use error::{Error, Result};

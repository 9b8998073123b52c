//! Exact arithmetic: ground fields, bivariate polynomials, Euclid/Bézout data.

pub mod euclid;
pub mod field;
pub mod poly;

pub use euclid::{bezout, euclid_data, reduce, EuclidData};
pub use field::{parse_rational, rat, rat_int, FieldElem, GroundField, Rational};
pub use poly::{parse_poly, BivarPoly, PolyJson, Vars, DEFAULT_MAX_TERMS};

//! Jumping polynomials, standard expansions and the valuation they define.

pub mod expansion;
pub mod independent;
pub mod semigroup;
pub mod sequence;
pub mod spec;
pub mod verify;

pub use expansion::{expand, initial_term, residue, value, ExpansionTerm, StandardExpansion, TermValue};
pub use independent::{
    check_barb_inequality, extract_independent, rewrite_in_independent, HRewrite, IndependentData,
    IndependentLevel,
};
pub use semigroup::Semigroup;
pub use sequence::{
    build_jumping_sequence, build_jumping_sequence_relaxed, check_b_inequality, exponent_solve, JumpingSequence,
};
pub use spec::{Mode, ValuationSpec};
pub use verify::{random_poly, verify_generating_sequence, verify_minimality, GenSeqConfig, GenSeqReport, Minimality};

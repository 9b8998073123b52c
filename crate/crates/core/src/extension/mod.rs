//! The extension `u = x^t δ, v = y`: jumping sequences on both sides, chunk
//! descent, prepared pairs and the ladder of stable forms.

pub mod classify;
pub mod descent;
pub mod dual;
pub mod ext;
pub mod ladder;
pub mod prepared;

pub use classify::{classify_toroidal_form, ToroidalForm, ValuationType};
pub use descent::{chunk_descend, p_adic_split, Descent};
pub use dual::{build_dual_sequences, discrete_checks, dual_checks, first_gcd_failure, upstairs_spec, DualSequences};
pub use ext::MonomialExtension;
pub use ladder::{ladder, short_parameter, LadderCertificate, LadderOutcome, Rung};
pub use prepared::{
    dominates, prepared_pair_check, prepared_pair_step, to_s_chart, to_s_chart_germ, PreparedReport, PreparedStep, DEFAULT_STEP_CEILING,
};

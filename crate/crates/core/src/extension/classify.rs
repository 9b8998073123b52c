use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::ladder::LadderOutcome;
use crate::error::{Error, Result};

/// Type of `ν*` as far as the toroidal shape is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValuationType {
    Divisorial,
    RankTwo,
    RationalRankTwo,
    NonDiscrete,
    Discrete,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToroidalForm {
    pub case: u8,
    pub shape: String,
    pub params: Value,
    /// Generating sequences of `ν` and `ν*`.
    pub sequences: [String; 2],
    /// Minimality of the sequence in `R` and in `S`.
    pub minimal: Option<[bool; 2]>,
    /// Cases 1–3 are reported from the flags without any computation.
    pub computed: bool,
}

/// Toroidal structure of the generating-sequence map. `pbar1` is `p̄_1` of
/// `ν` (needed for case 4); `t` is the exponent of the stable form.
pub fn classify_toroidal_form(
    kind: ValuationType,
    outcome: Option<&LadderOutcome>,
    pbar1: Option<u64>,
    t: u64,
) -> Result<ToroidalForm> {
    let declarative = |case, shape: &str, seqs: [&str; 2]| ToroidalForm {
        case,
        shape: shape.into(),
        params: json!({}),
        sequences: seqs.map(String::from),
        minimal: Some([true, true]),
        computed: false,
    };
    match kind {
        ValuationType::Divisorial => Ok(declarative(1, "u = x^a γ", ["{u}", "{x}"])),
        ValuationType::RankTwo => Ok(declarative(2, "u = x^a y^b δ, v = y^d γ, ad != 0", ["{u, v}", "{x, y}"])),
        ValuationType::RationalRankTwo => {
            Ok(declarative(3, "u = x^a y^b δ, v = x^c y^d γ, ad - bc != 0", ["{u, v}", "{x, y}"]))
        }
        ValuationType::NonDiscrete | ValuationType::Discrete => {
            match outcome {
                Some(LadderOutcome::Contradiction { m, l, g, .. }) => {
                    return Err(Error::Unsupported(format!(
                        "no stable toroidal form: contradiction at M = {m}, l = {l}, g = {g}"
                    )))
                }
                Some(LadderOutcome::Failed { rung }) => {
                    return Err(Error::Internal(format!("ladder certificate failed at rung {rung}")))
                }
                _ => {}
            }
            if kind == ValuationType::Discrete {
                return Ok(ToroidalForm {
                    case: 5,
                    shape: "u = x^a γ, Γ = <ν(u)>, Γ* = <ν*(x)>".into(),
                    params: json!({"a": t}),
                    sequences: ["{u, {T_i}_{i>0}}".into(), "{x, {T_i}_{i>0}}".into()],
                    minimal: Some([false, false]),
                    computed: outcome.is_some(),
                });
            }
            let pbar1 = pbar1.ok_or_else(|| Error::insufficient(1, "case 4 needs p̄_1"))?;
            // in S the first level has p̄'_1 = t p̄_1
            Ok(ToroidalForm {
                case: 4,
                shape: "H_0 = x^a γ, H_1 = y".into(),
                params: json!({"a": t, "pbar_1": pbar1, "pbar_up_1": t * pbar1}),
                sequences: ["{H_l}_{l>=0}".into(), "{x, {H_l}_{l>0}}".into()],
                minimal: Some([pbar1 != 1, t * pbar1 != 1]),
                computed: outcome.is_some(),
            })
        }
    }
}

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{BivarPoly, FieldElem, GroundField, PolyJson, Vars};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Nondiscrete,
    Discrete,
}

/// Finite description of a valuation dominating k[u,v]_(u,v): the ratios
/// `p_i/q_i`, scalars `λ_i` and units `δ_i` for `i = 1..N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationSpec {
    pub field: GroundField,
    pub vars: Vars,
    pub pairs: Vec<(u64, u64)>,
    pub lambdas: Vec<FieldElem>,
    pub units: Vec<BivarPoly>,
    pub mode: Mode,
}

impl ValuationSpec {
    /// Spec with all `λ_i = 1`, `δ_i = 1`.
    pub fn simple(field: GroundField, pairs: &[(u64, u64)]) -> Self {
        let n = pairs.len();
        ValuationSpec {
            field,
            vars: Vars::UV,
            pairs: pairs.to_vec(),
            lambdas: vec![field.one(); n],
            units: vec![BivarPoly::one(field, Vars::UV); n],
            mode: Mode::Nondiscrete,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// The first `depth` pairs with their scalars and units.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return Err(Error::insufficient(depth, format!("depth {depth} outside 1..={}", self.depth())));
        }
        let mut s = self.clone();
        s.pairs.truncate(depth);
        s.lambdas.truncate(depth);
        s.units.truncate(depth);
        Ok(s)
    }

    pub fn depth(&self) -> usize {
        self.pairs.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.pairs.len();
        if n == 0 {
            return Err(Error::InvalidSpec("at least one pair is required".into()));
        }
        if self.lambdas.len() != n || self.units.len() != n {
            return Err(Error::InvalidSpec(format!(
                "{n} pairs but {} lambdas and {} units",
                self.lambdas.len(),
                self.units.len()
            )));
        }
        for (i, &(p, q)) in self.pairs.iter().enumerate() {
            if p == 0 || q == 0 {
                return Err(Error::InvalidSpec(format!("pair {} = ({p},{q}) must be positive", i + 1)));
            }
            if p.gcd(&q) != 1 {
                return Err(Error::InvalidSpec(format!("pair {} = ({p},{q}) is not coprime", i + 1)));
            }
        }
        for (i, l) in self.lambdas.iter().enumerate() {
            if !self.field.contains(l) || l.is_zero() {
                return Err(Error::InvalidSpec(format!("lambda_{} must be a nonzero field element", i + 1)));
            }
        }
        for (i, d) in self.units.iter().enumerate() {
            if d.field() != self.field || d.vars() != self.vars {
                return Err(Error::InvalidSpec(format!("unit delta_{} lives in the wrong ring", i + 1)));
            }
            if !d.constant_term().is_one() {
                return Err(Error::InvalidSpec(format!(
                    "unit delta_{} = {d} must have constant term 1",
                    i + 1
                )));
            }
        }
        if self.mode == Mode::Discrete && self.pairs.iter().any(|p| p.1 != 1) {
            return Err(Error::InvalidSpec("discrete mode requires every q_i = 1".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let field = serde_json::to_value(self.field).expect("field serializes");
        let units: Vec<Value> = self
            .units
            .iter()
            .map(|u| {
                if u.is_one() {
                    Value::String("1".into())
                } else {
                    serde_json::to_value(u.to_json()).expect("poly serializes")
                }
            })
            .collect();
        serde_json::json!({
            "field": field,
            "pairs": self.pairs.iter().map(|&(p, q)| [p, q]).collect::<Vec<_>>(),
            "lambdas": self.lambdas.iter().map(FieldElem::to_canonical).collect::<Vec<_>>(),
            "units": units,
            "mode": self.mode,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::from_json_in(v, Vars::UV)
    }

    pub fn from_json_in(v: &Value, vars: Vars) -> Result<Self> {
        let raw: SpecJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let field = match raw.field {
            GroundField::Prime { p } => GroundField::prime(p)?,
            f => f,
        };
        let n = raw.pairs.len();
        let lambdas = match raw.lambdas {
            Some(ls) => ls.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?,
            None => vec![field.one(); n],
        };
        let units = match raw.units {
            Some(us) => us
                .iter()
                .map(|u| match u {
                    UnitJson::Text(s) => {
                        crate::algebra::parse_poly(field, vars, s)
                    }
                    UnitJson::Poly(p) => {
                        let poly = BivarPoly::from_json(field, p)?;
                        if poly.vars() != vars {
                            return Err(Error::InvalidSpec(format!(
                                "unit uses variables {:?}, expected {:?}",
                                p.vars,
                                vars.names()
                            )));
                        }
                        Ok(poly)
                    }
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![BivarPoly::one(field, vars); n],
        };
        let spec = ValuationSpec {
            field,
            vars,
            pairs: raw.pairs.iter().map(|p| (p[0], p[1])).collect(),
            lambdas,
            units,
            mode: raw.mode.unwrap_or_default(),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    field: GroundField,
    pairs: Vec<[u64; 2]>,
    lambdas: Option<Vec<String>>,
    units: Option<Vec<UnitJson>>,
    mode: Option<Mode>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum UnitJson {
    Text(String),
    Poly(PolyJson),
}

use serde_json::{json, Value};

use crate::algebra::{parse_poly, BivarPoly, PolyJson, Vars};
use crate::engine::ValuationSpec;
use crate::error::{Error, Result};

/// The extension `R -> S` given by `u = x^t δ`, `v = y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialExtension {
    pub t: u64,
    pub delta: BivarPoly,
    pub spec: ValuationSpec,
}

impl MonomialExtension {
    pub fn new(t: u64, delta: BivarPoly, spec: ValuationSpec) -> Result<Self> {
        let e = Self::new_unchecked(t, delta, spec)?;
        if !e.delta.constant_term().is_one() {
            return Err(Error::InvalidArgument(format!("delta = {} must have constant term 1", e.delta)));
        }
        Ok(e)
    }

    /// Skips the unit check on `δ`, for diagnosing malformed states.
    pub fn new_unchecked(t: u64, delta: BivarPoly, spec: ValuationSpec) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidArgument("t must be positive".into()));
        }
        if delta.vars() != Vars::XY || delta.field() != spec.field {
            return Err(Error::InvalidArgument("delta must be a polynomial in x, y over the spec field".into()));
        }
        spec.validate()?;
        Ok(MonomialExtension { t, delta, spec })
    }

    /// Images of `u, v` in `k[x, y]`.
    pub fn phi(&self) -> [BivarPoly; 2] {
        let f = self.spec.field;
        let x = BivarPoly::var(f, Vars::XY, 0);
        [x.pow(self.t).mul(&self.delta), BivarPoly::var(f, Vars::XY, 1)]
    }

    pub fn to_json(&self) -> Value {
        json!({"t": self.t, "delta": self.delta.to_json(), "spec": self.spec.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("extension must be a JSON object".into()))?;
        for k in obj.keys() {
            if !["t", "delta", "spec"].contains(&k.as_str()) {
                return Err(Error::Parse(format!("unknown extension field {k:?}")));
            }
        }
        let t = obj
            .get("t")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("extension needs a positive integer \"t\"".into()))?;
        let spec = ValuationSpec::from_json(obj.get("spec").ok_or_else(|| Error::Parse("missing \"spec\"".into()))?)?;
        let delta = match obj.get("delta") {
            None => BivarPoly::one(spec.field, Vars::XY),
            Some(Value::String(s)) => parse_poly(spec.field, Vars::XY, s)?,
            Some(p) => {
                let pj: PolyJson = serde_json::from_value(p.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                BivarPoly::from_json(spec.field, &pj)?
            }
        };
        Self::new(t, delta, spec)
    }
}

use serde::Serialize;
use serde_json::Value;

use crate::algebra::Rational;

/// One verified (or refuted) identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub inputs: Value,
    pub witness: Value,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, inputs: Value, witness: Value, pass: bool) -> Self {
        CheckRecord {
            check: check.into(),
            inputs,
            witness,
            pass,
        }
    }
}

pub fn all_pass(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.pass)
}

pub fn failures(records: &[CheckRecord]) -> Vec<&CheckRecord> {
    records.iter().filter(|r| !r.pass).collect()
}

/// Rational as its canonical string (`"3/2"`, `"5"`).
pub fn rs(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rs_opt(r: &Option<Rational>) -> Value {
    match r {
        Some(r) => Value::String(rs(r)),
        None => Value::Null,
    }
}

pub fn rs_vec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(rs(r))).collect())
}

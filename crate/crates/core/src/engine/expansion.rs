use num_traits::Zero;
use serde_json::json;

use super::sequence::JumpingSequence;
use crate::algebra::{rat_int, BivarPoly, FieldElem, Rational};
use crate::error::{Error, Result};
use crate::report::rs;

/// `coeff · u^{a_0} · T_1^{a_1} ⋯ T_M^{a_M}` with `M = N + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub coeff: FieldElem,
    pub exps: Vec<u64>,
}

impl ExpansionTerm {
    /// Exponent of the top polynomial, whose value is unknown.
    pub fn top_exp(&self) -> u64 {
        *self.exps.last().expect("nonempty exponent vector")
    }
}

/// The standard expansion of a polynomial in the jumping polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardExpansion {
    pub terms: Vec<ExpansionTerm>,
}

/// Value of a standard monomial: exact, or a strict lower bound when the
/// top polynomial occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermValue {
    Exact(Rational),
    Above(Rational),
}

impl StandardExpansion {
    pub fn recompose(&self, js: &JumpingSequence) -> BivarPoly {
        let mut acc = BivarPoly::zero(js.field(), js.vars());
        for t in &self.terms {
            let mut m = BivarPoly::constant(js.field(), js.vars(), t.coeff.clone());
            for (i, &e) in t.exps.iter().enumerate() {
                if e > 0 {
                    m = m.mul(&js.t(i).pow(e));
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    pub fn to_json(&self, js: &JumpingSequence) -> serde_json::Value {
        json!(self
            .terms
            .iter()
            .map(|t| {
                let v = match term_value(js, t) {
                    TermValue::Exact(r) => json!({"exact": rs(&r)}),
                    TermValue::Above(r) => json!({"above": rs(&r)}),
                };
                json!({"c": t.coeff.to_canonical(), "e": t.exps, "value": v})
            })
            .collect::<Vec<_>>())
    }
}

pub fn term_value(js: &JumpingSequence, t: &ExpansionTerm) -> TermValue {
    let m = js.depth() + 1;
    let rest = js.monomial_value(&t.exps[..m]);
    match t.exps[m] {
        0 => TermValue::Exact(rest),
        a => TermValue::Above(rest + rat_int(a as i64) * js.next_beta_lower_bound()),
    }
}

fn require_standard(js: &JumpingSequence) -> Result<()> {
    if js.is_standard() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "standard expansion needs jumping polynomials monic in the second variable".into(),
        ))
    }
}

pub fn expand(js: &JumpingSequence, f: &BivarPoly) -> Result<StandardExpansion> {
    require_standard(js)?;
    if f.field() != js.field() || f.vars() != js.vars() {
        return Err(Error::InvalidArgument("polynomial is not in the ring of the sequence".into()));
    }
    let top = js.depth() + 1;
    let mut terms = Vec::new();
    let mut exps = vec![0u64; top + 1];
    expand_rec(js, f, top, &mut exps, &mut terms)?;
    terms.sort_by(|a, b| a.exps.cmp(&b.exps));
    Ok(StandardExpansion { terms })
}

fn expand_rec(
    js: &JumpingSequence,
    f: &BivarPoly,
    level: usize,
    exps: &mut Vec<u64>,
    out: &mut Vec<ExpansionTerm>,
) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    if level == 0 {
        for (&(a, b), c) in f.terms() {
            debug_assert_eq!(b, 0);
            let mut e = exps.clone();
            e[0] = a as u64;
            out.push(ExpansionTerm { coeff: c.clone(), exps: e });
        }
        return Ok(());
    }
    let t = js.t(level);
    let mut cur = f.clone();
    let mut digit = 0u64;
    while !cur.is_zero() {
        let (q, r) = cur.divmod_in_v(t)?;
        exps[level] = digit;
        expand_rec(js, &r, level - 1, exps, out)?;
        cur = q;
        digit += 1;
    }
    exps[level] = 0;
    Ok(())
}

/// The term realising the value of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialTerm {
    pub value: Rational,
    pub term: ExpansionTerm,
}

/// Certified value of a nonzero polynomial.
pub fn value(js: &JumpingSequence, f: &BivarPoly) -> Result<Rational> {
    Ok(initial_term(js, f)?.value)
}

pub fn initial_term(js: &JumpingSequence, f: &BivarPoly) -> Result<InitialTerm> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("the zero polynomial has infinite value".into()));
    }
    let exp = expand(js, f)?;
    initial_of_expansion(js, &exp)
}

pub fn initial_of_expansion(js: &JumpingSequence, exp: &StandardExpansion) -> Result<InitialTerm> {
    let needed = js.depth() + 1;
    let mut best: Option<(Rational, &ExpansionTerm)> = None;
    let mut bounds = Vec::new();
    let mut pure = Vec::new();
    for t in &exp.terms {
        match term_value(js, t) {
            TermValue::Exact(v) => {
                pure.push(v.clone());
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, t));
                }
            }
            TermValue::Above(b) => bounds.push(b),
        }
    }
    let (m, t) = best.ok_or_else(|| {
        Error::insufficient(needed, "every term of the expansion involves the top jumping polynomial")
    })?;
    pure.sort();
    if pure.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Internal("two standard monomials share a value".into()));
    }
    if let Some(b) = bounds.iter().find(|b| m > **b) {
        return Err(Error::insufficient(
            needed,
            format!(
                "minimum {} over known terms exceeds the lower bound {} of a term with the top polynomial",
                rs(&m),
                rs(b)
            ),
        ));
    }
    debug_assert!(m >= Rational::zero());
    Ok(InitialTerm {
        value: m,
        term: t.clone(),
    })
}

/// Residue in k of `f/g` when `ν(f) = ν(g)`.
pub fn residue(js: &JumpingSequence, f: &BivarPoly, g: &BivarPoly) -> Result<FieldElem> {
    let a = initial_term(js, f)?;
    let b = initial_term(js, g)?;
    if a.value != b.value {
        return Err(Error::InvalidArgument(format!(
            "values differ: {} vs {}",
            rs(&a.value),
            rs(&b.value)
        )));
    }
    if a.term.exps != b.term.exps {
        return Err(Error::Internal("equal values from distinct standard monomials".into()));
    }
    Ok(a.term.coeff.div(&b.term.coeff).expect("nonzero coefficient"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, rat, GroundField, Vars};
    use crate::engine::{build_jumping_sequence, ValuationSpec};

    fn spec_a() -> JumpingSequence {
        build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &[(3, 2), (5, 3)])).unwrap()
    }

    fn q(s: &str) -> BivarPoly {
        parse_poly(GroundField::Rationals, Vars::UV, s).unwrap()
    }

    #[test]
    fn v_cubed() {
        let js = spec_a();
        let e = expand(&js, &q("v^3")).unwrap();
        let ex: Vec<_> = e.terms.iter().map(|t| t.exps.clone()).collect();
        assert_eq!(ex, vec![vec![0, 1, 1, 0], vec![3, 1, 0, 0]]);
        assert_eq!(value(&js, &q("v^3")).unwrap(), rat(9, 2));
        assert_eq!(e.recompose(&js), q("v^3"));
    }

    #[test]
    fn top_polynomial_is_uncertified() {
        let js = spec_a();
        assert!(matches!(value(&js, js.t(3)), Err(Error::InsufficientDepth { .. })));
        assert_eq!(value(&js, js.t(2)).unwrap(), rat(23, 6));
    }

    #[test]
    fn residue_of_tangent_ratio() {
        let mut s = ValuationSpec::simple(GroundField::Rationals, &[(3, 2), (5, 3)]);
        s.lambdas[0] = GroundField::Rationals.from_i64(2);
        let js = build_jumping_sequence(&s).unwrap();
        assert_eq!(residue(&js, &q("v^2"), &q("u^3")).unwrap().to_canonical(), "2");
    }
}

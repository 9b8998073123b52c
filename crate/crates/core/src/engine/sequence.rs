use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::json;

use super::spec::{Mode, ValuationSpec};
use crate::algebra::{rat_int, BivarPoly, Rational, Vars};
use crate::error::{Error, Result};
use crate::report::{rs, CheckRecord};

/// The jumping polynomials `T_0..T_{N+1}` of a spec together with the
/// derived values `β_0..β_N`, products `Q_0..Q_N` and exponents `n_{i,j}`.
#[derive(Debug, Clone)]
pub struct JumpingSequence {
    spec: ValuationSpec,
    polys: Vec<BivarPoly>,
    beta: Vec<Rational>,
    qprod: Vec<u64>,
    exps: Vec<Vec<u64>>,
    standard: bool,
}

/// Solve `q_i β_i = Σ_{j<i} n_j β_j` with `0 <= n_j < q_j` for `j >= 1`.
///
/// `beta[j] = β_j` for `j <= i`; `q[j] = q_j` for `1 <= j <= i`
/// (`q[0]` is ignored).
pub fn exponent_solve(i: usize, beta: &[Rational], q: &[u64]) -> Result<Vec<u64>> {
    if i == 0 || beta.len() <= i || q.len() <= i {
        return Err(Error::InvalidArgument(format!("exponent_solve needs data up to index {i}")));
    }
    let mut qprod = vec![1u64; i + 1];
    for j in 1..=i {
        qprod[j] = qprod[j - 1]
            .checked_mul(q[j])
            .ok_or_else(|| Error::Resource("product of denominators overflows".into()))?;
    }
    let mut rest = Rational::from_integer(q[i].into()) * &beta[i];
    let mut n = vec![0u64; i];
    for j in (1..i).rev() {
        let scale = Rational::from_integer(qprod[j - 1].into());
        let found = (0..q[j]).find(|&nj| {
            let r = (&rest - Rational::from_integer(nj.into()) * &beta[j]) * &scale;
            r.is_integer()
        });
        let nj = found.ok_or_else(|| {
            Error::InvalidSpec(format!("no exponent n_{{{i},{j}}} makes the residual integral"))
        })?;
        n[j] = nj;
        rest -= Rational::from_integer(nj.into()) * &beta[j];
    }
    if !rest.is_integer() || rest < Rational::zero() {
        return Err(Error::InvalidSpec(format!(
            "leftover exponent n_{{{i},0}} = {} is not a nonnegative integer",
            rs(&rest)
        )));
    }
    n[0] = u64::try_from(rest.to_integer()).map_err(|_| Error::Resource("exponent too large".into()))?;
    Ok(n)
}

impl JumpingSequence {
    pub fn spec(&self) -> &ValuationSpec {
        &self.spec
    }

    /// Number `N` of pairs supplied.
    pub fn depth(&self) -> usize {
        self.spec.pairs.len()
    }

    pub fn vars(&self) -> Vars {
        self.spec.vars
    }

    pub fn field(&self) -> crate::algebra::GroundField {
        self.spec.field
    }

    /// `T_i` for `0 <= i <= N + 1`.
    pub fn t(&self, i: usize) -> &BivarPoly {
        &self.polys[i]
    }

    pub fn polys(&self) -> &[BivarPoly] {
        &self.polys
    }

    /// `β_i` for `0 <= i <= N`.
    pub fn beta(&self, i: usize) -> &Rational {
        &self.beta[i]
    }

    pub fn betas(&self) -> &[Rational] {
        &self.beta
    }

    /// `(p_i, q_i)` for `1 <= i <= N`.
    pub fn pair(&self, i: usize) -> (u64, u64) {
        self.spec.pairs[i - 1]
    }

    pub fn q(&self, i: usize) -> u64 {
        self.pair(i).1
    }

    /// `Q_i = q_1 ⋯ q_i`.
    pub fn qprod(&self, i: usize) -> u64 {
        self.qprod[i]
    }

    /// `n_{i,0..i-1}` for `1 <= i <= N`.
    pub fn exps(&self, i: usize) -> &[u64] {
        &self.exps[i]
    }

    /// Whether each `T_{i+1}` is monic in the second variable of degree `Q_i`,
    /// which the standard expansion relies on.
    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub fn mode(&self) -> Mode {
        self.spec.mode
    }

    /// Strict lower bound for the unknown `β_{N+1}`.
    pub fn next_beta_lower_bound(&self) -> Rational {
        let n = self.depth();
        rat_int(self.q(n) as i64) * &self.beta[n]
    }

    /// Value of the monomial `∏ T_i^{a_i}` over `i <= N`.
    pub fn monomial_value(&self, a: &[u64]) -> Rational {
        a.iter()
            .zip(&self.beta)
            .map(|(&e, b)| Rational::from_integer(BigInt::from(e)) * b)
            .fold(Rational::zero(), |s, x| s + x)
    }
}

fn compute_betas(pairs: &[(u64, u64)]) -> Result<(Vec<Rational>, Vec<u64>)> {
    let n = pairs.len();
    let mut beta = vec![Rational::one()];
    let mut qprod = vec![1u64];
    for i in 1..=n {
        let (p, q) = pairs[i - 1];
        let b = if i == 1 {
            Rational::new(p.into(), q.into())
        } else {
            let qi = pairs[i - 2].1;
            Rational::from_integer(qi.into()) * &beta[i - 1]
                + Rational::new(p.into(), (q as u128 * qprod[i - 1] as u128).into())
        };
        beta.push(b);
        qprod.push(
            qprod[i - 1]
                .checked_mul(q)
                .ok_or_else(|| Error::Resource("product of denominators overflows".into()))?,
        );
    }
    Ok((beta, qprod))
}

/// Build `T_0..T_{N+1}`, rejecting specs whose polynomials would not be monic
/// in the second variable.
pub fn build_jumping_sequence(spec: &ValuationSpec) -> Result<JumpingSequence> {
    build(spec, false)
}

/// As [`build_jumping_sequence`] but accepts non-standard polynomials (for
/// instance units depending on the second variable); expansion-based
/// operations then refuse to run.
pub fn build_jumping_sequence_relaxed(spec: &ValuationSpec) -> Result<JumpingSequence> {
    build(spec, true)
}

fn build(spec: &ValuationSpec, relaxed: bool) -> Result<JumpingSequence> {
    spec.validate()?;
    let n = spec.depth();
    let (field, vars) = (spec.field, spec.vars);
    let (beta, qprod) = compute_betas(&spec.pairs)?;
    let mut q = vec![0u64];
    q.extend(spec.pairs.iter().map(|p| p.1));

    let mut polys = vec![BivarPoly::var(field, vars, 0), BivarPoly::var(field, vars, 1)];
    let mut exps = vec![Vec::new()];
    let mut standard = true;
    for i in 1..=n {
        let e = exponent_solve(i, &beta, &q)?;
        let mut prod = spec.units[i - 1].scale(&spec.lambdas[i - 1]);
        for (j, &nj) in e.iter().enumerate() {
            if nj > 0 {
                prod = prod.mul(&polys[j].pow(nj));
            }
        }
        let next = polys[i].pow(q[i]).sub(&prod);
        let dv = next.deg_v();
        let monic = dv == Some(qprod[i] as u32) && next.coeff_in_v(qprod[i] as u32).is_one();
        if !monic {
            if !relaxed {
                return Err(Error::InvalidSpec(format!(
                    "T_{} = {next} is not monic of degree {} in {}; units must not raise the degree",
                    i + 1,
                    qprod[i],
                    vars.names()[1]
                )));
            }
            standard = false;
        }
        if next.len() > crate::algebra::DEFAULT_MAX_TERMS {
            return Err(Error::Resource(format!("T_{} has {} terms", i + 1, next.len())));
        }
        polys.push(next);
        exps.push(e);
    }
    Ok(JumpingSequence {
        spec: spec.clone(),
        polys,
        beta,
        qprod,
        exps,
        standard,
    })
}

/// Structural checks on `β_i`, `Q_i` and `n_{i,j}`.
pub fn check_b_inequality(js: &JumpingSequence) -> Vec<CheckRecord> {
    let n = js.depth();
    let mut out = Vec::new();
    let pairs = json!(js.spec.pairs);

    let mut rec_ok = true;
    let mut rec_w = Vec::new();
    for i in 1..n {
        let (p, q) = js.pair(i + 1);
        let rhs = rat_int(js.q(i) as i64) * js.beta(i)
            + Rational::new(p.into(), (q as u128 * js.qprod(i) as u128).into());
        rec_ok &= &rhs == js.beta(i + 1);
        rec_w.push(json!({"i": i, "beta_next": rs(js.beta(i + 1)), "recurrence": rs(&rhs)}));
    }
    out.push(CheckRecord::new("b-inequality.recurrence", pairs.clone(), json!(rec_w), rec_ok));

    let mut int_ok = true;
    let mut int_w = Vec::new();
    for i in 1..=n {
        for j in 0..=i {
            let v = rat_int(js.qprod(i) as i64) * js.beta(j);
            int_ok &= v.is_integer();
            int_w.push(json!({"i": i, "j": j, "Q_i*beta_j": rs(&v)}));
        }
    }
    out.push(CheckRecord::new("b-inequality.integrality", pairs.clone(), json!(int_w), int_ok));

    let mut ch_ok = true;
    let mut ch_w = Vec::new();
    for i in 1..n {
        let b = js.beta(i);
        let b1 = js.beta(i + 1);
        let qb = rat_int(js.q(i) as i64) * b;
        let qb1 = rat_int(js.q(i + 1) as i64) * b1;
        let ok = qb1 >= *b1 && b1 > &qb && qb >= *b;
        ch_ok &= ok;
        ch_w.push(json!({"i": i, "chain": [rs(&qb1), rs(b1), rs(&qb), rs(b)], "ok": ok}));
    }
    out.push(CheckRecord::new("b-inequality.chain", pairs.clone(), json!(ch_w), ch_ok));

    let mut ex_ok = true;
    let mut ex_w = Vec::new();
    for i in 1..=n {
        let e = js.exps(i);
        let lhs = rat_int(js.q(i) as i64) * js.beta(i);
        let rhs = js.monomial_value(e);
        let bounded = e.iter().enumerate().skip(1).all(|(j, &nj)| nj < js.q(j));
        ex_ok &= lhs == rhs && bounded;
        ex_w.push(json!({"i": i, "n": e, "q_i*beta_i": rs(&lhs), "sum": rs(&rhs), "bounded": bounded}));
    }
    out.push(CheckRecord::new("b-inequality.exponents", pairs, json!(ex_w), ex_ok));
    out
}

/// Common denominator of `β_0..β_N`, i.e. `Q_N`; exposed for semigroup code.
pub fn common_denominator(betas: &[Rational]) -> BigInt {
    betas
        .iter()
        .fold(BigInt::one(), |acc, b| acc.lcm(b.denom()))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, rat, GroundField};

    fn q(s: &str) -> BivarPoly {
        parse_poly(GroundField::Rationals, Vars::UV, s).unwrap()
    }

    #[test]
    fn spec_a_polynomials() {
        let js = build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &[(3, 2), (5, 3)])).unwrap();
        assert_eq!(js.t(2), &q("v^2 - u^3"));
        assert_eq!(js.t(3), &q("(v^2 - u^3)^3 - u^10*v"));
        assert_eq!(js.betas(), &[rat(1, 1), rat(3, 2), rat(23, 6)]);
        assert_eq!(js.exps(1), &[3]);
        assert_eq!(js.exps(2), &[10, 1]);
        assert!(js.is_standard());
    }

    #[test]
    fn spec_b_polynomials() {
        let js = build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &[(2, 1), (3, 1)])).unwrap();
        assert_eq!(js.t(2), &q("v - u^2"));
        assert_eq!(js.t(3), &q("v - u^2 - u^5"));
        assert_eq!(js.betas(), &[rat(1, 1), rat(2, 1), rat(5, 1)]);
    }

    #[test]
    fn exponent_solve_rejects_impossible() {
        // β_2 with the wrong denominator cannot be matched
        let beta = [rat(1, 1), rat(3, 2), rat(1, 7)];
        assert!(exponent_solve(2, &beta, &[0, 2, 3]).is_err());
    }

    #[test]
    fn non_monic_unit_is_rejected_unless_relaxed() {
        let mut s = ValuationSpec::simple(GroundField::Rationals, &[(1, 1)]);
        s.units[0] = q("1 + v");
        assert!(build_jumping_sequence(&s).is_err());
        assert!(!build_jumping_sequence_relaxed(&s).unwrap().is_standard());
    }
}

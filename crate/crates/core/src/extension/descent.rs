use num_integer::Integer;
use serde_json::json;

use crate::algebra::{bezout, reduce, BivarPoly, FieldElem, Vars};
use crate::blowup::RatFunc;
use crate::error::{Error, Result};
use crate::report::CheckRecord;

/// One chunk performed simultaneously in `R` and `S` starting from
/// `u = x^t δ, v = y`, where `ν*(y)/ν*(x) = p'/q'`.
#[derive(Debug, Clone)]
pub struct Descent {
    pub t: u64,
    pub p_up: u64,
    pub q_up: u64,
    pub c_up: FieldElem,
    pub g: u64,
    pub t_tilde: u64,
    pub p: u64,
    pub q: u64,
    pub ab: (u64, u64),
    pub ab_up: (u64, u64),
    /// Residue of `v^q / u^p`, computed from the pulled-back function.
    pub c: FieldElem,
    /// `c'^{t̃} ρ^{-p}` with `ρ = δ(0)`.
    pub c_expected: FieldElem,
    /// Exponents of `X` and `Y'` in `U∘` after removing the unit.
    pub u_monomial: Option<[i64; 2]>,
    pub y_exponent: i64,
    pub y_exponent_expected: i64,
    /// `t̃ = 𝐩^n t'` with `𝐩` the characteristic.
    pub n: u32,
    pub t_prime: u64,
    /// Order in `Y'` of `V∘` restricted to `X = 0`.
    pub second_axis_order: Option<i64>,
    /// `U∘ / X^g`.
    pub new_delta: RatFunc,
    /// `V∘` in the new `S`-chart.
    pub new_v: RatFunc,
}

impl Descent {
    /// `t | p'`: the descent keeps the stable form with the same `t`.
    pub fn stable(&self) -> bool {
        self.g == self.t
    }

    pub fn checks(&self) -> Vec<CheckRecord> {
        let inputs = json!({"t": self.t, "p_up": self.p_up, "q_up": self.q_up, "c_up": self.c_up.to_canonical()});
        let (a, b) = self.ab;
        let identity = self.q_up as i128 * self.t as i128 * a as i128 - self.p_up as i128 * b as i128;
        let expected_order = self.t_tilde / self.t_prime;
        vec![
            CheckRecord::new(
                "descent.arithmetic",
                inputs.clone(),
                json!({"g": self.g, "t_tilde": self.t_tilde, "p": self.p, "q": self.q,
                       "ab": [a, b], "ab_up": [self.ab_up.0, self.ab_up.1], "q'ta-p'b": identity.to_string()}),
                identity == self.g as i128 && self.t == self.g * self.t_tilde && self.p_up == self.g * self.p,
            ),
            CheckRecord::new(
                "descent.u-monomial",
                inputs.clone(),
                json!({"monomial": self.u_monomial, "y_exponent": self.y_exponent,
                       "expected_y_exponent": self.y_exponent_expected, "delta": self.new_delta.to_string()}),
                self.u_monomial == Some([self.g as i64, 0])
                    && self.new_delta.is_unit()
                    && self.y_exponent == self.y_exponent_expected,
            ),
            CheckRecord::new(
                "descent.residue",
                inputs.clone(),
                json!({"c": self.c.to_canonical(), "expected": self.c_expected.to_canonical()}),
                self.c == self.c_expected,
            ),
            CheckRecord::new(
                "descent.second-axis-order",
                inputs,
                json!({"order": self.second_axis_order, "n": self.n, "t_prime": self.t_prime, "expected": expected_order}),
                self.second_axis_order == Some(expected_order as i64),
            ),
        ]
    }
}

/// Split `m = 𝐩^n m'` with `𝐩 ∤ m'`; characteristic zero gives `n = 0`.
pub fn p_adic_split(m: u64, characteristic: u64) -> (u32, u64) {
    if characteristic == 0 {
        return (0, m);
    }
    let (mut n, mut r) = (0, m);
    while r % characteristic == 0 {
        r /= characteristic;
        n += 1;
    }
    (n, r)
}

/// Signed multiplicity of the irreducible `h` in `f`.
fn multiplicity(f: &RatFunc, h: &BivarPoly) -> i64 {
    let mut total = 0;
    for (g, e) in f.factors() {
        let mut g = g.clone();
        while let Ok(r) = g.exact_divide(h) {
            g = r;
            total += e;
        }
    }
    total
}

/// Perform the `(p', q')` chunk in `S` and the induced `(p, q)` chunk in `R`.
/// `delta` is a unit in the ring with parameters `x, y`; the new chart uses
/// `X, Y'` with `x = X^{q'}(Y'+c')^{b'}`, `y = X^{p'}(Y'+c')^{a'}`.
pub fn chunk_descend(t: u64, delta: &RatFunc, p_up: u64, q_up: u64, c_up: &FieldElem) -> Result<Descent> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    if !delta.is_unit() {
        return Err(Error::InvalidArgument(format!("delta = {delta} is not a unit")));
    }
    if c_up.is_zero() {
        return Err(Error::InvalidArgument("residue c' must be nonzero".into()));
    }
    let ab_up = bezout(p_up, q_up)?;
    let g = t.gcd(&p_up);
    let (p, q) = reduce(p_up, t * q_up);
    let t_tilde = t / g;
    if p != p_up / g || q != q_up * t_tilde {
        return Err(Error::Internal(format!("reduce({p_up}, {t}*{q_up}) = {p}/{q} breaks p = p'/g")));
    }
    let (a, b) = bezout(p, q)?;
    let field = delta.field();
    let base = delta.vars();
    let cv = Vars::SChart;

    let xx = BivarPoly::var(field, cv, 0);
    let yc = BivarPoly::var(field, cv, 1).add(&BivarPoly::constant(field, cv, c_up.clone()));
    let fs = [xx.pow(q_up).mul(&yc.pow(ab_up.1)), xx.pow(p_up).mul(&yc.pow(ab_up.0))];

    let x = RatFunc::var(field, base, 0);
    let y = RatFunc::var(field, base, 1);
    let u = x.pow(t as i64).mul(delta);
    let big_u = u.pow(a as i64).mul(&y.pow(-(b as i64))).pullback(&fs)?;
    let ratio = y.pow(q as i64).mul(&u.pow(-(p as i64))).pullback(&fs)?;

    let rho = delta
        .value_at_origin()
        .ok_or_else(|| Error::Internal("unit has no value at the origin".into()))?;
    let c = ratio
        .value_at_origin()
        .ok_or_else(|| Error::Internal(format!("v^q/u^p = {ratio} is not a unit in the new chart")))?;
    let c_expected = c_up
        .pow(t_tilde as i64)
        .and_then(|x| rho.pow(-(p as i64)).map(|r| x.mul(&r)))
        .ok_or_else(|| Error::Internal("zero residue".into()))?;
    let new_v = ratio.sub_const(&c)?;

    let u_monomial = big_u.monomial_times_unit();
    let new_delta = big_u.div(&RatFunc::var(field, cv, 0).pow(g as i64));
    // (Y'+c') exponent of Δ: the only factor of U∘ apart from δ∘F_S and X
    let rest = new_delta.div(&delta.pullback(&fs)?.pow(a as i64));
    let y_exponent = multiplicity(&rest, &yc);
    let num = ab_up.1 as i64 * g as i64 - b as i64;
    if num % q_up as i64 != 0 {
        return Err(Error::Internal(format!("(b'g - b) = {num} not divisible by q' = {q_up}")));
    }
    let (n, t_prime) = p_adic_split(t_tilde, field.characteristic());
    Ok(Descent {
        t,
        p_up,
        q_up,
        c_up: c_up.clone(),
        g,
        t_tilde,
        p,
        q,
        ab: (a, b),
        ab_up,
        c,
        c_expected,
        u_monomial,
        y_exponent,
        y_exponent_expected: num / q_up as i64,
        n,
        t_prime,
        second_axis_order: new_v.order_on_second_axis(),
        new_delta,
        new_v,
    })
}

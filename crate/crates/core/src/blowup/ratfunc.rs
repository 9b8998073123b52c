use std::fmt;

use crate::algebra::{BivarPoly, FieldElem, GroundField, Rational, Vars};
use crate::error::{Error, Result};

use super::oracle::ValueOracle;

/// A rational function kept in factored form
/// `scalar · a^{m_0} b^{m_1} · ∏ g_k^{e_k}` over a polynomial ring in `a, b`.
/// Each `g_k` is not divisible by either variable and has leading
/// coefficient one, so factors merge and cancel syntactically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    field: GroundField,
    vars: Vars,
    scalar: FieldElem,
    mono: [i64; 2],
    factors: Vec<(BivarPoly, i64)>,
}

impl RatFunc {
    pub fn one(field: GroundField, vars: Vars) -> Self {
        RatFunc {
            field,
            vars,
            scalar: field.one(),
            mono: [0, 0],
            factors: Vec::new(),
        }
    }

    pub fn var(field: GroundField, vars: Vars, i: usize) -> Self {
        let mut r = Self::one(field, vars);
        r.mono[i] = 1;
        r
    }

    pub fn constant(field: GroundField, vars: Vars, c: FieldElem) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Internal("zero rational function".into()));
        }
        let mut r = Self::one(field, vars);
        r.scalar = c;
        Ok(r)
    }

    pub fn from_poly(f: &BivarPoly) -> Result<Self> {
        let mut r = Self::one(f.field(), f.vars());
        r.push_poly(f, 1)?;
        Ok(r)
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn scalar(&self) -> &FieldElem {
        &self.scalar
    }

    /// Exponents of the two variables.
    pub fn monomial(&self) -> [i64; 2] {
        self.mono
    }

    pub fn factors(&self) -> &[(BivarPoly, i64)] {
        &self.factors
    }

    fn push_poly(&mut self, f: &BivarPoly, e: i64) -> Result<()> {
        if f.is_zero() {
            return Err(Error::Internal("zero factor in a rational function".into()));
        }
        if e == 0 {
            return Ok(());
        }
        let a = f.order_u().unwrap_or(0);
        let b = f.order_v().unwrap_or(0);
        let g = f.unshift(a, b).expect("orders divide");
        self.mono[0] += a as i64 * e;
        self.mono[1] += b as i64 * e;
        let (_, lead) = g.terms().last().expect("nonzero");
        let lead = lead.clone();
        self.scalar = self.scalar.mul(&lead.pow(e).expect("nonzero lead"));
        if g.is_constant() {
            return Ok(());
        }
        let g = g.scale(&lead.inv().expect("nonzero lead"));
        if let Some(pos) = self.factors.iter().position(|(h, _)| *h == g) {
            self.factors[pos].1 += e;
            if self.factors[pos].1 == 0 {
                self.factors.remove(pos);
            }
        } else {
            self.factors.push((g, e));
        }
        Ok(())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!((self.field, self.vars), (o.field, o.vars), "rational function ring mismatch");
        let mut r = self.clone();
        r.scalar = r.scalar.mul(&o.scalar);
        r.mono[0] += o.mono[0];
        r.mono[1] += o.mono[1];
        for (g, e) in &o.factors {
            r.push_poly(g, *e).expect("nonzero factor");
        }
        r
    }

    pub fn pow(&self, e: i64) -> Self {
        RatFunc {
            field: self.field,
            vars: self.vars,
            scalar: self.scalar.pow(e).expect("nonzero scalar"),
            mono: [self.mono[0] * e, self.mono[1] * e],
            factors: if e == 0 {
                Vec::new()
            } else {
                self.factors.iter().map(|(g, k)| (g.clone(), k * e)).collect()
            },
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// `(numerator, denominator)` as expanded polynomials.
    pub fn numer_denom(&self) -> (BivarPoly, BivarPoly) {
        let mut num = BivarPoly::constant(self.field, self.vars, self.scalar.clone());
        let mut den = BivarPoly::one(self.field, self.vars);
        let [a, b] = self.mono;
        num = num.shift(a.max(0) as u32, b.max(0) as u32);
        den = den.shift((-a).max(0) as u32, (-b).max(0) as u32);
        for (g, e) in &self.factors {
            if *e > 0 {
                num = num.mul(&g.pow(*e as u64));
            } else {
                den = den.mul(&g.pow((-e) as u64));
            }
        }
        (num, den)
    }

    /// `self - c`, refactored.
    pub fn sub_const(&self, c: &FieldElem) -> Result<Self> {
        let (num, den) = self.numer_denom();
        let mut r = Self::one(self.field, self.vars);
        r.push_poly(&num.sub(&den.scale(c)), 1).map_err(|_| {
            Error::Internal(format!("{self} is identically equal to the constant {c}"))
        })?;
        // reuse the factored denominator rather than its expansion
        let mut d = Self::one(self.field, self.vars);
        d.mono = [-(self.mono[0].min(0)), -(self.mono[1].min(0))];
        for (g, e) in &self.factors {
            if *e < 0 {
                d.push_poly(g, -e)?;
            }
        }
        Ok(r.div(&d))
    }

    /// Substitute `a = s[0], b = s[1]` factor by factor.
    pub fn pullback(&self, s: &[BivarPoly; 2]) -> Result<Self> {
        let (field, vars) = (s[0].field(), s[0].vars());
        let mut r = Self::constant(field, vars, self.scalar.clone())?;
        for (i, m) in self.mono.iter().enumerate() {
            r.push_poly(&s[i], *m)?;
        }
        for (g, e) in &self.factors {
            r.push_poly(&g.compose(s)?, *e)?;
        }
        Ok(r)
    }

    pub fn value(&self, oracle: &dyn ValueOracle) -> Result<Rational> {
        let mut v = Rational::from_integer(0.into());
        for (i, m) in self.mono.iter().enumerate() {
            if *m != 0 {
                let x = BivarPoly::var(self.field, self.vars, i);
                v += Rational::from_integer((*m).into()) * oracle.value(&x)?;
            }
        }
        for (g, e) in &self.factors {
            v += Rational::from_integer((*e).into()) * oracle.value(g)?;
        }
        Ok(v)
    }

    /// Residue of a function of value zero.
    pub fn residue(&self, oracle: &dyn ValueOracle) -> Result<FieldElem> {
        let (num, den) = self.numer_denom();
        oracle.residue(&num, &den)
    }

    // ---- local analysis at the origin of the ring the function lives in ----

    fn core_is_unit(g: &BivarPoly) -> bool {
        !g.constant_term().is_zero()
    }

    /// The function lies in the local ring at the origin.
    pub fn in_local_ring(&self) -> bool {
        self.mono[0] >= 0
            && self.mono[1] >= 0
            && self.factors.iter().all(|(g, e)| *e > 0 || Self::core_is_unit(g))
    }

    pub fn is_unit(&self) -> bool {
        self.mono == [0, 0] && self.factors.iter().all(|(g, _)| Self::core_is_unit(g))
    }

    pub fn in_max_ideal(&self) -> bool {
        self.in_local_ring()
            && (self.mono[0] > 0 || self.mono[1] > 0 || self.factors.iter().any(|(g, _)| !Self::core_is_unit(g)))
    }

    /// `Some([m0, m1])` when the function is `a^{m0} b^{m1}` times a unit.
    pub fn monomial_times_unit(&self) -> Option<[i64; 2]> {
        self.factors
            .iter()
            .all(|(g, _)| Self::core_is_unit(g))
            .then_some(self.mono)
    }

    /// Value at the origin of a unit.
    pub fn value_at_origin(&self) -> Option<FieldElem> {
        if !self.is_unit() {
            return None;
        }
        let mut r = self.scalar.clone();
        for (g, e) in &self.factors {
            r = r.mul(&g.constant_term().pow(*e)?);
        }
        Some(r)
    }

    /// Order in `b` of the restriction to `a = 0`; `None` if the function
    /// vanishes identically there or is undefined.
    pub fn order_on_second_axis(&self) -> Option<i64> {
        if self.mono[0] != 0 {
            return None;
        }
        let mut ord = self.mono[1];
        for (g, e) in &self.factors {
            let r = g.at_u_zero();
            ord += e * r.order_v()? as i64;
        }
        Some(ord)
    }

    /// Whether the function is a regular parameter completing the first variable.
    pub fn is_transversal_parameter(&self) -> bool {
        self.in_local_ring() && self.order_on_second_axis() == Some(1)
    }

    /// The factor-wise unit part after removing the monomial.
    pub fn unit_part(&self) -> RatFunc {
        let mut r = self.clone();
        r.mono = [0, 0];
        r
    }

    /// Local data at the origin of `self(s0, s1)`, found by truncated
    /// compositions instead of expanding each factor. Factors whose
    /// compositions differ only by a monomial are not merged, so the
    /// predicates can only err towards `false`.
    pub fn pullback_germ(&self, s: &[BivarPoly; 2]) -> Result<Germ> {
        let mut mono = [0i64; 2];
        let mut factors = Vec::new();
        let coords = self.mono.iter().enumerate().filter(|(_, m)| **m != 0).map(|(i, m)| {
            poly_germ(&s[i]).map(|g| (g, m)).ok_or_else(|| Error::Internal("zero coordinate".into()))
        });
        let pulled = self.factors.iter().map(|(g, e)| Ok((factor_germ(g, s)?, e)));
        for item in coords.chain(pulled) {
            let ([a, b, unit, axis], e) = item?;
            mono[0] += a as i64 * e;
            mono[1] += b as i64 * e;
            factors.push(GermFactor { exponent: *e, unit: unit == 1, axis_order: axis });
        }
        Ok(Germ { mono, factors })
    }
}

/// `[ord_a, ord_b, unit, axis]` of `g(s0, s1)`: its orders in each variable,
/// whether the cofactor after removing `a^{ord_a} b^{ord_b}` is a unit, and
/// the order in `b` of that cofactor at `a = 0`.
fn poly_germ(h: &BivarPoly) -> Option<[u32; 4]> {
    let (a, b) = (h.order_u()?, h.order_v()?);
    let low = h.terms().filter(|(k, _)| k.0 == a).map(|(k, _)| k.1).min()?;
    Some([a, b, (low == b) as u32, low - b])
}

fn factor_germ(g: &BivarPoly, s: &[BivarPoly; 2]) -> Result<[u32; 4]> {
    let deg = |i: usize| -> u32 {
        let d = |p: &BivarPoly| if i == 0 { p.deg_u() } else { p.deg_v() }.unwrap_or(0);
        g.deg_u().unwrap_or(0) * d(&s[0]) + g.deg_v().unwrap_or(0) * d(&s[1])
    };
    // smallest exponent in variable `i`: start just above the order forced
    // by the terms of `g`, then widen the truncation geometrically
    let order = |i: usize| -> Result<u32> {
        let ord = |p: &BivarPoly| if i == 0 { p.order_u() } else { p.order_v() };
        let (o0, o1) = match (ord(&s[0]), ord(&s[1])) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Internal("zero coordinate".into())),
        };
        let low = g.terms().map(|(k, _)| k.0 * o0 + k.1 * o1).min().unwrap_or(0);
        let mut gap = 1u32;
        loop {
            let m = low.saturating_add(gap);
            let mut bound = [None, None];
            bound[i] = Some(m);
            let h = g.compose_truncated(s, bound)?;
            if !h.is_zero() {
                return Ok(if i == 0 { h.order_u() } else { h.order_v() }.expect("nonzero"));
            }
            if m > deg(i) {
                return Err(Error::Internal(format!("{g} pulls back to zero")));
            }
            gap = gap.saturating_mul(2);
        }
    };
    let b = order(1)?;
    // the slice at b^{ord_b} bounds ord_a from above, so one composition
    // below that bound settles it
    let a = {
        let upper = g.compose_truncated(s, [None, Some(b + 1)])?.order_u().expect("nonzero at b^{ord_b}");
        let below = g.compose_truncated(s, [Some(upper), None])?;
        below.order_u().unwrap_or(upper)
    };
    let mut m = b + 1;
    loop {
        let h = g.compose_truncated(s, [Some(a + 1), Some(m)])?;
        if let Some(low) = h.terms().filter(|(k, _)| k.0 == a).map(|(k, _)| k.1).min() {
            return Ok([a, b, (low == b) as u32, low - b]);
        }
        if m > deg(1) {
            return Err(Error::Internal(format!("{g} has no a^{a} part after pullback")));
        }
        m = m.saturating_mul(2);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GermFactor {
    exponent: i64,
    unit: bool,
    axis_order: u32,
}

/// What the local predicates of a [`RatFunc`] need, without its factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Germ {
    mono: [i64; 2],
    factors: Vec<GermFactor>,
}

impl Germ {
    pub fn monomial(&self) -> [i64; 2] {
        self.mono
    }

    pub fn in_local_ring(&self) -> bool {
        self.mono[0] >= 0 && self.mono[1] >= 0 && self.factors.iter().all(|f| f.exponent > 0 || f.unit)
    }

    pub fn is_unit(&self) -> bool {
        self.mono == [0, 0] && self.factors.iter().all(|f| f.unit)
    }

    pub fn in_max_ideal(&self) -> bool {
        self.in_local_ring() && (self.mono[0] > 0 || self.mono[1] > 0 || self.factors.iter().any(|f| !f.unit))
    }

    pub fn monomial_times_unit(&self) -> Option<[i64; 2]> {
        self.factors.iter().all(|f| f.unit).then_some(self.mono)
    }

    pub fn order_on_second_axis(&self) -> Option<i64> {
        if self.mono[0] != 0 {
            return None;
        }
        Some(self.mono[1] + self.factors.iter().map(|f| f.exponent * f.axis_order as i64).sum::<i64>())
    }

    pub fn is_transversal_parameter(&self) -> bool {
        self.in_local_ring() && self.order_on_second_axis() == Some(1)
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units = self.factors.iter().filter(|g| g.unit).count();
        write!(
            f,
            "monomial {:?}, {} unit and {} non-unit factors",
            self.mono,
            units,
            self.factors.len() - units
        )
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.vars.names();
        let mut parts = Vec::new();
        if !self.scalar.is_one() {
            parts.push(format!("({})", self.scalar));
        }
        for (n, m) in [(a, self.mono[0]), (b, self.mono[1])] {
            match m {
                0 => {}
                1 => parts.push(n.to_string()),
                _ => parts.push(format!("{n}^{m}")),
            }
        }
        for (g, e) in &self.factors {
            if *e == 1 {
                parts.push(format!("({g})"));
            } else {
                parts.push(format!("({g})^{e}"));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn q(s: &str) -> BivarPoly {
        parse_poly(GroundField::Rationals, Vars::UV, s).unwrap()
    }

    #[test]
    fn factors_merge_and_cancel() {
        let a = RatFunc::from_poly(&q("2*u*v^2 - 2*u^4")).unwrap();
        let b = RatFunc::from_poly(&q("v^2 - u^3")).unwrap();
        let r = a.div(&b);
        assert!(r.factors().is_empty());
        assert_eq!(r.monomial(), [1, 0]);
        assert_eq!(r.scalar().to_canonical(), "2");
    }

    #[test]
    fn subtract_constant() {
        let v = RatFunc::var(GroundField::Rationals, Vars::UV, 1);
        let u = RatFunc::var(GroundField::Rationals, Vars::UV, 0);
        let r = v.pow(2).div(&u.pow(3)).sub_const(&GroundField::Rationals.one()).unwrap();
        let (n, d) = r.numer_denom();
        assert_eq!(n, q("v^2 - u^3"));
        assert_eq!(d, q("u^3"));
    }

    #[test]
    fn local_predicates() {
        let f = RatFunc::from_poly(&q("v + u^2*v + u")).unwrap().div(&RatFunc::from_poly(&q("1 + u")).unwrap());
        assert!(f.in_max_ideal());
        assert!(f.is_transversal_parameter());
        assert!(!f.is_unit());
        let g = RatFunc::from_poly(&q("3 + u")).unwrap();
        assert_eq!(g.value_at_origin().unwrap().to_canonical(), "3");
    }
}

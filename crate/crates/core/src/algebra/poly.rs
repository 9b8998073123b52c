use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{FieldElem, GroundField};
use crate::error::{Error, Result};

/// Default ceiling on the number of terms any composed polynomial may carry.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Variable naming of a bivariate ring. The first variable is always the
/// one playing the role of `u` (resp. `x`, or the exceptional chart
/// coordinate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vars {
    UV,
    XY,
    /// Chart coordinates over the R side.
    RChart,
    /// Chart coordinates over the S side.
    SChart,
}

impl Vars {
    pub fn names(self) -> [&'static str; 2] {
        match self {
            Vars::UV => ["u", "v"],
            Vars::XY => ["x", "y"],
            Vars::RChart => ["U", "V"],
            Vars::SChart => ["X", "Y"],
        }
    }

    pub fn from_names(a: &str, b: &str) -> Result<Self> {
        [Vars::UV, Vars::XY, Vars::RChart, Vars::SChart]
            .into_iter()
            .find(|v| v.names() == [a, b])
            .ok_or_else(|| Error::Parse(format!("unknown variable pair [{a:?}, {b:?}]")))
    }
}

/// A polynomial in two variables over a ground field; exponent pairs are
/// `(deg in first var, deg in second var)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    field: GroundField,
    vars: Vars,
    terms: BTreeMap<(u32, u32), FieldElem>,
}

impl BivarPoly {
    pub fn zero(field: GroundField, vars: Vars) -> Self {
        BivarPoly {
            field,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: GroundField, vars: Vars, c: FieldElem) -> Self {
        Self::monomial(field, vars, c, 0, 0)
    }

    pub fn one(field: GroundField, vars: Vars) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn monomial(field: GroundField, vars: Vars, c: FieldElem, a: u32, b: u32) -> Self {
        let mut p = Self::zero(field, vars);
        p.add_term(a, b, c);
        p
    }

    /// The variable with index 0 or 1.
    pub fn var(field: GroundField, vars: Vars, i: usize) -> Self {
        let (a, b) = if i == 0 { (1, 0) } else { (0, 1) };
        Self::monomial(field, vars, field.one(), a, b)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), FieldElem)>>(
        field: GroundField,
        vars: Vars,
        it: I,
    ) -> Self {
        let mut p = Self::zero(field, vars);
        for ((a, b), c) in it {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    /// Same coefficients, renamed variables.
    pub fn with_vars(mut self, vars: Vars) -> Self {
        self.vars = vars;
        self
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.field.contains(&c));
        match self.terms.get_mut(&(a, b)) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&(a, b));
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert((a, b), c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &FieldElem)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> FieldElem {
        self.terms
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(0, 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    /// Degree in the second variable; `None` for the zero polynomial.
    pub fn deg_v(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn deg_u(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0 + k.1).max()
    }

    /// Largest power of the first variable dividing the polynomial.
    pub fn order_u(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn order_v(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).min()
    }

    /// Coefficient of `v^b` as a polynomial in the first variable.
    pub fn coeff_in_v(&self, b: u32) -> BivarPoly {
        Self::from_terms(
            self.field,
            self.vars,
            self.terms
                .iter()
                .filter(|(k, _)| k.1 == b)
                .map(|(k, c)| ((k.0, 0), c.clone())),
        )
    }

    /// Restriction to the line where the first variable vanishes.
    pub fn at_u_zero(&self) -> BivarPoly {
        Self::from_terms(
            self.field,
            self.vars,
            self.terms
                .iter()
                .filter(|(k, _)| k.0 == 0)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    fn check_compat(&self, o: &Self) {
        assert!(
            self.field == o.field && self.vars == o.vars,
            "polynomial ring mismatch: {}[{:?}] vs {}[{:?}]",
            self.field,
            self.vars,
            o.field,
            o.vars
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_compat(o);
        let mut r = self.clone();
        for (&(a, b), c) in &o.terms {
            r.add_term(a, b, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(
            self.field,
            self.vars,
            self.terms.iter().map(|(k, c)| (*k, c.neg())),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &FieldElem) -> Self {
        Self::from_terms(
            self.field,
            self.vars,
            self.terms.iter().map(|(k, c)| (*k, c.mul(s))),
        )
    }

    /// Multiply by the monomial `u^a v^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        Self::from_terms(
            self.field,
            self.vars,
            self.terms.iter().map(|(k, c)| ((k.0 + a, k.1 + b), c.clone())),
        )
    }

    /// Divide by `u^a v^b`, failing if some term is not divisible.
    pub fn unshift(&self, a: u32, b: u32) -> Result<Self> {
        let mut r = Self::zero(self.field, self.vars);
        for (k, c) in &self.terms {
            if k.0 < a || k.1 < b {
                return Err(Error::Divisibility {
                    remainder: self.to_string(),
                });
            }
            r.terms.insert((k.0 - a, k.1 - b), c.clone());
        }
        Ok(r)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_compat(o);
        let mut r = Self::zero(self.field, self.vars);
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &o.terms {
                r.add_term(a1 + a2, b1 + b2, c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut r = Self::one(self.field, self.vars);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// `self(s0, s1)`; the result lives in the ring of the substituted polynomials.
    pub fn compose(&self, s: &[BivarPoly; 2]) -> Result<BivarPoly> {
        self.compose_limited(s, DEFAULT_MAX_TERMS)
    }

    pub fn compose_limited(&self, s: &[BivarPoly; 2], max_terms: usize) -> Result<BivarPoly> {
        s[0].check_compat(&s[1]);
        let (field, vars) = (s[0].field, s[0].vars);
        if self.field != field {
            return Err(Error::InvalidArgument("composition across fields".into()));
        }
        let du = self.deg_u().unwrap_or(0) as usize;
        let dv = self.deg_v().unwrap_or(0) as usize;
        let mut pu = vec![Self::one(field, vars)];
        for i in 0..du {
            let next = pu[i].mul(&s[0]);
            guard(&next, max_terms)?;
            pu.push(next);
        }
        let mut pv = vec![Self::one(field, vars)];
        for i in 0..dv {
            let next = pv[i].mul(&s[1]);
            guard(&next, max_terms)?;
            pv.push(next);
        }
        let mut r = Self::zero(field, vars);
        // group by v-exponent to share the multiplication by pv[b]
        for b in 0..=dv {
            let col: Vec<_> = self.terms.iter().filter(|(k, _)| k.1 as usize == b).collect();
            if col.is_empty() {
                continue;
            }
            let mut inner = Self::zero(field, vars);
            for (k, c) in col {
                inner = inner.add(&pu[k.0 as usize].scale(c));
            }
            r = r.add(&inner.mul(&pv[b]));
            guard(&r, max_terms)?;
        }
        Ok(r)
    }

    /// Product keeping only terms with exponents below `bound`.
    pub fn mul_truncated(&self, o: &Self, bound: [Option<u32>; 2]) -> Self {
        self.check_compat(o);
        let keep = |a: u32, b: u32| bound[0].is_none_or(|m| a < m) && bound[1].is_none_or(|m| b < m);
        let mut r = Self::zero(self.field, self.vars);
        for (&(a1, b1), c1) in &self.terms {
            if !keep(a1, b1) {
                continue;
            }
            for (&(a2, b2), c2) in &o.terms {
                if keep(a1 + a2, b1 + b2) {
                    r.add_term(a1 + a2, b1 + b2, c1.mul(c2));
                }
            }
        }
        r
    }

    /// `self(s0, s1)` modulo `(a^{bound_0}, b^{bound_1})`, exact on the kept
    /// terms since exponents only add.
    pub fn compose_truncated(&self, s: &[BivarPoly; 2], bound: [Option<u32>; 2]) -> Result<BivarPoly> {
        s[0].check_compat(&s[1]);
        let (field, vars) = (s[0].field, s[0].vars);
        if self.field != field {
            return Err(Error::InvalidArgument("composition across fields".into()));
        }
        let one = Self::one(field, vars).mul_truncated(&Self::one(field, vars), bound);
        let powers = |g: &BivarPoly, n: u32| -> Result<Vec<BivarPoly>> {
            let mut p = vec![one.clone()];
            for i in 0..n as usize {
                let next = p[i].mul_truncated(g, bound);
                guard(&next, DEFAULT_MAX_TERMS)?;
                p.push(next);
            }
            Ok(p)
        };
        let pu = powers(&s[0], self.deg_u().unwrap_or(0))?;
        let pv = powers(&s[1], self.deg_v().unwrap_or(0))?;
        let mut r = Self::zero(field, vars);
        for (b, pvb) in pv.iter().enumerate() {
            let mut inner = Self::zero(field, vars);
            for (k, c) in self.terms.iter().filter(|(k, _)| k.1 as usize == b) {
                inner = inner.add(&pu[k.0 as usize].scale(c));
            }
            if !inner.is_zero() {
                r = r.add(&inner.mul_truncated(pvb, bound));
                guard(&r, DEFAULT_MAX_TERMS)?;
            }
        }
        Ok(r)
    }

    /// Division with remainder by `g`, viewed in `k[u][v]`; `g` must have a
    /// constant (nonzero) leading coefficient in `v`.
    pub fn divmod_in_v(&self, g: &BivarPoly) -> Result<(BivarPoly, BivarPoly)> {
        self.check_compat(g);
        let dg = g
            .deg_v()
            .ok_or_else(|| Error::InvalidArgument("division by zero polynomial".into()))?;
        let lc = g.coeff_in_v(dg);
        if !lc.is_constant() {
            return Err(Error::InvalidArgument(format!(
                "divisor {g} is not monic in the second variable"
            )));
        }
        let lc_inv = lc.constant_term().inv().expect("nonzero leading coefficient");
        let mut q = Self::zero(self.field, self.vars);
        let mut r = self.clone();
        while let Some(dr) = r.deg_v() {
            if dr < dg {
                break;
            }
            let head = r.coeff_in_v(dr).scale(&lc_inv).shift(0, dr - dg);
            q = q.add(&head);
            r = r.sub(&head.mul(g));
        }
        Ok((q, r))
    }

    /// Exact quotient `self / g`, or a divisibility error carrying the remainder.
    pub fn exact_divide(&self, g: &BivarPoly) -> Result<BivarPoly> {
        self.check_compat(g);
        let lead = |p: &BivarPoly| p.terms.keys().max_by_key(|k| (k.1, k.0)).copied();
        let lg = lead(g).ok_or_else(|| Error::InvalidArgument("division by zero polynomial".into()))?;
        let lcg_inv = g.terms[&lg].inv().expect("nonzero");
        let mut q = Self::zero(self.field, self.vars);
        let mut r = self.clone();
        let mut rem = Self::zero(self.field, self.vars);
        while let Some(lr) = lead(&r) {
            let c = r.terms[&lr].clone();
            if lr.0 >= lg.0 && lr.1 >= lg.1 {
                let t = Self::monomial(self.field, self.vars, c.mul(&lcg_inv), lr.0 - lg.0, lr.1 - lg.1);
                r = r.sub(&t.mul(g));
                q = q.add(&t);
            } else {
                r.terms.remove(&lr);
                rem.add_term(lr.0, lr.1, c);
            }
        }
        if rem.is_zero() {
            Ok(q)
        } else {
            Err(Error::Divisibility {
                remainder: rem.to_string(),
            })
        }
    }

    /// Largest `m` with `u^m | self`, and the cofactor.
    pub fn split_u_power(&self) -> (u32, BivarPoly) {
        let m = self.order_u().unwrap_or(0);
        (m, self.unshift(m, 0).expect("order divides"))
    }

    pub fn to_json(&self) -> PolyJson {
        let names = self.vars.names();
        PolyJson {
            vars: [names[0].to_string(), names[1].to_string()],
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermJson {
                    e: [k.0, k.1],
                    c: c.to_canonical(),
                })
                .collect(),
        }
    }

    pub fn from_json(field: GroundField, j: &PolyJson) -> Result<Self> {
        let vars = Vars::from_names(&j.vars[0], &j.vars[1])?;
        let mut p = Self::zero(field, vars);
        for t in &j.terms {
            p.add_term(t.e[0], t.e[1], field.parse(&t.c)?);
        }
        Ok(p)
    }
}

fn guard(p: &BivarPoly, max_terms: usize) -> Result<()> {
    if p.len() > max_terms {
        Err(Error::Resource(format!(
            "intermediate polynomial has {} terms (ceiling {max_terms})",
            p.len()
        )))
    } else {
        Ok(())
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let [x, y] = self.vars.names();
        // highest total degree first, then by second variable
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by_key(|(k, _)| std::cmp::Reverse((k.0 + k.1, k.1)));
        for (i, (&(a, b), c)) in ts.into_iter().enumerate() {
            let (neg, mag) = match c {
                FieldElem::Rat(r) if r < &num_traits::Zero::zero() => (true, FieldElem::Rat(-r)),
                _ => (false, c.clone()),
            };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts = Vec::new();
            if !mag.is_one() || (a == 0 && b == 0) {
                let s = mag.to_canonical();
                parts.push(if s.contains('/') { format!("({s})") } else { s });
            }
            for (n, e) in [(x, a), (y, b)] {
                match e {
                    0 => {}
                    1 => parts.push(n.to_string()),
                    _ => parts.push(format!("{n}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: [u32; 2],
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: [String; 2],
    pub terms: Vec<TermJson>,
}

/// Parse an expression such as `v^3 - 2*u^2*v + (1/2)*(u+v)^2`.
pub fn parse_poly(field: GroundField, vars: Vars, s: &str) -> Result<BivarPoly> {
    let mut p = ExprParser {
        src: s.as_bytes(),
        pos: 0,
        field,
        vars,
    };
    let r = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!("trailing input at offset {} in {s:?}", p.pos)));
    }
    Ok(r)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    field: GroundField,
    vars: Vars,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn sum(&mut self) -> Result<BivarPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.product()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<BivarPoly> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<BivarPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u64 = e.parse().map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<BivarPoly> {
        let names = self.vars.names();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut num = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    num = format!("{num}/{}", self.integer()?);
                }
                let c = self.field.parse(&num)?;
                Ok(BivarPoly::constant(self.field, self.vars, c))
            }
            Some(c) => {
                let name = (c as char).to_string();
                let idx = names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| self.err(&format!("unknown symbol {name:?}")))?;
                self.pos += 1;
                Ok(BivarPoly::var(self.field, self.vars, idx))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BivarPoly {
        parse_poly(GroundField::Rationals, Vars::UV, s).unwrap()
    }

    #[test]
    fn divmod_by_monic() {
        let f = q("v^5 + u*v^2 + 3");
        let g = q("v^2 - u^3");
        let (qq, r) = f.divmod_in_v(&g).unwrap();
        assert_eq!(qq.mul(&g).add(&r), f);
        assert!(r.deg_v().unwrap() < 2);
        assert!(f.divmod_in_v(&q("u*v - 1")).is_err());
    }

    #[test]
    fn exact_division_and_remainder() {
        let a = q("(v - u^2)*(u + v^3)");
        assert_eq!(a.exact_divide(&q("v - u^2")).unwrap(), q("u + v^3"));
        match q("v^2 + u").exact_divide(&q("v")) {
            Err(Error::Divisibility { remainder }) => assert_eq!(remainder, "u"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn composition_and_display() {
        let f = q("v^2 - u^3");
        let s = [q("u^2"), q("u^3*v")];
        assert_eq!(f.compose(&s).unwrap(), q("u^6*v^2 - u^6"));
        assert_eq!(q("v^2 - u^3 + 1/2").to_string(), "-u^3 + v^2 + (1/2)");
    }

    #[test]
    fn json_roundtrip() {
        let f = q("3/2*u*v - 7");
        let j = f.to_json();
        assert_eq!(serde_json::to_string(&j).unwrap(),
            r#"{"vars":["u","v"],"terms":[{"e":[0,0],"c":"-7"},{"e":[1,1],"c":"3/2"}]}"#);
        assert_eq!(BivarPoly::from_json(GroundField::Rationals, &j).unwrap(), f);
    }

    #[test]
    fn term_ceiling_fails_loudly() {
        let f = q("(u + v)^30");
        let s = [q("u + v + 1"), q("u - v + 1")];
        assert!(matches!(f.compose_limited(&s, 100), Err(Error::Resource(_))));
    }
}

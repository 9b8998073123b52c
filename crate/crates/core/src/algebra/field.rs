use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// The ground field k = R/m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroundField {
    Rationals,
    Prime { p: u64 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GroundField {
    pub fn prime(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::Unsupported(format!("prime {p} exceeds 32 bits")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(GroundField::Prime { p })
    }

    pub fn characteristic(self) -> u64 {
        match self {
            GroundField::Rationals => 0,
            GroundField::Prime { p } => p,
        }
    }

    pub fn zero(self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElem {
        match self {
            GroundField::Rationals => FieldElem::Rat(rat_int(n)),
            GroundField::Prime { p } => FieldElem::Mod {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> FieldElem {
        match self {
            GroundField::Rationals => FieldElem::Rat(Rational::from_integer(n.clone())),
            GroundField::Prime { p } => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldElem::Mod {
                    v: r.to_u64().expect("reduced residue fits"),
                    p,
                }
            }
        }
    }

    pub fn from_rational(self, r: &Rational) -> Result<FieldElem> {
        match self {
            GroundField::Rationals => Ok(FieldElem::Rat(r.clone())),
            GroundField::Prime { .. } => {
                let d = self.from_bigint(r.denom());
                let inv = d.inv().ok_or_else(|| {
                    Error::InvalidArgument(format!("denominator of {r} vanishes mod {}", self.characteristic()))
                })?;
                Ok(self.from_bigint(r.numer()).mul(&inv))
            }
        }
    }

    /// Parse a canonical element string: "num/den" over Q, "0".."p-1" over F_p.
    /// Over F_p any integer or fraction is accepted and reduced.
    pub fn parse(self, s: &str) -> Result<FieldElem> {
        self.from_rational(&parse_rational(s)?)
    }

    pub fn contains(self, a: &FieldElem) -> bool {
        match (self, a) {
            (GroundField::Rationals, FieldElem::Rat(_)) => true,
            (GroundField::Prime { p }, FieldElem::Mod { p: q, .. }) => p == *q,
            _ => false,
        }
    }
}

impl fmt::Display for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundField::Rationals => write!(f, "Q"),
            GroundField::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

/// An element of a ground field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rat(Rational),
    Mod { v: u64, p: u64 },
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl FieldElem {
    pub fn field(&self) -> GroundField {
        match self {
            FieldElem::Rat(_) => GroundField::Rationals,
            FieldElem::Mod { p, .. } => GroundField::Prime { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Mod { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Mod { v: a, p }, FieldElem::Mod { v: b, p: q }) if p == q => FieldElem::Mod {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("field mismatch: {self:?} + {o:?}"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Mod { v, p } => FieldElem::Mod {
                v: (p - v) % p,
                p: *p,
            },
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Mod { v: a, p }, FieldElem::Mod { v: b, p: q }) if p == q => FieldElem::Mod {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("field mismatch: {self:?} * {o:?}"),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Rat(a) => FieldElem::Rat(a.recip()),
            FieldElem::Mod { v, p } => FieldElem::Mod {
                v: mod_pow(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Some(match &base {
            FieldElem::Rat(a) => FieldElem::Rat(num_traits::pow::Pow::pow(a, e)),
            FieldElem::Mod { v, p } => FieldElem::Mod {
                v: mod_pow(*v, e, *p),
                p: *p,
            },
        })
    }

    /// Some `r` with `r^n == self`, if one exists in the ground field.
    pub fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        match self {
            FieldElem::Rat(a) => {
                if a.is_negative() && n.is_multiple_of(2) {
                    return None;
                }
                let root = |x: &BigInt| {
                    let r = x.nth_root(n);
                    (num_traits::pow::Pow::pow(&r, n) == *x).then_some(r)
                };
                let r = Rational::new(root(a.numer())?, root(a.denom())?);
                Some(FieldElem::Rat(r))
            }
            FieldElem::Mod { v, p } => (0..*p)
                .find(|r| mod_pow(*r, n as u64, *p) == *v)
                .map(|r| FieldElem::Mod { v: r, p: *p }),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.mul(&self.field().from_i64(n))
    }

    /// Canonical textual form used in JSON.
    pub fn to_canonical(&self) -> String {
        match self {
            FieldElem::Rat(r) if r.is_integer() => r.numer().to_string(),
            FieldElem::Rat(r) => format!("{}/{}", r.numer(), r.denom()),
            FieldElem::Mod { v, .. } => v.to_string(),
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, FieldElem::Rat(r) if r.is_negative())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:expr) => {
        impl $tr for &FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem {
                $call(self, o)
            }
        }
    };
}

binop!(Add, add, |a: &FieldElem, b: &FieldElem| FieldElem::add(a, b));
binop!(Sub, sub, |a: &FieldElem, b: &FieldElem| FieldElem::sub(a, b));
binop!(Mul, mul, |a: &FieldElem, b: &FieldElem| FieldElem::mul(a, b));
binop!(Div, div, |a: &FieldElem, b: &FieldElem| FieldElem::div(a, b)
    .expect("division by zero"));

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}

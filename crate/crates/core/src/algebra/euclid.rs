use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Quotients of the Euclidean algorithm on `(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EuclidData {
    #[serde(rename = "N")]
    pub n: usize,
    pub f: Vec<u64>,
    pub epsilon: u64,
}

impl EuclidData {
    pub fn f1(&self) -> u64 {
        self.f[0]
    }
}

pub fn euclid_data(p: u64, q: u64) -> Result<EuclidData> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidArgument(format!("euclid needs positive inputs, got ({p}, {q})")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidArgument(format!("({p}, {q}) not coprime")));
    }
    let (mut a, mut b) = (p, q);
    let mut f = Vec::new();
    while b != 0 {
        f.push(a / b);
        (a, b) = (b, a % b);
    }
    let epsilon = f.iter().sum();
    Ok(EuclidData { n: f.len(), f, epsilon })
}

/// The unique `(a, b)` with `a*q - b*p = 1`, `0 < a <= p`, `0 <= b < q`.
pub fn bezout(p: u64, q: u64) -> Result<(u64, u64)> {
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(Error::InvalidArgument(format!("({p}, {q}) not a coprime positive pair")));
    }
    let (p, q) = (p as i128, q as i128);
    let a = if p == 1 {
        1
    } else {
        let e = q.extended_gcd(&p);
        let a = e.x.mod_floor(&p);
        if a == 0 { p } else { a }
    };
    let b = (a * q - 1) / p;
    debug_assert_eq!(a * q - b * p, 1);
    Ok((a as u64, b as u64))
}

/// `num / den` in lowest terms.
pub fn reduce(num: u64, den: u64) -> (u64, u64) {
    let g = num.gcd(&den);
    (num / g, den / g)
}

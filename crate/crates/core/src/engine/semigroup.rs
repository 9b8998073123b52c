use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};

/// Sizes of the membership table beyond which we refuse to work.
const MAX_TABLE: usize = 4_000_000;

/// The additive semigroup generated by finitely many positive rationals,
/// restricted to `[0, bound]`.
#[derive(Debug, Clone)]
pub struct Semigroup {
    gens: Vec<Rational>,
    den: BigInt,
    /// `reach[n]` holds a generator index used to reach `n / den`, or
    /// `usize::MAX` for zero.
    reach: Vec<Option<usize>>,
}

impl Semigroup {
    pub fn new(gens: &[Rational], bound: &Rational) -> Result<Self> {
        if gens.iter().any(|g| g <= &Rational::zero()) {
            return Err(Error::InvalidArgument("semigroup generators must be positive".into()));
        }
        let den = gens.iter().fold(BigInt::one(), |a, g| a.lcm(g.denom()));
        let scaled = |r: &Rational| -> Option<usize> {
            (r * Rational::from_integer(den.clone())).floor().to_integer().to_usize()
        };
        let size = scaled(bound).ok_or_else(|| Error::Resource("semigroup bound too large".into()))?;
        if size > MAX_TABLE {
            return Err(Error::Resource(format!("semigroup table of {size} entries")));
        }
        let ints: Vec<usize> = gens.iter().map(|g| scaled(g).expect("generator fits")).collect();
        let mut reach = vec![None; size + 1];
        reach[0] = Some(usize::MAX);
        for n in 1..=size {
            reach[n] = ints.iter().position(|&g| g <= n && reach[n - g].is_some());
        }
        Ok(Semigroup {
            gens: gens.to_vec(),
            den,
            reach,
        })
    }

    fn index_of(&self, r: &Rational) -> Option<usize> {
        let s = r * Rational::from_integer(self.den.clone());
        if !s.is_integer() || s < Rational::zero() {
            return None;
        }
        s.to_integer().to_usize().filter(|&n| n < self.reach.len())
    }

    /// `Some(true/false)` inside the table, `None` beyond the bound.
    pub fn contains(&self, r: &Rational) -> Option<bool> {
        let s = r * Rational::from_integer(self.den.clone());
        if s < Rational::zero() {
            return Some(false);
        }
        if !s.is_integer() {
            return (s.floor().to_integer().to_usize()? < self.reach.len()).then_some(false);
        }
        let n = s.to_integer().to_usize()?;
        self.reach.get(n).map(|x| x.is_some())
    }

    /// Coefficients `c` with `Σ c_i g_i = r`, when `r` lies in the semigroup.
    pub fn decompose(&self, r: &Rational) -> Option<Vec<u64>> {
        let mut n = self.index_of(r)?;
        self.reach[n]?;
        let ints: Vec<usize> = self
            .gens
            .iter()
            .map(|g| (g * Rational::from_integer(self.den.clone())).to_integer().to_usize().expect("fits"))
            .collect();
        let mut c = vec![0u64; self.gens.len()];
        while n > 0 {
            let i = self.reach[n].expect("reachable");
            c[i] += 1;
            n -= ints[i];
        }
        Some(c)
    }

    /// All elements in `[0, bound]`, ascending.
    pub fn elements(&self) -> Vec<Rational> {
        self.reach
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(n, _)| Rational::new(BigInt::from(n), self.den.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn numerical_semigroup() {
        let s = Semigroup::new(&[rat(1, 1), rat(3, 2)], &rat(4, 1)).unwrap();
        let els: Vec<_> = s.elements();
        assert_eq!(els, vec![rat(0, 1), rat(1, 1), rat(3, 2), rat(2, 1), rat(5, 2), rat(3, 1), rat(7, 2), rat(4, 1)]);
        assert_eq!(s.contains(&rat(1, 2)), Some(false));
        assert_eq!(s.contains(&rat(9, 1)), None);
        let c = s.decompose(&rat(7, 2)).unwrap();
        assert_eq!(rat(c[0] as i64, 1) + rat(3 * c[1] as i64, 2), rat(7, 2));
    }
}

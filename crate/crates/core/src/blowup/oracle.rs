use crate::algebra::{BivarPoly, FieldElem, Rational};
use crate::engine::{self, JumpingSequence};
use crate::error::Result;

/// Source of exact values and residues for polynomials of a fixed ring.
pub trait ValueOracle {
    fn value(&self, f: &BivarPoly) -> Result<Rational>;
    fn residue(&self, f: &BivarPoly, g: &BivarPoly) -> Result<FieldElem>;
}

impl ValueOracle for JumpingSequence {
    fn value(&self, f: &BivarPoly) -> Result<Rational> {
        engine::value(self, f)
    }

    fn residue(&self, f: &BivarPoly, g: &BivarPoly) -> Result<FieldElem> {
        engine::residue(self, f, g)
    }
}

/// A jumping-sequence valuation multiplied by a positive constant.
#[derive(Debug, Clone)]
pub struct ScaledOracle<'a> {
    pub inner: &'a JumpingSequence,
    pub scale: Rational,
}

impl ValueOracle for ScaledOracle<'_> {
    fn value(&self, f: &BivarPoly) -> Result<Rational> {
        Ok(engine::value(self.inner, f)? * &self.scale)
    }

    fn residue(&self, f: &BivarPoly, g: &BivarPoly) -> Result<FieldElem> {
        engine::residue(self.inner, f, g)
    }
}

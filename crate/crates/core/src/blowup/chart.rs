use std::cmp::Ordering;

use serde_json::{json, Value};

use super::chunk::{chunk_transform, ChunkStep};
use super::oracle::ValueOracle;
use super::ratfunc::RatFunc;
use crate::algebra::{BivarPoly, FieldElem, GroundField, Rational, Vars};
use crate::error::{Error, Result};
use crate::report::{rs, rs_opt};

/// Affine chart of a ring reached by quadratic transforms. The first chart
/// coordinate always defines the newest exceptional curve.
#[derive(Debug, Clone)]
pub struct Chart {
    /// Original coordinates as polynomials in the chart coordinates.
    pub forward: [BivarPoly; 2],
    /// Chart coordinates as rational functions of the original coordinates.
    pub backward: [RatFunc; 2],
    pub values: [Option<Rational>; 2],
    /// Whether the second coordinate also defines an exceptional curve.
    pub second_exceptional: bool,
    pub step: usize,
    /// Residue used by the latest step with equal values.
    pub last_residue: Option<FieldElem>,
    /// Coordinates of the previous chart as polynomials in this one.
    pub local: [BivarPoly; 2],
}

impl Chart {
    /// The starting ring, with chart coordinates renamed to `chart_vars`.
    pub fn initial(field: GroundField, base: Vars, chart_vars: Vars) -> Self {
        let id = [BivarPoly::var(field, chart_vars, 0), BivarPoly::var(field, chart_vars, 1)];
        Chart {
            forward: id.clone(),
            local: id,
            backward: [RatFunc::var(field, base, 0), RatFunc::var(field, base, 1)],
            values: [None, None],
            second_exceptional: false,
            step: 0,
            last_residue: None,
        }
    }

    pub fn field(&self) -> GroundField {
        self.forward[0].field()
    }

    pub fn chart_vars(&self) -> Vars {
        self.forward[0].vars()
    }

    pub fn base_vars(&self) -> Vars {
        self.backward[0].vars()
    }

    pub fn free(&self) -> bool {
        !self.second_exceptional
    }

    /// Fill in whichever coordinate values the oracle can certify.
    pub fn certify_values(&mut self, oracle: &dyn ValueOracle) -> Result<()> {
        for i in 0..2 {
            if self.values[i].is_none() {
                match self.backward[i].value(oracle) {
                    Ok(v) => self.values[i] = Some(v),
                    Err(Error::InsufficientDepth { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    pub fn require_values(&self, oracle: &dyn ValueOracle) -> Result<[Rational; 2]> {
        let get = |i: usize| -> Result<Rational> {
            match &self.values[i] {
                Some(v) => Ok(v.clone()),
                None => self.backward[i].value(oracle),
            }
        };
        Ok([get(0)?, get(1)?])
    }

    /// Pull a rational function of the original coordinates back to this chart.
    pub fn pull(&self, f: &RatFunc) -> Result<RatFunc> {
        f.pullback(&self.forward)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "forward": [self.forward[0].to_json(), self.forward[1].to_json()],
            "backward": [self.backward[0].to_string(), self.backward[1].to_string()],
            "values": [rs_opt(&self.values[0]), rs_opt(&self.values[1])],
            "free": self.free(),
            "step": self.step,
        })
    }
}

/// One quadratic transform along the valuation.
pub fn single_quadratic_transform(chart: &Chart, oracle: &dyn ValueOracle) -> Result<Chart> {
    let [a, b] = chart.require_values(oracle)?;
    let (field, cv) = (chart.field(), chart.chart_vars());
    let x = BivarPoly::var(field, cv, 0);
    let y = BivarPoly::var(field, cv, 1);
    let [b0, b1] = &chart.backward;
    let (sub, backward, values, second_exceptional, last_residue) = match a.cmp(&b) {
        Ordering::Less => (
            [x.clone(), x.mul(&y)],
            [b0.clone(), b1.div(b0)],
            [Some(a.clone()), Some(&b - &a)],
            chart.second_exceptional,
            None,
        ),
        Ordering::Greater => (
            [x.mul(&y), x.clone()],
            [b1.clone(), b0.div(b1)],
            [Some(b.clone()), Some(&a - &b)],
            true,
            None,
        ),
        Ordering::Equal => {
            let ratio = b1.div(b0);
            let c = ratio.residue(oracle)?;
            let yc = y.add(&BivarPoly::constant(field, cv, c.clone()));
            let nb = ratio.sub_const(&c)?;
            let nv = match nb.value(oracle) {
                Ok(v) => Some(v),
                Err(Error::InsufficientDepth { .. }) => None,
                Err(e) => return Err(e),
            };
            ([x.clone(), x.mul(&yc)], [b0.clone(), nb], [Some(a.clone()), nv], false, Some(c))
        }
    };
    Ok(Chart {
        forward: [chart.forward[0].compose(&sub)?, chart.forward[1].compose(&sub)?],
        backward,
        values,
        second_exceptional,
        step: chart.step + 1,
        last_residue,
        local: sub,
    })
}

/// `f ∘ forward = U^{m0} V^{m1} · f'` with `m1 = 0` unless the second
/// coordinate is exceptional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictTransform {
    pub poly: BivarPoly,
    pub exps: [u32; 2],
}

pub fn strict_transform(f: &BivarPoly, chart: &Chart) -> Result<StrictTransform> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("strict transform of zero".into()));
    }
    let g = f.compose(&chart.forward)?;
    let m0 = g.order_u().unwrap_or(0);
    let m1 = if chart.second_exceptional { g.order_v().unwrap_or(0) } else { 0 };
    Ok(StrictTransform {
        poly: g.unshift(m0, m1)?,
        exps: [m0, m1],
    })
}

/// Both charts describe the same ring: the closed-form coordinates are an
/// exceptional parameter times a unit and a transversal parameter.
pub fn same_ring(closed: &Chart, stepped: &Chart) -> Result<(bool, Value)> {
    // identical coordinates: nothing to compose
    if closed.forward == stepped.forward {
        let ok = closed.step == stepped.step && closed.free() == stepped.free();
        return Ok((ok, json!({"steps": stepped.step, "identical_coordinates": true, "free": stepped.free()})));
    }
    let u = closed.backward[0].pullback_germ(&stepped.forward)?;
    let v = closed.backward[1].pullback_germ(&stepped.forward)?;
    let ok = closed.step == stepped.step
        && closed.free() == stepped.free()
        && u.monomial_times_unit() == Some([1, 0])
        && v.in_max_ideal()
        && v.is_transversal_parameter();
    Ok((ok, json!({"steps": stepped.step, "U": u.to_string(), "V": v.to_string(), "free": stepped.free()})))
}

/// [`same_ring`] for charts reached from `start`, one by the closed-form
/// `chunks` and the other by the single transforms in `trace`, compared in
/// the coordinates of `start`: since `start.backward ∘ start.forward` is the
/// identity, this needs only the local substitutions.
pub fn same_ring_from(start: &Chart, chunks: &[ChunkStep], trace: &[Chart]) -> Result<(bool, Value)> {
    let (field, cv) = (start.field(), start.chart_vars());
    let mut base = Chart::initial(field, cv, cv);
    base.values = start.values.clone();
    base.step = start.step;
    base.second_exceptional = start.second_exceptional;
    let mut closed = base.clone();
    for ch in chunks {
        closed = chunk_transform(ch.p, ch.q, &ch.c, &closed)?;
    }
    let mut stepped = base;
    for c in trace {
        stepped.forward = [stepped.forward[0].compose(&c.local)?, stepped.forward[1].compose(&c.local)?];
        stepped.step = c.step;
        stepped.second_exceptional = c.second_exceptional;
    }
    same_ring(&closed, &stepped)
}

pub fn describe_values(chart: &Chart) -> String {
    let f = |v: &Option<Rational>| v.as_ref().map_or("?".to_string(), rs);
    format!("step {} values ({}, {})", chart.step, f(&chart.values[0]), f(&chart.values[1]))
}

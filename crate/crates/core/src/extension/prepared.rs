use serde_json::{json, Value};

use super::ext::MonomialExtension;
use crate::algebra::BivarPoly;
use crate::blowup::{single_quadratic_transform, strict_transform, Chart, Germ, RatFunc, ValueOracle};
use crate::error::{Error, Result};
use crate::report::CheckRecord;

/// Default ceiling on quadratic transforms searched by one algorithm step.
pub const DEFAULT_STEP_CEILING: usize = 512;

/// A function of `u, v` as a function on the `S`-chart.
pub fn to_s_chart(ext: &MonomialExtension, s_chart: &Chart, f: &RatFunc) -> Result<RatFunc> {
    s_chart.pull(&f.pullback(&ext.phi())?)
}

/// Local data of [`to_s_chart`] at the origin, without expanding into the
/// `S`-chart.
pub fn to_s_chart_germ(ext: &MonomialExtension, s_chart: &Chart, f: &RatFunc) -> Result<Germ> {
    f.pullback(&ext.phi())?.pullback_germ(&s_chart.forward)
}

/// Whether the `S`-chart dominates the `R`-chart.
pub fn dominates(ext: &MonomialExtension, r_chart: &Chart, s_chart: &Chart) -> Result<bool> {
    for b in &r_chart.backward {
        if !to_s_chart_germ(ext, s_chart, b)?.in_max_ideal() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct PreparedReport {
    pub prepared: bool,
    pub diagnostics: Vec<String>,
    pub records: Vec<CheckRecord>,
    /// `U∘ / X^t` when `U∘` has the form `X^t · unit`.
    pub delta: Option<RatFunc>,
}

/// The computable conditions of a prepared pair. The critical-locus
/// condition is taken as given.
pub fn prepared_pair_check(ext: &MonomialExtension, r_chart: &Chart, s_chart: &Chart) -> Result<PreparedReport> {
    let u_pulled = to_s_chart(ext, s_chart, &r_chart.backward[0])?;
    prepared_with(ext, r_chart, s_chart, u_pulled)
}

/// [`prepared_pair_check`] given `u` already pulled back to the `S`-chart.
pub(crate) fn prepared_with(
    ext: &MonomialExtension,
    r_chart: &Chart,
    s_chart: &Chart,
    u_pulled: RatFunc,
) -> Result<PreparedReport> {
    let inputs = json!({"t": ext.t, "r_step": r_chart.step, "s_step": s_chart.step});
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();

    let v_germ = to_s_chart_germ(ext, s_chart, &r_chart.backward[1])?;
    let dom = u_pulled.in_max_ideal() && v_germ.in_max_ideal();
    if !dom {
        diagnostics.push("S-chart does not dominate R-chart".into());
    }
    records.push(CheckRecord::new(
        "prepared.domination",
        inputs.clone(),
        json!({"pulled": [u_pulled.to_string(), v_germ.to_string()]}),
        dom,
    ));

    let free = r_chart.free() && s_chart.free();
    if !free {
        diagnostics.push("a chart is not free".into());
    }
    records.push(CheckRecord::new(
        "prepared.freeness",
        inputs.clone(),
        json!({"r_free": r_chart.free(), "s_free": s_chart.free()}),
        free,
    ));

    let field = ext.spec.field;
    let x_t = RatFunc::var(field, s_chart.chart_vars(), 0).pow(ext.t as i64);
    let quotient = u_pulled.div(&x_t);
    let delta_ok = quotient.is_unit();
    if !delta_ok {
        diagnostics.push("δ not a unit".into());
    }
    records.push(CheckRecord::new(
        "prepared.monomial-relation",
        inputs.clone(),
        json!({"u": u_pulled.to_string(), "delta": quotient.to_string()}),
        delta_ok,
    ));
    records.push(CheckRecord::new(
        "prepared.critical-locus",
        inputs,
        json!({"status": "assumed"}),
        true,
    ));
    Ok(PreparedReport {
        prepared: dom && free && delta_ok,
        diagnostics,
        records,
        delta: delta_ok.then_some(quotient),
    })
}

/// The next pair `(R_{r_{n+1}}, S_{s_{n+1}})` of the algorithm.
#[derive(Debug, Clone)]
pub struct PreparedStep {
    pub r: usize,
    pub s: usize,
    pub r_chart: Chart,
    pub s_chart: Chart,
    /// Strict transform of `f_n` in `S_{s_{n+1}}` (a unit).
    pub f_strict: BivarPoly,
}

impl PreparedStep {
    pub fn to_json(&self) -> Value {
        json!({"r": self.r, "s": self.s, "f_strict": self.f_strict.to_string(),
               "r_chart": self.r_chart.to_json(), "s_chart": self.s_chart.to_json()})
    }
}

/// The current chart seen as the identity: its forward map becomes the
/// identity in its own coordinates.
fn rebase(chart: &Chart) -> Chart {
    let (field, cv) = (chart.field(), chart.chart_vars());
    let mut c = chart.clone();
    c.forward = [BivarPoly::var(field, cv, 0), BivarPoly::var(field, cv, 1)];
    c
}

/// `f_n` is given in the coordinates of the current `S`-chart. The `S` side
/// advances until it is free with empty strict transform of `f_n`, then the
/// `R` side advances as long as it stays dominated.
pub fn prepared_pair_step(
    ext: &MonomialExtension,
    r_chart: &Chart,
    s_chart: &Chart,
    f: &BivarPoly,
    r_oracle: &dyn ValueOracle,
    s_oracle: &dyn ValueOracle,
    ceiling: usize,
) -> Result<PreparedStep> {
    if f.vars() != s_chart.chart_vars() {
        return Err(Error::InvalidArgument("f_n must be written in the S-chart coordinates".into()));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::InvalidArgument(format!("f_n = {f} is a unit")));
    }
    let mut rel = rebase(s_chart);
    let mut s = s_chart.clone();
    let f_strict = loop {
        if rel.step - s_chart.step >= ceiling {
            return Err(Error::Resource(format!("no s_(n+1) within {ceiling} quadratic transforms")));
        }
        rel = single_quadratic_transform(&rel, s_oracle)?;
        s = single_quadratic_transform(&s, s_oracle)?;
        let st = strict_transform(f, &rel)?;
        if s.free() && !st.poly.constant_term().is_zero() {
            break st.poly;
        }
    };

    let mut r = r_chart.clone();
    loop {
        if r.step - r_chart.step >= ceiling {
            return Err(Error::Resource(format!("no maximal r_(n+1) within {ceiling} quadratic transforms")));
        }
        let next = single_quadratic_transform(&r, r_oracle)?;
        if !dominates(ext, &next, &s)? {
            break;
        }
        r = next;
    }
    if r.step == r_chart.step {
        return Err(Error::Internal("S_(s_(n+1)) dominates no later R-ring".into()));
    }
    Ok(PreparedStep {
        r: r.step,
        s: s.step,
        r_chart: r,
        s_chart: s,
        f_strict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, GroundField, Vars};
    use crate::extension::build_dual_sequences;
    use crate::engine::ValuationSpec;

    fn setup(t: u64, pairs: &[(u64, u64)], lambda: i64) -> (MonomialExtension, Chart, Chart) {
        let f = GroundField::Rationals;
        let mut spec = ValuationSpec::simple(f, pairs);
        spec.lambdas[0] = f.from_i64(lambda);
        let ext = MonomialExtension::new(t, BivarPoly::one(f, Vars::XY), spec).unwrap();
        (ext, Chart::initial(f, Vars::UV, Vars::RChart), Chart::initial(f, Vars::XY, Vars::SChart))
    }

    #[test]
    fn initial_state_is_prepared() {
        let (ext, r, s) = setup(5, &[(3, 2), (5, 3)], 1);
        let rep = prepared_pair_check(&ext, &r, &s).unwrap();
        assert!(rep.prepared, "{:?}", rep.diagnostics);
    }

    #[test]
    fn non_unit_delta() {
        let (ext, r, s) = setup(5, &[(3, 2), (5, 3)], 1);
        let f = ext.spec.field;
        let bad = MonomialExtension::new_unchecked(5, parse_poly(f, Vars::XY, "x + y").unwrap(), ext.spec).unwrap();
        let rep = prepared_pair_check(&bad, &r, &s).unwrap();
        assert!(!rep.prepared);
        assert!(rep.diagnostics.iter().any(|d| d == "δ not a unit"));
    }

    #[test]
    fn first_step_is_the_chunk() {
        let (ext, r, s) = setup(5, &[(3, 2), (5, 3)], 2);
        let ds = build_dual_sequences(&ext, 2).unwrap();
        let y = BivarPoly::var(ext.spec.field, Vars::SChart, 1);
        let step = prepared_pair_step(&ext, &r, &s, &y, &ds.down, &ds.s_oracle().unwrap(), 64).unwrap();
        assert_eq!((step.r, step.s), (3, 9));
        let rep = prepared_pair_check(&ext, &step.r_chart, &step.s_chart).unwrap();
        assert!(rep.prepared, "{:?}", rep.diagnostics);
    }

    #[test]
    fn step_counts() {
        // p' = q' = 1: one blow-up clears y
        let (ext, r, s) = setup(1, &[(1, 1), (3, 2)], 2);
        let ds = build_dual_sequences(&ext, 2).unwrap();
        let y = BivarPoly::var(ext.spec.field, Vars::SChart, 1);
        let step = prepared_pair_step(&ext, &r, &s, &y, &ds.down, &ds.s_oracle().unwrap(), 64).unwrap();
        assert_eq!(step.s, 1);

        let (ext, r, s) = setup(1, &[(3, 2), (5, 3)], 2);
        let ds = build_dual_sequences(&ext, 2).unwrap();
        let f = parse_poly(ext.spec.field, Vars::SChart, "Y^2 - X^3").unwrap();
        let step = prepared_pair_step(&ext, &r, &s, &f, &ds.down, &ds.s_oracle().unwrap(), 64).unwrap();
        assert_eq!(step.s, 3);

        let err = prepared_pair_step(&ext, &r, &s, &f, &ds.down, &ds.s_oracle().unwrap(), 2).unwrap_err();
        assert_eq!(err.kind(), "resource");
    }
}

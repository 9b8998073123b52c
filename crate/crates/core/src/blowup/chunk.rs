use serde_json::json;

use super::chart::{single_quadratic_transform, Chart};
use super::oracle::ValueOracle;
use crate::algebra::{bezout, euclid_data, BivarPoly, FieldElem, Rational, Vars};
use crate::engine::{build_jumping_sequence, ValuationSpec};
use crate::error::{Error, Result};
use crate::report::{rs, CheckRecord};

/// A transformation is admissible when its ratio is not an integer.
pub fn is_admissible(_p: u64, q: u64) -> bool {
    q != 1
}

#[derive(Debug, Clone)]
pub struct ChunkResult {
    pub chart: Chart,
    /// The single transforms composing the chunk, relative to its start.
    pub trace: Vec<Chart>,
}

/// The quadratic transforms realising one step of the Euclidean algorithm
/// on the ratio `p/q` of coordinate values, in closed form:
/// `x = X^q (Y+c)^b`, `y = X^p (Y+c)^a` with `aq - bp = 1`.
pub fn chunk_transform(p: u64, q: u64, c: &FieldElem, chart: &Chart) -> Result<Chart> {
    let (a, b) = bezout(p, q)?;
    if c.is_zero() {
        return Err(Error::InvalidArgument("chunk residue must be nonzero".into()));
    }
    if let [Some(vu), Some(vv)] = &chart.values {
        if vv * Rational::from_integer(q.into()) != vu * Rational::from_integer(p.into()) {
            return Err(Error::InvalidArgument(format!(
                "coordinate values {} and {} are not in ratio {p}/{q}",
                rs(vu),
                rs(vv)
            )));
        }
    }
    let eps = euclid_data(p, q)?.epsilon as usize;
    let (field, cv) = (chart.field(), chart.chart_vars());
    let x = BivarPoly::var(field, cv, 0);
    let yc = BivarPoly::var(field, cv, 1).add(&BivarPoly::constant(field, cv, c.clone()));
    let sub = [x.pow(q).mul(&yc.pow(b)), x.pow(p).mul(&yc.pow(a))];
    let [b0, b1] = &chart.backward;
    let nx = b0.pow(a as i64).mul(&b1.pow(-(b as i64)));
    let ny = b1.pow(q as i64).mul(&b0.pow(-(p as i64))).sub_const(c)?;
    Ok(Chart {
        forward: [chart.forward[0].compose(&sub)?, chart.forward[1].compose(&sub)?],
        backward: [nx, ny],
        values: [chart.values[0].as_ref().map(|v| v / Rational::from_integer(q.into())), None],
        second_exceptional: false,
        step: chart.step + eps,
        last_residue: Some(c.clone()),
        local: sub,
    })
}

/// The same chunk performed one quadratic transform at a time, starting from
/// an identity chart on `vars`; the valuation used is the monomial one
/// determined by `p/q` and `c`, which governs every step of the chunk.
pub fn chunk_trace(p: u64, q: u64, c: &FieldElem, vars: Vars) -> Result<Vec<Chart>> {
    let field = c.field();
    let mut spec = ValuationSpec::simple(field, &[(p, q)]);
    spec.vars = vars;
    spec.units = vec![BivarPoly::one(field, vars)];
    spec.lambdas = vec![c.clone()];
    let local = build_jumping_sequence(&spec)?;
    let eps = euclid_data(p, q)?.epsilon as usize;
    let mut chart = Chart::initial(field, vars, vars);
    chart.certify_values(&local)?;
    let mut trace = Vec::with_capacity(eps);
    for _ in 0..eps {
        chart = single_quadratic_transform(&chart, &local)?;
        trace.push(chart.clone());
    }
    Ok(trace)
}

/// `poly == X^m (Y + c)^e`; returns `(m, e)`.
fn monomial_unit_form(poly: &BivarPoly, c: &FieldElem) -> Option<(u32, u32)> {
    let (m, rest) = poly.split_u_power();
    if rest.deg_u() != Some(0) {
        return None;
    }
    let e = rest.deg_v()?;
    let (field, vars) = (poly.field(), poly.vars());
    let yc = BivarPoly::var(field, vars, 1).add(&BivarPoly::constant(field, vars, c.clone()));
    (rest == yc.pow(e as u64)).then_some((m, e))
}

/// Compare a chunk built from single transforms with its closed form.
pub fn chunk_equivalence(p: u64, q: u64, c: &FieldElem, vars: Vars) -> Result<Vec<CheckRecord>> {
    let ed = euclid_data(p, q)?;
    let (a, b) = bezout(p, q)?;
    let field = c.field();
    let trace = chunk_trace(p, q, c, vars)?;
    let start = Chart::initial(field, vars, vars);
    let closed = chunk_transform(p, q, c, &start)?;
    let last = trace.last().expect("chunk has at least one step");
    let inputs = json!({"p": p, "q": q, "c": c.to_canonical()});
    let mut out = Vec::new();

    out.push(CheckRecord::new(
        "chunk.step-count",
        inputs.clone(),
        json!({"steps": trace.len(), "epsilon": ed.epsilon, "closed_step": closed.step}),
        trace.len() as u64 == ed.epsilon && closed.step as u64 == ed.epsilon,
    ));

    let c_step = last.last_residue.clone().expect("last step has equal values");
    let step_forms = [
        monomial_unit_form(&last.forward[0], &c_step),
        monomial_unit_form(&last.forward[1], &c_step),
    ];
    let closed_forms = [
        monomial_unit_form(&closed.forward[0], c),
        monomial_unit_form(&closed.forward[1], c),
    ];
    let (form_ok, det, witness) = match (step_forms, closed_forms) {
        ([Some((m1, e1)), Some((m2, e2))], [Some(cf1), Some(cf2)]) => {
            let det = e2 as i64 * q as i64 - e1 as i64 * p as i64;
            let exps_ok = (m1 as u64, m2 as u64) == (q, p)
                && cf1 == (q as u32, b as u32)
                && cf2 == (p as u32, a as u32);
            let c_ok = det.abs() == 1 && c.pow(det) == Some(c_step.clone());
            (
                exps_ok && c_ok,
                det,
                json!({"step_exps": [[m1, e1], [m2, e2]], "closed_exps": [cf1, cf2],
                       "det": det, "c_step": c_step.to_canonical()}),
            )
        }
        _ => (false, 0, json!({"error": "a forward component is not X^m (Y+c)^e"})),
    };
    out.push(CheckRecord::new("chunk.forward-equivalence", inputs.clone(), witness, form_ok));

    // when the unit normalisations agree, the two charts differ by X -> X (Y+c)^k
    if det == 1 {
        if let [Some((_, e1)), _] = step_forms {
            let k = (e1 as i64 - b as i64) / q as i64;
            let x = BivarPoly::var(field, vars, 0);
            let y = BivarPoly::var(field, vars, 1);
            let yc = y.add(&BivarPoly::constant(field, vars, c.clone()));
            let ok = if k <= 0 {
                let s = [x.mul(&yc.pow((-k) as u64)), y.clone()];
                last.forward[0].compose(&s)? == closed.forward[0] && last.forward[1].compose(&s)? == closed.forward[1]
            } else {
                let s = [x.mul(&yc.pow(k as u64)), y.clone()];
                closed.forward[0].compose(&s)? == last.forward[0] && closed.forward[1].compose(&s)? == last.forward[1]
            };
            out.push(CheckRecord::new(
                "chunk.coordinate-change",
                inputs.clone(),
                json!({"k": k}),
                ok,
            ));
        }
    }

    let nu_x = last.values[0].clone();
    let want = Rational::new(1.into(), q.into());
    let closed_x = closed.backward[0].monomial();
    let closed_val = Rational::from_integer(closed_x[0].into()) + Rational::new((closed_x[1] * p as i64).into(), q.into());
    out.push(CheckRecord::new(
        "chunk.value-of-X",
        inputs.clone(),
        json!({"step_value": nu_x.as_ref().map(rs), "closed_value": rs(&closed_val), "expected": rs(&want)}),
        nu_x.as_ref() == Some(&want) && closed_val == want,
    ));

    let f1 = ed.f1() as usize;
    let eps = ed.epsilon as usize;
    let pattern: Vec<bool> = trace.iter().map(Chart::free).collect();
    let expected: Vec<bool> = (1..=eps).map(|s| s <= f1 || s == eps).collect();
    out.push(CheckRecord::new(
        "chunk.freeness",
        inputs,
        json!({"free_after_step": pattern, "expected": expected, "admissible": is_admissible(p, q)}),
        pattern == expected && (is_admissible(p, q) == expected.iter().any(|f| !f)),
    ));
    Ok(out)
}

/// Ratio and residue that determine the next chunk from a free chart.
pub fn next_chunk_data(chart: &Chart, oracle: &dyn ValueOracle) -> Result<(u64, u64, FieldElem)> {
    let [a, b] = chart.require_values(oracle)?;
    let r = &b / &a;
    let to_u64 = |x: &num_bigint::BigInt| {
        u64::try_from(x.clone()).map_err(|_| Error::Resource("chunk ratio does not fit in 64 bits".into()))
    };
    let (p, q) = (to_u64(r.numer())?, to_u64(r.denom())?);
    let [b0, b1] = &chart.backward;
    let c = b1.pow(q as i64).mul(&b0.pow(-(p as i64))).residue(oracle)?;
    Ok((p, q, c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkStep {
    pub p: u64,
    pub q: u64,
    pub c: FieldElem,
    pub from_step: usize,
    pub to_step: usize,
}

/// Apply chunks read off the valuation until `target` quadratic transforms
/// have been performed in total.
pub fn advance_to(chart: &Chart, target: usize, oracle: &dyn ValueOracle) -> Result<(Chart, Vec<ChunkStep>)> {
    let mut cur = chart.clone();
    let mut steps = Vec::new();
    while cur.step < target {
        let (p, q, c) = next_chunk_data(&cur, oracle)?;
        let eps = euclid_data(p, q)?.epsilon as usize;
        if cur.step + eps > target {
            return Err(Error::Internal(format!(
                "chunk {p}/{q} from step {} overshoots step {target}",
                cur.step
            )));
        }
        let from = cur.step;
        cur = chunk_transform(p, q, &c, &cur)?;
        cur.certify_values(oracle)?;
        steps.push(ChunkStep { p, q, c, from_step: from, to_step: cur.step });
    }
    if cur.step != target {
        return Err(Error::InvalidArgument(format!("chart is already past step {target}")));
    }
    Ok((cur, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroundField;
    use crate::report::all_pass;

    #[test]
    fn worked_three_halves() {
        let f = GroundField::Rationals;
        let c = f.from_i64(2);
        let trace = chunk_trace(3, 2, &c, Vars::RChart).unwrap();
        assert_eq!(trace.len(), 3);
        let last = trace.last().unwrap();
        assert_eq!(last.last_residue, Some(f.parse("1/2").unwrap()));
        assert_eq!(last.forward[0].to_string(), "U^2*V + (1/2)*U^2");
        let recs = chunk_equivalence(3, 2, &c, Vars::RChart).unwrap();
        assert!(all_pass(&recs), "{recs:#?}");
    }

    #[test]
    fn battery() {
        let f = GroundField::prime(101).unwrap();
        for (p, q) in [(3, 2), (5, 3), (7, 2), (5, 1), (1, 1), (2, 5), (8, 5)] {
            let recs = chunk_equivalence(p, q, &f.from_i64(3), Vars::SChart).unwrap();
            assert!(all_pass(&recs), "{p}/{q}: {recs:#?}");
        }
    }
}

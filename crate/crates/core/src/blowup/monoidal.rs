use serde_json::json;

use super::chart::{strict_transform, Chart};
use super::chunk::{advance_to, is_admissible, ChunkStep};
use super::ratfunc::RatFunc;
use crate::algebra::{Rational, Vars};
use crate::engine::{IndependentData, JumpingSequence};
use crate::error::{Error, Result};
use crate::report::{rs, CheckRecord};

/// `H_j ∘ forward = U^exponent · unit`.
#[derive(Debug, Clone)]
pub struct UnitFactor {
    pub j: usize,
    pub exponent: u32,
    pub expected: Rational,
    pub cofactor_is_unit: bool,
}

/// The second parameter `v_l = H_{l+1} / ∏_{j<l} H_j^{n}` at a level.
#[derive(Debug, Clone)]
pub struct NextParameter {
    pub h_level: usize,
    pub strict_exponent: u32,
    pub denominator_exponent: Option<u32>,
    pub transversal: bool,
    pub value: Rational,
    pub expected: Rational,
    pub admissible: bool,
}

#[derive(Debug, Clone)]
pub struct MonoidalLevel {
    pub l: usize,
    pub chart: Chart,
    pub chunks: Vec<ChunkStep>,
    pub u_value: Rational,
    pub u_expected: Rational,
    pub units: Vec<UnitFactor>,
    /// Absent at the last known level, whose successor is beyond the depth.
    pub next: Option<NextParameter>,
}

/// `∏_{j<l} H_j^{n_{i_l, i_j}}`, the denominator of `v_l`.
pub fn parameter_denominator(js: &JumpingSequence, ind: &IndependentData, l: usize) -> Result<RatFunc> {
    let mut denom = RatFunc::one(js.field(), js.vars());
    if l >= 1 {
        let e = js.exps(ind.index(l));
        for j in 0..l {
            let n = e[ind.index(j)];
            if n > 0 {
                denom = denom.mul(&RatFunc::from_poly(ind.h(js, j))?.pow(n as i64));
            }
        }
    }
    Ok(denom)
}

/// The admissible second parameter `v_l = H_{l+1} / ∏_{j<l} H_j^{n_{i_l, i_j}}`
/// at level `l`, with `ν(v_l) = (1/Q̄_l)(p̄_{l+1}/q̄_{l+1})`.
pub fn admissible_parameter(js: &JumpingSequence, ind: &IndependentData, l: usize) -> Result<RatFunc> {
    if l >= ind.len() {
        return Err(Error::insufficient(js.depth() + 1, format!("level {} is beyond the known levels", l + 1)));
    }
    Ok(RatFunc::from_poly(ind.h(js, l + 1))?.div(&parameter_denominator(js, ind, l)?))
}

/// Charts at the steps `k̄_0 < k̄_1 < … < k̄_L` together with the
/// factorisations of `H_0..H_l` and the strict transform of `H_{l+1}`.
pub fn monoidal_sequence(js: &JumpingSequence, ind: &IndependentData, big_l: usize) -> Result<Vec<MonoidalLevel>> {
    if big_l > ind.len() {
        return Err(Error::insufficient(
            js.depth() + 1,
            format!("only {} independent levels are known, {big_l} requested", ind.len()),
        ));
    }
    let (field, base) = (js.field(), js.vars());
    let chart_vars = if base == Vars::XY { Vars::SChart } else { Vars::RChart };
    let mut chart = Chart::initial(field, base, chart_vars);
    chart.certify_values(js)?;
    let mut out = Vec::new();
    for l in 0..=big_l {
        let (next_chart, chunks) = advance_to(&chart, ind.kbar(l) as usize, js)?;
        chart = next_chart;
        let u_value = chart.backward[0].value(js)?;
        let u_expected = Rational::new(1.into(), ind.qbar_prod(l).into());

        let mut units = Vec::new();
        for j in 0..=l {
            let st = strict_transform(ind.h(js, j), &chart)?;
            units.push(UnitFactor {
                j,
                exponent: st.exps[0],
                expected: Rational::from_integer(ind.qbar_prod(l).into()) * ind.beta_bar(j),
                cofactor_is_unit: st.exps[1] == 0 && !st.poly.constant_term().is_zero(),
            });
        }

        let next = if l < ind.len() {
            let h_next = ind.h(js, l + 1);
            let st = strict_transform(h_next, &chart)?;
            let denom = parameter_denominator(js, ind, l)?;
            let pulled = chart.pull(&denom)?;
            let denominator_exponent = pulled
                .monomial_times_unit()
                .filter(|m| m[1] == 0 && m[0] >= 0)
                .map(|m| m[0] as u32);
            let v = RatFunc::from_poly(h_next)?.div(&denom);
            let lv = ind.level(l + 1);
            NextParameter {
                h_level: l + 1,
                strict_exponent: st.exps[0],
                denominator_exponent,
                transversal: RatFunc::from_poly(&st.poly)?.is_transversal_parameter(),
                value: v.value(js)?,
                expected: Rational::new(lv.pbar.into(), (lv.qbar as u128 * ind.qbar_prod(l) as u128).into()),
                admissible: is_admissible(lv.pbar, lv.qbar),
            }
            .into()
        } else {
            None
        };
        out.push(MonoidalLevel {
            l,
            chart: chart.clone(),
            chunks,
            u_value,
            u_expected,
            units,
            next,
        });
    }
    Ok(out)
}

pub fn monoidal_checks(levels: &[MonoidalLevel]) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for lv in levels {
        let inputs = json!({"l": lv.l, "step": lv.chart.step});
        let closed = lv.chart.values[0].clone();
        out.push(CheckRecord::new(
            "monoidal.u-value",
            inputs.clone(),
            json!({"value": rs(&lv.u_value), "closed_form": closed.as_ref().map(rs), "expected": rs(&lv.u_expected)}),
            lv.u_value == lv.u_expected && closed.is_none_or(|c| c == lv.u_expected),
        ));
        let ok = lv
            .units
            .iter()
            .all(|u| u.cofactor_is_unit && Rational::from_integer(u.exponent.into()) == u.expected);
        out.push(CheckRecord::new(
            "monoidal.unit-factorization",
            inputs.clone(),
            json!(lv.units.iter().map(|u| json!({"j": u.j, "exponent": u.exponent,
                "expected": rs(&u.expected), "unit": u.cofactor_is_unit})).collect::<Vec<_>>()),
            ok,
        ));
        if let Some(n) = &lv.next {
            let ok = n.denominator_exponent == Some(n.strict_exponent) && n.transversal && n.value == n.expected;
            out.push(CheckRecord::new(
                "monoidal.strict-transform",
                inputs,
                json!({"H": n.h_level, "strict_exponent": n.strict_exponent,
                    "denominator_exponent": n.denominator_exponent, "transversal": n.transversal,
                    "value": rs(&n.value), "expected": rs(&n.expected), "admissible": n.admissible}),
                ok,
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroundField;
    use crate::engine::{build_jumping_sequence, extract_independent, ValuationSpec};
    use crate::report::all_pass;

    #[test]
    fn spec_a_levels() {
        let js = build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &[(3, 2), (5, 3)])).unwrap();
        let ind = extract_independent(&js).unwrap();
        let levels = monoidal_sequence(&js, &ind, 2).unwrap();
        assert_eq!(levels.iter().map(|l| l.chart.step).collect::<Vec<_>>(), vec![0, 3, 7]);
        let recs = monoidal_checks(&levels);
        assert!(all_pass(&recs), "{recs:#?}");
    }
}

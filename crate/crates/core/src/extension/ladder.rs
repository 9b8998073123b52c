use num_integer::Integer;
use serde_json::{json, Value};

use super::descent::{chunk_descend, Descent};
use super::dual::{build_dual_sequences, DualSequences};
use super::ext::MonomialExtension;
use super::prepared::{prepared_with, to_s_chart, to_s_chart_germ};
use crate::algebra::{euclid_data, reduce, FieldElem, Rational, Vars};
use crate::blowup::{
    admissible_parameter, advance_to, same_ring_from, single_quadratic_transform, Chart, RatFunc, ValueOracle,
};
use crate::engine::{extract_independent, IndependentData, JumpingSequence, Mode};
use crate::error::{Error, Result};
use crate::report::{all_pass, rs, CheckRecord};

#[derive(Debug, Clone)]
pub struct Rung {
    pub i: usize,
    pub chart_r: Chart,
    pub chart_s: Chart,
    pub t: u64,
    /// `δ_i` with `u_i = x_i^t δ_i`, when that relation holds.
    pub delta: Option<RatFunc>,
    pub rho: Option<FieldElem>,
    /// `ν*(y_i) / ν*(x_i)` in lowest terms.
    pub value_ratio: Option<(u64, u64)>,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl Rung {
    pub fn to_json(&self) -> Value {
        json!({
            "i": self.i,
            "chart_R": self.chart_r.to_json(),
            "chart_S": self.chart_s.to_json(),
            "t": self.t,
            "delta_i": self.delta.as_ref().map(|d| d.to_string()),
            "rho": self.rho.as_ref().map(FieldElem::to_canonical),
            "value_ratio": self.value_ratio.map(|(p, q)| [p, q]),
            "pass": self.pass,
            "checks": self.records,
        })
    }
}

#[derive(Debug, Clone)]
pub enum LadderOutcome {
    ToroidalCase4,
    ToroidalCase5,
    /// `(t, q_M) != 1` with `M = i_l`; the descent across level `l` only
    /// yields `U = X^g Δ` with `g = gcd(p̄'_l, t) < t`.
    Contradiction {
        l: usize,
        m: usize,
        g: u64,
        witness: Option<Box<Descent>>,
        records: Vec<CheckRecord>,
    },
    /// Some rung certificate failed; an invariant breach.
    Failed { rung: usize },
}

impl LadderOutcome {
    pub fn to_json(&self) -> Value {
        match self {
            LadderOutcome::ToroidalCase4 => json!({"kind": "toroidal-case-4"}),
            LadderOutcome::ToroidalCase5 => json!({"kind": "toroidal-case-5"}),
            LadderOutcome::Contradiction { l, m, g, records, .. } => json!({
                "kind": "contradiction",
                "witness": {"M": m, "l": l, "g": g},
                "checks": records,
            }),
            LadderOutcome::Failed { rung } => json!({"kind": "failed", "rung": rung}),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LadderCertificate {
    pub t: u64,
    pub depth: usize,
    pub rungs: Vec<Rung>,
    pub outcome: LadderOutcome,
    /// First `k` with `gcd(t, Q_k) != 1`, scanned independently of the rungs.
    pub qprod_scan: Option<usize>,
}

impl LadderCertificate {
    pub fn passes(&self) -> bool {
        matches!(self.outcome, LadderOutcome::ToroidalCase4 | LadderOutcome::ToroidalCase5)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t,
            "depth": self.depth,
            "rungs": self.rungs.iter().map(Rung::to_json).collect::<Vec<_>>(),
            "outcome": self.outcome.to_json(),
            "gcd_scan": self.qprod_scan,
        })
    }
}

/// `v_i = T_{i+1} / ∏_{j<i} T_j^{n_{i,j}}`, of value `(1/Q_i)(p_{i+1}/q_{i+1})`.
pub fn short_parameter(js: &JumpingSequence, i: usize) -> Result<RatFunc> {
    let mut v = RatFunc::from_poly(js.t(i + 1))?;
    if i >= 1 {
        for (j, &n) in js.exps(i).iter().enumerate() {
            if n > 0 {
                v = v.div(&RatFunc::from_poly(js.t(j))?.pow(n as i64));
            }
        }
    }
    Ok(v)
}

fn ratio_pair(r: &Rational) -> Result<(u64, u64)> {
    let conv = |x: &num_bigint::BigInt| u64::try_from(x.clone()).map_err(|_| Error::Resource("ratio overflow".into()));
    Ok((conv(r.numer())?, conv(r.denom())?))
}

fn simulate(start: &Chart, steps: usize, oracle: &dyn ValueOracle) -> Result<Vec<Chart>> {
    let mut trace: Vec<Chart> = Vec::with_capacity(steps);
    for _ in 0..steps {
        let next = single_quadratic_transform(trace.last().unwrap_or(start), oracle)?;
        trace.push(next);
    }
    Ok(trace)
}

struct Ctx<'a> {
    ext: &'a MonomialExtension,
    ds: &'a DualSequences,
    ind: IndependentData,
    s_oracle: Option<crate::blowup::ScaledOracle<'a>>,
}

impl Ctx<'_> {
    fn down(&self) -> &JumpingSequence {
        &self.ds.down
    }

    fn nu_star_x(&self, chart_s: &Chart, nu_u: &Rational) -> Result<(Rational, &'static str)> {
        match &self.s_oracle {
            Some(o) => Ok((chart_s.backward[0].value(o)?, "upstairs sequence")),
            None => Ok((nu_u / Rational::from_integer(self.ext.t.into()), "relation u = x^t δ")),
        }
    }

    fn rung(&self, i: usize, chart_r: Chart, chart_s: Chart, mut records: Vec<CheckRecord>) -> Result<Rung> {
        let (ext, down, t) = (self.ext, self.down(), self.ext.t);
        let field = ext.spec.field;
        let inputs = json!({"i": i, "k": chart_r.step, "k_up": chart_s.step});

        records.push(CheckRecord::new(
            "ladder.freeness",
            inputs.clone(),
            json!({"r_free": chart_r.free(), "s_free": chart_s.free()}),
            chart_r.free() && chart_s.free(),
        ));

        let u_s = to_s_chart(ext, &chart_s, &chart_r.backward[0])?;
        let delta = u_s.div(&RatFunc::var(field, Vars::SChart, 0).pow(t as i64));
        let unit = delta.is_unit();
        let rho = delta.value_at_origin();
        records.push(CheckRecord::new(
            "ladder.stable-form",
            inputs.clone(),
            json!({"u": u_s.to_string(), "delta": delta.to_string(), "rho": rho.as_ref().map(FieldElem::to_canonical)}),
            unit,
        ));

        let v = short_parameter(down, i)?;
        let v_r = chart_r.pull(&v)?;
        let y_s = to_s_chart_germ(ext, &chart_s, &v)?;
        records.push(CheckRecord::new(
            "ladder.parameter",
            inputs.clone(),
            json!({"v_in_R": v_r.to_string(), "y_in_S": y_s.to_string()}),
            v_r.is_transversal_parameter() && y_s.is_transversal_parameter(),
        ));

        let nu_v = v.value(down)?;
        let nu_u = chart_r.backward[0].value(down)?;
        let (nu_x, source) = self.nu_star_x(&chart_s, &nu_u)?;
        let ratio = ratio_pair(&(&nu_v / &nu_x))?;
        let (p1, q1) = down.pair(i + 1);
        let expected = reduce(t * p1, q1);
        let scale_ok = nu_u == &nu_x * Rational::from_integer(t.into());
        let u_ok = nu_u == Rational::new(1.into(), down.qprod(i).into());
        records.push(CheckRecord::new(
            "ladder.value-ratio",
            inputs.clone(),
            json!({"nu_v": rs(&nu_v), "nu_u": rs(&nu_u), "nu_star_x": rs(&nu_x), "nu_star_x_source": source,
                   "ratio": [ratio.0, ratio.1], "expected": [expected.0, expected.1]}),
            ratio == expected && scale_ok && u_ok,
        ));

        if i < self.ds.compared {
            let o = self.s_oracle.as_ref().expect("upstairs sequence exists");
            let vy = v.pullback(&ext.phi())?.value(o)?;
            records.push(CheckRecord::new(
                "ladder.restriction",
                inputs.clone(),
                json!({"nu_star_y": rs(&vy), "nu_v": rs(&nu_v)}),
                vy == nu_v,
            ));
        }

        let (pu, qu) = ratio;
        let transfer = (qu == 1 || q1 != 1) && (pu % t != 0 || qu == q1);
        records.push(CheckRecord::new(
            "ladder.admissibility-transfer",
            inputs.clone(),
            json!({"up": [pu, qu], "down": [p1, q1]}),
            transfer,
        ));

        if let Some(l) = (0..self.ind.len()).find(|&l| self.ind.index(l) == i) {
            let va = admissible_parameter(down, &self.ind, l)?;
            let nva = va.value(down)?;
            let lv = self.ind.level(l + 1);
            let down_ratio = ratio_pair(&(&nva / &nu_u))?;
            let up_ratio = ratio_pair(&(&nva / &nu_x))?;
            let up_expected = reduce(t * lv.pbar, lv.qbar);
            let mut ok = down_ratio == (lv.pbar, lv.qbar) && up_ratio == up_expected;
            let mut w = json!({"l": l, "down": [down_ratio.0, down_ratio.1], "down_expected": [lv.pbar, lv.qbar],
                               "up": [up_ratio.0, up_ratio.1], "up_expected": [up_expected.0, up_expected.1]});
            if let Some(up) = self.ds.up.as_ref().filter(|_| lv.index <= self.ds.compared) {
                let up_ind = extract_independent(up)?;
                if l < up_ind.len() {
                    let ul = up_ind.level(l + 1);
                    ok &= (ul.pbar, ul.qbar) == up_expected;
                    w["upstairs_levels"] = json!([ul.pbar, ul.qbar]);
                }
            }
            records.push(CheckRecord::new("ladder.admissible-parameters", inputs.clone(), w, ok));
        }

        let prep = prepared_with(ext, &chart_r, &chart_s, u_s.clone())?;
        records.push(CheckRecord::new(
            "ladder.prepared",
            inputs,
            json!({"diagnostics": prep.diagnostics}),
            prep.prepared,
        ));

        let pass = all_pass(&records);
        Ok(Rung {
            i,
            chart_r,
            chart_s,
            t,
            delta: unit.then_some(delta),
            rho,
            value_ratio: Some(ratio),
            records,
            pass,
        })
    }

    /// Move from rung `i-1` to rung `i`, cross-checking the closed form
    /// against the residue identity and single transforms.
    fn climb(&self, prev: &Rung, i: usize, k_up: usize) -> Result<(Chart, Chart, Vec<CheckRecord>)> {
        let (ext, down, t) = (self.ext, self.down(), self.ext.t);
        let field = ext.spec.field;
        let o = self.s_oracle.as_ref().expect("upstairs sequence exists");
        let k = self.ind.k[i] as usize;
        let (chart_r, chunks_r) = advance_to(&prev.chart_r, k, down)?;
        let (chart_s, chunks_s) = advance_to(&prev.chart_s, k_up, o)?;
        let inputs = json!({"i": i, "from": [prev.chart_r.step, prev.chart_s.step], "to": [k, k_up]});
        let mut records = Vec::new();

        let (p, q) = down.pair(i);
        let (pu, qu) = self.ds.up.as_ref().expect("upstairs sequence exists").pair(i);
        let u_prev = &prev.chart_r.backward[0];
        let v_prev = short_parameter(down, i - 1)?;
        let c_r = v_prev.pow(q as i64).div(&u_prev.pow(p as i64)).residue(down)?;
        let y_prev = v_prev.pullback(&ext.phi())?;
        let c_s = y_prev.pow(qu as i64).div(&prev.chart_s.backward[0].pow(pu as i64)).residue(o)?;
        match &prev.rho {
            Some(rho) => {
                let t_tilde = t / t.gcd(&pu);
                let expected = c_s.pow(t_tilde as i64).and_then(|c| rho.pow(-(p as i64)).map(|r| c.mul(&r)));
                records.push(CheckRecord::new(
                    "ladder.goodchunk-residue",
                    inputs.clone(),
                    json!({"c": c_r.to_canonical(), "c_up": c_s.to_canonical(), "rho": rho.to_canonical(),
                           "expected": expected.as_ref().map(FieldElem::to_canonical)}),
                    expected.as_ref() == Some(&c_r),
                ));
                let d = chunk_descend(t, &RatFunc::constant(field, Vars::XY, rho.clone())?, pu, qu, &c_s)?;
                let checks = d.checks();
                records.push(CheckRecord::new(
                    "ladder.descent",
                    inputs.clone(),
                    json!({"g": d.g, "stable": d.stable(), "c": d.c.to_canonical(), "checks": checks}),
                    all_pass(&checks) && d.stable() && d.c == c_r,
                ));
            }
            None => records.push(CheckRecord::new(
                "ladder.goodchunk-residue",
                inputs.clone(),
                json!({"error": "previous rung has no unit δ"}),
                false,
            )),
        }

        let mut sim = Vec::new();
        let mut ok = true;
        for (closed, chunks, start, oracle) in [
            (&chart_r, &chunks_r, &prev.chart_r, down as &dyn ValueOracle),
            (&chart_s, &chunks_s, &prev.chart_s, o as &dyn ValueOracle),
        ] {
            let trace = simulate(start, closed.step - start.step, oracle)?;
            let (same, w) = same_ring_from(start, chunks, &trace)?;
            ok &= same;
            sim.push(w);
        }
        records.push(CheckRecord::new("ladder.simulator", inputs, json!(sim), ok));
        Ok((chart_r, chart_s, records))
    }

    fn contradiction(&self, m: usize, rungs: &[Rung]) -> Result<LadderOutcome> {
        let (down, t) = (self.down(), self.ext.t);
        let field = self.ext.spec.field;
        let l = (1..=self.ind.len())
            .find(|&l| self.ind.index(l) == m)
            .ok_or_else(|| Error::Internal(format!("q_{m} != 1 but T_{m} is not independent")))?;
        let lv = self.ind.level(l);
        let (pb_up, qb_up) = reduce(t * lv.pbar, lv.qbar);
        let g = pb_up.gcd(&t);
        let inputs = json!({"M": m, "l": l, "t": t, "pbar": lv.pbar, "qbar": lv.qbar});
        let mut records = vec![CheckRecord::new(
            "ladder.contradiction-arithmetic",
            inputs.clone(),
            json!({"pbar_up": pb_up, "qbar_up": qb_up, "g": g}),
            g < t && t.gcd(&lv.qbar) != 1,
        )];

        let rung = &rungs[self.ind.index(l - 1)];
        let mut witness = None;
        if let Some(rho) = &rung.rho {
            let u = &rung.chart_r.backward[0];
            let v = admissible_parameter(down, &self.ind, l - 1)?;
            let c = v.pow(lv.qbar as i64).div(&u.pow(lv.pbar as i64)).residue(down)?;
            let t_tilde = t / g;
            let target = rho.pow(lv.pbar as i64).map(|r| c.mul(&r)).expect("nonzero rho");
            match u32::try_from(t_tilde).ok().and_then(|n| target.nth_root(n)) {
                Some(c_up) => {
                    let d = chunk_descend(t, &RatFunc::constant(field, Vars::XY, rho.clone())?, pb_up, qb_up, &c_up)?;
                    let checks = d.checks();
                    records.push(CheckRecord::new(
                        "ladder.contradiction-descent",
                        inputs,
                        json!({"c": c.to_canonical(), "c_up": c_up.to_canonical(), "g": d.g,
                               "u_monomial": d.u_monomial, "checks": checks}),
                        all_pass(&checks) && d.c == c && d.g == g && !d.stable(),
                    ));
                    witness = Some(Box::new(d));
                }
                None => records.push(CheckRecord::new(
                    "ladder.contradiction-descent",
                    inputs,
                    json!({"c": c.to_canonical(), "skipped": format!("no {t_tilde}-th root of {target} in {field}")}),
                    true,
                )),
            }
        }
        Ok(LadderOutcome::Contradiction { l, m, g, witness, records })
    }
}

/// Climb the rungs `R_{k_i} ⊂ S_{k'_i}` for `i < depth`, stopping at the
/// first `M` with `(t, q_M) != 1`.
pub fn ladder(ext: &MonomialExtension, depth: usize) -> Result<LadderCertificate> {
    let ds = build_dual_sequences(ext, depth)?;
    let ind = extract_independent(&ds.down)?;
    let s_oracle = match &ds.up {
        Some(_) => Some(ds.s_oracle()?),
        None => None,
    };
    let ctx = Ctx { ext, ds: &ds, ind, s_oracle };
    let down = ctx.down();
    let field = ext.spec.field;
    let last = ds.first_failure.map_or(depth - 1, |m| m - 1);

    let mut chart_r = Chart::initial(field, down.vars(), Vars::RChart);
    chart_r.certify_values(down)?;
    let mut chart_s = Chart::initial(field, Vars::XY, Vars::SChart);
    if let Some(o) = &ctx.s_oracle {
        chart_s.certify_values(o)?;
    }
    let mut rungs: Vec<Rung> = Vec::new();
    let mut k_up = 0usize;
    for i in 0..=last {
        let mut records = Vec::new();
        if i > 0 {
            let (pu, qu) = ds.up.as_ref().expect("upstairs sequence exists").pair(i);
            k_up += euclid_data(pu, qu)?.epsilon as usize;
            let (r, s, recs) = ctx.climb(&rungs[i - 1], i, k_up)?;
            chart_r = r;
            chart_s = s;
            records = recs;
        }
        rungs.push(ctx.rung(i, chart_r.clone(), chart_s.clone(), records)?);
    }

    let qprod_scan = (1..=depth).find(|&k| ext.t.gcd(&down.qprod(k)) != 1);
    let outcome = if let Some(r) = rungs.iter().find(|r| !r.pass) {
        LadderOutcome::Failed { rung: r.i }
    } else if let Some(m) = ds.first_failure {
        ctx.contradiction(m, &rungs)?
    } else if ext.spec.mode == Mode::Discrete {
        LadderOutcome::ToroidalCase5
    } else {
        LadderOutcome::ToroidalCase4
    };
    Ok(LadderCertificate {
        t: ext.t,
        depth,
        rungs,
        outcome,
        qprod_scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, GroundField};
    use crate::engine::ValuationSpec;

    fn ext(t: u64, delta: &str, spec: ValuationSpec) -> MonomialExtension {
        MonomialExtension::new(t, parse_poly(spec.field, Vars::XY, delta).unwrap(), spec).unwrap()
    }

    fn spec_a() -> ValuationSpec {
        ValuationSpec::simple(GroundField::Rationals, &[(3, 2), (5, 3)])
    }

    #[test]
    fn spec_a_t5_passes() {
        let cert = ladder(&ext(5, "1 + x", spec_a()), 2).unwrap();
        for r in &cert.rungs {
            assert!(r.pass, "rung {}: {:#?}", r.i, r.records.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        }
        assert!(matches!(cert.outcome, LadderOutcome::ToroidalCase4));
        let ratios: Vec<_> = cert.rungs.iter().map(|r| r.value_ratio.unwrap()).collect();
        assert_eq!(ratios, vec![(15, 2), (25, 3)]);
        assert_eq!(cert.qprod_scan, None);
    }

    #[test]
    fn spec_a_t2_contradiction() {
        let cert = ladder(&ext(2, "1", spec_a()), 2).unwrap();
        match &cert.outcome {
            LadderOutcome::Contradiction { l, m, g, records, witness } => {
                assert_eq!((*m, *l, *g), (1, 1, 1));
                assert!(all_pass(records), "{records:#?}");
                assert_eq!(witness.as_ref().unwrap().u_monomial, Some([1, 0]));
            }
            o => panic!("unexpected outcome {o:?}"),
        }
        assert_eq!(cert.qprod_scan, Some(1));
    }

    #[test]
    fn t1_is_trivial() {
        let cert = ladder(&ext(1, "1", spec_a()), 2).unwrap();
        assert!(cert.passes());
    }

    #[test]
    fn discrete_case_five() {
        let spec = ValuationSpec::simple(GroundField::Rationals, &[(2, 1), (3, 1)]).with_mode(Mode::Discrete);
        let cert = ladder(&ext(3, "1", spec), 2).unwrap();
        assert!(matches!(cert.outcome, LadderOutcome::ToroidalCase5), "{:?}", cert.outcome);
    }
}

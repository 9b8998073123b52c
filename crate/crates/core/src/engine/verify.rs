use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::expansion::{expand, value};
use super::independent::IndependentData;
use super::semigroup::Semigroup;
use super::sequence::JumpingSequence;
use crate::algebra::{rat_int, BivarPoly, GroundField, Rational, Vars};
use crate::error::{Error, Result};
use crate::report::{rs, CheckRecord};

/// Random polynomial of total degree at most `deg` with up to `max_terms`
/// terms and small nonzero coefficients.
pub fn random_poly(rng: &mut impl Rng, field: GroundField, vars: Vars, deg: u32, max_terms: usize) -> BivarPoly {
    let mut p = BivarPoly::zero(field, vars);
    let n = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..n {
        let a = rng.gen_range(0..=deg);
        let b = rng.gen_range(0..=deg - a);
        let c = match field {
            GroundField::Rationals => {
                let v: i64 = rng.gen_range(1..=5);
                if rng.gen_bool(0.5) { -v } else { v }
            }
            GroundField::Prime { p } => rng.gen_range(1..p.min(1 << 30)) as i64,
        };
        p.add_term(a, b, field.from_i64(c));
    }
    if p.is_zero() {
        p = BivarPoly::one(field, vars);
    }
    p
}

#[derive(Debug, Clone)]
pub struct GenSeqConfig {
    pub gamma_max: Rational,
    pub deg_bound: u32,
    pub samples: usize,
    pub seed: u64,
}

impl GenSeqConfig {
    pub fn new(gamma_max: Rational, deg_bound: u32, seed: u64) -> Self {
        GenSeqConfig {
            gamma_max,
            deg_bound,
            samples: 64,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenSeqReport {
    pub records: Vec<CheckRecord>,
    /// Effective value bound (strictly below the unknown next value).
    pub gamma_effective: Rational,
    pub certified: usize,
    pub skipped: usize,
}

impl GenSeqReport {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.pass).count()
    }
}

/// Check that the jumping polynomials generate the valuation up to
/// `gamma_max`: standard monomials realise exactly the value semigroup, and
/// test polynomials take values inside it.
pub fn verify_generating_sequence(js: &JumpingSequence, cfg: &GenSeqConfig) -> Result<GenSeqReport> {
    let n = js.depth();
    let lb = js.next_beta_lower_bound();
    // elements at or above the lower bound may involve the unknown β_{N+1}
    let gamma_eff = if cfg.gamma_max < lb { cfg.gamma_max.clone() } else { lb.clone() };
    let sg = Semigroup::new(&js.betas()[..=n], &gamma_eff)?;
    let mut records = Vec::new();

    // standard monomials with a_i < q_i enumerate the semigroup without repetition
    let mut digits = vec![0u64; n + 1];
    let mut seen: Vec<(Rational, Vec<u64>)> = Vec::new();
    loop {
        let rest = js.monomial_value(&digits);
        if rest <= gamma_eff {
            let mut a0 = 0u64;
            while rest.clone() + rat_int(a0 as i64) <= gamma_eff {
                let mut e = digits.clone();
                e[0] = a0;
                seen.push((js.monomial_value(&e), e));
                a0 += 1;
            }
        }
        // odometer over a_1..a_N
        let mut i = 1;
        while i <= n {
            digits[i] += 1;
            if digits[i] < js.q(i) {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i > n {
            break;
        }
    }
    seen.sort();
    let distinct = seen.windows(2).all(|w| w[0].0 != w[1].0);
    let values: Vec<Rational> = seen.iter().map(|s| s.0.clone()).collect();
    let elements = sg.elements();
    let covers = values == elements;
    records.push(CheckRecord::new(
        "genseq.semigroup-enumeration",
        json!({"gamma": rs(&gamma_eff), "generators": crate::report::rs_vec(&js.betas()[..=n])}),
        json!({"elements": elements.len(), "standard_monomials": seen.len()}),
        distinct && covers,
    ));

    let mut certified = 0usize;
    let mut skipped = 0usize;
    let mut mv_ok = true;
    for (g, e) in &seen {
        let mut m = BivarPoly::one(js.field(), js.vars());
        for (i, &a) in e.iter().enumerate() {
            m = m.mul(&js.t(i).pow(a));
        }
        let got = value(js, &m)?;
        certified += 1;
        if &got != g {
            mv_ok = false;
            records.push(CheckRecord::new("genseq.monomial-value", json!({"exps": e}),
                json!({"expected": rs(g), "got": rs(&got)}), false));
        }
    }
    records.push(CheckRecord::new(
        "genseq.monomial-values",
        json!({"count": seen.len()}),
        json!("every standard monomial evaluates to its predicted value"),
        mv_ok,
    ));

    let beta1 = js.beta(1).clone();
    let mut mono_ok = true;
    let mut mono_w = Vec::new();
    for a in 0..=cfg.deg_bound {
        for b in 0..=(cfg.deg_bound - a) {
            let f = BivarPoly::monomial(js.field(), js.vars(), js.field().one(), a, b);
            let want = rat_int(a as i64) + rat_int(b as i64) * &beta1;
            match value(js, &f) {
                Ok(v) => {
                    certified += 1;
                    let member = sg.contains(&v).unwrap_or(true);
                    if v != want || !member {
                        mono_ok = false;
                        mono_w.push(json!({"a": a, "b": b, "value": rs(&v), "expected": rs(&want)}));
                    }
                }
                Err(Error::InsufficientDepth { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    records.push(CheckRecord::new(
        "genseq.coordinate-monomials",
        json!({"deg_bound": cfg.deg_bound}),
        json!({"mismatches": mono_w}),
        mono_ok,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rand_ok = true;
    let mut rand_w = Vec::new();
    for _ in 0..cfg.samples {
        let f = random_poly(&mut rng, js.field(), js.vars(), cfg.deg_bound, 6);
        let exp = expand(js, &f)?;
        if exp.recompose(js) != f {
            rand_ok = false;
            rand_w.push(json!({"poly": f.to_string(), "issue": "expansion does not recompose"}));
            continue;
        }
        match value(js, &f) {
            Ok(v) => {
                certified += 1;
                if let Some(false) = sg.contains(&v) {
                    rand_ok = false;
                    rand_w.push(json!({"poly": f.to_string(), "value": rs(&v), "issue": "value outside semigroup"}));
                }
            }
            Err(Error::InsufficientDepth { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    records.push(CheckRecord::new(
        "genseq.random-polynomials",
        json!({"samples": cfg.samples, "seed": cfg.seed, "deg_bound": cfg.deg_bound}),
        json!({"issues": rand_w}),
        rand_ok,
    ));

    Ok(GenSeqReport {
        records,
        gamma_effective: gamma_eff,
        certified,
        skipped,
    })
}

/// Outcome of testing whether `H_k` can be dropped from the independent set.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimality {
    pub k: usize,
    /// `true` when `β̄_k` is not generated by the other values, i.e. `H_k` is needed.
    pub minimal: bool,
    /// Coefficients over `β̄_0..β̄_L` (zero at `k`) reproducing `β̄_k`.
    pub semigroup_witness: Option<Vec<u64>>,
    /// For `k = 0` with `p̄_1 = 1`: `H_0 · Δ = H_1^{q̄_1} - H_2` holds with a unit `Δ`.
    pub ring_witness: Option<RingWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingWitness {
    pub delta: BivarPoly,
    pub identity_holds: bool,
}

pub fn verify_minimality(
    js: &JumpingSequence,
    ind: &IndependentData,
    k: usize,
    search_bound: &Rational,
) -> Result<Minimality> {
    let big_l = ind.len();
    if k > big_l {
        return Err(Error::InvalidArgument(format!("level {k} beyond the {big_l} known levels")));
    }
    let target = ind.beta_bar(k);
    if search_bound < &target {
        return Err(Error::InvalidArgument(format!(
            "search bound {} is below the tested value {}",
            rs(search_bound),
            rs(&target)
        )));
    }
    let others: Vec<(usize, Rational)> = (0..=big_l)
        .filter(|&j| j != k)
        .map(|j| (j, ind.beta_bar(j)))
        .filter(|(_, b)| b <= search_bound)
        .collect();
    let gens: Vec<Rational> = others.iter().map(|o| o.1.clone()).collect();
    let semigroup_witness = if gens.is_empty() {
        None
    } else {
        Semigroup::new(&gens, &target)?.decompose(&target).map(|c| {
            let mut full = vec![0u64; big_l + 1];
            for ((j, _), ci) in others.iter().zip(c) {
                full[*j] = ci;
            }
            full
        })
    };
    let ring_witness = if k == 0 && big_l >= 1 && ind.level(1).pbar == 1 {
        if big_l < 2 {
            return Err(Error::insufficient(
                ind.index(1) + 1,
                "the redundancy identity needs the second independent polynomial",
            ));
        }
        let h0 = ind.h(js, 0);
        let lhs = ind.h(js, 1).pow(ind.level(1).qbar).sub(ind.h(js, 2));
        let delta = lhs.exact_divide(h0)?;
        let identity_holds = !delta.constant_term().is_zero() && h0.mul(&delta) == lhs;
        Some(RingWitness { delta, identity_holds })
    } else {
        None
    };
    Ok(Minimality {
        k,
        minimal: semigroup_witness.is_none(),
        semigroup_witness,
        ring_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, GroundField};
    use crate::engine::{build_jumping_sequence, extract_independent, ValuationSpec};

    #[test]
    fn spec_a_generating_sequence() {
        let js = build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &[(3, 2), (5, 3)])).unwrap();
        let rep = verify_generating_sequence(&js, &GenSeqConfig::new(rat(5, 1), 8, 0)).unwrap();
        assert_eq!(rep.failures(), 0, "{:#?}", rep.records);
    }

    #[test]
    fn redundant_h0() {
        let js = build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &[(1, 2), (1, 3)])).unwrap();
        let ind = extract_independent(&js).unwrap();
        let m = verify_minimality(&js, &ind, 0, &rat(10, 1)).unwrap();
        assert!(!m.minimal);
        assert_eq!(m.semigroup_witness, Some(vec![0, 2, 0]));
        assert!(m.ring_witness.unwrap().identity_holds);
    }
}

use num_integer::Integer;
use serde_json::json;

use super::sequence::JumpingSequence;
use crate::algebra::{euclid_data, rat_int, BivarPoly, FieldElem, Rational};
use crate::error::{Error, Result};
use crate::report::{rs, CheckRecord};

/// One independent level `l >= 1`: the index `i_l` with `q_{i_l} != 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentLevel {
    pub l: usize,
    pub index: usize,
    pub pbar: u64,
    pub qbar: u64,
    /// `Q̄_l`.
    pub qbar_prod: u64,
    pub beta_bar: Rational,
    pub kbar: u64,
}

/// The independent subsequence `H_l = T_{i_l}` and its numerical data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentData {
    pub levels: Vec<IndependentLevel>,
    /// `k_i` for `0 <= i <= N`.
    pub k: Vec<u64>,
}

impl IndependentData {
    /// Number `L` of known independent levels.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `i_l`, with `i_0 = 0`.
    pub fn index(&self, l: usize) -> usize {
        if l == 0 { 0 } else { self.levels[l - 1].index }
    }

    pub fn level(&self, l: usize) -> &IndependentLevel {
        &self.levels[l - 1]
    }

    pub fn qbar_prod(&self, l: usize) -> u64 {
        if l == 0 { 1 } else { self.levels[l - 1].qbar_prod }
    }

    pub fn beta_bar(&self, l: usize) -> Rational {
        if l == 0 { Rational::from_integer(1.into()) } else { self.levels[l - 1].beta_bar.clone() }
    }

    pub fn kbar(&self, l: usize) -> u64 {
        if l == 0 { 0 } else { self.levels[l - 1].kbar }
    }

    /// `H_l` as a polynomial.
    pub fn h<'a>(&self, js: &'a JumpingSequence, l: usize) -> &'a BivarPoly {
        js.t(self.index(l))
    }
}

pub fn extract_independent(js: &JumpingSequence) -> Result<IndependentData> {
    let n = js.depth();
    let mut k = vec![0u64];
    for i in 1..=n {
        let (p, q) = js.pair(i);
        k.push(k[i - 1] + euclid_data(p, q)?.epsilon);
    }
    let mut levels = Vec::new();
    let mut prev = 0usize;
    let mut qbar_prod = 1u64;
    let mut kbar = 0u64;
    for i in 1..=n {
        let (p, q) = js.pair(i);
        if q == 1 {
            continue;
        }
        let run: u64 = (prev + 1..i).map(|j| js.pair(j).0).sum();
        let pbar = run * q + p;
        qbar_prod *= q;
        kbar += euclid_data(pbar, q)?.epsilon;
        levels.push(IndependentLevel {
            l: levels.len() + 1,
            index: i,
            pbar,
            qbar: q,
            qbar_prod,
            beta_bar: js.beta(i).clone(),
            kbar,
        });
        prev = i;
    }
    Ok(IndependentData { levels, k })
}

/// Structural checks on the independent data.
pub fn check_barb_inequality(js: &JumpingSequence, ind: &IndependentData) -> Vec<CheckRecord> {
    let n = js.depth();
    let big_l = ind.len();
    let pairs = json!(js.spec().pairs);
    let mut out = Vec::new();

    let mut ok = true;
    let mut w = Vec::new();
    for l in 0..big_l {
        let next = ind.level(l + 1);
        let expect = if l == 0 {
            Rational::new(next.pbar.into(), next.qbar.into())
        } else {
            let cur = ind.level(l);
            rat_int(cur.qbar as i64) * &cur.beta_bar
                + Rational::new(next.pbar.into(), (next.qbar as u128 * cur.qbar_prod as u128).into())
        };
        ok &= expect == next.beta_bar;
        w.push(json!({"l": l + 1, "beta_bar": rs(&next.beta_bar), "recurrence": rs(&expect)}));
    }
    out.push(CheckRecord::new("barb-inequality.recurrence", pairs.clone(), json!(w), ok));

    let mut ok = true;
    let mut w = Vec::new();
    for l in 0..=big_l {
        let upto = if l < big_l { ind.index(l + 1) } else { n + 1 };
        for i in 0..upto {
            let v = rat_int(ind.qbar_prod(l) as i64) * js.beta(i);
            ok &= v.is_integer();
            w.push(json!({"l": l, "i": i, "value": rs(&v)}));
        }
    }
    out.push(CheckRecord::new("barb-inequality.integrality", pairs.clone(), json!(w), ok));

    let mut ok = true;
    let mut w = Vec::new();
    for l in 1..big_l {
        let cur = ind.level(l);
        let next = ind.level(l + 1);
        let a = rat_int(next.qbar as i64) * &next.beta_bar;
        let c = rat_int(cur.qbar as i64) * &cur.beta_bar;
        let good = a > next.beta_bar && next.beta_bar > c && c > cur.beta_bar;
        ok &= good;
        w.push(json!({"l": l, "chain": [rs(&a), rs(&next.beta_bar), rs(&c), rs(&cur.beta_bar)], "ok": good}));
    }
    out.push(CheckRecord::new("barb-inequality.chain", pairs.clone(), json!(w), ok));

    let mut ok = true;
    let mut w = Vec::new();
    for lv in &ind.levels {
        let g = lv.pbar.gcd(&lv.qbar);
        let kb_ok = lv.kbar == ind.k[lv.index];
        ok &= g == 1 && kb_ok;
        w.push(json!({"l": lv.l, "pbar": lv.pbar, "qbar": lv.qbar, "gcd": g,
            "kbar": lv.kbar, "k_index": ind.k[lv.index]}));
    }
    out.push(CheckRecord::new("barb-inequality.coprime", pairs, json!(w), ok));
    out
}

/// One summand `λ_i δ_i ∏ H_j^{e_j}` of a rewrite.
#[derive(Debug, Clone)]
pub struct RewriteTerm {
    pub source_index: usize,
    pub lambda: FieldElem,
    pub unit: BivarPoly,
    /// Exponents of `H_0..H_l`.
    pub h_exps: Vec<u64>,
}

/// `T_k = head + Σ terms`, where `head = T_{i_{l+1}}` (or `T_{N+1}` when the
/// next independent index lies beyond the supplied depth).
#[derive(Debug, Clone)]
pub struct HRewrite {
    pub k: usize,
    pub level: usize,
    pub head_index: usize,
    pub head_is_independent: bool,
    pub terms: Vec<RewriteTerm>,
}

impl HRewrite {
    /// Re-expand and compare with `T_k`.
    pub fn verify(&self, js: &JumpingSequence, ind: &IndependentData) -> bool {
        let mut acc = js.t(self.head_index).clone();
        for t in &self.terms {
            let mut m = t.unit.scale(&t.lambda);
            for (j, &e) in t.h_exps.iter().enumerate() {
                m = m.mul(&ind.h(js, j).pow(e));
            }
            acc = acc.add(&m);
        }
        &acc == js.t(self.k)
    }
}

/// Express `T_k`, `i_l < k <= i_{l+1}`, through `H_0..H_l` and the next
/// independent polynomial.
pub fn rewrite_in_independent(js: &JumpingSequence, ind: &IndependentData, k: usize) -> Result<HRewrite> {
    let n = js.depth();
    if k == 0 || k > n + 1 {
        return Err(Error::InvalidArgument(format!("index {k} outside 1..={}", n + 1)));
    }
    let level = (0..=ind.len()).rev().find(|&l| ind.index(l) < k).expect("i_0 = 0 < k");
    let (head_index, head_is_independent) = if level < ind.len() {
        (ind.index(level + 1), true)
    } else {
        (n + 1, false)
    };
    let mut terms = Vec::new();
    for i in k..head_index {
        let e = js.exps(i);
        let mut h_exps = vec![0u64; level + 1];
        for (j, &nj) in e.iter().enumerate() {
            if nj == 0 {
                continue;
            }
            let pos = (0..=level).find(|&l| ind.index(l) == j).ok_or_else(|| {
                Error::Internal(format!("T_{j} occurs in T_{} but is not independent", i + 1))
            })?;
            h_exps[pos] = nj;
        }
        terms.push(RewriteTerm {
            source_index: i,
            lambda: js.spec().lambdas[i - 1].clone(),
            unit: js.spec().units[i - 1].clone(),
            h_exps,
        });
    }
    Ok(HRewrite {
        k,
        level,
        head_index,
        head_is_independent,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroundField;
    use crate::engine::{build_jumping_sequence, ValuationSpec};

    #[test]
    fn spec_a_independent() {
        let js = build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &[(3, 2), (5, 3)])).unwrap();
        let ind = extract_independent(&js).unwrap();
        let pb: Vec<_> = ind.levels.iter().map(|l| (l.pbar, l.qbar, l.kbar)).collect();
        assert_eq!(pb, vec![(3, 2, 3), (5, 3, 7)]);
        assert_eq!(ind.k, vec![0, 3, 7]);
    }

    #[test]
    fn rewrite_through_discrete_step() {
        let js = build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &[(3, 2), (4, 1), (5, 3)])).unwrap();
        let ind = extract_independent(&js).unwrap();
        assert_eq!(ind.levels.iter().map(|l| l.index).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!((ind.level(2).pbar, ind.level(2).qbar), (17, 3));
        let rw = rewrite_in_independent(&js, &ind, 2).unwrap();
        assert_eq!(rw.head_index, 3);
        assert_eq!(rw.terms.len(), 1);
        assert_eq!(rw.terms[0].h_exps, vec![5, 0]);
        assert!(rw.verify(&js, &ind));
    }
}

use num_integer::Integer;
use serde_json::json;

use super::ext::MonomialExtension;
use crate::algebra::{reduce, BivarPoly, Rational, Vars};
use crate::blowup::{ScaledOracle, ValueOracle};
use crate::engine::{build_jumping_sequence, build_jumping_sequence_relaxed, JumpingSequence, ValuationSpec};
use crate::error::{Error, Result};
use crate::report::{rs, CheckRecord};

/// Jumping sequences of `ν` on `R` and of `ν*` on `S`, side by side.
#[derive(Debug, Clone)]
pub struct DualSequences {
    pub t: u64,
    pub depth: usize,
    pub down: JumpingSequence,
    /// Built from the first `compared` pairs; `None` when that is zero.
    pub up: Option<JumpingSequence>,
    /// Number of pairs over which the identities are compared.
    pub compared: usize,
    /// Smallest `M <= depth` with `gcd(t, q_M) != 1`.
    pub first_failure: Option<usize>,
}

impl DualSequences {
    /// `ν* = ν̃ / t` on `S`, when the upstairs polynomials are standard.
    pub fn s_oracle(&self) -> Result<ScaledOracle<'_>> {
        let up = self
            .up
            .as_ref()
            .ok_or_else(|| Error::insufficient(1, "no upstairs pairs are available"))?;
        if !up.is_standard() {
            return Err(Error::Unsupported(
                "upstairs jumping polynomials are not monic in y (delta depends on y); values on S cannot be certified"
                    .into(),
            ));
        }
        Ok(ScaledOracle {
            inner: up,
            scale: Rational::new(1.into(), self.t.into()),
        })
    }
}

/// First index `M` in `1..=depth` with `gcd(t, q_M) != 1`.
pub fn first_gcd_failure(js: &JumpingSequence, t: u64, depth: usize) -> Option<usize> {
    (1..=depth.min(js.depth())).find(|&i| t.gcd(&js.q(i)) != 1)
}

/// Upstairs pairs `reduce(t p_i, q_i)`, scalars `λ_i` and units
/// `(δ_i ∘ φ) δ^{n_{i,0}}` for `i <= upto`.
pub fn upstairs_spec(ext: &MonomialExtension, down: &JumpingSequence, upto: usize) -> Result<ValuationSpec> {
    let phi = ext.phi();
    let field = ext.spec.field;
    let mut pairs = Vec::new();
    let mut units = Vec::new();
    for i in 1..=upto {
        let (p, q) = down.pair(i);
        pairs.push(reduce(ext.t * p, q));
        let base_unit = down.spec().units[i - 1].compose(&phi)?;
        units.push(base_unit.mul(&ext.delta.pow(down.exps(i)[0])));
    }
    Ok(ValuationSpec {
        field,
        vars: Vars::XY,
        pairs,
        lambdas: ext.spec.lambdas[..upto].to_vec(),
        units,
        mode: ext.spec.mode,
    })
}

pub fn build_dual_sequences(ext: &MonomialExtension, k: usize) -> Result<DualSequences> {
    let down = build_jumping_sequence(&ext.spec)?;
    if k == 0 || k > down.depth() {
        return Err(Error::insufficient(k, format!("depth {k} outside 1..={}", down.depth())));
    }
    let first_failure = first_gcd_failure(&down, ext.t, k);
    let compared = first_failure.map_or(k, |m| m - 1);
    let up = if compared == 0 {
        None
    } else {
        Some(build_jumping_sequence_relaxed(&upstairs_spec(ext, &down, compared)?)?)
    };
    Ok(DualSequences {
        t: ext.t,
        depth: k,
        down,
        up,
        compared,
        first_failure,
    })
}

/// The identities relating the two sequences.
pub fn dual_checks(ext: &MonomialExtension, ds: &DualSequences) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let inputs = json!({"t": ext.t, "delta": ext.delta.to_string(), "pairs": ext.spec.pairs, "compared": ds.compared});
    let Some(up) = &ds.up else {
        return Ok(out);
    };
    let phi = ext.phi();
    let down = &ds.down;
    let kk = ds.compared;

    let mut ok = true;
    let mut w = Vec::new();
    for i in 1..=kk + 1 {
        let pulled: BivarPoly = down.t(i).compose(&phi)?;
        let same = &pulled == up.t(i);
        ok &= same;
        w.push(json!({"i": i, "upstairs": up.t(i).to_string(), "equal": same}));
    }
    out.push(CheckRecord::new("dual.polynomials", inputs.clone(), json!(w), ok));

    let mut ok = true;
    let mut w = Vec::new();
    for i in 1..=kk {
        let (p, q) = down.pair(i);
        let (pu, qu) = up.pair(i);
        let good = qu == q && pu == ext.t * p;
        ok &= good;
        w.push(json!({"i": i, "down": [p, q], "up": [pu, qu]}));
    }
    out.push(CheckRecord::new("dual.pairs", inputs.clone(), json!(w), ok));

    let mut ok = true;
    let mut w = Vec::new();
    for i in 1..=kk {
        let nd = down.exps(i);
        let nu = up.exps(i);
        let good = nu[0] == ext.t * nd[0] && nu[1..] == nd[1..];
        ok &= good;
        w.push(json!({"i": i, "down": nd, "up": nu}));
    }
    out.push(CheckRecord::new("dual.exponents", inputs.clone(), json!(w), ok));

    let lambdas_ok = up.spec().lambdas[..] == down.spec().lambdas[..kk];
    out.push(CheckRecord::new(
        "dual.lambdas",
        inputs.clone(),
        json!(up.spec().lambdas.iter().map(|l| l.to_canonical()).collect::<Vec<_>>()),
        lambdas_ok,
    ));

    if up.is_standard() {
        let nu_star = ds.s_oracle()?;
        let x = BivarPoly::var(ext.spec.field, Vars::XY, 0);
        let vx = nu_star.value(&x)?;
        let mut ok = vx == Rational::new(1.into(), ext.t.into());
        let mut w = vec![json!({"x": rs(&vx)})];
        let vu = nu_star.value(&phi[0])?;
        ok &= vu == Rational::from_integer(1.into());
        w.push(json!({"u": rs(&vu)}));
        for i in 1..=kk {
            let v = nu_star.value(up.t(i))?;
            ok &= &v == down.beta(i);
            w.push(json!({"i": i, "nu_star": rs(&v), "beta": rs(down.beta(i))}));
        }
        out.push(CheckRecord::new("dual.normalization", inputs, json!(w), ok));
    }
    Ok(out)
}

/// In the discrete case `ν*(x) = 1/t` generates the values of all `T'_i`.
pub fn discrete_checks(ext: &MonomialExtension, ds: &DualSequences) -> Result<CheckRecord> {
    let nu_star = ds.s_oracle()?;
    let up = ds.up.as_ref().expect("s_oracle implies an upstairs sequence");
    let t = Rational::from_integer(ext.t.into());
    let mut values = Vec::new();
    for i in 0..=ds.compared {
        values.push(nu_star.value(up.t(i))?);
    }
    let multiples = values.iter().all(|v| (v * &t).is_integer());
    let attained = values.iter().any(|v| v * &t == Rational::from_integer(1.into()));
    Ok(CheckRecord::new(
        "dual.discrete-generator",
        json!({"t": ext.t, "compared": ds.compared}),
        json!({"values": values.iter().map(rs).collect::<Vec<_>>(), "multiples": multiples, "attained": attained}),
        multiples && attained,
    ))
}

use std::path::Path;

use serde_json::{json, Value};

use genseq_core::algebra::{euclid_data, parse_poly, parse_rational, BivarPoly, Vars};
use genseq_core::blowup::{
    advance_to, chunk_equivalence, monoidal_checks, monoidal_sequence, same_ring, single_quadratic_transform, Chart,
};
use genseq_core::engine::{
    build_jumping_sequence, check_b_inequality, check_barb_inequality, expand, extract_independent, initial_term,
    verify_generating_sequence, verify_minimality, GenSeqConfig, IndependentData, JumpingSequence, Mode,
    ValuationSpec,
};
use genseq_core::extension::{
    build_dual_sequences, classify_toroidal_form, discrete_checks, dual_checks, ladder, LadderOutcome,
    MonomialExtension, ValuationType,
};
use genseq_core::report::{all_pass, rs, rs_vec, CheckRecord};
use genseq_core::Error;

use crate::{Cli, Command, KindArg, EXIT_CONTRADICTION, EXIT_FAILED, EXIT_MATH, EXIT_OK, EXIT_USAGE};

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(Value, u8), Failure>;

pub fn run(cli: &Cli) -> (Value, u8) {
    let res = match &cli.command {
        Command::Genseq { spec } => genseq(cli, spec),
        Command::Eval { spec, poly } => eval(cli, spec, poly),
        Command::Expand { spec, poly } => expand_cmd(cli, spec, poly),
        Command::Euclid { p, q } => euclid_data(*p, *q)
            .map(|d| (serde_json::to_value(d).expect("serializes"), EXIT_OK))
            .map_err(Failure::from),
        Command::Blowup { spec, steps } => blowup(cli, spec, *steps),
        Command::Monoidal { spec, level } => monoidal(cli, spec, *level),
        Command::Dual { ext } => dual(cli, ext),
        Command::Ladder { ext } => ladder_cmd(cli, ext),
        Command::Verify { spec } => verify(cli, spec),
        Command::Classify { ext, kind } => classify(cli, ext, *kind),
    };
    match res {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => (json!({"error": {"kind": "usage", "message": msg}}), EXIT_USAGE),
        Err(Failure::Core(e)) => {
            let code = match e {
                Error::Parse(_) | Error::InvalidSpec(_) | Error::InvalidArgument(_) => EXIT_USAGE,
                _ => EXIT_MATH,
            };
            let mut err = json!({"kind": e.kind(), "message": e.to_string()});
            if let Error::InsufficientDepth { needed, .. } = &e {
                err["needed"] = json!(needed);
            }
            (json!({"error": err}), code)
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: invalid JSON: {e}", path.display())))
}

fn load_spec(cli: &Cli, path: &Path) -> Result<ValuationSpec, Failure> {
    let spec = ValuationSpec::from_json(&read_json(path)?)?;
    Ok(match cli.depth {
        Some(d) => spec.truncated(d)?,
        None => spec,
    })
}

fn load_ext(path: &Path) -> Result<MonomialExtension, Failure> {
    Ok(MonomialExtension::from_json(&read_json(path)?)?)
}

fn ext_depth(cli: &Cli, ext: &MonomialExtension) -> usize {
    cli.depth.unwrap_or(ext.spec.depth())
}

fn status(records: &[CheckRecord]) -> u8 {
    if all_pass(records) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn independent_json(ind: &IndependentData) -> Value {
    json!(ind
        .levels
        .iter()
        .map(|l| json!({"l": l.l, "index": l.index, "pbar": l.pbar, "qbar": l.qbar, "Qbar": l.qbar_prod,
                        "beta_bar": rs(&l.beta_bar), "kbar": l.kbar}))
        .collect::<Vec<_>>())
}

fn genseq(cli: &Cli, path: &Path) -> Outcome {
    let spec = load_spec(cli, path)?;
    let js = build_jumping_sequence(&spec)?;
    let ind = extract_independent(&js)?;
    let mut records = check_b_inequality(&js);
    records.extend(check_barb_inequality(&js, &ind));
    let n = js.depth();
    let report = json!({
        "spec": spec.to_json(),
        "T": js.polys().iter().map(BivarPoly::to_string).collect::<Vec<_>>(),
        "beta": rs_vec(js.betas()),
        "beta_next_lower_bound": rs(&js.next_beta_lower_bound()),
        "Q": (0..=n).map(|i| js.qprod(i)).collect::<Vec<_>>(),
        "n": (1..=n).map(|i| js.exps(i).to_vec()).collect::<Vec<_>>(),
        "k": ind.k,
        "independent": independent_json(&ind),
        "checks": records,
        "pass": all_pass(&records),
    });
    Ok((report, status(&records)))
}

fn parse_in(js: &JumpingSequence, s: &str) -> Result<BivarPoly, Failure> {
    Ok(parse_poly(js.field(), js.vars(), s)?)
}

fn eval(cli: &Cli, path: &Path, poly: &str) -> Outcome {
    let js = build_jumping_sequence(&load_spec(cli, path)?)?;
    let f = parse_in(&js, poly)?;
    let it = initial_term(&js, &f)?;
    Ok((
        json!({"poly": f.to_string(), "value": rs(&it.value),
               "initial_term": {"coeff": it.term.coeff.to_canonical(), "exps": it.term.exps}}),
        EXIT_OK,
    ))
}

fn expand_cmd(cli: &Cli, path: &Path, poly: &str) -> Outcome {
    let js = build_jumping_sequence(&load_spec(cli, path)?)?;
    let f = parse_in(&js, poly)?;
    let e = expand(&js, &f)?;
    let back = e.recompose(&js) == f;
    Ok((
        json!({"poly": f.to_string(), "expansion": e.to_json(&js), "recomposes": back}),
        if back { EXIT_OK } else { EXIT_FAILED },
    ))
}

fn blowup(cli: &Cli, path: &Path, steps: Option<usize>) -> Outcome {
    let spec = load_spec(cli, path)?;
    let js = build_jumping_sequence(&spec)?;
    let ind = extract_independent(&js)?;
    let k_last = *ind.k.last().expect("k_0 exists") as usize;
    let steps = steps.unwrap_or(k_last);
    let mut chart = Chart::initial(js.field(), js.vars(), Vars::RChart);
    chart.certify_values(&js)?;
    let mut trace = Vec::new();
    for _ in 0..steps {
        chart = single_quadratic_transform(&chart, &js)?;
        trace.push(json!({
            "step": chart.step,
            "values": chart.values.iter().map(|v| v.as_ref().map(rs)).collect::<Vec<_>>(),
            "free": chart.free(),
            "residue": chart.last_residue.as_ref().map(|c| c.to_canonical()),
        }));
    }

    // closed-form chunks against the single-step chain at every k_i in range
    let mut records = Vec::new();
    let mut closed = Chart::initial(js.field(), js.vars(), Vars::RChart);
    closed.certify_values(&js)?;
    let mut stepped = closed.clone();
    for &k in ind.k.iter().skip(1).filter(|&&k| k as usize <= steps) {
        let (c, _) = advance_to(&closed, k as usize, &js)?;
        while stepped.step < c.step {
            stepped = single_quadratic_transform(&stepped, &js)?;
        }
        let (same, w) = same_ring(&c, &stepped)?;
        records.push(CheckRecord::new("blowup.closed-form", json!({"k": k}), w, same));
        closed = c;
    }
    for i in 1..=js.depth() {
        let (p, q) = js.pair(i);
        records.extend(chunk_equivalence(p, q, &spec.lambdas[i - 1], Vars::RChart)?);
    }
    Ok((json!({"trace": trace, "checks": records, "pass": all_pass(&records)}), status(&records)))
}

fn monoidal(cli: &Cli, path: &Path, level: Option<usize>) -> Outcome {
    let js = build_jumping_sequence(&load_spec(cli, path)?)?;
    let ind = extract_independent(&js)?;
    let levels = monoidal_sequence(&js, &ind, level.unwrap_or(ind.len()))?;
    let records = monoidal_checks(&levels);
    let summary: Vec<Value> = levels
        .iter()
        .map(|lv| {
            json!({
                "l": lv.l,
                "kbar": lv.chart.step,
                "u_value": rs(&lv.u_value),
                "unit_exponents": lv.units.iter().map(|u| u.exponent).collect::<Vec<_>>(),
                "chart": lv.chart.to_json(),
            })
        })
        .collect();
    Ok((json!({"levels": summary, "checks": records, "pass": all_pass(&records)}), status(&records)))
}

fn dual(cli: &Cli, path: &Path) -> Outcome {
    let ext = load_ext(path)?;
    let ds = build_dual_sequences(&ext, ext_depth(cli, &ext))?;
    let mut records = dual_checks(&ext, &ds)?;
    if ext.spec.mode == Mode::Discrete && ds.up.is_some() {
        records.push(discrete_checks(&ext, &ds)?);
    }
    let upstairs = ds.up.as_ref().map(|up| {
        json!({
            "T": up.polys().iter().map(BivarPoly::to_string).collect::<Vec<_>>(),
            "pairs": (1..=up.depth()).map(|i| up.pair(i)).collect::<Vec<_>>(),
            "n": (1..=up.depth()).map(|i| up.exps(i).to_vec()).collect::<Vec<_>>(),
            "standard": up.is_standard(),
        })
    });
    let report = json!({
        "t": ext.t,
        "depth": ds.depth,
        "compared": ds.compared,
        "first_failure": ds.first_failure,
        "upstairs": upstairs,
        "checks": records,
        "pass": all_pass(&records),
    });
    Ok((report, status(&records)))
}

fn ladder_cmd(cli: &Cli, path: &Path) -> Outcome {
    let ext = load_ext(path)?;
    let cert = ladder(&ext, ext_depth(cli, &ext))?;
    let code = match cert.outcome {
        LadderOutcome::Contradiction { .. } => EXIT_CONTRADICTION,
        LadderOutcome::Failed { .. } => EXIT_FAILED,
        _ => EXIT_OK,
    };
    Ok((cert.to_json(), code))
}

fn verify(cli: &Cli, path: &Path) -> Outcome {
    let js = build_jumping_sequence(&load_spec(cli, path)?)?;
    let ind = extract_independent(&js)?;
    let gamma = parse_rational(&cli.gamma_max)?;
    let cfg = GenSeqConfig::new(gamma, cli.deg_bound, cli.seed);
    let rep = verify_generating_sequence(&js, &cfg)?;
    let bound = (0..=ind.len()).map(|l| ind.beta_bar(l)).max().expect("level 0 exists");
    let mut minimality = Vec::new();
    for k in 0..=ind.len() {
        let m = verify_minimality(&js, &ind, k, &bound)?;
        minimality.push(json!({
            "k": m.k,
            "minimal": m.minimal,
            "semigroup_witness": m.semigroup_witness,
            "ring_witness": m.ring_witness.map(|w| json!({"delta": w.delta.to_string(), "identity_holds": w.identity_holds})),
        }));
    }
    let report = json!({
        "gamma_max": cli.gamma_max,
        "gamma_effective": rs(&rep.gamma_effective),
        "deg_bound": cli.deg_bound,
        "seed": cli.seed,
        "certified": rep.certified,
        "skipped": rep.skipped,
        "checks": rep.records,
        "minimality": minimality,
        "pass": rep.failures() == 0,
    });
    Ok((report, if rep.failures() == 0 { EXIT_OK } else { EXIT_FAILED }))
}

fn classify(cli: &Cli, path: &Path, kind: Option<KindArg>) -> Outcome {
    let ext = load_ext(path)?;
    let kind = match kind {
        Some(KindArg::Divisorial) => ValuationType::Divisorial,
        Some(KindArg::RankTwo) => ValuationType::RankTwo,
        Some(KindArg::RationalRankTwo) => ValuationType::RationalRankTwo,
        Some(KindArg::NonDiscrete) => ValuationType::NonDiscrete,
        Some(KindArg::Discrete) => ValuationType::Discrete,
        None if ext.spec.mode == Mode::Discrete => ValuationType::Discrete,
        None => ValuationType::NonDiscrete,
    };
    if !matches!(kind, ValuationType::NonDiscrete | ValuationType::Discrete) {
        let form = classify_toroidal_form(kind, None, None, ext.t)?;
        return Ok((json!({"form": form}), EXIT_OK));
    }
    let cert = ladder(&ext, ext_depth(cli, &ext))?;
    match &cert.outcome {
        LadderOutcome::Contradiction { .. } => {
            return Ok((json!({"form": null, "ladder": cert.outcome.to_json()}), EXIT_CONTRADICTION))
        }
        LadderOutcome::Failed { .. } => return Ok((json!({"form": null, "ladder": cert.outcome.to_json()}), EXIT_FAILED)),
        _ => {}
    }
    let js = build_jumping_sequence(&ext.spec)?;
    let ind = extract_independent(&js)?;
    let pbar1 = (!ind.is_empty()).then(|| ind.level(1).pbar);
    let form = classify_toroidal_form(kind, Some(&cert.outcome), pbar1, ext.t)?;
    Ok((json!({"form": form, "ladder": cert.outcome.to_json()}), EXIT_OK))
}

use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use genseq_core::algebra::{BivarPoly, GroundField, Vars};
use genseq_core::blowup::{
    advance_to, chunk_equivalence, monoidal_checks, monoidal_sequence, same_ring, single_quadratic_transform, Chart,
    RatFunc,
};
use genseq_core::engine::{build_jumping_sequence, extract_independent, random_poly, ValuationSpec};

fn coprime(max: u64) -> impl Strategy<Value = (u64, u64)> {
    (1..=max, 1..=max).prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
}

fn pairs() -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec(coprime(6), 1..=3).prop_filter("Q_N cap", |ps| ps.iter().map(|p| p.1).product::<u64>() <= 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn chunks_match_single_transforms((p, q) in coprime(9), c in prop::sample::select(vec![1i64, 2, -3, 7]), prime in any::<bool>()) {
        let f = if prime { GroundField::prime(101).unwrap() } else { GroundField::Rationals };
        for r in chunk_equivalence(p, q, &f.from_i64(c), Vars::RChart).unwrap() {
            prop_assert!(r.pass, "({p},{q}) c={c}: {} failed: {}", r.check, r.witness);
        }
    }

    #[test]
    fn closed_form_equals_stepping(ps in pairs()) {
        let f = GroundField::Rationals;
        let js = build_jumping_sequence(&ValuationSpec::simple(f, &ps)).unwrap();
        let ind = extract_independent(&js).unwrap();
        let mut start = Chart::initial(f, js.vars(), Vars::RChart);
        start.certify_values(&js).unwrap();
        let target = *ind.k.last().unwrap() as usize;
        let (closed, chunks) = advance_to(&start, target, &js).unwrap();
        prop_assert_eq!(chunks.len(), ps.len());
        let mut stepped = start.clone();
        for _ in 0..target {
            stepped = single_quadratic_transform(&stepped, &js).unwrap();
        }
        let (same, w) = same_ring(&closed, &stepped).unwrap();
        prop_assert!(same, "{}", w);
    }

    /// The truncated local analysis agrees with the expanded pullback.
    #[test]
    fn germs_agree_with_pullbacks(ps in pairs(), steps in 1..=8usize, seed in any::<u64>(), exps in prop::collection::vec(-2..=2i64, 1..=3)) {
        let f = GroundField::Rationals;
        let js = build_jumping_sequence(&ValuationSpec::simple(f, &ps)).unwrap();
        let last = *extract_independent(&js).unwrap().k.last().unwrap() as usize;
        let mut chart = Chart::initial(f, js.vars(), Vars::RChart);
        chart.certify_values(&js).unwrap();
        for _ in 0..steps.min(last) {
            chart = single_quadratic_transform(&chart, &js).unwrap();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = RatFunc::one(f, js.vars());
        for e in exps {
            let p = random_poly(&mut rng, f, js.vars(), 4, 4);
            if !p.is_zero() {
                g = g.mul(&RatFunc::from_poly(&p).unwrap().pow(e));
            }
        }
        g = g.mul(&chart.backward[1]);
        let full = chart.pull(&g).unwrap();
        let germ = g.pullback_germ(&chart.forward).unwrap();
        prop_assert_eq!(germ.monomial(), full.monomial());
        prop_assert_eq!(germ.in_local_ring(), full.in_local_ring());
        prop_assert_eq!(germ.is_unit(), full.is_unit());
        prop_assert_eq!(germ.in_max_ideal(), full.in_max_ideal());
        prop_assert_eq!(germ.monomial_times_unit(), full.monomial_times_unit());
        prop_assert_eq!(germ.order_on_second_axis(), full.order_on_second_axis());
        prop_assert_eq!(germ.is_transversal_parameter(), full.is_transversal_parameter());
    }

    #[test]
    fn monoidal_levels_hold(ps in pairs()) {
        let js = build_jumping_sequence(&ValuationSpec::simple(GroundField::Rationals, &ps)).unwrap();
        let ind = extract_independent(&js).unwrap();
        let levels = monoidal_sequence(&js, &ind, ind.len()).unwrap();
        for r in monoidal_checks(&levels) {
            prop_assert!(r.pass, "{} failed: {}", r.check, r.witness);
        }
    }
}

#[test]
fn charts_pull_back_coordinates() {
    let f = GroundField::Rationals;
    let js = build_jumping_sequence(&ValuationSpec::simple(f, &[(3, 2), (5, 3)])).unwrap();
    let mut chart = Chart::initial(f, js.vars(), Vars::RChart);
    chart.certify_values(&js).unwrap();
    for _ in 0..7 {
        chart = single_quadratic_transform(&chart, &js).unwrap();
        for i in 0..2 {
            let back = chart.pull(&chart.backward[i]).unwrap();
            let (n, d) = back.numer_denom();
            assert_eq!(n, d.mul(&BivarPoly::var(f, Vars::RChart, i)), "step coordinate {i}");
        }
    }
}

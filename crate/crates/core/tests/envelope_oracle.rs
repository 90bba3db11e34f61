//! Envelope construction checked against the independent brute-force oracle.

mod common;

use common::{oracle_min, raw_to_oracle, raw_to_table, seeded_rng, Q};
use proptest::prelude::*;

use tradeoff_core::envelope::{argmin_at, build_envelope};
use tradeoff_core::invariance::exceptional_set;
use tradeoff_core::scalar::{ExactScalar, Scalar};

/// Dense rational probe grid `k * 3 / 999` for `k = 0..count`, plus every
/// breakpoint of the envelope and points just left/right of each.
fn probe_alphas(env: &tradeoff_core::ConcavePLFunction<ExactScalar>, count: i64) -> Vec<Q> {
    let mut alphas: Vec<Q> = (0..count).map(|k| Q::new(3 * k as i128, 999)).collect();
    for b in env.breakpoints() {
        let n: i128 = b.numer().try_into().expect("small breakpoint numerator");
        let d: i128 = b.denom().try_into().expect("small breakpoint denominator");
        let bq = Q::new(n, d);
        alphas.push(bq);
        alphas.push(bq.add(Q::new(1, 100_000)));
        if Q::int(0).lt(&bq) {
            alphas.push(bq.sub(Q::new(1, 100_000)));
        }
    }
    alphas
}

fn check_table_against_oracle(raw: &[common::RawCandidate], probes: i64) {
    let table = raw_to_table(raw);
    let oracle = raw_to_oracle(raw);
    let env = build_envelope(&table).unwrap();
    for alpha_q in probe_alphas(&env, probes) {
        let alpha = alpha_q.to_exact();
        let (want_value, want_argmin) = oracle_min(&oracle, &[alpha_q]);
        let got = env.evaluate(&alpha).unwrap();
        assert!(
            got.value.is_eq(&want_value.to_exact()),
            "envelope value {} != oracle {} at alpha = {}",
            got.value,
            want_value.to_exact(),
            alpha
        );
        let got_argmin = argmin_at(&table, &alpha).unwrap();
        assert_eq!(
            got_argmin, want_argmin,
            "argmin mismatch at alpha = {alpha}"
        );
    }
    // exceptional set equals the brute-force breakpoint scan
    let found = exceptional_set(&table, &env).unwrap();
    let mut brute: Vec<ExactScalar> = Vec::new();
    let mut boundary_candidates: Vec<ExactScalar> = vec![ExactScalar::zero()];
    boundary_candidates.extend(env.breakpoints().iter().cloned());
    for alpha in boundary_candidates {
        let n: i128 = alpha.numer().try_into().unwrap();
        let d: i128 = alpha.denom().try_into().unwrap();
        let (lo, hi) = common::oracle_g_spread(&oracle, &[Q::new(n, d)], 0);
        if lo.lt(&hi) {
            brute.push(alpha);
        }
    }
    assert_eq!(found.len(), brute.len());
    for (r, b) in found.iter().zip(&brute) {
        assert!(r.alpha.is_eq(b));
    }
}

#[test]
fn eval_h_matches_naive_term_by_term_evaluation() {
    let mut rng = seeded_rng(0x11A);
    for _ in 0..10 {
        let raw = common::random_raw(&mut rng, 10, 1);
        let table = raw_to_table(&raw);
        let oracle = raw_to_oracle(&raw);
        for k in 0..50i64 {
            let alpha_q = Q::new(7 * k as i128, 353);
            let alpha = alpha_q.to_exact();
            for (i, (f, g)) in oracle.iter().enumerate() {
                // naive evaluator: f + alpha * g, recomputed term by term in
                // the independent arithmetic
                let naive = f.add(alpha_q.mul(g[0]));
                let got = table.eval_h(i, std::slice::from_ref(&alpha)).unwrap();
                assert!(got.finite().unwrap().is_eq(&naive.to_exact()));
            }
        }
    }
}

#[test]
fn random_tables_match_oracle() {
    let mut rng = seeded_rng(0xE27);
    for round in 0..20 {
        let n = 1 + (round * 7) % 30;
        let raw = common::random_raw(&mut rng, n, 1);
        check_table_against_oracle(&raw, 200);
    }
}

#[test]
fn tables_with_duplicates_and_ties_match_oracle() {
    // hand-picked shapes: duplicate rows, slope ties with different
    // intercepts, and three concurrent lines
    let shapes: Vec<Vec<common::RawCandidate>> = vec![
        vec![((1, 2), vec![(-1, 1)]), ((1, 2), vec![(-1, 1)])],
        vec![
            ((0, 1), vec![(2, 1)]),
            ((1, 1), vec![(2, 1)]),
            ((3, 1), vec![(-1, 1)]),
        ],
        vec![
            ((0, 1), vec![(0, 1)]),
            ((1, 2), vec![(-1, 1)]),
            ((1, 1), vec![(-2, 1)]),
            ((2, 1), vec![(-4, 1)]),
        ],
    ];
    for raw in &shapes {
        check_table_against_oracle(raw, 150);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn envelope_equals_oracle_on_arbitrary_tables(
        raw in prop::collection::vec(
            ((-50i64..=50, 1i64..=8), prop::collection::vec((-50i64..=50, 1i64..=8), 1)),
            1..12,
        )
    ) {
        let table = raw_to_table(&raw);
        let oracle = raw_to_oracle(&raw);
        let env = build_envelope(&table).unwrap();
        for alpha_q in probe_alphas(&env, 40) {
            let alpha = alpha_q.to_exact();
            let (want, _) = oracle_min(&oracle, &[alpha_q]);
            let got = env.value_at(&alpha).unwrap();
            prop_assert!(got.is_eq(&want.to_exact()));
        }
    }

    #[test]
    fn slopes_strictly_decrease_and_values_are_concave(
        raw in prop::collection::vec(
            ((-50i64..=50, 1i64..=8), prop::collection::vec((-50i64..=50, 1i64..=8), 1)),
            1..12,
        )
    ) {
        let table = raw_to_table(&raw);
        let env = build_envelope(&table).unwrap();
        let slopes = env.segment_slopes();
        for w in slopes.windows(2) {
            prop_assert!(w[1].is_lt(&w[0]));
        }
        // midpoint concavity on a few pairs, exactly
        let two = ExactScalar::from_int(2);
        let probes: Vec<ExactScalar> = (0..8).map(|k| ExactScalar::from_ratio(k, 3)).collect();
        for a in &probes {
            for b in &probes {
                let mid = (a.clone() + b.clone()) / two.clone();
                let lhs = env.value_at(&mid).unwrap() * two.clone();
                let rhs = env.value_at(a).unwrap() + env.value_at(b).unwrap();
                prop_assert!(lhs.is_ge(&rhs));
            }
        }
    }

    #[test]
    fn active_segments_are_argmin_in_their_interior(
        raw in prop::collection::vec(
            ((-30i64..=30, 1i64..=6), prop::collection::vec((-30i64..=30, 1i64..=6), 1)),
            1..10,
        )
    ) {
        let table = raw_to_table(&raw);
        let env = build_envelope(&table).unwrap();
        let two = ExactScalar::from_int(2);
        for seg in 0..env.segment_count() {
            // a point interior to the segment
            let lo = if seg == 0 {
                ExactScalar::zero()
            } else {
                env.breakpoints()[seg - 1].clone()
            };
            let alpha = if seg == env.segment_count() - 1 {
                lo.clone() + ExactScalar::one()
            } else {
                (lo.clone() + env.breakpoints()[seg].clone()) / two.clone()
            };
            let argmin = argmin_at(&table, &alpha).unwrap();
            prop_assert_eq!(&argmin, &env.active()[seg]);
            // segment-slope identity: every interior minimizer shares the slope
            let slope = &env.segment_slopes()[seg];
            for &i in &argmin {
                prop_assert!(table.candidates()[i].g[0].is_eq(slope));
            }
        }
    }

    #[test]
    fn vertex_ties_span_different_slopes_only_at_breakpoints(
        raw in prop::collection::vec(
            ((-30i64..=30, 1i64..=6), prop::collection::vec((-30i64..=30, 1i64..=6), 1)),
            2..10,
        )
    ) {
        let table = raw_to_table(&raw);
        let env = build_envelope(&table).unwrap();
        // probe a dense grid: any alpha > 0 where the argmin's g values spread
        // must be a breakpoint
        for k in 1..60i64 {
            let alpha = ExactScalar::from_ratio(k, 7);
            let argmin = argmin_at(&table, &alpha).unwrap();
            let mut gs: Vec<ExactScalar> =
                argmin.iter().map(|&i| table.candidates()[i].g[0].clone()).collect();
            gs.sort_by(|a, b| a.key_cmp(b));
            let spread = !gs.first().unwrap().is_eq(gs.last().unwrap());
            if spread {
                prop_assert!(env.is_breakpoint(&alpha));
            }
        }
    }
}

#[test]
fn approx_envelope_tracks_the_exact_one() {
    use tradeoff_core::scalar::ApproxScalar;
    let mut rng = seeded_rng(0xA11);
    for _ in 0..10 {
        let raw = common::random_raw(&mut rng, 12, 1);
        let exact_env = build_envelope(&raw_to_table(&raw)).unwrap();
        let approx_env = build_envelope(&common::raw_to_approx_table(&raw, 1e-9)).unwrap();
        // same algorithm under tolerance comparisons: values agree to
        // floating-point rounding away from (and at) breakpoints
        for k in 0..200i64 {
            let exact_alpha = ExactScalar::from_ratio(3 * k, 199);
            let approx_alpha = ApproxScalar::new(exact_alpha.to_f64(), 1e-9);
            let want = exact_env.value_at(&exact_alpha).unwrap().to_f64();
            let got = approx_env.value_at(&approx_alpha).unwrap().to_f64();
            assert!(
                (want - got).abs() <= 1e-9 * (1.0 + want.abs()),
                "approx envelope drifted at alpha = {exact_alpha}: {got} vs {want}"
            );
        }
    }
}

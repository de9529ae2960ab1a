mod common;

use abgame_core::{
    audit, black_pegs, build_strategy, decode, enumerate_secrets, expected_k, find_collision,
    is_feasible, shift_block, signature, structured_decode, Code, DecodeOutcome, GameSpec,
    Strategy as AbStrategy, StructuredOutcome,
};
use common::{naive_blacks, naive_feasible, naive_secrets};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn ab_code(pegs: usize, colors: usize) -> impl Strategy<Value = Vec<u8>> {
    Just((1..=colors as u8).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(move |v| v[..pegs].to_vec())
}

fn small_ab_strategy() -> impl Strategy<Value = (usize, usize, Vec<Vec<u8>>)> {
    (2usize..=3, 3usize..=6).prop_flat_map(|(p, c)| {
        let all = naive_secrets(p, c, true);
        let n = all.len();
        (Just(p), Just(c), subsequence(all, 0..=n.min(9)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn black_pegs_is_symmetric_and_counts_agreements(
        (q, s) in (1usize..=8, 8usize..=20).prop_flat_map(|(p, c)| (ab_code(p, c), ab_code(p, c)))
    ) {
        let (qc, sc) = (Code::new(&q).unwrap(), Code::new(&s).unwrap());
        let b = black_pegs(&qc, &sc).unwrap();
        prop_assert_eq!(b, black_pegs(&sc, &qc).unwrap());
        prop_assert_eq!(b, naive_blacks(&q, &s));
        let hamming = q.iter().zip(&s).filter(|(a, b)| a != b).count();
        prop_assert_eq!(b, q.len() - hamming);
        prop_assert_eq!(black_pegs(&qc, &qc).unwrap(), q.len());
    }

    #[test]
    fn feasibility_matches_hashing_oracle((p, c, rows) in small_ab_strategy()) {
        let s = AbStrategy::from_rows(GameSpec::ab(p, c).unwrap(), &rows, abgame_core::Provenance::UserSupplied).unwrap();
        let feasible = is_feasible(&s);
        prop_assert_eq!(feasible, naive_feasible(p, c, &rows));
        let collision = find_collision(&s);
        prop_assert_eq!(collision.is_none(), feasible);
        if let Some((a, b)) = collision {
            prop_assert!(a < b);
            prop_assert_eq!(signature(&s, &a).unwrap(), signature(&s, &b).unwrap());
            // No smaller pair collides.
            let secrets: Vec<Code> = enumerate_secrets(s.spec()).collect();
            for (i, x) in secrets.iter().enumerate() {
                for y in &secrets[i + 1..] {
                    if (*x, *y) >= (a, b) { break; }
                    prop_assert_ne!(signature(&s, x).unwrap(), signature(&s, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn audit_violations_imply_infeasible((p, c, rows) in small_ab_strategy()) {
        let s = AbStrategy::from_rows(GameSpec::ab(p, c).unwrap(), &rows, abgame_core::Provenance::UserSupplied).unwrap();
        let report = audit(&s).unwrap();
        if !report.is_clean() {
            prop_assert!(!is_feasible(&s), "{:?}", report.violations);
        }
        if is_feasible(&s) {
            prop_assert!(s.len() as i64 >= report.lower_bound);
        }
    }

    #[test]
    fn decode_round_trips_on_generated(p in 2usize..=3, c in 3usize..=12, pick in any::<prop::sample::Index>()) {
        let s = build_strategy(&GameSpec::ab(p, c).unwrap()).unwrap();
        let secrets: Vec<Code> = enumerate_secrets(s.spec()).collect();
        let secret = secrets[pick.index(secrets.len())];
        let sig = signature(&s, &secret).unwrap();
        prop_assert_eq!(decode(&s, &sig).unwrap(), DecodeOutcome::Unique { secret });
        let (out, trace) = structured_decode(&s, &sig).unwrap();
        prop_assert_eq!(out, StructuredOutcome::Secret { secret });
        let resolved: Vec<u8> = trace.resolved.iter().map(|c| c.unwrap()).collect();
        prop_assert_eq!(resolved.as_slice(), secret.colors());
    }

    #[test]
    fn structured_decode_never_returns_a_wrong_secret(
        p in 2usize..=3,
        c in 3usize..=9,
        seed in prop::collection::vec(0u8..=3, 30),
    ) {
        let s = build_strategy(&GameSpec::ab(p, c).unwrap()).unwrap();
        let answers: Vec<u8> = seed.iter().take(s.len()).map(|&a| a % (p as u8 + 1)).collect();
        prop_assume!(answers.len() == s.len());
        let sig = abgame_core::AnswerSignature(answers);
        let (out, _) = structured_decode(&s, &sig).unwrap();
        match decode(&s, &sig).unwrap() {
            DecodeOutcome::Unique { secret } => prop_assert_eq!(out, StructuredOutcome::Secret { secret }),
            DecodeOutcome::Inconsistent => prop_assert_eq!(out, StructuredOutcome::Inconsistent),
            DecodeOutcome::Ambiguous { .. } => prop_assert!(false, "generated strategies are feasible"),
        }
    }

    #[test]
    fn json_round_trip(p in 1usize..=3, c in 3usize..=30) {
        let s = build_strategy(&GameSpec::ab(p, c).unwrap()).unwrap();
        let back = AbStrategy::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn zero_shift_is_identity(p in 2usize..=3) {
        let block = abgame_core::iterated_block(p).unwrap();
        prop_assert_eq!(shift_block(&block, 0, 6).unwrap(), block);
    }
}

#[test]
fn secret_counts_match_formulas() {
    for p in 1..=3usize {
        for c in 1..=12usize {
            let mm = GameSpec::mastermind(p, c).unwrap();
            assert_eq!(enumerate_secrets(&mm).count(), c.pow(p as u32));
            if c >= p {
                let ab = GameSpec::ab(p, c).unwrap();
                let falling: usize = (0..p).map(|i| c - i).product();
                let listed: Vec<Code> = enumerate_secrets(&ab).collect();
                assert_eq!(listed.len(), falling);
                assert!(listed.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(
                    listed.iter().map(|s| s.colors().to_vec()).collect::<Vec<_>>(),
                    naive_secrets(p, c, true)
                );
            }
        }
    }
}

#[test]
fn lengths_match_formulas_up_to_200() {
    for c in 2..=200usize {
        let s = build_strategy(&GameSpec::ab(2, c).unwrap()).unwrap();
        assert_eq!(s.len(), (4 * c).div_ceil(3) - 2, "p=2 c={c}");
        assert_eq!(s.len(), expected_k(s.spec()).unwrap());
    }
    for c in 3..=200usize {
        let s = build_strategy(&GameSpec::ab(3, c).unwrap()).unwrap();
        let formula = if c == 3 { 4 } else { (3 * c - 1) / 2 - 1 };
        assert_eq!(s.len(), formula, "p=3 c={c}");
        assert_eq!(s.len(), expected_k(s.spec()).unwrap());
        assert!(s.questions().iter().all(|q| q.has_distinct_colors()));
    }
}

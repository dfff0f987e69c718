use locbal::words::{
    complement, dis, is_locally_balanced, is_strongly_locally_balanced, rds, weight, window,
};
use locbal::{ConstraintParams, Word};
use proptest::prelude::*;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..=1, 0..=max_len).prop_map(|bits| Word::from_bits(bits).unwrap())
}

fn params() -> impl Strategy<Value = ConstraintParams> {
    (1usize..=5, 1usize..=3)
        .prop_map(|(half, delta)| ConstraintParams::new(2 * half, delta).unwrap())
}

/// Window-by-window definition, straight from the weights.
fn naive_balanced(w: &Word, ell: usize, delta: usize) -> bool {
    (1..=w.len().saturating_sub(ell - 1)).all(|i| {
        let wt = weight(&window(w, i, ell).unwrap()) as i64;
        (wt - ell as i64 / 2).abs() <= delta as i64
    })
}

#[test]
fn strong_four_one_iff_rds_spread_at_most_three() {
    let p = ConstraintParams::new(4, 1).unwrap();
    for n in 0..=16 {
        for v in 0..1u64 << n {
            let w = Word::from_u64(v, n);
            assert_eq!(is_strongly_locally_balanced(&w, &p), dis(&w) <= 3, "{w}");
        }
    }
}

#[test]
fn strong_balance_matches_every_even_window() {
    for (ell, delta) in [(4, 1), (4, 2), (6, 1), (6, 2)] {
        let p = ConstraintParams::new(ell, delta).unwrap();
        for n in 0..=12 {
            for v in 0..1u64 << n {
                let w = Word::from_u64(v, n);
                let naive = (ell..=n.max(ell))
                    .step_by(2)
                    .all(|l| naive_balanced(&w, l, delta));
                assert_eq!(
                    is_strongly_locally_balanced(&w, &p),
                    naive,
                    "{w} ({ell},{delta})"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn local_balance_matches_window_weights(w in word(40), p in params()) {
        prop_assert_eq!(is_locally_balanced(&w, &p), naive_balanced(&w, p.ell(), p.delta()));
    }

    #[test]
    fn rds_tracks_weight(w in word(64)) {
        let r = rds(&w);
        prop_assert_eq!(r.values().len(), w.len() + 1);
        prop_assert_eq!(r.values()[0], 0);
        prop_assert_eq!(r.last(), 2 * weight(&w) as i64 - w.len() as i64);
        prop_assert_eq!(dis(&w) as i64, r.max() - r.min());
        for (i, pair) in r.values().windows(2).enumerate() {
            prop_assert_eq!(pair[1] - pair[0], if w.bits()[i] == 1 { 1 } else { -1 });
        }
    }

    #[test]
    fn complement_is_an_involution(w in word(64), p in params()) {
        let c = complement(&w);
        prop_assert_eq!(complement(&c), w.clone());
        prop_assert_eq!(weight(&c), w.len() - weight(&w));
        prop_assert_eq!(dis(&c), dis(&w));
        prop_assert_eq!(is_locally_balanced(&c, &p), is_locally_balanced(&w, &p));
    }

    #[test]
    fn strong_implies_local(w in word(40), p in params()) {
        if is_strongly_locally_balanced(&w, &p) {
            prop_assert!(is_locally_balanced(&w, &p));
        }
    }

    #[test]
    fn small_rds_spread_forces_strong_balance(w in word(40), p in params()) {
        // Any window's imbalance |2 wt - len| is at most the RDS spread.
        if dis(&w) <= 2 * p.delta() + 1 {
            prop_assert!(is_strongly_locally_balanced(&w, &p));
        }
    }

    #[test]
    fn text_roundtrip(w in word(64)) {
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }
}

//! Property suites over the plethystic, character, potential and diamond layers.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::*;
use qcount_core::field::{FieldSpec, Scalar};
use qcount_core::pleth::{RatFun, Series};
use qcount_core::quiver::{catalog, DimensionVector, Potential};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exp_log_round_trip(a in ratfun_series()) {
        prop_assert!(exp_log_roundtrip(&a));
    }

    #[test]
    fn exp_log_round_trip_value_tables(a in table_series()) {
        prop_assert!(exp_log_roundtrip_tables(&a));
    }

    #[test]
    fn exp_is_additive((a, b) in ratfun_series_pair()) {
        prop_assert!(exp_additive(&a, &b));
    }

    #[test]
    fn a_exp_equivalence_holds(a in ratfun_series()) {
        prop_assert!(a_exp(&a));
    }

    #[test]
    fn exp_matches_product_expansion(
        terms in prop::collection::vec((1u32..=3, -2i64..=3, 0u32..=2), 1..4),
        cutoff in 1u32..=5,
    ) {
        let mut a = Series::zeros(1, cutoff, &RatFun::zero());
        for &(v, c, k) in &terms {
            if v <= cutoff {
                let cur = a.get(&[v]).clone();
                a.set(&[v], cur.add(&RatFun::s_pow(k as i64).scale(&rat(c))));
            }
        }
        let want = exp_oracle_rank1(&terms, cutoff);
        let got = a.exp().unwrap();
        for d in 0..=cutoff {
            prop_assert_eq!(got.get(&[d]), &want[d as usize]);
        }
    }

    #[test]
    fn potential_is_additive(
        which in 0usize..3,
        q in prop::sample::select(vec![2u64, 3, 4]),
        dx in 0u32..=2,
        dy in 0u32..=2,
        seed in prop::collection::vec(0u16..16, 1..40),
    ) {
        let f = FieldSpec::of_order(q).unwrap();
        let (quiver, phis): (_, Vec<Vec<(i64, Vec<&str>)>>) = match which {
            0 => (catalog::jordan(), vec![vec![(1, vec!["x"])], vec![(2, vec!["x", "x"])], vec![(1, vec!["x", "x", "x"]), (-1, vec!["x"])]]),
            1 => (catalog::loops(2), vec![vec![(1, vec!["x1", "x2"])], vec![(1, vec!["x1", "x1", "x2"]), (3, vec!["x2"])]]),
            _ => (catalog::calogero_moser(), vec![vec![(1, vec!["x"])], vec![(1, vec!["x", "x"])]]),
        };
        let quiver = Arc::new(quiver);
        let rank = quiver.num_vertices();
        let vx = DimensionVector((0..rank).map(|i| if i == 0 { dx } else { dx.min(1) }).collect());
        let vy = DimensionVector((0..rank).map(|i| if i == 0 { dy } else { 1 }).collect());
        let x = random_rep(&quiver, &f, &vx, &seed);
        let rev: Vec<u16> = seed.iter().rev().copied().collect();
        let y = random_rep(&quiver, &f, &vy, &rev);
        for terms in &phis {
            let t: Vec<(i64, &[&str])> = terms.iter().map(|(c, w)| (*c, w.as_slice())).collect();
            let phi = Potential::from_terms(&quiver, &t).unwrap();
            prop_assert!(potential_additive(&x, &y, &phi));
        }
    }

    #[test]
    fn diamond_invariance_over_fq(
        q in prop::sample::select(vec![3u64, 4, 5, 7]),
        v in prop::collection::vec(1u32..=2, 1..=3),
        raw in prop::collection::vec(0u16..64, 6),
        perm in 0usize..6,
        c in 1u16..64,
    ) {
        let f = FieldSpec::of_order(q).unwrap();
        let v = DimensionVector(v);
        let n = v.total() as usize;
        let z: Vec<Scalar> = raw.iter().take(n).map(|&r| Scalar(r % q as u16)).collect();
        prop_assert!(diamond_invariant_fq(&f, &z, &v, perm, Scalar(c % q as u16)));
    }

    #[test]
    fn diamond_invariance_over_q(
        v in prop::collection::vec(1u32..=2, 1..=3),
        raw in prop::collection::vec(-5i64..=5, 6),
        perm in 0usize..6,
        c in prop::sample::select(vec![-3i64, -1, 1, 2, 5]),
    ) {
        let v = DimensionVector(v);
        let n = v.total() as usize;
        prop_assert!(diamond_invariant_rat(&raw[..n], &v, perm, c));
    }
}

#[test]
fn characters_are_orthogonal() {
    for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
        let f = FieldSpec::of_order(q).unwrap();
        assert!(character_orthogonality(&f), "q = {q}");
    }
}

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use usd_core::bounds::{
    achievability_witness, certify, classify, dependence_witness, lemma_check, necessary_max,
    sufficient_max, Verdict, DISTINCT_MARGIN,
};
use usd_core::corelin::PureState;

#[test]
fn sufficient_never_exceeds_necessary() {
    for c in 1..=5u64 {
        for d in 1..=4u64 {
            let v = classify(1, c, d).unwrap();
            assert!(v.sufficient_max <= v.necessary_max);
            assert_eq!(
                v.sufficient_max == v.necessary_max,
                d <= 2 || c == 1,
                "C={c} D={d}"
            );
            if d >= 2 {
                assert_eq!(v.sufficient_max, sufficient_max(c, d).unwrap());
            }
        }
    }
    // One dimension: the raw bound C overshoots the single distinct state.
    assert_eq!(sufficient_max(3, 1).unwrap(), 3);
    assert_eq!(classify(2, 3, 1).unwrap().verdict, Verdict::Impossible);
}

#[test]
fn more_copies_never_lose_guarantee() {
    for d in 1..=5u64 {
        for n in 1..=15u64 {
            let mut guaranteed = false;
            for c in 1..=10u64 {
                let v = classify(n, c, d).unwrap().verdict;
                if guaranteed {
                    assert_eq!(v, Verdict::Guaranteed, "N={n} C={c} D={d}");
                }
                guaranteed |= v == Verdict::Guaranteed;
            }
        }
    }
}

#[test]
fn qubits_are_never_indeterminate() {
    for c in 1..=20u64 {
        for n in 1..=30u64 {
            assert_ne!(classify(n, c, 2).unwrap().verdict, Verdict::Indeterminate);
        }
    }
}

#[test]
fn witnesses_certify_over_a_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (c, d) in [
        (1, 2),
        (1, 3),
        (2, 2),
        (3, 2),
        (4, 2),
        (2, 3),
        (3, 3),
        (2, 4),
    ] {
        let a = achievability_witness::<f64, _>(c, d, &mut rng).unwrap();
        assert_eq!(a.len() as u64, necessary_max(c as u64, d as u64).unwrap());
        assert!(certify(&a, c).unwrap().independent);
        assert!(a.is_distinct(DISTINCT_MARGIN));

        let w = dependence_witness::<f64, _>(c, d, &mut rng).unwrap();
        assert_eq!(w.len(), c + d);
        assert!(!certify(&w, c).unwrap().independent);
        assert!(w.is_distinct(DISTINCT_MARGIN));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lemma_holds_on_random_premises(
        seed in any::<u64>(),
        phi_dim in 2usize..=4,
        chi_dim in 2usize..=4,
        k in 1usize..=4,
    ) {
        let k = k.min(phi_dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phis: Vec<_> = (0..k).map(|_| PureState::<f64>::random(phi_dim, &mut rng).unwrap()).collect();
        let chis: Vec<_> = (0..k).map(|_| PureState::<f64>::random(chi_dim, &mut rng).unwrap()).collect();
        let phi = PureState::random(phi_dim, &mut rng).unwrap();
        let chi = PureState::random(chi_dim, &mut rng).unwrap();
        prop_assert!(lemma_check(&phis, &chis, &phi, &chi).unwrap());
    }
}

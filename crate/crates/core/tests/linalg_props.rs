use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use usd_core::corelin::{gram_of, li_rank, reciprocal_states, PureState};
use usd_core::Complex;

fn random_states(seed: u64, n: usize, dim: usize) -> Vec<PureState<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| PureState::random(dim, &mut rng).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_power_preserves_norm(seed in any::<u64>(), dim in 1usize..4, copies in 1usize..=8) {
        let s = &random_states(seed, 1, dim)[0];
        let p = s.tensor_power(copies).unwrap();
        prop_assert_eq!(p.dim(), dim.pow(copies as u32));
        prop_assert!((p.amplitudes().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_is_multiplicative_under_tensor_powers(seed in any::<u64>(), n in 1usize..5, dim in 1usize..4, copies in 1usize..5) {
        let states = random_states(seed, n, dim);
        let powers: Vec<_> = states.iter().map(|s| s.tensor_power(copies).unwrap()).collect();
        let lhs = gram_of(&powers);
        let rhs = gram_of(&states).elementwise_pow(copies);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        prop_assert!(lhs.is_valid(1e-10, 1e-10));
    }

    #[test]
    fn svd_rank_matches_gram_rank(seed in any::<u64>(), n in 1usize..7, dim in 1usize..6, extra in 0usize..3) {
        // Append `extra` random combinations of the first two states.
        let mut states = random_states(seed, n, dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        for _ in 0..extra {
            use rand::Rng;
            let a = Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let b = Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let v = states[0].amplitudes() * a + states[n.min(2) - 1].amplitudes() * b;
            if let Ok(s) = PureState::normalized(v.iter().copied().collect()) {
                states.push(s);
            }
        }
        let svd = li_rank(&states, 1e-10).unwrap();
        let eig = gram_of(&states).rank(1e-10);
        prop_assert_eq!(svd, eig);
        prop_assert_eq!(svd, n.min(dim));
    }

    #[test]
    fn reciprocal_states_are_biorthogonal(seed in any::<u64>(), n in 1usize..5, pad in 0usize..3) {
        let states = random_states(seed, n, n + pad);
        let duals = reciprocal_states(&states).unwrap();
        for (k, d) in duals.iter().enumerate() {
            prop_assert!(d.normalization.norm() > 1e-10);
            for (j, s) in states.iter().enumerate() {
                let v = d.vector.dotc(s.amplitudes());
                if j != k {
                    prop_assert!(v.norm() < 1e-10, "<dual {}|psi {}> = {}", k, j, v);
                }
            }
        }
    }
}

#[test]
fn lifted_trine_half_duals_are_biorthogonal() {
    let e = usd_core::trine::lifted_trine(0.5f64).unwrap();
    let duals = reciprocal_states(e.states()).unwrap();
    for (k, d) in duals.iter().enumerate() {
        for (j, s) in e.states().iter().enumerate() {
            if j != k {
                assert!(d.vector.dotc(s.amplitudes()).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn orthogonal_lifted_trine_is_self_reciprocal() {
    let e = usd_core::trine::lifted_trine(1.0f64 / 3f64.sqrt()).unwrap();
    let duals = reciprocal_states(e.states()).unwrap();
    for (d, s) in duals.iter().zip(e.states()) {
        assert!((&d.vector - s.amplitudes()).norm() < 1e-12);
    }
}

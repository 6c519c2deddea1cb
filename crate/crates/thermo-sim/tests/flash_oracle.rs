//! Randomized cross-check of the Rachford-Rice solver against an
//! independent bisection oracle.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thermo_sim::rachford_rice;

fn rr_f(z: &[f64], k: &[f64], beta: f64) -> f64 {
    z.iter()
        .zip(k)
        .map(|(zi, ki)| zi * (ki - 1.0) / (1.0 + beta * (ki - 1.0)))
        .sum()
}

/// Plain 200-step bisection, no Newton, no shortcuts.
fn oracle_beta(z: &[f64], k: &[f64]) -> f64 {
    if rr_f(z, k, 0.0) <= 0.0 {
        return 0.0;
    }
    if rr_f(z, k, 1.0) >= 0.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rr_f(z, k, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(2..=5);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let z: Vec<f64> = raw.into_iter().map(|v| v / total).collect();
    loop {
        let k: Vec<f64> = (0..n)
            .map(|_| rng.random_range(-1.5_f64..1.5).exp())
            .collect();
        let kmax = k.iter().cloned().fold(f64::MIN, f64::max);
        let kmin = k.iter().cloned().fold(f64::MAX, f64::min);
        // K spread of at least 10% keeps instances away from the
        // all-K-equal degenerate convention
        if kmax / kmin >= 1.1 {
            return (z, k);
        }
    }
}

#[test]
fn solver_matches_bisection_oracle_on_1000_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..1000 {
        let (z, k) = random_instance(&mut rng);
        let split = rachford_rice(&z, &k).unwrap();
        let expected = oracle_beta(&z, &k);
        assert!(
            (split.beta - expected).abs() <= 1e-9,
            "case {case}: beta {} vs oracle {} (z={z:?}, k={k:?})",
            split.beta,
            expected
        );
        // phase compositions recombine to the feed
        for ((yi, xi), zi) in split.y.iter().zip(&split.x).zip(&z) {
            let mix = split.beta * yi + (1.0 - split.beta) * xi;
            assert!((mix - zi).abs() < 1e-10, "case {case}");
        }
        if split.beta > 0.0 && split.beta < 1.0 {
            assert!((split.x.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!((split.y.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}

mod proptest_invariants {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn beta_stays_in_unit_interval(
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (z, k) = random_instance(&mut rng);
            let split = rachford_rice(&z, &k).unwrap();
            prop_assert!((0.0..=1.0).contains(&split.beta));
            prop_assert!(split.x.iter().all(|v| *v >= 0.0));
            prop_assert!(split.y.iter().all(|v| *v >= 0.0));
        }
    }
}

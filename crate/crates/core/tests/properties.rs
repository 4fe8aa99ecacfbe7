mod common;

use proptest::prelude::*;
use siegel::arith::{build_power_sequence, primes_in_range, PrimeContext};
use siegel::lfun::full_spectrum;

fn small_primes() -> Vec<u64> {
    primes_in_range(3, 100_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn power_sequence_is_a_permutation_with_complement(i in 0usize..9591) {
        let q = small_primes()[i];
        let ctx = PrimeContext::new(q).unwrap();
        let seq = build_power_sequence(&ctx).unwrap();
        let qbar = ctx.qbar as usize;
        let mut seen = vec![false; q as usize];
        for &a in &seq.values {
            prop_assert!(a >= 1 && (a as u64) < q);
            prop_assert!(!seen[a as usize]);
            seen[a as usize] = true;
        }
        for k in 0..qbar {
            prop_assert_eq!(seq.values[k + qbar] as u64, q - seq.values[k] as u64);
        }
    }

    #[test]
    fn character_alternates_along_powers(i in 0usize..9591) {
        let q = small_primes()[i];
        let residues = common::quadratic_residues(q);
        let ctx = PrimeContext::new(q).unwrap();
        for (k, a) in ctx.powers().take((q - 1) as usize).enumerate() {
            prop_assert_eq!(residues.contains(&a), k % 2 == 0, "q={} k={}", q, k);
        }
    }
}

#[test]
fn sieve_matches_trial_division() {
    let want: Vec<u64> = common::trial_division_primes(3, 20_000);
    assert_eq!(primes_in_range(3, 20_000), want);
}

#[test]
fn spectrum_is_conjugate_symmetric() {
    // L(1, conj χ) = conj L(1, χ), so |L| at j and q-1-j agree
    for q in primes_in_range(3, 500) {
        let ctx = PrimeContext::new(q).unwrap();
        let seq = build_power_sequence(&ctx).unwrap();
        let spec = full_spectrum::<f64>(&ctx, &seq).unwrap();
        let m = (q - 1) as usize;
        assert!(spec.get(0).is_none());
        for j in 1..m {
            let (a, b) = (spec.get(j).unwrap(), spec.get(m - j).unwrap());
            assert!(
                (a - b).abs() <= 1e-13 * a.max(1.0),
                "q={q} j={j}: {a} vs {b}"
            );
            assert!(a > 0.0);
        }
    }
}

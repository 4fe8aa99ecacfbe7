#![allow(dead_code)]

use std::collections::HashSet;

/// Number of reduced primitive forms `ax² + bxy + cy²` of discriminant `d < 0`.
pub fn reduced_form_count(d: i64) -> u64 {
    assert!(d < 0 && d.rem_euclid(4) <= 1);
    let mut count = 0;
    let mut a = 1i64;
    // reduced forms have 3a² <= |d|
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd(gcd(a, b.abs()), c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Nonzero squares modulo `q`.
pub fn quadratic_residues(q: u64) -> HashSet<u64> {
    (1..q).map(|x| x * x % q).collect()
}

pub fn trial_division_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi)
        .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

/// Relative distance in units of `f64::EPSILON` at the larger magnitude.
pub fn ulps(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / (f64::EPSILON * scale)
    }
}

#[test]
fn form_oracle_small_discriminants() {
    // h(-3) = h(-4) = 1, h(-20) = 2, h(-47) = 5
    assert_eq!(reduced_form_count(-3), 1);
    assert_eq!(reduced_form_count(-4), 1);
    assert_eq!(reduced_form_count(-20), 2);
    assert_eq!(reduced_form_count(-47), 5);
}

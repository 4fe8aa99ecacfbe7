//! Prime generation and arithmetic in the multiplicative group modulo an odd prime.

use crate::error::{Error, Result};

/// Largest modulus accepted, so that `(q - 1)^2` fits comfortably in 64 bits.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Odd numbers covered by one sieve segment.
const SEGMENT_ODDS: usize = 1 << 20;

/// Parity of the quadratic character `χ□ mod q`, i.e. the sign of `χ□(-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Even iff `q ≡ 1 (mod 4)`.
    pub fn of(q: u64) -> Self {
        if q % 4 == 1 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn tag(self) -> char {
        match self {
            Parity::Even => 'E',
            Parity::Odd => 'O',
        }
    }
}

/// All primes `p` with `lo <= p <= hi`, ascending.
///
/// Segmented sieve over odd numbers; memory is bounded by the segment bitset
/// plus the base primes up to `sqrt(hi)`.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let lo = lo.max(2);
    if hi < lo {
        return out;
    }
    if lo <= 2 {
        out.push(2);
    }
    let base = small_primes(isqrt(hi));

    // sieve the odd numbers lo_odd, lo_odd + 2, ..., <= hi
    let mut start = (lo.max(3)) | 1;
    let mut bits = vec![0u64; SEGMENT_ODDS / 64];
    while start <= hi {
        let count = (((hi - start) / 2) as usize + 1).min(SEGMENT_ODDS);
        bits.iter_mut().for_each(|w| *w = 0);
        let last = start + 2 * (count as u64 - 1);
        for &p in base.iter().skip(1) {
            if p * p > last {
                break;
            }
            // first odd multiple of p that is >= max(p*p, start)
            let mut m = (p * p).max(start.div_ceil(p) * p);
            if m % 2 == 0 {
                m += p;
            }
            while m <= last {
                let idx = ((m - start) / 2) as usize;
                bits[idx / 64] |= 1 << (idx % 64);
                m += 2 * p;
            }
        }
        for idx in 0..count {
            if bits[idx / 64] & (1 << (idx % 64)) == 0 {
                let n = start + 2 * idx as u64;
                if n > 1 {
                    out.push(n);
                }
            }
        }
        start = last + 2;
    }
    out
}

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            out.push(n as u64);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    out
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `base^exp mod q` by square-and-multiply with 128-bit intermediate products.
pub fn pow_mod(base: u64, mut exp: u64, q: u64) -> u64 {
    assert!(q >= 1, "modulus must be positive");
    let q128 = q as u128;
    let mut result: u128 = 1 % q128;
    let mut b = (base % q) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % q128;
        }
        b = b * b % q128;
        exp >>= 1;
    }
    result as u64
}

/// Prime factors of `n` with multiplicity, ascending. Trial division.
pub fn factorize(mut n: u64) -> Vec<u64> {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut out = Vec::new();
    while n.is_multiple_of(2) {
        out.push(2);
        n /= 2;
    }
    let mut d = 3;
    while d * d <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_modulus(q: u64) -> Result<()> {
    if !(3..MAX_MODULUS).contains(&q) || !is_prime(q) {
        return Err(Error::InvalidModulus(q));
    }
    Ok(())
}

fn distinct_prime_factors(n: u64) -> Vec<u64> {
    let mut f = factorize(n);
    f.dedup();
    f
}

fn is_generator(g: u64, q: u64, factors: &[u64]) -> bool {
    !g.is_multiple_of(q) && factors.iter().all(|&p| pow_mod(g, (q - 1) / p, q) != 1)
}

/// Smallest primitive root of the odd prime `q`.
pub fn find_primitive_root(q: u64) -> Result<u64> {
    check_modulus(q)?;
    let factors = distinct_prime_factors(q - 1);
    (2..q)
        .find(|&g| is_generator(g, q, &factors))
        .ok_or(Error::InvalidModulus(q))
}

/// Legendre symbol `(a | q)` via Euler's criterion.
pub fn legendre_symbol(a: i64, q: u64) -> i8 {
    let r = a.rem_euclid(q as i64) as u64;
    if r == 0 {
        return 0;
    }
    match pow_mod(r, (q - 1) / 2, q) {
        1 => 1,
        x if x == q - 1 => -1,
        x => panic!("Euler criterion gave {x} mod {q}: modulus is not prime"),
    }
}

/// An odd prime modulus with the data the L-value evaluators need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeContext {
    pub q: u64,
    pub parity: Parity,
    /// Primitive root used to index `(Z/qZ)*`.
    pub g: u64,
    /// `(q - 1) / 2`, the decimated transform length.
    pub qbar: u64,
    /// `(q - 1) / 2`, the exponent `j` with `χ□ = χ1^j`.
    pub j_quad: u64,
}

impl PrimeContext {
    /// Builds the context with the smallest primitive root.
    pub fn new(q: u64) -> Result<Self> {
        let g = find_primitive_root(q)?;
        Ok(Self::assemble(q, g))
    }

    /// Builds the context from a previously found root, verifying it.
    pub fn with_root(q: u64, g: u64) -> Result<Self> {
        check_modulus(q)?;
        if !is_generator(g, q, &distinct_prime_factors(q - 1)) {
            return Err(Error::InvalidModulus(q));
        }
        Ok(Self::assemble(q, g))
    }

    fn assemble(q: u64, g: u64) -> Self {
        Self {
            q,
            parity: Parity::of(q),
            g,
            qbar: (q - 1) / 2,
            j_quad: (q - 1) / 2,
        }
    }

    /// `a_0, a_1, ...` with `a_k = g^k mod q`, generated lazily.
    pub fn powers(&self) -> Powers {
        Powers {
            q: self.q,
            g: self.g,
            next: 1,
        }
    }
}

/// Iterator over `g^k mod q`, `k = 0, 1, 2, ...` (unbounded; cycles with period `q - 1`).
#[derive(Debug, Clone)]
pub struct Powers {
    q: u64,
    g: u64,
    next: u64,
}

impl Iterator for Powers {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        let a = self.next;
        // q < 2^31 so the product stays below 2^62
        self.next = a * self.g % self.q;
        Some(a)
    }
}

/// The full power table `a_k = g^k mod q`, `k = 0..q-2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSequence {
    pub q: u64,
    pub values: Vec<u32>,
}

impl PowerSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The first half `a_0..a_{qbar-1}`; the second half is `q - a_k`.
    pub fn first_half(&self) -> &[u32] {
        &self.values[..self.values.len() / 2]
    }
}

pub fn build_power_sequence(ctx: &PrimeContext) -> Result<PowerSequence> {
    let len = (ctx.q - 1) as usize;
    let mut values = Vec::new();
    values
        .try_reserve_exact(len)
        .map_err(|_| Error::ResourceLimit(len))?;
    values.extend(ctx.powers().take(len).map(|a| a as u32));
    Ok(PowerSequence { q: ctx.q, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_primes(lo: u64, hi: u64) -> Vec<u64> {
        (lo..=hi)
            .filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn small_ranges() {
        assert_eq!(primes_in_range(3, 20), vec![3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_in_range(8, 10), Vec::<u64>::new());
        assert_eq!(primes_in_range(2, 2), vec![2]);
        assert_eq!(primes_in_range(2, 3), vec![2, 3]);
        assert_eq!(primes_in_range(9, 9), Vec::<u64>::new());
    }

    #[test]
    fn sieve_matches_trial_division_across_segments() {
        for (lo, hi) in [
            (2, 5000),
            (997, 1013),
            (2_097_000, 2_098_000),
            (4_194_290, 4_194_310),
        ] {
            assert_eq!(
                primes_in_range(lo, hi),
                naive_primes(lo, hi),
                "[{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn prime_count_up_to_ten_million() {
        assert_eq!(primes_in_range(3, 10_000_000).len(), 664_578);
    }

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(pow_mod(5, 0, 7), 1);
        assert_eq!(pow_mod(3, 6, 7), 1);
        assert_eq!(pow_mod(0, 0, 7), 1);
        assert_eq!(pow_mod(3, 5, 1), 0);
        // near the modulus bound: (q-1)^2 overflows u64 without widening
        let q = 2_147_483_647;
        assert_eq!(pow_mod(q - 1, 2, q), 1);
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12), vec![2, 2, 3]);
        assert_eq!(factorize(1), Vec::<u64>::new());
        let f = factorize(9_999_990);
        assert_eq!(f.iter().product::<u64>(), 9_999_990);
        assert!(f.iter().all(|&p| is_prime(p)));
        assert!(f.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(find_primitive_root(3).unwrap(), 2);
        assert_eq!(find_primitive_root(7).unwrap(), 3);
        // exhaustive order check for 7: 2 has order 3
        let order = |g: u64, q: u64| (1..q).find(|&k| pow_mod(g, k, q) == 1).unwrap();
        assert_eq!(order(2, 7), 3);
        assert_eq!(order(3, 7), 6);
        let q = 9_999_991;
        let g = find_primitive_root(q).unwrap();
        assert_eq!(pow_mod(g, q - 1, q), 1);
        for p in distinct_prime_factors(q - 1) {
            assert_ne!(pow_mod(g, (q - 1) / p, q), 1);
        }
        assert!(matches!(
            find_primitive_root(9),
            Err(Error::InvalidModulus(9))
        ));
        assert!(matches!(
            find_primitive_root(2),
            Err(Error::InvalidModulus(2))
        ));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(1, 13), 1);
        assert_eq!(legendre_symbol(13 * 5, 13), 0);
        assert_eq!(legendre_symbol(-13, 13), 0);
        assert_eq!(legendre_symbol(3, 7), -1);
        assert_eq!(legendre_symbol(-1, 5), 1);
        assert_eq!(legendre_symbol(-1, 7), -1);
    }

    #[test]
    fn power_sequence_examples() {
        let ctx = PrimeContext::new(7).unwrap();
        assert_eq!(
            build_power_sequence(&ctx).unwrap().values,
            vec![1, 3, 2, 6, 4, 5]
        );
        let ctx = PrimeContext::new(3).unwrap();
        assert_eq!(build_power_sequence(&ctx).unwrap().values, vec![1, 2]);
    }

    #[test]
    fn context_rejects_bad_roots() {
        assert!(PrimeContext::with_root(7, 2).is_err());
        assert!(PrimeContext::with_root(7, 5).is_ok());
        assert!(PrimeContext::with_root(15, 2).is_err());
        let ctx = PrimeContext::new(13).unwrap();
        assert_eq!(ctx.parity, Parity::Even);
        assert_eq!(ctx.qbar, 6);
        assert_eq!(PrimeContext::new(11).unwrap().parity, Parity::Odd);
    }
}

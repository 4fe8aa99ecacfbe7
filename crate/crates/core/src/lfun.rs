//! Evaluation of `|L(1, χ)|` for characters modulo an odd prime `q`.
//!
//! For an even primitive character
//! `|L(1,χ)| = (2/√q) |Σ_{a=1}^{q-1} χ̄(a) log Γ(a/q)|`, and for an odd one
//! `|L(1,χ)| = (π/√q) |Σ_{a=1}^{q-1} a χ̄(a) / q|`.
//!
//! Three evaluators are provided for the quadratic character `χ□`:
//!
//! * [`l1_direct`]: the formulas above with `χ□(a)` taken from Euler's criterion.
//! * [`l1_alternating`]: indexes `(Z/qZ)*` by a primitive root, so that
//!   `χ□(a_k) = (-1)^k`, and folds `a_{k+qbar} = q - a_k` into each term.
//! * [`l1_fft_spectrum`] + [`extract_quadratic`]: the decimation-in-frequency
//!   transform that yields every character at once.

use num_complex::Complex;

use crate::arith::{legendre_symbol, Parity, PowerSequence, PrimeContext};
use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::fftcheck;
use crate::real::{KahanSum, Real};
use crate::special::{log_gamma_unchecked, neg_log_sin_pi_ratio, KernelFn};

/// How an L-value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    Alternating,
    Fft,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Alternating => "alternating",
            Method::Fft => "fft",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "direct" => Some(Method::Direct),
            "alternating" => Some(Method::Alternating),
            "fft" => Some(Method::Fft),
            _ => None,
        }
    }
}

/// A computed `|L(1, χ□)|` with an a priori absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LValue<T> {
    pub q: u64,
    pub value: T,
    pub method: Method,
    pub err_bound: T,
    pub parity: Parity,
}

/// `|L(1, χ1^j)|` for the character exponents `j` a kernel gives access to.
///
/// `magnitudes[j]` is `None` for `j = 0` (principal character) and for the
/// exponents whose parity the kernel does not serve.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub q: u64,
    pub magnitudes: Vec<Option<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn get(&self, j: usize) -> Option<T> {
        self.magnitudes.get(j).copied().flatten()
    }

    /// `(j, |L(1, χ1^j)|)` for every populated exponent.
    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.magnitudes
            .iter()
            .enumerate()
            .filter_map(|(j, m)| m.map(|v| (j, v)))
    }
}

fn check_sequence(ctx: &PrimeContext, seq: &PowerSequence) -> Result<()> {
    if ctx.q != seq.q || seq.len() as u64 != ctx.q - 1 {
        return Err(Error::Mismatch {
            context: ctx.q,
            sequence: seq.q,
        });
    }
    Ok(())
}

fn prefactor<T: Real>(q: u64, parity: Parity) -> T {
    let root = T::from_int(q).sqrt();
    match parity {
        Parity::Even => T::lit(2.0) / root,
        Parity::Odd => T::PI() / root,
    }
}

/// Odd case: `(π/√q) |S| / q` for the exact integer character sum `S`.
fn from_integer_sum<T: Real>(q: u64, sum: i64) -> T {
    prefactor::<T>(q, Parity::Odd) * (T::from_int(sum.unsigned_abs()) / T::from_int(q))
}

/// Reference evaluation with Legendre symbols from Euler's criterion.
pub fn l1_direct<T: Real>(q: u64) -> Result<LValue<T>> {
    if q < 3 || q.is_multiple_of(2) || !crate::arith::is_prime(q) || q >= crate::arith::MAX_MODULUS
    {
        return Err(Error::InvalidModulus(q));
    }
    let parity = Parity::of(q);
    let value = match parity {
        Parity::Odd => {
            let sum: i64 = (1..q)
                .map(|a| a as i64 * legendre_symbol(a as i64, q) as i64)
                .sum();
            from_integer_sum(q, sum)
        }
        Parity::Even => {
            let qt = T::from_int(q);
            let acc: KahanSum<T> = (1..q)
                .map(|a| {
                    let lg = log_gamma_unchecked(T::from_int(a) / qt);
                    if legendre_symbol(a as i64, q) == 1 {
                        lg
                    } else {
                        -lg
                    }
                })
                .collect();
            prefactor::<T>(q, parity) * acc.value().abs()
        }
    };
    Ok(LValue {
        q,
        value,
        method: Method::Direct,
        err_bound: estimate_err_bound(q, Method::Direct, T::unit_roundoff()),
        parity,
    })
}

/// Fused alternating sum over the first half of the power table.
fn alternating_value<T: Real>(ctx: &PrimeContext, half: impl Iterator<Item = u64>) -> T {
    let q = ctx.q;
    match ctx.parity {
        Parity::Odd => {
            // (-1)^k (a_k - a_{k+qbar}) = (-1)^k (2 a_k - q), summed exactly
            let sum: i64 = half
                .enumerate()
                .map(|(k, a)| {
                    let t = 2 * a as i64 - q as i64;
                    if k % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum();
            from_integer_sum(q, sum)
        }
        Parity::Even => {
            // qbar is even, so k and k + qbar carry the same sign; the pair
            // log Γ(x) + log Γ(1 - x) = log π - log sin(πx), and the log π
            // terms cancel over a full period.
            let acc: KahanSum<T> = half
                .enumerate()
                .map(|(k, a)| {
                    let v = neg_log_sin_pi_ratio::<T>(a, q);
                    if k % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .collect();
            prefactor::<T>(q, Parity::Even) * acc.value().abs()
        }
    }
}

/// `|L(1, χ□)|` from the primitive-root ordering of `(Z/qZ)*`.
pub fn l1_alternating<T: Real>(ctx: &PrimeContext, seq: &PowerSequence) -> Result<LValue<T>> {
    check_sequence(ctx, seq)?;
    let value = alternating_value::<T>(ctx, seq.first_half().iter().map(|&a| a as u64));
    Ok(LValue {
        q: ctx.q,
        value,
        method: Method::Alternating,
        err_bound: estimate_err_bound(ctx.q, Method::Alternating, T::unit_roundoff()),
        parity: ctx.parity,
    })
}

/// Same as [`l1_alternating`] but generates `a_k` on the fly, without the table.
pub fn l1_alternating_streaming<T: Real>(ctx: &PrimeContext, machine_eps: T) -> LValue<T> {
    let value = alternating_value::<T>(ctx, ctx.powers().take(ctx.qbar as usize));
    LValue {
        q: ctx.q,
        value,
        method: Method::Alternating,
        err_bound: estimate_err_bound(ctx.q, Method::Alternating, machine_eps),
        parity: ctx.parity,
    }
}

/// Length-`qbar` transforms of the decimated sequences.
///
/// `b_k = f(a_k/q) + f(a_{k+qbar}/q)` feeds the even exponents `j = 2t`,
/// `c_k = e(-k/(q-1)) (f(a_k/q) - f(a_{k+qbar}/q))` the odd ones `j = 2t + 1`.
pub fn l1_fft_spectrum<T: Real>(
    ctx: &PrimeContext,
    seq: &PowerSequence,
    f: KernelFn,
) -> Result<Spectrum<T>> {
    check_sequence(ctx, seq)?;
    let q = ctx.q;
    let n = ctx.qbar as usize;
    let qt = T::from_int(q);
    let plan = FftPlan::<T>::new(n)?;
    let mut magnitudes = vec![None; (q - 1) as usize];
    let half = seq.first_half();

    match f {
        KernelFn::Identity => {
            let mut c: Vec<Complex<T>> = half
                .iter()
                .enumerate()
                .map(|(k, &a)| {
                    // f(x) - f(1 - x) = 2x - 1
                    let diff = T::from_signed(2 * a as i64 - q as i64) / qt;
                    crate::fft::unit_root::<T>(k as u64, q - 1) * diff
                })
                .collect();
            plan.forward(&mut c);
            let pre = prefactor::<T>(q, Parity::Odd);
            for (t, z) in c.iter().enumerate() {
                magnitudes[2 * t + 1] = Some(pre * z.norm());
            }
        }
        KernelFn::LogGamma | KernelFn::LogSinNeg => {
            let mut b: Vec<Complex<T>> = half
                .iter()
                .map(|&a| {
                    let v = if f == KernelFn::LogGamma {
                        let x = T::from_int(a as u64) / qt;
                        let y = T::from_int(q - a as u64) / qt;
                        log_gamma_unchecked(x) + log_gamma_unchecked(y)
                    } else {
                        neg_log_sin_pi_ratio::<T>(a as u64, q)
                    };
                    Complex::new(v, T::zero())
                })
                .collect();
            plan.forward(&mut b);
            let pre = prefactor::<T>(q, Parity::Even);
            // t = 0 is the principal character
            for (t, z) in b.iter().enumerate().skip(1) {
                magnitudes[2 * t] = Some(pre * z.norm());
            }
        }
    }
    Ok(Spectrum { q, magnitudes })
}

/// Every non-principal character: log-sin kernel for even `j`, identity for odd `j`.
pub fn full_spectrum<T: Real>(ctx: &PrimeContext, seq: &PowerSequence) -> Result<Spectrum<T>> {
    let mut even = l1_fft_spectrum::<T>(ctx, seq, KernelFn::LogSinNeg)?;
    let odd = l1_fft_spectrum::<T>(ctx, seq, KernelFn::Identity)?;
    for (j, v) in odd.iter() {
        even.magnitudes[j] = Some(v);
    }
    Ok(even)
}

/// Picks `j = (q-1)/2` out of a spectrum.
pub fn extract_quadratic<T: Real>(spec: &Spectrum<T>) -> Result<LValue<T>> {
    let q = spec.q;
    let j = ((q - 1) / 2) as usize;
    let value = spec.get(j).ok_or(Error::MissingCoefficient { q, j })?;
    Ok(LValue {
        q,
        value,
        method: Method::Fft,
        err_bound: estimate_err_bound(q, Method::Fft, T::unit_roundoff()),
        parity: Parity::of(q),
    })
}

/// `|L(1, χ□)|` through the transform pipeline, kernel chosen by parity.
pub fn l1_fft<T: Real>(ctx: &PrimeContext, seq: &PowerSequence) -> Result<LValue<T>> {
    let kernel = match ctx.parity {
        Parity::Even => KernelFn::LogSinNeg,
        Parity::Odd => KernelFn::Identity,
    };
    extract_quadratic(&l1_fft_spectrum::<T>(ctx, seq, kernel)?)
}

/// Relative error allowed for a single kernel evaluation, in units of `eps`.
const KERNEL_ULPS: f64 = 4.0;

/// `Σ_{a=1}^{q-1} |f(a/q)|` for the kernel of each parity, in closed form:
/// `Σ -log sin(πa/q) = (q-1) log 2 - log q` and
/// `Σ log Γ(a/q) = ((q-1)/2) log 2π - (1/2) log q`.
fn kernel_mass<T: Real>(q: u64, method: Method) -> T {
    let qt = T::from_int(q);
    let ln2 = T::LN_2();
    match (Parity::of(q), method) {
        (Parity::Even, Method::Direct) => {
            T::from_int(q - 1) / T::lit(2.0) * (T::lit(2.0) * T::PI()).ln() - qt.ln() / T::lit(2.0)
        }
        (Parity::Even, _) => T::from_int(q - 1) * ln2 - qt.ln(),
        // |2a/q - 1| summed over the whole group: (q-1)/2 on average, bounded by q/2
        (Parity::Odd, _) => qt / T::lit(2.0),
    }
}

/// A priori absolute error bound for `|L(1, χ□)|`.
///
/// * direct / alternating, even parity: compensated summation of `n` terms,
///   `(2 eps + n eps²) Σ|terms|`, plus per-term kernel error, times the prefactor.
/// * odd parity, direct / alternating: the character sum is exact in
///   integers; only the final division and scaling round.
/// * fft: the transform's root mean square model `Δ(N, eps)` times the norm
///   of the transformed sequence (`‖x‖₂`, or `√N ‖y‖∞` for the log-sin
///   sequence), times the prefactor.
pub fn estimate_err_bound<T: Real>(q: u64, method: Method, machine_eps: T) -> T {
    let parity = Parity::of(q);
    let pre = prefactor::<T>(q, parity);
    let eps = machine_eps;
    let n = T::from_int(q - 1);
    let mass = kernel_mass::<T>(q, method);
    let kernel = T::lit(KERNEL_ULPS) * eps * mass;
    match (method, parity) {
        (Method::Fft, _) => {
            let len = ((q - 1) / 2).max(2) as usize;
            let delta = fftcheck::delta_model(len, eps);
            let norm = match parity {
                Parity::Odd => fftcheck::norm2_x::<T>(q),
                Parity::Even => T::from_int(len as u64).sqrt() * fftcheck::norminf_y::<T>(q),
            };
            pre * delta * norm
        }
        (_, Parity::Odd) => {
            // |S|/q <= q/2, so the value is at most π √q / 2
            T::lit(4.0) * eps * pre * mass
        }
        (_, Parity::Even) => pre * ((T::lit(2.0) * eps + n * eps * eps) * mass + kernel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_power_sequence;

    fn table(q: u64) -> f64 {
        match q {
            3 => 0.604_599_788_078_072_6,
            5 => 0.430_408_940_964_004_06,
            7 => 1.187_410_411_723_725_9,
            13 => 0.662_735_391_071_845_5,
            17 => 1.016_084_833_842_840_8,
            23 => 1.965_202_054_107_859_2,
            _ => unreachable!(),
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn direct_matches_table() {
        for q in [3, 5, 23, 17] {
            let v = l1_direct::<f64>(q).unwrap();
            assert!(rel(v.value, table(q)) < 1e-13, "q={q}: {}", v.value);
            assert_eq!(v.method, Method::Direct);
        }
        assert!(matches!(l1_direct::<f64>(9), Err(Error::InvalidModulus(9))));
        assert!(matches!(l1_direct::<f64>(2), Err(Error::InvalidModulus(2))));
    }

    #[test]
    fn alternating_matches_table_and_direct() {
        for q in [7u64, 13] {
            let ctx = PrimeContext::new(q).unwrap();
            let seq = build_power_sequence(&ctx).unwrap();
            let v = l1_alternating::<f64>(&ctx, &seq).unwrap();
            assert!(rel(v.value, table(q)) < 1e-13);
            let d = l1_direct::<f64>(q).unwrap();
            assert!((v.value - d.value).abs() <= 1e-12);
            let s = l1_alternating_streaming(&ctx, f64::unit_roundoff());
            assert_eq!(s.value, v.value);
        }
    }

    #[test]
    fn sequence_mismatch() {
        let ctx = PrimeContext::new(7).unwrap();
        let seq = build_power_sequence(&PrimeContext::new(11).unwrap()).unwrap();
        assert!(matches!(
            l1_alternating::<f64>(&ctx, &seq),
            Err(Error::Mismatch {
                context: 7,
                sequence: 11
            })
        ));
    }

    #[test]
    fn fft_examples() {
        let ctx = PrimeContext::new(7).unwrap();
        let seq = build_power_sequence(&ctx).unwrap();
        let spec = l1_fft_spectrum::<f64>(&ctx, &seq, KernelFn::Identity).unwrap();
        let direct = l1_direct::<f64>(7).unwrap().value;
        assert!((spec.get(3).unwrap() - direct).abs() <= 1e-10);
        assert!(spec.get(2).is_none());
        assert!(matches!(
            extract_quadratic(&l1_fft_spectrum::<f64>(&ctx, &seq, KernelFn::LogSinNeg).unwrap()),
            Err(Error::MissingCoefficient { q: 7, j: 3 })
        ));

        let ctx = PrimeContext::new(13).unwrap();
        let seq = build_power_sequence(&ctx).unwrap();
        for kernel in [KernelFn::LogSinNeg, KernelFn::LogGamma] {
            let spec = l1_fft_spectrum::<f64>(&ctx, &seq, kernel).unwrap();
            assert!(rel(spec.get(6).unwrap(), table(13)) < 1e-12, "{kernel:?}");
        }

        for q in [3u64, 5] {
            let ctx = PrimeContext::new(q).unwrap();
            let seq = build_power_sequence(&ctx).unwrap();
            let v = l1_fft::<f64>(&ctx, &seq).unwrap();
            assert!(rel(v.value, table(q)) < 1e-13, "q={q}");
            assert_eq!(v.method, Method::Fft);
        }
    }

    #[test]
    fn class_number_scaling_for_odd_parity() {
        // √q/π · L = h(-q) must be an integer
        for q in crate::arith::primes_in_range(7, 2000)
            .into_iter()
            .filter(|q| q % 4 == 3)
        {
            let v = l1_direct::<f64>(q).unwrap().value;
            let h = (q as f64).sqrt() / std::f64::consts::PI * v;
            assert!(
                (h - h.round()).abs() < 1e-6 && h.round() >= 1.0,
                "q={q}: {h}"
            );
        }
    }

    #[test]
    fn err_bound_shape() {
        let eps = f64::unit_roundoff();
        for m in [Method::Direct, Method::Alternating, Method::Fft] {
            assert!(estimate_err_bound(3, m, eps) < 1e-13, "{m:?}");
            let primes = crate::arith::primes_in_range(3, 5000);
            for parity in [Parity::Even, Parity::Odd] {
                let bounds: Vec<f64> = primes
                    .iter()
                    .filter(|&&q| Parity::of(q) == parity)
                    .map(|&q| estimate_err_bound(q, m, eps))
                    .collect();
                assert!(bounds.windows(2).all(|w| w[0] <= w[1]), "{m:?} {parity:?}");
            }
        }
    }

    #[test]
    fn fft_bound_at_largest_prime_below_ten_million() {
        // without the prefactor and kernel term: Δ(N, 2^-64) ‖x‖₂ <= 1.99e-16
        let q = 9_999_991u64;
        let eps = 2f64.powi(-64);
        let raw = fftcheck::delta_model(((q - 1) / 2) as usize, eps) * fftcheck::norm2_x::<f64>(q);
        assert!(raw < 1.99e-16, "{raw}");
        let full = estimate_err_bound(q, Method::Fft, eps);
        let pre = std::f64::consts::PI / (q as f64).sqrt();
        assert!((full - pre * raw).abs() <= 1e-15 * full);
    }

    #[test]
    fn single_precision_pipeline() {
        let ctx = PrimeContext::new(13).unwrap();
        let seq = build_power_sequence(&ctx).unwrap();
        let v = l1_alternating::<f32>(&ctx, &seq).unwrap();
        assert!((v.value as f64 - table(13)).abs() < 1e-5);
    }
}

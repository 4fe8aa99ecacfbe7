//! Special-function kernels on the open unit interval.
//!
//! `log_gamma` uses the Taylor expansion of `log Γ(1 + y)` around `y = 0`,
//!
//! ```text
//! log Γ(1 + y) = -γ y + Σ_{k ≥ 2} (-1)^k ζ(k) y^k / k,    |y| < 1,
//! ```
//!
//! with `y = x - 1` on `[1/2, 1)` (every term is then non-negative, so there
//! is no cancellation even as `log Γ(x) → 0` at `x = 1`) and
//! `log Γ(x) = log Γ(1 + x) - log x` on `(0, 1/2)`.

use crate::error::{Error, Result};
use crate::real::Real;

/// `ζ(k)` for `k = 2, 3, ...`; enough terms for `|y| <= 1/2` at binary64.
const ZETA: [f64; 64] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_2,
    1.082_323_233_711_138_1,
    1.036_927_755_143_37,
    1.017_343_061_984_449_2,
    1.008_349_277_381_923,
    1.004_077_356_197_944_4,
    1.002_008_392_826_082_1,
    1.000_994_575_127_818,
    1.000_494_188_604_119_4,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_8,
    1.000_030_588_236_307,
    1.000_015_282_259_408_6,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_5,
    1.000_000_953_962_033_8,
    1.000_000_476_932_986_9,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926,
    1.000_000_059_608_189,
    1.000_000_029_803_503_4,
    1.000_000_014_901_554_9,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334,
    1.000_000_001_862_659_8,
    1.000_000_000_931_327_5,
    1.000_000_000_465_662_8,
    1.000_000_000_232_831,
    1.000_000_000_116_415_5,
    1.000_000_000_058_207_7,
    1.000_000_000_029_103_8,
    1.000_000_000_014_552,
    1.000_000_000_007_276,
    1.000_000_000_003_638,
    1.000_000_000_001_819,
    1.000_000_000_000_909_5,
    1.000_000_000_000_454_7,
    1.000_000_000_000_227_4,
    1.000_000_000_000_113_7,
    1.000_000_000_000_056_8,
    1.000_000_000_000_028_4,
    1.000_000_000_000_014_2,
    1.000_000_000_000_007,
    1.000_000_000_000_003_6,
    1.000_000_000_000_001_8,
    1.000_000_000_000_000_9,
    1.000_000_000_000_000_4,
    1.000_000_000_000_000_2,
    1.000000000000000111022,
    1.000000000000000055511,
    1.000000000000000027756,
    1.000000000000000013878,
    1.000000000000000006939,
    1.000000000000000003469,
    1.000000000000000001735,
    1.000000000000000000867,
    1.000000000000000000434,
    1.000000000000000000217,
    1.000000000000000000108,
    1.000000000000000000054,
    1.000000000000000000027,
];

/// Selects the function sampled at `a_k / q` by the transform evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFn {
    /// `f(x) = x`; serves the odd characters.
    Identity,
    /// `f(x) = log Γ(x)`; serves the even characters.
    LogGamma,
    /// `f(x) = -log sin(π x)`, the reflection-combined even kernel.
    LogSinNeg,
}

impl KernelFn {
    pub fn eval<T: Real>(self, x: T) -> Result<T> {
        match self {
            KernelFn::Identity => {
                check_unit_interval("identity", x)?;
                Ok(x)
            }
            KernelFn::LogGamma => log_gamma(x),
            KernelFn::LogSinNeg => neg_log_sin_pi(x),
        }
    }
}

fn check_unit_interval<T: Real>(function: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x < T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: x.to_f64().unwrap_or(f64::NAN),
            domain: "(0, 1)",
        })
    }
}

/// `log Γ(1 + y)` for `|y| <= 1/2`.
fn log_gamma_1p<T: Real>(y: T) -> T {
    let mut acc = T::zero();
    for (i, &z) in ZETA.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let coeff = if i % 2 == 0 { z / k } else { -z / k };
        acc = acc * y + T::lit(coeff);
    }
    // acc holds Σ_{k>=2} (-1)^k ζ(k) y^{k-2} / k
    (acc * y - T::euler_gamma()) * y
}

/// Natural logarithm of `Γ(x)` for `0 < x < 1`.
pub fn log_gamma<T: Real>(x: T) -> Result<T> {
    check_unit_interval("log_gamma", x)?;
    Ok(log_gamma_unchecked(x))
}

#[inline]
pub(crate) fn log_gamma_unchecked<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x >= half {
        log_gamma_1p(x - T::one())
    } else {
        log_gamma_1p(x) - x.ln()
    }
}

/// `-log(sin(π x))` for `0 < x < 1`.
pub fn neg_log_sin_pi<T: Real>(x: T) -> Result<T> {
    check_unit_interval("neg_log_sin_pi", x)?;
    let half = T::lit(0.5);
    // 1 - x is exact on [1/2, 1)
    let r = if x > half { T::one() - x } else { x };
    Ok(neg_log_sin_pi_reduced(r, half - r))
}

/// `-log(sin(π a / q))` for integers `0 < a < q`, with the argument reduced
/// exactly in integer arithmetic.
#[inline]
pub fn neg_log_sin_pi_ratio<T: Real>(a: u64, q: u64) -> T {
    debug_assert!(a > 0 && a < q);
    let s = a.min(q - a);
    let qt = T::from_int(q);
    // distance to 1/2 is (q - 2s) / (2q), exact numerator
    neg_log_sin_pi_reduced(
        T::from_int(s) / qt,
        T::from_int(q - 2 * s) / (T::lit(2.0) * qt),
    )
}

/// `r` in `(0, 1/2]`, `d = 1/2 - r`. Near `1/2` the value is
/// `-log(cos(π d)) = -log1p(-2 sin²(π d / 2))`, which keeps full relative accuracy.
#[inline]
fn neg_log_sin_pi_reduced<T: Real>(r: T, d: T) -> T {
    if r <= T::lit(0.25) {
        -(T::PI() * r).sin().ln()
    } else {
        let s = (T::FRAC_PI_2() * d).sin();
        -(-(T::lit(2.0) * s * s)).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulps(a: f64, b: f64) -> f64 {
        let scale = a.abs().max(b.abs());
        if scale == 0.0 {
            return 0.0;
        }
        (a - b).abs() / (f64::EPSILON * scale)
    }

    #[test]
    fn log_gamma_at_half() {
        let v = log_gamma(0.5f64).unwrap();
        assert!(ulps(v, 0.5 * std::f64::consts::PI.ln()) <= 2.0, "{v}");
        assert!((v - 0.5723649429247001).abs() < 1e-15);
    }

    #[test]
    fn log_gamma_third_against_reference() {
        // mpmath: loggamma(1/3) at 40 digits
        let v = log_gamma(1.0f64 / 3.0).unwrap();
        assert!(ulps(v, 0.985_420_646_927_767_1) <= 4.0, "{v}");
    }

    #[test]
    fn reflection_identity() {
        let pi = std::f64::consts::PI;
        for i in 1..1000 {
            let x = i as f64 / 1000.0;
            let lhs = log_gamma(x).unwrap() + log_gamma(1.0 - x).unwrap();
            let rhs = pi.ln() + neg_log_sin_pi(x).unwrap();
            let scale = [lhs, pi.ln(), rhs]
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((lhs - rhs).abs() <= 8.0 * f64::EPSILON * scale, "x={x}");
        }
    }

    #[test]
    fn domain_errors() {
        for x in [0.0f64, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(log_gamma(x).is_err());
            assert!(neg_log_sin_pi(x).is_err());
        }
        assert!(KernelFn::Identity.eval(1.0f64).is_err());
        assert_eq!(KernelFn::Identity.eval(0.25f64).unwrap(), 0.25);
    }

    #[test]
    fn neg_log_sin_examples() {
        assert_eq!(neg_log_sin_pi(0.5f64).unwrap(), 0.0);
        let v = neg_log_sin_pi(1.0f64 / 9_999_991.0).unwrap();
        assert!((v - 14.97336).abs() < 1e-5, "{v}");
        let w: f64 = neg_log_sin_pi_ratio(1, 9_999_991);
        assert!(ulps(v, w) <= 2.0);
        for i in 1..500 {
            // y and 1 - y are both exact
            let y = 1.0 - (i as f64 / 1000.0 + 1e-7);
            let a = neg_log_sin_pi(1.0 - y).unwrap();
            let b = neg_log_sin_pi(y).unwrap();
            assert!(ulps(a, b) <= 2.0 || (a - b).abs() < 1e-300, "y={y}");
        }
    }

    #[test]
    fn neg_log_sin_is_unimodal() {
        let vals: Vec<f64> = (1..10_000)
            .map(|i| neg_log_sin_pi(i as f64 * 1e-4).unwrap())
            .collect();
        // index 4999 is x = 1/2
        assert!(vals[..5000].windows(2).all(|w| w[0] > w[1]));
        assert!(vals[4999..].windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ratio_form_matches_real_form() {
        for q in [5u64, 13, 101, 9973] {
            for a in 1..q.min(400) {
                let x = a as f64 / q as f64;
                let lhs: f64 = neg_log_sin_pi_ratio(a, q);
                let rhs = neg_log_sin_pi(x).unwrap();
                assert!(
                    (lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs.abs().max(1.0),
                    "{a}/{q}"
                );
            }
        }
    }

    #[test]
    fn works_in_single_precision() {
        let v = log_gamma(0.5f32).unwrap();
        assert!((v - 0.572_364_9).abs() < 1e-6);
        let s: f32 = neg_log_sin_pi_ratio(1, 4);
        assert!((s - 0.5 * 2f32.ln()).abs() < 1e-6);
    }
}

//! Accuracy model for the transform pipeline and run-time round-trip checks.
//!
//! The root mean square relative error of a length-`N` FFT is modelled as
//! `Δ(N, ε) = 0.6 ε √(log₂ N)`. A forward-then-inverse round trip of `u`
//! should then satisfy `E₂ < Δ(2+Δ) ‖u‖₂` and `E∞ < Δ(2+Δ) √N ‖u‖∞`.

use std::fmt;

use num_complex::Complex;

use crate::arith::{PowerSequence, PrimeContext};
use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::real::Real;
use crate::special::neg_log_sin_pi_ratio;

/// `0.6 ε √(log₂ N)`.
pub fn delta_model<T: Real>(n: usize, eps: T) -> T {
    T::lit(0.6) * eps * T::from_int(n as u64).log2().sqrt()
}

/// `‖x‖₂` for `x_k = 2 a_k/q - 1`, `k < (q-1)/2`: `√((q-1)(q-2)/(6q))`.
pub fn norm2_x<T: Real>(q: u64) -> T {
    let num = T::from_int(q - 1) * T::from_int(q - 2);
    (num / (T::lit(6.0) * T::from_int(q))).sqrt()
}

/// `‖y‖∞ = -log sin(π/q)` for `y_k = -log sin(π a_k/q)`.
pub fn norminf_y<T: Real>(q: u64) -> T {
    neg_log_sin_pi_ratio(1, q)
}

/// Measured and modelled round-trip errors for one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct FftErrorReport<T> {
    pub q: u64,
    /// Transform length `(q-1)/2`.
    pub n: usize,
    pub eps: T,
    pub delta: T,
    pub norm2_x: T,
    pub norminf_x: T,
    pub norm2_y: T,
    pub norminf_y: T,
    pub e2_x: T,
    pub e2_y: T,
    pub einf_x: T,
    pub einf_y: T,
    pub bound_e2_x: T,
    pub bound_e2_y: T,
    pub bound_einf_x: T,
    pub bound_einf_y: T,
}

impl<T: Real> FftErrorReport<T> {
    /// Both L2 round-trip errors are within the model bound.
    pub fn e2_within_bounds(&self) -> bool {
        self.e2_x <= self.bound_e2_x && self.e2_y <= self.bound_e2_y
    }

    pub fn einf_within_bounds(&self) -> bool {
        self.einf_x <= self.bound_einf_x && self.einf_y <= self.bound_einf_y
    }

    pub const CSV_HEADER: &'static str =
        "q,n,eps,delta,norm2_x,norminf_y,e2_x,e2_y,einf_x,einf_y,bound_e2_x,bound_e2_y";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:e},{:e},{},{},{:e},{:e},{:e},{:e},{:e},{:e}",
            self.q,
            self.n,
            self.eps,
            self.delta,
            self.norm2_x,
            self.norminf_y,
            self.e2_x,
            self.e2_y,
            self.einf_x,
            self.einf_y,
            self.bound_e2_x,
            self.bound_e2_y
        )
    }
}

impl<T: Real> fmt::Display for FftErrorReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = |b: bool| if b { "ok" } else { "EXCEEDED" };
        writeln!(f, "q = {}, N = {}, eps = {:e}", self.q, self.n, self.eps)?;
        writeln!(f, "Delta(N, eps)        = {:e}", self.delta)?;
        writeln!(
            f,
            "Delta(2 + Delta)     = {:e}",
            self.delta * (T::lit(2.0) + self.delta)
        )?;
        writeln!(
            f,
            "||x||_2 = {}   ||x||_inf = {}",
            self.norm2_x, self.norminf_x
        )?;
        writeln!(
            f,
            "||y||_2 = {}   ||y||_inf = {}",
            self.norm2_y, self.norminf_y
        )?;
        writeln!(
            f,
            "E2(x)   = {:e}  bound {:e}  rel {:e}  [{}]",
            self.e2_x,
            self.bound_e2_x,
            self.e2_x / self.norm2_x,
            ok(self.e2_x <= self.bound_e2_x)
        )?;
        writeln!(
            f,
            "E2(y)   = {:e}  bound {:e}  rel {:e}  [{}]",
            self.e2_y,
            self.bound_e2_y,
            self.e2_y / self.norm2_y,
            ok(self.e2_y <= self.bound_e2_y)
        )?;
        writeln!(
            f,
            "Einf(x) = {:e}  bound {:e}  [{}]",
            self.einf_x,
            self.bound_einf_x,
            ok(self.einf_x <= self.bound_einf_x)
        )?;
        write!(
            f,
            "Einf(y) = {:e}  bound {:e}  [{}]",
            self.einf_y,
            self.bound_einf_y,
            ok(self.einf_y <= self.bound_einf_y)
        )
    }
}

/// `(E₂, E∞)` of `inverse(forward(u)) - u` for a real sequence.
pub fn roundtrip_errors<T: Real>(plan: &FftPlan<T>, u: &[T]) -> (T, T) {
    let mut buf: Vec<Complex<T>> = u.iter().map(|&x| Complex::new(x, T::zero())).collect();
    plan.forward(&mut buf);
    plan.inverse(&mut buf);
    let mut sq = T::zero();
    let mut max = T::zero();
    for (z, &x) in buf.iter().zip(u) {
        let d = (*z - Complex::new(x, T::zero())).norm();
        sq += d * d;
        max = max.max(d);
    }
    (sq.sqrt(), max)
}

fn norms<T: Real>(u: &[T]) -> (T, T) {
    let sq = u.iter().fold(T::zero(), |acc, &x| acc + x * x);
    let inf = u.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));
    (sq.sqrt(), inf)
}

/// Round-trip diagnostics on the two sequences the L-value transforms use,
/// `x_k = 2a_k/q - 1` and `y_k = -log sin(π a_k/q)`, `k < (q-1)/2`.
pub fn roundtrip_diagnose<T: Real>(
    ctx: &PrimeContext,
    seq: &PowerSequence,
    eps: T,
) -> Result<FftErrorReport<T>> {
    if ctx.q != seq.q || seq.len() as u64 != ctx.q - 1 {
        return Err(Error::Mismatch {
            context: ctx.q,
            sequence: seq.q,
        });
    }
    let q = ctx.q;
    let n = ctx.qbar as usize;
    let qt = T::from_int(q);
    let half = seq.first_half();
    let x: Vec<T> = half
        .iter()
        .map(|&a| T::from_signed(2 * a as i64 - q as i64) / qt)
        .collect();
    let y: Vec<T> = half
        .iter()
        .map(|&a| neg_log_sin_pi_ratio(a as u64, q))
        .collect();

    let plan = FftPlan::<T>::new(n)?;
    let (e2_x, einf_x) = roundtrip_errors(&plan, &x);
    let (e2_y, einf_y) = roundtrip_errors(&plan, &y);

    // Δ is only defined for N >= 2; the length-1 transform is exact
    let delta = delta_model(n.max(2), eps);
    let factor = delta * (T::lit(2.0) + delta);
    let sqrt_n = T::from_int(n as u64).sqrt();
    let norm2_x = norm2_x::<T>(q);
    let norminf_y = norminf_y::<T>(q);
    let (norm2_y, _) = norms(&y);
    let (_, norminf_x) = norms(&x);

    Ok(FftErrorReport {
        q,
        n,
        eps,
        delta,
        norm2_x,
        norminf_x,
        norm2_y,
        norminf_y,
        e2_x,
        e2_y,
        einf_x,
        einf_y,
        bound_e2_x: factor * norm2_x,
        bound_e2_y: factor * norm2_y,
        bound_einf_x: factor * sqrt_n * norminf_x,
        bound_einf_y: factor * sqrt_n * norminf_y,
    })
}

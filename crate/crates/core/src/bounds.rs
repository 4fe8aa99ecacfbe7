//! Constants derived from `L(1, χ□)`: the lower-bound ratio `c1(q)`, the
//! Siegel-zero constant `c2(q)` and its ingredients `c3(q)`, `c4(q)`, the
//! Littlewood indices, Joshi's inequalities and the class number `h(-q)`.

use crate::arith::Parity;
use crate::error::{Error, Result};
use crate::lfun::LValue;
use crate::real::{KahanSum, Real};

/// Largest admissible distance of `(√q/π) L` from an integer.
pub const CLASS_NUMBER_TOLERANCE: f64 = 1e-6;

/// Incremental `S(n) = Σ_{m=2}^{n} (log m)/m` with compensated summation.
///
/// Cloning the accumulator and extending the clone performs exactly the
/// roundings a single sequential pass would.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SAccumulator<T> {
    n: u64,
    sum: KahanSum<T>,
}

impl<T: Real> SAccumulator<T> {
    /// `S(1) = 0`.
    pub fn new() -> Self {
        Self {
            n: 1,
            sum: KahanSum::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn value(&self) -> T {
        self.sum.value()
    }

    /// Extends to `S(target)`; a no-op when already past `target`.
    pub fn extend_to(&mut self, target: u64) -> T {
        while self.n < target {
            self.n += 1;
            let m = T::from_int(self.n);
            self.sum.add(m.ln() / m);
        }
        self.value()
    }
}

impl<T: Real> Default for SAccumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// `S(q) = Σ_{n=2}^{q} (log n)/n`.
pub fn s_of_q<T: Real>(q: u64) -> T {
    SAccumulator::new().extend_to(q)
}

/// Explicit Pólya-Vinogradov factor `g(q)` (Lapkova).
pub fn lapkova_g<T: Real>(q: u64, parity: Parity) -> T {
    let qt = T::from_int(q);
    let log_q = qt.ln();
    let tail = qt.sqrt() * log_q;
    match parity {
        Parity::Even => {
            T::lit(2.0) / (T::PI() * T::PI()) + T::lit(0.9467) / log_q + T::lit(1.668) / tail
        }
        Parity::Odd => {
            T::one() / (T::lit(2.0) * T::PI()) + T::lit(0.8204) / log_q + T::lit(1.0286) / tail
        }
    }
}

/// `c3 = e S(q)/(log q)²`, `c4 = e g(q)/√q`.
pub fn c3_c4<T: Real>(q: u64, parity: Parity, s: T) -> (T, T) {
    let qt = T::from_int(q);
    let log_q = qt.ln();
    let e = T::E();
    (
        e * s / (log_q * log_q),
        e * lapkova_g::<T>(q, parity) / qt.sqrt(),
    )
}

/// Per-prime constants of the Siegel-zero estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRecord<T> {
    pub q: u64,
    pub s: T,
    pub gq: T,
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub c4: T,
    /// `1 - c2/log q`: no real zero of `L(s, χ□)` lies in `[beta_upper, 1)`.
    pub beta_upper: T,
}

/// Bounds for `l.q`, computing `S(q)` from scratch.
pub fn siegel_bounds<T: Real>(l: &LValue<T>) -> BoundsRecord<T> {
    siegel_bounds_with_s(l, s_of_q(l.q))
}

/// Bounds for `l.q` given a precomputed `S(q)`.
pub fn siegel_bounds_with_s<T: Real>(l: &LValue<T>, s: T) -> BoundsRecord<T> {
    let q = l.q;
    let log_q = T::from_int(q).ln();
    let (c3, c4) = c3_c4(q, l.parity, s);
    let c1 = l.value / log_q;
    let c2 = c1 / (c3 + c4);
    BoundsRecord {
        q,
        s,
        gq: lapkova_g(q, l.parity),
        c1,
        c2,
        c3,
        c4,
        beta_upper: T::one() - c2 / log_q,
    }
}

fn loglog<T: Real>(q: u64) -> T {
    T::from_int(q).ln().ln()
}

/// `(ULI, LLI)` without the domain check; meaningful for every `q >= 3`.
pub fn littlewood_raw<T: Real>(q: u64, l: T) -> (T, T) {
    let ll = loglog::<T>(q);
    let eg = T::euler_gamma().exp();
    let uli = l / (T::lit(2.0) * eg * ll);
    let lli = l * (T::lit(12.0) * eg / (T::PI() * T::PI())) * ll;
    (uli, lli)
}

/// Upper and lower Littlewood indices, defined here for `q >= 5`.
pub fn littlewood_indices<T: Real>(l: &LValue<T>) -> Result<(T, T)> {
    if l.q < 5 {
        return Err(Error::Domain {
            function: "littlewood_indices",
            value: l.q as f64,
            domain: "q >= 5",
        });
    }
    Ok(littlewood_raw(l.q, l.value))
}

/// `(L/loglog q >= e^γ, L·loglog q <= π²/(6e^γ))`.
pub fn joshi_flags<T: Real>(l: &LValue<T>) -> (bool, bool) {
    let ll = loglog::<T>(l.q);
    let eg = T::euler_gamma().exp();
    (
        l.value / ll >= eg,
        l.value * ll <= T::PI() * T::PI() / (T::lit(6.0) * eg),
    )
}

/// `h(-q)` from the class number formula, with its distance from the rounded value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassNumber<T> {
    pub h: u64,
    pub residual: T,
}

/// `h(-q) = (√q/π) L(1, χ□)` for `q ≡ 3 (mod 4)`, `q >= 7`; `None` otherwise.
pub fn class_number<T: Real>(l: &LValue<T>) -> Result<Option<ClassNumber<T>>> {
    let q = l.q;
    if q % 4 != 3 || q < 7 {
        return Ok(None);
    }
    let scaled = T::from_int(q).sqrt() / T::PI() * l.value;
    let h = scaled.round();
    let residual = (scaled - h).abs();
    if residual > T::lit(CLASS_NUMBER_TOLERANCE) || h < T::one() {
        return Err(Error::Integrality {
            q,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Some(ClassNumber {
        h: h.to_u64().expect("class number fits in u64"),
        residual,
    }))
}

/// Littlewood, Joshi and class-number data for one prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexRecord<T> {
    pub q: u64,
    /// `None` for `q < 5`.
    pub uli: Option<T>,
    pub lli: Option<T>,
    pub joshi1: bool,
    pub joshi2: bool,
    pub class_number: Option<ClassNumber<T>>,
}

pub fn index_record<T: Real>(l: &LValue<T>) -> Result<IndexRecord<T>> {
    let (uli, lli) = match littlewood_indices(l) {
        Ok((u, v)) => (Some(u), Some(v)),
        Err(_) => (None, None),
    };
    let (joshi1, joshi2) = joshi_flags(l);
    Ok(IndexRecord {
        q: l.q,
        uli,
        lli,
        joshi1,
        joshi2,
        class_number: class_number(l)?,
    })
}

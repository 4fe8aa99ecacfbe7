//! Scalar abstraction shared by every numeric kernel in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the kernels are generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Euler-Mascheroni constant.
    fn euler_gamma() -> Self {
        Self::lit(EULER_GAMMA)
    }

    /// Unit roundoff of the format: half the gap between 1 and the next value.
    fn unit_roundoff() -> Self {
        Self::epsilon() / Self::lit(2.0)
    }

    /// Converts an `f64` literal into `Self`, rounding to nearest.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    #[inline]
    fn from_int(n: u64) -> Self {
        Self::from_u64(n).expect("integer is representable")
    }

    #[inline]
    fn from_signed(n: i64) -> Self {
        Self::from_i64(n).expect("integer is representable")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Debug
        + Display
        + LowerExp
        + Default
        + Send
        + Sync
        + 'static
{
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// Kahan-compensated running sum.
///
/// The state is plain data so a partially accumulated sum can be cloned and
/// extended elsewhere with exactly the same sequence of roundings.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum
    }

    pub fn compensation(&self) -> T {
        self.compensation
    }
}

impl<T: Real> FromIterator<T> for KahanSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_addends() {
        let mut naive = 1.0f64;
        let mut acc = KahanSum::new();
        acc.add(1.0f64);
        for _ in 0..10_000 {
            naive += 1e-16;
            acc.add(1e-16);
        }
        assert_eq!(naive, 1.0);
        assert!((acc.value() - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn constants_match_std() {
        assert_eq!(f64::euler_gamma(), 0.5772156649015329);
        assert_eq!(f64::unit_roundoff(), 2f64.powi(-53));
        assert_eq!(f32::unit_roundoff(), 2f32.powi(-24));
    }
}

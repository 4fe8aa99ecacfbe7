//! `L(1, χ□)` for the quadratic character modulo odd primes, by three
//! independent methods, together with the constants derived from it: the
//! Siegel-zero bounds `c1..c4` and `β`, Littlewood indices, Joshi flags and
//! class numbers of `Q(√-q)`.
//!
//! The numerical kernels are generic over [`Real`] (`f32` or `f64`); the scan
//! driver works in `f64`.
//!
//! ```
//! use siegel::{arith::PrimeContext, lfun, bounds};
//!
//! let ctx = PrimeContext::new(23).unwrap();
//! let l = lfun::l1_alternating_streaming::<f64>(&ctx, f64::EPSILON / 2.0);
//! let h = bounds::class_number(&l).unwrap().unwrap();
//! assert_eq!(h.h, 3);
//! ```

pub mod arith;
pub mod bounds;
pub mod error;
pub mod fft;
pub mod fftcheck;
pub mod golden;
pub mod lfun;
pub mod real;
pub mod scan;
pub mod special;

pub use arith::{Parity, PowerSequence, PrimeContext};
pub use bounds::{BoundsRecord, ClassNumber, IndexRecord};
pub use error::{Error, Result};
pub use fftcheck::FftErrorReport;
pub use lfun::{LValue, Method, Spectrum};
pub use real::Real;
pub use scan::{ScanConfig, ScanRow};

pub type LValueF64 = LValue<f64>;
pub type LValueF32 = LValue<f32>;
pub type SpectrumF64 = Spectrum<f64>;
pub type SpectrumF32 = Spectrum<f32>;
pub type BoundsRecordF64 = BoundsRecord<f64>;
pub type BoundsRecordF32 = BoundsRecord<f32>;
pub type IndexRecordF64 = IndexRecord<f64>;
pub type FftErrorReportF64 = FftErrorReport<f64>;
pub type FftErrorReportF32 = FftErrorReport<f32>;
pub type FftPlanF64 = fft::FftPlan<f64>;

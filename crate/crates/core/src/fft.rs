//! Arbitrary-length discrete Fourier transform.
//!
//! Composite lengths run through a recursive mixed-radix Cooley-Tukey
//! decomposition. Each radix step, twiddles included, is evaluated as one
//! compensated dot product per output (error-free products via fused
//! multiply-add, error-free sums), so a step costs about one rounding.
//!
//! A prime radix is evaluated directly when it is at most
//! [`MAX_DIRECT_RADIX`] or its O(p·n) cost is small. Larger primes use
//! Rader's algorithm when `p - 1` splits into such radices, and Bluestein's
//! chirp-z algorithm on a power-of-two convolution otherwise; nested Rader
//! steps compound their error. Every root of unity is computed directly from
//! an exactly reduced angle, never by recurrence.
//!
//! Convention: `forward(u)_j = Σ_k u_k e(-jk/n)`, `inverse` is the exact
//! inverse (it includes the `1/n` factor).

use num_complex::Complex;

use crate::arith::{factorize, find_primitive_root};
use crate::error::{Error, Result};
use crate::real::Real;

/// Prime radices up to this are always evaluated directly.
pub const MAX_DIRECT_RADIX: usize = 127;

/// `e(-j/n) = exp(-2πi j/n)`, accurate to about one ulp for any `j`.
pub fn unit_root<T: Real>(j: u64, n: u64) -> Complex<T> {
    let j = j % n;
    // 4j = quadrant * n + rem, angle = (π/2) (quadrant + rem/n)
    let quadrant = (4 * j as u128 / n as u128) as u64;
    let rem = (4 * j as u128 % n as u128) as u64;
    let (c, s) = if 2 * rem <= n {
        let t = T::FRAC_PI_2() * (T::from_int(rem) / T::from_int(n));
        (t.cos(), t.sin())
    } else {
        let t = T::FRAC_PI_2() * (T::from_int(n - rem) / T::from_int(n));
        (t.sin(), t.cos())
    };
    // (cos θ, sin θ) for θ = (π/2) quadrant + t
    let (cos, sin) = match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    Complex::new(cos, -sin)
}

#[derive(Debug, Clone)]
enum Algorithm<T> {
    Identity,
    Direct {
        roots: Vec<Complex<T>>,
    },
    /// One radix step fused with its twiddles: `out[j] = Σ_r sub_r[j mod m] e(-rj/n)`
    /// as a single compensated dot product per output.
    Fused {
        radix: usize,
        sub: Box<FftPlan<T>>,
        /// `roots[j] = e(-j/n)`
        roots: Vec<Complex<T>>,
    },
    CooleyTukey {
        radix: usize,
        radix_plan: Box<FftPlan<T>>,
        sub: Box<FftPlan<T>>,
        /// `twiddles[(r - 1) * m + k] = e(-rk/n)` for `1 <= r < radix`, `0 <= k < m`
        twiddles: Vec<Complex<T>>,
    },
    Rader {
        inner: Box<FftPlan<T>>,
        /// `gather[i] = g^i mod n`
        gather: Vec<usize>,
        /// transform of `e(-g^{-i}/n)`, pre-scaled by `1/(n - 1)`
        kernel: Vec<Complex<T>>,
    },
    Bluestein {
        inner: Box<FftPlan<T>>,
        chirp: Vec<Complex<T>>,
        /// transform of the conjugate chirp filter, pre-scaled by `1/m`
        filter: Vec<Complex<T>>,
    },
}

/// A reusable transform plan for one length.
#[derive(Debug, Clone)]
pub struct FftPlan<T> {
    len: usize,
    algorithm: Algorithm<T>,
}

impl<T: Real> FftPlan<T> {
    pub fn new(len: usize) -> Result<Self> {
        Self::build(len, len)
    }

    // `total` is the top-level length, which bounds how often this plan runs
    fn build(len: usize, total: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::ResourceLimit(0));
        }
        let algorithm = if len == 1 {
            Algorithm::Identity
        } else {
            let p = smallest_factor(len);
            if p == len {
                if direct_affordable(p, total) {
                    Self::direct(len)
                } else if factorize(p as u64 - 1)
                    .iter()
                    .all(|&f| direct_affordable(f as usize, total))
                {
                    Self::rader(len, total)?
                } else {
                    Self::bluestein(len)?
                }
            } else {
                let radix = if len.is_multiple_of(4) { 4 } else { p };
                Self::cooley_tukey(len, radix, total)?
            }
        };
        Ok(Self { len, algorithm })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn direct(n: usize) -> Algorithm<T> {
        Algorithm::Direct {
            roots: (0..n as u64).map(|j| unit_root(j, n as u64)).collect(),
        }
    }

    fn cooley_tukey(n: usize, radix: usize, total: usize) -> Result<Algorithm<T>> {
        let m = n / radix;
        if direct_affordable(radix, total) {
            let mut roots = alloc(n)?;
            roots.extend((0..n as u64).map(|j| unit_root(j, n as u64)));
            return Ok(Algorithm::Fused {
                radix,
                sub: Box::new(FftPlan::build(m, total)?),
                roots,
            });
        }
        let mut twiddles = alloc(m * (radix - 1))?;
        for r in 1..radix {
            for k in 0..m {
                twiddles.push(unit_root((r * k) as u64, n as u64));
            }
        }
        Ok(Algorithm::CooleyTukey {
            radix,
            radix_plan: Box::new(if direct_affordable(radix, total) {
                FftPlan {
                    len: radix,
                    algorithm: Self::direct(radix),
                }
            } else {
                FftPlan::build(radix, total)?
            }),
            sub: Box::new(FftPlan::build(m, total)?),
            twiddles,
        })
    }

    fn rader(n: usize, total: usize) -> Result<Algorithm<T>> {
        let l = n - 1;
        let inner = FftPlan::build(l, total)?;
        let g = find_primitive_root(n as u64)? as usize;
        let mut gather = alloc(l)?;
        let mut x = 1;
        for _ in 0..l {
            gather.push(x);
            x = x * g % n;
        }
        let mut b = alloc(l)?;
        b.extend((0..l).map(|i| unit_root(gather[(l - i) % l] as u64, n as u64)));
        let mut kernel = vec![Complex::new(T::zero(), T::zero()); l];
        inner.process(&b, 1, &mut kernel);
        // Σ_{k=1}^{n-1} e(-k/n) = -1 exactly; the computed value carries an
        // absolute error of order eps·√n that Σa would amplify
        kernel[0] = Complex::new(-T::one(), T::zero());
        let scale = T::one() / T::from_int(l as u64);
        for v in kernel.iter_mut() {
            *v *= scale;
        }
        Ok(Algorithm::Rader {
            inner: Box::new(inner),
            gather,
            kernel,
        })
    }

    fn bluestein(n: usize) -> Result<Algorithm<T>> {
        let m = (2 * n - 1).next_power_of_two();
        let inner = FftPlan::new(m)?;
        let two_n = 2 * n as u64;
        // chirp_k = e(-k²/(2n)), with k² reduced mod 2n in integers
        let mut chirp = alloc(n)?;
        chirp.extend((0..n as u64).map(|k| unit_root((k * k) % two_n, two_n)));
        let mut filter = vec![Complex::new(T::zero(), T::zero()); m];
        filter[0] = chirp[0].conj();
        for k in 1..n {
            filter[k] = chirp[k].conj();
            filter[m - k] = chirp[k].conj();
        }
        let mut transformed = vec![Complex::new(T::zero(), T::zero()); m];
        inner.process(&filter, 1, &mut transformed);
        let scale = T::one() / T::from_int(m as u64);
        for v in transformed.iter_mut() {
            *v *= scale;
        }
        Ok(Algorithm::Bluestein {
            inner: Box::new(inner),
            chirp,
            filter: transformed,
        })
    }

    /// In-place forward transform.
    pub fn forward(&self, data: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.len, "buffer length does not match plan");
        let input = data.to_vec();
        self.process(&input, 1, data);
    }

    /// In-place inverse transform, normalised by `1/n`.
    pub fn inverse(&self, data: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.len, "buffer length does not match plan");
        let input: Vec<_> = data.iter().map(|z| z.conj()).collect();
        self.process(&input, 1, data);
        let scale = T::one() / T::from_int(self.len as u64);
        for z in data.iter_mut() {
            *z = z.conj() * scale;
        }
    }

    /// Out-of-place forward transform of `input[0], input[stride], ...` into `out`.
    fn process(&self, input: &[Complex<T>], stride: usize, out: &mut [Complex<T>]) {
        let n = self.len;
        match &self.algorithm {
            Algorithm::Identity => out[0] = input[0],
            // roots of unity of order 2 and 4 are exact
            Algorithm::Direct { roots } if n <= 4 => {
                for (s, o) in out.iter_mut().enumerate() {
                    let mut acc = input[0];
                    for r in 1..n {
                        acc += input[r * stride] * roots[(r * s) % n];
                    }
                    *o = acc;
                }
            }
            Algorithm::Direct { roots } => {
                let column: Vec<_> = (0..n).map(|r| input[r * stride]).collect();
                for (s, o) in out.iter_mut().enumerate() {
                    *o = compensated_dot(&column, roots, s);
                }
            }
            Algorithm::Fused { radix, sub, roots } => {
                let p = *radix;
                let m = n / p;
                for r in 0..p {
                    sub.process(
                        &input[r * stride..],
                        stride * p,
                        &mut out[r * m..(r + 1) * m],
                    );
                }
                let mut column = vec![Complex::new(T::zero(), T::zero()); p];
                for k in 0..m {
                    for (r, c) in column.iter_mut().enumerate() {
                        *c = out[r * m + k];
                    }
                    for s in 0..p {
                        let j = k + s * m;
                        out[j] = compensated_dot(&column, roots, j);
                    }
                }
            }
            Algorithm::CooleyTukey {
                radix,
                radix_plan,
                sub,
                twiddles,
            } => {
                let p = *radix;
                let m = n / p;
                for r in 0..p {
                    sub.process(
                        &input[r * stride..],
                        stride * p,
                        &mut out[r * m..(r + 1) * m],
                    );
                }
                let mut column = vec![Complex::new(T::zero(), T::zero()); p];
                let mut spectrum = column.clone();
                for k in 0..m {
                    column[0] = out[k];
                    for r in 1..p {
                        column[r] = out[r * m + k] * twiddles[(r - 1) * m + k];
                    }
                    radix_plan.process(&column, 1, &mut spectrum);
                    for (s, v) in spectrum.iter().enumerate() {
                        out[k + s * m] = *v;
                    }
                }
            }
            Algorithm::Rader {
                inner,
                gather,
                kernel,
            } => {
                let l = n - 1;
                let x0 = input[0];
                let mut work: Vec<_> = gather.iter().map(|&i| input[i * stride]).collect();
                let mut freq = vec![Complex::new(T::zero(), T::zero()); l];
                inner.process(&work, 1, &mut freq);
                out[0] = x0 + freq[0];
                for (w, (f, h)) in work.iter_mut().zip(freq.iter().zip(kernel)) {
                    *w = (*f * *h).conj();
                }
                inner.process(&work, 1, &mut freq);
                // output index g^{-m} receives convolution term m
                for m in 0..l {
                    out[gather[(l - m) % l]] = x0 + freq[m].conj();
                }
            }
            Algorithm::Bluestein {
                inner,
                chirp,
                filter,
            } => {
                let m = filter.len();
                let mut work = vec![Complex::new(T::zero(), T::zero()); m];
                for k in 0..n {
                    work[k] = input[k * stride] * chirp[k];
                }
                let mut freq = vec![Complex::new(T::zero(), T::zero()); m];
                inner.process(&work, 1, &mut freq);
                // inverse transform via conjugation; 1/m is folded into the filter
                for (w, (f, h)) in work.iter_mut().zip(freq.iter().zip(filter)) {
                    *w = (*f * *h).conj();
                }
                inner.process(&work, 1, &mut freq);
                for k in 0..n {
                    out[k] = freq[k].conj() * chirp[k];
                }
            }
        }
    }
}

/// `Σ_r x[r] roots[r·j mod n]` with `n = roots.len()`, `j < n`.
fn compensated_dot<T: Real>(x: &[Complex<T>], roots: &[Complex<T>], j: usize) -> Complex<T> {
    let n = roots.len();
    let mut re = CompensatedSum::new(x[0].re);
    let mut im = CompensatedSum::new(x[0].im);
    let mut idx = 0;
    for &v in &x[1..] {
        idx += j;
        if idx >= n {
            idx -= n;
        }
        let w = roots[idx];
        re.add_product(v.re, w.re);
        re.add_product(-v.im, w.im);
        im.add_product(v.re, w.im);
        im.add_product(v.im, w.re);
    }
    Complex::new(re.value(), im.value())
}

/// Sum of products with the rounding errors of every product and partial sum
/// carried separately (Ogita-Rump-Oishi `Dot2`).
struct CompensatedSum<T> {
    sum: T,
    err: T,
}

impl<T: Real> CompensatedSum<T> {
    #[inline]
    fn new(first: T) -> Self {
        Self {
            sum: first,
            err: T::zero(),
        }
    }

    #[inline]
    fn add_product(&mut self, a: T, b: T) {
        let p = a * b;
        let p_err = a.mul_add(b, -p);
        let s = self.sum + p;
        let z = s - self.sum;
        let s_err = (self.sum - (s - z)) + (p - z);
        self.sum = s;
        self.err += p_err + s_err;
    }

    #[inline]
    fn value(&self) -> T {
        self.sum + self.err
    }
}

fn alloc<T>(len: usize) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len)
        .map_err(|_| Error::ResourceLimit(len))?;
    Ok(v)
}

/// Larger primes are evaluated directly while `p · n` stays below this.
const DIRECT_BUDGET: usize = 1 << 20;

fn direct_affordable(p: usize, total: usize) -> bool {
    p <= MAX_DIRECT_RADIX || p.saturating_mul(total) <= DIRECT_BUDGET
}

fn smallest_factor(n: usize) -> usize {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

//! In-house radix-2 FFT.
//!
//! Everything downstream that touches frequency space (coefficient sampling,
//! fast Toeplitz application, block projections) goes through this one
//! transform so that results are bit-for-bit reproducible across runs on the
//! same platform. Twiddle factors are tabulated once per plan with direct
//! sin/cos calls rather than recurrences, which keeps rounding independent of
//! the evaluation order.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Precomputed plan for transforms of one fixed power-of-two size.
#[derive(Debug, Clone)]
pub struct Fft {
    n: usize,
    // twiddles[k] = exp(-2*pi*i*k/n) for k in 0..n/2
    twiddles: Vec<Complex64>,
}

impl Fft {
    /// Builds a plan for size `n`. Panics if `n` is not a power of two.
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT size {n} is not a power of two");
        let twiddles = (0..n / 2)
            .map(|k| {
                let ang = -TAU * k as f64 / n as f64;
                Complex64::new(ang.cos(), ang.sin())
            })
            .collect();
        Fft { n, twiddles }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Forward transform, unscaled: X_k = sum_j x_j exp(-2*pi*i*jk/n).
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    /// Inverse transform, scaled by 1/n so that `inverse(forward(x)) == x`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
        let scale = 1.0 / self.n as f64;
        for x in data.iter_mut() {
            *x *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        assert_eq!(data.len(), n, "buffer length does not match plan size");
        if n < 2 {
            return;
        }

        // Bit-reversal permutation.
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                data.swap(i, j);
            }
        }

        let mut len = 2;
        while len <= n {
            let stride = n / len;
            let half = len / 2;
            let mut base = 0;
            while base < n {
                for k in 0..half {
                    let w = if inverse {
                        self.twiddles[k * stride].conj()
                    } else {
                        self.twiddles[k * stride]
                    };
                    let u = data[base + k];
                    let v = data[base + k + half] * w;
                    data[base + k] = u + v;
                    data[base + k + half] = u - v;
                }
                base += len;
            }
            len <<= 1;
        }
    }
}

/// One-shot forward DFT of a power-of-two buffer.
pub fn dft(data: &mut [Complex64]) {
    Fft::new(data.len()).forward(data);
}

/// One-shot inverse DFT of a power-of-two buffer.
pub fn idft(data: &mut [Complex64]) {
    Fft::new(data.len()).inverse(data);
}

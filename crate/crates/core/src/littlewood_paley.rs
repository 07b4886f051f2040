//! Discrete frequency partitions and the quadratic function built from
//! block projections.
//!
//! A boundary set induces cut points on the frequency grid `[0, N)`; the
//! maximal runs between consecutive cuts (cyclically closed) are the blocks.
//! Projecting onto a block keeps exactly those DFT bins. The quadratic
//! function stacks the block projections in square mean, and the ratio
//! `||S(f)||_p / ||f||_p` over random and structured inputs brackets the
//! equivalence constants empirically. Norms use the normalized counting
//! measure so constants are comparable across grid sizes; the brackets are
//! empirical bounds, never claimed as the true constants.

use crate::error::{Error, Result};
use crate::fft::Fft;
use crate::geometry::ClosedCircleSet;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// One cyclic run of frequencies: indices `(start + i) mod n` for
/// `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub len: usize,
}

/// Partition of the frequency grid `[0, N)` into maximal runs between cut
/// points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrequencyPartition {
    n: usize,
    cut_points: Vec<usize>,
    blocks: Vec<Block>,
}

/// Empirical bracket for the quadratic-function equivalence constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpConstantsReport {
    pub p: f64,
    pub n: usize,
    pub trials: usize,
    /// Smallest observed `||S(f)||_p / ||f||_p`: an upper bound for the
    /// lower equivalence constant.
    pub ratio_min: f64,
    /// Largest observed ratio: a lower bound for the upper constant.
    pub ratio_max: f64,
    pub seed: u64,
}

impl FrequencyPartition {
    /// Builds a partition directly from cut points (deduplicated, taken
    /// mod n). At least one cut is required; a single cut yields the
    /// one-block partition of the whole grid.
    pub fn from_cuts(n: usize, cuts: &[usize]) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::InvalidPartitionGrid(n));
        }
        let mut cut_points: Vec<usize> = cuts.iter().map(|&c| c % n).collect();
        cut_points.sort_unstable();
        cut_points.dedup();
        if cut_points.is_empty() {
            return Err(Error::InvalidPartitionGrid(n));
        }
        let m = cut_points.len();
        let mut blocks = Vec::with_capacity(m);
        for i in 0..m {
            let start = cut_points[i];
            let len = if i + 1 < m {
                cut_points[i + 1] - start
            } else {
                n - start + cut_points[0]
            };
            blocks.push(Block { start, len });
        }
        Ok(FrequencyPartition {
            n,
            cut_points,
            blocks,
        })
    }

    /// Discretizes a boundary set: each angle maps to the nearest frequency
    /// `round(angle * n / 2pi)`. Two points landing on the same cut mean the
    /// grid is too coarse for the set's smallest gap.
    pub fn from_set(set: &ClosedCircleSet, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::InvalidPartitionGrid(n));
        }
        let mut cuts = Vec::with_capacity(set.len());
        for (i, &a) in set.angles().iter().enumerate() {
            let cut = (a * n as f64 / TAU).round() as usize % n;
            if let Some(j) = cuts.iter().position(|&(_, c)| c == cut) {
                let (prev_angle, _): (f64, usize) = cuts[j];
                return Err(Error::CollidingCuts {
                    a: prev_angle,
                    b: set.angles()[i],
                    n,
                });
            }
            cuts.push((a, cut));
        }
        let cut_list: Vec<usize> = cuts.iter().map(|&(_, c)| c).collect();
        Self::from_cuts(n, &cut_list)
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    pub fn cut_points(&self) -> &[usize] {
        &self.cut_points
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Projection onto one block: DFT, keep the block's bins, inverse DFT.
    /// Linear and idempotent.
    pub fn project(&self, f: &[Complex64], block: &Block) -> Vec<Complex64> {
        assert_eq!(f.len(), self.n);
        let plan = Fft::new(self.n);
        let mut spec = f.to_vec();
        plan.forward(&mut spec);
        let masked = self.mask(&spec, block);
        let mut out = masked;
        plan.inverse(&mut out);
        out
    }

    fn mask(&self, spectrum: &[Complex64], block: &Block) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for i in 0..block.len {
            let k = (block.start + i) % self.n;
            out[k] = spectrum[k];
        }
        out
    }

    /// Pointwise quadratic function `S(f) = (sum_I |S_I f|^2)^{1/2}`.
    pub fn quadratic_function(&self, f: &[Complex64]) -> Vec<f64> {
        assert_eq!(f.len(), self.n);
        let plan = Fft::new(self.n);
        let mut spec = f.to_vec();
        plan.forward(&mut spec);
        let mut acc = vec![0.0f64; self.n];
        for block in &self.blocks {
            let mut part = self.mask(&spec, block);
            plan.inverse(&mut part);
            for (a, v) in acc.iter_mut().zip(&part) {
                *a += v.norm_sqr();
            }
        }
        acc.into_iter().map(f64::sqrt).collect()
    }

    /// Ratio bracket `||S(f)||_p / ||f||_p` over seeded Gaussian trials plus
    /// structured adversaries (single-block spectra and block-sign
    /// combinations). Reproducible: each trial draws from its own substream
    /// keyed by (seed, index).
    pub fn lp_constants_estimate(
        &self,
        p: f64,
        trials: usize,
        seed: u64,
    ) -> Result<LpConstantsReport> {
        if trials < 100 {
            return Err(Error::TooFewTrials {
                min: 100,
                got: trials,
            });
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidOperatorExponent(p));
        }
        let plan = Fft::new(self.n);
        let mut ratio_min = f64::INFINITY;
        let mut ratio_max = 0.0f64;
        let mut consider = |f: &[Complex64]| {
            let r = self.ratio(f, p);
            if r.is_finite() && r > 0.0 {
                ratio_min = ratio_min.min(r);
                ratio_max = ratio_max.max(r);
            }
        };

        // Single-block spectra.
        for block in &self.blocks {
            let mut spec = vec![Complex64::new(0.0, 0.0); self.n];
            for i in 0..block.len {
                spec[(block.start + i) % self.n] = Complex64::new(1.0, 0.0);
            }
            let mut f = spec;
            plan.inverse(&mut f);
            consider(&f);
        }
        // Block-sign combinations: all-plus, alternating, and seeded draws.
        let mut sign_patterns: Vec<Vec<f64>> = vec![
            vec![1.0; self.blocks.len()],
            (0..self.blocks.len())
                .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
                .collect(),
        ];
        let mut sign_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5157_4653);
        for _ in 0..16 {
            sign_patterns.push(
                (0..self.blocks.len())
                    .map(|_| {
                        let g: f64 = StandardNormal.sample(&mut sign_rng);
                        if g >= 0.0 {
                            1.0
                        } else {
                            -1.0
                        }
                    })
                    .collect(),
            );
        }
        for pattern in &sign_patterns {
            let mut spec = vec![Complex64::new(0.0, 0.0); self.n];
            for (block, &s) in self.blocks.iter().zip(pattern) {
                for i in 0..block.len {
                    spec[(block.start + i) % self.n] = Complex64::new(s, 0.0);
                }
            }
            let mut f = spec;
            plan.inverse(&mut f);
            consider(&f);
        }
        // Seeded Gaussian trials, one substream per index.
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(trial as u64 + 1)),
            );
            let f: Vec<Complex64> = (0..self.n)
                .map(|_| {
                    Complex64::new(
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    )
                })
                .collect();
            consider(&f);
        }

        Ok(LpConstantsReport {
            p,
            n: self.n,
            trials,
            ratio_min,
            ratio_max,
            seed,
        })
    }

    fn ratio(&self, f: &[Complex64], p: f64) -> f64 {
        let s = self.quadratic_function(f);
        let num = normalized_p_norm_real(&s, p, self.n);
        let den = normalized_p_norm_complex(f, p, self.n);
        num / den
    }
}

fn normalized_p_norm_real(v: &[f64], p: f64, n: usize) -> f64 {
    (v.iter().map(|x| x.abs().powf(p)).sum::<f64>() / n as f64).powf(1.0 / p)
}

fn normalized_p_norm_complex(v: &[Complex64], p: f64, n: usize) -> f64 {
    (v.iter().map(|x| x.norm().powf(p)).sum::<f64>() / n as f64).powf(1.0 / p)
}

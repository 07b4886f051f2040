//! Taylor coefficient extraction and sequence norms.
//!
//! Closed-form models expand exactly (geometric series for pole sums,
//! truncated convolution for products). Everything else goes through a
//! sampled DFT on a circle of radius `rho < 1`; the only error in that path
//! is aliasing of coefficients beyond the grid, and each extracted sequence
//! carries a recorded worst-index alias bound so downstream users can tell
//! how much to trust it.

use crate::error::{Error, Result};
use crate::fft::Fft;
use crate::models::AnalyticModel;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Default target for the predicted alias bound when choosing a DFT grid.
pub const ALIAS_TARGET: f64 = 1e-10;
/// Hard cap on the automatic DFT grid size.
const MAX_AUTO_GRID: usize = 1 << 22;

/// How a coefficient sequence was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSource {
    Exact,
    Dft { rho: f64, grid: usize },
}

/// Finite initial segment of a Taylor coefficient sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientSequence {
    #[serde(with = "crate::serde_c64::vec")]
    pub coeffs: Vec<Complex64>,
    pub source: CoefficientSource,
    /// Worst-index aliasing bound; present exactly when the source is a DFT.
    pub alias_bound: Option<f64>,
}

impl CoefficientSequence {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Exact Taylor coefficients for the closed-form variants. Polynomials are
/// copied verbatim, pole sums expand as geometric series (valid because all
/// poles lie outside the closed disk), sums combine linearly and products go
/// through truncated convolution. Variants without a closed form here
/// (Blaschke products, the singular inner function) are directed to the DFT
/// path.
pub fn taylor_exact(model: &AnalyticModel, n: usize) -> Result<CoefficientSequence> {
    let coeffs = exact_coeffs(model, n)?;
    Ok(CoefficientSequence {
        coeffs,
        source: CoefficientSource::Exact,
        alias_bound: None,
    })
}

fn exact_coeffs(model: &AnalyticModel, n: usize) -> Result<Vec<Complex64>> {
    match model {
        AnalyticModel::Polynomial { coeffs } => {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (k, &c) in coeffs.iter().take(n).enumerate() {
                out[k] = c;
            }
            Ok(out)
        }
        AnalyticModel::PoleSum { poles, weights } => {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (&w, &a) in poles.iter().zip(weights) {
                // a/(w - z) = sum_n (a / w^{n+1}) z^n
                let inv = w.inv();
                let mut term = a * inv;
                for slot in out.iter_mut() {
                    *slot += term;
                    term *= inv;
                }
            }
            Ok(out)
        }
        AnalyticModel::Sum { terms, weights } => {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (t, &w) in terms.iter().zip(weights) {
                let part = exact_coeffs(t, n)?;
                for (slot, p) in out.iter_mut().zip(part) {
                    *slot += w * p;
                }
            }
            Ok(out)
        }
        AnalyticModel::Product(factors) => {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            if let Some(first) = out.first_mut() {
                *first = Complex64::new(1.0, 0.0);
            }
            for f in factors {
                let part = exact_coeffs(f, n)?;
                out = convolve_truncated(&out, &part, n);
            }
            Ok(out)
        }
        AnalyticModel::BlaschkeFinite { .. } | AnalyticModel::SingularInner => {
            Err(Error::UnsupportedExpansion)
        }
    }
}

fn convolve_truncated(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Whether [`taylor_exact`] supports the model.
pub fn has_exact_expansion(model: &AnalyticModel) -> bool {
    match model {
        AnalyticModel::Polynomial { .. } | AnalyticModel::PoleSum { .. } => true,
        AnalyticModel::BlaschkeFinite { .. } | AnalyticModel::SingularInner => false,
        AnalyticModel::Product(fs) => fs.iter().all(has_exact_expansion),
        AnalyticModel::Sum { terms, .. } => terms.iter().all(has_exact_expansion),
    }
}

fn degree_bound(model: &AnalyticModel) -> Option<usize> {
    match model {
        AnalyticModel::Polynomial { coeffs } => Some(coeffs.len().saturating_sub(1)),
        AnalyticModel::Product(fs) => fs
            .iter()
            .map(degree_bound)
            .try_fold(0usize, |acc, d| d.map(|d| acc + d)),
        AnalyticModel::Sum { terms, .. } => terms
            .iter()
            .map(degree_bound)
            .try_fold(0usize, |acc, d| d.map(|d| acc.max(d))),
        _ => None,
    }
}

/// First `n` Taylor coefficients through sampling on the circle of radius
/// `rho` and a forward DFT of size `m`:
/// `c_k ~ rho^{-k} (1/m) sum_j f(rho e^{2 pi i j / m}) e^{-2 pi i j k / m}`.
///
/// The recorded alias bound is `A rho^{m-k} / (1 - rho^m)` at the worst
/// extracted index `k = n - 1`, with `A` the sampled maximum modulus on the
/// circle.
pub fn taylor_dft(
    model: &AnalyticModel,
    n: usize,
    rho: f64,
    m: usize,
) -> Result<CoefficientSequence> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidRadius(rho));
    }
    if !m.is_power_of_two() || m < n {
        return Err(Error::InvalidDftGrid { m, n });
    }
    if let Some(&s) = model
        .singularities()
        .iter()
        .find(|s| s.norm() <= rho)
    {
        return Err(Error::SingularityInRegion { point: s });
    }

    let mut samples: Vec<Complex64> = Vec::with_capacity(m);
    for j in 0..m {
        let t = TAU * j as f64 / m as f64;
        samples.push(model.eval(Complex64::from_polar(rho, t))?);
    }
    let sup_sample = samples.iter().map(|v| v.norm()).fold(0.0f64, f64::max);

    Fft::new(m).forward(&mut samples);

    let inv_m = 1.0 / m as f64;
    let inv_rho = 1.0 / rho;
    let mut scale = 1.0;
    let mut coeffs = Vec::with_capacity(n);
    for item in samples.iter().take(n) {
        coeffs.push(item * inv_m * scale);
        scale *= inv_rho;
    }

    let alias_bound =
        sup_sample * rho.powi((m - (n - 1).min(m)) as i32) / (1.0 - rho.powi(m as i32));
    Ok(CoefficientSequence {
        coeffs,
        source: CoefficientSource::Dft { rho, grid: m },
        alias_bound: Some(alias_bound),
    })
}

/// Automatic `(rho, m)` choice for [`taylor_dft`]: the radius backs off from
/// the nearest singularity but is floored at `1 - 5/n` so the `rho^{-k}`
/// rescaling cannot amplify rounding noise by more than about `e^5`; the
/// grid is the smallest power of two at least `n` (and past any polynomial
/// degree) whose predicted alias bound clears [`ALIAS_TARGET`].
pub fn dft_params_auto(model: &AnalyticModel, n: usize) -> (f64, usize) {
    let rho = 0.95f64.max(1.0 - 5.0 / n.max(1) as f64);

    // Coarse sampled sup on the circle of radius rho.
    let mut sup = 0.0f64;
    for j in 0..256 {
        let t = TAU * (j as f64 + 0.5) / 256.0;
        if let Ok(v) = model.eval(Complex64::from_polar(rho, t)) {
            sup = sup.max(v.norm());
        }
    }

    let mut m = n.max(64).next_power_of_two();
    if let Some(d) = degree_bound(model) {
        m = m.max((d + 1).next_power_of_two());
    }
    while m < MAX_AUTO_GRID {
        let denom = 1.0 - rho.powi(m as i32);
        let bound = sup * rho.powi((m - (n - 1).min(m)) as i32) / denom;
        if bound <= ALIAS_TARGET {
            break;
        }
        m *= 2;
    }
    (rho, m)
}

/// `l^p` norm of the sequence; `p` may be `f64::INFINITY`.
pub fn p_norm(seq: &CoefficientSequence, p: f64) -> Result<f64> {
    vector_p_norm(&seq.coeffs, p)
}

/// `l^p` norm of a raw complex vector; `p` may be `f64::INFINITY`.
pub fn vector_p_norm(v: &[Complex64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidSequenceExponent(p));
    }
    if p.is_infinite() {
        return Ok(v.iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    if p == 1.0 {
        return Ok(v.iter().map(|c| c.norm()).sum());
    }
    if p == 2.0 {
        return Ok(v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
    }
    Ok(v.iter()
        .map(|c| c.norm().powf(p))
        .sum::<f64>()
        .powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seq(v: &[f64]) -> CoefficientSequence {
        CoefficientSequence {
            coeffs: v.iter().map(|&x| c(x, 0.0)).collect(),
            source: CoefficientSource::Exact,
            alias_bound: None,
        }
    }

    #[test]
    fn polynomial_coeffs_verbatim() {
        let m = AnalyticModel::polynomial(vec![c(0.5, 0.0), c(0.5, 0.0)]);
        let s = taylor_exact(&m, 4).unwrap();
        assert_eq!(s.coeffs, vec![c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.source, CoefficientSource::Exact);
        assert!(s.alias_bound.is_none());
    }

    #[test]
    fn pole_sum_geometric_series() {
        let m = AnalyticModel::pole_sum(vec![c(2.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let s = taylor_exact(&m, 3).unwrap();
        for (got, want) in s.coeffs.iter().zip([0.5, 0.25, 0.125]) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn product_is_self_convolution() {
        let f = AnalyticModel::pole_sum(vec![c(2.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let m = AnalyticModel::product(vec![f.clone(), f]);
        let s = taylor_exact(&m, 3).unwrap();
        for (got, want) in s.coeffs.iter().zip([0.25, 0.25, 3.0 / 16.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn unsupported_variants_are_rejected() {
        assert!(matches!(
            taylor_exact(&AnalyticModel::singular_inner(), 8),
            Err(Error::UnsupportedExpansion)
        ));
        let b = AnalyticModel::blaschke(vec![c(0.5, 0.0)]).unwrap();
        assert!(matches!(taylor_exact(&b, 8), Err(Error::UnsupportedExpansion)));
    }

    #[test]
    fn dft_monomial() {
        let m = AnalyticModel::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let s = taylor_dft(&m, 4, 0.5, 64).unwrap();
        let bound = s.alias_bound.unwrap();
        assert!(bound <= 1e-12, "alias bound {bound}");
        let expected = [0.0, 0.0, 1.0, 0.0];
        for (got, want) in s.coeffs.iter().zip(expected) {
            assert!((got - c(want, 0.0)).norm() <= bound + 1e-12);
        }
    }

    #[test]
    fn dft_matches_exact_pole_sum() {
        let m = AnalyticModel::pole_sum(vec![c(2.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let exact = taylor_exact(&m, 16).unwrap();
        let dft = taylor_dft(&m, 16, 0.9, 1024).unwrap();
        for (a, b) in exact.coeffs.iter().zip(&dft.coeffs) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn dft_singular_inner_head_coefficient() {
        let s = taylor_dft(&AnalyticModel::singular_inner(), 64, 0.95, 4096).unwrap();
        assert!((s.coeffs[0] - c((-1.0f64).exp(), 0.0)).norm() < 1e-8);
    }

    #[test]
    fn dft_validates_parameters() {
        let m = AnalyticModel::polynomial(vec![c(1.0, 0.0)]);
        assert!(matches!(
            taylor_dft(&m, 4, 1.0, 64),
            Err(Error::InvalidRadius(_))
        ));
        assert!(matches!(
            taylor_dft(&m, 128, 0.5, 64),
            Err(Error::InvalidDftGrid { .. })
        ));
        assert!(matches!(
            taylor_dft(&m, 4, 0.5, 63),
            Err(Error::InvalidDftGrid { .. })
        ));
    }

    #[test]
    fn parseval_identity_on_the_sampling_circle() {
        let m = AnalyticModel::pole_sum(vec![c(2.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let rho = 0.5;
        let grid = 256;
        let s = taylor_dft(&m, grid, rho, grid).unwrap();
        let lhs: f64 = s
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.norm_sqr() * rho.powi(2 * n as i32))
            .sum();
        let rhs: f64 = (0..grid)
            .map(|j| {
                let t = TAU * j as f64 / grid as f64;
                m.eval(Complex64::from_polar(rho, t)).unwrap().norm_sqr()
            })
            .sum::<f64>()
            / grid as f64;
        assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn auto_params_hit_the_alias_target() {
        let m = AnalyticModel::pole_sum(vec![c(1.5, 0.3)], vec![c(1.0, 0.0)]).unwrap();
        let (rho, grid) = dft_params_auto(&m, 32);
        assert!(rho > 0.0 && rho < 1.0);
        let s = taylor_dft(&m, 32, rho, grid).unwrap();
        assert!(s.alias_bound.unwrap() <= ALIAS_TARGET * 1.001);
    }

    #[test]
    fn p_norm_closed_forms() {
        assert!((p_norm(&seq(&[0.5, 0.5]), 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((p_norm(&seq(&[0.5, 0.5]), 2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(
            (p_norm(&seq(&[0.5, 0.25, 0.125]), f64::INFINITY).unwrap() - 0.5).abs() < 1e-15
        );
        assert!(matches!(
            p_norm(&seq(&[1.0]), 0.5),
            Err(Error::InvalidSequenceExponent(_))
        ));
    }

    #[test]
    fn p_norms_nest_downward() {
        let s = seq(&[0.3, -1.2, 0.07, 0.9, 0.0, 2.1]);
        let ps = [1.0, 1.5, 2.0, 3.0, 7.0, f64::INFINITY];
        for w in ps.windows(2) {
            let lo = p_norm(&s, w[0]).unwrap();
            let hi = p_norm(&s, w[1]).unwrap();
            assert!(hi <= lo + 1e-12, "p={} q={}", w[0], w[1]);
        }
    }
}

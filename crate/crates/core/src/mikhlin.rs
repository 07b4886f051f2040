//! Boundary derivative bound check.
//!
//! For a model bounded on a star domain, the derivative of its boundary
//! function is controlled by `sup|m| / (c * dist(e^{it}, F))` where `c` is
//! the domain's inscribed-circle constant: around every off-set boundary
//! point there is a circle of radius `c * dist` inside the domain, and the
//! Cauchy integral over it bounds the derivative. This module computes both
//! sides on a grid - the sup of `|derivative| * dist` and the geometric
//! bound - and reports their ratio as the margin.

use crate::error::{Error, Result};
use crate::geometry::StarDomain;
use crate::models::{sup_norm_estimate, AnalyticModel, Region};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Grid points closer than this (in angle) to a set point are skipped; the
/// product `|derivative| * dist` is exactly what is being probed, and this
/// band only avoids 0 * inf float artifacts at the set itself.
pub const GUARD_BAND: f64 = 1e-9;
/// Minimum admissible sweep grid.
pub const MIN_GRID: usize = 1024;
/// Minimum trapezoid point count for the Cauchy quadrature. Kept low on
/// purpose: coarse rules are useful as convergence probes.
pub const MIN_QUADRATURE_POINTS: usize = 4;
/// Quadrature points must keep this fraction of clearance to the nearest
/// singularity.
const RADIUS_SAFETY: f64 = 1.0 - 1e-9;

/// Result of the derivative-distance sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MikhlinReport {
    /// `sup_t |(m o e^{it})'| * dist(e^{it}, F)` over the grid.
    pub sup_product: f64,
    /// `sup|m| / c`, the geometric ceiling for the same product.
    pub bound: f64,
    pub grid: usize,
    /// `sup_product / bound`; at most 1 in exact arithmetic.
    pub margin: f64,
}

/// Derivative of the boundary function `t -> m(e^{it})`, namely
/// `i e^{it} m'(e^{it})`.
pub fn boundary_derivative(model: &AnalyticModel, t: f64) -> Result<Complex64> {
    let z = Complex64::from_polar(1.0, t);
    Ok(Complex64::new(0.0, 1.0) * z * model.eval_derivative(z)?)
}

/// Derivative at `e^{it}` through the Cauchy integral over the circle of
/// the given radius, evaluated with the `q`-point trapezoid rule:
/// `m'(z0) = (1/(2 pi i)) \int m(z) / (z - z0)^2 dz`, which reduces to
/// `(1/(q r)) sum_j m(z0 + r e^{i phi_j}) e^{-i phi_j}`. Convergence in `q`
/// is spectral while the circle stays inside the analyticity region.
pub fn cauchy_derivative(
    model: &AnalyticModel,
    t: f64,
    radius: f64,
    q: usize,
) -> Result<Complex64> {
    if q < MIN_QUADRATURE_POINTS {
        return Err(Error::GridTooSmall {
            got: q,
            min: MIN_QUADRATURE_POINTS,
        });
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidTolerance(radius));
    }
    let center = Complex64::from_polar(1.0, t);
    for s in model.singularities() {
        let clearance = (s - center).norm();
        if clearance <= radius / RADIUS_SAFETY {
            return Err(Error::QuadratureRadiusTooLarge {
                t,
                radius,
                clearance,
            });
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..q {
        let phi = TAU * j as f64 / q as f64;
        let dir = Complex64::from_polar(1.0, phi);
        acc += model.eval(center + dir * radius)? * dir.conj();
    }
    Ok(acc / (q as f64 * radius))
}

/// Sweeps the boundary grid and reports the derivative-distance product
/// against the geometric bound. The model must be bounded on the domain.
pub fn mikhlin_constant(
    model: &AnalyticModel,
    domain: &StarDomain,
    grid: usize,
) -> Result<MikhlinReport> {
    if grid < MIN_GRID {
        return Err(Error::GridTooSmall {
            got: grid,
            min: MIN_GRID,
        });
    }
    if !model.is_bounded_on(domain) {
        return Err(Error::UnboundedModel);
    }

    let set = domain.set();
    let mut sup_product = 0.0f64;
    for j in 0..grid {
        let t = TAU * j as f64 / grid as f64;
        let near_set = set
            .angles()
            .iter()
            .any(|&s| angular_gap(t, s) < GUARD_BAND);
        if near_set {
            continue;
        }
        let deriv = boundary_derivative(model, t)?.norm();
        let product = deriv * set.chordal_dist(t);
        if product > sup_product {
            sup_product = product;
        }
    }

    let sup = sup_norm_estimate(model, Region::Star(domain), grid)?;
    let c = domain.inscribed_constant_cached()?;
    let bound = sup.value / c;
    Ok(MikhlinReport {
        sup_product,
        bound,
        grid,
        margin: sup_product / bound,
    })
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ClosedCircleSet;
    use crate::lacunary::generate_dyadic_gap;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn four_point_domain(theta0: f64) -> StarDomain {
        let set = ClosedCircleSet::new(vec![0.0, FRAC_PI_2, PI, 1.5 * PI]).unwrap();
        StarDomain::build(set, theta0).unwrap()
    }

    #[test]
    fn boundary_derivative_closed_forms() {
        let z = AnalyticModel::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let d = boundary_derivative(&z, 0.0).unwrap();
        assert!((d - c(0.0, 1.0)).norm() < 1e-15);

        let half = AnalyticModel::polynomial(vec![c(0.5, 0.0), c(0.5, 0.0)]);
        let d = boundary_derivative(&half, FRAC_PI_2).unwrap();
        assert!((d - c(-0.5, 0.0)).norm() < 1e-15);

        let ps = AnalyticModel::pole_sum(vec![c(2.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let d = boundary_derivative(&ps, 0.0).unwrap();
        assert!((d - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn cauchy_quadrature_polynomial_is_exact() {
        let sq = AnalyticModel::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let d = cauchy_derivative(&sq, 0.0, 0.1, 64).unwrap();
        assert!((d - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cauchy_quadrature_matches_exact_derivative() {
        let ps = AnalyticModel::pole_sum(vec![c(2.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let d = cauchy_derivative(&ps, 0.0, 0.3, 128).unwrap();
        assert!((d - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn cauchy_quadrature_converges_spectrally() {
        let ps = AnalyticModel::pole_sum(vec![c(2.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let exact = ps.eval_derivative(c(1.0, 0.0)).unwrap();
        let err8 = (cauchy_derivative(&ps, 0.0, 0.3, 8).unwrap() - exact).norm();
        let err64 = (cauchy_derivative(&ps, 0.0, 0.3, 64).unwrap() - exact).norm();
        assert!(err8 >= 1e3 * err64.max(1e-16), "err8={err8} err64={err64}");
    }

    #[test]
    fn cauchy_radius_guard() {
        let ps = AnalyticModel::pole_sum(vec![c(2.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        // Distance from e^{i0} to the pole is 1; a radius of 1.1 crosses it.
        assert!(matches!(
            cauchy_derivative(&ps, 0.0, 1.1, 64),
            Err(Error::QuadratureRadiusTooLarge { .. })
        ));
        assert!(matches!(
            cauchy_derivative(&ps, 0.0, 0.3, 2),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn cauchy_matches_exact_at_random_admissible_points() {
        let model = AnalyticModel::sum(
            vec![
                AnalyticModel::pole_sum(vec![c(1.7, 0.5), c(-2.2, 0.1)], vec![c(1.0, 0.0), c(0.5, -0.5)])
                    .unwrap(),
                AnalyticModel::polynomial(vec![c(0.3, 0.0), c(0.0, 0.7), c(0.2, 0.0)]),
            ],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let t = rng.gen_range(0.0..TAU);
            let center = Complex64::from_polar(1.0, t);
            let clearance = model
                .singularities()
                .iter()
                .map(|s| (s - center).norm())
                .fold(f64::INFINITY, f64::min);
            let radius = 0.5 * clearance;
            let exact = model.eval_derivative(center).unwrap();
            let quad = cauchy_derivative(&model, t, radius, 64).unwrap();
            assert!((exact - quad).norm() <= 1e-8 * exact.norm().max(1.0), "t={t}");
        }
    }

    #[test]
    fn constant_model_has_zero_margin() {
        let domain = four_point_domain(PI / 6.0);
        let one = AnalyticModel::polynomial(vec![c(1.0, 0.0)]);
        let report = mikhlin_constant(&one, &domain, 2048).unwrap();
        assert_eq!(report.sup_product, 0.0);
        assert_eq!(report.margin, 0.0);
        assert!(report.bound > 0.0);
    }

    #[test]
    fn identity_model_sees_the_distance_sup() {
        let domain = four_point_domain(PI / 6.0);
        let z = AnalyticModel::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let report = mikhlin_constant(&z, &domain, 2048).unwrap();
        // |(m o e^{it})'| = 1, so the product sweep is just the max distance
        // to the set over the grid.
        let set = domain.set();
        let max_dist = (0..2048)
            .map(|j| set.chordal_dist(TAU * j as f64 / 2048.0))
            .fold(0.0f64, f64::max);
        assert!((report.sup_product - max_dist).abs() < 1e-12);
        assert!(report.sup_product <= 2.0);
        assert!(report.margin.is_finite());
    }

    #[test]
    fn unbounded_model_is_rejected() {
        let domain = four_point_domain(PI / 6.0);
        let s = AnalyticModel::singular_inner();
        assert!(matches!(
            mikhlin_constant(&s, &domain, 2048),
            Err(Error::UnboundedModel)
        ));
        let one = AnalyticModel::polynomial(vec![c(1.0, 0.0)]);
        assert!(matches!(
            mikhlin_constant(&one, &domain, 512),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn pole_family_margin_stays_under_bound() {
        // Poles placed radially above the flagged set point, weights equal
        // to their clearances: the canonical bounded family.
        let set = generate_dyadic_gap(6).unwrap();
        let domain = StarDomain::build(set, PI / 6.0).unwrap();
        let deltas = [0.05, 0.02, 0.01];
        let poles: Vec<Complex64> = deltas.iter().map(|&d| c(1.0 + d, 0.0)).collect();
        let weights: Vec<Complex64> = deltas.iter().map(|&d| c(d, 0.0)).collect();
        let m = AnalyticModel::pole_sum(poles, weights).unwrap();
        assert!(m.is_bounded_on(&domain));
        let report = mikhlin_constant(&m, &domain, 4096).unwrap();
        assert!(report.margin <= 1.05, "margin = {}", report.margin);
        assert!(report.margin > 0.0);
    }

    #[test]
    fn sup_product_monotone_in_grid() {
        let domain = four_point_domain(PI / 6.0);
        let m = AnalyticModel::pole_sum(vec![c(1.2, 0.0)], vec![c(0.2, 0.0)]).unwrap();
        // Nested grids (powers of two) can only add candidate points.
        let r1 = mikhlin_constant(&m, &domain, 2048).unwrap();
        let r2 = mikhlin_constant(&m, &domain, 4096).unwrap();
        assert!(r2.sup_product + 1e-15 >= r1.sup_product);
    }
}

//! Closed-form models of analytic functions on and beyond the unit disk.
//!
//! Every variant evaluates exactly and differentiates exactly; sup norms
//! over regions are estimated by boundary sampling, which by the maximum
//! principle gives a lower estimate of the true sup. Pole sums with poles
//! just outside a star domain are the workhorse family: they are certifiably
//! bounded on the domain while their singularities crowd the boundary set.

use crate::error::{Error, Result};
use crate::geometry::{StarDomain, VinogradovDomain};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Clearance a pole must keep from the sampled closure of a star domain to
/// count as bounded there.
pub const POLE_CLEARANCE: f64 = 1e-6;
/// Boundary samples per triangle side used for clearance checks.
const CLEARANCE_SAMPLES: usize = 512;

/// Symbolic analytic function model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum AnalyticModel {
    /// `c_0 + c_1 z + ... + c_d z^d`.
    Polynomial {
        #[serde(with = "crate::serde_c64::vec")]
        coeffs: Vec<Complex64>,
    },
    /// `sum_k a_k / (w_k - z)` with every pole outside the closed disk.
    PoleSum {
        #[serde(with = "crate::serde_c64::vec")]
        poles: Vec<Complex64>,
        #[serde(with = "crate::serde_c64::vec")]
        weights: Vec<Complex64>,
    },
    /// Finite Blaschke product `prod_j (z - a_j) / (1 - conj(a_j) z)`.
    BlaschkeFinite {
        #[serde(with = "crate::serde_c64::vec")]
        zeros: Vec<Complex64>,
    },
    /// The atomic singular inner function `exp((z+1)/(z-1))`.
    SingularInner,
    /// Pointwise product of models.
    Product(Vec<AnalyticModel>),
    /// Weighted sum of models.
    Sum {
        terms: Vec<AnalyticModel>,
        #[serde(with = "crate::serde_c64::vec")]
        weights: Vec<Complex64>,
    },
}

impl AnalyticModel {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        AnalyticModel::Polynomial { coeffs }
    }

    pub fn pole_sum(poles: Vec<Complex64>, weights: Vec<Complex64>) -> Result<Self> {
        if poles.len() != weights.len() {
            return Err(Error::PoleWeightMismatch {
                poles: poles.len(),
                weights: weights.len(),
            });
        }
        if let Some(&w) = poles.iter().find(|w| w.norm() <= 1.0) {
            return Err(Error::PoleInsideDisk(w));
        }
        Ok(AnalyticModel::PoleSum { poles, weights })
    }

    pub fn blaschke(zeros: Vec<Complex64>) -> Result<Self> {
        if let Some(&a) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(Error::ZeroOutsideDisk(a));
        }
        Ok(AnalyticModel::BlaschkeFinite { zeros })
    }

    pub fn singular_inner() -> Self {
        AnalyticModel::SingularInner
    }

    pub fn product(factors: Vec<AnalyticModel>) -> Self {
        AnalyticModel::Product(factors)
    }

    pub fn sum(terms: Vec<AnalyticModel>, weights: Vec<Complex64>) -> Result<Self> {
        if terms.len() != weights.len() {
            return Err(Error::PoleWeightMismatch {
                poles: terms.len(),
                weights: weights.len(),
            });
        }
        Ok(AnalyticModel::Sum { terms, weights })
    }

    /// Validates the stored parameters (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticModel::Polynomial { .. } | AnalyticModel::SingularInner => Ok(()),
            AnalyticModel::PoleSum { poles, weights } => {
                if poles.len() != weights.len() {
                    return Err(Error::PoleWeightMismatch {
                        poles: poles.len(),
                        weights: weights.len(),
                    });
                }
                match poles.iter().find(|w| w.norm() <= 1.0) {
                    Some(&w) => Err(Error::PoleInsideDisk(w)),
                    None => Ok(()),
                }
            }
            AnalyticModel::BlaschkeFinite { zeros } => {
                match zeros.iter().find(|a| a.norm() >= 1.0) {
                    Some(&a) => Err(Error::ZeroOutsideDisk(a)),
                    None => Ok(()),
                }
            }
            AnalyticModel::Product(fs) => fs.iter().try_for_each(|f| f.validate()),
            AnalyticModel::Sum { terms, weights } => {
                if terms.len() != weights.len() {
                    return Err(Error::PoleWeightMismatch {
                        poles: terms.len(),
                        weights: weights.len(),
                    });
                }
                terms.iter().try_for_each(|f| f.validate())
            }
        }
    }

    /// Exact evaluation.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            AnalyticModel::Polynomial { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &c in coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                Ok(acc)
            }
            AnalyticModel::PoleSum { poles, weights } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (&w, &a) in poles.iter().zip(weights) {
                    let den = w - z;
                    if den == Complex64::new(0.0, 0.0) {
                        return Err(Error::PoleHit(w));
                    }
                    acc += a / den;
                }
                Ok(acc)
            }
            AnalyticModel::BlaschkeFinite { zeros } => {
                let mut acc = Complex64::new(1.0, 0.0);
                for &a in zeros {
                    let den = Complex64::new(1.0, 0.0) - a.conj() * z;
                    if den == Complex64::new(0.0, 0.0) {
                        return Err(Error::PoleHit(a.conj().inv()));
                    }
                    acc *= (z - a) / den;
                }
                Ok(acc)
            }
            AnalyticModel::SingularInner => {
                if z == Complex64::new(1.0, 0.0) {
                    return Err(Error::SingularPointHit);
                }
                Ok(((z + 1.0) / (z - 1.0)).exp())
            }
            AnalyticModel::Product(fs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in fs {
                    acc *= f.eval(z)?;
                }
                Ok(acc)
            }
            AnalyticModel::Sum { terms, weights } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (t, &w) in terms.iter().zip(weights) {
                    acc += w * t.eval(z)?;
                }
                Ok(acc)
            }
        }
    }

    /// Exact derivative (closed form per variant, product/sum rules applied
    /// recursively).
    pub fn eval_derivative(&self, z: Complex64) -> Result<Complex64> {
        match self {
            AnalyticModel::Polynomial { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in (1..coeffs.len()).rev() {
                    acc = acc * z + coeffs[k] * k as f64;
                }
                Ok(acc)
            }
            AnalyticModel::PoleSum { poles, weights } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (&w, &a) in poles.iter().zip(weights) {
                    let den = w - z;
                    if den == Complex64::new(0.0, 0.0) {
                        return Err(Error::PoleHit(w));
                    }
                    acc += a / (den * den);
                }
                Ok(acc)
            }
            AnalyticModel::BlaschkeFinite { zeros } => {
                // Product rule over factors; each factor derivative is
                // (1 - |a|^2) / (1 - conj(a) z)^2.
                let vals: Vec<Complex64> = zeros
                    .iter()
                    .map(|&a| {
                        let den = Complex64::new(1.0, 0.0) - a.conj() * z;
                        if den == Complex64::new(0.0, 0.0) {
                            Err(Error::PoleHit(a.conj().inv()))
                        } else {
                            Ok((z - a) / den)
                        }
                    })
                    .collect::<Result<_>>()?;
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &a) in zeros.iter().enumerate() {
                    let den = Complex64::new(1.0, 0.0) - a.conj() * z;
                    let dj = (1.0 - a.norm_sqr()) / (den * den);
                    let mut others = Complex64::new(1.0, 0.0);
                    for (i, &v) in vals.iter().enumerate() {
                        if i != j {
                            others *= v;
                        }
                    }
                    acc += dj * others;
                }
                Ok(acc)
            }
            AnalyticModel::SingularInner => {
                if z == Complex64::new(1.0, 0.0) {
                    return Err(Error::SingularPointHit);
                }
                let dm1 = z - 1.0;
                Ok(((z + 1.0) / dm1).exp() * (-2.0) / (dm1 * dm1))
            }
            AnalyticModel::Product(fs) => {
                let vals: Vec<Complex64> = fs.iter().map(|f| f.eval(z)).collect::<Result<_>>()?;
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, f) in fs.iter().enumerate() {
                    let dj = f.eval_derivative(z)?;
                    let mut others = Complex64::new(1.0, 0.0);
                    for (i, &v) in vals.iter().enumerate() {
                        if i != j {
                            others *= v;
                        }
                    }
                    acc += dj * others;
                }
                Ok(acc)
            }
            AnalyticModel::Sum { terms, weights } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (t, &w) in terms.iter().zip(weights) {
                    acc += w * t.eval_derivative(z)?;
                }
                Ok(acc)
            }
        }
    }

    /// All isolated singularities of the model (poles, reflected Blaschke
    /// poles, the essential point of the singular inner factor).
    pub fn singularities(&self) -> Vec<Complex64> {
        match self {
            AnalyticModel::Polynomial { .. } => Vec::new(),
            AnalyticModel::PoleSum { poles, .. } => poles.clone(),
            AnalyticModel::BlaschkeFinite { zeros } => zeros
                .iter()
                .filter(|a| a.norm() > 0.0)
                .map(|a| a.conj().inv())
                .collect(),
            AnalyticModel::SingularInner => vec![Complex64::new(1.0, 0.0)],
            AnalyticModel::Product(fs) => fs.iter().flat_map(|f| f.singularities()).collect(),
            AnalyticModel::Sum { terms, .. } => {
                terms.iter().flat_map(|f| f.singularities()).collect()
            }
        }
    }

    /// Radius of the largest centered disk on which the model is analytic.
    pub fn singularity_radius(&self) -> f64 {
        self.singularities()
            .iter()
            .map(|s| s.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether the model belongs to the bounded analytic functions on the
    /// star domain. Pole sums need every pole strictly off the sampled
    /// closure; the singular inner function is never bounded on a star
    /// domain (its essential point at z = 1 either lies inside a triangle or
    /// sits at a corner where the triangle wedges see unbounded growth).
    pub fn is_bounded_on(&self, domain: &StarDomain) -> bool {
        match self {
            AnalyticModel::Polynomial { .. } | AnalyticModel::BlaschkeFinite { .. } => true,
            AnalyticModel::SingularInner => false,
            AnalyticModel::PoleSum { poles, .. } => {
                let boundary = domain.boundary_samples(CLEARANCE_SAMPLES);
                poles.iter().all(|&w| {
                    !domain.contains(w)
                        && boundary
                            .iter()
                            .map(|b| (w - b).norm())
                            .fold(f64::INFINITY, f64::min)
                            >= POLE_CLEARANCE
                })
            }
            AnalyticModel::Product(fs) => fs.iter().all(|f| f.is_bounded_on(domain)),
            AnalyticModel::Sum { terms, .. } => terms.iter().all(|f| f.is_bounded_on(domain)),
        }
    }

    /// First pole violating boundedness on the domain, if any. Used for
    /// diagnostics when a probe rejects its model.
    pub fn violating_pole(&self, domain: &StarDomain) -> Option<Complex64> {
        match self {
            AnalyticModel::PoleSum { poles, .. } => {
                let boundary = domain.boundary_samples(CLEARANCE_SAMPLES);
                poles
                    .iter()
                    .find(|&&w| {
                        domain.contains(w)
                            || boundary
                                .iter()
                                .map(|b| (w - b).norm())
                                .fold(f64::INFINITY, f64::min)
                                < POLE_CLEARANCE
                    })
                    .copied()
            }
            AnalyticModel::SingularInner => Some(Complex64::new(1.0, 0.0)),
            AnalyticModel::Product(fs) => fs.iter().find_map(|f| f.violating_pole(domain)),
            AnalyticModel::Sum { terms, .. } => {
                terms.iter().find_map(|f| f.violating_pole(domain))
            }
            _ => None,
        }
    }
}

/// Region over which a sup norm is estimated.
#[derive(Debug, Clone, Copy)]
pub enum Region<'a> {
    UnitCircle,
    Star(&'a StarDomain),
    Vinogradov(&'a VinogradovDomain),
}

impl Region<'_> {
    fn tag(&self) -> String {
        match self {
            Region::UnitCircle => "unit_circle".to_string(),
            Region::Star(_) => "star_domain".to_string(),
            Region::Vinogradov(v) => {
                format!("vinogradov(r={},alpha={})", v.radius(), v.aperture())
            }
        }
    }
}

/// Sampled sup-norm value. Being a maximum over finitely many points it is
/// always a lower bound for the true sup.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupNormEstimate {
    pub value: f64,
    pub grid_size: usize,
    pub region_tag: String,
}

/// Maximum modulus over a boundary-weighted sample grid of the region.
/// Models with a singularity strictly inside the region are rejected.
pub fn sup_norm_estimate(
    model: &AnalyticModel,
    region: Region<'_>,
    grid: usize,
) -> Result<SupNormEstimate> {
    let grid = grid.max(16);
    match region {
        Region::Star(domain) => {
            for s in model.singularities() {
                if domain.contains(s) {
                    return Err(Error::SingularityInRegion { point: s });
                }
            }
        }
        Region::Vinogradov(dom) => {
            for s in model.singularities() {
                if dom.contains(s) {
                    return Err(Error::SingularityInRegion { point: s });
                }
            }
        }
        Region::UnitCircle => {}
    }

    // Sample grids are plain dyadic fractions so that doubling `grid` keeps
    // every old point: the estimate is monotone under refinement. Points
    // landing exactly on a singularity (the cusp of an inner model, say)
    // fail to evaluate and are skipped.
    let mut max = 0.0f64;
    let mut count = 0usize;
    let mut visit = |z: Complex64| {
        if let Ok(v) = model.eval(z) {
            let v = v.norm();
            if v > max {
                max = v;
            }
            count += 1;
        }
    };

    match region {
        Region::UnitCircle => {
            for j in 0..grid {
                let t = TAU * j as f64 / grid as f64;
                visit(Complex64::new(t.cos(), t.sin()));
            }
        }
        Region::Star(domain) => {
            // The boundary of the domain is the union of the triangle sides.
            let per_side = (grid / (2 * domain.triangles().len()).max(1)).max(16);
            for tri in domain.triangles() {
                let (p1, p2) = tri.endpoints();
                let apex = tri.apex();
                for j in 0..=per_side {
                    let s = j as f64 / per_side as f64;
                    visit(p1 + (apex - p1) * s);
                    visit(apex + (p2 - apex) * s);
                }
            }
        }
        Region::Vinogradov(dom) => {
            let r = dom.radius();
            let alpha = dom.aperture();
            // Outer circle, restricted to the admissible wedge.
            for j in 0..grid / 2 {
                let t = TAU * j as f64 / (grid / 2) as f64;
                let z = Complex64::from_polar(r * (1.0 - 1e-12), t);
                if dom.contains(z) {
                    visit(z);
                }
            }
            // The two slit rays from the cusp out to the circle.
            let rho_max = -alpha.cos() + (alpha.cos().powi(2) - 1.0 + r * r).sqrt();
            for &sign in &[1.0, -1.0] {
                let dir = Complex64::from_polar(1.0, sign * alpha);
                for j in 1..=grid / 4 {
                    let s = j as f64 / (grid / 4) as f64;
                    let z = Complex64::new(1.0, 0.0) + dir * (s * rho_max * (1.0 - 1e-12));
                    if dom.contains(z) {
                        visit(z);
                    }
                }
            }
        }
    }

    Ok(SupNormEstimate {
        value: max,
        grid_size: count,
        region_tag: region.tag(),
    })
}

//! Geometry of closed sets on the boundary circle and the star-like domains
//! they generate.
//!
//! A [`ClosedCircleSet`] is a finite family of boundary angles; its
//! complementary arcs partition the rest of the circle. Over the chord of
//! each complementary arc we erect an open isosceles triangle whose sides
//! leave the closed disk, and the union of the open disk with all triangles
//! is the [`StarDomain`]. The inscribed-circle constant of that domain is
//! what turns sup-norm control into a derivative bound on the boundary, so
//! it gets a careful bisection-based estimator here.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::OnceLock;

/// Smallest admissible triangle angle after clamping. Construction fails if
/// a clamped arc would fall below this.
pub const DEFAULT_THETA_FLOOR: f64 = 1e-7;
/// Base angles are clamped to `pi/2 - CLAMP_EPS` to keep the apex finite.
pub const CLAMP_EPS: f64 = 1e-6;
/// Default per-arc sample count for the inscribed-circle constant.
pub const DEFAULT_INSCRIBED_SAMPLES: usize = 256;
/// Relative bisection tolerance for the inscribed-circle radius.
pub const INSCRIBED_REL_TOL: f64 = 1e-4;
/// Probe points per candidate circle when testing containment.
const PROBE_POINTS: usize = 256;

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn unit(angle: f64) -> Complex64 {
    Complex64::new(angle.cos(), angle.sin())
}

/// Chordal distance from the boundary point at angle `t` to a raw family of
/// boundary angles (no set invariants assumed).
pub fn chordal_distance(angles: &[f64], t: f64) -> f64 {
    angles
        .iter()
        .map(|&s| 2.0 * ((t - s) * 0.5).sin().abs())
        .fold(f64::INFINITY, f64::min)
}

/// An arc of the boundary circle, counterclockwise from `start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    start: f64,
    length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length < PI) {
            return Err(Error::InvalidArcLength(length));
        }
        Ok(Arc { start, length })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn end(&self) -> f64 {
        self.start + self.length
    }

    pub fn midpoint(&self) -> f64 {
        (self.start + 0.5 * self.length).rem_euclid(TAU)
    }
}

/// Raw serialized form of a [`ClosedCircleSet`]; revalidated on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCircleSet {
    pub angles: Vec<f64>,
    #[serde(default)]
    pub accumulation: Vec<f64>,
}

/// A closed set on the boundary circle, represented by finitely many angles.
/// Angles flagged as accumulation points mark where a truncated infinite
/// generator keeps clustering.
///
/// Invariants: angles strictly increasing in `[0, 2pi)`, at least two of
/// them, and every complementary arc strictly shorter than `pi`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawCircleSet", into = "RawCircleSet")]
pub struct ClosedCircleSet {
    angles: Vec<f64>,
    accumulation: Vec<bool>,
}

impl ClosedCircleSet {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        Self::with_accumulation(angles, &[])
    }

    /// Builds the set, flagging every angle that appears in `accumulation`.
    /// Input order does not matter; points are sorted internally.
    pub fn with_accumulation(angles: Vec<f64>, accumulation: &[f64]) -> Result<Self> {
        if angles.len() < 2 {
            return Err(Error::TooFewPoints(angles.len()));
        }
        for &a in &angles {
            if !a.is_finite() || !(0.0..TAU).contains(&a) {
                return Err(Error::AngleOutOfRange(a));
            }
        }
        let mut pairs: Vec<(f64, bool)> = angles
            .into_iter()
            .map(|a| (a, accumulation.contains(&a)))
            .collect();
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("angles are finite"));
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateAngle(w[0].0));
            }
        }
        let set = ClosedCircleSet {
            angles: pairs.iter().map(|p| p.0).collect(),
            accumulation: pairs.iter().map(|p| p.1).collect(),
        };
        // Every complementary arc must be a proper arc shorter than pi.
        for (i, &a) in set.angles.iter().enumerate() {
            let next = set.angles[(i + 1) % set.angles.len()];
            let gap = if i + 1 == set.angles.len() {
                next + TAU - a
            } else {
                next - a
            };
            if gap >= PI {
                return Err(Error::ArcTooLong { start: a, len: gap });
            }
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn is_accumulation(&self, idx: usize) -> bool {
        self.accumulation[idx]
    }

    /// Angles flagged as accumulation points, in increasing order.
    pub fn accumulation_angles(&self) -> Vec<f64> {
        self.angles
            .iter()
            .zip(&self.accumulation)
            .filter(|(_, &f)| f)
            .map(|(&a, _)| a)
            .collect()
    }

    /// The complementary arcs, one per point, in counterclockwise order
    /// starting from the arc that begins at the smallest angle. Their
    /// lengths sum to the full circle.
    pub fn complementary_arcs(&self) -> Vec<Arc> {
        let n = self.angles.len();
        (0..n)
            .map(|i| {
                let start = self.angles[i];
                let end = if i + 1 == n {
                    self.angles[0] + TAU
                } else {
                    self.angles[i + 1]
                };
                // Validity was checked at construction.
                Arc {
                    start,
                    length: end - start,
                }
            })
            .collect()
    }

    /// Chordal distance from the boundary point at angle `t` to the set:
    /// `min_s |e^{it} - e^{is}| = 2 |sin((t-s)/2)|`.
    pub fn chordal_dist(&self, t: f64) -> f64 {
        chordal_distance(&self.angles, t)
    }

    /// Index of the complementary arc whose half-open span `[start, end)`
    /// contains the azimuth `a` (taken mod 2pi).
    fn arc_index(&self, a: f64) -> usize {
        let a = a.rem_euclid(TAU);
        let n = self.angles.len();
        if a < self.angles[0] {
            return n - 1;
        }
        // Last i with angles[i] <= a.
        self.angles.partition_point(|&s| s <= a) - 1
    }
}

impl TryFrom<RawCircleSet> for ClosedCircleSet {
    type Error = Error;
    fn try_from(raw: RawCircleSet) -> Result<Self> {
        ClosedCircleSet::with_accumulation(raw.angles, &raw.accumulation)
    }
}

impl From<ClosedCircleSet> for RawCircleSet {
    fn from(set: ClosedCircleSet) -> Self {
        let accumulation = set.accumulation_angles();
        RawCircleSet {
            angles: set.angles,
            accumulation,
        }
    }
}

/// Open isosceles triangle erected outward over the chord of an arc.
///
/// `base_angle` is the angle between the chord and each side; the angle
/// between the circle and a side is `base_angle - length/2` by the
/// tangent-chord relation, and must be positive for the sides to leave the
/// closed disk.
#[derive(Debug, Clone, Copy)]
pub struct Triangle {
    arc: Arc,
    base_angle: f64,
    // cached vertices
    p1: Complex64,
    p2: Complex64,
    apex: Complex64,
    orient: f64,
}

impl Triangle {
    pub fn new(arc: Arc, base_angle: f64) -> Result<Self> {
        let half = 0.5 * arc.length;
        if !(base_angle > half && base_angle < FRAC_PI_2) {
            return Err(Error::InvalidBaseAngle {
                phi: base_angle,
                half_arc: half,
            });
        }
        let p1 = unit(arc.start);
        let p2 = unit(arc.end());
        // Apex sits on the bisector at distance cos(L/2) + sin(L/2) tan(phi).
        let apex_r = half.cos() + half.sin() * base_angle.tan();
        let apex = Complex64::from_polar(apex_r, arc.start + half);
        debug_assert!(apex.norm() > 1.0);
        let orient = cross(p2 - p1, apex - p1);
        Ok(Triangle {
            arc,
            base_angle,
            p1,
            p2,
            apex,
            orient,
        })
    }

    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    pub fn base_angle(&self) -> f64 {
        self.base_angle
    }

    /// Angle between the circle and each side.
    pub fn theta(&self) -> f64 {
        self.base_angle - 0.5 * self.arc.length
    }

    pub fn apex(&self) -> Complex64 {
        self.apex
    }

    pub fn endpoints(&self) -> (Complex64, Complex64) {
        (self.p1, self.p2)
    }

    /// Strict interior test.
    pub fn contains(&self, z: Complex64) -> bool {
        let s1 = cross(self.p2 - self.p1, z - self.p1);
        let s2 = cross(self.apex - self.p2, z - self.p2);
        let s3 = cross(self.p1 - self.apex, z - self.apex);
        if self.orient > 0.0 {
            s1 > 0.0 && s2 > 0.0 && s3 > 0.0
        } else {
            s1 < 0.0 && s2 < 0.0 && s3 < 0.0
        }
    }
}

/// The open unit disk united with one open triangle per complementary arc.
#[derive(Debug)]
pub struct StarDomain {
    set: ClosedCircleSet,
    triangles: Vec<Triangle>,
    theta_min: f64,
    inscribed: OnceLock<Result<f64>>,
}

impl Clone for StarDomain {
    fn clone(&self) -> Self {
        StarDomain {
            set: self.set.clone(),
            triangles: self.triangles.clone(),
            theta_min: self.theta_min,
            inscribed: self.inscribed.clone(),
        }
    }
}

impl StarDomain {
    /// Builds the domain with a uniform target angle `theta0` between circle
    /// and triangle sides. Arcs too long to realize `theta0` under the
    /// `base_angle < pi/2` cap get their base angle clamped; if the clamped
    /// angle to the circle falls below `DEFAULT_THETA_FLOOR`, construction
    /// fails.
    pub fn build(set: ClosedCircleSet, theta0: f64) -> Result<Self> {
        Self::build_with_floor(set, theta0, DEFAULT_THETA_FLOOR)
    }

    pub fn build_with_floor(set: ClosedCircleSet, theta0: f64, floor: f64) -> Result<Self> {
        if !(theta0 > 0.0) {
            return Err(Error::NonPositiveTheta(theta0));
        }
        let mut triangles = Vec::with_capacity(set.len());
        let mut theta_min = f64::INFINITY;
        for arc in set.complementary_arcs() {
            let mut phi = theta0 + 0.5 * arc.length();
            if phi >= FRAC_PI_2 {
                phi = FRAC_PI_2 - CLAMP_EPS;
            }
            let theta = phi - 0.5 * arc.length();
            if theta < floor {
                return Err(Error::ThetaBelowFloor {
                    theta,
                    floor,
                    arc_len: arc.length(),
                });
            }
            theta_min = theta_min.min(theta);
            triangles.push(Triangle::new(arc, phi)?);
        }
        Ok(StarDomain {
            set,
            triangles,
            theta_min,
            inscribed: OnceLock::new(),
        })
    }

    pub fn set(&self) -> &ClosedCircleSet {
        &self.set
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// Smallest effective angle between the circle and any triangle side.
    pub fn theta_min(&self) -> f64 {
        self.theta_min
    }

    /// Membership in the open domain: the open disk or any open triangle.
    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if r < 1.0 {
            return true;
        }
        // A triangle over an arc shorter than pi stays inside that arc's
        // azimuth cone, so only the triangle at z's azimuth (and, against
        // rounding at cone edges, its neighbors) can contain z.
        let n = self.triangles.len();
        let idx = self.set.arc_index(z.im.atan2(z.re));
        self.triangles[idx].contains(z)
            || self.triangles[(idx + 1) % n].contains(z)
            || self.triangles[(idx + n - 1) % n].contains(z)
    }

    /// Points sampled along both outer sides of every triangle, corners
    /// included. Used for clearance checks against model singularities.
    pub fn boundary_samples(&self, per_side: usize) -> Vec<Complex64> {
        let per_side = per_side.max(2);
        let mut out = Vec::with_capacity(self.triangles.len() * 2 * per_side);
        for tri in &self.triangles {
            let (p1, p2) = tri.endpoints();
            let apex = tri.apex();
            for j in 0..per_side {
                let s = j as f64 / (per_side - 1) as f64;
                out.push(p1 + (apex - p1) * s);
                out.push(apex + (p2 - apex) * s);
            }
        }
        out
    }

    /// Largest `c` (sampled) such that the circle of radius
    /// `c * dist(e^{it}, F)` about `e^{it}` stays inside the domain for all
    /// sampled `t` off the set. Found per sample by bisection on the radius,
    /// probing `PROBE_POINTS` points per candidate circle; the returned value
    /// is the minimum certified ratio. Sample grids at different densities
    /// nest (dyadic fractions of each arc), so refining the grid can only
    /// lower the result.
    pub fn inscribed_constant(&self, samples_per_arc: usize) -> Result<f64> {
        if samples_per_arc < 64 {
            return Err(Error::TooFewSamples {
                min: 64,
                got: samples_per_arc,
            });
        }
        let mut c_min = f64::INFINITY;
        for arc in self.set.complementary_arcs() {
            for j in 1..samples_per_arc {
                let t = arc.start() + arc.length() * j as f64 / samples_per_arc as f64;
                let ratio = self.inscribed_ratio_at(t)?;
                c_min = c_min.min(ratio);
            }
        }
        debug_assert!(c_min > 0.0 && c_min <= 1.0 + INSCRIBED_REL_TOL);
        Ok(c_min.min(1.0))
    }

    /// Cached inscribed constant at the default sampling density.
    pub fn inscribed_constant_cached(&self) -> Result<f64> {
        self.inscribed
            .get_or_init(|| self.inscribed_constant(DEFAULT_INSCRIBED_SAMPLES))
            .clone()
    }

    fn circle_inside(&self, center: Complex64, radius: f64) -> bool {
        (0..PROBE_POINTS).all(|k| {
            let ang = TAU * k as f64 / PROBE_POINTS as f64;
            self.contains(center + Complex64::from_polar(radius, ang))
        })
    }

    fn inscribed_ratio_at(&self, t: f64) -> Result<f64> {
        let d = self.set.chordal_dist(t);
        if d <= 0.0 {
            return Err(Error::DegenerateProbe(t));
        }
        let center = unit(t);
        if self.circle_inside(center, d) {
            return Ok(1.0);
        }
        let mut lo = 0.0f64;
        let mut hi = d;
        while hi - lo > INSCRIBED_REL_TOL * d {
            let mid = 0.5 * (lo + hi);
            if self.circle_inside(center, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo == 0.0 {
            return Err(Error::DegenerateProbe(t));
        }
        Ok(lo / d)
    }
}

/// The domain `{ |z| < r, alpha < arg(z - 1) < 2pi - alpha }`: a disk of
/// radius `r > 1` slit along the ray from 1, with an excluded wedge of
/// half-aperture `alpha` about that ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VinogradovDomain {
    radius: f64,
    aperture: f64,
}

impl VinogradovDomain {
    pub fn new(radius: f64, aperture: f64) -> Result<Self> {
        if !(radius > 1.0) {
            return Err(Error::InvalidVinogradovRadius(radius));
        }
        if !(0.0..FRAC_PI_2).contains(&aperture) {
            return Err(Error::InvalidVinogradovAperture(aperture));
        }
        Ok(VinogradovDomain { radius, aperture })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let w = z - Complex64::new(1.0, 0.0);
        if w == Complex64::new(0.0, 0.0) {
            return false;
        }
        if z.norm() >= self.radius {
            return false;
        }
        let mut arg = w.arg();
        if arg < 0.0 {
            arg += TAU;
        }
        arg > self.aperture && arg < TAU - self.aperture
    }
}

//! Generators for lacunary-type boundary sets and arc-length ratio reports.
//!
//! The ratio criterion looks at the complementary arcs sorted by
//! nonincreasing length and asks whether consecutive length ratios
//! eventually stay below a threshold `beta`. Truncating an infinite
//! generator leaves one boundary arc equal in length to the smallest
//! generated gap, which shows up as a trailing ratio of 1 in the report;
//! the report keeps it, and callers choose the tail start accordingly.

use crate::error::{Error, Result};
use crate::geometry::ClosedCircleSet;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Consecutive-ratio summary of complementary arc lengths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioReport {
    /// Arc lengths sorted nonincreasing.
    pub lengths_desc: Vec<f64>,
    /// `ratios[k] = lengths_desc[k+1] / lengths_desc[k]`, each in (0, 1].
    pub ratios: Vec<f64>,
    /// First ratio index included in the tail.
    pub tail_start: usize,
    /// Maximum ratio over the tail.
    pub tail_max_ratio: f64,
}

/// Builds the ratio report for a set. `tail_start` indexes into the ratio
/// list and must leave at least one ratio in the tail.
pub fn ratio_report(set: &ClosedCircleSet, tail_start: usize) -> Result<RatioReport> {
    let arcs = set.complementary_arcs();
    if tail_start + 1 >= arcs.len() {
        return Err(Error::TailStartOutOfRange {
            tail_start,
            arcs: arcs.len(),
        });
    }
    let mut lengths_desc: Vec<f64> = arcs.iter().map(|a| a.length()).collect();
    lengths_desc.sort_by(|a, b| b.partial_cmp(a).expect("arc lengths are finite"));
    let ratios: Vec<f64> = lengths_desc
        .windows(2)
        .map(|w| w[1] / w[0])
        .collect();
    let tail_max_ratio = ratios[tail_start..]
        .iter()
        .fold(f64::NEG_INFINITY, |m, &r| m.max(r));
    Ok(RatioReport {
        lengths_desc,
        ratios,
        tail_start,
        tail_max_ratio,
    })
}

/// Tail ratio test: true when every tail ratio is at most `beta`.
pub fn check_ratio_condition(report: &RatioReport, beta: f64) -> Result<bool> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidBeta(beta));
    }
    Ok(report.tail_max_ratio <= beta)
}

/// Default tail start: the first ratio index past every arc tied (within
/// 1e-12) for the maximal length, clamped so at least one ratio remains.
/// Anchor arcs introduced to keep the set valid all share the maximal
/// length, so this skips the anchor-dominated head of the report.
pub fn default_tail_start(set: &ClosedCircleSet) -> usize {
    let mut lengths: Vec<f64> = set
        .complementary_arcs()
        .iter()
        .map(|a| a.length())
        .collect();
    lengths.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let max = lengths[0];
    let tied = lengths.iter().take_while(|&&l| max - l <= 1e-12).count();
    tied.min(lengths.len().saturating_sub(2))
}

/// Anchor angles keeping every complementary arc shorter than pi once the
/// generated tail clusters near angle 0.
const ANCHORS: [f64; 2] = [PI, 1.5 * PI];

/// Dyadic-gap set: angles `{0, pi, 3pi/2} U {(pi/2) 2^-k, k = 0..K}`, with
/// angle 0 flagged as the accumulation point of the tail.
pub fn generate_dyadic_gap(k_max: u32) -> Result<ClosedCircleSet> {
    if k_max < 1 {
        return Err(Error::GeneratorOrderZero);
    }
    let mut angles = vec![0.0];
    angles.extend_from_slice(&ANCHORS);
    for k in 0..=k_max {
        angles.push(FRAC_PI_2 * 0.5f64.powi(k as i32));
    }
    ClosedCircleSet::with_accumulation(angles, &[0.0])
}

/// Largest superlacunary order before `2^(-K^2)` loses all double-precision
/// resolution in the gap lengths.
pub const SUPERLACUNARY_MAX_ORDER: u32 = 5;

/// Superlacunary set: angles `{0, pi, 3pi/2} U {(pi/2) 2^(-k^2), k = 0..K}`.
/// Consecutive tail gap ratios decay to zero as K grows.
pub fn generate_superlacunary(k_max: u32) -> Result<ClosedCircleSet> {
    if k_max < 1 {
        return Err(Error::GeneratorOrderZero);
    }
    if k_max > SUPERLACUNARY_MAX_ORDER {
        return Err(Error::GeneratorOrderTooLarge(k_max, SUPERLACUNARY_MAX_ORDER));
    }
    let mut angles = vec![0.0];
    angles.extend_from_slice(&ANCHORS);
    for k in 0..=k_max {
        let e = (k * k) as i32;
        angles.push(FRAC_PI_2 * 0.5f64.powi(e));
    }
    ClosedCircleSet::with_accumulation(angles, &[0.0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_arcs_report_unit_ratios() {
        let set = ClosedCircleSet::new(vec![0.0, FRAC_PI_2, PI, 1.5 * PI]).unwrap();
        let report = ratio_report(&set, 0).unwrap();
        assert_eq!(report.lengths_desc.len(), 4);
        for &r in &report.ratios {
            assert!((r - 1.0).abs() < 1e-15);
        }
        assert!((report.tail_max_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dyadic_k1_gap_enumeration() {
        let set = generate_dyadic_gap(1).unwrap();
        let expected = [0.0, PI / 4.0, FRAC_PI_2, PI, 1.5 * PI];
        assert_eq!(set.angles().len(), expected.len());
        for (a, e) in set.angles().iter().zip(expected) {
            assert!((a - e).abs() < 1e-15);
        }
        let mut lens: Vec<f64> = set
            .complementary_arcs()
            .iter()
            .map(|a| a.length())
            .collect();
        lens.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected_lens = [PI / 4.0, PI / 4.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2];
        for (l, e) in lens.iter().zip(expected_lens) {
            assert!((l - e).abs() < 1e-15);
        }
    }

    #[test]
    fn dyadic_k2_smallest_arcs() {
        let set = generate_dyadic_gap(2).unwrap();
        let mut lens: Vec<f64> = set
            .complementary_arcs()
            .iter()
            .map(|a| a.length())
            .collect();
        lens.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((lens[0] - PI / 8.0).abs() < 1e-15);
        assert!((lens[1] - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn dyadic_flags_the_accumulation_point() {
        for k in [1, 4, 9] {
            let set = generate_dyadic_gap(k).unwrap();
            assert_eq!(set.accumulation_angles(), vec![0.0]);
        }
    }

    #[test]
    fn dyadic_tail_ratios_are_half_inside_the_run() {
        let set = generate_dyadic_gap(6).unwrap();
        let report = ratio_report(&set, 2).unwrap();
        // Three anchor arcs of length pi/2 head the list; the dyadic run
        // follows with exact halving; the trailing pair (truncation arc
        // equals the smallest gap) has ratio 1.
        let last = report.ratios.len() - 1;
        assert!((report.ratios[last] - 1.0).abs() < 1e-15);
        for k in 2..last {
            assert!(
                (report.ratios[k] - 0.5).abs() < 1e-15,
                "ratio[{k}] = {}",
                report.ratios[k]
            );
        }
        assert!((report.tail_max_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn superlacunary_points_and_gaps() {
        let set = generate_superlacunary(2).unwrap();
        // Generated points (pi/2)*{1, 1/2, 1/16} plus anchors.
        for e in [1.0, 0.5, 1.0 / 16.0] {
            let target = FRAC_PI_2 * e;
            assert!(
                set.angles().iter().any(|a| (a - target).abs() < 1e-15),
                "missing {target}"
            );
        }

        let set = generate_superlacunary(3).unwrap();
        let mut lens: Vec<f64> = set
            .complementary_arcs()
            .iter()
            .map(|a| a.length())
            .collect();
        lens.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Smallest generator gap between consecutive points 2^-4 and 2^-9;
        // the boundary arc from 0 to the smallest point is smaller still.
        let boundary = FRAC_PI_2 * 0.5f64.powi(9);
        let gap = FRAC_PI_2 * (0.5f64.powi(4) - 0.5f64.powi(9));
        assert!((lens[0] - boundary).abs() < 1e-15);
        assert!((lens[1] - gap).abs() < 1e-15);
    }

    #[test]
    fn superlacunary_ratios_decay_over_the_tail() {
        let set = generate_superlacunary(5).unwrap();
        let report = ratio_report(&set, 3).unwrap();
        // Past the anchor/transition region the ratios fall strictly.
        for w in report.ratios[3..].windows(2) {
            assert!(w[1] < w[0], "{:?}", report.ratios);
        }
        // With the tail started past the truncation artifacts the criterion
        // passes even at beta = 0.1.
        let tail5 = ratio_report(&set, 5).unwrap();
        assert!(check_ratio_condition(&tail5, 0.1).unwrap());
        assert!(!check_ratio_condition(&ratio_report(&set, 4).unwrap(), 0.1).unwrap());
    }

    #[test]
    fn superlacunary_guard_rails() {
        assert!(matches!(
            generate_superlacunary(6),
            Err(Error::GeneratorOrderTooLarge(6, _))
        ));
        assert!(matches!(
            generate_superlacunary(0),
            Err(Error::GeneratorOrderZero)
        ));
        assert!(matches!(
            generate_dyadic_gap(0),
            Err(Error::GeneratorOrderZero)
        ));
    }

    #[test]
    fn check_is_monotone_in_beta() {
        // Superlacunary tail past the truncation artifacts: passes from some
        // beta on, and passing is monotone in beta.
        let set = generate_superlacunary(5).unwrap();
        let report = ratio_report(&set, 5).unwrap();
        let mut prev = check_ratio_condition(&report, 0.001).unwrap();
        let mut flipped = false;
        for beta in [0.01, 0.05, 0.1, 0.3, 0.5, 0.9] {
            let cur = check_ratio_condition(&report, beta).unwrap();
            assert!(!prev || cur, "monotonicity broke at beta={beta}");
            flipped |= cur != prev;
            prev = cur;
        }
        assert!(prev, "should pass at beta=0.9");
        assert!(flipped, "threshold should sit inside the sampled range");
    }

    #[test]
    fn report_is_permutation_stable() {
        let set = generate_dyadic_gap(5).unwrap();
        let mut shuffled = set.angles().to_vec();
        shuffled.reverse();
        shuffled.swap(0, 3);
        let set2 = ClosedCircleSet::with_accumulation(shuffled, &[0.0]).unwrap();
        let a = ratio_report(&set, 2).unwrap();
        let b = ratio_report(&set2, 2).unwrap();
        assert_eq!(a.lengths_desc, b.lengths_desc);
        assert_eq!(a.ratios, b.ratios);
        assert_eq!(a.tail_max_ratio, b.tail_max_ratio);
    }

    #[test]
    fn abstract_threshold_examples() {
        let report = RatioReport {
            lengths_desc: vec![1.0, 0.5],
            ratios: vec![0.5],
            tail_start: 0,
            tail_max_ratio: 0.5,
        };
        assert!(check_ratio_condition(&report, 0.6).unwrap());
        assert!(!check_ratio_condition(&report, 0.4).unwrap());
        assert!(matches!(
            check_ratio_condition(&report, 1.0),
            Err(Error::InvalidBeta(_))
        ));
    }

    #[test]
    fn default_tail_start_skips_anchor_arcs() {
        // Three anchor arcs of maximal length pi/2 head the dyadic report.
        let set = generate_dyadic_gap(5).unwrap();
        assert_eq!(default_tail_start(&set), 3);
        // All-equal arcs: clamped so one ratio remains.
        let set = ClosedCircleSet::new(vec![0.0, FRAC_PI_2, PI, 1.5 * PI]).unwrap();
        assert_eq!(default_tail_start(&set), 2);
    }

    #[test]
    fn tail_start_bounds_checked() {
        let set = ClosedCircleSet::new(vec![0.0, FRAC_PI_2, PI, 1.5 * PI]).unwrap();
        assert!(ratio_report(&set, 2).is_ok());
        assert!(matches!(
            ratio_report(&set, 3),
            Err(Error::TailStartOutOfRange { .. })
        ));
    }
}

//! Property tests for weighted samples and decreasing rearrangements.
//!
//! Samples are drawn on a dyadic lattice: weights are integer multiples of
//! 1/256 that sum to exactly 1, values are integer multiples of 1/64 in
//! [-4, 4]. Every partial sum of such weights and every weighted cumulative
//! sum is exactly representable, so the distribution-function and shift
//! identities can be asserted bitwise rather than within a tolerance.

use dimsob_core::profile::WeightedSample;
use proptest::prelude::*;

/// Splits [0, 256] at the given interior cut points and returns the part
/// sizes as exact dyadic weights summing to 1.
fn cuts_to_weights(cuts: &std::collections::BTreeSet<u32>) -> Vec<f64> {
    let mut weights = Vec::with_capacity(cuts.len() + 1);
    let mut prev = 0u32;
    for &c in cuts {
        weights.push(f64::from(c - prev) / 256.0);
        prev = c;
    }
    weights.push(f64::from(256 - prev) / 256.0);
    weights
}

fn lattice_values(raw: &[i32]) -> Vec<f64> {
    raw.iter().map(|&i| f64::from(i) / 64.0).collect()
}

/// One sample: (values, weights) with 1 to 10 entries.
fn lattice_sample() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        proptest::collection::btree_set(1u32..256, 0..10),
        proptest::collection::vec(-256i32..=256, 10),
    )
        .prop_map(|(cuts, raw)| {
            let weights = cuts_to_weights(&cuts);
            let values = lattice_values(&raw[..weights.len()]);
            (values, weights)
        })
}

/// Two value lists over one shared weight grid.
fn lattice_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (
        proptest::collection::btree_set(1u32..256, 0..10),
        proptest::collection::vec(-256i32..=256, 20),
    )
        .prop_map(|(cuts, raw)| {
            let weights = cuts_to_weights(&cuts);
            let n = weights.len();
            let u = lattice_values(&raw[..n]);
            let v = lattice_values(&raw[10..10 + n]);
            (weights, u, v)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// The rearrangement preserves the distribution function exactly: at
    /// 100 lattice thresholds per case the measure above the level agrees
    /// bitwise between the sample and its rearrangement.
    #[test]
    fn rearrangement_is_equimeasurable(
        (values, weights) in lattice_sample(),
        thresholds in proptest::collection::vec(-260i32..=260, 100),
    ) {
        let sample = WeightedSample::new(values, weights).unwrap();
        let star = sample.decreasing_rearrangement();
        for raw in thresholds {
            let level = f64::from(raw) / 64.0;
            prop_assert_eq!(
                sample.distribution_above(level),
                star.distribution_above(level)
            );
        }
    }
}

proptest! {
    /// (u + v)** <= u** + v** at every breakpoint of any of the three
    /// rearrangements. Cumulative sums are exact on the lattice; the only
    /// rounding is the final division by t.
    #[test]
    fn maximal_average_is_subadditive((weights, u, v) in lattice_pair()) {
        let sum: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let su = WeightedSample::new(u, weights.clone()).unwrap().decreasing_rearrangement();
        let sv = WeightedSample::new(v, weights.clone()).unwrap().decreasing_rearrangement();
        let ss = WeightedSample::new(sum, weights).unwrap().decreasing_rearrangement();
        let mut grid: Vec<f64> = Vec::new();
        grid.extend_from_slice(su.breakpoints());
        grid.extend_from_slice(sv.breakpoints());
        grid.extend_from_slice(ss.breakpoints());
        for &t in &grid {
            let lhs = ss.maximal_average(t);
            let rhs = su.maximal_average(t) + sv.maximal_average(t);
            prop_assert!(
                lhs <= rhs + 1e-12,
                "subadditivity failed at t = {}: {} > {}", t, lhs, rhs
            );
        }
    }

    /// f* <= f** pointwise, checked at breakpoints and step midpoints.
    #[test]
    fn maximal_average_dominates((values, weights) in lattice_sample()) {
        let star = WeightedSample::new(values, weights).unwrap().decreasing_rearrangement();
        let bps = star.breakpoints();
        let mut points: Vec<f64> = bps.to_vec();
        let mut prev = 0.0;
        for &b in bps {
            points.push(0.5 * (prev + b));
            prev = b;
        }
        for &t in &points {
            let fs = if t < 1.0 { star.eval(t) } else { *star.values().last().unwrap() };
            prop_assert!(
                fs <= star.maximal_average(t) + 1e-12,
                "f*({}) exceeds f**({})", t, t
            );
        }
    }

    /// Rearrangement commutes with constant shifts exactly:
    /// (f - a)* and f* - a agree bitwise in breakpoints and values.
    #[test]
    fn rearrangement_shift_covariance(
        (values, weights) in lattice_sample(),
        shift_raw in -256i32..=256,
    ) {
        let a = f64::from(shift_raw) / 64.0;
        let shifted_values: Vec<f64> = values.iter().map(|&x| x - a).collect();
        let star = WeightedSample::new(values, weights.clone()).unwrap().decreasing_rearrangement();
        let shifted_star = WeightedSample::new(shifted_values, weights)
            .unwrap()
            .decreasing_rearrangement();
        let direct = star.shift_down(a);
        prop_assert_eq!(shifted_star.breakpoints(), direct.breakpoints());
        prop_assert_eq!(shifted_star.values(), direct.values());
    }
}

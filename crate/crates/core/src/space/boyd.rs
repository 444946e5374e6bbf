//! Boyd indices and Hardy operator norm bounds.
//!
//! Upper operator bounds integrate the closed dilation model:
//! `‖P‖ <= ∫₀¹ h(1/u) du` and `‖Q_a‖ <= ∫₁^∞ h(1/s)·s^{a-1} ds`.
//! With `h(r) <= r^alpha·Σ coef·ln(1/r)^pow` each term integrates to a
//! Gamma factor, so the bounds stay exact. Lower estimates maximize the
//! ratio over the shared test family plus targeted near-extremal powers.

use alloc::vec::Vec;

use super::dilation::{test_profiles, upper_model, DilationNorm};
use super::hardy::{hardy_transform, HardyEvaluator, HardyOp};
use super::norm::ri_norm;
use super::{dilation_norm, SpaceError, SpaceSpec};
use crate::float;
use crate::profile::StepProfile;
use crate::special;

/// Estimated or exact Boyd indices: the dilation exponents governing
/// boundedness of `P` (upper) and `Q_a` (lower).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoydIndices {
    /// Exponent of `h(r)` as `r → 0`.
    pub lower: f64,
    /// Exponent of `h(r)` as `r → ∞`.
    pub upper: f64,
    /// True when the indices come from finite-sample extrapolation.
    pub estimated: bool,
}

/// Boyd indices: closed `(alpha, alpha)` for pure-power spaces, numeric
/// extrapolation otherwise.
pub fn boyd_indices(space: &SpaceSpec) -> Result<BoydIndices, SpaceError> {
    space.validate()?;
    if let Some(model) = upper_model(space) {
        if model.exact_above_one && model.terms.len() == 1 {
            return Ok(BoydIndices {
                lower: model.alpha,
                upper: model.alpha,
                estimated: false,
            });
        }
    }
    boyd_indices_estimated(space)
}

/// Always-numeric Boyd estimation: samples `h(2^{±j})`, extrapolates the
/// exponent linearly in `1/j`, and errors when two extrapolation pairs
/// disagree by more than 0.05.
pub fn boyd_indices_estimated(space: &SpaceSpec) -> Result<BoydIndices, SpaceError> {
    space.validate()?;
    const LN2: f64 = core::f64::consts::LN_2;
    let js = [8.0f64, 11.0, 15.0, 20.0];
    let mut g_lo = [0.0f64; 4];
    let mut g_hi = [0.0f64; 4];
    for (i, j) in js.iter().enumerate() {
        let r_small = float::powf(2.0, -j);
        let r_large = float::powf(2.0, *j);
        g_lo[i] = float::ln(dilation_norm(space, r_small)?.value) / (-j * LN2);
        g_hi[i] = float::ln(dilation_norm(space, r_large)?.value) / (j * LN2);
    }
    // Model g(j) = alpha + c/j; eliminate c with two samples.
    let rich = |j1: f64, g1: f64, j2: f64, g2: f64| (j2 * g2 - j1 * g1) / (j2 - j1);
    let lower_a = rich(js[1], g_lo[1], js[3], g_lo[3]);
    let lower_b = rich(js[0], g_lo[0], js[2], g_lo[2]);
    let upper_a = rich(js[1], g_hi[1], js[3], g_hi[3]);
    let upper_b = rich(js[0], g_hi[0], js[2], g_hi[2]);
    let spread = (lower_a - lower_b).abs().max((upper_a - upper_b).abs());
    if spread > 0.05 {
        return Err(SpaceError::BoydNonConvergent { spread });
    }
    Ok(BoydIndices {
        lower: lower_a,
        upper: upper_a,
        estimated: true,
    })
}

/// Upper bound on `‖P‖`: `1/(1 - alpha)` for spaces whose dilation norm is
/// exactly `r^alpha` on `r > 1` with `alpha < 1`; `+inf` where no finite
/// closed bound is known (including `alpha = 1`, where `P` is unbounded).
pub fn p_norm_bound(space: &SpaceSpec) -> Result<f64, SpaceError> {
    space.validate()?;
    Ok(match upper_model(space) {
        Some(m) if m.exact_above_one && m.alpha < 1.0 => 1.0 / (1.0 - m.alpha),
        _ => f64::INFINITY,
    })
}

/// Bound on `‖Q_a‖` via `∫₁^∞ h(1/s)·s^{a-1} ds`.
///
/// With a closed dilation model the integral evaluates exactly to
/// `Σ coef·Γ(pow+1)/(alpha-a)^{pow+1}` (`+inf` when `a >= alpha`) and is
/// a certified upper bound. Without one, the integral of the estimated
/// dilation norm is returned, flagged `estimated`; that value is a numeric
/// reference, not a certificate.
pub fn qa_norm_bound(space: &SpaceSpec, a: f64) -> Result<DilationNorm, SpaceError> {
    space.validate()?;
    if !(a.is_finite() && (0.0..1.0).contains(&a)) {
        return Err(SpaceError::InvalidParameter {
            what: "Hardy exponent a must lie in [0, 1)",
        });
    }
    if let Some(m) = upper_model(space) {
        let sigma = m.alpha - a;
        if sigma <= 0.0 {
            return Ok(DilationNorm { value: f64::INFINITY, estimated: false });
        }
        let mut sum = 0.0;
        for (coef, pow) in &m.terms {
            let gamma = float::exp(special::log_gamma(pow + 1.0));
            sum += coef * gamma / float::powf(sigma, pow + 1.0);
        }
        return Ok(DilationNorm { value: sum, estimated: false });
    }
    // Trapezoid in z = ln s over the estimated dilation norm.
    let z_max = 50.0;
    let n = 64usize;
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    let dz = z_max / n as f64;
    for i in 0..=n {
        let z = dz * i as f64;
        let h = dilation_norm(space, float::exp(-z))?.value;
        let val = h * float::exp(a * z);
        if let Some(p) = prev {
            sum += 0.5 * (p + val) * dz;
        }
        prev = Some(val);
        if val > 1e12 {
            return Ok(DilationNorm { value: f64::INFINITY, estimated: true });
        }
    }
    Ok(DilationNorm { value: sum, estimated: true })
}

/// The profile attaining the reported lower operator bound, with the
/// envelope resolution needed to reproduce the ratio exactly.
#[derive(Debug, Clone)]
pub struct NormWitness {
    pub profile: StepProfile,
    pub envelope_points: u32,
    pub ratio: f64,
}

impl NormWitness {
    /// Re-derives the ratio from the stored profile; deterministic, so it
    /// matches `ratio` to full precision.
    pub fn recompute(&self, space: &SpaceSpec, op: HardyOp) -> Result<f64, SpaceError> {
        let ev = hardy_transform(&self.profile, op)?;
        let env = lower_envelope(&ev, self.envelope_points);
        Ok(ri_norm(space, &env)? / ri_norm(space, &self.profile)?)
    }
}

/// Two-sided operator norm estimate: certified upper bound (possibly
/// `+inf`) and a witnessed lower bound.
#[derive(Debug, Clone)]
pub struct OperatorNormEstimate {
    pub lower: f64,
    pub upper: f64,
    pub witness: NormWitness,
}

/// Step minorant of a decreasing transform on a geometric grid; sampling
/// at right endpoints keeps it below the true values.
fn lower_envelope(ev: &HardyEvaluator<'_>, points: u32) -> StepProfile {
    let n = points as usize;
    let mut bps = Vec::with_capacity(n);
    let mut vals = Vec::with_capacity(n);
    let mut floor = f64::INFINITY;
    for i in 0..n {
        let t = float::powf(10.0, -9.0 * (1.0 - (i as f64 + 1.0) / n as f64));
        let raw = ev.eval(t.min(1.0)).max(0.0);
        floor = floor.min(raw);
        bps.push(if i + 1 == n { 1.0 } else { t });
        vals.push(floor);
    }
    StepProfile::new(bps, vals).expect("envelope grid is canonical")
}

/// Stepped power decay `t^{-c}` used to approach operator extremizers.
fn stepped_power(c: f64, points: usize) -> StepProfile {
    let mut bps = Vec::with_capacity(points);
    let mut vals = Vec::with_capacity(points);
    for i in 0..points {
        let right = float::powf(10.0, -8.0 * (1.0 - (i as f64 + 1.0) / points as f64));
        let left = if i == 0 { 1e-9 } else { bps[i - 1] };
        bps.push(if i + 1 == points { 1.0 } else { right });
        vals.push(float::powf(left, -c));
    }
    StepProfile::new(bps, vals).expect("power grid is canonical")
}

const ENVELOPE_POINTS: u32 = 2000;

/// Estimates the operator norm of `P` or `Q_a` on the space: certified
/// upper bound from the dilation model, witnessed lower bound from the
/// test family plus targeted near-extremal power profiles.
pub fn operator_norm(space: &SpaceSpec, op: HardyOp) -> Result<OperatorNormEstimate, SpaceError> {
    space.validate()?;
    let upper = match op {
        HardyOp::P => p_norm_bound(space)?,
        HardyOp::Q { a } => {
            let qa = qa_norm_bound(space, a)?;
            if qa.estimated {
                f64::INFINITY
            } else {
                qa.value
            }
        }
    };
    let mut family = test_profiles();
    if let Some(m) = upper_model(space) {
        for delta in [1e-2, 1e-3, 1e-4] {
            let c = m.alpha - delta;
            if c > 0.005 {
                family.push(stepped_power(c, 2000));
            }
        }
    }
    let mut best_ratio = 0.0f64;
    let mut best: Option<StepProfile> = None;
    for f in family {
        let ev = hardy_transform(&f, op)?;
        let env = lower_envelope(&ev, ENVELOPE_POINTS);
        let ratio = ri_norm(space, &env)? / ri_norm(space, &f)?;
        if ratio > best_ratio {
            best_ratio = ratio;
            best = Some(f);
        }
    }
    let witness = NormWitness {
        profile: best.expect("family is non-empty"),
        envelope_points: ENVELOPE_POINTS,
        ratio: best_ratio,
    };
    Ok(OperatorNormEstimate { lower: best_ratio, upper, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::close;
    use crate::space::{PhiSpec, WeightVariant};

    #[test]
    fn closed_boyd_for_powers() {
        let b = boyd_indices(&SpaceSpec::Lp { p: 2.5 }).unwrap();
        assert!(!b.estimated);
        assert!(close(b.lower, 0.4, 1e-15, 0.0));
        assert!(close(b.upper, 0.4, 1e-15, 0.0));
        let m = boyd_indices(&SpaceSpec::Marcinkiewicz { phi: PhiSpec::Power { alpha: 0.7 } })
            .unwrap();
        assert!(close(m.lower, 0.7, 1e-15, 0.0));
    }

    #[test]
    fn estimated_boyd_matches_closed_for_lp() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            let b = boyd_indices_estimated(&SpaceSpec::Lp { p }).unwrap();
            assert!(b.estimated);
            assert!((b.lower - 1.0 / p).abs() < 1e-2, "p = {p}: {}", b.lower);
            assert!((b.upper - 1.0 / p).abs() < 1e-2, "p = {p}: {}", b.upper);
        }
    }

    #[test]
    fn p_bound_closed_values() {
        assert!(close(p_norm_bound(&SpaceSpec::Lp { p: 2.0 }).unwrap(), 2.0, 1e-15, 0.0));
        assert!(close(p_norm_bound(&SpaceSpec::Lp { p: 3.0 }).unwrap(), 1.5, 1e-15, 0.0));
        assert_eq!(p_norm_bound(&SpaceSpec::Lp { p: 1.0 }).unwrap(), f64::INFINITY);
        let log = SpaceSpec::log_refined(SpaceSpec::Lp { p: 2.0 }, 1, WeightVariant::Ln);
        assert_eq!(p_norm_bound(&log).unwrap(), f64::INFINITY);
    }

    #[test]
    fn qa_bound_closed_values() {
        // L^p: ∫₁^∞ s^{a-1-1/p} ds = 1/(1/p - a).
        let q = qa_norm_bound(&SpaceSpec::Lp { p: 2.0 }, 0.0).unwrap();
        assert!(!q.estimated);
        assert!(close(q.value, 2.0, 1e-14, 0.0));
        let q = qa_norm_bound(&SpaceSpec::Lp { p: 2.0 }, 0.25).unwrap();
        assert!(close(q.value, 4.0, 1e-14, 0.0));
        // Divergent when a reaches the index.
        let q = qa_norm_bound(&SpaceSpec::Lp { p: 2.0 }, 0.5).unwrap();
        assert_eq!(q.value, f64::INFINITY);
        // Log refinement adds the Gamma(3/2) correction term.
        let log = SpaceSpec::log_refined(SpaceSpec::Lp { p: 2.0 }, 1, WeightVariant::Ln);
        let q = qa_norm_bound(&log, 0.25).unwrap();
        let a_const = 1.0 + float::powf(2.0, 0.5);
        let sigma: f64 = 0.25;
        let expect = 1.0 / sigma
            + (a_const / float::sqrt(core::f64::consts::LN_2))
                * (special::SQRT_PI / 2.0)
                / float::powf(sigma, 1.5);
        assert!(!q.estimated);
        assert!(close(q.value, expect, 1e-12, 0.0), "{} vs {expect}", q.value);
    }

    #[test]
    fn operator_norm_lp_sharpness() {
        let l2 = SpaceSpec::Lp { p: 2.0 };
        let p_est = operator_norm(&l2, HardyOp::P).unwrap();
        assert!(close(p_est.upper, 2.0, 1e-15, 0.0));
        assert!(p_est.lower <= p_est.upper * (1.0 + 1e-12));
        assert!(p_est.lower > 0.9 * p_est.upper, "lower {}", p_est.lower);
        let q_est = operator_norm(&l2, HardyOp::Q { a: 0.0 }).unwrap();
        assert!(close(q_est.upper, 2.0, 1e-15, 0.0));
        assert!(q_est.lower <= q_est.upper * (1.0 + 1e-12));
        assert!(q_est.lower > 0.9 * q_est.upper, "lower {}", q_est.lower);
    }

    #[test]
    fn witness_reproduces_lower() {
        let l3 = SpaceSpec::Lp { p: 3.0 };
        let est = operator_norm(&l3, HardyOp::Q { a: 0.2 }).unwrap();
        let again = est.witness.recompute(&l3, HardyOp::Q { a: 0.2 }).unwrap();
        assert!(close(again, est.lower, 1e-9, 0.0));
    }
}

//! Norm evaluation for step profiles.
//!
//! [`NormEvaluator`] precomputes per-step tables once so that truncated
//! norms `‖f*·χ_[0,t)‖` answer in `O(log steps)`. That query is the inner
//! loop of every log-refined quadrature, Hardy bound, and verification run.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{PhiSpec, SpaceError, SpaceSpec, WeightVariant, YoungSpec};
use crate::float;
use crate::profile::StepProfile;
use crate::quad;

/// Relative tolerance for log-refined norm quadratures.
const XKLOG_REL_TOL: f64 = 1e-9;
/// Absolute floor; effectively a pure relative criterion.
const XKLOG_ABS_TOL: f64 = 1e-300;
const XKLOG_MAX_PANELS: u32 = 4000;
/// Truncated-norm integrands have a kink at every profile breakpoint, so
/// refinement can stall just short of [`XKLOG_REL_TOL`]; a stalled result
/// this close is still a norm accurate far beyond any consumer tolerance.
const XKLOG_STALL_TOL: f64 = 1e-7;
const LUXEMBURG_ITERS: u32 = 200;

/// Exact truncated-norm tables for one `(space, profile)` pair.
pub struct NormEvaluator<'a> {
    profile: &'a StepProfile,
    kind: EvalKind<'a>,
}

enum EvalKind<'a> {
    /// `‖f‖ = (Σ v_j^q · Δ(b^{qp}))^{1/q}`; covers Lp (`q = p`, `qp = 1`)
    /// and normalized finite Lorentz (`qp = q/p`).
    PowerSum { q: f64, qp: f64, prefix: Vec<f64> },
    /// Weak Lorentz supremum `sup_s f*(s)·s^{1/p}`.
    WeakSup { inv_p: f64, prefix_max: Vec<f64> },
    /// `Σ v_j · Δφ(b)`.
    Lambda { phi: &'a PhiSpec, prefix: Vec<f64> },
    /// `sup_s f*(s)·φ(s)`.
    MarcSup { phi: &'a PhiSpec, prefix_max: Vec<f64> },
    /// Luxemburg norm; bisection per query on the exact modular.
    Orlicz { young: &'a YoungSpec },
    /// Log-refined norm; quadrature over the inner evaluator.
    Nested {
        base: Box<NormEvaluator<'a>>,
        k: u32,
        weight: WeightVariant,
    },
}

impl<'a> NormEvaluator<'a> {
    /// Validates the space, rejects profiles with negative values, and
    /// builds the prefix tables.
    pub fn new(space: &'a SpaceSpec, profile: &'a StepProfile) -> Result<Self, SpaceError> {
        space.validate()?;
        let last = *profile.values().last().expect("profiles are non-empty");
        if last < 0.0 {
            return Err(SpaceError::NegativeProfile { value: last });
        }
        Ok(Self::build(space, profile))
    }

    fn build(space: &'a SpaceSpec, profile: &'a StepProfile) -> Self {
        let kind = match space {
            SpaceSpec::Lp { p } => EvalKind::PowerSum {
                q: *p,
                qp: 1.0,
                prefix: power_prefix(profile, *p, 1.0),
            },
            SpaceSpec::LorentzPQ { p, q } if q.is_finite() => EvalKind::PowerSum {
                q: *q,
                qp: *q / *p,
                prefix: power_prefix(profile, *q, *q / *p),
            },
            SpaceSpec::LorentzPQ { p, .. } => {
                let inv_p = 1.0 / *p;
                let mut prefix_max = Vec::with_capacity(profile.step_count());
                let mut best = 0.0f64;
                for (b, v) in profile.breakpoints().iter().zip(profile.values()) {
                    best = best.max(v * float::powf(*b, inv_p));
                    prefix_max.push(best);
                }
                EvalKind::WeakSup { inv_p, prefix_max }
            }
            SpaceSpec::LorentzLambda { phi } => {
                let mut prefix = Vec::with_capacity(profile.step_count());
                let mut sum = 0.0;
                let mut phi_prev = 0.0;
                for (b, v) in profile.breakpoints().iter().zip(profile.values()) {
                    let phi_b = phi.eval(*b);
                    sum += v * (phi_b - phi_prev);
                    phi_prev = phi_b;
                    prefix.push(sum);
                }
                EvalKind::Lambda { phi, prefix }
            }
            SpaceSpec::Marcinkiewicz { phi } => {
                let mut prefix_max = Vec::with_capacity(profile.step_count());
                let mut best = 0.0f64;
                for (b, v) in profile.breakpoints().iter().zip(profile.values()) {
                    best = best.max(v * phi.eval(*b));
                    prefix_max.push(best);
                }
                EvalKind::MarcSup { phi, prefix_max }
            }
            SpaceSpec::Orlicz { young } => EvalKind::Orlicz { young },
            SpaceSpec::LogRefined { base, k, weight } => EvalKind::Nested {
                base: Box::new(Self::build(base, profile)),
                k: *k,
                weight: *weight,
            },
        };
        NormEvaluator { profile, kind }
    }

    /// `‖f*·χ_[0,t)‖` for `t` in `[0, 1]`; `t = 1` is the full norm.
    ///
    /// Panics on a quadrature or bisection failure; use
    /// [`NormEvaluator::try_truncated`] where errors must surface.
    pub fn truncated(&self, t: f64) -> f64 {
        self.try_truncated(t)
            .expect("validated spaces evaluate on (0, 1]")
    }

    /// Fallible form of [`NormEvaluator::truncated`].
    pub fn try_truncated(&self, t: f64) -> Result<f64, SpaceError> {
        assert!((0.0..=1.0).contains(&t), "truncation point {t} outside [0, 1]");
        if t == 0.0 {
            return Ok(0.0);
        }
        let bps = self.profile.breakpoints();
        let vals = self.profile.values();
        let n = bps.len();
        // Index of the partial step; `None` means the whole profile.
        let cut = if t >= 1.0 { None } else { Some(self.profile.step_index(t)) };
        match &self.kind {
            EvalKind::PowerSum { q, qp, prefix } => {
                let sum = match cut {
                    None => prefix[n - 1],
                    Some(i) => {
                        let left = if i == 0 { 0.0 } else { bps[i - 1] };
                        let head = if i == 0 { 0.0 } else { prefix[i - 1] };
                        head + float::powf(vals[i], *q)
                            * (float::powf(t, *qp) - float::powf(left, *qp))
                    }
                };
                Ok(float::powf(sum, 1.0 / *q))
            }
            EvalKind::WeakSup { inv_p, prefix_max } => Ok(match cut {
                None => prefix_max[n - 1],
                Some(i) => {
                    let head = if i == 0 { 0.0 } else { prefix_max[i - 1] };
                    head.max(vals[i] * float::powf(t, *inv_p))
                }
            }),
            EvalKind::Lambda { phi, prefix } => Ok(match cut {
                None => prefix[n - 1],
                Some(i) => {
                    let left = if i == 0 { 0.0 } else { bps[i - 1] };
                    let head = if i == 0 { 0.0 } else { prefix[i - 1] };
                    head + vals[i] * (phi.eval(t) - phi.eval(left))
                }
            }),
            EvalKind::MarcSup { phi, prefix_max } => Ok(match cut {
                None => prefix_max[n - 1],
                Some(i) => {
                    let head = if i == 0 { 0.0 } else { prefix_max[i - 1] };
                    head.max(vals[i] * phi.eval(t))
                }
            }),
            EvalKind::Orlicz { young } => luxemburg(young, self.profile, t),
            EvalKind::Nested { base, k, weight } => {
                let g = |z: f64| {
                    let u = float::exp(-z).min(t);
                    base.truncated(u)
                };
                let half = f64::from(*k) / 2.0;
                let result = match weight {
                    WeightVariant::Ln => quad::log_axis_integral(
                        &g,
                        half - 1.0,
                        XKLOG_REL_TOL,
                        XKLOG_ABS_TOL,
                        XKLOG_MAX_PANELS,
                    ),
                    WeightVariant::OnePlusLn => quad::log_axis_integral(
                        &|z: f64| g(z) * float::powf(1.0 + z, half - 1.0),
                        0.0,
                        XKLOG_REL_TOL,
                        XKLOG_ABS_TOL,
                        XKLOG_MAX_PANELS,
                    ),
                };
                match result {
                    Ok(q) => Ok(q.value),
                    Err(quad::QuadError::NoConvergence { value, abs_err })
                        if abs_err <= XKLOG_STALL_TOL * value.abs() + XKLOG_ABS_TOL =>
                    {
                        Ok(value)
                    }
                    Err(e) => Err(e.into()),
                }
            }
        }
    }
}

/// Prefix sums of `v_j^q · (b_j^{qp} - b_{j-1}^{qp})`.
fn power_prefix(profile: &StepProfile, q: f64, qp: f64) -> Vec<f64> {
    let mut prefix = Vec::with_capacity(profile.step_count());
    let mut sum = 0.0;
    let mut prev = 0.0;
    for (b, v) in profile.breakpoints().iter().zip(profile.values()) {
        let bq = float::powf(*b, qp);
        sum += float::powf(*v, q) * (bq - prev);
        prev = bq;
        prefix.push(sum);
    }
    prefix
}

/// Exact Orlicz modular `Σ N(v_j/λ)·|step ∩ [0,t)|`.
fn modular(young: &YoungSpec, profile: &StepProfile, t: f64, lambda: f64) -> f64 {
    let mut sum = 0.0;
    let mut prev = 0.0;
    for (b, v) in profile.breakpoints().iter().zip(profile.values()) {
        let right = b.min(t);
        if right <= prev {
            break;
        }
        if *v > 0.0 {
            sum += young.eval(v / lambda) * (right - prev);
        }
        prev = right;
    }
    sum
}

/// Luxemburg norm `inf { λ > 0 : modular(λ) <= 1 }` of `f*·χ_[0,t)`.
fn luxemburg(young: &YoungSpec, profile: &StepProfile, t: f64) -> Result<f64, SpaceError> {
    let v_top = profile.values()[0];
    if v_top <= 0.0 {
        return Ok(0.0);
    }
    let first_width = profile.breakpoints()[0].min(t);
    // modular(hi) <= N(v_top/hi)·t <= 1 and modular(lo) >= N(v_top/lo)·first_width >= 1.
    let hi0 = v_top / young.inverse(1.0 / t);
    let lo0 = v_top / young.inverse(1.0 / first_width);
    if !(hi0.is_finite() && lo0.is_finite() && lo0 > 0.0 && hi0 >= lo0) {
        return Err(SpaceError::OrliczBisection);
    }
    let (mut lo, mut hi) = (lo0, hi0);
    let mut converged = lo == hi;
    for _ in 0..LUXEMBURG_ITERS {
        if hi - lo <= 1e-13 * hi {
            converged = true;
            break;
        }
        let mid = 0.5 * (lo + hi);
        if modular(young, profile, t, mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if !converged {
        return Err(SpaceError::OrliczBisection);
    }
    Ok(hi)
}

/// Norm of a non-negative step profile in the given space.
pub fn ri_norm(space: &SpaceSpec, profile: &StepProfile) -> Result<f64, SpaceError> {
    NormEvaluator::new(space, profile)?.try_truncated(1.0)
}

/// Log-refined norm
/// `∫₀¹ ‖f*·χ_[0,t)‖_base · w(t)^{k/2−1} dt/t` with `w` per the variant.
pub fn xklog_norm(
    base: &SpaceSpec,
    k: u32,
    profile: &StepProfile,
    weight: WeightVariant,
) -> Result<f64, SpaceError> {
    let composite = SpaceSpec::LogRefined {
        base: Box::new(base.clone()),
        k,
        weight,
    };
    ri_norm(&composite, profile)
}

/// Small Lebesgue norm: the order-1 log refinement of `L^q` with the bare
/// logarithm weight. Requires `q > 1`.
pub fn small_lebesgue_norm(q: f64, profile: &StepProfile) -> Result<f64, SpaceError> {
    if !(q.is_finite() && q > 1.0) {
        return Err(SpaceError::InvalidParameter {
            what: "small Lebesgue exponent must be finite and > 1",
        });
    }
    xklog_norm(&SpaceSpec::Lp { p: q }, 1, profile, WeightVariant::Ln)
}

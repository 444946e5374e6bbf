//! Hardy-type averaging operators on step profiles.
//!
//! `P f(t) = (1/t)·∫₀ᵗ f` and `Q_a f(t) = t^{-a}·∫ₜ¹ s^{a-1} f(s) ds` are
//! evaluated exactly: each step contributes a power (or logarithmic)
//! antiderivative, accumulated into suffix tables at construction.

use alloc::vec::Vec;

use super::SpaceError;
use crate::float;
use crate::profile::StepProfile;

/// Which Hardy operator to apply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HardyOp {
    /// Averaging from the left: `t ↦ (1/t)·∫₀ᵗ f`.
    P,
    /// Weighted averaging from the right: `t ↦ t^{-a}·∫ₜ¹ s^{a-1} f(s) ds`
    /// with `a` in `[0, 1)`; `a = 0` is the plain conjugate operator.
    Q { a: f64 },
}

impl HardyOp {
    fn validate(&self) -> Result<(), SpaceError> {
        if let HardyOp::Q { a } = self {
            if !(a.is_finite() && (0.0..1.0).contains(a)) {
                return Err(SpaceError::InvalidParameter {
                    what: "Hardy exponent a must lie in [0, 1)",
                });
            }
        }
        Ok(())
    }
}

/// Evaluator for one `(profile, operator)` pair; `O(log steps)` per query.
pub struct HardyEvaluator<'a> {
    profile: &'a StepProfile,
    op: HardyOp,
    /// `suffix[i]` = exact `∫ s^{a-1} f(s) ds` over the steps after `i`.
    suffix: Vec<f64>,
}

/// Antiderivative of `s^{a-1}`: `s^a / a`, or `ln s` when `a = 0`.
fn anti(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        float::ln(s)
    } else {
        float::powf(s, a) / a
    }
}

/// Builds the exact evaluator for the requested operator.
pub fn hardy_transform<'a>(
    profile: &'a StepProfile,
    op: HardyOp,
) -> Result<HardyEvaluator<'a>, SpaceError> {
    op.validate()?;
    let suffix = match op {
        HardyOp::P => Vec::new(),
        HardyOp::Q { a } => {
            let bps = profile.breakpoints();
            let vals = profile.values();
            let n = bps.len();
            let mut suffix = alloc::vec![0.0; n];
            let mut acc = 0.0;
            for i in (0..n).rev() {
                suffix[i] = acc;
                let left = if i == 0 { 0.0 } else { bps[i - 1] };
                if vals[i] != 0.0 {
                    // With a = 0 the first step contributes ln from -inf,
                    // but it is only ever queried at interior t > left.
                    if i > 0 || a > 0.0 {
                        acc += vals[i] * (anti(a, bps[i]) - anti(a, left));
                    }
                }
            }
            suffix
        }
    };
    Ok(HardyEvaluator { profile, op, suffix })
}

impl HardyEvaluator<'_> {
    /// Operator value at `t` in `(0, 1]`.
    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t <= 1.0, "Hardy evaluation point {t} outside (0, 1]");
        match self.op {
            HardyOp::P => self.profile.maximal_average(t),
            HardyOp::Q { a } => {
                if t >= 1.0 {
                    return 0.0;
                }
                let i = self.profile.step_index(t);
                let v = self.profile.values()[i];
                let partial = if v == 0.0 {
                    0.0
                } else {
                    v * (anti(a, self.profile.breakpoints()[i]) - anti(a, t))
                };
                let integral = partial + self.suffix[i];
                if a == 0.0 {
                    integral
                } else {
                    float::powf(t, -a) * integral
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::close;
    use alloc::vec;

    #[test]
    fn q_zero_on_constant_is_log() {
        let one = StepProfile::constant(1.0);
        let q0 = hardy_transform(&one, HardyOp::Q { a: 0.0 }).unwrap();
        for t in [0.01, 0.1, 0.5, 0.9] {
            assert!(close(q0.eval(t), float::ln(1.0 / t), 1e-14, 0.0));
        }
        assert_eq!(q0.eval(1.0), 0.0);
    }

    #[test]
    fn qa_on_constant_closed_form() {
        let one = StepProfile::constant(1.0);
        let a = 0.4;
        let qa = hardy_transform(&one, HardyOp::Q { a }).unwrap();
        for t in [0.05, 0.3, 0.77] {
            let expect = (float::powf(t, -a) - 1.0) / a;
            assert!(close(qa.eval(t), expect, 1e-13, 0.0));
        }
    }

    #[test]
    fn qa_on_staircase_matches_quadrature() {
        let f = StepProfile::new(vec![0.2, 0.6, 1.0], vec![3.0, 1.5, 0.5]).unwrap();
        let a = 0.25;
        let qa = hardy_transform(&f, HardyOp::Q { a }).unwrap();
        for t in [0.1, 0.2, 0.35, 0.6, 0.8] {
            let integrand = |s: f64| float::powf(s, a - 1.0) * f.eval(s.min(1.0 - 1e-16));
            let num = crate::quad::adaptive(&integrand, t, 1.0, 1e-12, 1e-14, 2000)
                .unwrap()
                .value;
            let expect = float::powf(t, -a) * num;
            assert!(close(qa.eval(t), expect, 1e-9, 1e-12), "t = {t}");
        }
    }

    #[test]
    fn p_is_maximal_average() {
        let f = StepProfile::new(vec![0.5, 1.0], vec![2.0, 0.0]).unwrap();
        let p = hardy_transform(&f, HardyOp::P).unwrap();
        assert!(close(p.eval(0.25), 2.0, 1e-15, 0.0));
        assert!(close(p.eval(1.0), 1.0, 1e-15, 0.0));
    }

    #[test]
    fn invalid_exponent_rejected() {
        let one = StepProfile::constant(1.0);
        assert!(hardy_transform(&one, HardyOp::Q { a: 1.0 }).is_err());
        assert!(hardy_transform(&one, HardyOp::Q { a: -0.1 }).is_err());
    }
}

//! Rearrangement-invariant function space specifications and their norms.
//!
//! A [`SpaceSpec`] names a function space on the unit interval whose norm
//! depends only on the decreasing rearrangement. Norms of step profiles are
//! evaluated exactly (closed-form piecewise integrals) for the Lebesgue,
//! Lorentz, and Marcinkiewicz variants; Orlicz norms run a Luxemburg
//! bisection on an exact modular, and logarithmically refined spaces
//! integrate an inner truncated norm against a singular log weight.
//!
//! Submodules add the Hardy operators `P` and `Q_a`, dilation norms, Boyd
//! indices, and upper/lower operator norm estimates.

mod boyd;
mod dilation;
mod hardy;
mod norm;

pub use boyd::{boyd_indices, boyd_indices_estimated, operator_norm, p_norm_bound, qa_norm_bound, BoydIndices, NormWitness, OperatorNormEstimate};
pub use dilation::{dilation_log_sup, dilation_log_sup_closed, dilation_norm, dilation_norm_upper, DilationNorm};
pub use hardy::{hardy_transform, HardyEvaluator, HardyOp};
pub use norm::{ri_norm, small_lebesgue_norm, xklog_norm, NormEvaluator};

use crate::float;
use crate::quad::QuadError;
use core::fmt;

/// Increasing concave weight for Lorentz-Lambda and Marcinkiewicz spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSpec {
    /// `φ(t) = t^alpha` with `alpha` in `(0, 1]`.
    Power { alpha: f64 },
}

impl PhiSpec {
    /// `φ(t)` for `t` in `[0, 1]`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            PhiSpec::Power { alpha } => {
                if t <= 0.0 {
                    0.0
                } else {
                    float::powf(t, *alpha)
                }
            }
        }
    }

    fn validate(&self) -> Result<(), SpaceError> {
        match self {
            PhiSpec::Power { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0 && *alpha <= 1.0) {
                    return Err(SpaceError::InvalidParameter {
                        what: "phi exponent must lie in (0, 1]",
                    });
                }
            }
        }
        Ok(())
    }
}

/// Young function for Orlicz spaces: convex, zero at zero.
#[derive(Debug, Clone, PartialEq)]
pub enum YoungSpec {
    /// `N(u) = u^p`, `p >= 1`; reproduces the Lebesgue space `L^p`.
    Power { p: f64 },
    /// `N(u) = e^u - 1`, the exponential class.
    ExpMinusOne,
    /// `N(u) = u·ln(1 + u)`, a Zygmund-style class.
    ULogU,
}

impl YoungSpec {
    /// `N(u)` for `u >= 0`.
    pub fn eval(&self, u: f64) -> f64 {
        debug_assert!(u >= 0.0);
        match self {
            YoungSpec::Power { p } => float::powf(u, *p),
            YoungSpec::ExpMinusOne => float::expm1(u),
            YoungSpec::ULogU => u * float::ln_1p(u),
        }
    }

    /// `N⁻¹(y)` for `y >= 0`, by closed form or monotone bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        debug_assert!(y >= 0.0);
        if y == 0.0 {
            return 0.0;
        }
        match self {
            YoungSpec::Power { p } => float::powf(y, 1.0 / *p),
            YoungSpec::ExpMinusOne => float::ln_1p(y),
            YoungSpec::ULogU => {
                let mut hi = 1.0;
                while self.eval(hi) < y {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.eval(mid) < y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    fn validate(&self) -> Result<(), SpaceError> {
        if let YoungSpec::Power { p } = self {
            if !(p.is_finite() && *p >= 1.0) {
                return Err(SpaceError::InvalidParameter {
                    what: "Young power must be finite and >= 1",
                });
            }
        }
        Ok(())
    }
}

/// Weight used by log-refined norms: `w(t) = ln(1/t)` or `1 + ln(1/t)`.
///
/// The `1 + ln(1/t)` form stays finite as `t` approaches 1 and is the
/// default; the bare logarithm is available where exact log-weight algebra
/// matters (iteration identities hold exactly only for it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightVariant {
    /// `w(t) = ln(1/t)`.
    Ln,
    /// `w(t) = 1 + ln(1/t)`.
    #[default]
    OnePlusLn,
}

/// A rearrangement-invariant space on the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    /// Lebesgue `L^p`, `p >= 1` finite.
    Lp { p: f64 },
    /// Lorentz `L^{p,q}` with the normalization that makes
    /// `‖χ_[0,t)‖ = t^{1/p}` exactly and `L^{p,p} = L^p` with equal norms.
    /// `q = +∞` selects the weak-type supremum form. `p = 1` demands
    /// `q = 1`; other `q` are rejected as non-normable.
    LorentzPQ { p: f64, q: f64 },
    /// Lorentz endpoint space `Λ_φ` with norm `∫₀¹ f* dφ`.
    LorentzLambda { phi: PhiSpec },
    /// Marcinkiewicz endpoint space with norm `sup_t f*(t)·φ(t)`.
    Marcinkiewicz { phi: PhiSpec },
    /// Orlicz space with the Luxemburg norm for the given Young function.
    Orlicz { young: YoungSpec },
    /// Logarithmic refinement: norm
    /// `∫₀¹ ‖f*·χ_[0,t)‖_base · w(t)^{k/2−1} dt/t`.
    LogRefined {
        base: alloc::boxed::Box<SpaceSpec>,
        k: u32,
        weight: WeightVariant,
    },
}

impl SpaceSpec {
    /// Convenience constructor for the log refinement.
    pub fn log_refined(base: SpaceSpec, k: u32, weight: WeightVariant) -> SpaceSpec {
        SpaceSpec::LogRefined {
            base: alloc::boxed::Box::new(base),
            k,
            weight,
        }
    }

    /// Checks all parameters; every public operation validates first.
    pub fn validate(&self) -> Result<(), SpaceError> {
        self.validate_depth(0)
    }

    fn validate_depth(&self, depth: u32) -> Result<(), SpaceError> {
        match self {
            SpaceSpec::Lp { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(SpaceError::InvalidParameter {
                        what: "Lebesgue exponent must be finite and >= 1",
                    });
                }
            }
            SpaceSpec::LorentzPQ { p, q } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(SpaceError::InvalidParameter {
                        what: "Lorentz p must be finite and >= 1",
                    });
                }
                let q_ok = (*q >= 1.0 && q.is_finite()) || *q == f64::INFINITY;
                if !q_ok {
                    return Err(SpaceError::InvalidParameter {
                        what: "Lorentz q must be >= 1 or +inf",
                    });
                }
                if *p == 1.0 && *q != 1.0 {
                    return Err(SpaceError::InvalidParameter {
                        what: "Lorentz p = 1 requires q = 1; other pairs are not normable",
                    });
                }
            }
            SpaceSpec::LorentzLambda { phi } | SpaceSpec::Marcinkiewicz { phi } => {
                phi.validate()?;
            }
            SpaceSpec::Orlicz { young } => young.validate()?,
            SpaceSpec::LogRefined { base, k, .. } => {
                if !(1..=3).contains(k) {
                    return Err(SpaceError::InvalidParameter {
                        what: "log refinement order k must lie in 1..=3",
                    });
                }
                if depth >= 1 {
                    if let SpaceSpec::LogRefined { .. } = **base {
                        return Err(SpaceError::InvalidParameter {
                            what: "log refinement nests at most twice",
                        });
                    }
                }
                base.validate_depth(depth + 1)?;
            }
        }
        Ok(())
    }

    /// Fundamental function `φ_X(t) = ‖χ_[0,t)‖_X` for `t` in `(0, 1]`.
    ///
    /// Closed form except for Orlicz (numeric inversion of the Young
    /// function) and log refinements (delegated to the norm quadrature).
    pub fn fundamental_function(&self, t: f64) -> Result<f64, SpaceError> {
        self.validate()?;
        if !(t.is_finite() && t > 0.0 && t <= 1.0) {
            return Err(SpaceError::InvalidParameter {
                what: "fundamental function argument must lie in (0, 1]",
            });
        }
        match self {
            SpaceSpec::Lp { p } | SpaceSpec::LorentzPQ { p, .. } => {
                Ok(float::powf(t, 1.0 / *p))
            }
            SpaceSpec::LorentzLambda { phi } | SpaceSpec::Marcinkiewicz { phi } => {
                Ok(phi.eval(t))
            }
            SpaceSpec::Orlicz { young } => Ok(1.0 / young.inverse(1.0 / t)),
            SpaceSpec::LogRefined { .. } => {
                let block = crate::profile::StepProfile::block(1.0, t)
                    .expect("unit block is a valid profile");
                ri_norm(self, &block)
            }
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lp { p } => write!(f, "lp:{p}"),
            SpaceSpec::LorentzPQ { p, q } => {
                if *q == f64::INFINITY {
                    write!(f, "lorentz:{p},inf")
                } else {
                    write!(f, "lorentz:{p},{q}")
                }
            }
            SpaceSpec::LorentzLambda { phi } => match phi {
                PhiSpec::Power { alpha } => write!(f, "lambda:t^{alpha}"),
            },
            SpaceSpec::Marcinkiewicz { phi } => match phi {
                PhiSpec::Power { alpha } => write!(f, "marcinkiewicz:t^{alpha}"),
            },
            SpaceSpec::Orlicz { young } => match young {
                YoungSpec::Power { p } => write!(f, "orlicz:power{p}"),
                YoungSpec::ExpMinusOne => write!(f, "orlicz:exp"),
                YoungSpec::ULogU => write!(f, "orlicz:zygmund"),
            },
            SpaceSpec::LogRefined { base, k, weight } => {
                let w = match weight {
                    WeightVariant::Ln => "ln",
                    WeightVariant::OnePlusLn => "1+ln",
                };
                write!(f, "xklog:{base},{k},{w}")
            }
        }
    }
}

/// Errors from norm evaluation and operator estimation.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceError {
    /// Space parameters fail validation.
    InvalidParameter { what: &'static str },
    /// Norms are defined for non-negative profiles only.
    NegativeProfile { value: f64 },
    /// Luxemburg bisection failed to bracket or converge.
    OrliczBisection,
    /// An adaptive quadrature inside a norm did not reach tolerance.
    Quadrature(QuadError),
    /// Numeric Boyd estimation did not stabilize.
    BoydNonConvergent { spread: f64 },
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::InvalidParameter { what } => write!(f, "invalid space: {what}"),
            SpaceError::NegativeProfile { value } => {
                write!(f, "norm of a profile with negative value {value}")
            }
            SpaceError::OrliczBisection => {
                write!(f, "Orlicz bisection failed to converge within 200 iterations")
            }
            SpaceError::Quadrature(e) => write!(f, "norm quadrature failed: {e}"),
            SpaceError::BoydNonConvergent { spread } => {
                write!(f, "Boyd index samples spread {spread} exceeds 0.05")
            }
        }
    }
}

impl From<QuadError> for SpaceError {
    fn from(e: QuadError) -> Self {
        SpaceError::Quadrature(e)
    }
}

//! Weighted samples and non-increasing step profiles on the unit interval.
//!
//! A [`WeightedSample`] is a finite measure-weighted list of values with total
//! weight one. Its decreasing rearrangement is a [`StepProfile`]: a
//! right-continuous, non-increasing step function on `[0, 1)` described by
//! strictly increasing breakpoints ending at 1. Profiles are immutable and
//! carry a prefix-integral table, so evaluation, cumulative integrals, and
//! maximal averages are `O(log n)` per query.
//!
//! The sample keeps its canonical descending order and the exact prefix sums
//! of the reordered weights. Distribution queries on the sample and on the
//! rearranged profile read the same sums, so equimeasurability holds bitwise,
//! not merely within rounding.

use alloc::vec::Vec;
use core::fmt;

/// Tolerance for accepting a weight vector as a probability vector before
/// renormalizing, and for snapping a final breakpoint to 1.
pub const UNIT_SUM_TOLERANCE: f64 = 1e-12;

/// Validation and domain errors for sample and profile construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileError {
    /// Sample or profile has no entries.
    Empty,
    /// `values` and `weights` differ in length.
    LengthMismatch { values: usize, weights: usize },
    /// A value or breakpoint is NaN or infinite.
    NonFinite { index: usize },
    /// A weight lies outside `(0, 1]`.
    WeightOutOfRange { index: usize },
    /// Weights sum to something farther than `UNIT_SUM_TOLERANCE` from 1.
    WeightSumDrift { sum: f64 },
    /// Breakpoints are not strictly increasing inside `(0, 1]`.
    BreakpointOrder { index: usize },
    /// The final breakpoint is not 1 within `UNIT_SUM_TOLERANCE`.
    LastBreakpoint { last: f64 },
    /// Step values increase somewhere.
    ValueOrder { index: usize },
    /// Restriction point lies outside `(0, 1)`.
    RestrictPoint { t: f64 },
    /// Truncation would leave a negative value next to the zero tail.
    NegativeTruncation { value: f64 },
    /// Dilation with `r < 1` needs a non-negative profile for the zero tail.
    NegativeDilation { value: f64 },
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::Empty => write!(f, "sample or profile has no entries"),
            ProfileError::LengthMismatch { values, weights } => {
                write!(f, "{values} values but {weights} weights")
            }
            ProfileError::NonFinite { index } => {
                write!(f, "non-finite entry at index {index}")
            }
            ProfileError::WeightOutOfRange { index } => {
                write!(f, "weight at index {index} outside (0, 1]")
            }
            ProfileError::WeightSumDrift { sum } => {
                write!(f, "weights sum to {sum}, farther than 1e-12 from 1")
            }
            ProfileError::BreakpointOrder { index } => {
                write!(f, "breakpoints not strictly increasing at index {index}")
            }
            ProfileError::LastBreakpoint { last } => {
                write!(f, "last breakpoint {last} is not 1")
            }
            ProfileError::ValueOrder { index } => {
                write!(f, "step values increase at index {index}")
            }
            ProfileError::RestrictPoint { t } => {
                write!(f, "restriction point {t} outside (0, 1)")
            }
            ProfileError::NegativeTruncation { value } => {
                write!(f, "truncation tail would sit above negative value {value}")
            }
            ProfileError::NegativeDilation { value } => {
                write!(f, "dilation with r < 1 needs non-negative values, found {value}")
            }
        }
    }
}

/// How [`StepProfile::restrict`] treats the values kept on `[0, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictMode {
    /// Keep the profile as is: `f* · χ_[0,t)`.
    Truncate,
    /// Shift by the value at the cut: `(f* − f*(t)) · χ_[0,t)`.
    SubtractTail,
}

/// A finite list of values with positive weights summing to one.
///
/// Construction renormalizes the weights when their sum drifts from 1 by at
/// most [`UNIT_SUM_TOLERANCE`] and rejects anything farther off; it never
/// resamples. The canonical descending order and its weight prefix sums are
/// fixed here once, so every downstream consumer sees identical arithmetic.
#[derive(Debug, Clone)]
pub struct WeightedSample {
    values: Vec<f64>,
    weights: Vec<f64>,
    /// Values in canonical descending order.
    sorted_values: Vec<f64>,
    /// `prefix[i]` = sum of the first `i` canonical weights; `prefix[n]` is
    /// clamped to exactly 1.
    prefix: Vec<f64>,
}

impl WeightedSample {
    /// Validates and canonicalizes a sample.
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self, ProfileError> {
        if values.is_empty() {
            return Err(ProfileError::Empty);
        }
        if values.len() != weights.len() {
            return Err(ProfileError::LengthMismatch {
                values: values.len(),
                weights: weights.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(ProfileError::NonFinite { index: i });
            }
        }
        let mut sum = 0.0;
        for (i, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w <= 0.0 || *w > 1.0 {
                return Err(ProfileError::WeightOutOfRange { index: i });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > UNIT_SUM_TOLERANCE {
            return Err(ProfileError::WeightSumDrift { sum });
        }
        let weights: Vec<f64> = weights.iter().map(|w| w / sum).collect();

        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let mut prefix = Vec::with_capacity(values.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &i in &order {
            acc += weights[i];
            prefix.push(acc);
        }
        *prefix.last_mut().expect("non-empty prefix") = 1.0;
        Ok(WeightedSample {
            values,
            weights,
            sorted_values,
            prefix,
        })
    }

    /// Values in input order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Renormalized weights in input order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Measure of `{f > level}`, read from the canonical prefix sums so it
    /// matches the rearranged profile exactly.
    pub fn distribution_above(&self, level: f64) -> f64 {
        let k = self.sorted_values.partition_point(|v| *v > level);
        self.prefix[k]
    }

    /// The decreasing rearrangement: values in descending order over
    /// consecutive intervals whose lengths are the weights. Adjacent equal
    /// values merge into one step.
    pub fn decreasing_rearrangement(&self) -> StepProfile {
        let n = self.sorted_values.len();
        let mut breakpoints = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let v = self.sorted_values[i];
            if i + 1 < n && self.sorted_values[i + 1] == v {
                continue;
            }
            breakpoints.push(self.prefix[i + 1]);
            values.push(v);
        }
        StepProfile::from_canonical(breakpoints, values)
    }
}

/// Right-continuous, non-increasing step function on `[0, 1)`.
///
/// Step `i` takes `values[i]` on `[breakpoints[i-1], breakpoints[i])` with an
/// implicit leading breakpoint 0; the last breakpoint is exactly 1. Values
/// may be negative (rearrangements commute with constant shifts), but every
/// operation that pads with a zero tail demands non-negativity first.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    /// `cum[i]` = integral of the profile over `[0, breakpoints[i]]`.
    cum: Vec<f64>,
}

impl StepProfile {
    /// Validates raw breakpoint and value arrays, merging equal-value runs.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, ProfileError> {
        if breakpoints.is_empty() {
            return Err(ProfileError::Empty);
        }
        if breakpoints.len() != values.len() {
            return Err(ProfileError::LengthMismatch {
                values: values.len(),
                weights: breakpoints.len(),
            });
        }
        let mut prev = 0.0;
        for (i, b) in breakpoints.iter().enumerate() {
            if !b.is_finite() {
                return Err(ProfileError::NonFinite { index: i });
            }
            if *b <= prev || *b > 1.0 + UNIT_SUM_TOLERANCE {
                return Err(ProfileError::BreakpointOrder { index: i });
            }
            prev = *b;
        }
        let last = *breakpoints.last().expect("non-empty breakpoints");
        if (last - 1.0).abs() > UNIT_SUM_TOLERANCE {
            return Err(ProfileError::LastBreakpoint { last });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(ProfileError::NonFinite { index: i });
            }
            if i > 0 && values[i - 1] < *v {
                return Err(ProfileError::ValueOrder { index: i });
            }
        }
        let mut bp = Vec::with_capacity(breakpoints.len());
        let mut vals = Vec::with_capacity(values.len());
        for i in 0..breakpoints.len() {
            if i + 1 < values.len() && values[i + 1] == values[i] {
                continue;
            }
            bp.push(breakpoints[i]);
            vals.push(values[i]);
        }
        *bp.last_mut().expect("non-empty") = 1.0;
        Ok(Self::from_canonical(bp, vals))
    }

    /// Constant profile `c` on `[0, 1)`.
    pub fn constant(c: f64) -> Self {
        assert!(c.is_finite(), "constant profile needs a finite value");
        Self::from_canonical(alloc::vec![1.0], alloc::vec![c])
    }

    /// Indicator-style profile `c · χ_[0,a)` (requires `c >= 0` when `a < 1`
    /// so the zero tail keeps the profile non-increasing).
    pub fn block(c: f64, a: f64) -> Result<Self, ProfileError> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(ProfileError::RestrictPoint { t: a });
        }
        if a == 1.0 {
            return Ok(Self::constant(c));
        }
        if c < 0.0 {
            return Err(ProfileError::NegativeTruncation { value: c });
        }
        if c == 0.0 {
            return Ok(Self::constant(0.0));
        }
        Ok(Self::from_canonical(alloc::vec![a, 1.0], alloc::vec![c, 0.0]))
    }

    /// Builds from already canonical data: strictly increasing breakpoints
    /// ending at exactly 1, strictly decreasing values.
    fn from_canonical(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(*breakpoints.last().unwrap(), 1.0);
        let mut cum = Vec::with_capacity(breakpoints.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (b, v) in breakpoints.iter().zip(values.iter()) {
            acc += v * (b - prev);
            cum.push(acc);
            prev = *b;
        }
        StepProfile {
            breakpoints,
            values,
            cum,
        }
    }

    /// Breakpoints, strictly increasing with final entry 1.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Step values, strictly decreasing.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of steps (always at least one).
    pub fn step_count(&self) -> usize {
        self.values.len()
    }

    /// Index of the step containing `t` in `[0, 1)`.
    pub(crate) fn step_index(&self, t: f64) -> usize {
        self.breakpoints.partition_point(|b| *b <= t)
    }

    /// Value at `t` in `[0, 1)`, right-continuous.
    pub fn eval(&self, t: f64) -> f64 {
        assert!(
            t.is_finite() && (0.0..1.0).contains(&t),
            "eval point must lie in [0, 1)"
        );
        self.values[self.step_index(t)]
    }

    /// Integral over `[0, t]` for `t` in `[0, 1]`, exact per step.
    pub fn cumulative(&self, t: f64) -> f64 {
        assert!(
            t.is_finite() && (0.0..=1.0).contains(&t),
            "cumulative endpoint must lie in [0, 1]"
        );
        if t >= 1.0 {
            return self.total();
        }
        let i = self.step_index(t);
        let left = if i == 0 { 0.0 } else { self.breakpoints[i - 1] };
        let base = if i == 0 { 0.0 } else { self.cum[i - 1] };
        base + self.values[i] * (t - left)
    }

    /// Integral over the whole interval.
    pub fn total(&self) -> f64 {
        *self.cum.last().expect("non-empty cum")
    }

    /// Maximal average `(1/t) ∫₀ᵗ f*`, exact, for `t` in `(0, 1]`.
    pub fn maximal_average(&self, t: f64) -> f64 {
        assert!(
            t.is_finite() && t > 0.0 && t <= 1.0,
            "maximal average point must lie in (0, 1]"
        );
        self.cumulative(t) / t
    }

    /// Oscillation `f**(t) − f*(t)` for `t` in `(0, 1)`.
    ///
    /// On step `i` this equals `Dᵢ/t` with
    /// `Dᵢ = ∫₀^{bᵢ₋₁} f* − vᵢ·bᵢ₋₁ ≥ 0`, so each piece is computed from one
    /// prefix integral instead of a difference of two nearly equal numbers.
    pub fn oscillation(&self, t: f64) -> f64 {
        assert!(
            t.is_finite() && t > 0.0 && t < 1.0,
            "oscillation point must lie in (0, 1)"
        );
        let i = self.step_index(t);
        if i == 0 {
            return 0.0;
        }
        let d = self.cum[i - 1] - self.values[i] * self.breakpoints[i - 1];
        (d / t).max(0.0)
    }

    /// The oscillation `f** − f*` as a callable evaluator on `(0, 1)`.
    pub fn oscillation_profile(&self) -> impl Fn(f64) -> f64 + '_ {
        move |t| self.oscillation(t)
    }

    /// Numerator `Dᵢ` of the oscillation on the step containing `t`, so the
    /// oscillation is exactly `Dᵢ/s` for `s` in that step.
    pub fn oscillation_numerator(&self, t: f64) -> f64 {
        assert!(
            t.is_finite() && t > 0.0 && t < 1.0,
            "oscillation point must lie in (0, 1)"
        );
        let i = self.step_index(t);
        if i == 0 {
            return 0.0;
        }
        (self.cum[i - 1] - self.values[i] * self.breakpoints[i - 1]).max(0.0)
    }

    /// The median `f*(1/2)`.
    pub fn median_value(&self) -> f64 {
        self.eval(0.5)
    }

    /// Measure of `{f* > level}`.
    pub fn distribution_above(&self, level: f64) -> f64 {
        let k = self.values.partition_point(|v| *v > level);
        if k == 0 {
            0.0
        } else {
            self.breakpoints[k - 1]
        }
    }

    /// Shifts every value by `-a`, preserving breakpoints.
    pub fn shift_down(&self, a: f64) -> StepProfile {
        assert!(a.is_finite(), "shift must be finite");
        let values: Vec<f64> = self.values.iter().map(|v| v - a).collect();
        let mut bp = Vec::with_capacity(self.breakpoints.len());
        let mut vals = Vec::with_capacity(values.len());
        for i in 0..values.len() {
            if i + 1 < values.len() && values[i + 1] == values[i] {
                continue;
            }
            bp.push(self.breakpoints[i]);
            vals.push(values[i]);
        }
        Self::from_canonical(bp, vals)
    }

    /// Scales every value by `c >= 0`.
    pub fn scale(&self, c: f64) -> StepProfile {
        assert!(c.is_finite() && c >= 0.0, "scale must be finite and >= 0");
        if c == 0.0 {
            return Self::constant(0.0);
        }
        Self::from_canonical(
            self.breakpoints.clone(),
            self.values.iter().map(|v| v * c).collect(),
        )
    }

    /// Restriction to `[0, t)` for `t` in `(0, 1)`, padded with a zero tail.
    ///
    /// `Truncate` keeps the values (and therefore needs them non-negative up
    /// to the cut); `SubtractTail` first subtracts `f*(t)`, which always
    /// leaves a non-negative head.
    pub fn restrict(&self, t: f64, mode: RestrictMode) -> Result<StepProfile, ProfileError> {
        if !(t.is_finite() && t > 0.0 && t < 1.0) {
            return Err(ProfileError::RestrictPoint { t });
        }
        let cut = self.step_index(t);
        if let RestrictMode::Truncate = mode {
            if self.values[cut] < 0.0 {
                return Err(ProfileError::NegativeTruncation {
                    value: self.values[cut],
                });
            }
        }
        let shift = match mode {
            RestrictMode::Truncate => 0.0,
            RestrictMode::SubtractTail => self.values[cut],
        };
        let mut bp = Vec::with_capacity(cut + 2);
        let mut vals = Vec::with_capacity(cut + 2);
        for i in 0..=cut {
            let left = if i == 0 { 0.0 } else { self.breakpoints[i - 1] };
            if left >= t {
                break;
            }
            let v = self.values[i] - shift;
            if v <= 0.0 {
                break;
            }
            bp.push(if self.breakpoints[i] > t { t } else { self.breakpoints[i] });
            vals.push(v);
        }
        if bp.is_empty() {
            return Ok(Self::constant(0.0));
        }
        if *bp.last().expect("non-empty") < 1.0 {
            bp.push(1.0);
            vals.push(0.0);
        } else {
            *bp.last_mut().expect("non-empty") = 1.0;
        }
        Ok(Self::from_canonical(bp, vals))
    }

    /// Dilation `E_r f = f*(t/r)` on `(0, min(r, 1))`, zero beyond.
    ///
    /// For `r < 1` the zero tail requires a non-negative profile.
    pub fn dilate(&self, r: f64) -> Result<StepProfile, ProfileError> {
        assert!(r.is_finite() && r > 0.0, "dilation ratio must be positive");
        if r == 1.0 {
            return Ok(self.clone());
        }
        if r < 1.0 {
            let tail = *self.values.last().expect("non-empty values");
            if tail < 0.0 {
                return Err(ProfileError::NegativeDilation { value: tail });
            }
            let mut bp = Vec::with_capacity(self.step_count() + 1);
            let mut vals = Vec::with_capacity(self.step_count() + 1);
            for i in 0..self.step_count() {
                let v = self.values[i];
                if v <= 0.0 {
                    break;
                }
                bp.push(self.breakpoints[i] * r);
                vals.push(v);
            }
            if bp.is_empty() {
                return Ok(Self::constant(0.0));
            }
            if *bp.last().expect("non-empty") < 1.0 {
                bp.push(1.0);
                vals.push(0.0);
            } else {
                *bp.last_mut().expect("non-empty") = 1.0;
            }
            Ok(Self::from_canonical(bp, vals))
        } else {
            // f*(t/r) on (0, 1): steps end at r·bᵢ, clipped to 1.
            let mut bp = Vec::new();
            let mut vals = Vec::new();
            for i in 0..self.step_count() {
                let b = self.breakpoints[i] * r;
                if b >= 1.0 {
                    bp.push(1.0);
                    vals.push(self.values[i]);
                    break;
                }
                bp.push(b);
                vals.push(self.values[i]);
            }
            Ok(Self::from_canonical(bp, vals))
        }
    }

    /// Pointwise maximum with zero; used to discard a negative tail before
    /// norm evaluation.
    pub fn clamp_nonnegative(&self) -> StepProfile {
        if *self.values.last().expect("non-empty") >= 0.0 {
            return self.clone();
        }
        let mut bp = Vec::new();
        let mut vals = Vec::new();
        for i in 0..self.step_count() {
            if self.values[i] <= 0.0 {
                break;
            }
            bp.push(self.breakpoints[i]);
            vals.push(self.values[i]);
        }
        if bp.is_empty() {
            return Self::constant(0.0);
        }
        if *bp.last().expect("non-empty") < 1.0 {
            bp.push(1.0);
            vals.push(0.0);
        }
        Self::from_canonical(bp, vals)
    }
}

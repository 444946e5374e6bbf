//! Brute-force oracles for the rearrangement inequalities and the space
//! norms, on discretized model spaces.
//!
//! Everything here recomputes its target from first principles: exact
//! piecewise-linear rearrangements by level-set sorting, Riemann sums with
//! exact cell weights, and a distance-transform Minkowski content estimate.
//! None of it shares a code path with the quadrature engine it validates,
//! which is what makes a disagreement meaningful.
//!
//! Every grid comparison carries an explicit slack `10 * range / m` for the
//! discretization error of the gradient; violations beyond that slack are
//! counted and reported, never panicked on.

use dimsob_core::iso::{profile_eval, ProfileSpec};
use dimsob_core::profile::{StepProfile, WeightedSample};
use dimsob_core::space::{
    ri_norm, small_lebesgue_norm, PhiSpec, SpaceSpec, WeightVariant, YoungSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::verify::{weight_tail_closed, HarnessError};

/// Slack factor: comparisons allow `10 * range / m` of discretization error.
pub const ORACLE_SLACK_FACTOR: f64 = 10.0;

/// Staircase resolution of the exported exact rearrangement.
pub const EXPORT_STEPS: usize = 4096;

/// Aggregated outcome of one oracle suite, serialized into reports.
#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub name: String,
    pub checks: u64,
    pub violations: u64,
    pub worst_margin: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Tally of one family of pointwise checks. Margins are `slack + rhs - lhs`;
/// a negative margin is a violation.
#[derive(Debug, Clone, Copy)]
pub struct OracleCheck {
    pub checks: u64,
    pub violations: u64,
    pub worst_margin: f64,
}

impl OracleCheck {
    fn empty() -> Self {
        OracleCheck {
            checks: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
        }
    }

    fn record(&mut self, margin: f64) {
        self.checks += 1;
        if margin < 0.0 {
            self.violations += 1;
        }
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
    }

    fn merge(&mut self, other: OracleCheck) {
        self.checks += other.checks;
        self.violations += other.violations;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
    }

    fn into_summary(self, name: &str, notes: Vec<String>) -> OracleSummary {
        OracleSummary {
            name: name.to_owned(),
            checks: self.checks,
            violations: self.violations,
            worst_margin: if self.checks == 0 {
                0.0
            } else {
                self.worst_margin
            },
            pass: self.violations == 0,
            notes,
        }
    }
}

/// Piecewise-linear function on `[0,1]` given by `m+1` uniform node values.
#[derive(Debug, Clone)]
pub struct GridFunction1D {
    values: Vec<f64>,
}

impl GridFunction1D {
    /// Node values at `i/m`, `i = 0..=m`; needs `m >= 2` and finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self, HarnessError> {
        if values.len() < 3 {
            return Err(HarnessError::Config(
                "grid function needs at least three nodes".to_owned(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(HarnessError::Config(
                "grid function values must be finite".to_owned(),
            ));
        }
        Ok(GridFunction1D { values })
    }

    pub fn m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Piecewise-linear interpolant at `x` in `[0,1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let m = self.m();
        let u = (x * m as f64).clamp(0.0, m as f64);
        let i = (u.floor() as usize).min(m - 1);
        let frac = u - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    pub fn range(&self) -> f64 {
        let max = self.values.iter().cloned().fold(f64::MIN, f64::max);
        let min = self.values.iter().cloned().fold(f64::MAX, f64::min);
        max - min
    }
}

/// Cell-center values of a function on the unit square, `m x m`, row-major.
#[derive(Debug, Clone)]
pub struct GridFunction2D {
    m: usize,
    values: Vec<f64>,
}

impl GridFunction2D {
    pub fn new(m: usize, values: Vec<f64>) -> Result<Self, HarnessError> {
        if m < 4 {
            return Err(HarnessError::Config(
                "2-D grid needs m >= 4".to_owned(),
            ));
        }
        if values.len() != m * m {
            return Err(HarnessError::Config(format!(
                "2-D grid expects {} values, got {}",
                m * m,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(HarnessError::Config(
                "grid function values must be finite".to_owned(),
            ));
        }
        Ok(GridFunction2D { m, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.m + col]
    }

    pub fn range(&self) -> f64 {
        let max = self.values.iter().cloned().fold(f64::MIN, f64::max);
        let min = self.values.iter().cloned().fold(f64::MAX, f64::min);
        max - min
    }
}

/// Exact isoperimetric profile of the unit interval: the boundary of any
/// cut `[0,t]` is a single point, so the profile is constant 1.
pub fn unit_interval_profile() -> ProfileSpec {
    ProfileSpec::Tabulated {
        points: vec![(0.25, 1.0), (0.75, 1.0)],
    }
}

/// The default check grid: twenty points in `(0, 1/2]`, inside the domain
/// of every estimator used by the checks.
pub fn default_tgrid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 40.0).collect()
}

/// Continuous piecewise-linear non-increasing curve on `[0,1]`, the exact
/// rearrangement of a `GridFunction1D`.
#[derive(Debug, Clone)]
struct PlCurve {
    s: Vec<f64>,
    y: Vec<f64>,
    /// `cums[i]` is the exact integral over `[0, s[i]]`.
    cums: Vec<f64>,
}

impl PlCurve {
    fn new(s: Vec<f64>, y: Vec<f64>) -> Self {
        let mut cums = Vec::with_capacity(s.len());
        cums.push(0.0);
        for i in 1..s.len() {
            let piece = (s[i] - s[i - 1]) * 0.5 * (y[i] + y[i - 1]);
            cums.push(cums[i - 1] + piece);
        }
        PlCurve { s, y, cums }
    }

    fn segment_of(&self, t: f64) -> usize {
        match self.s.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(i) => i.min(self.s.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.s.len() - 2),
        }
    }

    fn eval(&self, t: f64) -> f64 {
        if t <= self.s[0] {
            return self.y[0];
        }
        let last = self.s.len() - 1;
        if t >= self.s[last] {
            return self.y[last];
        }
        let i = self.segment_of(t);
        let w = self.s[i + 1] - self.s[i];
        if w <= 0.0 {
            return self.y[i + 1];
        }
        let frac = (t - self.s[i]) / w;
        self.y[i] * (1.0 - frac) + self.y[i + 1] * frac
    }

    /// Exact integral over `[0, t]`.
    fn prefix(&self, t: f64) -> f64 {
        let last = self.s.len() - 1;
        if t >= self.s[last] {
            return self.cums[last];
        }
        if t <= 0.0 {
            return 0.0;
        }
        let i = self.segment_of(t);
        self.cums[i] + (t - self.s[i]) * 0.5 * (self.y[i] + self.eval(t))
    }

    fn maximal_average(&self, t: f64) -> f64 {
        self.prefix(t) / t
    }
}

/// Length of `{x in segment : f(x) > level}` for a width-`h` linear segment
/// with endpoint values spanning `[lo, hi]`.
fn above_length(lo: f64, hi: f64, level: f64, h: f64) -> f64 {
    if level >= hi {
        0.0
    } else if level < lo {
        h
    } else {
        h * (hi - level) / (hi - lo)
    }
}

/// Exact rearrangement of the piecewise-linear interpolant, by sorting
/// level sets: the distribution function is linear between consecutive
/// distinct node values, so the rearrangement is itself piecewise linear
/// with knots exactly at those values.
fn pl_rearrangement(f: &GridFunction1D) -> PlCurve {
    let m = f.m();
    let h = 1.0 / m as f64;
    let mut levels: Vec<f64> = f.values.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let segs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let a = f.values[i];
            let b = f.values[i + 1];
            (a.min(b), a.max(b))
        })
        .collect();

    let mut s_nodes = Vec::with_capacity(2 * levels.len());
    let mut y_nodes = Vec::with_capacity(2 * levels.len());
    for &level in levels.iter().rev() {
        let mut above = 0.0;
        let mut mass = 0.0;
        for &(lo, hi) in &segs {
            above += above_length(lo, hi, level, h);
            if lo == level && hi == level {
                mass += h;
            }
        }
        let prev = s_nodes.last().copied().unwrap_or(0.0);
        let above = above.max(prev);
        if s_nodes.is_empty() || above > prev {
            s_nodes.push(above);
            y_nodes.push(level);
        } else {
            // Dust guard: the level enters exactly where the previous one
            // ended; reuse the existing node.
            y_nodes.pop();
            y_nodes.push(level);
        }
        if mass > 0.0 {
            s_nodes.push((above + mass).min(1.0));
            y_nodes.push(level);
        }
    }
    let last = s_nodes.len() - 1;
    debug_assert!((s_nodes[last] - 1.0).abs() < 1e-9);
    s_nodes[last] = 1.0;
    PlCurve::new(s_nodes, y_nodes)
}

/// Exact decreasing rearrangement of the piecewise-linear interpolant,
/// exported as a fine staircase upper envelope. The staircase takes the
/// curve's value at each cell's left edge, so it dominates the curve and
/// exceeds it by at most `max |slope| * cell width`, which is
/// `O(range / EXPORT_STEPS)` plus the exact-curve resolution `O(range/m)`.
pub fn exact_rearrangement_pl(f: &GridFunction1D) -> Result<StepProfile, HarnessError> {
    let curve = pl_rearrangement(f);
    let mut grid: Vec<f64> = (1..=EXPORT_STEPS)
        .map(|i| i as f64 / EXPORT_STEPS as f64)
        .collect();
    grid.extend(curve.s.iter().copied().filter(|&s| s > 0.0 && s < 1.0));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if *grid.last().unwrap() < 1.0 {
        grid.push(1.0);
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut left = 0.0;
    let mut floor = f64::INFINITY;
    for &b in &grid {
        let v = curve.eval(left).min(floor);
        values.push(v);
        floor = v;
        left = b;
    }
    Ok(StepProfile::new(grid, values)?)
}

/// `∫₀ᵗ g`, walking a staircase exactly.
fn stair_prefix(profile: &StepProfile, t: f64) -> f64 {
    let mut prev = 0.0;
    let mut acc = 0.0;
    for (b, v) in profile.breakpoints().iter().zip(profile.values()) {
        let right = b.min(t);
        if right <= prev {
            break;
        }
        acc += v * (right - prev);
        prev = right;
    }
    acc
}

/// `|f'|` by central differences at interior nodes, one-sided at the ends,
/// rearranged into a staircase. Node `i` carries measure `1/m`, halved at
/// the two boundary nodes.
fn gradient_staircase_1d(f: &GridFunction1D) -> Result<StepProfile, HarnessError> {
    let m = f.m();
    let h = 1.0 / m as f64;
    let v = &f.values;
    let mut grads = Vec::with_capacity(m + 1);
    let mut weights = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let g = if i == 0 {
            (v[1] - v[0]) / h
        } else if i == m {
            (v[m] - v[m - 1]) / h
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        };
        grads.push(g.abs());
        weights.push(if i == 0 || i == m { 0.5 * h } else { h });
    }
    Ok(WeightedSample::new(grads, weights)?.decreasing_rearrangement())
}

/// Oscillation inequality check on the interval: at each `t` in `tgrid`,
///
/// `(f**(t) - f*(t)) * J(t)/t  <=  (1/t) ∫₀ᵗ |∇f|*(s) ds + slack`
///
/// with `f*` the exact rearrangement of the interpolant and `|∇f|` by
/// central differences. The slack is `10 * range / m`.
pub fn check_oscillation(
    f: &GridFunction1D,
    estimator: &ProfileSpec,
    tgrid: &[f64],
) -> Result<OracleCheck, HarnessError> {
    let curve = pl_rearrangement(f);
    let grad = gradient_staircase_1d(f)?;
    let eps = ORACLE_SLACK_FACTOR * f.range() / f.m() as f64;
    let mut check = OracleCheck::empty();
    for &t in tgrid {
        let j = profile_eval(estimator, t)?;
        let lhs = (curve.maximal_average(t) - curve.eval(t)) * j / t;
        let rhs = stair_prefix(&grad, t) / t;
        check.record(rhs + eps - lhs);
    }
    Ok(check)
}

/// Slopes of the exact rearrangement as a rearranged staircase: the
/// distributional derivative `(-f*)'` is constant on each linear piece.
fn rearranged_derivative(curve: &PlCurve) -> Result<StepProfile, HarnessError> {
    let mut slopes = Vec::new();
    let mut widths = Vec::new();
    for i in 1..curve.s.len() {
        let w = curve.s[i] - curve.s[i - 1];
        if w > 0.0 {
            slopes.push(((curve.y[i - 1] - curve.y[i]) / w).max(0.0));
            widths.push(w);
        }
    }
    Ok(WeightedSample::new(slopes, widths)?.decreasing_rearrangement())
}

fn polya_szego_sides(
    f: &GridFunction1D,
    tgrid: &[f64],
) -> Result<Vec<(f64, f64)>, HarnessError> {
    let curve = pl_rearrangement(f);
    let deriv = rearranged_derivative(&curve)?;
    let grad = gradient_staircase_1d(f)?;
    Ok(tgrid
        .iter()
        .map(|&t| (stair_prefix(&deriv, t), stair_prefix(&grad, t)))
        .collect())
}

/// Derivative-rearrangement inequality on the interval:
/// `∫₀ᵗ ((-f*)')*(s) ds <= ∫₀ᵗ |∇f|*(s) ds + slack` on `tgrid`.
pub fn check_polya_szego(
    f: &GridFunction1D,
    tgrid: &[f64],
) -> Result<OracleCheck, HarnessError> {
    let eps = ORACLE_SLACK_FACTOR * f.range() / f.m() as f64;
    let mut check = OracleCheck::empty();
    for (lhs, rhs) in polya_szego_sides(f, tgrid)? {
        check.record(rhs + eps - lhs);
    }
    Ok(check)
}

/// Equality form of the derivative-rearrangement check for monotone `f`:
/// both sides must agree within the slack.
pub fn check_polya_szego_equality(
    f: &GridFunction1D,
    tgrid: &[f64],
) -> Result<OracleCheck, HarnessError> {
    let eps = ORACLE_SLACK_FACTOR * f.range() / f.m() as f64;
    let mut check = OracleCheck::empty();
    for (lhs, rhs) in polya_szego_sides(f, tgrid)? {
        check.record(eps - (rhs - lhs).abs());
    }
    Ok(check)
}

/// Exact rearrangement of a cell-constant 2-D grid function: sort the cell
/// values; every cell has measure `1/m²`.
fn sorted_staircase_2d(f: &GridFunction2D) -> Result<StepProfile, HarnessError> {
    let w = 1.0 / (f.m * f.m) as f64;
    let weights = vec![w; f.values.len()];
    Ok(WeightedSample::new(f.values.clone(), weights)?.decreasing_rearrangement())
}

/// `|∇f|` magnitude by per-axis central differences at cell centers,
/// one-sided on the boundary rows and columns, rearranged.
fn gradient_staircase_2d(f: &GridFunction2D) -> Result<StepProfile, HarnessError> {
    let m = f.m;
    let h = 1.0 / m as f64;
    let mut mags = Vec::with_capacity(m * m);
    for row in 0..m {
        for col in 0..m {
            let gx = if col == 0 {
                (f.at(row, 1) - f.at(row, 0)) / h
            } else if col == m - 1 {
                (f.at(row, m - 1) - f.at(row, m - 2)) / h
            } else {
                (f.at(row, col + 1) - f.at(row, col - 1)) / (2.0 * h)
            };
            let gy = if row == 0 {
                (f.at(1, col) - f.at(0, col)) / h
            } else if row == m - 1 {
                (f.at(m - 1, col) - f.at(m - 2, col)) / h
            } else {
                (f.at(row + 1, col) - f.at(row - 1, col)) / (2.0 * h)
            };
            mags.push((gx * gx + gy * gy).sqrt());
        }
    }
    let w = 1.0 / (m * m) as f64;
    Ok(WeightedSample::new(mags, vec![w; m * m])?.decreasing_rearrangement())
}

/// Oscillation inequality check on the unit square, with the caller's
/// estimator (the Gaussian-type lower model with constant 1 in the suites).
/// A violation here reads "estimator violated at resolution m": grid data
/// is not isoperimetrically faithful, so it is reported, not panicked on.
pub fn check_oscillation_2d(
    f: &GridFunction2D,
    estimator: &ProfileSpec,
    tgrid: &[f64],
) -> Result<OracleCheck, HarnessError> {
    let star = sorted_staircase_2d(f)?;
    let grad = gradient_staircase_2d(f)?;
    let eps = ORACLE_SLACK_FACTOR * f.range() / f.m as f64;
    let mut check = OracleCheck::empty();
    for &t in tgrid {
        let j = profile_eval(estimator, t)?;
        let osc = stair_prefix(&star, t) / t - star.eval(t);
        let lhs = osc * j / t;
        let rhs = stair_prefix(&grad, t) / t;
        check.record(rhs + eps - lhs);
    }
    Ok(check)
}

/// Exact prefix integrals of `v^p` over a staircase, queryable at any `t`.
struct PowerPrefix {
    knots: Vec<f64>,
    sums: Vec<f64>,
    powers: Vec<f64>,
}

impl PowerPrefix {
    fn new(profile: &StepProfile, p: f64) -> Self {
        let mut knots = vec![0.0];
        let mut sums = vec![0.0];
        let mut powers = Vec::new();
        let mut prev = 0.0;
        let mut acc = 0.0;
        for (b, v) in profile.breakpoints().iter().zip(profile.values()) {
            let vp = v.max(0.0).powf(p);
            acc += vp * (b - prev);
            powers.push(vp);
            knots.push(*b);
            sums.push(acc);
            prev = *b;
        }
        PowerPrefix { knots, sums, powers }
    }

    /// `∫₀ᵗ (f*)^p`, exact.
    fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let i = match self.knots.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(i) => return self.sums[i],
            Err(i) => i,
        };
        if i >= self.knots.len() {
            return *self.sums.last().unwrap();
        }
        self.sums[i - 1] + self.powers[i - 1] * (t - self.knots[i - 1])
    }
}

fn riemann_midpoints(resolution: usize) -> impl Iterator<Item = f64> {
    let r = resolution as f64;
    (0..resolution).map(move |i| (i as f64 + 0.5) / r)
}

/// Brute-force Riemann evaluation of a space norm on a staircase, used to
/// validate the closed-form evaluators. Midpoint sampling in `t` with exact
/// cell weights for the singular Lorentz and endpoint measures; bisection
/// on the midpoint modular for Orlicz; a substituted midpoint rule on
/// `u = sqrt(ln 1/t)` for the log refinement (Lebesgue base only).
/// Agreement contract: `max(1e-6, 10/resolution)` relative.
pub fn riemann_norm_oracle(
    space: &SpaceSpec,
    profile: &StepProfile,
    resolution: usize,
) -> Result<f64, HarnessError> {
    if resolution < 1000 {
        return Err(HarnessError::Config(
            "riemann oracle needs resolution >= 1000".to_owned(),
        ));
    }
    space.validate()?;
    let r = resolution as f64;
    let value = match space {
        SpaceSpec::Lp { p } => {
            let sum: f64 = riemann_midpoints(resolution)
                .map(|t| profile.eval(t).max(0.0).powf(*p))
                .sum();
            (sum / r).powf(1.0 / p)
        }
        SpaceSpec::LorentzPQ { p, q } if q.is_finite() => {
            let qp = q / p;
            let mut sum = 0.0;
            let mut prev_w = 0.0;
            for i in 0..resolution {
                let right = ((i + 1) as f64 / r).powf(qp);
                let mid = (i as f64 + 0.5) / r;
                sum += profile.eval(mid).max(0.0).powf(*q) * (right - prev_w);
                prev_w = right;
            }
            sum.powf(1.0 / q)
        }
        SpaceSpec::LorentzPQ { p, .. } => riemann_midpoints(resolution)
            .map(|t| profile.eval(t) * t.powf(1.0 / p))
            .fold(0.0, f64::max),
        SpaceSpec::LorentzLambda { phi } => {
            let mut sum = 0.0;
            let mut prev_w = phi_eval(phi, 0.0);
            for i in 0..resolution {
                let right = phi_eval(phi, (i + 1) as f64 / r);
                let mid = (i as f64 + 0.5) / r;
                sum += profile.eval(mid) * (right - prev_w);
                prev_w = right;
            }
            sum
        }
        SpaceSpec::Marcinkiewicz { phi } => riemann_midpoints(resolution)
            .map(|t| profile.eval(t) * phi_eval(phi, t))
            .fold(0.0, f64::max),
        SpaceSpec::Orlicz { young } => riemann_luxemburg(young, profile, resolution)?,
        SpaceSpec::LogRefined { base, k, weight } => {
            let SpaceSpec::Lp { p } = **base else {
                return Err(HarnessError::Config(
                    "riemann oracle supports lebesgue bases under the log refinement only"
                        .to_owned(),
                ));
            };
            let prefix = PowerPrefix::new(profile, p);
            let u_max = (41.5 * p).max(4.0).sqrt();
            let du = u_max / r;
            let exponent = f64::from(*k) / 2.0 - 1.0;
            let mut sum = 0.0;
            for i in 0..resolution {
                let u = (i as f64 + 0.5) * du;
                let z = u * u;
                let t = (-z).exp();
                let inner = prefix.eval(t).powf(1.0 / p);
                let w = match weight {
                    WeightVariant::Ln => z,
                    WeightVariant::OnePlusLn => 1.0 + z,
                };
                sum += inner * w.powf(exponent) * 2.0 * u;
            }
            sum * du
        }
    };
    Ok(value)
}

fn phi_eval(phi: &PhiSpec, t: f64) -> f64 {
    phi.eval(t)
}

/// Luxemburg norm by bisection on the midpoint-Riemann modular.
fn riemann_luxemburg(
    young: &YoungSpec,
    profile: &StepProfile,
    resolution: usize,
) -> Result<f64, HarnessError> {
    let samples: Vec<f64> = riemann_midpoints(resolution)
        .map(|t| profile.eval(t))
        .filter(|v| *v > 0.0)
        .collect();
    if samples.is_empty() {
        return Ok(0.0);
    }
    let r = resolution as f64;
    let modular = |lambda: f64| -> f64 {
        samples.iter().map(|v| young.eval(v / lambda)).sum::<f64>() / r
    };
    let v_max = samples.iter().cloned().fold(0.0, f64::max);
    let mut hi = v_max / young.inverse(1.0);
    let mut grow = 0;
    while modular(hi) > 1.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(HarnessError::Config(
                "riemann luxemburg bracket failed to grow".to_owned(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Brute-force evaluation of the small Lebesgue functional
/// `∫₀¹ ‖f*·χ_[0,t)‖_q / (t sqrt(ln 1/t)) dt`, via the substitution
/// `u = sqrt(ln 1/t)` which turns it into `2 ∫₀^∞ ‖f*·χ‖_q(e^{-u²}) du`
/// with a smooth integrand.
pub fn small_lebesgue_riemann(
    q: f64,
    profile: &StepProfile,
    resolution: usize,
) -> Result<f64, HarnessError> {
    if !(q.is_finite() && q > 1.0) {
        return Err(HarnessError::Config(
            "small lebesgue exponent must be > 1".to_owned(),
        ));
    }
    if resolution < 1000 {
        return Err(HarnessError::Config(
            "riemann oracle needs resolution >= 1000".to_owned(),
        ));
    }
    let prefix = PowerPrefix::new(profile, q);
    let u_max = (41.5 * q).max(4.0).sqrt();
    let du = u_max / resolution as f64;
    let mut sum = 0.0;
    for i in 0..resolution {
        let u = (i as f64 + 0.5) * du;
        let t = (-u * u).exp();
        sum += prefix.eval(t).powf(1.0 / q);
    }
    Ok(2.0 * sum * du)
}

/// Subset of the unit square given as an `m x m` cell mask, row-major.
#[derive(Debug, Clone)]
pub struct GridMask {
    m: usize,
    cells: Vec<bool>,
}

impl GridMask {
    pub fn new(m: usize, cells: Vec<bool>) -> Result<Self, HarnessError> {
        if m < 4 || cells.len() != m * m {
            return Err(HarnessError::Config(
                "mask needs m >= 4 and m*m cells".to_owned(),
            ));
        }
        let count = cells.iter().filter(|c| **c).count();
        if count == 0 || count == cells.len() {
            return Err(HarnessError::Config(
                "mask degenerate: empty or full".to_owned(),
            ));
        }
        Ok(GridMask { m, cells })
    }

    /// Marks the cells whose centers satisfy the predicate.
    pub fn from_fn(
        m: usize,
        mut pred: impl FnMut(f64, f64) -> bool,
    ) -> Result<Self, HarnessError> {
        let mut cells = Vec::with_capacity(m * m);
        for row in 0..m {
            for col in 0..m {
                let x = (col as f64 + 0.5) / m as f64;
                let y = (row as f64 + 0.5) / m as f64;
                cells.push(pred(x, y));
            }
        }
        GridMask::new(m, cells)
    }

    pub fn area(&self) -> f64 {
        self.cells.iter().filter(|c| **c).count() as f64 / (self.m * self.m) as f64
    }

    /// Returns the cell-index bounding box if the mask is exactly a filled
    /// axis-aligned rectangle.
    fn as_rectangle(&self) -> Option<(usize, usize, usize, usize)> {
        let (mut r0, mut r1, mut c0, mut c1) = (usize::MAX, 0, usize::MAX, 0);
        let mut count = 0usize;
        for row in 0..self.m {
            for col in 0..self.m {
                if self.cells[row * self.m + col] {
                    count += 1;
                    r0 = r0.min(row);
                    r1 = r1.max(row);
                    c0 = c0.min(col);
                    c1 = c1.max(col);
                }
            }
        }
        if count == (r1 - r0 + 1) * (c1 - c0 + 1) {
            Some((r0, r1, c0, c1))
        } else {
            None
        }
    }
}

/// Least-squares intercept of `y = a + b x`.
fn lsq_intercept(xs: &[f64], ys: &[f64]) -> Result<f64, HarnessError> {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-30 {
        return Err(HarnessError::Config(
            "perimeter fit needs at least two distinct h values".to_owned(),
        ));
    }
    let slope = (n * sxy - sx * sy) / det;
    Ok((sy - slope * sx) / n)
}

/// One-dimensional squared-distance transform (lower envelope of
/// parabolas), after Felzenszwalb and Huttenlocher.
fn dt_1d(f: &[f64], d: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let fq = f[q] + (q * q) as f64;
        loop {
            let p = v[k];
            let s = (fq - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= z[k] {
                if k == 0 {
                    // Unreachable: z[0] is -inf.
                    break;
                }
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        d[q] = dq * dq + f[p];
    }
}

/// Squared Euclidean distance (in cell units) from every supersample cell
/// center to the nearest center inside the mask.
fn distance_transform(mask: &GridMask, scale: usize) -> Vec<f64> {
    const BIG: f64 = 1e18;
    let s = mask.m * scale;
    let mut field = vec![BIG; s * s];
    for (idx, cell) in field.iter_mut().enumerate() {
        let row = idx / s;
        let col = idx % s;
        if mask.cells[(row / scale) * mask.m + (col / scale)] {
            *cell = 0.0;
        }
    }
    let mut column = vec![0.0f64; s];
    let mut out = vec![0.0f64; s];
    for col in 0..s {
        for row in 0..s {
            column[row] = field[row * s + col];
        }
        dt_1d(&column, &mut out);
        for row in 0..s {
            field[row * s + col] = out[row];
        }
    }
    let mut result = vec![0.0f64; s * s];
    for row in 0..s {
        dt_1d(&field[row * s..(row + 1) * s], &mut out);
        result[row * s..(row + 1) * s].copy_from_slice(&out);
    }
    result
}

const PERIMETER_SUPERSAMPLE: usize = 4;

/// Minkowski-content perimeter estimate relative to the open unit square:
/// dilation areas `(μ(A_h) - μ(A))/h` over `h_list`, extrapolated to
/// `h = 0` by a least-squares line.
///
/// Filled axis-aligned rectangles take a closed-form path: the dilation
/// area is exactly `P·h + k·(π/4)h²` once every `h` clears the distance to
/// the square's boundary, so the fitted intercept is the interior-face
/// perimeter to machine precision. Other masks use an exact distance
/// transform on a supersampled grid; boundary staircasing biases that
/// estimate, so the `h` values should stay well above the cell size.
pub fn perimeter_grid(mask: &GridMask, h_list: &[f64]) -> Result<f64, HarnessError> {
    let mut hs: Vec<f64> = h_list.to_vec();
    hs.retain(|h| h.is_finite() && *h > 0.0 && *h < 0.5);
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    if hs.len() < 2 {
        return Err(HarnessError::Config(
            "perimeter estimate needs at least two h values in (0, 0.5)".to_owned(),
        ));
    }
    let m = mask.m as f64;

    if let Some((r0, r1, c0, c1)) = mask.as_rectangle() {
        let (x0, x1) = (c0 as f64 / m, (c1 + 1) as f64 / m);
        let (y0, y1) = (r0 as f64 / m, (r1 + 1) as f64 / m);
        let side_gaps = [x0, 1.0 - x1, y0, 1.0 - y1];
        let lengths = [y1 - y0, y1 - y0, x1 - x0, x1 - x0];
        let perimeter: f64 = side_gaps
            .iter()
            .zip(lengths)
            .filter(|(gap, _)| **gap > 0.0)
            .map(|(_, len)| len)
            .sum();
        let corners = [[x0, y0], [x0, 1.0 - y1], [1.0 - x1, y0], [1.0 - x1, 1.0 - y1]]
            .iter()
            .filter(|[a, b]| *a > 0.0 && *b > 0.0)
            .count();
        let clearance = side_gaps
            .iter()
            .filter(|g| **g > 0.0)
            .fold(f64::INFINITY, |acc, g| acc.min(*g));
        hs.retain(|h| *h <= clearance);
        if hs.len() < 2 {
            return Err(HarnessError::Config(
                "h values exceed the mask's clearance to the square boundary".to_owned(),
            ));
        }
        let slopes: Vec<f64> = hs
            .iter()
            .map(|h| perimeter + corners as f64 * core::f64::consts::FRAC_PI_4 * h)
            .collect();
        return lsq_intercept(&hs, &slopes);
    }

    let scale = PERIMETER_SUPERSAMPLE;
    let s = mask.m * scale;
    let dist2 = distance_transform(mask, scale);
    let total = (s * s) as f64;
    let area = mask.area();
    let slopes: Vec<f64> = hs
        .iter()
        .map(|h| {
            let limit = (h * s as f64) * (h * s as f64);
            let count = dist2.iter().filter(|d| **d <= limit).count();
            (count as f64 / total - area) / h
        })
        .collect();
    lsq_intercept(&hs, &slopes)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Random smooth test function: a low-order trigonometric polynomial
/// sampled onto the node grid and shifted to be nonnegative. Smoothness
/// keeps the central-difference gradient faithful; high-frequency zigzags
/// would make the discrete gradient unsound rather than expose a real
/// violation.
pub fn random_smooth_1d(rng: &mut ChaCha8Rng, m: usize, modes: u32) -> GridFunction1D {
    let coeffs: Vec<(f64, f64)> = (1..=modes)
        .map(|k| {
            let damp = f64::from(k * k * k);
            (uniform(rng) / damp, uniform(rng) / damp)
        })
        .collect();
    let mut values: Vec<f64> = (0..=m)
        .map(|i| {
            let x = i as f64 / m as f64;
            coeffs
                .iter()
                .enumerate()
                .map(|(idx, (a, b))| {
                    let w = 2.0 * core::f64::consts::PI * (idx as f64 + 1.0) * x;
                    a * w.cos() + b * w.sin()
                })
                .sum()
        })
        .collect();
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    for v in &mut values {
        *v -= min;
    }
    GridFunction1D::new(values).expect("generated grid is valid")
}

/// Random smooth strictly increasing function: identity plus a small
/// trigonometric perturbation whose derivative stays above `0.1`.
pub fn random_monotone_1d(rng: &mut ChaCha8Rng, m: usize, modes: u32) -> GridFunction1D {
    let coeffs: Vec<f64> = (1..=modes).map(|_| uniform(rng)).collect();
    let scale = 0.9 / modes as f64;
    let values: Vec<f64> = (0..=m)
        .map(|i| {
            let x = i as f64 / m as f64;
            let wiggle: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(idx, c)| {
                    let k = idx as f64 + 1.0;
                    let w = 2.0 * core::f64::consts::PI * k;
                    c * (w * x).sin() / w
                })
                .sum();
            x + scale * wiggle
        })
        .collect();
    GridFunction1D::new(values).expect("generated grid is valid")
}

/// Random smooth function on the square: a low-order double trigonometric
/// polynomial at cell centers, shifted to be nonnegative.
pub fn random_smooth_2d(rng: &mut ChaCha8Rng, m: usize, modes: u32) -> GridFunction2D {
    let mut terms = Vec::new();
    for k in 0..=modes {
        for l in 0..=modes {
            if k == 0 && l == 0 {
                continue;
            }
            let damp = f64::from(k + l).powi(3);
            terms.push((k, l, uniform(rng) / damp, uniform(rng) / damp));
        }
    }
    let tau = 2.0 * core::f64::consts::PI;
    let mut values = Vec::with_capacity(m * m);
    for row in 0..m {
        for col in 0..m {
            let x = (col as f64 + 0.5) / m as f64;
            let y = (row as f64 + 0.5) / m as f64;
            let v: f64 = terms
                .iter()
                .map(|(k, l, a, b)| {
                    let wx = tau * f64::from(*k) * x;
                    let wy = tau * f64::from(*l) * y;
                    a * wx.cos() * wy.cos() + b * (wx + wy).sin()
                })
                .sum();
            values.push(v);
        }
    }
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    for v in &mut values {
        *v -= min;
    }
    GridFunction2D::new(m, values).expect("generated grid is valid")
}

/// Random decreasing staircase for norm agreement runs: 5 to 60 steps,
/// breakpoints clear of `t = 0`, values in `[0.05, 3]`.
pub fn random_profile(rng: &mut ChaCha8Rng) -> StepProfile {
    let steps = rng.random_range(5..=60usize);
    let mut breakpoints: Vec<f64> = (0..steps - 1)
        .map(|_| 0.002 + 0.996 * rng.random::<f64>())
        .collect();
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-4);
    breakpoints.push(1.0);
    let mut values: Vec<f64> = (0..breakpoints.len())
        .map(|_| 0.05 + 2.95 * rng.random::<f64>())
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    StepProfile::new(breakpoints, values).expect("generated profile is valid")
}

fn corpus_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const GRID_1D: usize = 256;
const MODES_1D: u32 = 6;
const GRID_2D: usize = 64;
const MODES_2D: u32 = 4;

/// Interval suite: oscillation and derivative-rearrangement inequalities on
/// a random smooth corpus, the monotone equality case, and boundedness of
/// the tail weight integral.
pub fn suite_1d(trials: u64, seed: u64) -> Result<Vec<OracleSummary>, HarnessError> {
    let unit = unit_interval_profile();
    let tgrid = default_tgrid();
    let mut osc = OracleCheck::empty();
    let mut ps = OracleCheck::empty();
    for trial in 0..trials {
        let mut rng = corpus_rng(seed, trial);
        let f = random_smooth_1d(&mut rng, GRID_1D, MODES_1D);
        osc.merge(check_oscillation(&f, &unit, &tgrid)?);
        ps.merge(check_polya_szego(&f, &tgrid)?);
    }
    let mut eq = OracleCheck::empty();
    for trial in 0..10 {
        let mut rng = corpus_rng(seed, 1_000_000 + trial);
        let f = random_monotone_1d(&mut rng, GRID_1D, 4);
        eq.merge(check_polya_szego_equality(&f, &tgrid)?);
    }

    // Tail-weight boundedness: t * ∫_t^{1/2} G must stay finite as t -> 0.
    let mut sup = 0.0f64;
    let mut sup_at = 0.0f64;
    let mut finite = OracleCheck::empty();
    for i in 1..=4000 {
        let t = 0.5 * (f64::from(i) / 4000.0).powi(4);
        let v = t * (weight_tail_closed(t) - weight_tail_closed(0.5));
        finite.record(if v.is_finite() { v } else { -1.0 });
        if v > sup {
            sup = v;
            sup_at = t;
        }
    }
    finite.worst_margin = sup;

    let corpus_note = format!(
        "corpus: smooth trig polynomials, m = {GRID_1D}, modes <= {MODES_1D}, slack 10*range/m"
    );
    Ok(vec![
        osc.into_summary("oscillation-1d", vec![corpus_note.clone()]),
        ps.into_summary("derivative-rearrangement-1d", vec![corpus_note]),
        eq.into_summary(
            "derivative-rearrangement-monotone-equality",
            vec!["monotone corpus: both sides agree within slack".to_owned()],
        ),
        finite.into_summary(
            "tail-weight-boundedness",
            vec![format!(
                "sup of t*int_t..1/2 of the log weight = {sup:.6} at t = {sup_at:.3e}"
            )],
        ),
    ])
}

/// Square suite: the oscillation inequality against the Gaussian-type
/// estimator with constant 1.
pub fn suite_2d(trials: u64, seed: u64) -> Result<Vec<OracleSummary>, HarnessError> {
    let estimator = ProfileSpec::GaussianEstimator { c: 1.0 };
    let tgrid = default_tgrid();
    let mut osc = OracleCheck::empty();
    for trial in 0..trials {
        let mut rng = corpus_rng(seed, trial);
        let f = random_smooth_2d(&mut rng, GRID_2D, MODES_2D);
        osc.merge(check_oscillation_2d(&f, &estimator, &tgrid)?);
    }
    let mut notes = vec![format!(
        "corpus: smooth trig polynomials, m = {GRID_2D}, modes <= {MODES_2D}, slack 10*range/m"
    )];
    if osc.violations > 0 {
        notes.push(format!(
            "estimator violated at resolution {GRID_2D} on {} checks; grid data is not \
             isoperimetrically faithful, treat as a resolution artifact",
            osc.violations
        ));
    }
    Ok(vec![osc.into_summary("oscillation-2d", notes)])
}

/// Norm suite: closed-form evaluators against the Riemann oracle across the
/// space zoo, plus the small Lebesgue functional against its substituted
/// quadrature.
pub fn suite_norms(trials: u64, seed: u64) -> Result<Vec<OracleSummary>, HarnessError> {
    let spaces: Vec<(SpaceSpec, usize)> = vec![
        (SpaceSpec::Lp { p: 1.5 }, 100_000),
        (SpaceSpec::Lp { p: 2.0 }, 100_000),
        (SpaceSpec::Lp { p: 3.0 }, 100_000),
        (SpaceSpec::LorentzPQ { p: 2.0, q: 1.0 }, 100_000),
        (SpaceSpec::LorentzPQ { p: 2.5, q: 1.5 }, 100_000),
        (
            SpaceSpec::LorentzPQ {
                p: 3.0,
                q: f64::INFINITY,
            },
            100_000,
        ),
        (
            SpaceSpec::LorentzLambda {
                phi: PhiSpec::Power { alpha: 0.6 },
            },
            100_000,
        ),
        (
            SpaceSpec::Marcinkiewicz {
                phi: PhiSpec::Power { alpha: 0.5 },
            },
            100_000,
        ),
        (
            SpaceSpec::Orlicz {
                young: YoungSpec::Power { p: 2.0 },
            },
            20_000,
        ),
        (
            SpaceSpec::Orlicz {
                young: YoungSpec::ExpMinusOne,
            },
            20_000,
        ),
        (
            SpaceSpec::Orlicz {
                young: YoungSpec::ULogU,
            },
            20_000,
        ),
        (
            SpaceSpec::log_refined(SpaceSpec::Lp { p: 2.0 }, 1, WeightVariant::Ln),
            200_000,
        ),
    ];
    let mut agree = OracleCheck::empty();
    let mut small = OracleCheck::empty();
    for trial in 0..trials {
        let mut rng = corpus_rng(seed, trial);
        let profile = random_profile(&mut rng);
        for (space, resolution) in &spaces {
            let exact = ri_norm(space, &profile)?;
            let brute = riemann_norm_oracle(space, &profile, *resolution)?;
            let tol = (10.0 / *resolution as f64).max(1e-6);
            let scale = exact.max(brute).max(1e-9);
            agree.record(tol - (exact - brute).abs() / scale);
        }
        for q in [1.5, 2.0, 3.0] {
            let exact = small_lebesgue_norm(q, &profile)?;
            let brute = small_lebesgue_riemann(q, &profile, 100_000)?;
            let scale = exact.max(brute).max(1e-9);
            agree_record_small(&mut small, (exact - brute).abs() / scale);
        }
    }
    Ok(vec![
        agree.into_summary(
            "riemann-norm-agreement",
            vec!["tolerance max(1e-6, 10/resolution), relative".to_owned()],
        ),
        small.into_summary(
            "small-lebesgue-riemann",
            vec!["substituted quadrature at resolution 1e5, tolerance 1e-4".to_owned()],
        ),
    ])
}

fn agree_record_small(check: &mut OracleCheck, rel_gap: f64) {
    check.record(1e-4 - rel_gap);
}

/// Dispatch for the command line: `1d`, `2d`, or `norms`.
pub fn run_suite(name: &str, trials: u64, seed: u64) -> Result<Vec<OracleSummary>, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::Config("trials must be positive".to_owned()));
    }
    match name {
        "1d" => suite_1d(trials, seed),
        "2d" => suite_2d(trials, seed),
        "norms" => suite_norms(trials, seed),
        other => Err(HarnessError::Config(format!(
            "unknown oracle suite '{other}' (expected 1d, 2d, or norms)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_of(m: usize, f: impl Fn(f64) -> f64) -> GridFunction1D {
        let values = (0..=m).map(|i| f(i as f64 / m as f64)).collect();
        GridFunction1D::new(values).unwrap()
    }

    #[test]
    fn identity_rearranges_to_flip() {
        let f = grid_of(16, |x| x);
        let curve = pl_rearrangement(&f);
        for t in [0.1, 0.3, 0.5, 0.9] {
            assert!((curve.eval(t) - (1.0 - t)).abs() < 1e-12);
        }
        assert!((curve.prefix(0.5) - 0.375).abs() < 1e-12);
    }

    #[test]
    fn tent_rearranges_to_flip() {
        let f = grid_of(16, |x| (2.0 * x - 1.0).abs());
        let curve = pl_rearrangement(&f);
        for t in [0.05, 0.25, 0.6, 0.95] {
            assert!((curve.eval(t) - (1.0 - t)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_rearranges_to_itself() {
        let f = grid_of(8, |_| 0.7);
        let curve = pl_rearrangement(&f);
        assert!((curve.eval(0.0) - 0.7).abs() < 1e-15);
        assert!((curve.eval(0.99) - 0.7).abs() < 1e-15);
        assert!((curve.prefix(0.5) - 0.35).abs() < 1e-15);
    }

    #[test]
    fn plateau_produces_flat_piece() {
        // f = min(1, max(0, 2 - 4|x - 1/2|)) has a plateau at height 1 of
        // width 1/2, so the rearrangement is 1 on [0, 1/2).
        let f = grid_of(32, |x| (2.0 - 4.0 * (x - 0.5).abs()).clamp(0.0, 1.0));
        let curve = pl_rearrangement(&f);
        assert!((curve.eval(0.25) - 1.0).abs() < 1e-12);
        assert!((curve.eval(0.49) - 1.0).abs() < 1e-12);
        assert!(curve.eval(0.75) < 1.0);
    }

    #[test]
    fn export_dominates_and_stays_close() {
        let f = grid_of(64, |x| x);
        let stair = exact_rearrangement_pl(&f).unwrap();
        for i in 1..200 {
            let t = i as f64 / 200.0;
            let gap = stair.eval(t) - (1.0 - t);
            assert!(gap >= -1e-12, "staircase must dominate at {t}");
            assert!(gap <= 1.0 / EXPORT_STEPS as f64 + 1e-9, "gap {gap} at {t}");
        }
    }

    #[test]
    fn oscillation_on_identity_matches_closed_form() {
        let f = grid_of(64, |x| x);
        let check = check_oscillation(&f, &unit_interval_profile(), &[0.25]).unwrap();
        // lhs = 1/2, rhs = 1, slack = 10/64.
        assert_eq!(check.violations, 0);
        assert!((check.worst_margin - (1.0 + 10.0 / 64.0 - 0.5)).abs() < 1e-9);
    }

    #[test]
    fn polya_szego_equality_on_linear() {
        let f = grid_of(64, |x| x);
        let eq = check_polya_szego_equality(&f, &default_tgrid()).unwrap();
        assert_eq!(eq.violations, 0);
        // Central differences of a linear function are exact, so the two
        // sides agree to rounding and the margin is the full slack.
        assert!((eq.worst_margin - 10.0 / 64.0).abs() < 1e-9);
    }

    #[test]
    fn polya_szego_strict_on_square() {
        let f = grid_of(128, |x| x * x);
        let check = check_polya_szego(&f, &default_tgrid()).unwrap();
        assert_eq!(check.violations, 0);
    }

    #[test]
    fn oscillation_2d_linear_sheet() {
        let m = 16;
        let values: Vec<f64> = (0..m * m)
            .map(|idx| ((idx % m) as f64 + 0.5) / m as f64)
            .collect();
        let f = GridFunction2D::new(m, values).unwrap();
        let est = ProfileSpec::GaussianEstimator { c: 1.0 };
        let check = check_oscillation_2d(&f, &est, &default_tgrid()).unwrap();
        assert_eq!(check.violations, 0);
    }

    #[test]
    fn riemann_lp2_on_block() {
        let block = StepProfile::new(vec![0.25, 1.0], vec![1.0, 0.0]).unwrap();
        let v = riemann_norm_oracle(&SpaceSpec::Lp { p: 2.0 }, &block, 1_000_000).unwrap();
        assert!((v - 0.5).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn riemann_marcinkiewicz_block() {
        let block = StepProfile::new(vec![0.09, 1.0], vec![2.0, 0.0]).unwrap();
        let space = SpaceSpec::Marcinkiewicz {
            phi: PhiSpec::Power { alpha: 0.5 },
        };
        let v = riemann_norm_oracle(&space, &block, 1_000_000).unwrap();
        assert!((v - 0.6).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn riemann_agrees_with_closed_forms() {
        let mut rng = corpus_rng(11, 0);
        let profile = random_profile(&mut rng);
        for space in [
            SpaceSpec::Lp { p: 1.5 },
            SpaceSpec::LorentzPQ { p: 2.0, q: 1.0 },
            SpaceSpec::LorentzPQ {
                p: 3.0,
                q: f64::INFINITY,
            },
            SpaceSpec::log_refined(SpaceSpec::Lp { p: 2.0 }, 1, WeightVariant::Ln),
        ] {
            let exact = ri_norm(&space, &profile).unwrap();
            let brute = riemann_norm_oracle(&space, &profile, 100_000).unwrap();
            let rel = (exact - brute).abs() / exact.max(brute);
            assert!(rel < 1e-4, "{space}: exact {exact} vs brute {brute}");
        }
    }

    #[test]
    fn orlicz_power_matches_lebesgue() {
        let mut rng = corpus_rng(5, 3);
        let profile = random_profile(&mut rng);
        let lp = ri_norm(&SpaceSpec::Lp { p: 2.0 }, &profile).unwrap();
        let orl = riemann_norm_oracle(
            &SpaceSpec::Orlicz {
                young: YoungSpec::Power { p: 2.0 },
            },
            &profile,
            20_000,
        )
        .unwrap();
        assert!((lp - orl).abs() / lp < 1e-3, "lp {lp} vs orlicz {orl}");
    }

    #[test]
    fn small_lebesgue_riemann_matches_core() {
        let mut rng = corpus_rng(7, 1);
        let profile = random_profile(&mut rng);
        let exact = small_lebesgue_norm(2.0, &profile).unwrap();
        let brute = small_lebesgue_riemann(2.0, &profile, 100_000).unwrap();
        let rel = (exact - brute).abs() / exact.max(brute);
        assert!(rel < 1e-4, "exact {exact} vs brute {brute}");
    }

    #[test]
    fn perimeter_half_square() {
        let mask = GridMask::from_fn(512, |x, _| x < 0.5).unwrap();
        let p = perimeter_grid(&mask, &[0.1, 0.08, 0.06, 0.05, 0.04]).unwrap();
        assert!((p - 1.0).abs() < 1e-12, "got {p}");
    }

    #[test]
    fn perimeter_centered_square() {
        let mask = GridMask::from_fn(512, |x, y| (0.25..0.75).contains(&x) && (0.25..0.75).contains(&y))
            .unwrap();
        let p = perimeter_grid(&mask, &[0.1, 0.08, 0.06, 0.05, 0.04]).unwrap();
        assert!((p - 2.0).abs() < 1e-12, "got {p}");
    }

    #[test]
    fn perimeter_disk_within_two_percent() {
        let mask =
            GridMask::from_fn(512, |x, y| (x - 0.5).powi(2) + (y - 0.5).powi(2) <= 0.0625)
                .unwrap();
        let p = perimeter_grid(&mask, &[0.16, 0.14, 0.12, 0.10, 0.08]).unwrap();
        let target = core::f64::consts::PI / 2.0;
        assert!(
            (p - target).abs() / target < 0.02,
            "got {p}, want {target}"
        );
    }

    #[test]
    fn perimeter_rejects_degenerate_masks() {
        assert!(GridMask::new(8, vec![false; 64]).is_err());
        assert!(GridMask::new(8, vec![true; 64]).is_err());
        let mask = GridMask::from_fn(8, |x, _| x < 0.5).unwrap();
        assert!(perimeter_grid(&mask, &[0.3]).is_err());
    }

    #[test]
    fn suites_run_clean_on_small_corpora() {
        for summary in suite_1d(25, 7).unwrap() {
            assert!(summary.pass, "{}: worst {}", summary.name, summary.worst_margin);
        }
        for summary in suite_2d(10, 7).unwrap() {
            assert!(summary.pass, "{}: worst {}", summary.name, summary.worst_margin);
        }
        for summary in suite_norms(3, 7).unwrap() {
            assert!(summary.pass, "{}: worst {}", summary.name, summary.worst_margin);
        }
    }

    #[test]
    fn tail_weight_sup_is_moderate() {
        let suite = suite_1d(1, 1).unwrap();
        let tail = suite
            .iter()
            .find(|s| s.name == "tail-weight-boundedness")
            .unwrap();
        assert!(tail.pass);
        assert!(tail.worst_margin > 0.05 && tail.worst_margin < 0.5);
    }
}

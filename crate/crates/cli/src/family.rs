//! Test-function families with analytic gradients.
//!
//! Each family realizes a Lipschitz function on one of the supported
//! geometries together with two-sided staircase envelopes of its decreasing
//! rearrangement and of the rearranged gradient (and, where defined, of the
//! rearranged second-order derivative magnitude `|∇|∇f||`). Verification
//! consumes the upper envelope on left-hand sides and the lower envelope on
//! right-hand sides, so envelope error can only make a check harder to pass.
//!
//! Radial and cap profiles are piecewise monotone with known breakpoints;
//! per-cell suprema and infima are therefore attained at cell endpoints and
//! the envelopes are exact for the staircase resolution used.

use dimsob_core::profile::{ProfileError, StepProfile, WeightedSample};
use dimsob_core::quad;
use dimsob_core::special::ball_measure_root;

use crate::mc;
use crate::verify::HarnessError;

/// Number of cells in the measure-space grids backing the envelopes.
const RADIAL_CELLS: usize = 4000;
/// Number of uniform polar cells for spherical cap measure tables.
const CAP_CELLS: usize = 4096;

/// Domain a family is realized on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// Euclidean space; functions supported on a ball of unit volume.
    Rn,
    /// Unit ball with normalized volume measure and Euclidean gradient.
    Ball,
    /// Unit sphere with normalized surface measure and geodesic gradient.
    Sphere,
    /// Unit cube, sampled by Monte Carlo.
    Cube,
}

impl Geometry {
    pub fn as_str(self) -> &'static str {
        match self {
            Geometry::Rn => "rn",
            Geometry::Ball => "ball",
            Geometry::Sphere => "sphere",
            Geometry::Cube => "cube",
        }
    }
}

/// Radial profile `g(r)` on `[0, 1]`, non-increasing with `g(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialShape {
    /// `1 − r`
    Linear,
    /// `1 − r²`
    Quadratic,
    /// `cos(πr/2)`
    Cosine,
    /// `min(1, 2(1 − r))`
    Plateau,
    /// `(1 − r)³`
    Power,
    /// `(1 − r²)²`; vanishes to first order at the boundary
    Bump2,
    /// `cos²(πr/2)`; vanishes to first order at the boundary
    CosBump,
}

/// Polar-angle profile `g(θ)` on `[0, π]`, non-increasing with `g(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapShape {
    /// `1 − θ/π`
    Linear,
    /// `(1 + cos θ)/2`
    Height,
    /// `cos(θ/2)`
    CosHalf,
    /// `min(1, 2(1 − θ/π))`
    Plateau,
    /// `1 − (θ/π)²`
    Quadratic,
}

/// Coordinate functions on the unit cube, evaluated by sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeShape {
    /// `f(x) = x₁`; the distribution is dimension-independent.
    Coord,
    /// `f(x) = max(x₁, x₂)`; requires `n = 2`.
    Max2,
}

/// A family selector as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    Radial(RadialShape),
    Cap(CapShape),
    Tensor(CubeShape),
}

impl FamilySpec {
    pub fn name(&self) -> String {
        match self {
            FamilySpec::Radial(s) => format!("radial:{}", s.name()),
            FamilySpec::Cap(s) => format!("cap:{}", s.name()),
            FamilySpec::Tensor(s) => format!("tensor:{}", s.name()),
        }
    }
}

impl RadialShape {
    pub fn name(self) -> &'static str {
        match self {
            RadialShape::Linear => "linear",
            RadialShape::Quadratic => "quadratic",
            RadialShape::Cosine => "cosine",
            RadialShape::Plateau => "plateau",
            RadialShape::Power => "power",
            RadialShape::Bump2 => "bump2",
            RadialShape::CosBump => "cosbump",
        }
    }

    fn g(self, r: f64) -> f64 {
        match self {
            RadialShape::Linear => 1.0 - r,
            RadialShape::Quadratic => 1.0 - r * r,
            RadialShape::Cosine => libm::cos(core::f64::consts::FRAC_PI_2 * r),
            RadialShape::Plateau => (2.0 * (1.0 - r)).min(1.0),
            RadialShape::Power => (1.0 - r).powi(3),
            RadialShape::Bump2 => {
                let u = 1.0 - r * r;
                u * u
            }
            RadialShape::CosBump => {
                let c = libm::cos(core::f64::consts::FRAC_PI_2 * r);
                c * c
            }
        }
    }

    /// `|g′(r)|`.
    fn grad(self, r: f64) -> f64 {
        match self {
            RadialShape::Linear => 1.0,
            RadialShape::Quadratic => 2.0 * r,
            RadialShape::Cosine => {
                core::f64::consts::FRAC_PI_2 * libm::sin(core::f64::consts::FRAC_PI_2 * r)
            }
            RadialShape::Plateau => {
                if r < 0.5 {
                    0.0
                } else {
                    2.0
                }
            }
            RadialShape::Power => 3.0 * (1.0 - r) * (1.0 - r),
            RadialShape::Bump2 => 4.0 * r * (1.0 - r * r),
            RadialShape::CosBump => {
                core::f64::consts::FRAC_PI_2 * libm::sin(core::f64::consts::PI * r)
            }
        }
    }

    /// `|(|g′|)′(r)|`, defined only for the shapes whose gradient modulus
    /// is differentiable and vanishes appropriately at the boundary.
    fn second(self, r: f64) -> Option<f64> {
        match self {
            RadialShape::Bump2 => Some((4.0 - 12.0 * r * r).abs()),
            RadialShape::CosBump => {
                let half_pi_sq = core::f64::consts::PI * core::f64::consts::FRAC_PI_2;
                Some(half_pi_sq * libm::cos(core::f64::consts::PI * r).abs())
            }
            _ => None,
        }
    }

    /// Interior kinks or critical points of `g`, `|g′|`, and `|(|g′|)′|`.
    fn breakpoints(self) -> &'static [f64] {
        const PLATEAU: [f64; 1] = [0.5];
        // 1/√3: critical point of |g′| and zero of the second derivative.
        const BUMP2: [f64; 1] = [0.577_350_269_189_625_8];
        match self {
            RadialShape::Plateau => &PLATEAU,
            RadialShape::Bump2 => &BUMP2,
            RadialShape::CosBump => &PLATEAU,
            _ => &[],
        }
    }

    fn lipschitz(self) -> f64 {
        match self {
            RadialShape::Linear => 1.0,
            RadialShape::Quadratic => 2.0,
            RadialShape::Cosine => core::f64::consts::FRAC_PI_2,
            RadialShape::Plateau => 2.0,
            RadialShape::Power => 3.0,
            RadialShape::Bump2 => 4.0 / 3.0 * libm::sqrt(4.0 / 3.0),
            RadialShape::CosBump => core::f64::consts::FRAC_PI_2,
        }
    }

    fn has_second(self) -> bool {
        matches!(self, RadialShape::Bump2 | RadialShape::CosBump)
    }
}

impl CapShape {
    pub fn name(self) -> &'static str {
        match self {
            CapShape::Linear => "linear",
            CapShape::Height => "height",
            CapShape::CosHalf => "coshalf",
            CapShape::Plateau => "plateau",
            CapShape::Quadratic => "quadratic",
        }
    }

    fn g(self, theta: f64) -> f64 {
        let pi = core::f64::consts::PI;
        match self {
            CapShape::Linear => 1.0 - theta / pi,
            CapShape::Height => 0.5 * (1.0 + libm::cos(theta)),
            CapShape::CosHalf => libm::cos(0.5 * theta),
            CapShape::Plateau => (2.0 * (1.0 - theta / pi)).min(1.0),
            CapShape::Quadratic => 1.0 - (theta / pi) * (theta / pi),
        }
    }

    /// Geodesic gradient modulus `|g′(θ)|`.
    fn grad(self, theta: f64) -> f64 {
        let pi = core::f64::consts::PI;
        match self {
            CapShape::Linear => 1.0 / pi,
            CapShape::Height => 0.5 * libm::sin(theta),
            CapShape::CosHalf => 0.5 * libm::sin(0.5 * theta),
            CapShape::Plateau => {
                if theta < 0.5 * pi {
                    0.0
                } else {
                    2.0 / pi
                }
            }
            CapShape::Quadratic => 2.0 * theta / (pi * pi),
        }
    }

    fn breakpoints(self) -> &'static [f64] {
        const HALF_PI: [f64; 1] = [core::f64::consts::FRAC_PI_2];
        match self {
            CapShape::Height | CapShape::Plateau => &HALF_PI,
            _ => &[],
        }
    }

    fn lipschitz(self) -> f64 {
        let pi = core::f64::consts::PI;
        match self {
            CapShape::Linear => 1.0 / pi,
            CapShape::Height => 0.5,
            CapShape::CosHalf => 0.5,
            CapShape::Plateau => 2.0 / pi,
            CapShape::Quadratic => 2.0 / pi,
        }
    }
}

impl CubeShape {
    pub fn name(self) -> &'static str {
        match self {
            CubeShape::Coord => "coord",
            CubeShape::Max2 => "max2",
        }
    }
}

/// A realized family: envelopes of the exact rearrangements plus the
/// analytic constants verification needs.
pub struct FamilyInstance {
    pub name: String,
    pub geometry: Geometry,
    pub n: u32,
    /// Upper and lower staircase envelopes of `f*`.
    pub fstar_upper: StepProfile,
    pub fstar_lower: StepProfile,
    /// Upper and lower envelopes of `|∇f|*`.
    pub grad_upper: StepProfile,
    pub grad_lower: StepProfile,
    /// Envelopes of `|∇|∇f||*` for families that define it.
    pub second_upper: Option<StepProfile>,
    pub second_lower: Option<StepProfile>,
    /// Exact median of `f` (any median works; this is `f*(1/2)`).
    pub median: f64,
    pub lipschitz: f64,
    /// Dvoretzky–Kiefer–Wolfowitz half-width for Monte Carlo families,
    /// zero for analytic ones.
    pub dkw_eps: f64,
    /// Largest gap between the `f*` envelopes (diagnostic).
    pub envelope_gap: f64,
}

/// Measure-space grid: geometric cells near zero so logarithmic weights
/// stay resolved, uniform cells on the bulk.
fn measure_grid() -> Vec<f64> {
    let geo = RADIAL_CELLS * 3 / 8;
    let uni = RADIAL_CELLS - geo;
    let mut grid = Vec::with_capacity(RADIAL_CELLS + 2);
    grid.push(0.0);
    let (lo, hi) = (1e-16f64, 1e-2f64);
    let ratio = libm::log(hi / lo) / geo as f64;
    for i in 0..=geo {
        grid.push(lo * libm::exp(ratio * i as f64));
    }
    for i in 1..=uni {
        grid.push(hi + (1.0 - hi) * i as f64 / uni as f64);
    }
    if let Some(last) = grid.last_mut() {
        *last = 1.0;
    }
    grid
}

/// Staircase with values `f(left endpoint)` (upper) and `f(right endpoint)`
/// (lower) of a non-increasing function sampled on a measure grid.
fn envelopes_of_decreasing(
    grid: &[f64],
    f: impl Fn(f64) -> f64,
) -> Result<(StepProfile, StepProfile), ProfileError> {
    let mut bps = Vec::with_capacity(grid.len() - 1);
    let mut upper = Vec::with_capacity(grid.len() - 1);
    let mut lower = Vec::with_capacity(grid.len() - 1);
    for w in grid.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        bps.push(w[1]);
        let (a, b) = (f(w[0]), f(w[1]));
        upper.push(a.max(b));
        lower.push(a.min(b));
    }
    // Guard against float dust breaking monotonicity.
    for i in 1..upper.len() {
        if upper[i] > upper[i - 1] {
            upper[i] = upper[i - 1];
        }
        if lower[i] > lower[i - 1] {
            lower[i] = lower[i - 1];
        }
    }
    Ok((
        StepProfile::new(bps.clone(), upper)?,
        StepProfile::new(bps, lower)?,
    ))
}

/// Rearrangement envelopes of a piecewise-monotone `h` against the measure
/// whose cumulative along the parameter is `cum`. Cell extrema sit at cell
/// endpoints, so the two staircases bracket the exact `h*`.
fn pushforward_envelopes(
    param_grid: &[f64],
    cum: &[f64],
    h: impl Fn(f64) -> f64,
) -> Result<(StepProfile, StepProfile), HarnessError> {
    let mut upper_vals = Vec::with_capacity(param_grid.len());
    let mut lower_vals = Vec::with_capacity(param_grid.len());
    let mut weights = Vec::with_capacity(param_grid.len());
    for i in 0..param_grid.len() - 1 {
        let w = cum[i + 1] - cum[i];
        if w <= 0.0 {
            continue;
        }
        let (a, b) = (h(param_grid[i]), h(param_grid[i + 1]));
        upper_vals.push(a.max(b));
        lower_vals.push(a.min(b));
        weights.push(w);
    }
    let upper = WeightedSample::new(upper_vals, weights.clone())?.decreasing_rearrangement();
    let lower = WeightedSample::new(lower_vals, weights)?.decreasing_rearrangement();
    Ok((upper, lower))
}

/// Parameter grid on `[0, hi]`: uniform cells with the shape breakpoints
/// spliced in so every cell is monotone for `g`, `|g′|`, and the second
/// derivative modulus.
fn param_grid(hi: f64, cells: usize, breakpoints: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=cells).map(|i| hi * i as f64 / cells as f64).collect();
    grid.extend(breakpoints.iter().copied().filter(|b| *b > 0.0 && *b < hi));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Cumulative normalized cap measure `μ(θ_i)` on a uniform polar grid,
/// computed by per-cell Gauss–Kronrod quadrature of `sin^{n−1}`.
struct CapTable {
    theta: Vec<f64>,
    cum: Vec<f64>,
    /// Unnormalized total `∫₀^π sin^{n−1}`, kept for per-query refinement.
    total: f64,
    n: u32,
}

impl CapTable {
    fn build(n: u32, extra: &[f64]) -> Self {
        let theta = param_grid(core::f64::consts::PI, CAP_CELLS, extra);
        let density = |t: f64| libm::pow(libm::sin(t), f64::from(n) - 1.0);
        let mut cum = Vec::with_capacity(theta.len());
        cum.push(0.0);
        let mut acc = 0.0;
        for w in theta.windows(2) {
            acc += quad::gk15(&density, w[0], w[1]).0;
            cum.push(acc);
        }
        let total = *cum.last().expect("non-empty cap table");
        for c in &mut cum {
            *c /= total;
        }
        if let Some(last) = cum.last_mut() {
            *last = 1.0;
        }
        CapTable { theta, cum, total, n }
    }

    /// Inverse `θ(s)` with per-query quadrature refinement inside the
    /// bracketing cell; accurate to ~1e-12 in measure.
    fn inverse(&self, s: f64) -> f64 {
        let i = match self.cum.partition_point(|c| *c < s) {
            0 => 0,
            k => k - 1,
        };
        let i = i.min(self.theta.len() - 2);
        let density = |t: f64| libm::pow(libm::sin(t), f64::from(self.n) - 1.0);
        let (mut lo, mut hi) = (self.theta[i], self.theta[i + 1]);
        let base = self.cum[i];
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let m = base + quad::gk15(&density, self.theta[i], mid).0 / self.total;
            if m < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Realizes a family on a geometry in dimension `n`.
///
/// `samples` and `seed` drive the Monte Carlo path and are ignored for
/// analytic families.
pub fn realize(
    spec: &FamilySpec,
    geometry: Geometry,
    n: u32,
    samples: u64,
    seed: u64,
    stream: u64,
) -> Result<FamilyInstance, HarnessError> {
    if n == 0 {
        return Err(HarnessError::Config("dimension must be at least 1".into()));
    }
    match (spec, geometry) {
        (FamilySpec::Radial(shape), Geometry::Rn | Geometry::Ball) => {
            realize_radial(*shape, geometry, n)
        }
        (FamilySpec::Cap(shape), Geometry::Sphere) => realize_cap(*shape, n),
        (FamilySpec::Tensor(shape), Geometry::Cube) => {
            realize_tensor(*shape, n, samples, seed, stream)
        }
        (spec, geometry) => Err(HarnessError::Config(format!(
            "family {} is not defined on geometry {}",
            spec.name(),
            geometry.as_str()
        ))),
    }
}

fn realize_radial(
    shape: RadialShape,
    geometry: Geometry,
    n: u32,
) -> Result<FamilyInstance, HarnessError> {
    let inv_n = 1.0 / f64::from(n);
    // On the volume-normalized ball the radial variable of measure s is
    // r = s^{1/n}; on unit-volume Euclidean support the same map holds with
    // the gradient picking up the radius factor γ_n^{1/n}.
    let grad_scale = match geometry {
        Geometry::Rn => ball_measure_root(n),
        _ => 1.0,
    };
    let sgrid = measure_grid();
    let fstar = |s: f64| shape.g(libm::pow(s, inv_n));
    let (fstar_upper, fstar_lower) = envelopes_of_decreasing(&sgrid, fstar)?;

    let rgrid = param_grid(1.0, RADIAL_CELLS, shape.breakpoints());
    let cum: Vec<f64> = rgrid.iter().map(|r| libm::pow(*r, f64::from(n))).collect();
    let (grad_upper, grad_lower) =
        pushforward_envelopes(&rgrid, &cum, |r| grad_scale * shape.grad(r))?;

    let (second_upper, second_lower) = if shape.has_second() {
        let scale2 = grad_scale * grad_scale;
        let (u, l) = pushforward_envelopes(&rgrid, &cum, |r| {
            scale2 * shape.second(r).expect("shape defines a second derivative")
        })?;
        (Some(u), Some(l))
    } else {
        (None, None)
    };

    let median = shape.g(libm::pow(0.5, inv_n));
    let envelope_gap = max_gap(&fstar_upper, &fstar_lower);
    Ok(FamilyInstance {
        name: format!("radial:{}", shape.name()),
        geometry,
        n,
        fstar_upper,
        fstar_lower,
        grad_upper,
        grad_lower,
        second_upper,
        second_lower,
        median,
        lipschitz: shape.lipschitz() * grad_scale,
        dkw_eps: 0.0,
        envelope_gap,
    })
}

fn realize_cap(shape: CapShape, n: u32) -> Result<FamilyInstance, HarnessError> {
    let table = CapTable::build(n, shape.breakpoints());
    // f*(s) = g(θ(s)): staircase directly on the measure nodes of the table.
    let mut bps = Vec::with_capacity(table.theta.len());
    let mut upper = Vec::with_capacity(table.theta.len());
    let mut lower = Vec::with_capacity(table.theta.len());
    for i in 0..table.theta.len() - 1 {
        if table.cum[i + 1] <= table.cum[i] {
            continue;
        }
        bps.push(table.cum[i + 1]);
        upper.push(shape.g(table.theta[i]));
        lower.push(shape.g(table.theta[i + 1]));
    }
    for i in 1..upper.len() {
        if upper[i] > upper[i - 1] {
            upper[i] = upper[i - 1];
        }
        if lower[i] > lower[i - 1] {
            lower[i] = lower[i - 1];
        }
    }
    let fstar_upper = StepProfile::new(bps.clone(), upper)?;
    let fstar_lower = StepProfile::new(bps, lower)?;

    let (grad_upper, grad_lower) =
        pushforward_envelopes(&table.theta, &table.cum, |t| shape.grad(t))?;

    let median = shape.g(table.inverse(0.5));
    let envelope_gap = max_gap(&fstar_upper, &fstar_lower);
    Ok(FamilyInstance {
        name: format!("cap:{}", shape.name()),
        geometry: Geometry::Sphere,
        n,
        fstar_upper,
        fstar_lower,
        grad_upper,
        grad_lower,
        second_upper: None,
        second_lower: None,
        median,
        lipschitz: shape.lipschitz(),
        dkw_eps: 0.0,
        envelope_gap,
    })
}

fn realize_tensor(
    shape: CubeShape,
    n: u32,
    samples: u64,
    seed: u64,
    stream: u64,
) -> Result<FamilyInstance, HarnessError> {
    if matches!(shape, CubeShape::Max2) && n != 2 {
        return Err(HarnessError::Config(format!(
            "family tensor:max2 requires n = 2, got n = {n}"
        )));
    }
    let (empirical, dkw_eps) = mc::mc_rearrangement(shape, samples, seed, stream)?;
    let median = match shape {
        CubeShape::Coord => 0.5,
        CubeShape::Max2 => libm::sqrt(0.5),
    };
    Ok(FamilyInstance {
        name: format!("tensor:{}", shape.name()),
        geometry: Geometry::Cube,
        n,
        fstar_upper: empirical.clone(),
        fstar_lower: empirical.clone(),
        grad_upper: StepProfile::constant(1.0),
        grad_lower: StepProfile::constant(1.0),
        second_upper: None,
        second_lower: None,
        median,
        lipschitz: 1.0,
        dkw_eps,
        envelope_gap: 2.0 * dkw_eps,
    })
}

fn max_gap(upper: &StepProfile, lower: &StepProfile) -> f64 {
    let mut gap: f64 = 0.0;
    let mut probe = |t: f64| {
        if t < 1.0 {
            gap = gap.max(upper.eval(t) - lower.eval(t));
        }
    };
    for &b in upper.breakpoints() {
        probe(b * 0.999_999);
    }
    for &b in lower.breakpoints() {
        probe(b * 0.999_999);
    }
    gap
}

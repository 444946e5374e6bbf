//! Adaptive Gauss-Kronrod quadrature.
//!
//! The 15-point Kronrod rule (7-point Gauss core) is applied on a
//! worst-error-first panel heap. All nodes are interior, so integrable
//! endpoint singularities are admissible; callers remove known algebraic
//! singularities with the substitutions provided at the bottom of the
//! module before handing the integrand over.

use alloc::collections::BinaryHeap;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_err: f64,
    pub panels: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadError {
    /// The integrand returned NaN or +-inf at an interior node.
    NonFinite { at: f64 },
    /// The panel budget was exhausted before the tolerance was met.
    /// The partial value and its error estimate are reported.
    NoConvergence { value: f64, abs_err: f64 },
}

impl core::fmt::Display for QuadError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuadError::NonFinite { at } => write!(f, "integrand not finite at {at}"),
            QuadError::NoConvergence { value, abs_err } => {
                write!(f, "no convergence (value {value}, err {abs_err})")
            }
        }
    }
}

/// Abscissae of the 15-point Kronrod rule on [-1, 1], positive half.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matched to `XGK`.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Weights of the embedded 7-point Gauss rule (odd Kronrod nodes).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// QUADPACK-style conservative error rescale.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let err = err.abs();
    let mut out = err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = libm::pow(200.0 * err / res_asc, 1.5);
        out = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && floor > out {
        out = floor;
    }
    out
}

/// One 15-point Kronrod panel. Returns (value, error, all_finite).
/// All nodes are interior, so `f` is never evaluated at `a` or `b`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, bool) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut finite = fc.is_finite();
    let mut fv1 = [0.0_f64; 8];
    let mut fv2 = [0.0_f64; 8];
    fv1[7] = fc;
    fv2[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        finite &= lo.is_finite() && hi.is_finite();
        fv1[j] = lo;
        fv2[j] = hi;
    }

    let mut res_kronrod = WGK[7] * fc;
    let mut res_gauss = 0.0;
    let mut res_abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let sum = fv1[j] + fv2[j];
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (fv1[j].abs() + fv2[j].abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * sum;
        }
    }
    res_gauss += WG[3] * fc;

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half, res_asc * half);
    (res_kronrod * half, err, finite)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

pub const DEFAULT_MAX_PANELS: u32 = 4096;

/// Adaptively integrate `f` over the finite interval `[a, b]`.
///
/// Stops once the summed error estimate drops below
/// `max(abs_tol, rel_tol * |value|)`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: u32,
) -> Result<Quadrature, QuadError> {
    if a == b {
        return Ok(Quadrature { value: 0.0, abs_err: 0.0, panels: 0 });
    }
    let (v0, e0, finite) = gk15(f, a, b);
    if !finite {
        return Err(QuadError::NonFinite { at: 0.5 * (a + b) });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v0, err: e0 });
    let mut total_value = v0;
    let mut total_err = e0;
    let mut panels = 1;

    while total_err > abs_tol.max(rel_tol * total_value.abs()) {
        if panels >= max_panels {
            return Err(QuadError::NoConvergence { value: total_value, abs_err: total_err });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        // Interval too narrow to split in f64: accept its estimate as-is.
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            if heap.is_empty() {
                break;
            }
            total_err -= worst.err;
            continue;
        }
        let (lv, le, lf) = gk15(f, worst.a, mid);
        let (rv, re, rf) = gk15(f, mid, worst.b);
        if !lf || !rf {
            return Err(QuadError::NonFinite { at: mid });
        }
        total_value += lv + rv - worst.value;
        total_err += le + re - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: lv, err: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, err: re });
        panels += 1;
    }

    Ok(Quadrature { value: total_value, abs_err: total_err, panels })
}

/// Integral over `[z0, inf)` of a decaying integrand, via `z = z0 + (1-u)/u`.
///
/// The map sends `u in (0, 1]` onto the tail; `g` must tend to zero fast
/// enough for the original integral to converge (`g = O(z^{-beta})`,
/// `beta > 1`, or faster).
pub fn tail<F: Fn(f64) -> f64>(
    g: &F,
    z0: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: u32,
) -> Result<Quadrature, QuadError> {
    let mapped = |u: f64| {
        let z = z0 + (1.0 - u) / u;
        let gu = g(z);
        if gu == 0.0 {
            // Avoid 0 * inf once the integrand has fully decayed.
            0.0
        } else {
            gu / (u * u)
        }
    };
    adaptive(&mapped, 0.0, 1.0, rel_tol, abs_tol, max_panels)
}

/// `int_0^inf g(z) z^{power} dz` for `power > -1`, `g` bounded near zero
/// and decaying at infinity.
///
/// The algebraic factor on `(0, 1]` is removed exactly with `z = w^m`,
/// `m = 1/(1 + power)`, which turns `z^{power} dz` into `m dw`; the tail
/// uses [`tail`].
pub fn log_axis_integral<F: Fn(f64) -> f64>(
    g: &F,
    power: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: u32,
) -> Result<Quadrature, QuadError> {
    debug_assert!(power > -1.0, "endpoint power must be integrable");
    let m = 1.0 / (1.0 + power);
    // A non-converged component still carries its best estimate; both
    // components always contribute, and the verdict is downgraded at the
    // end, so a kinky head never silently drops the tail mass.
    let soften = |r: Result<Quadrature, QuadError>| -> Result<(Quadrature, bool), QuadError> {
        match r {
            Ok(q) => Ok((q, true)),
            Err(QuadError::NoConvergence { value, abs_err }) => Ok((
                Quadrature {
                    value,
                    abs_err,
                    panels: max_panels,
                },
                false,
            )),
            Err(e) => Err(e),
        }
    };
    let head_fn = |w: f64| m * g(libm::pow(w, m));
    let (head, head_ok) = soften(adaptive(&head_fn, 0.0, 1.0, rel_tol, 0.5 * abs_tol, max_panels))?;
    let tail_fn = |z: f64| g(z) * libm::pow(z, power);
    let (tail, tail_ok) = soften(tail(&tail_fn, 1.0, rel_tol, 0.5 * abs_tol, max_panels))?;
    if !(head_ok && tail_ok) {
        return Err(QuadError::NoConvergence {
            value: head.value + tail.value,
            abs_err: head.abs_err + tail.abs_err,
        });
    }
    Ok(Quadrature {
        value: head.value + tail.value,
        abs_err: head.abs_err + tail.abs_err,
        panels: head.panels + tail.panels,
    })
}

/// Dyadic-shell divergence probe for `int_{z0}^inf g(z) dz`, `g >= 0`.
///
/// Shell sums `s_m` over `[m ln 2, (m+1) ln 2)` are compared against the
/// slowest divergent envelope `s_m ~ c/m`: when `s_{m+1} >= s_m * m/(m+1)`
/// holds through the final `streak` shells of a deep probe, the tail
/// dominates a divergent series. Convergent integrands with slow onset
/// (e.g. `exp(-z/n)` for large `n`) break the streak once their decay
/// kicks in, which is why the probe runs deep rather than stopping at the
/// first streak.
pub fn tail_diverges<F: Fn(f64) -> f64>(g: &F, z0: f64, scale: f64) -> bool {
    const LN2: f64 = core::f64::consts::LN_2;
    const STREAK: u32 = 10;
    const MAX_SHELL: u32 = 900;

    let m0 = (z0 / LN2).max(0.0) as u32 + 1;
    let mut prev: Option<f64> = None;
    let mut streak = 0u32;
    let floor = scale.abs().max(f64::MIN_POSITIVE) * 1e-14;

    for m in m0..MAX_SHELL {
        let (s, _, finite) = gk15(g, m as f64 * LN2, (m + 1) as f64 * LN2);
        if !finite {
            return false;
        }
        if s <= floor {
            // Tail already negligible: convergent.
            return false;
        }
        if let Some(p) = prev {
            let threshold = p * (m as f64 - 1.0) / m as f64;
            if s >= threshold {
                streak += 1;
            } else {
                streak = 0;
            }
        }
        prev = Some(s);
    }
    streak >= STREAK
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::{close, exp, ln, sqrt};

    const SQRT_PI: f64 = 1.772453850905516;

    #[test]
    fn polynomial_is_exact() {
        let q = adaptive(&|x: f64| 3.0 * x * x, 0.0, 2.0, 1e-12, 0.0, 64).unwrap();
        assert!(close(q.value, 8.0, 1e-14, 0.0));
    }

    #[test]
    fn integrable_log_singularity() {
        // int_0^1 ln(1/x) dx = 1.
        let q = adaptive(&|x: f64| ln(1.0 / x), 0.0, 1.0, 1e-10, 0.0, 2048).unwrap();
        assert!(close(q.value, 1.0, 1e-9, 0.0));
    }

    #[test]
    fn tail_of_gaussian() {
        // int_0^inf e^{-z} dz = 1.
        let q = tail(&|z: f64| exp(-z), 0.0, 1e-10, 0.0, 2048).unwrap();
        assert!(close(q.value, 1.0, 1e-9, 0.0));
    }

    #[test]
    fn gamma_half_values() {
        // int_0^inf z^{-1/2} e^{-z} dz = Gamma(1/2) = sqrt(pi).
        let q = log_axis_integral(&|z: f64| exp(-z), -0.5, 1e-10, 0.0, 4096).unwrap();
        assert!(close(q.value, SQRT_PI, 1e-9, 0.0), "got {}", q.value);
        // int_0^inf z^{1/2} e^{-z} dz = sqrt(pi)/2.
        let q = log_axis_integral(&|z: f64| exp(-z), 0.5, 1e-10, 0.0, 4096).unwrap();
        assert!(close(q.value, 0.5 * SQRT_PI, 1e-9, 0.0));
        // int_0^inf z^{-1/2} e^{-z/2} dz = sqrt(2 pi).
        let q = log_axis_integral(&|z: f64| exp(-0.5 * z), -0.5, 1e-10, 0.0, 4096).unwrap();
        assert!(close(q.value, sqrt(2.0 * core::f64::consts::PI), 1e-9, 0.0));
    }

    #[test]
    fn slow_exponential_tail() {
        // int_0^inf z^{-1/2} e^{-z/n} dz = sqrt(pi n): slow decay exercises
        // the tail map.
        for n in [10.0, 50.0, 200.0] {
            let q = log_axis_integral(&|z: f64| exp(-z / n), -0.5, 1e-10, 0.0, 4096).unwrap();
            assert!(close(q.value, sqrt(core::f64::consts::PI * n), 1e-8, 0.0), "n = {n}");
        }
    }

    #[test]
    fn divergence_probe_flags_harmonic_tail() {
        // 1/(t ln 1/t) on (0, 1/2) becomes 1/z past ln 2: divergent.
        assert!(tail_diverges(&|z: f64| 1.0 / z, ln(2.0), 1.0));
    }

    #[test]
    fn divergence_probe_accepts_slow_exponentials() {
        for n in [1.0, 10.0, 100.0, 800.0] {
            let g = move |z: f64| exp(-z / n) / sqrt(z);
            assert!(!tail_diverges(&g, 0.0, 1.0), "false divergence at n = {n}");
        }
    }

    #[test]
    fn divergence_probe_accepts_algebraic_decay() {
        // z^{-3/2} converges; z^{-1} does not; z^{-0.9} diverges faster.
        assert!(!tail_diverges(&|z: f64| libm::pow(z, -1.5), 1.0, 1.0));
        assert!(tail_diverges(&|z: f64| libm::pow(z, -0.9), 1.0, 1.0));
    }

    #[test]
    fn non_convergence_reports_partial_value() {
        // A panel budget of 1 cannot resolve the log singularity.
        let err = adaptive(&|x: f64| ln(1.0 / x), 0.0, 1.0, 1e-14, 0.0, 1);
        assert!(matches!(err, Err(QuadError::NoConvergence { .. })));
    }
}

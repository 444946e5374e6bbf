//! Property tests for isoperimetric profile estimators: the transference
//! integral against closed geometric constants across dimensions, tabulated
//! kernels against their analytic source, Gaussian-type suprema, and the
//! profile-weighted Hardy operator against the plain truncated average.

use dimsob_core::iso::{
    gaussian_type_check, geometry_constant, geometry_limit, iso_hardy_qj, profile_eval,
    transference_integral, GeometryKind, ProfileSpec, WeightFunction,
};
use dimsob_core::profile::StepProfile;
use proptest::prelude::*;

/// The transference integral of the Euclidean power estimator over the
/// full interval reproduces the closed dimensional constant in every
/// dimension up to 50.
#[test]
fn transference_matches_closed_constant_across_dimensions() {
    for n in 1..=50u32 {
        let t = transference_integral(&ProfileSpec::PowerRn { n }, &WeightFunction::LogHalf, 1.0)
            .unwrap();
        let c = geometry_constant(&GeometryKind::Rn, n).unwrap();
        assert!(
            (t - c).abs() <= 1e-7 * c,
            "transference drifted from constant at n = {n}: {t} vs {c}"
        );
    }
}

/// Transference over a subinterval is monotone in the right endpoint and
/// stays below the full-axis constant for the bounded geometries.
#[test]
fn transference_monotone_and_dominated() {
    for n in [2u32, 3, 8, 25] {
        for (spec, kind) in [
            (ProfileSpec::BallEstimator { n }, GeometryKind::Ball),
            (ProfileSpec::SphereEstimator { n }, GeometryKind::Sphere),
            (
                ProfileSpec::ManifoldEstimator { n, curvature: 1.0 },
                GeometryKind::Manifold { curvature: 1.0 },
            ),
        ] {
            let c = geometry_constant(&kind, n).unwrap();
            let mut prev = 0.0;
            for r in [0.1, 0.3, 0.5] {
                let t = transference_integral(&spec, &WeightFunction::LogHalf, r).unwrap();
                assert!(t.is_finite() && t > prev, "not increasing at n = {n}, r = {r}");
                assert!(t <= c * (1.0 + 1e-9), "integral above constant at n = {n}, r = {r}");
                prev = t;
            }
        }
    }
}

/// A tabulated estimator sampled from the closed power kernel reproduces
/// its transference integral: log-linear interpolation is exact on power
/// laws, so only quadrature error remains.
#[test]
fn tabulated_kernel_tracks_closed_form() {
    let n = 3u32;
    let source = ProfileSpec::PowerRn { n };
    let points: Vec<(f64, f64)> = (0..60)
        .map(|i| {
            let t = 10f64.powf(-7.0 + 6.9 * f64::from(i) / 59.0);
            (t, profile_eval(&source, t).unwrap())
        })
        .collect();
    let tab = ProfileSpec::Tabulated { points };
    for r in [0.2, 1.0] {
        let got = transference_integral(&tab, &WeightFunction::LogHalf, r).unwrap();
        let want = transference_integral(&source, &WeightFunction::LogHalf, r).unwrap();
        assert!(
            (got - want).abs() <= 1e-7 * want,
            "tabulated transference off at r = {r}: {got} vs {want}"
        );
    }
}

/// The Gaussian-type supremum of the Euclidean estimators stays uniformly
/// below 0.45 across dimensions 1..=100.
#[test]
fn gaussian_type_supremum_uniformly_bounded() {
    for n in 1..=100u32 {
        let (sup, arg) = gaussian_type_check(
            &ProfileSpec::PowerRn { n },
            &WeightFunction::LogHalf,
            1.0,
        )
        .unwrap();
        assert!(sup > 0.0 && sup <= 0.45, "supremum out of band at n = {n}: {sup}");
        assert!(arg > 0.0 && arg <= 1.0);
    }
}

/// Curvature scaling of the positively curved model: the large-n constant
/// approaches pi/sqrt(curvature).
#[test]
fn manifold_limit_scales_with_curvature() {
    for curvature in [0.25f64, 1.0, 4.0] {
        let kind = GeometryKind::Manifold { curvature };
        let limit = geometry_limit(&kind).unwrap();
        assert!(
            (limit - core::f64::consts::PI / curvature.sqrt()).abs() <= 1e-12 * limit
        );
        let c = geometry_constant(&kind, 10_000).unwrap();
        assert!((c - limit).abs() <= 0.01 * limit, "constant far from limit at k = {curvature}");
    }
}

/// Exact integral of f/s over (t, 1/2) for a step profile.
fn truncated_log_average(f: &StepProfile, t: f64) -> f64 {
    let mut sum = 0.0;
    for (i, &b) in f.breakpoints().iter().enumerate() {
        let left = if i == 0 { 0.0 } else { f.breakpoints()[i - 1] };
        let lo = left.max(t);
        let hi = b.min(0.5);
        if hi > lo {
            sum += f.values()[i] * (hi / lo).ln();
        }
    }
    sum
}

/// Decreasing positive step profile from proptest-chosen gaps and decays.
fn positive_profile() -> impl Strategy<Value = StepProfile> {
    (
        proptest::collection::vec(0.05f64..1.0, 2..8),
        proptest::collection::vec(0.2f64..0.95, 8),
        0.5f64..6.0,
    )
        .prop_map(|(gaps, decays, top)| {
            let total: f64 = gaps.iter().sum();
            let n = gaps.len();
            let mut bps = Vec::with_capacity(n);
            let mut acc = 0.0;
            for (i, g) in gaps.iter().enumerate() {
                acc += g;
                bps.push(if i + 1 == n { 1.0 } else { acc / total });
            }
            let mut vals = Vec::with_capacity(n);
            let mut v = top;
            for &d in decays.iter().take(n) {
                vals.push(v);
                v *= d;
            }
            StepProfile::new(bps, vals).expect("generated profile is canonical")
        })
}

proptest! {
    /// The profile-weighted Hardy operator dominates the plain truncated
    /// average: with s/J(s) increasing, J(t)/(t·J(s)) >= 1/s on s > t.
    #[test]
    fn weighted_hardy_dominates_truncated_average(
        f in positive_profile(),
        t_frac in 0.02f64..0.96,
        which in 0usize..3,
    ) {
        let spec = match which {
            0 => ProfileSpec::PowerRn { n: 2 },
            1 => ProfileSpec::BallEstimator { n: 3 },
            _ => ProfileSpec::GaussianEstimator { c: 1.0 },
        };
        let t = 0.5 * t_frac;
        let hardy = iso_hardy_qj(&spec, &f).unwrap();
        let lhs = hardy.eval(t).unwrap();
        let rhs = truncated_log_average(&f, t);
        prop_assert!(
            lhs >= rhs * (1.0 - 1e-9) - 1e-12,
            "weighted Hardy fell below the plain average at t = {}: {} < {}", t, lhs, rhs
        );
    }
}

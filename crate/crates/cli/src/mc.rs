//! Monte Carlo rearrangement for functions on the unit cube.
//!
//! The empirical rearrangement of `N` i.i.d. samples is a staircase whose
//! uniform-norm distance to the true `f*` is controlled by the
//! Dvoretzky–Kiefer–Wolfowitz bound: with probability `1 − δ`,
//! `|f̂* − f*| ≤ ε` wherever `f*` is continuous, with
//! `ε = √(ln(2/δ)/(2N))`. Callers propagate `ε` through their norms rather
//! than widening the staircase itself.

use dimsob_core::profile::StepProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::CubeShape;
use crate::verify::HarnessError;

/// Confidence parameter for the DKW band.
const DKW_DELTA: f64 = 1e-3;

/// Empirical decreasing rearrangement of a cube family from `samples`
/// draws, plus the DKW half-width at confidence `1 − 1e-3`.
///
/// The stream (`seed`, `stream`) pins the ChaCha substream, so results are
/// reproducible regardless of scheduling; sweeps give each dimension its
/// own stream. Only the coordinates the function depends on are drawn.
pub fn mc_rearrangement(
    shape: CubeShape,
    samples: u64,
    seed: u64,
    stream: u64,
) -> Result<(StepProfile, f64), HarnessError> {
    if samples < 10_000 {
        return Err(HarnessError::Config(format!(
            "Monte Carlo needs at least 10000 samples, got {samples}"
        )));
    }
    let n_usize = usize::try_from(samples)
        .map_err(|_| HarnessError::Config("sample count exceeds address space".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut values = Vec::with_capacity(n_usize);
    match shape {
        CubeShape::Coord => {
            for _ in 0..samples {
                values.push(rng.random::<f64>());
            }
        }
        CubeShape::Max2 => {
            for _ in 0..samples {
                let a = rng.random::<f64>();
                let b = rng.random::<f64>();
                values.push(a.max(b));
            }
        }
    }
    values.sort_by(|a, b| b.total_cmp(a));
    let inv = 1.0 / samples as f64;
    let breakpoints: Vec<f64> = (1..=n_usize).map(|i| i as f64 * inv).collect();
    let profile = StepProfile::new(breakpoints, values)?;
    let eps = libm::sqrt(libm::log(2.0 / DKW_DELTA) / (2.0 * samples as f64));
    Ok((profile, eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_profile_tracks_uniform_law() {
        let (profile, eps) = mc_rearrangement(CubeShape::Coord, 100_000, 7, 0).unwrap();
        // f = x₁ on the cube has f*(s) = 1 − s.
        for &s in &[0.05, 0.3, 0.5, 0.8, 0.95] {
            assert!(
                (profile.eval(s) - (1.0 - s)).abs() <= eps,
                "s = {s}: {} vs {}",
                profile.eval(s),
                1.0 - s
            );
        }
        assert!(eps < 7e-3);
    }

    #[test]
    fn max_of_two_tracks_square_root_law() {
        let (profile, eps) = mc_rearrangement(CubeShape::Max2, 200_000, 11, 3).unwrap();
        // P(max(x₁,x₂) ≤ u) = u², so f*(s) = √(1 − s).
        for &s in &[0.1, 0.4, 0.7, 0.9] {
            let exact = libm::sqrt(1.0 - s);
            assert!(
                (profile.eval(s) - exact).abs() <= eps,
                "s = {s}: {} vs {exact}",
                profile.eval(s)
            );
        }
    }

    #[test]
    fn identical_streams_are_bitwise_reproducible() {
        let (a, _) = mc_rearrangement(CubeShape::Coord, 50_000, 42, 5).unwrap();
        let (b, _) = mc_rearrangement(CubeShape::Coord, 50_000, 42, 5).unwrap();
        assert_eq!(a.values(), b.values());
        let (c, _) = mc_rearrangement(CubeShape::Coord, 50_000, 42, 6).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn undersampling_is_rejected() {
        assert!(matches!(
            mc_rearrangement(CubeShape::Coord, 100, 0, 0),
            Err(HarnessError::Config(_))
        ));
    }
}

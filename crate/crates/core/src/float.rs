//! Transcendental helpers routed through `libm`.
//!
//! `f64::ln` and friends are `std`-only and defer to the platform libm,
//! whose last-ulp behaviour varies between hosts. Routing through `libm`
//! keeps the crate `no_std` and makes every computed number reproducible
//! across platforms, which the report tooling relies on.

pub use libm::{exp, expm1, log as ln, log1p as ln_1p, pow as powf, sqrt};

/// `x^n` for small integer exponents without going through `pow`.
#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    let mut acc = 1.0;
    let mut base = if n < 0 { 1.0 / x } else { x };
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

/// Relative closeness test with an absolute floor for values near zero.
#[inline]
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    let diff = (a - b).abs();
    diff <= abs || diff <= rel * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_pow() {
        for &x in &[0.3, 1.7, 9.2] {
            for n in -6..7 {
                assert!(close(powi(x, n), powf(x, n as f64), 1e-14, 0.0));
            }
        }
    }

    #[test]
    fn ln_exp_roundtrip() {
        for &x in &[1e-12, 0.5, 1.0, 3.5, 1e8] {
            assert!(close(exp(ln(x)), x, 1e-14, 0.0));
        }
    }
}

//! Gamma-function helpers.

use std::f64::consts::PI;

pub use statrs::function::gamma::{gamma, ln_gamma};

/// Γ(x+a)/Γ(x) through log-Gamma; x > 0, x + a > 0.
pub fn gamma_ratio(x: f64, a: f64) -> f64 {
    (ln_gamma(x + a) - ln_gamma(x)).exp()
}

/// E|ξ_i|^p for ξ uniform on the unit sphere of ℝ^n.
pub fn sphere_coordinate_moment(n: usize, p: f64) -> f64 {
    let n = n as f64;
    (ln_gamma(n / 2.0) + ln_gamma((1.0 + p) / 2.0) - ln_gamma(0.5) - ln_gamma((n + p) / 2.0)).exp()
}

/// E|Z|^q for a standard normal Z.
pub fn normal_abs_moment(q: f64) -> f64 {
    (0.5 * q * std::f64::consts::LN_2 + ln_gamma((q + 1.0) / 2.0)).exp() / PI.sqrt()
}

/// ∫_0^∞ (1 − cos x) x^{−1−q} dx for q ∈ (0, 2).
pub fn one_minus_cos_integral(q: f64) -> f64 {
    if (q - 1.0).abs() <= 1e-6 {
        PI / 2.0
    } else {
        -gamma(-q) * (PI * q / 2.0).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_at_integers() {
        assert!((gamma_ratio(5.0, 1.0) - 5.0).abs() < 1e-12);
        assert!((gamma_ratio(3.0, 2.0) - 12.0).abs() < 1e-11);
    }

    #[test]
    fn sphere_moment_small_cases() {
        assert!((sphere_coordinate_moment(1, 3.7) - 1.0).abs() < 1e-14);
        assert!((sphere_coordinate_moment(2, 2.0) - 0.5).abs() < 1e-14);
        assert!((sphere_coordinate_moment(7, 2.0) - 1.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn normal_moments() {
        assert!((normal_abs_moment(2.0) - 1.0).abs() < 1e-14);
        assert!((normal_abs_moment(1.0) - (2.0 / PI).sqrt()).abs() < 1e-14);
    }
}

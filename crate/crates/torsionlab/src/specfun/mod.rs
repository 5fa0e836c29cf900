//! Gamma and Beta functions, Gegenbauer functions, corner exponents and
//! first Dirichlet eigenpairs of spherical caps.

mod cap;
mod gegenbauer;
pub mod ode;

pub use cap::{
    cap_eigen, cap_neg_power_integral, diangle_eigenfunction, diangle_eigenvalue, sphere_area, CapEigenfunction,
};
pub use gegenbauer::{
    corner_exponent, corner_exponent_numeric, gegenbauer_eval, gegenbauer_eval_with_derivative, CornerExponent,
};

use crate::error::{domain, Result};

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("gamma_fn requires x > 0, got {x}"));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("ln_gamma_fn requires x > 0, got {x}"));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// B(x, y) = Γ(x)Γ(y)/Γ(x+y) for x, y > 0.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
        return domain(format!("beta_fn requires positive arguments, got ({x}, {y})"));
    }
    if x + y < 140.0 {
        let g = statrs::function::gamma::gamma;
        return Ok(g(x) * g(y) / g(x + y));
    }
    Ok(ln_beta_fn(x, y)?.exp())
}

/// ln B(x, y) for x, y > 0.
pub fn ln_beta_fn(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !(y > 0.0) {
        return domain(format!("ln_beta_fn requires positive arguments, got ({x}, {y})"));
    }
    let (small, large) = if x < y { (x, y) } else { (y, x) };
    let lg = statrs::function::gamma::ln_gamma;
    if large > 1e3 * small.max(1.0) {
        // ln Γ(L) − ln Γ(L+s) via the Stirling difference keeps relative accuracy for huge L
        return Ok(lg(small) - small * large.ln() + ln_gamma_ratio_correction(large, small));
    }
    Ok(lg(x) + lg(y) - lg(x + y))
}

/// ln Γ(L) − ln Γ(L+s) + s ln L for L ≫ s, from the Stirling series.
fn ln_gamma_ratio_correction(l: f64, s: f64) -> f64 {
    // ln Γ(z) = (z−½)ln z − z + ½ln 2π + 1/(12z) − 1/(360z³) + …
    let stirling_tail = |z: f64| 1.0 / (12.0 * z) - 1.0 / (360.0 * z.powi(3)) + 1.0 / (1260.0 * z.powi(5));
    let ls = l + s;
    // (L−½)ln L − (L+s−½)ln(L+s) + s + s ln L
    let log_ratio = (s / l).ln_1p();
    let main = -(l + s - 0.5) * log_ratio + s;
    main + stirling_tail(l) - stirling_tail(ls)
}

/// 1/Γ(x) for every real x (zero at the non-positive integers).
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 0.5 {
        // reflection: 1/Γ(x) = Γ(1−x) sin(πx)/π
        let pi = std::f64::consts::PI;
        return statrs::function::gamma::gamma(1.0 - x) * (pi * x).sin() / pi;
    }
    1.0 / statrs::function::gamma::gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_reference_values() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn beta_reference_values() {
        assert!((beta_fn(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((beta_fn(0.5, 0.5).unwrap() - PI).abs() < 1e-14);
        assert!((beta_fn(3.0, 4.0).unwrap() - 1.0 / 60.0).abs() < 1e-16);
        assert!(beta_fn(0.0, 1.0).is_err());
    }

    #[test]
    fn ln_beta_large_argument_matches_direct() {
        for &(x, y) in &[(4000.0, 0.5), (2.5e5, 0.25), (1e3, 0.75)] {
            let direct = statrs::function::gamma::ln_gamma(x) + statrs::function::gamma::ln_gamma(y)
                - statrs::function::gamma::ln_gamma(x + y);
            let v = ln_beta_fn(x, y).unwrap();
            assert!((v - direct).abs() < 1e-9, "{x} {y}: {v} vs {direct}");
        }
    }

    #[test]
    fn reciprocal_gamma_reflection() {
        assert!((recip_gamma(-0.5) - 1.0 / (-2.0 * PI.sqrt())).abs() < 1e-14);
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert!((recip_gamma(4.0) - 1.0 / 6.0).abs() < 1e-15);
    }
}

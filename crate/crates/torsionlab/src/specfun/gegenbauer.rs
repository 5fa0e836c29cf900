//! Gegenbauer functions regular at `z = −1` and corner exponents.
//!
//! `g` solves `(z²−1)g″ + (2ν+1)z g′ − α(α+2ν)g = 0` with `g(−1) = 1` and
//! `g′(−1) = −α(α+2ν)/(2ν+1)`.  The equation is singular at `z = −1`, so the
//! solution is started from its power series a short distance `S0` away and
//! continued with an adaptive Runge–Kutta integrator.

use super::ode::{integrate, OdeOptions};
use crate::error::{domain, Error, Result};
use std::f64::consts::PI;

/// Order of the series expansion about `z = −1`.
const SERIES_ORDER: usize = 8;
/// Distance from `z = −1` at which the series hands over to the integrator.
const S0: f64 = 1e-3;
/// Bracketing step for the first zero in α.
const SCAN_STEP: f64 = 0.25;
const SCAN_START: f64 = 0.01;
const SCAN_LIMIT: f64 = 100.0;
/// Final bracket width of the bisection.
const BISECT_TOL: f64 = 1e-11;

fn series_coefficients(alpha: f64, nu: f64, order: usize) -> Vec<f64> {
    let lambda = alpha * (alpha + 2.0 * nu);
    let mut a = vec![1.0];
    for k in 0..order {
        let kf = k as f64;
        let next = (kf * (kf + 2.0 * nu) - lambda) * a[k] / ((kf + 1.0) * (2.0 * kf + 2.0 * nu + 1.0));
        a.push(next);
    }
    a
}

/// Series value and derivative at `t = z + 1`.
fn series_eval(alpha: f64, nu: f64, t: f64) -> (f64, f64) {
    let a = series_coefficients(alpha, nu, SERIES_ORDER);
    let mut g = 0.0;
    let mut dg = 0.0;
    for k in (0..a.len()).rev() {
        g = g * t + a[k];
        if k > 0 {
            dg = dg * t + k as f64 * a[k];
        }
    }
    (g, dg)
}

fn check_args(alpha: f64, nu: f64, z: f64) -> Result<()> {
    if !(nu >= 0.0) || !alpha.is_finite() {
        return domain(format!("gegenbauer_eval needs nu >= 0 and finite alpha (nu={nu}, alpha={alpha})"));
    }
    if !(z > -1.0 && z <= 1.0) {
        return domain(format!("gegenbauer_eval needs z in (-1, 1], got {z}"));
    }
    Ok(())
}

/// Value of the Gegenbauer function `g` at `z ∈ (−1, 1]`.
pub fn gegenbauer_eval(alpha: f64, nu: f64, z: f64) -> Result<f64> {
    check_args(alpha, nu, z)?;
    if z == 1.0 {
        return value_at_one(alpha, nu);
    }
    Ok(gegenbauer_eval_with_derivative(alpha, nu, z)?.0)
}

/// Value and derivative of `g` at `z ∈ (−1, 1)`.
pub fn gegenbauer_eval_with_derivative(alpha: f64, nu: f64, z: f64) -> Result<(f64, f64)> {
    check_args(alpha, nu, z)?;
    if z == 1.0 {
        return domain("the derivative is unbounded at z = 1");
    }
    let t = z + 1.0;
    if t <= S0 {
        return Ok(series_eval(alpha, nu, t));
    }
    let (g0, dg0) = series_eval(alpha, nu, S0);
    let lambda = alpha * (alpha + 2.0 * nu);
    let c = 2.0 * nu + 1.0;
    let rhs = move |zz: f64, y: &[f64; 2]| -> [f64; 2] {
        [y[1], (lambda * y[0] - c * zz * y[1]) / ((zz - 1.0) * (zz + 1.0))]
    };
    let y = integrate(rhs, -1.0 + S0, [g0, dg0], z, 0.0, OdeOptions::default())?;
    Ok((y[0], y[1]))
}

/// Limit at `z = 1` from the hypergeometric representation
/// `g(z) = ₂F₁(−α, α+2ν; ν+½; (1+z)/2)`.
fn value_at_one(alpha: f64, nu: f64) -> Result<f64> {
    let c = nu + 0.5;
    let rounded = alpha.round();
    if (alpha - rounded).abs() < 1e-12 && rounded >= 0.0 {
        // terminating series: Chu–Vandermonde
        let k = rounded as usize;
        let mut v = 1.0;
        for j in 0..k {
            let jf = j as f64;
            v *= (0.5 - nu - k as f64 + jf) / (c + jf);
        }
        return Ok(v);
    }
    if nu < 0.5 {
        // Gauss summation: Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b))
        let g = statrs::function::gamma::gamma;
        return Ok(g(c) * g(0.5 - nu) * super::recip_gamma(c + alpha) * super::recip_gamma(0.5 - nu - alpha));
    }
    domain(format!("the solution is unbounded at z = 1 for nu = {nu} and non-integer alpha = {alpha}"))
}

/// Corner exponent data `(n, θ, α_θ, Λ_θ)` with `α(α+n−2) = Λ`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CornerExponent {
    pub n: usize,
    pub theta: f64,
    pub alpha: f64,
    pub lambda: f64,
}

fn check_exponent_args(n: usize, theta: f64) -> Result<()> {
    if n < 2 {
        return domain(format!("dimension must be at least 2, got {n}"));
    }
    if !(theta > 0.0 && theta < PI) {
        return domain(format!("theta must lie in (0, pi), got {theta}"));
    }
    Ok(())
}

/// Corner exponent of the cone with half-aperture `theta` in dimension `n`.
///
/// Dimensions 2 and 4 use the closed forms `π/(2θ)` and `π/θ − 1`; other
/// dimensions locate the first positive zero of `α ↦ g_α(−cos θ)`.
pub fn corner_exponent(n: usize, theta: f64) -> Result<CornerExponent> {
    check_exponent_args(n, theta)?;
    let alpha = match n {
        2 => PI / (2.0 * theta),
        4 => PI / theta - 1.0,
        _ => return corner_exponent_numeric(n, theta),
    };
    Ok(CornerExponent { n, theta, alpha, lambda: alpha * (alpha + n as f64 - 2.0) })
}

/// Corner exponent through the Gegenbauer root search, for every `n`.
pub fn corner_exponent_numeric(n: usize, theta: f64) -> Result<CornerExponent> {
    check_exponent_args(n, theta)?;
    let nu = (n as f64 - 2.0) / 2.0;
    let z = -theta.cos();
    let f = |a: f64| gegenbauer_eval(a, nu, z);
    let mut lo = SCAN_START;
    let mut flo = f(lo)?;
    if flo == 0.0 {
        return Ok(CornerExponent { n, theta, alpha: lo, lambda: lo * (lo + n as f64 - 2.0) });
    }
    let mut hi = lo;
    loop {
        hi += SCAN_STEP;
        if hi > SCAN_LIMIT {
            return Err(Error::SearchFailure(format!(
                "no sign change of the Gegenbauer function below alpha = {SCAN_LIMIT} (n={n}, theta={theta})"
            )));
        }
        let fhi = f(hi)?;
        if fhi == 0.0 {
            lo = hi;
            break;
        }
        if fhi.signum() != flo.signum() {
            while hi - lo > BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            break;
        }
        lo = hi;
        flo = fhi;
    }
    let alpha = 0.5 * (lo + hi);
    Ok(CornerExponent { n, theta, alpha, lambda: alpha * (alpha + n as f64 - 2.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_condition() {
        for &a in &[0.3, 2.0, 7.5] {
            let v = gegenbauer_eval(a, 1.3, -1.0 + 1e-14).unwrap();
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn nu_zero_matches_chebyshev_form() {
        for &a in &[0.5, 2.0, 3.7, 12.0, 20.0] {
            for &z in &[-0.99, -0.5, 0.0, 0.4, 0.9] {
                let v = gegenbauer_eval(a, 0.0, z).unwrap();
                let exact = (a * (PI - z.acos())).cos();
                assert!((v - exact).abs() < 1e-9, "a={a} z={z}: {v} vs {exact}");
            }
        }
        assert!((gegenbauer_eval(2.0, 0.0, 0.0).unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn nu_half_is_legendre() {
        // with ν = ½ the regular solution is P_α(−z); P₁(−z) = −z, P₂(−z) = (3z²−1)/2
        assert!(gegenbauer_eval(1.0, 0.5, 0.0).unwrap().abs() < 1e-9);
        for &z in &[-0.7, 0.2, 0.95] {
            let p1 = gegenbauer_eval(1.0, 0.5, z).unwrap();
            let p2 = gegenbauer_eval(2.0, 0.5, z).unwrap();
            assert!((p1 + z).abs() < 1e-9);
            assert!((p2 - (3.0 * z * z - 1.0) / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn value_at_one_matches_limit() {
        // g(1−s) = A + B s^{1/2−ν} + O(s): eliminate B from two samples
        let (s1, s2) = (1e-6f64, 1e-8f64);
        let (g1, g2) = (gegenbauer_eval(1.7, 0.2, 1.0 - s1).unwrap(), gegenbauer_eval(1.7, 0.2, 1.0 - s2).unwrap());
        let (p1, p2) = (s1.powf(0.3), s2.powf(0.3));
        let limit = (g2 * p1 - g1 * p2) / (p1 - p2);
        let at = gegenbauer_eval(1.7, 0.2, 1.0).unwrap();
        assert!((limit - at).abs() < 1e-4 * at.abs().max(1.0), "{limit} vs {at}");
        assert!((gegenbauer_eval(2.0, 0.5, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(gegenbauer_eval(1.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(gegenbauer_eval(1.0, 0.0, -1.0).is_err());
        assert!(gegenbauer_eval(1.0, 0.0, 1.5).is_err());
        assert!(corner_exponent(3, 0.0).is_err());
        assert!(corner_exponent(3, PI).is_err());
        assert!(corner_exponent(1, 1.0).is_err());
    }

    #[test]
    fn closed_forms() {
        let c = corner_exponent(2, PI / 2.0).unwrap();
        assert!((c.alpha - 1.0).abs() < 1e-15);
        let c = corner_exponent(4, PI / 3.0).unwrap();
        assert!((c.alpha - 2.0).abs() < 1e-14);
    }

    #[test]
    fn numeric_path_three_dimensions() {
        let c = corner_exponent(3, (1.0 / 3f64.sqrt()).acos()).unwrap();
        assert!((c.alpha - 2.0).abs() < 1e-8, "{}", c.alpha);
        let c = corner_exponent(3, PI / 2.0).unwrap();
        assert!((c.alpha - 1.0).abs() < 1e-8);
        assert!((c.lambda - 2.0).abs() < 1e-7);
    }
}

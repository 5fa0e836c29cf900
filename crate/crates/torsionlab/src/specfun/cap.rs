//! First Dirichlet eigenpair of a spherical cap and the diangle eigenfunction.

use super::gegenbauer::corner_exponent;
use super::ode::{integrate_dense, OdeOptions};
use crate::error::{domain, invalid, Result};
use crate::quad::gauss_jacobi_unit;
use std::f64::consts::PI;

/// Axisymmetric first eigenfunction of the cap of half-angle `theta` on `S^{n−1}`,
/// tabulated on a uniform colatitude grid over `[0, theta]`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CapEigenfunction {
    pub n: usize,
    pub theta: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
}

/// Colatitude below which the eigenfunction is taken from the series about the pole.
fn series_cutoff(theta: f64) -> f64 {
    (1e-3f64).min(1e-2 * theta)
}

/// Series about the pole in `w = 1 − cos t`, shared with the Gegenbauer recurrence.
fn pole_series(lambda: f64, nu: f64, t: f64) -> (f64, f64) {
    let w = 2.0 * (0.5 * t).sin().powi(2);
    let mut a = vec![1.0f64];
    for k in 0..10 {
        let kf = k as f64;
        a.push((kf * (kf + 2.0 * nu) - lambda) * a[k] / ((kf + 1.0) * (2.0 * kf + 2.0 * nu + 1.0)));
    }
    let mut g = 0.0;
    let mut dg = 0.0;
    for k in (0..a.len()).rev() {
        g = g * w + a[k];
        if k > 0 {
            dg = dg * w + k as f64 * a[k];
        }
    }
    (g, dg * t.sin())
}

/// Evaluate `(φ, φ′)` at sorted colatitudes in `[0, theta]`, unnormalised (`φ(0) = 1`).
fn eval_profile(n: usize, lambda: f64, theta: f64, ts: &[f64]) -> Result<Vec<(f64, f64)>> {
    let nu = (n as f64 - 2.0) / 2.0;
    let t0 = series_cutoff(theta);
    let mut out = Vec::with_capacity(ts.len());
    let split = ts.partition_point(|&t| t <= t0);
    for &t in &ts[..split] {
        out.push(pole_series(lambda, nu, t));
    }
    if split < ts.len() {
        let (g0, dg0) = pole_series(lambda, nu, t0);
        let m = n as f64 - 2.0;
        let rhs = move |t: f64, y: &[f64; 2]| -> [f64; 2] { [y[1], -m * t.cos() / t.sin() * y[1] - lambda * y[0]] };
        let ys = integrate_dense(rhs, t0, [g0, dg0], &ts[split..], OdeOptions::default())?;
        out.extend(ys.into_iter().map(|y| (y[0], y[1])));
    }
    Ok(out)
}

/// First eigenpair of the cap of half-angle `theta` in `S^{n−1}` on a grid of `grid` points.
pub fn cap_eigen(n: usize, theta: f64, grid: usize) -> Result<CapEigenfunction> {
    if grid < 64 {
        return invalid(format!("cap_eigen needs at least 64 grid points, got {grid}"));
    }
    let ce = corner_exponent(n, theta)?;
    let ts: Vec<f64> = (0..grid).map(|i| theta * i as f64 / (grid - 1) as f64).collect();
    let (values, derivatives) = if n == 2 {
        let k = PI / (2.0 * theta);
        (ts.iter().map(|t| (k * t).cos()).collect::<Vec<_>>(), ts.iter().map(|t| -k * (k * t).sin()).collect())
    } else {
        let prof = eval_profile(n, ce.lambda, theta, &ts)?;
        let sup = prof.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        (prof.iter().map(|p| p.0 / sup).collect(), prof.iter().map(|p| p.1 / sup).collect())
    };
    Ok(CapEigenfunction { n, theta, alpha: ce.alpha, lambda: ce.lambda, grid: ts, values, derivatives })
}

impl CapEigenfunction {
    /// Relative residual `max |φ″ + (n−2)cot t φ′ + Λφ| / Λ` over the interior grid points,
    /// with `φ″` from a central difference of `φ′` at spacing `1e-4·θ`.
    pub fn residual(&self) -> f64 {
        let m = self.grid.len();
        let eps = 1e-4 * self.theta;
        let inner = &self.grid[1..m - 1];
        let probes: Vec<f64> = inner.iter().flat_map(|&t| [t - eps, t + eps]).collect();
        let d: Vec<f64> = if self.n == 2 {
            let k = PI / (2.0 * self.theta);
            probes.iter().map(|t| -k * (k * t).sin()).collect()
        } else {
            let sup = match eval_profile(self.n, self.lambda, self.theta, &[0.0]) {
                Ok(p) => p[0].0,
                Err(_) => return f64::INFINITY,
            };
            match eval_profile(self.n, self.lambda, self.theta, &probes) {
                Ok(p) => p.into_iter().map(|q| q.1 / sup).collect(),
                Err(_) => return f64::INFINITY,
            }
        };
        let mut worst = 0.0f64;
        for (j, &t) in inner.iter().enumerate() {
            let dd = (d[2 * j + 1] - d[2 * j]) / (2.0 * eps);
            let i = j + 1;
            let r = dd + (self.n as f64 - 2.0) * t.cos() / t.sin() * self.derivatives[i] + self.lambda * self.values[i];
            worst = worst.max(r.abs());
        }
        worst / self.lambda
    }

    /// Values of the normalised eigenfunction at sorted colatitudes in `[0, theta]`.
    pub fn eval(&self, ts: &[f64]) -> Result<Vec<f64>> {
        if ts.iter().any(|&t| !(0.0..=self.theta).contains(&t)) || ts.windows(2).any(|w| w[1] < w[0]) {
            return domain("cap eigenfunction evaluation needs sorted colatitudes in [0, theta]");
        }
        if self.n == 2 {
            let k = PI / (2.0 * self.theta);
            return Ok(ts.iter().map(|t| (k * t).cos()).collect());
        }
        let sup = eval_profile(self.n, self.lambda, self.theta, &[0.0])?[0].0;
        Ok(eval_profile(self.n, self.lambda, self.theta, ts)?.into_iter().map(|p| p.0 / sup).collect())
    }
}

/// Surface measure of the unit sphere `S^{k}` in `R^{k+1}`.
pub fn sphere_area(k: usize) -> f64 {
    let a = (k as f64 + 1.0) / 2.0;
    2.0 * PI.powf(a) / statrs::function::gamma::gamma(a)
}

/// `∫_G φ^{−β} dσ` over the cap `G` of half-angle `theta` in `S^{n−1}`.
///
/// Gauss–Jacobi in the colatitude with the weight `(θ−t)^{−β}` absorbs the
/// simple zero of `φ` at the rim.
pub fn cap_neg_power_integral(eig: &CapEigenfunction, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return domain(format!("beta must lie in (0, 1), got {beta}"));
    }
    let theta = eig.theta;
    let rule = gauss_jacobi_unit(48, 0.0, -beta)?;
    let ts: Vec<f64> = rule.nodes.iter().map(|y| theta * y).collect();
    let phis = eig.eval(&ts)?;
    let m = eig.n as f64 - 2.0;
    let mut s = 0.0;
    for ((y, w), phi) in rule.nodes.iter().zip(&rule.weights).zip(&phis) {
        let t = theta * y;
        let ratio = phi / (theta * (1.0 - y));
        s += w * ratio.powf(-beta) * t.sin().powf(m);
    }
    Ok(sphere_area(eig.n - 2) * theta.powf(1.0 - beta) * s)
}

/// `(sin φ)^{π/2θ} cos(πψ/2θ)` on the diangle `{|ψ| < θ}` of `S²` (φ polar, ψ azimuth).
pub fn diangle_eigenfunction(theta: f64, phi: f64, psi: f64) -> f64 {
    let a = PI / (2.0 * theta);
    phi.sin().powf(a) * (a * psi).cos()
}

/// Eigenvalue `(π/2θ)(π/2θ + 1)` matching [`diangle_eigenfunction`].
pub fn diangle_eigenvalue(theta: f64) -> f64 {
    let a = PI / (2.0 * theta);
    a * (a + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_cap_is_cosine() {
        let c = cap_eigen(2, PI / 4.0, 64).unwrap();
        assert!((c.lambda - 4.0).abs() < 1e-12);
        for (t, v) in c.grid.iter().zip(&c.values) {
            assert!((v - (2.0 * t).cos()).abs() < 1e-15);
        }
        assert!(c.values.last().unwrap().abs() < 1e-15);
    }

    #[test]
    fn hemisphere_in_three_dimensions() {
        let c = cap_eigen(3, PI / 2.0, 128).unwrap();
        assert!((c.lambda - 2.0).abs() < 1e-7);
        for (t, v) in c.grid.iter().zip(&c.values) {
            assert!((v - t.cos()).abs() < 1e-7, "t={t} {v}");
        }
        assert!(c.residual() < 1e-6);
    }

    #[test]
    fn rim_zero_and_normalisation() {
        for &(n, th) in &[(3, 0.4), (3, 2.5), (5, 1.0), (6, 0.7)] {
            let c = cap_eigen(n, th, 96).unwrap();
            assert!(c.values.last().unwrap().abs() < 1e-7, "n={n} th={th}");
            let mx = c.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!((mx - 1.0).abs() < 1e-15);
            assert!(c.values[..c.values.len() - 1].iter().all(|&v| v > 0.0));
            assert!(c.residual() < 1e-6, "n={n} th={th} residual {}", c.residual());
        }
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(0) - 2.0).abs() < 1e-14);
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn planar_cap_integral() {
        let c = cap_eigen(2, 0.9, 64).unwrap();
        let v = cap_neg_power_integral(&c, 0.5).unwrap();
        let exact = 2.0 * 0.9 / PI * crate::specfun::beta_fn(0.5, 0.25).unwrap();
        assert!((v - exact).abs() < 1e-10 * exact);
    }
}

//! `∫_T ℓ^{−β}` for an affine `ℓ ≥ 0` on a triangle `T`.

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre_unit, triangle_rule_7, Rule};
use crate::Point;
use std::sync::OnceLock;

/// Smallest-to-largest vertex ratio below which a zero-free triangle is split.
const SPLIT_RATIO: f64 = 0.5;
const MAX_SPLIT_DEPTH: usize = 6;

fn gl16() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_unit(16))
}

fn area(p: &[Point; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])).abs()
}

/// `∫_0^1 ((1−t)a + t b)^{−β} dt` for `a, b > 0`.
fn edge_mean(a: f64, b: f64, beta: f64) -> f64 {
    if (b - a).abs() < 0.5 * a.max(b) {
        gl16().integrate(|t| ((1.0 - t) * a + t * b).powf(-beta))
    } else {
        (b.powf(1.0 - beta) - a.powf(1.0 - beta)) / ((1.0 - beta) * (b - a))
    }
}

fn smooth(p: [Point; 3], u: [f64; 3], beta: f64, depth: usize) -> f64 {
    let lo = u[0].min(u[1]).min(u[2]);
    let hi = u[0].max(u[1]).max(u[2]);
    if depth == 0 && lo < SPLIT_RATIO * hi {
        // values are well separated here, so the closed form is well conditioned
        return linear_power_integral_exact(p, u, beta);
    }
    if lo >= SPLIT_RATIO * hi {
        let a = area(&p);
        return a * triangle_rule_7()
            .iter()
            .map(|(b, w)| w * (b[0] * u[0] + b[1] * u[1] + b[2] * u[2]).powf(-beta))
            .sum::<f64>();
    }
    let m = |a: usize, b: usize| [0.5 * (p[a][0] + p[b][0]), 0.5 * (p[a][1] + p[b][1])];
    let mu = |a: usize, b: usize| 0.5 * (u[a] + u[b]);
    let (m01, m12, m20) = (m(0, 1), m(1, 2), m(2, 0));
    let (u01, u12, u20) = (mu(0, 1), mu(1, 2), mu(2, 0));
    smooth([p[0], m01, m20], [u[0], u01, u20], beta, depth - 1)
        + smooth([m01, p[1], m12], [u01, u[1], u12], beta, depth - 1)
        + smooth([m20, m12, p[2]], [u20, u12, u[2]], beta, depth - 1)
        + smooth([m01, m12, m20], [u01, u12, u20], beta, depth - 1)
}

/// Integral of `ℓ^{−β}` over a triangle where `ℓ` takes the nodal values `u`.
/// Values at or below `zero_tol` are treated as zeros of `ℓ`, unless all three
/// are, in which case the closed form is used; a triangle on which `ℓ`
/// vanishes identically has a divergent integral and is an error.
/// `β = 0` is allowed and returns the area.
pub fn linear_power_integral(p: [Point; 3], u: [f64; 3], beta: f64, zero_tol: f64) -> Result<f64> {
    let a = area(&p);
    if a == 0.0 {
        return Ok(0.0);
    }
    if beta == 0.0 {
        return Ok(a);
    }
    let zero = [u[0] <= zero_tol, u[1] <= zero_tol, u[2] <= zero_tol];
    match zero.iter().filter(|&&z| z).count() {
        3 if u.iter().all(|&v| v <= 0.0) => {
            Err(Error::IntegrationFailure(format!("field vanishes on the whole triangle {p:?}; the integral diverges")))
        }
        3 => Ok(linear_power_integral_exact(p, u.map(|v| v.max(0.0)), beta)),
        2 => {
            let w = u[zero.iter().position(|&z| !z).unwrap()];
            Ok(2.0 * a * w.powf(-beta) / ((1.0 - beta) * (2.0 - beta)))
        }
        1 => {
            let k = zero.iter().position(|&z| z).unwrap();
            let (u1, u2) = (u[(k + 1) % 3], u[(k + 2) % 3]);
            Ok(2.0 * a / (2.0 - beta) * edge_mean(u1, u2, beta))
        }
        _ => Ok(smooth(p, u, beta, MAX_SPLIT_DEPTH)),
    }
}

fn g(x: f64, beta: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(2.0 - beta) / ((1.0 - beta) * (2.0 - beta))
    }
}

/// Closed form `2|T| G[u₀,u₁,u₂]` with `G(x) = x^{2−β}/((1−β)(2−β))`, the
/// second divided difference taken in the confluent sense where values repeat.
pub fn linear_power_integral_exact(p: [Point; 3], u: [f64; 3], beta: f64) -> f64 {
    let mut v = u;
    v.sort_by(f64::total_cmp);
    let [a, b, c] = v;
    let scale = c.abs().max(f64::MIN_POSITIVE);
    let close = |x: f64, y: f64| (y - x).abs() <= 1e-9 * scale;
    let g1 = |x: f64| x.powf(1.0 - beta) / (1.0 - beta);
    let g2 = |x: f64| x.powf(-beta);
    let dd1 = |x: f64, y: f64| if close(x, y) { g1(0.5 * (x + y)) } else { (g(y, beta) - g(x, beta)) / (y - x) };
    let dd2 = if close(a, c) { 0.5 * g2(0.5 * (a + c)) } else { (dd1(b, c) - dd1(a, b)) / (c - a) };
    2.0 * area(&p) * dd2
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: [Point; 3] = [[0.0, 0.0], [1.0, 0.2], [0.3, 0.9]];

    #[test]
    fn matches_divided_differences() {
        for &beta in &[0.1, 0.5, 0.9] {
            for u in [
                [0.0, 0.0, 1.0],
                [0.0, 0.3, 1.0],
                [0.0, 0.5, 0.52],
                [0.2, 0.5, 1.1],
                [0.01, 0.4, 0.9],
                [1e-6, 1.0, 0.7],
            ] {
                let got = linear_power_integral(T, u, beta, 0.0).unwrap();
                let want = linear_power_integral_exact(T, u, beta);
                assert!((got - want).abs() <= 1e-5 * want, "β={beta} u={u:?}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn vanishing_triangle_is_rejected() {
        assert!(linear_power_integral(T, [0.0; 3], 0.5, 0.0).is_err());
        assert_eq!(linear_power_integral(T, [0.0; 3], 0.0, 0.0).unwrap(), area(&T));
    }

    #[test]
    fn constant_field() {
        let v = linear_power_integral(T, [0.25; 3], 0.5, 0.0).unwrap();
        assert!((v - 2.0 * area(&T)).abs() < 1e-14);
        assert!((linear_power_integral_exact(T, [0.25; 3], 0.5) - v).abs() < 1e-12);
    }
}

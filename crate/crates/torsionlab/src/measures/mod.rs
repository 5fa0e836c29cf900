//! Functionals of the discrete torsion function: `∫u^{−β}` with boundary-aware
//! quadrature, torsional rigidity, distribution functions and the Mellin
//! identity, plus distance-function integrals in [`distance`].

mod distance;
mod linear;

pub use distance::{
    ahlfors_bound_check, ahlfors_family_constant, coarea_check, collar_area, distance_integral,
    distance_integral_bound, omega_profile, AhlforsReport, CoareaReport, DistanceProfile,
};
pub use linear::{linear_power_integral, linear_power_integral_exact};

use crate::error::{domain, Error, Result};
use crate::geometry::clip::{clip_affine, signed_area};
use crate::quad::linear_fit;
use crate::solver::ScalarField;
use crate::Point;
use rayon::prelude::*;

/// Nodal values at or below this fraction of `max u` are treated as zeros of `u`.
pub const ZERO_FRACTION: f64 = 1e-14;

/// Contribution of the ball `B(P_i, r_i)` around a domain corner.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CornerContribution {
    pub corner: usize,
    pub radius: f64,
    pub value: f64,
}

/// `∫_Ω u^{−β}` with its refinement history.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BetaIntegralResult {
    pub beta: f64,
    pub value: f64,
    /// Size of the last refinement increment (zero for a single mesh).
    pub error_estimate: f64,
    pub corner_contributions: Vec<CornerContribution>,
    /// `(h, value)` from coarse to fine.
    pub refinement_history: Vec<(f64, f64)>,
    /// Set when the solve clamped negative nodal values.
    pub tainted: bool,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return domain(format!("beta must lie in (0, 1), got {beta}"));
    }
    Ok(())
}

/// Fixed-order parallel sum over triangles.
fn sum_triangles<F>(n: usize, f: F) -> Result<f64>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    let parts: Vec<Result<f64>> =
        (0..n).into_par_iter().chunks(1024).map(|c| c.into_iter().map(&f).sum::<Result<f64>>()).collect();
    let mut s = 0.0;
    for p in parts {
        s += p?;
    }
    Ok(s)
}

fn triangle_data(field: &ScalarField, t: usize) -> ([Point; 3], [f64; 3]) {
    let tri = field.mesh.triangles[t];
    (field.mesh.vertices_of(t), [field.values[tri[0]], field.values[tri[1]], field.values[tri[2]]])
}

fn zero_tol(field: &ScalarField) -> f64 {
    ZERO_FRACTION * field.max_value()
}

/// `∫_Ω u_h^{−β}` on one mesh, with corner-ball contributions.
pub fn beta_integral(field: &ScalarField, beta: f64) -> Result<BetaIntegralResult> {
    check_beta(beta)?;
    let ztol = zero_tol(field);
    let value = sum_triangles(field.mesh.triangles.len(), |t| {
        let (p, u) = triangle_data(field, t);
        linear_power_integral(p, u, beta, ztol)
    })?;
    let corner_contributions = corner_contributions(field, beta)?;
    Ok(BetaIntegralResult {
        beta,
        value,
        error_estimate: 0.0,
        corner_contributions,
        refinement_history: vec![(field.h, value)],
        tainted: field.clamped > 0,
    })
}

/// `∫_Ω u_h^{−β}` over a refinement sequence; the reported value is the finest,
/// the error estimate the last increment.
pub fn beta_integral_sequence(fields: &[ScalarField], beta: f64) -> Result<BetaIntegralResult> {
    let finest = fields.last().ok_or_else(|| Error::InvalidArgument("empty refinement sequence".into()))?;
    let mut out = beta_integral(finest, beta)?;
    let mut history = Vec::with_capacity(fields.len());
    for f in &fields[..fields.len() - 1] {
        history.push((f.h, beta_integral_value(f, beta)?));
    }
    history.push((finest.h, out.value));
    if history.len() >= 2 {
        let m = history.len();
        out.error_estimate = (history[m - 1].1 - history[m - 2].1).abs();
    }
    out.tainted = fields.iter().any(|f| f.clamped > 0);
    out.refinement_history = history;
    Ok(out)
}

/// Value of `∫_Ω u_h^{−β}` alone.
pub fn beta_integral_value(field: &ScalarField, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let ztol = zero_tol(field);
    sum_triangles(field.mesh.triangles.len(), |t| {
        let (p, u) = triangle_data(field, t);
        linear_power_integral(p, u, beta, ztol)
    })
}

/// Fan-triangulate a convex polygon carrying `u` and integrate `u^{−β}`.
fn polygon_power_integral(poly: &[[f64; 3]], beta: f64, ztol: f64) -> Result<f64> {
    let mut s = 0.0;
    for k in 1..poly.len().saturating_sub(1) {
        let (a, b, c) = (poly[0], poly[k], poly[k + 1]);
        let p = [[a[0], a[1]], [b[0], b[1]], [c[0], c[1]]];
        let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        if area2.abs() <= 0.0 {
            continue;
        }
        s += linear_power_integral(p, [a[2], b[2], c[2]], beta, ztol)?;
    }
    Ok(s)
}

/// `∫_{Ω ∩ {a·x + c ≥ 0}} u_h^{−β}`, cutting triangles exactly along the line.
pub fn beta_integral_halfplane(field: &ScalarField, beta: f64, a: [f64; 2], c: f64) -> Result<f64> {
    check_beta(beta)?;
    let ztol = zero_tol(field);
    sum_triangles(field.mesh.triangles.len(), |t| {
        let (p, u) = triangle_data(field, t);
        let g: Vec<f64> = p.iter().map(|x| a[0] * x[0] + a[1] * x[1] + c).collect();
        if g.iter().all(|&v| v >= 0.0) {
            return linear_power_integral(p, u, beta, ztol);
        }
        if g.iter().all(|&v| v < 0.0) {
            return Ok(0.0);
        }
        let verts = [[p[0][0], p[0][1], u[0]], [p[1][0], p[1][1], u[1]], [p[2][0], p[2][1], u[2]]];
        let (cut, _) = clip_affine(&verts, &g);
        polygon_power_integral(&cut, beta, ztol)
    })
}

/// Radius of the corner ball at vertex `i`: half the shorter adjacent edge,
/// reduced so the ball misses every non-adjacent edge.  The ball then meets
/// the domain in a circular sector.
pub fn corner_radius(poly: &crate::geometry::Polygon, i: usize) -> f64 {
    let n = poly.len();
    let prev = (i + n - 1) % n;
    let p = poly.vertex(i);
    let far = (0..n)
        .filter(|&j| j != i && j != prev)
        .map(|j| {
            let (a, b) = poly.edge(j);
            crate::geometry::segment_distance(a, b, p)
        })
        .fold(f64::INFINITY, f64::min);
    (0.5 * poly.edge_length(i).min(poly.edge_length(prev))).min(far)
}

/// Depth of the subdivision used on triangles cut by a corner ball.
const BALL_DEPTH: usize = 7;

fn ball_part(p: [Point; 3], u: [f64; 3], c: Point, r: f64, beta: f64, ztol: f64, depth: usize) -> Result<f64> {
    let inside = |x: Point| (x[0] - c[0]).hypot(x[1] - c[1]) <= r;
    let all_in = p.iter().all(|&x| inside(x));
    if all_in {
        return linear_power_integral(p, u, beta, ztol);
    }
    // distance from the centre to the triangle decides the disjoint case
    let dist = {
        let bary_inside = {
            let d = |a: Point, b: Point| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            d(p[0], p[1]) >= 0.0 && d(p[1], p[2]) >= 0.0 && d(p[2], p[0]) >= 0.0
        };
        if bary_inside {
            0.0
        } else {
            (0..3).map(|k| crate::geometry::segment_distance(p[k], p[(k + 1) % 3], c)).fold(f64::INFINITY, f64::min)
        }
    };
    if dist >= r {
        return Ok(0.0);
    }
    if depth == 0 {
        let g = [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0];
        return if inside(g) { linear_power_integral(p, u, beta, ztol) } else { Ok(0.0) };
    }
    let m = |a: usize, b: usize| [0.5 * (p[a][0] + p[b][0]), 0.5 * (p[a][1] + p[b][1])];
    let mu = |a: usize, b: usize| 0.5 * (u[a] + u[b]);
    let (m01, m12, m20) = (m(0, 1), m(1, 2), m(2, 0));
    let (u01, u12, u20) = (mu(0, 1), mu(1, 2), mu(2, 0));
    let kids = [
        ([p[0], m01, m20], [u[0], u01, u20]),
        ([m01, p[1], m12], [u01, u[1], u12]),
        ([m20, m12, p[2]], [u20, u12, u[2]]),
        ([m01, m12, m20], [u01, u12, u20]),
    ];
    let mut s = 0.0;
    for (q, v) in kids {
        s += ball_part(q, v, c, r, beta, ztol, depth - 1)?;
    }
    Ok(s)
}

/// `∫_{Ω ∩ B(c, r)} u_h^{−β}`; triangles cut by the circle are subdivided.
pub fn beta_integral_ball(field: &ScalarField, beta: f64, c: Point, r: f64) -> Result<f64> {
    check_beta(beta)?;
    let ztol = zero_tol(field);
    sum_triangles(field.mesh.triangles.len(), |t| {
        let (p, u) = triangle_data(field, t);
        ball_part(p, u, c, r, beta, ztol, BALL_DEPTH)
    })
}

fn corner_contributions(field: &ScalarField, beta: f64) -> Result<Vec<CornerContribution>> {
    let poly = &field.mesh.polygon;
    field
        .mesh
        .corners
        .iter()
        .map(|&i| {
            let radius = corner_radius(poly, i);
            Ok(CornerContribution {
                corner: i,
                radius,
                value: beta_integral_ball(field, beta, poly.vertex(i), radius)?,
            })
        })
        .collect()
}

/// Torsional rigidity by `∫u_h` and by the Dirichlet energy `∫|∇u_h|²`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Rigidity {
    pub integral_u: f64,
    pub dirichlet_energy: f64,
    pub mismatch: f64,
}

pub fn torsional_rigidity(field: &ScalarField) -> Rigidity {
    let mut iu = 0.0;
    let mut en = 0.0;
    for t in 0..field.mesh.triangles.len() {
        let (p, u) = triangle_data(field, t);
        let (g, area) = crate::solver::p1_gradients(p);
        iu += area * (u[0] + u[1] + u[2]) / 3.0;
        let gx = g[0][0] * u[0] + g[1][0] * u[1] + g[2][0] * u[2];
        let gy = g[0][1] * u[0] + g[1][1] * u[1] + g[2][1] * u[2];
        en += area * (gx * gx + gy * gy);
    }
    Rigidity { integral_u: iu, dirichlet_energy: en, mismatch: (iu - en).abs() }
}

/// Area of `{x ∈ T : u(x) < λ}` for a linear `u` on the triangle `T`.
fn triangle_sublevel(p: [Point; 3], u: [f64; 3], lambda: f64) -> f64 {
    let g = [lambda - u[0], lambda - u[1], lambda - u[2]];
    if g.iter().all(|&v| v > 0.0) {
        return 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
    }
    if g.iter().all(|&v| v <= 0.0) {
        return 0.0;
    }
    let (cut, _) = clip_affine(&p, &g);
    if cut.len() < 3 {
        0.0
    } else {
        signed_area(&cut)
    }
}

/// `|{x : u_h(x) < λ}|`, exact for the piecewise-linear field.
pub fn sublevel_measure(field: &ScalarField, lambda: f64) -> f64 {
    let parts: Vec<f64> = (0..field.mesh.triangles.len())
        .into_par_iter()
        .chunks(1024)
        .map(|c| {
            c.into_iter()
                .map(|t| {
                    let (p, u) = triangle_data(field, t);
                    triangle_sublevel(p, u, lambda)
                })
                .sum()
        })
        .collect();
    parts.iter().sum()
}

/// Per-triangle sublevel areas, whose sum is [`sublevel_measure`].
pub fn sublevel_areas(field: &ScalarField, lambda: f64) -> Vec<f64> {
    (0..field.mesh.triangles.len())
        .map(|t| {
            let (p, u) = triangle_data(field, t);
            triangle_sublevel(p, u, lambda)
        })
        .collect()
}

/// Points of the log grid used by the Mellin identity.
pub const MELLIN_POINTS: usize = 400;

/// `β ∫_0^∞ λ^{−β−1} |{u < λ}| dλ`, trapezoidal in `log λ` on a geometric grid
/// from `1e-6·max u` to `max u`, with the linear small-`λ` tail and the
/// `|Ω| (max u)^{−β}` tail added analytically.
pub fn mellin_beta_integral(field: &ScalarField, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let m = field.max_value();
    if !(m > 0.0) {
        return Err(Error::IntegrationFailure("field vanishes identically".into()));
    }
    let area = field.mesh.total_area();
    let l0 = 1e-6 * m;
    let n = MELLIN_POINTS;
    let step = (m / l0).ln() / (n - 1) as f64;
    let lams: Vec<f64> = (0..n).map(|k| l0 * (step * k as f64).exp()).collect();
    let vals: Vec<f64> = lams.iter().map(|&l| beta * l.powf(-beta) * sublevel_measure(field, l)).collect();
    let mut mid = 0.0;
    for k in 0..n - 1 {
        mid += 0.5 * step * (vals[k] + vals[k + 1]);
    }
    let c = sublevel_measure(field, l0) / l0;
    let head = beta * c * l0.powf(1.0 - beta) / (1.0 - beta);
    let tail = area * m.powf(-beta);
    Ok(head + mid + tail)
}

/// Least-squares fit of `log|{u < λ}|` against `log λ`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WeakTypeFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn weak_type_exponent(field: &ScalarField, lambdas: &[f64]) -> Result<WeakTypeFit> {
    let m = field.max_value();
    let lo = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lambdas.iter().copied().fold(0.0, f64::max);
    if lambdas.len() < 2 || !(lo > 0.0) || hi > m || m / lo < 100.0 {
        return Err(Error::FitFailure(format!(
            "lambda grid must lie in (0, max u] and reach two decades below max u = {m:e} (got [{lo:e}, {hi:e}])"
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &l in lambdas {
        let a = sublevel_measure(field, l);
        if a > 0.0 {
            xs.push(l.ln());
            ys.push(a.ln());
        }
    }
    let (exponent, intercept, r2) = linear_fit(&xs, &ys)?;
    Ok(WeakTypeFit { exponent, intercept, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{triangulate, unit_square, MeshParams};
    use crate::solver::poisson_solve;

    fn square(h: f64) -> ScalarField {
        poisson_solve(triangulate(&unit_square(), h, 0.5, 2).unwrap()).unwrap()
    }

    #[test]
    fn rigidity_of_square() {
        // Σ_{m,n odd} 64/(π⁶ m²n²(m²+n²))
        let pi = std::f64::consts::PI;
        let mut s = 0.0;
        for m in (1..2000).step_by(2) {
            for n in (1..2000).step_by(2) {
                let (m, n) = (m as f64, n as f64);
                s += 1.0 / (m * m * n * n * (m * m + n * n));
            }
        }
        let exact = 64.0 * s / pi.powi(6);
        assert!((exact - 0.035144).abs() < 1e-5, "{exact}");
        let r = torsional_rigidity(&square(0.04));
        assert!((r.integral_u - exact).abs() < 0.01 * exact);
        assert!(r.mismatch <= 1e-8 * r.integral_u);
    }

    #[test]
    fn sublevel_partition_and_extremes() {
        let f = square(0.1);
        let m = f.max_value();
        assert!((sublevel_measure(&f, 1.01 * m) - 1.0).abs() < 1e-14);
        for l in [0.1 * m, 0.5 * m] {
            let parts = sublevel_areas(&f, l);
            let s: f64 = parts.iter().sum();
            assert!((s - sublevel_measure(&f, l)).abs() < 1e-13);
        }
    }

    #[test]
    fn beta_integral_covariance_and_floors() {
        let f = square(0.1);
        let beta = 0.6;
        let v = beta_integral(&f, beta).unwrap().value;
        let c = 3.7;
        let vc = beta_integral(&f.scaled(c), beta).unwrap().value;
        assert!((vc - c.powf(-beta) * v).abs() < 1e-12 * v);
        let mean = torsional_rigidity(&f).integral_u;
        assert!(v >= mean.powf(-beta));
        assert!(v >= f.max_value().powf(-beta));
        assert!(beta_integral(&f, 1.0).is_err());
    }

    #[test]
    fn halfplane_and_ball_pieces() {
        let f = square(0.1);
        let beta = 0.5;
        let total = beta_integral_value(&f, beta).unwrap();
        let left = beta_integral_halfplane(&f, beta, [-1.0, 0.0], 0.37).unwrap();
        let right = beta_integral_halfplane(&f, beta, [1.0, 0.0], -0.37).unwrap();
        assert!((left + right - total).abs() < 1e-5 * total);
        let ball = beta_integral_ball(&f, beta, [0.5, 0.5], 10.0).unwrap();
        assert!((ball - total).abs() < 1e-12 * total);
    }

    #[test]
    fn weak_type_needs_wide_grid() {
        let f = square(0.1);
        let m = f.max_value();
        assert!(weak_type_exponent(&f, &[0.5 * m, m]).is_err());
        let grid: Vec<f64> = (0..20).map(|k| m * 1e-3 * 10f64.powf(k as f64 * 2.0 / 19.0)).collect();
        let fit = weak_type_exponent(&f, &grid).unwrap();
        assert!((fit.exponent - 1.0).abs() < 0.1, "{fit:?}");
    }

    #[test]
    fn mellin_matches_direct_on_square() {
        let f = poisson_solve(crate::geometry::triangulate(&unit_square(), 0.05, 0.5, 3).unwrap()).unwrap();
        let direct = beta_integral_value(&f, 0.5).unwrap();
        let mellin = mellin_beta_integral(&f, 0.5).unwrap();
        assert!((mellin - direct).abs() < 1e-2 * direct, "{mellin} vs {direct}");
        let _ = MeshParams::new(0.1, 0.5, 0);
    }
}

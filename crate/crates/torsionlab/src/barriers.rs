//! Closed-form barrier functions, their exact `β`-integrals and the comparison
//! constants used to bracket the torsion function.
//!
//! Angles are half-apertures unless stated otherwise; sectors are symmetric about
//! the positive x-axis with apex at the origin.

use crate::error::{domain, invalid, Result};
use crate::geometry::{CuspFamily, CuspProfile};
use crate::quad::tanh_sinh;
use crate::specfun::{
    beta_fn, cap_eigen, cap_neg_power_integral, corner_exponent, gamma_fn, sphere_area, CapEigenfunction,
};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Distance from the logarithmic case within which the limit formulas are used.
pub const BRANCH_TOL: f64 = 1e-8;

/// Relative slack accepted on domain checks of closed sets.
const EDGE_TOL: f64 = 1e-12;

/// Universal constant `c` of the convex-corner comparison: the supremum over
/// `θ ∈ (0, π/2)` and `|ω| < θ` of `2θ² cos(πω/2θ)/(cos ω − cos θ)`.
///
/// Computed by [`convex_corner_ratio_sup`] on a 4000-point `θ` grid refined by
/// golden-section search; the supremum is approached as `θ → π/2`, where the
/// ratio is identically `2θ² → π²/2`.
pub const CONVEX_CORNER_C: f64 = PI * PI / 2.0;

/// Barrier value with an optional gradient.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BarrierValue {
    pub value: f64,
    pub gradient: Option<[f64; 2]>,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return domain(format!("beta must lie in (0, 1), got {beta}"));
    }
    Ok(())
}

fn check_sector(theta: f64, r: f64) -> Result<()> {
    if !(theta > 0.0 && theta < PI) {
        return domain(format!("half-aperture must lie in (0, pi), got {theta}"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("sector radius must be positive, got {r}"));
    }
    Ok(())
}

/// Radial factor `r²[(ρ/r)² − (ρ/r)^α]/((α−2)(α+n))` with its `α → 2` limit
/// `ρ² log(r/ρ)/(n+2)`, evaluated without cancellation near `ρ = r` and `α = 2`.
fn radial_profile(n: f64, alpha: f64, r: f64, rho: f64) -> (f64, f64) {
    if rho <= 0.0 {
        return (0.0, 0.0);
    }
    let s = rho / r;
    let ln_s = ((rho - r) / r).ln_1p();
    let d = alpha - 2.0;
    if d.abs() <= BRANCH_TOL {
        let val = rho * rho * (-ln_s) / (n + 2.0);
        let der = rho * (-2.0 * ln_s - 1.0) / (n + 2.0);
        return (val, der);
    }
    // s² − s^α = −s² expm1((α−2) ln s)
    let e = (d * ln_s).exp_m1();
    let val = -r * r * s * s * e / (d * (alpha + n));
    // d/dρ: r s (2 − α s^{α−2})/((α−2)(α+n)), and 2 − α s^{α−2} = −d − α e
    let der = r * s * (-d - alpha * e) / (d * (alpha + n));
    (val, der)
}

/// Sector barrier `v_{θ,r}(ρ, ω)` with `−Δv = cos(πω/2θ)` and `v = 0` on `∂S_{θ,r}`.
pub fn sector_barrier(theta: f64, r: f64, rho: f64, omega: f64) -> Result<f64> {
    Ok(sector_barrier_value(theta, r, rho, omega)?.value)
}

/// Sector barrier with its Cartesian gradient.
pub fn sector_barrier_value(theta: f64, r: f64, rho: f64, omega: f64) -> Result<BarrierValue> {
    check_sector(theta, r)?;
    if !(rho >= 0.0) || rho > r * (1.0 + EDGE_TOL) || !(omega.abs() <= theta * (1.0 + EDGE_TOL)) {
        return domain(format!("point (rho={rho}, omega={omega}) lies outside the sector S({theta}, {r})"));
    }
    let rho = rho.min(r);
    let omega = omega.clamp(-theta, theta);
    let k = PI / (2.0 * theta);
    let (rad, drad) = radial_profile(2.0, k, r, rho);
    let (ck, sk) = ((k * omega).cos(), (k * omega).sin());
    let value = rad * ck;
    let gradient = if rho > 0.0 {
        let (c, s) = (omega.cos(), omega.sin());
        let gr = drad * ck;
        let gw = -rad * k * sk / rho;
        Some([gr * c - gw * s, gr * s + gw * c])
    } else {
        Some([0.0, 0.0])
    };
    Ok(BarrierValue { value, gradient })
}

/// `C(θ, β)` with `∫_{S_{θ,r}} v_{θ,r}^{−β} = C(θ, β) r^{2(1−β)}`, for `θ ∈ (0, π]`.
///
/// `θ = π` (the slit disc) is accepted; [`is_slit`] flags it.
pub fn sector_constant(theta: f64, beta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= PI) {
        return domain(format!("half-aperture must lie in (0, pi], got {theta}"));
    }
    check_beta(beta)?;
    let b_ang = beta_fn(0.5, 0.5 * (1.0 - beta))?;
    let k = PI / (2.0 * theta);
    if (theta - FRAC_PI_4).abs() <= BRANCH_TOL {
        let v = 2f64.powf(3.0 * beta - 2.0) * (1.0 / (1.0 - beta)).powf(1.0 - beta) * gamma_fn(1.0 - beta)? * b_ang;
        return Ok(v);
    }
    let two_theta_sq = 4.0 * theta * theta;
    if theta < FRAC_PI_4 {
        let x = theta * (1.0 - beta) / (FRAC_PI_4 - theta);
        Ok((k * k - 4.0).powf(beta) * two_theta_sq / (PI * (PI - 4.0 * theta)) * beta_fn(x, 1.0 - beta)? * b_ang)
    } else {
        // s^α − s² = s^α(1 − s^{2−α}) for α < 2 gives the first argument (2 − αβ)/(2 − α)
        let x = (theta - 0.25 * beta * PI) / (theta - FRAC_PI_4);
        Ok((4.0 - k * k).powf(beta) * two_theta_sq / (PI * (4.0 * theta - PI)) * beta_fn(x, 1.0 - beta)? * b_ang)
    }
}

/// Whether the half-aperture describes the slit disc, the edge of the sector family.
pub fn is_slit(theta: f64) -> bool {
    theta >= PI
}

/// `∫_{S_{θ,r}} v_{θ,r}^{−β} dx = C(θ, β) r^{2(1−β)}`.
///
/// Since `u ≥ v_{θ,r}` on a sector, this is an upper bound for `∫_{S_{θ,r}} u^{−β}`.
pub fn sector_beta_integral_exact(theta: f64, r: f64, beta: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("sector radius must be positive, got {r}"));
    }
    Ok(sector_constant(theta, beta)? * r.powf(2.0 * (1.0 - beta)))
}

/// Cone barrier over the axisymmetric cap of half-angle `theta` in `R^n`.
#[derive(Debug, Clone)]
pub struct ConeBarrier {
    pub r: f64,
    pub eig: CapEigenfunction,
}

/// Grid used for tabulated cap eigenfunctions.
const CAP_GRID: usize = 257;

impl ConeBarrier {
    pub fn new(n: usize, theta: f64, r: f64) -> Result<ConeBarrier> {
        check_sector(theta, r)?;
        Ok(ConeBarrier { r, eig: cap_eigen(n, theta, CAP_GRID)? })
    }

    /// `v(ρ, t)` at radius `rho` and colatitude `t` from the axis.
    pub fn eval(&self, rho: f64, t: f64) -> Result<f64> {
        let th = self.eig.theta;
        if !(rho >= 0.0) || rho > self.r * (1.0 + EDGE_TOL) || !(t >= 0.0 && t <= th * (1.0 + EDGE_TOL)) {
            return domain(format!("point (rho={rho}, t={t}) lies outside the cone of half-angle {th}"));
        }
        let phi = self.eig.eval(&[t.min(th)])?[0];
        let (rad, _) = radial_profile(self.eig.n as f64, self.eig.alpha, self.r, rho.min(self.r));
        Ok(rad * phi)
    }
}

/// Cone barrier `v_{θ,r}(ρ, t)` in `R^n` (builds the cap eigenfunction on every call;
/// use [`ConeBarrier`] for repeated evaluation).
pub fn cone_barrier(n: usize, theta: f64, r: f64, rho: f64, t: f64) -> Result<f64> {
    ConeBarrier::new(n, theta, r)?.eval(rho, t)
}

/// Constant `c_n(G, β)` of the cone integral for the cap of half-angle `theta`.
pub fn cone_constant(n: usize, theta: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let ce = corner_exponent(n, theta)?;
    let nf = n as f64;
    let m = nf - 2.0 * beta;
    let (a, lam) = (ce.alpha, ce.lambda);
    if (a - 2.0).abs() <= BRANCH_TOL {
        return Ok(m.powf(beta - 1.0) * (nf + 2.0).powf(beta) * gamma_fn(1.0 - beta)?);
    }
    if a > 2.0 {
        Ok((lam - 2.0 * nf).powf(beta) / (a - 2.0) * beta_fn(m / (a - 2.0), 1.0 - beta)?)
    } else {
        Ok((2.0 * nf - lam).powf(beta) / (2.0 - a) * beta_fn((nf - a * beta) / (2.0 - a), 1.0 - beta)?)
    }
}

/// `∫_{S_{θ,r}} v^{−β} = c_n r^{n−2β} ∫_G φ^{−β}` in `R^n`.
pub fn cone_beta_integral_exact(n: usize, theta: f64, r: f64, beta: f64) -> Result<f64> {
    check_sector(theta, r)?;
    let eig = cap_eigen(n, theta, CAP_GRID)?;
    Ok(cone_constant(n, theta, beta)? * r.powf(n as f64 - 2.0 * beta) * cap_neg_power_integral(&eig, beta)?)
}

/// Torsion function `(R² − |x|²)/(2n)` of the ball of radius `radius` in `R^n`, `n = x.len()`.
pub fn disk_solution(radius: f64, x: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < 1 || !(radius > 0.0) {
        return invalid(format!("disk solution needs a point and a positive radius (n={n}, R={radius})"));
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    if r2.sqrt() > radius * (1.0 + EDGE_TOL) {
        return domain(format!("point {x:?} lies outside the ball of radius {radius}"));
    }
    Ok(((radius * radius - r2) / (2.0 * n as f64)).max(0.0))
}

/// `∫_{B_R} u^{−β}` for the torsion function of the ball in `R^n`.
pub fn disk_beta_integral_exact(n: usize, radius: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if n < 1 || !(radius > 0.0) {
        return invalid(format!("need n >= 1 and a positive radius (n={n}, R={radius})"));
    }
    let nf = n as f64;
    Ok((2.0 * nf).powf(beta) * sphere_area(n - 1) * radius.powf(nf - 2.0 * beta) * beta_fn(0.5 * nf, 1.0 - beta)? / 2.0)
}

/// `½ y (x tan θ − y)` on the wedge `{0 < y < x tan θ}` of opening `θ ∈ (0, π/2)`.
///
/// `−Δ = 1` and the barrier vanishes on both sides, so it bounds from above the
/// torsion function of any domain contained in the wedge.
pub fn triangle_barrier(theta: f64, x: f64, y: f64) -> Result<f64> {
    Ok(triangle_barrier_value(theta, x, y)?.value)
}

pub fn triangle_barrier_value(theta: f64, x: f64, y: f64) -> Result<BarrierValue> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return domain(format!("wedge opening must lie in (0, pi/2), got {theta}"));
    }
    let t = theta.tan();
    let top = x * t;
    let tol = EDGE_TOL * (x.abs() + y.abs()).max(1.0);
    if !(y >= -tol && y <= top + tol) {
        return domain(format!("point ({x}, {y}) lies outside the wedge of opening {theta}"));
    }
    Ok(BarrierValue { value: (0.5 * y * (top - y)).max(0.0), gradient: Some([0.5 * y * t, 0.5 * top - y]) })
}

/// `∫ ṽ^{−β}` over the triangle `{0 < y < x tan θ, 0 < x < a}`.
pub fn triangle_beta_integral_exact(theta: f64, a: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(theta > 0.0 && theta < FRAC_PI_2) || !(a > 0.0) {
        return domain(format!("need opening in (0, pi/2) and a positive length, got ({theta}, {a})"));
    }
    let g = 2.0 - 2.0 * beta;
    Ok(2f64.powf(beta) * theta.tan().powf(1.0 - 2.0 * beta) * a.powf(g) / g * beta_fn(1.0 - beta, 1.0 - beta)?)
}

/// `½(ε² − x_n²)` on the slab `|x_n| ≤ ε`.
pub fn slab_barrier(epsilon: f64, xn: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return invalid(format!("slab half-width must be positive, got {epsilon}"));
    }
    if xn.abs() > epsilon * (1.0 + EDGE_TOL) {
        return domain(format!("|x_n| = {} exceeds the slab half-width {epsilon}", xn.abs()));
    }
    Ok((0.5 * (epsilon * epsilon - xn * xn)).max(0.0))
}

/// `∫_{−ε}^{ε} (½(ε² − t²))^{−β} dt = 2^β B(½, 1−β) ε^{1−2β}`.
pub fn slab_beta_integral_exact(epsilon: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(epsilon > 0.0) {
        return invalid(format!("slab half-width must be positive, got {epsilon}"));
    }
    Ok(2f64.powf(beta) * beta_fn(0.5, 1.0 - beta)? * epsilon.powf(1.0 - 2.0 * beta))
}

/// Largest `ε` for which the curvilinear barrier satisfies `−Δv ≥ 1`.
pub fn curvilinear_epsilon_bound(beta: f64) -> f64 {
    (2.0 * beta - 1.0) / (2.0 * (1.0 - beta)).sqrt()
}

fn check_curvilinear(beta: f64, epsilon: f64) -> Result<()> {
    if !(beta > 0.5 && beta < 1.0) {
        return domain(format!("beta must lie in (1/2, 1), got {beta}"));
    }
    let bound = curvilinear_epsilon_bound(beta);
    if !(epsilon > 0.0) || epsilon > bound {
        return invalid(format!(
            "epsilon = {epsilon} is not admissible for beta = {beta}: need 0 < epsilon <= {bound}"
        ));
    }
    Ok(())
}

/// `y(ε x^{1/(2β−1)} − y)` on `{0 < x < 1, 0 < y < ε x^{1/(2β−1)}}`.
pub fn curvilinear_barrier(beta: f64, epsilon: f64, x: f64, y: f64) -> Result<f64> {
    check_curvilinear(beta, epsilon)?;
    let tol = EDGE_TOL;
    if !(x >= 0.0 && x <= 1.0 + tol) {
        return domain(format!("x = {x} lies outside [0, 1]"));
    }
    let top = epsilon * x.max(0.0).powf(1.0 / (2.0 * beta - 1.0));
    if !(y >= -tol * top.max(1e-300) && y <= top * (1.0 + tol)) {
        return domain(format!("point ({x}, {y}) lies outside the curvilinear triangle"));
    }
    Ok((y * (top - y)).max(0.0))
}

/// `∫_{x>δ} v^{−β} = ε^{1−2β} B(1−β, 1−β) log(1/δ)`.
pub fn curvilinear_beta_integral_truncated(beta: f64, epsilon: f64, delta: f64) -> Result<f64> {
    check_curvilinear(beta, epsilon)?;
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("truncation must lie in (0, 1), got {delta}"));
    }
    Ok(epsilon.powf(1.0 - 2.0 * beta) * beta_fn(1.0 - beta, 1.0 - beta)? * (1.0 / delta).ln())
}

/// `ε²F(x_n)² − |x′|²` on the cusp; `x = (x′, x_n)`.
pub fn cusp_barrier(profile: &CuspProfile, x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return invalid("cusp points need at least two coordinates");
    }
    let (xp, xn) = x.split_at(x.len() - 1);
    let t = xn[0];
    if !(t >= 0.0 && t <= profile.eta * (1.0 + EDGE_TOL)) {
        return domain(format!("height {t} lies outside [0, eta]"));
    }
    let w = profile.half_width(t.min(profile.eta));
    let r2: f64 = xp.iter().map(|v| v * v).sum();
    if r2.sqrt() > w * (1.0 + 1e-9) + 1e-300 {
        return domain(format!("point {x:?} lies outside the cusp"));
    }
    Ok((w * w - r2).max(0.0))
}

/// `−Δ` of the cusp barrier in `R^n`: `2(n−1) − ε²(F²)″(x_n)`.
pub fn cusp_barrier_neg_laplacian(profile: &CuspProfile, n: usize, t: f64) -> f64 {
    let e2 = profile.epsilon * profile.epsilon;
    let f2pp = match &profile.family {
        CuspFamily::Power { p } => 2.0 * p * (2.0 * p - 1.0) * t.powf(2.0 * p - 2.0),
        CuspFamily::Tabulated { .. } => 2.0 * profile.df(t).powi(2),
    };
    2.0 * (n as f64 - 1.0) - e2 * f2pp
}

/// `∫_{δ<x_n<η} v^{−β}` over the cusp in `R^n`:
/// `ε^{n−1−2β} · ½|S^{n−2}| B((n−1)/2, 1−β) · ∫_δ^η F^{n−1−2β}`.
///
/// Infinite (`+∞`) when `δ = 0` and the height integral diverges.
pub fn cusp_beta_integral_exact(profile: &CuspProfile, n: usize, beta: f64, delta: f64) -> Result<f64> {
    check_beta(beta)?;
    profile.validate()?;
    if n < 2 {
        return invalid(format!("dimension must be at least 2, got {n}"));
    }
    let eta = profile.eta;
    if !(delta >= 0.0 && delta < eta) {
        return domain(format!("truncation must lie in [0, eta), got {delta}"));
    }
    let q = n as f64 - 1.0 - 2.0 * beta;
    let cross = profile.epsilon.powf(q) * 0.5 * sphere_area(n - 2) * beta_fn(0.5 * (n as f64 - 1.0), 1.0 - beta)?;
    let height = match &profile.family {
        CuspFamily::Power { p } => {
            let e = p * q + 1.0;
            if delta == 0.0 && e <= 0.0 {
                f64::INFINITY
            } else if e.abs() < 1e-14 {
                (eta / delta).ln()
            } else {
                (eta.powf(e) - delta.powf(e)) / e
            }
        }
        CuspFamily::Tabulated { t, .. } => {
            if delta == 0.0 && q < 0.0 {
                return invalid("tabulated cusp integrals need delta > 0 when the exponent is negative");
            }
            let mut s = 0.0;
            for w in t.windows(2) {
                let (a, b) = (w[0].max(delta), w[1]);
                if b > a {
                    s += tanh_sinh(|x, _, _| profile.f(x).powf(q), a, b, 1e-12)?;
                }
            }
            s
        }
    };
    Ok(cross * height)
}

/// Tangent-disc barrier `v` and harmonic comparison `w` of the convex corner:
/// `v = ¼[r² tan²θ − (x₁ − r/cos θ)² − x₂²]`, `w = ρ^{π/2θ} cos(πω/2θ)`.
pub fn convex_corner_pair(theta: f64, r: f64, x: [f64; 2]) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return domain(format!("convex corner half-aperture must lie in (0, pi/2), got {theta}"));
    }
    check_sector(theta, r)?;
    let rho = x[0].hypot(x[1]);
    let omega = x[1].atan2(x[0]);
    if rho > r * (1.0 + EDGE_TOL) || (rho > 0.0 && omega.abs() > theta * (1.0 + EDGE_TOL)) {
        return domain(format!("point {x:?} lies outside the sector S({theta}, {r})"));
    }
    let c = r / theta.cos();
    let v = 0.25 * ((r * theta.tan()).powi(2) - (x[0] - c).powi(2) - x[1] * x[1]);
    let k = PI / (2.0 * theta);
    let w = rho.powf(k) * (k * omega.clamp(-theta, theta)).cos();
    Ok((v, w))
}

/// `sup_{|ω|<θ} 2θ² cos(πω/2θ)/(cos ω − cos θ)`, the sharpest `c` for a given `θ`.
pub fn convex_corner_ratio_sup(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return domain(format!("convex corner half-aperture must lie in (0, pi/2), got {theta}"));
    }
    let k = PI / (2.0 * theta);
    let g = |w: f64| {
        // cos ω − cos θ = 2 sin((θ+ω)/2) sin((θ−ω)/2)
        let den = 2.0 * (0.5 * (theta + w)).sin() * (0.5 * (theta - w)).sin();
        let num = (k * (theta - w)).sin();
        2.0 * theta * theta * num / den
    };
    let m = 400;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..m {
        let v = g(theta * i as f64 / m as f64);
        if v > best.1 {
            best = (i, v);
        }
    }
    // rim limit ω → θ
    let rim = PI * theta / theta.sin();
    let lo = theta * best.0.saturating_sub(1) as f64 / m as f64;
    let hi = (theta * (best.0 + 1) as f64 / m as f64).min(theta * (1.0 - 1e-12));
    let (_, peak) = crate::quad::golden_max(g, lo, hi, 1e-12 * theta);
    Ok(best.1.max(peak).max(rim))
}

/// `c^β θ^{−2β} (cos θ)^β r^{(π/2θ−2)β} ∫_{S_{θ,r}} w^{−β}`, an upper bound for
/// `∫_{S_{θ,r}} u^{−β}` at a convex corner whose tangent disc lies in the domain.
/// Requires `β < 4θ/π`.
pub fn convex_corner_bound(theta: f64, r: f64, beta: f64, c: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return domain(format!("convex corner half-aperture must lie in (0, pi/2), got {theta}"));
    }
    if !(beta < 4.0 * theta / PI) {
        return domain(format!("beta = {beta} must be below 4 theta / pi = {}", 4.0 * theta / PI));
    }
    if !(c > 0.0) || !(r > 0.0) {
        return invalid(format!("need positive constant and radius, got ({c}, {r})"));
    }
    let k = PI / (2.0 * theta);
    let pre = c.powf(beta) * theta.powf(-2.0 * beta) * theta.cos().powf(beta) * r.powf((k - 2.0) * beta);
    let w_int = beta_fn(0.5, 0.5 * (1.0 - beta))? * 4.0 * theta * theta / (PI * (4.0 * theta - PI * beta))
        * r.powf(2.0 - k * beta);
    Ok(pre * w_int)
}

/// Planar barriers with their natural domains, for pointwise comparisons.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlanarBarrier {
    /// Sector barrier, lower bound for `u` on sectors contained in the domain.
    Sector { theta: f64, r: f64 },
    /// Wedge barrier of opening `theta`, upper bound for domains inside the wedge.
    Triangle { theta: f64 },
    /// Ball torsion function centred at `center`.
    Disk { center: [f64; 2], radius: f64 },
    /// Slab `|y| < epsilon`.
    Slab { epsilon: f64 },
}

impl PlanarBarrier {
    /// Value and gradient at a point in local coordinates.
    pub fn eval(&self, p: [f64; 2]) -> Result<BarrierValue> {
        match *self {
            PlanarBarrier::Sector { theta, r } => sector_barrier_value(theta, r, p[0].hypot(p[1]), p[1].atan2(p[0])),
            PlanarBarrier::Triangle { theta } => triangle_barrier_value(theta, p[0], p[1]),
            PlanarBarrier::Disk { center, radius } => {
                let d = [p[0] - center[0], p[1] - center[1]];
                let value = disk_solution(radius, &d)?;
                Ok(BarrierValue { value, gradient: Some([-0.5 * d[0], -0.5 * d[1]]) })
            }
            PlanarBarrier::Slab { epsilon } => {
                Ok(BarrierValue { value: slab_barrier(epsilon, p[1])?, gradient: Some([0.0, -p[1]]) })
            }
        }
    }

    /// `−Δ` of the barrier at `p`.
    pub fn neg_laplacian(&self, p: [f64; 2]) -> f64 {
        match *self {
            PlanarBarrier::Sector { theta, .. } => (PI * p[1].atan2(p[0]) / (2.0 * theta)).cos(),
            _ => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_neg_laplacian(f: &dyn Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
        -(f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h)
    }

    #[test]
    fn sector_barrier_examples() {
        let v = sector_barrier(FRAC_PI_4, 1.0, 0.5, 0.0).unwrap();
        assert!((v - 0.25 / 4.0 * 2f64.ln()).abs() < 1e-15);
        assert!((v - 0.0433217).abs() < 1e-7);
        for th in [0.3, 1.0, 2.0, 3.0] {
            assert!(sector_barrier(th, 2.0, 2.0 * (1.0 - 1e-15), 0.0).unwrap().abs() < 1e-12);
            assert!(sector_barrier(th, 2.0, 1.0, th).unwrap().abs() < 1e-12);
            assert!(sector_barrier(th, 2.0, 1.0, -th).unwrap().abs() < 1e-12);
        }
        assert!(sector_barrier(1.0, 1.0, 1.5, 0.0).is_err());
        assert!(sector_barrier(1.0, 1.0, 0.5, 1.2).is_err());
    }

    #[test]
    fn sector_barrier_solves_its_equation() {
        for th in [0.4, FRAC_PI_4, FRAC_PI_4 + 1e-6, 1.2, 2.5] {
            let f = |x: f64, y: f64| sector_barrier(th, 1.0, x.hypot(y), y.atan2(x)).unwrap();
            for (rho, om) in [(0.3, 0.0), (0.6, 0.3 * th), (0.8, -0.6 * th)] {
                let (x, y) = (rho * f64::cos(om), rho * f64::sin(om));
                let lap = fd_neg_laplacian(&f, x, y, 1e-4);
                assert!((lap - (PI * om / (2.0 * th)).cos()).abs() < 1e-4, "theta={th}: {lap}");
            }
        }
    }

    #[test]
    fn sector_gradient_matches_differences() {
        let (th, r) = (0.9, 1.3);
        let p: [f64; 2] = [0.5, 0.2];
        let g = sector_barrier_value(th, r, p[0].hypot(p[1]), p[1].atan2(p[0])).unwrap().gradient.unwrap();
        let f = |x: f64, y: f64| sector_barrier(th, r, x.hypot(y), y.atan2(x)).unwrap();
        let h = 1e-6;
        let gx = (f(p[0] + h, p[1]) - f(p[0] - h, p[1])) / (2.0 * h);
        let gy = (f(p[0], p[1] + h) - f(p[0], p[1] - h)) / (2.0 * h);
        assert!((g[0] - gx).abs() < 1e-8 && (g[1] - gy).abs() < 1e-8);
    }

    #[test]
    fn sector_constant_middle_line() {
        let c = sector_constant(FRAC_PI_4, 0.5).unwrap();
        let expected = PI.sqrt() * beta_fn(0.5, 0.25).unwrap();
        assert!((c - expected).abs() < 1e-12 * expected);
        for beta in [0.25, 0.5, 0.75] {
            let mid = sector_constant(FRAC_PI_4, beta).unwrap();
            // the symmetric mean cancels the first-order term of the one-sided values
            let lo = sector_constant(FRAC_PI_4 - 1e-4, beta).unwrap();
            let hi = sector_constant(FRAC_PI_4 + 1e-4, beta).unwrap();
            assert!((0.5 * (lo + hi) - mid).abs() < 1e-6 * mid, "{lo} {hi} vs {mid}");
            for th in [FRAC_PI_4 - 1e-7, FRAC_PI_4 + 1e-7] {
                let side = sector_constant(th, beta).unwrap();
                assert!((side - mid).abs() < 1e-6 * mid, "{side} vs {mid}");
            }
        }
    }

    #[test]
    fn sector_constant_small_angle_band() {
        // C θ^{2β−1} → (π/2)^{2β} B(½, (1−β)/2) / (π(1−β)) as θ → 0
        for beta in [0.25, 0.5, 0.75] {
            let limit = (0.5 * PI).powf(2.0 * beta) * beta_fn(0.5, 0.5 * (1.0 - beta)).unwrap() / (PI * (1.0 - beta));
            let scaled = sector_constant(1e-4, beta).unwrap() * 1e-4f64.powf(2.0 * beta - 1.0);
            assert!((scaled - limit).abs() < 1e-3 * limit, "{scaled} vs {limit}");
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for i in 1..=200 {
                let th = 0.01 + (PI - 0.01) * (i - 1) as f64 / 199.0;
                let v = sector_constant(th, beta).unwrap() * th.powf(2.0 * beta - 1.0);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            assert!(lo > 0.1 && hi < 1e3, "beta={beta}: [{lo}, {hi}]");
        }
    }

    #[test]
    fn sector_integral_scaling_and_small_beta() {
        let a = sector_beta_integral_exact(1.0, 1.0, 0.3).unwrap();
        let b = sector_beta_integral_exact(1.0, 2.0, 0.3).unwrap();
        assert!((b / a - 2f64.powf(1.4)).abs() < 1e-13);
        let small = sector_beta_integral_exact(1.0, 1.5, 1e-9).unwrap();
        assert!((small - 1.0 * 2.25).abs() < 1e-6);
    }

    #[test]
    fn cone_constant_reduces_to_sector_constant() {
        for th in [0.4, 1.0, 2.0] {
            for beta in [0.25, 0.6] {
                let eig = cap_eigen(2, th, 129).unwrap();
                let c = cone_constant(2, th, beta).unwrap() * cap_neg_power_integral(&eig, beta).unwrap();
                let s = sector_constant(th, beta).unwrap();
                assert!((c - s).abs() < 1e-8 * s, "theta={th}, beta={beta}: {c} vs {s}");
            }
        }
    }

    #[test]
    fn cone_constant_log_branch() {
        let th = (1.0 / 3f64.sqrt()).acos();
        let beta = 0.4;
        let c = cone_constant(3, th, beta).unwrap();
        let expected = (3.0 - 2.0 * beta).powf(beta - 1.0) * 5f64.powf(beta) * gamma_fn(1.0 - beta).unwrap();
        assert!((c - expected).abs() < 1e-6 * expected, "{c} vs {expected}");
    }

    #[test]
    fn cone_barrier_vanishes_and_scales() {
        let cb = ConeBarrier::new(3, 1.0, 1.0).unwrap();
        assert!(cb.eval(0.5, 1.0).unwrap().abs() < 1e-9);
        assert!(cb.eval(1.0, 0.2).unwrap().abs() < 1e-14);
        assert!(cb.eval(0.5, 0.2).unwrap() > 0.0);
        let a = cone_beta_integral_exact(3, 1.0, 1.0, 0.5).unwrap();
        let b = cone_beta_integral_exact(3, 1.0, 2.0, 0.5).unwrap();
        assert!((b / a - 4.0).abs() < 1e-12);
    }

    #[test]
    fn disk_examples() {
        assert_eq!(disk_solution(1.0, &[0.0, 0.0]).unwrap(), 0.25);
        assert_eq!(disk_solution(2.0, &[2.0, 0.0]).unwrap(), 0.0);
        assert!(disk_solution(1.0, &[1.0, 0.5]).is_err());
        let v = disk_beta_integral_exact(2, 1.0, 0.5).unwrap();
        assert!((v - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn triangle_and_slab_examples() {
        assert!((triangle_barrier(FRAC_PI_4, 1.0, 0.5).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(triangle_barrier(0.5, 1.0, 0.0).unwrap(), 0.0);
        assert!(triangle_barrier(0.5, 1.0, 0.5f64.tan()).unwrap().abs() < 1e-16);
        assert!(triangle_barrier(0.5, 1.0, 0.9).is_err());
        let f = |x: f64, y: f64| 0.5 * y * (x * 0.7f64.tan() - y);
        assert!((fd_neg_laplacian(&f, 1.0, 0.3, 1e-3) - 1.0).abs() < 1e-6);
        assert!((slab_barrier(0.2, 0.0).unwrap() - 0.02).abs() < 1e-17);
        assert!(slab_barrier(0.2, 0.3).is_err());
    }

    #[test]
    fn curvilinear_examples() {
        let (beta, eps) = (0.75, 0.3);
        assert_eq!(curvilinear_barrier(beta, eps, 0.5, 0.0).unwrap(), 0.0);
        let x: f64 = 0.6;
        let top = eps * x * x;
        let v = curvilinear_barrier(beta, eps, x, 0.5 * top).unwrap();
        assert!((v - eps * eps * x.powi(4) / 4.0).abs() < 1e-16);
        let bound = curvilinear_epsilon_bound(beta);
        assert!((bound * bound - 0.25 / 0.5).abs() < 1e-15);
        assert!(curvilinear_barrier(beta, 1.01 * bound, 0.5, 0.01).is_err());
    }

    #[test]
    fn cusp_examples() {
        let prof = CuspProfile::power(2.0, 0.1, 1.0).unwrap();
        let t: f64 = 0.7;
        let w = 0.1 * t * t;
        assert!(cusp_barrier(&prof, &[w, t]).unwrap().abs() < 1e-18);
        assert!((cusp_barrier(&prof, &[0.0, t]).unwrap() - w * w).abs() < 1e-18);
        for i in 1..=100 {
            let t = i as f64 / 100.0;
            assert!(cusp_barrier_neg_laplacian(&prof, 2, t) > 1.0);
        }
        assert!(cusp_barrier(&prof, &[0.1, 0.5]).is_err());
    }

    #[test]
    fn convex_corner_examples() {
        let (th, r) = (0.6, 0.8);
        let (_, w) = convex_corner_pair(th, r, [0.5 * th.cos(), 0.5 * th.sin()]).unwrap();
        assert!(w.abs() < 1e-15);
        // tangent circle point inside the sector
        let c = r / th.cos();
        let rad = r * th.tan();
        let q = [c - rad, 0.0];
        let (v, _) = convex_corner_pair(th, r, q).unwrap();
        assert!(v.abs() < 1e-15);
        for th in [0.1, 0.5, 1.0, 1.5] {
            let s = convex_corner_ratio_sup(th).unwrap();
            assert!(s <= CONVEX_CORNER_C * (1.0 + 1e-12), "{th}: {s}");
        }
    }

    #[test]
    fn convex_corner_constant_calibration() {
        let mut best = 0.0f64;
        for i in 1..4000 {
            let th = FRAC_PI_2 * i as f64 / 4000.0;
            best = best.max(convex_corner_ratio_sup(th).unwrap());
        }
        assert!(best <= CONVEX_CORNER_C && best > CONVEX_CORNER_C * (1.0 - 1e-3), "{best}");
    }
}

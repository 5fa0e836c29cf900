//! Integrals of powers of the boundary distance `δ` and the collar profile
//! `ω_α(r) = |{δ < r}| / r^α`.

use super::linear::linear_power_integral;
use crate::error::{domain, Error, Result};
use crate::geometry::clip::clip_affine;
use crate::geometry::{convex_descriptors, inner_offset_area, Polygon};
use crate::quad::golden_max;
use rayon::prelude::*;

/// Grid resolution per axis for non-convex collar areas (before supersampling).
pub const GRID_RESOLUTION: usize = 2048;
/// Points of the log grid in the coarea right-hand side.
pub const COAREA_POINTS: usize = 512;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DistanceProfile {
    pub alpha: f64,
    pub radii: Vec<f64>,
    pub omega_values: Vec<f64>,
    /// True when the collar areas are exact (convex input).
    pub exact: bool,
    /// `α ≥ 1`: `∫δ^{−α}` diverges on any polygon.
    pub divergence_expected: bool,
}

/// Sorted boundary distances at the sample points of a supersampled grid.
struct GridSamples {
    sorted: Vec<f32>,
    cell_area: f64,
}

impl GridSamples {
    fn new(poly: &Polygon) -> GridSamples {
        let (lo, hi) = poly.bounding_box();
        let n = 2 * GRID_RESOLUTION;
        let dx = (hi[0] - lo[0]) / n as f64;
        let dy = (hi[1] - lo[1]) / n as f64;
        let mut sorted: Vec<f32> = (0..n)
            .into_par_iter()
            .flat_map_iter(|j| {
                let y = lo[1] + (j as f64 + 0.5) * dy;
                (0..n).filter_map(move |i| {
                    let x = [lo[0] + (i as f64 + 0.5) * dx, y];
                    poly.contains(x).then(|| poly.distance(x) as f32)
                })
            })
            .collect();
        sorted.par_sort_unstable_by(f32::total_cmp);
        GridSamples { sorted, cell_area: dx * dy }
    }

    fn collar(&self, r: f64) -> f64 {
        let k = self.sorted.partition_point(|&d| (d as f64) < r);
        k as f64 * self.cell_area
    }

    fn resolution(&self) -> f64 {
        self.cell_area.sqrt()
    }
}

enum Collar<'a> {
    Convex(&'a Polygon),
    Grid(GridSamples),
}

impl Collar<'_> {
    fn of(poly: &Polygon) -> Collar<'_> {
        if poly.is_convex() {
            Collar::Convex(poly)
        } else {
            Collar::Grid(GridSamples::new(poly))
        }
    }

    fn area(&self, r: f64) -> f64 {
        match self {
            Collar::Convex(p) => p.area() - inner_offset_area(p, r),
            Collar::Grid(g) => g.collar(r),
        }
    }
}

/// `|{x ∈ Ω : δ(x) < r}|`; exact for convex polygons, grid-counted otherwise.
pub fn collar_area(poly: &Polygon, r: f64) -> f64 {
    Collar::of(poly).area(r)
}

pub fn omega_profile(poly: &Polygon, alpha: f64, radii: &[f64]) -> Result<DistanceProfile> {
    if !(alpha >= 0.0) {
        return domain(format!("alpha must be non-negative, got {alpha}"));
    }
    if radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be positive and increasing".into()));
    }
    let collar = Collar::of(poly);
    let omega_values = radii.iter().map(|&r| collar.area(r) / r.powf(alpha)).collect();
    Ok(DistanceProfile {
        alpha,
        radii: radii.to_vec(),
        omega_values,
        exact: matches!(collar, Collar::Convex(_)),
        divergence_expected: alpha >= 1.0,
    })
}

/// `∫_{cell_i ∩ {ℓ_i ≤ t}} ℓ_i^{−α}` summed over the nearest-edge cells of a
/// convex polygon, where `ℓ_i` is the distance to the line of edge `i`.
fn convex_cells_integral(poly: &Polygon, alpha: f64, t: f64) -> Result<f64> {
    let n = poly.len();
    let scale = poly.diameter();
    let ztol = 1e-14 * scale;
    let sliver = 1e-14 * scale * scale;
    let mut total = 0.0;
    for i in 0..n {
        let ell = |x: [f64; 2]| poly.edge_line_distance(i, x);
        let mut cell: Vec<[f64; 3]> = poly.vertices().iter().map(|&p| [p[0], p[1], ell(p)]).collect();
        for j in (0..n).filter(|&j| j != i) {
            if cell.len() < 3 {
                break;
            }
            let g: Vec<f64> = cell.iter().map(|v| poly.edge_line_distance(j, [v[0], v[1]]) - v[2]).collect();
            cell = clip_affine(&cell, &g).0;
        }
        if t.is_finite() && cell.len() >= 3 {
            let g: Vec<f64> = cell.iter().map(|v| t - v[2]).collect();
            cell = clip_affine(&cell, &g).0;
        }
        if cell.len() < 3 {
            continue;
        }
        let apex = (0..cell.len()).min_by(|&a, &b| cell[a][2].total_cmp(&cell[b][2])).unwrap();
        let m = cell.len();
        for k in 1..m - 1 {
            let (a, b, c) = (cell[apex], cell[(apex + k) % m], cell[(apex + k + 1) % m]);
            let p = [[a[0], a[1]], [b[0], b[1]], [c[0], c[1]]];
            let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
            if area2.abs() <= sliver {
                continue;
            }
            let u = [a[2].max(0.0), b[2].max(0.0), c[2].max(0.0)];
            total += linear_power_integral(p, u, alpha, ztol)?;
        }
    }
    Ok(total)
}

/// `∫_Ω δ^{−α}`: exact cell quadrature for convex polygons, otherwise the
/// layer-cake form on the sampled collar with the linear small-`r` collar
/// `H¹(∂Ω)·r` below a few grid cells.  Infinite for `α ≥ 1`.
pub fn distance_integral(poly: &Polygon, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) {
        return domain(format!("alpha must be non-negative, got {alpha}"));
    }
    if alpha >= 1.0 {
        return Ok(f64::INFINITY);
    }
    if poly.is_convex() {
        return convex_cells_integral(poly, alpha, f64::INFINITY);
    }
    if alpha == 0.0 {
        return Ok(poly.area());
    }
    let g = GridSamples::new(poly);
    let r0 = 8.0 * g.resolution();
    let head = alpha * poly.perimeter() * r0.powf(1.0 - alpha) / (1.0 - alpha);
    // α∫_{r0}^{∞} r^{−α−1}|{δ<r}| dr = Σ over samples above r0 of (r0^{−α} − δ^{−α}) dA
    let above = g.sorted.partition_point(|&d| (d as f64) < r0);
    let rest: f64 =
        g.sorted[above..].iter().map(|&d| r0.powf(-alpha) - (d as f64).powf(-alpha)).sum::<f64>() * g.cell_area;
    let collar_r0 = g.collar(r0);
    // the layer-cake tail α∫_{r0}^∞ r^{−α−1}|{δ<r}| dr, split at the r0 collar
    let tail = collar_r0 * r0.powf(-alpha) + rest;
    Ok(head + tail)
}

/// `t^{−α}|Ω| + α∫_0^t ω_α(r)/r dr` minimised over `t`; an upper bound for
/// `∫_Ω δ^{−α}`.  Returns `(t, bound)`.
pub fn distance_integral_bound(poly: &Polygon, alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    let collar = Collar::of(poly);
    let area = poly.area();
    let t_max = poly.diameter();
    let f = |t: f64| -(t.powf(-alpha) * area + alpha * log_integral(&collar, alpha, t));
    let (ls, v) = golden_max(|s| f(s.exp()), (1e-6 * t_max).ln(), t_max.ln(), 1e-6);
    Ok((ls.exp(), -v))
}

/// `∫_0^t ω_α(r)/r dr` by composite Simpson in `log r` on [`COAREA_POINTS`]
/// intervals from `1e-9·t`, with the linear-collar tail below.
fn log_integral(collar: &Collar<'_>, alpha: f64, t: f64) -> f64 {
    let r0 = 1e-9 * t;
    let n = COAREA_POINTS;
    let step = (t / r0).ln() / n as f64;
    let omega = |r: f64| collar.area(r) / r.powf(alpha);
    let mut s = 0.0;
    for k in 0..=n {
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        s += w * omega(r0 * (step * k as f64).exp());
    }
    s * step / 3.0 + omega(r0) / (1.0 - alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CoareaReport {
    pub alpha: f64,
    pub t: f64,
    /// `∫_{δ<t} δ^{−α}` by exact cell quadrature.
    pub lhs: f64,
    /// `ω_α(t) + α∫_0^t ω_α(r)/r dr`.
    pub rhs: f64,
    /// `|lhs − rhs| / |lhs|`.
    pub gap: f64,
}

/// Both sides of the coarea identity on the collar `{δ < t}` of a convex polygon.
pub fn coarea_check(poly: &Polygon, alpha: f64, t: f64) -> Result<CoareaReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    if !poly.is_convex() {
        return Err(Error::NotConvex);
    }
    let inr = convex_descriptors(poly)?.inradius;
    if !(t > 0.0 && t < inr) {
        return domain(format!("t must lie in (0, inradius = {inr}), got {t}"));
    }
    let lhs = convex_cells_integral(poly, alpha, t)?;
    let collar = Collar::Convex(poly);
    let rhs = collar.area(t) / t.powf(alpha) + alpha * log_integral(&collar, alpha, t);
    Ok(CoareaReport { alpha, t, lhs, rhs, gap: (lhs - rhs).abs() / lhs.abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AhlforsReport {
    pub alpha: f64,
    pub integral: f64,
    pub area: f64,
    pub perimeter: f64,
    /// `∫δ^{−α} / (|Ω|^{1−α} H¹(∂Ω)^α)`.
    pub ratio: f64,
    /// `|Ω| ≤ H¹(∂Ω)²/(4π)`.
    pub isoperimetric_ok: bool,
}

pub fn ahlfors_bound_check(poly: &Polygon, alpha: f64) -> Result<AhlforsReport> {
    if !(alpha >= 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in [0, 1), got {alpha}"));
    }
    let integral = distance_integral(poly, alpha)?;
    let area = poly.area();
    let perimeter = poly.perimeter();
    Ok(AhlforsReport {
        alpha,
        integral,
        area,
        perimeter,
        ratio: integral / (area.powf(1.0 - alpha) * perimeter.powf(alpha)),
        isoperimetric_ok: area <= perimeter * perimeter / (4.0 * std::f64::consts::PI),
    })
}

/// Smallest constant making the bound hold over the family, with each report.
pub fn ahlfors_family_constant(polys: &[Polygon], alpha: f64) -> Result<(f64, Vec<AhlforsReport>)> {
    let reports = polys.iter().map(|p| ahlfors_bound_check(p, alpha)).collect::<Result<Vec<_>>>()?;
    let c = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok((c, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_l_shape, make_rectangle, make_regular_polygon, unit_square};

    #[test]
    fn square_collar_and_alpha_zero() {
        let sq = unit_square();
        for r in [0.01, 0.1, 0.3, 0.49] {
            assert!((collar_area(&sq, r) - (4.0 * r - 4.0 * r * r)).abs() < 1e-14);
        }
        assert!((distance_integral(&sq, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(distance_integral(&sq, 1.0).unwrap(), f64::INFINITY);
        let prof = omega_profile(&sq, 1.2, &[0.1, 0.2]).unwrap();
        assert!(prof.divergence_expected && prof.exact);
    }

    #[test]
    fn square_distance_integral_closed_form() {
        // ∫_0^{1/2} r^{−α}·4(1−2r) dr
        let a: f64 = 0.5;
        let exact = 4.0 * (0.5f64.powf(1.0 - a) / (1.0 - a) - 2.0 * 0.5f64.powf(2.0 - a) / (2.0 - a));
        assert!((distance_integral(&unit_square(), a).unwrap() - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn coarea_square_and_hexagon() {
        let rep = coarea_check(&unit_square(), 0.5, 0.25).unwrap();
        assert!((rep.lhs - 10.0 / 3.0).abs() < 1e-12, "{rep:?}");
        assert!((rep.rhs - 10.0 / 3.0).abs() < 1e-3 * 10.0 / 3.0, "{rep:?}");
        let hex = make_regular_polygon(6, 1.0).unwrap();
        let rep = coarea_check(&hex, 0.7, 0.2).unwrap();
        assert!(rep.gap <= 1e-3, "{rep:?}");
        assert!(coarea_check(&unit_square(), 0.5, 0.6).is_err());
        assert!(coarea_check(&make_l_shape(), 0.5, 0.1).is_err());
    }

    #[test]
    fn bound_dominates_integral() {
        let hex = make_regular_polygon(6, 1.0).unwrap();
        let v = distance_integral(&hex, 0.4).unwrap();
        let (_, b) = distance_integral_bound(&hex, 0.4).unwrap();
        assert!(b >= v * (1.0 - 1e-6));
    }

    #[test]
    fn ahlfors_scaling_and_thin_rectangles() {
        let a = 0.6;
        let base = ahlfors_bound_check(&unit_square(), a).unwrap();
        let big = ahlfors_bound_check(&unit_square().scaled(3.0), a).unwrap();
        assert!((big.ratio - base.ratio).abs() < 1e-12 * base.ratio);
        assert!((big.integral - 3f64.powf(2.0 - a) * base.integral).abs() < 1e-12 * big.integral);
        let fam: Vec<Polygon> = [1.0, 0.1, 0.01].iter().map(|&e| make_rectangle(0.0, 0.0, 1.0, e).unwrap()).collect();
        let (c, reps) = ahlfors_family_constant(&fam, a).unwrap();
        assert!(reps.iter().all(|r| r.ratio <= c && r.isoperimetric_ok));
        assert!(ahlfors_bound_check(&unit_square(), 0.0).unwrap().isoperimetric_ok);
    }

    #[test]
    fn grid_collar_on_l_shape() {
        // perimeter 8; five convex right corners each remove r², the reflex corner adds a quarter disc
        let l = make_l_shape();
        let r = 0.1;
        let got = collar_area(&l, r);
        let exact = 8.0 * r - 5.0 * r * r + std::f64::consts::FRAC_PI_4 * r * r;
        assert!((got - exact).abs() < 2e-3 * l.area(), "{got} vs {exact}");
    }
}

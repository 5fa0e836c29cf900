//! Inner offsets and descriptors of convex polygons.

use super::clip::{clip_halfplane, signed_area};
use super::polygon::{norm, sub, Polygon};
use crate::error::{Error, Result};
use crate::Point;

/// Inradius, circumradius and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConvexDescriptors {
    pub inradius: f64,
    pub circumradius: f64,
    pub eccentricity: f64,
    pub incenter: Point,
    pub circumcenter: Point,
}

fn require_convex(poly: &Polygon) -> Result<()> {
    if poly.is_convex() {
        Ok(())
    } else {
        Err(Error::NotConvex)
    }
}

/// `{x ∈ poly : dist(x, line_i) ≥ r for every edge i}`; for convex input this
/// is `{δ ≥ r}`.  Empty when `r` exceeds the inradius.
pub fn inner_offset(poly: &Polygon, r: f64) -> Vec<Point> {
    let mut cur: Vec<Point> = poly.vertices().to_vec();
    for i in 0..poly.len() {
        if cur.is_empty() {
            break;
        }
        let (a, _) = poly.edge(i);
        let nrm = poly.inward_normal(i);
        // n·(x − a) − r ≥ 0
        cur = clip_halfplane(&cur, nrm, -(nrm[0] * a[0] + nrm[1] * a[1]) - r);
    }
    cur
}

/// Area of `{δ ≥ r}` for a convex polygon.
pub fn inner_offset_area(poly: &Polygon, r: f64) -> f64 {
    let off = inner_offset(poly, r);
    if off.len() < 3 {
        0.0
    } else {
        signed_area(&off).max(0.0)
    }
}

/// Chebyshev centre and radius by bisection on the offset depth.
fn chebyshev(poly: &Polygon) -> (Point, f64) {
    let diam = poly.diameter();
    let mut lo = 0.0;
    let mut hi = diam;
    for _ in 0..200 {
        if hi - lo <= 1e-15 * diam {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inner_offset_area(poly, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let off = inner_offset(poly, lo);
    let c = if off.is_empty() {
        poly.vertex(0)
    } else {
        let k = off.len() as f64;
        [off.iter().map(|p| p[0]).sum::<f64>() / k, off.iter().map(|p| p[1]).sum::<f64>() / k]
    };
    // the depth of the returned centre is the inradius estimate
    let r = (0..poly.len()).map(|i| poly.edge_line_distance(i, c)).fold(f64::INFINITY, f64::min);
    (c, r.max(lo))
}

fn circle_two(a: Point, b: Point) -> (Point, f64) {
    let c = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    (c, 0.5 * norm(sub(a, b)))
}

fn circle_three(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let bx = b[0] - a[0];
    let by = b[1] - a[1];
    let cx = c[0] - a[0];
    let cy = c[1] - a[1];
    let d = 2.0 * (bx * cy - by * cx);
    if d == 0.0 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    Some(([a[0] + ux, a[1] + uy], ux.hypot(uy)))
}

/// Minimum enclosing circle of a point set (incremental algorithm).
pub fn min_enclosing_circle(points: &[Point]) -> (Point, f64) {
    let inside = |c: &(Point, f64), p: Point| norm(sub(p, c.0)) <= c.1 * (1.0 + 1e-14) + 1e-300;
    let mut circ = (points[0], 0.0);
    for i in 1..points.len() {
        if inside(&circ, points[i]) {
            continue;
        }
        circ = (points[i], 0.0);
        for j in 0..i {
            if inside(&circ, points[j]) {
                continue;
            }
            circ = circle_two(points[i], points[j]);
            for k in 0..j {
                if inside(&circ, points[k]) {
                    continue;
                }
                if let Some(c3) = circle_three(points[i], points[j], points[k]) {
                    circ = c3;
                }
            }
        }
    }
    circ
}

/// Inradius (Chebyshev ball), circumradius (smallest enclosing ball) and eccentricity.
pub fn convex_descriptors(poly: &Polygon) -> Result<ConvexDescriptors> {
    require_convex(poly)?;
    let (incenter, inradius) = chebyshev(poly);
    let (circumcenter, circumradius) = min_enclosing_circle(poly.vertices());
    Ok(ConvexDescriptors { inradius, circumradius, eccentricity: circumradius / inradius, incenter, circumcenter })
}

/// Whether a ball of radius `r` tangent to side `i` fits inside the convex polygon.
fn side_admits(poly: &Polygon, i: usize, r: f64, slack: f64) -> bool {
    // centres on the line at depth r from side i: x(t) = a + r·n + t·d
    let (a, b) = poly.edge(i);
    let nrm = poly.inward_normal(i);
    let len = norm(sub(b, a));
    let d = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
    let base = [a[0] + r * nrm[0], a[1] + r * nrm[1]];
    // the tangency point a + t·d must lie on the side itself
    let mut lo: f64 = 0.0;
    let mut hi: f64 = len;
    for j in 0..poly.len() {
        if j == i {
            continue;
        }
        let (aj, _) = poly.edge(j);
        let nj = poly.inward_normal(j);
        // nj·(base + t d − aj) ≥ r
        let c0 = nj[0] * (base[0] - aj[0]) + nj[1] * (base[1] - aj[1]) - r;
        let c1 = nj[0] * d[0] + nj[1] * d[1];
        if c1.abs() < 1e-15 {
            if c0 < -slack {
                return false;
            }
        } else if c1 > 0.0 {
            lo = lo.max(-c0 / c1);
        } else {
            hi = hi.min(-c0 / c1);
        }
    }
    lo <= hi + slack
}

/// Largest `R` such that every side is tangent to an inscribed ball of radius `R`.
pub fn max_admissible_radius(poly: &Polygon) -> Result<f64> {
    require_convex(poly)?;
    let diam = poly.diameter();
    let tol = 1e-9 * diam;
    let slack = 1e-13 * diam;
    let admits = |r: f64| (0..poly.len()).all(|i| side_admits(poly, i, r, slack));
    let mut lo = 0.0;
    let mut hi = chebyshev(poly).1 * (1.0 + 1e-12);
    if admits(hi) {
        return Ok(hi);
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if admits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon::{
        make_l_shape, make_rectangle, make_regular_polygon, make_truncated_triangle, unit_square,
    };
    use std::f64::consts::PI;

    #[test]
    fn square_descriptors() {
        let d = convex_descriptors(&unit_square()).unwrap();
        assert!((d.inradius - 0.5).abs() < 1e-12);
        assert!((d.circumradius - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((d.eccentricity - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn regular_and_thin_descriptors() {
        for n in [3, 5, 8, 64] {
            let d = convex_descriptors(&make_regular_polygon(n, 1.0).unwrap()).unwrap();
            let rc = 1.0 / (PI / n as f64).cos();
            assert!((d.inradius - 1.0).abs() < 1e-12, "n={n} {}", d.inradius);
            assert!((d.circumradius - rc).abs() < 1e-12);
        }
        let d = convex_descriptors(&make_rectangle(0.0, -0.1, 1.0, 0.1).unwrap()).unwrap();
        assert!((d.inradius - 0.1).abs() < 1e-12);
        assert!((d.circumradius - 0.26f64.sqrt()).abs() < 1e-14);
        assert!((d.eccentricity - 5.0990195135927845).abs() < 1e-9);
    }

    #[test]
    fn non_convex_rejected() {
        assert_eq!(convex_descriptors(&make_l_shape()), Err(Error::NotConvex));
        assert_eq!(max_admissible_radius(&make_l_shape()), Err(Error::NotConvex));
    }

    #[test]
    fn admissible_radius_examples() {
        assert!((max_admissible_radius(&unit_square()).unwrap() - 0.5).abs() < 1e-9);
        for n in [3, 6, 16] {
            let r = max_admissible_radius(&make_regular_polygon(n, 1.0).unwrap()).unwrap();
            assert!((r - 1.0).abs() < 1e-8, "n={n}: {r}");
        }
        // j = 4: the incircle touches the short top side, so R equals the inradius 3/8
        let t = make_truncated_triangle(4).unwrap();
        let r = max_admissible_radius(&t).unwrap();
        assert!((r - 0.375).abs() < 1e-8, "{r}");
        // beyond j = 6 the top side forces R = (1/j)/(√2 − 1) below the inradius
        for j in [8, 16, 64] {
            let t = make_truncated_triangle(j).unwrap();
            let r = max_admissible_radius(&t).unwrap();
            let inr = convex_descriptors(&t).unwrap().inradius;
            let exact = 1.0 / (j as f64 * (2f64.sqrt() - 1.0));
            assert!(r < inr - 1e-6, "j={j}: {r} vs {inr}");
            assert!((r - exact).abs() < 1e-8, "j={j}: {r} vs {exact}");
        }
    }

    #[test]
    fn square_offsets() {
        let sq = unit_square();
        for r in [0.05, 0.2, 0.45] {
            let band = 1.0 - inner_offset_area(&sq, r);
            assert!((band - (4.0 * r - 4.0 * r * r)).abs() < 1e-14);
        }
        assert_eq!(inner_offset_area(&sq, 0.6), 0.0);
    }
}

//! Simple polygons, distance to the boundary and elementary constructors.

use crate::error::{invalid, Result};
use crate::Point;
use std::f64::consts::PI;

/// Simple polygon with counter-clockwise vertex loop.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

/// Distance from `x` to the segment `[a, b]`.
pub fn segment_distance(a: Point, b: Point, x: Point) -> f64 {
    let d = sub(b, a);
    let w = sub(x, a);
    let l2 = dot(d, d);
    let t = if l2 > 0.0 { (dot(w, d) / l2).clamp(0.0, 1.0) } else { 0.0 };
    norm([w[0] - t * d[0], w[1] - t * d[1]])
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(sub(b, a), sub(c, a))
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

impl Polygon {
    /// Validate a vertex loop.  Clockwise input is reversed.
    pub fn new(vertices: Vec<Point>) -> Result<Polygon> {
        let n = vertices.len();
        if n < 3 {
            return invalid(format!("a polygon needs at least 3 vertices, got {n}"));
        }
        if vertices.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return invalid("polygon vertices must be finite");
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return invalid(format!("consecutive vertices {i} and {} coincide", (i + 1) % n));
            }
        }
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                if adjacent {
                    // adjacent edges may only share their common vertex
                    let (shared, other_a, other_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    let u = sub(other_a, shared);
                    let v = sub(other_b, shared);
                    if cross(u, v) == 0.0 && dot(u, v) > 0.0 {
                        return invalid(format!("edges {i} and {j} overlap"));
                    }
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return invalid(format!("edges {i} and {j} intersect; the polygon is not simple"));
                }
            }
        }
        let mut vertices = vertices;
        let area = super::clip::signed_area(&vertices);
        if area == 0.0 {
            return invalid("polygon has zero area");
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i+1`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        let (a, b) = self.edge(i);
        norm(sub(b, a))
    }

    pub fn area(&self) -> f64 {
        super::clip::signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len()).map(|i| self.edge_length(i)).sum()
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(norm(sub(v[i], v[j])));
            }
        }
        d
    }

    pub fn min_edge_length(&self) -> f64 {
        (0..self.len()).map(|i| self.edge_length(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// Interior angle at vertex `i`, in `(0, 2π)`.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.len();
        let p = self.vertex(i);
        let prev = self.vertex(i + n - 1);
        let next = self.vertex(i + 1);
        let a = sub(next, p);
        let b = sub(prev, p);
        let ang = cross(a, b).atan2(dot(a, b));
        if ang <= 0.0 {
            ang + 2.0 * PI
        } else {
            ang
        }
    }

    /// True when every interior angle is at most π.
    pub fn is_convex(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| orient(self.vertex(i + n - 1), self.vertex(i), self.vertex(i + 1)) >= 0.0)
    }

    /// Signed distance to the line through edge `i`, positive on the interior side.
    pub fn edge_line_distance(&self, i: usize, x: Point) -> f64 {
        let (a, b) = self.edge(i);
        let d = sub(b, a);
        cross(d, sub(x, a)) / norm(d)
    }

    /// Inward unit normal of edge `i`.
    pub fn inward_normal(&self, i: usize) -> Point {
        let (a, b) = self.edge(i);
        let d = sub(b, a);
        let l = norm(d);
        [-d[1] / l, d[0] / l]
    }

    /// Crossing-number point-in-polygon test (boundary points count as inside).
    pub fn contains(&self, x: Point) -> bool {
        let n = self.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            if segment_distance(a, b, x) == 0.0 {
                return true;
            }
            if (a[1] > x[1]) != (b[1] > x[1]) {
                let t = (x[1] - a[1]) / (b[1] - a[1]);
                if x[0] < a[0] + t * (b[0] - a[0]) {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Euclidean distance from `x` to the boundary polyline.
    pub fn distance(&self, x: Point) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                segment_distance(a, b, x)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the vertex nearest to `x`.
    pub fn nearest_vertex(&self, x: Point) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, p) in self.vertices.iter().enumerate() {
            let d = norm(sub(*p, x));
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    /// Image under `x ↦ s·x`.
    pub fn scaled(&self, s: f64) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|p| [s * p[0], s * p[1]]).collect() }
    }
}

/// Euclidean distance from `x` to the boundary of `poly`, inside or outside.
pub fn polygon_distance(poly: &Polygon, x: Point) -> f64 {
    poly.distance(x)
}

/// Regular `n`-gon with apothem `inradius`, centred at the origin, with the
/// midpoint of one edge on the positive x-axis.
pub fn make_regular_polygon(n: usize, inradius: f64) -> Result<Polygon> {
    if n < 3 {
        return invalid(format!("a regular polygon needs n >= 3, got {n}"));
    }
    if !(inradius > 0.0) || !inradius.is_finite() {
        return invalid(format!("inradius must be positive, got {inradius}"));
    }
    let nf = n as f64;
    let rc = inradius / (PI / nf).cos();
    let vertices = (0..n)
        .map(|k| {
            let a = (2 * k + 1) as f64 * PI / nf;
            [rc * a.cos(), rc * a.sin()]
        })
        .collect();
    Polygon::new(vertices)
}

/// Axis-parallel rectangle `(x0, x1) × (y0, y1)`.
pub fn make_rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Polygon> {
    if !(x1 > x0 && y1 > y0) {
        return invalid(format!("empty rectangle ({x0}, {x1}) x ({y0}, {y1})"));
    }
    Polygon::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
}

/// The unit square `(0, 1)²`.
pub fn unit_square() -> Polygon {
    make_rectangle(0.0, 0.0, 1.0, 1.0).expect("unit square is valid")
}

/// L-shaped hexagon `(0, 2)² ∖ [1, 2)²`.
pub fn make_l_shape() -> Polygon {
    Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]])
        .expect("L-shape is valid")
}

/// The triangle with vertices `(−1,0)`, `(1,0)`, `(0,1)` cut at height `1 − 1/j`.
pub fn make_truncated_triangle(j: usize) -> Result<Polygon> {
    if j < 2 {
        return invalid(format!("truncation index must be at least 2, got {j}"));
    }
    let c = 1.0 / j as f64;
    Polygon::new(vec![[-1.0, 0.0], [1.0, 0.0], [c, 1.0 - c], [-c, 1.0 - c]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_input() {
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        assert!(Polygon::new(vec![[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]).is_err());
        // bow tie
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).is_err());
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let p = Polygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(p.area() > 0.0);
    }

    #[test]
    fn square_distances() {
        let sq = unit_square();
        assert_eq!(polygon_distance(&sq, [0.5, 0.5]), 0.5);
        assert_eq!(polygon_distance(&sq, [0.25, 0.5]), 0.25);
        assert_eq!(polygon_distance(&sq, [2.0, 0.5]), 1.0);
    }

    #[test]
    fn regular_polygon_convention() {
        let sq = make_regular_polygon(4, 1.0).unwrap();
        for v in sq.vertices() {
            assert!((norm(*v) - 2f64.sqrt()).abs() < 1e-15);
        }
        let hex = make_regular_polygon(6, 1.0).unwrap();
        assert!((norm(hex.vertex(0)) - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((polygon_distance(&hex, [0.0, 0.0]) - 1.0).abs() < 1e-15);
        // the midpoint of the last edge sits on the positive x-axis
        let (a, b) = hex.edge(5);
        assert!((0.5 * (a[1] + b[1])).abs() < 1e-15 && 0.5 * (a[0] + b[0]) > 0.0);
        let p64 = make_regular_polygon(64, 1.0).unwrap();
        assert!((norm(p64.vertex(0)) - 1.0 / (PI / 64.0).cos()).abs() < 1e-14);
        assert!(make_regular_polygon(2, 1.0).is_err());
    }

    #[test]
    fn angles_and_convexity() {
        let l = make_l_shape();
        assert!(!l.is_convex());
        assert!((l.interior_angle(3) - 1.5 * PI).abs() < 1e-14);
        assert!((l.interior_angle(0) - 0.5 * PI).abs() < 1e-14);
        assert!(unit_square().is_convex());
        assert!(l.contains([0.5, 1.5]) && !l.contains([1.5, 1.5]));
    }
}

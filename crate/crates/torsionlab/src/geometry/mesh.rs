//! Triangulations: corner-graded constrained Delaunay meshes of polygons,
//! structured ladder meshes for thin cuspidal regions, and uniform red refinement.

use super::polygon::{cross, norm, sub, Polygon};
use crate::error::{invalid, Error, Result};
use crate::Point;
use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};
use std::collections::HashMap;

type Cdt = ConstrainedDelaunayTriangulation<Point2<f64>>;

/// Triangulation of a domain together with boundary and corner bookkeeping.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TriMesh {
    pub nodes: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
    /// Nearest domain corner (vertex index of the polygon) for each node.
    pub corner_tag: Vec<Option<usize>>,
    /// Polygon vertex indices treated as corners and the grading depth used at each.
    pub corners: Vec<usize>,
    pub grading_depth: Vec<usize>,
    /// Nominal element size.
    pub h: f64,
    #[serde(skip)]
    pub polygon: Polygon,
}

/// Target size and corner grading.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeshParams {
    pub h: f64,
    pub q: f64,
    pub depth: usize,
}

impl MeshParams {
    pub fn new(h: f64, q: f64, depth: usize) -> MeshParams {
        MeshParams { h, q, depth }
    }

    fn check(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return invalid(format!("mesh size must be positive, got {}", self.h));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return invalid(format!("grading ratio must lie in (0, 1), got {}", self.q));
        }
        Ok(())
    }
}

fn tri_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * cross(sub(b, a), sub(c, a))
}

impl TriMesh {
    /// Assemble a mesh, orienting triangles positively and flagging boundary nodes.
    pub fn from_parts(
        polygon: &Polygon,
        nodes: Vec<Point>,
        mut triangles: Vec<[usize; 3]>,
        corners: &[usize],
        grading_depth: Vec<usize>,
        h: f64,
    ) -> Result<TriMesh> {
        for t in triangles.iter_mut() {
            let a = tri_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
            if a < 0.0 {
                t.swap(1, 2);
            } else if a == 0.0 || !a.is_finite() {
                return Err(Error::MeshingFailure(format!("degenerate triangle {t:?}")));
            }
        }
        let tol = 1e-12 * polygon.diameter();
        let boundary: Vec<bool> = nodes.iter().map(|p| polygon.distance(*p) <= tol).collect();
        let corner_tag = nodes
            .iter()
            .map(|p| {
                corners
                    .iter()
                    .map(|&c| (norm(sub(*p, polygon.vertex(c))), c))
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .map(|x| x.1)
            })
            .collect();
        Ok(TriMesh {
            nodes,
            triangles,
            boundary,
            corner_tag,
            corners: corners.to_vec(),
            grading_depth,
            h,
            polygon: polygon.clone(),
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_interior(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    pub fn vertices_of(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.vertices_of(t);
        tri_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Longest edge of triangle `t`.
    pub fn triangle_diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.vertices_of(t);
        norm(sub(a, b)).max(norm(sub(b, c))).max(norm(sub(c, a)))
    }

    /// Smallest interior angle of triangle `t`, in radians.
    pub fn triangle_min_angle(&self, t: usize) -> f64 {
        let p = self.vertices_of(t);
        (0..3)
            .map(|i| {
                let u = sub(p[(i + 1) % 3], p[i]);
                let v = sub(p[(i + 2) % 3], p[i]);
                cross(u, v).abs().atan2(u[0] * v[0] + u[1] * v[1])
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_angle(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_min_angle(t)).fold(f64::INFINITY, f64::min)
    }

    /// Longest edge among all triangles.
    pub fn max_diameter(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_diameter(t)).fold(0.0, f64::max)
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.vertices_of(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }
}

/// Positions along `[0, len]` for an edge whose start (end) is a graded corner.
fn edge_stations(len: f64, h: f64, q: f64, depth: usize, grade_start: bool, grade_end: bool) -> Vec<f64> {
    let hl = h.min(0.5 * len);
    let graded = |on: bool| -> Vec<f64> {
        if !on || depth == 0 {
            return Vec::new();
        }
        let mut v: Vec<f64> = (1..=depth).rev().map(|k| hl * q.powi(k as i32)).collect();
        v.retain(|&s| s < len / 3.0);
        v
    };
    let from_start = graded(grade_start);
    let from_end = graded(grade_end);
    let a = from_start.last().copied().unwrap_or(0.0);
    let b = len - from_end.last().copied().unwrap_or(0.0);
    let mut out = vec![0.0];
    out.extend(&from_start);
    let span = b - a;
    let pieces = if span > 0.0 { (span / h).ceil().max(1.0) as usize } else { 0 };
    for k in 1..pieces {
        out.push(a + span * k as f64 / pieces as f64);
    }
    if pieces > 0 && !from_end.is_empty() {
        out.push(b);
    }
    out.extend(from_end.iter().rev().skip(1).map(|s| len - s));
    out.retain(|&s| s > 0.0 && s < len);
    out.insert(0, 0.0);
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-14 * len);
    out
}

fn first_spacing(h: f64, len: f64, q: f64, depth: usize) -> f64 {
    let hl = h.min(0.5 * len);
    let mut s = hl;
    for k in 1..=depth {
        let v = hl * q.powi(k as i32);
        if v < len / 3.0 {
            s = v;
        }
    }
    s.min(len / 3.0)
}

/// Graded triangulation with every polygon vertex treated as a corner.
///
/// Requires `h` below the shortest edge.
pub fn triangulate(poly: &Polygon, h: f64, q: f64, depth: usize) -> Result<TriMesh> {
    if !(h < poly.min_edge_length()) {
        return invalid(format!("mesh size {h} must be below the shortest edge {}", poly.min_edge_length()));
    }
    let corners: Vec<usize> = (0..poly.len()).collect();
    triangulate_with_corners(poly, &corners, MeshParams::new(h, q, depth))
}

/// Graded triangulation where only the listed vertices receive corner grading;
/// the other vertices are samples of a curved boundary.
pub fn triangulate_with_corners(poly: &Polygon, corners: &[usize], params: MeshParams) -> Result<TriMesh> {
    params.check()?;
    let n = poly.len();
    let is_corner = {
        let mut v = vec![false; n];
        for &c in corners {
            if c >= n {
                return invalid(format!("corner index {c} out of range"));
            }
            v[c] = true;
        }
        v
    };
    let MeshParams { h, q, depth } = params;
    let mut pts: Vec<Point> = Vec::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut smallest = f64::INFINITY;
    for i in 0..n {
        let (a, b) = poly.edge(i);
        let len = norm(sub(b, a));
        let st = edge_stations(len, h, q, depth, is_corner[i], is_corner[(i + 1) % n]);
        let start = pts.len();
        for &s in &st {
            let t = s / len;
            pts.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
        for w in st.windows(2) {
            smallest = smallest.min(w[1] - w[0]);
        }
        smallest = smallest.min(len - st.last().copied().unwrap_or(0.0));
        for k in start..pts.len() {
            edges.push([k, k + 1]);
        }
    }
    let total = pts.len();
    if let Some(last) = edges.last_mut() {
        last[1] = 0;
    }
    for e in edges.iter_mut() {
        if e[1] == total {
            e[1] = 0;
        }
    }
    // an interior point on the bisector of each convex corner keeps the corner
    // triangles from having all three vertices on the boundary
    let mut extra: Vec<Point> = Vec::new();
    for &c in corners {
        let ang = poly.interior_angle(c);
        if ang >= std::f64::consts::PI {
            continue;
        }
        let p = poly.vertex(c);
        let l_out = poly.edge_length(c);
        let l_in = poly.edge_length(c + n - 1);
        let s = first_spacing(h, l_out, q, depth).min(first_spacing(h, l_in, q, depth));
        let u = sub(poly.vertex(c + 1), p);
        let v = sub(poly.vertex(c + n - 1), p);
        let (nu, nv) = (norm(u), norm(v));
        let bis = [u[0] / nu + v[0] / nv, u[1] / nu + v[1] / nv];
        let nb = norm(bis);
        let x = [p[0] + s * bis[0] / nb, p[1] + s * bis[1] / nb];
        if poly.contains(x) && poly.distance(x) > 1e-9 * s {
            extra.push(x);
        }
    }
    let mut cdt = Cdt::bulk_load_cdt(pts.iter().map(|p| Point2::new(p[0], p[1])).collect(), edges)
        .map_err(|e| Error::MeshingFailure(format!("constrained triangulation failed: {e:?}")))?;
    for x in &extra {
        cdt.insert(Point2::new(x[0], x[1])).map_err(|e| Error::MeshingFailure(format!("insertion failed: {e:?}")))?;
    }
    let max_area = 3f64.sqrt() / 4.0 * h * h;
    let expected = (poly.area() / (0.25 * max_area)) as usize + 20 * total + 1000;
    let mut done = false;
    for limit in [25.0, 22.0, 20.5] {
        let mut trial = cdt.clone();
        let res = trial.refine(
            RefinementParameters::<f64>::new()
                .with_angle_limit(AngleLimit::from_deg(limit))
                .with_max_allowed_area(max_area)
                .with_min_required_area(1e-3 * smallest * smallest)
                .exclude_outer_faces(true)
                .with_max_additional_vertices(expected),
        );
        if res.refinement_complete {
            cdt = trial;
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::MeshingFailure(format!(
            "refinement did not complete within {expected} additional vertices (h = {h}, q = {q}, depth = {depth})"
        )));
    }
    let tol = 1e-12 * poly.diameter();
    for _round in 0..8 {
        let mut fix: Vec<Point> = Vec::new();
        for f in cdt.inner_faces() {
            let p = f.vertices().map(|v| [v.position().x, v.position().y]);
            let c = [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0];
            if !poly.contains(c) || poly.distance(c) <= tol {
                continue;
            }
            if p.iter().all(|x| poly.distance(*x) <= tol) {
                fix.push(c);
            }
        }
        if fix.is_empty() {
            break;
        }
        for c in fix {
            cdt.insert(Point2::new(c[0], c[1]))
                .map_err(|e| Error::MeshingFailure(format!("insertion failed: {e:?}")))?;
        }
    }
    let (nodes, triangles) = collect_inner(&cdt, poly, tol);
    let depths = corners.iter().map(|_| depth).collect();
    let mesh = TriMesh::from_parts(poly, nodes, triangles, corners, depths, h)?;
    if mesh.triangles.iter().any(|t| t.iter().all(|&k| mesh.boundary[k])) {
        return Err(Error::MeshingFailure("a triangle with no interior vertex survived".into()));
    }
    Ok(mesh)
}

fn collect_inner(cdt: &Cdt, poly: &Polygon, tol: f64) -> (Vec<Point>, Vec<[usize; 3]>) {
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut nodes: Vec<Point> = Vec::new();
    let mut triangles = Vec::new();
    let mut faces: Vec<[(usize, Point); 3]> = Vec::new();
    for f in cdt.inner_faces() {
        let vs = f.vertices().map(|v| (v.fix().index(), [v.position().x, v.position().y]));
        let c = [(vs[0].1[0] + vs[1].1[0] + vs[2].1[0]) / 3.0, (vs[0].1[1] + vs[1].1[1] + vs[2].1[1]) / 3.0];
        if poly.contains(c) && poly.distance(c) > tol {
            faces.push(vs);
        }
    }
    // deterministic node numbering: order of first appearance in face order
    for vs in faces {
        let mut tri = [0usize; 3];
        for (k, (idx, p)) in vs.iter().enumerate() {
            let id = *map.entry(*idx).or_insert_with(|| {
                nodes.push(*p);
                nodes.len() - 1
            });
            tri[k] = id;
        }
        triangles.push(tri);
    }
    (nodes, triangles)
}

/// Structured mesh of a region swept by cross-sections.
///
/// `stations[i] = (lower, upper)` are the endpoints of the `i`-th cross-section,
/// ordered from the far end towards `tip`, where the cross-sections shrink to a
/// point.  Each cross-section carries `layers + 1` equally spaced nodes; cells
/// between consecutive sections are split along a diagonal, and the last
/// section is joined to the tip by a fan.  `first_section_on_boundary` marks
/// the far cross-section as part of the domain boundary.
pub fn ladder_triangles(
    stations: &[(Point, Point)],
    tip: Point,
    layers: usize,
    first_section_on_boundary: bool,
) -> Result<(Vec<Point>, Vec<[usize; 3]>)> {
    if layers < 2 {
        return invalid(format!("a ladder needs at least 2 layers, got {layers}"));
    }
    if stations.is_empty() {
        return invalid("a ladder needs at least one station");
    }
    let m = layers;
    let mut nodes = Vec::with_capacity(stations.len() * (m + 1) + 1);
    for &(lo, hi) in stations {
        for j in 0..=m {
            let t = j as f64 / m as f64;
            nodes.push([lo[0] + t * (hi[0] - lo[0]), lo[1] + t * (hi[1] - lo[1])]);
        }
    }
    let id = |i: usize, j: usize| i * (m + 1) + j;
    let mut tris = Vec::new();
    for i in 0..stations.len() - 1 {
        for j in 0..m {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let on_bd = |i: usize, j: usize| j == 0 || j == m || (i == 0 && first_section_on_boundary);
            let ok = |t: [(usize, usize); 3]| t.iter().any(|&(i, j)| !on_bd(i, j));
            // split along whichever diagonal leaves an interior vertex in both halves
            if ok([(i, j), (i + 1, j), (i, j + 1)]) && ok([(i + 1, j), (i + 1, j + 1), (i, j + 1)]) {
                tris.push([a, b, d]);
                tris.push([b, c, d]);
            } else {
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            }
        }
    }
    let tip_id = nodes.len();
    nodes.push(tip);
    let last = stations.len() - 1;
    for j in 0..m {
        tris.push([id(last, j), tip_id, id(last, j + 1)]);
    }
    Ok((nodes, tris))
}

/// Ladder mesh, optionally glued along its first cross-section to a cap
/// region bounded by that section and the arc `cap` (from the section's
/// upper end round to its lower end).
pub fn ladder_mesh(
    poly: &Polygon,
    stations: &[(Point, Point)],
    tip: Point,
    layers: usize,
    cap: Option<&[Point]>,
    h: f64,
    corners: &[usize],
) -> Result<TriMesh> {
    let (mut nodes, mut tris) = ladder_triangles(stations, tip, layers, cap.is_none())?;
    if let Some(arc) = cap {
        let m = layers;
        // section nodes lower → upper, then the arc back to the lower end
        let mut loop_pts: Vec<Point> = nodes[..=m].to_vec();
        loop_pts.extend_from_slice(arc);
        let k = loop_pts.len();
        let edges: Vec<[usize; 2]> = (0..k).map(|i| [i, (i + 1) % k]).collect();
        let mut cdt = Cdt::bulk_load_cdt(loop_pts.iter().map(|p| Point2::new(p[0], p[1])).collect(), edges)
            .map_err(|e| Error::MeshingFailure(format!("cap triangulation failed: {e:?}")))?;
        let cap_poly = Polygon::new(loop_pts.clone())?;
        let max_area = 3f64.sqrt() / 4.0 * h * h;
        let res = cdt.refine(
            RefinementParameters::<f64>::new()
                .with_angle_limit(AngleLimit::from_deg(22.0))
                .with_max_allowed_area(max_area)
                .keep_constraint_edges()
                .exclude_outer_faces(true)
                .with_max_additional_vertices((cap_poly.area() / (0.25 * max_area)) as usize + 20 * k + 1000),
        );
        if !res.refinement_complete {
            return Err(Error::MeshingFailure("cap refinement did not complete".into()));
        }
        let tol = 1e-12 * cap_poly.diameter();
        let (cap_nodes, cap_tris) = collect_inner(&cdt, &cap_poly, tol);
        // glue: section nodes are shared by exact coordinates
        let mut lookup: HashMap<(u64, u64), usize> = HashMap::new();
        for (i, p) in nodes.iter().enumerate().take(m + 1) {
            lookup.insert((p[0].to_bits(), p[1].to_bits()), i);
        }
        let mut map = Vec::with_capacity(cap_nodes.len());
        for p in cap_nodes {
            match lookup.get(&(p[0].to_bits(), p[1].to_bits())) {
                Some(&i) => map.push(i),
                None => {
                    nodes.push(p);
                    map.push(nodes.len() - 1);
                }
            }
        }
        for t in cap_tris {
            tris.push([map[t[0]], map[t[1]], map[t[2]]]);
        }
    }
    let depths = corners.iter().map(|_| 0).collect();
    TriMesh::from_parts(poly, nodes, tris, corners, depths, h)
}

/// Uniform red refinement: every triangle is split into four similar ones.
pub fn refine_red(mesh: &TriMesh) -> Result<TriMesh> {
    let mut nodes = mesh.nodes.clone();
    let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
    let mut get = |a: usize, b: usize, nodes: &mut Vec<Point>| -> usize {
        let key = if a < b { (a, b) } else { (b, a) };
        *mid.entry(key).or_insert_with(|| {
            let (p, q) = (nodes[a], nodes[b]);
            nodes.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
            nodes.len() - 1
        })
    };
    let mut tris = Vec::with_capacity(4 * mesh.triangles.len());
    for &[a, b, c] in &mesh.triangles {
        let ab = get(a, b, &mut nodes);
        let bc = get(b, c, &mut nodes);
        let ca = get(c, a, &mut nodes);
        tris.push([a, ab, ca]);
        tris.push([ab, b, bc]);
        tris.push([ca, bc, c]);
        tris.push([ab, bc, ca]);
    }
    let mut out =
        TriMesh::from_parts(&mesh.polygon, nodes, tris, &mesh.corners, mesh.grading_depth.clone(), 0.5 * mesh.h)?;
    // inherited nodes keep their flags; red refinement never moves them
    out.boundary[..mesh.nodes.len()].copy_from_slice(&mesh.boundary);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon::{make_l_shape, make_regular_polygon, unit_square};

    #[test]
    fn square_without_grading() {
        let m = triangulate(&unit_square(), 0.25, 0.5, 0).unwrap();
        assert!(m.triangles.len() >= 24 && m.triangles.len() <= 80, "{}", m.triangles.len());
        assert!((m.total_area() - 1.0).abs() < 1e-12);
        assert!(m.min_angle() >= 20f64.to_radians());
        for (p, &b) in m.nodes.iter().zip(&m.boundary) {
            let d = unit_square().distance(*p);
            assert_eq!(b, d <= 1e-12 * 2f64.sqrt());
        }
    }

    #[test]
    fn square_with_grading() {
        let m = triangulate(&unit_square(), 0.25, 0.5, 3).unwrap();
        let corner_min = (0..m.triangles.len())
            .filter(|&t| m.vertices_of(t).iter().any(|p| (p[0] == 0.0 || p[0] == 1.0) && (p[1] == 0.0 || p[1] == 1.0)))
            .map(|t| m.triangle_diameter(t))
            .fold(f64::INFINITY, f64::min);
        assert!(corner_min <= 0.25 * 0.125 * 1.5, "{corner_min}");
        assert!((m.total_area() - 1.0).abs() < 1e-12);
        assert!(m.min_angle() >= 20f64.to_radians());
    }

    #[test]
    fn every_triangle_has_an_interior_vertex() {
        for poly in [make_l_shape(), make_regular_polygon(6, 1.0).unwrap(), make_regular_polygon(3, 1.0).unwrap()] {
            let m = triangulate(&poly, 0.2, 0.5, 2).unwrap();
            assert!((m.total_area() - poly.area()).abs() < 1e-10 * poly.area());
            for t in &m.triangles {
                assert!(t.iter().any(|&k| !m.boundary[k]));
            }
        }
    }

    #[test]
    fn red_refinement_preserves_area_and_angles() {
        let m = triangulate(&make_l_shape(), 0.3, 0.5, 2).unwrap();
        let r = refine_red(&m).unwrap();
        assert_eq!(r.triangles.len(), 4 * m.triangles.len());
        assert!((r.total_area() - m.total_area()).abs() < 1e-12);
        assert!((r.min_angle() - m.min_angle()).abs() < 1e-9);
    }

    #[test]
    fn rejects_coarse_mesh_size() {
        assert!(triangulate(&unit_square(), 1.5, 0.5, 0).is_err());
        assert!(triangulate(&unit_square(), 0.2, 1.5, 0).is_err());
    }

    #[test]
    fn ladder_needs_two_layers() {
        assert!(ladder_triangles(&[([0.0, 0.0], [0.0, 1.0])], [1.0, 0.0], 1, true).is_err());
    }
}

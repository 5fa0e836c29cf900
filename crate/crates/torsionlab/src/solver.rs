//! Piecewise-linear Galerkin solution of `−Δu = 1`, `u = 0` on the boundary,
//! point evaluation of the discrete field, refinement sequences and barrier
//! comparisons.

use crate::barriers::{sector_barrier, triangle_barrier};
use crate::error::{invalid, Error, Result};
use crate::geometry::{min_enclosing_circle, refine_red, Domain, MeshParams, Polygon, TriMesh};
use crate::Point;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

/// Relative residual at which conjugate gradients stop.
pub const SOLVE_TOL: f64 = 1e-10;
/// Negative nodal values above this are clamped to zero; below it the solve fails.
pub const CLAMP_FLOOR: f64 = -1e-8;
/// Block length of the fixed-order reductions.
const CHUNK: usize = 4096;

/// Nodal solution on a mesh.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub mesh: Arc<TriMesh>,
    pub values: Vec<f64>,
    /// Final relative residual of the linear solve.
    pub residual: f64,
    /// Nominal mesh size.
    pub h: f64,
    pub iterations: usize,
    /// Interior nodes whose slightly negative values were clamped to zero.
    pub clamped: usize,
    locator: OnceLock<Locator>,
}

impl PartialEq for ScalarField {
    fn eq(&self, other: &Self) -> bool {
        self.mesh == other.mesh && self.values == other.values && self.residual == other.residual
    }
}

/// Compressed sparse rows over interior degrees of freedom.
#[derive(Debug, Clone)]
struct Csr {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Csr {
    fn from_triplets(n: usize, mut trip: Vec<(usize, usize, f64)>) -> Csr {
        trip.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut offsets = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(trip.len());
        let mut vals: Vec<f64> = Vec::with_capacity(trip.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in trip {
            if last == Some((i, j)) {
                *vals.last_mut().expect("entry") += v;
            } else {
                cols.push(j);
                vals.push(v);
                offsets[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Csr { offsets, cols, vals }
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().with_min_len(CHUNK).for_each(|(i, yi)| {
            let mut s = 0.0;
            for k in self.offsets[i]..self.offsets[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            *yi = s;
        });
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.offsets.len() - 1)
            .map(|i| {
                (self.offsets[i]..self.offsets[i + 1]).find(|&k| self.cols[k] == i).map(|k| self.vals[k]).unwrap_or(0.0)
            })
            .collect()
    }
}

/// Dot product with a fixed blocking, identical for every worker count.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partial: Vec<f64> =
        a.par_chunks(CHUNK).zip(b.par_chunks(CHUNK)).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum()).collect();
    partial.iter().sum()
}

/// Gradients of the barycentric coordinates of a positively oriented triangle, and its area.
pub(crate) fn p1_gradients(p: [Point; 3]) -> ([[f64; 2]; 3], f64) {
    let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let a = p[(i + 1) % 3];
        let b = p[(i + 2) % 3];
        g[i] = [(a[1] - b[1]) / area2, (b[0] - a[0]) / area2];
    }
    (g, 0.5 * area2)
}

/// Interior numbering: `dof[node]` or `usize::MAX` on the boundary.
fn interior_numbering(mesh: &TriMesh) -> (Vec<usize>, usize) {
    let mut dof = vec![usize::MAX; mesh.num_nodes()];
    let mut k = 0;
    for (i, &b) in mesh.boundary.iter().enumerate() {
        if !b {
            dof[i] = k;
            k += 1;
        }
    }
    (dof, k)
}

fn assemble(mesh: &TriMesh, dof: &[usize], n: usize) -> (Csr, Vec<f64>) {
    let mut trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut rhs = vec![0.0; n];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let (g, area) = p1_gradients(mesh.vertices_of(t));
        for a in 0..3 {
            let i = dof[tri[a]];
            if i == usize::MAX {
                continue;
            }
            rhs[i] += area / 3.0;
            for b in 0..3 {
                let j = dof[tri[b]];
                if j == usize::MAX {
                    continue;
                }
                trip.push((i, j, area * (g[a][0] * g[b][0] + g[a][1] * g[b][1])));
            }
        }
    }
    (Csr::from_triplets(n, trip), rhs)
}

/// Jacobi-preconditioned conjugate gradients; returns `(x, relative residual, iterations)`.
fn pcg(a: &Csr, b: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64, usize)> {
    let n = b.len();
    let diag = a.diagonal();
    if diag.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::SolverFailure("stiffness matrix has a non-positive diagonal entry".into()));
    }
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, 0.0, 0));
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 1..=max_iter {
        a.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::SolverFailure(format!("matrix is not positive definite (p·Ap = {pap:e})")));
        }
        let alpha = rz / pap;
        x.par_iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.par_iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= alpha * api);
        let res = dot(&r, &r).sqrt() / bnorm;
        if res <= tol {
            return Ok((x, res, it));
        }
        z.par_iter_mut().zip(&r).zip(&diag).for_each(|((zi, ri), d)| *zi = ri / d);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        p.par_iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    Err(Error::SolverFailure(format!("conjugate gradients did not converge in {max_iter} iterations")))
}

/// Galerkin solution of `−Δu = 1` with homogeneous Dirichlet data.
pub fn poisson_solve(mesh: impl Into<Arc<TriMesh>>) -> Result<ScalarField> {
    poisson_solve_tol(mesh, SOLVE_TOL)
}

/// [`poisson_solve`] with an explicit relative residual target.
pub fn poisson_solve_tol(mesh: impl Into<Arc<TriMesh>>, tol: f64) -> Result<ScalarField> {
    if !(tol > 0.0 && tol < 1.0) {
        return invalid(format!("solver tolerance must lie in (0, 1), got {tol}"));
    }
    let mesh: Arc<TriMesh> = mesh.into();
    let (dof, n) = interior_numbering(&mesh);
    if n == 0 {
        return Err(Error::SolverFailure("mesh has no interior nodes".into()));
    }
    let (a, b) = assemble(&mesh, &dof, n);
    let (x, residual, iterations) = pcg(&a, &b, tol, 10 * n)?;
    let mut values = vec![0.0; mesh.num_nodes()];
    let mut clamped = 0;
    for (node, &k) in dof.iter().enumerate() {
        if k == usize::MAX {
            continue;
        }
        let v = x[k];
        if v < CLAMP_FLOOR {
            return Err(Error::SolverFailure(format!("nodal value {v:e} at node {node} violates positivity")));
        }
        if v <= 0.0 {
            clamped += 1;
            values[node] = 0.0;
        } else {
            values[node] = v;
        }
    }
    let h = mesh.h;
    Ok(ScalarField { mesh, values, residual, h, iterations, clamped, locator: OnceLock::new() })
}

/// Bucket grid over triangle bounding boxes.
#[derive(Debug, Clone)]
struct Locator {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl Locator {
    fn new(mesh: &TriMesh) -> Locator {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &mesh.nodes {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let nt = mesh.triangles.len().max(1);
        let side = ((nt as f64).sqrt().ceil() as usize).clamp(1, 2048);
        let cell = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / side as f64).max(f64::MIN_POSITIVE);
        let nx = (((hi[0] - lo[0]) / cell).floor() as usize + 1).min(4096);
        let ny = (((hi[1] - lo[1]) / cell).floor() as usize + 1).min(4096);
        let mut buckets = vec![Vec::new(); nx * ny];
        for t in 0..mesh.triangles.len() {
            let v = mesh.vertices_of(t);
            let bx0 = v.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let bx1 = v.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            let by0 = v.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
            let by1 = v.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
            let ix = |x: f64| (((x - lo[0]) / cell).floor().max(0.0) as usize).min(nx - 1);
            let iy = |y: f64| (((y - lo[1]) / cell).floor().max(0.0) as usize).min(ny - 1);
            for j in iy(by0)..=iy(by1) {
                for i in ix(bx0)..=ix(bx1) {
                    buckets[j * nx + i].push(t);
                }
            }
        }
        Locator { origin: lo, cell, nx, ny, buckets }
    }

    fn candidates(&self, x: Point) -> &[usize] {
        let fx = (x[0] - self.origin[0]) / self.cell;
        let fy = (x[1] - self.origin[1]) / self.cell;
        if !(fx >= -1e-9 && fy >= -1e-9) || fx > self.nx as f64 + 1e-9 || fy > self.ny as f64 + 1e-9 {
            return &[];
        }
        let i = (fx.max(0.0) as usize).min(self.nx - 1);
        let j = (fy.max(0.0) as usize).min(self.ny - 1);
        &self.buckets[j * self.nx + i]
    }
}

/// Barycentric coordinates of `x` in triangle `p`; the coordinates of a vertex are exact.
fn barycentric(p: [Point; 3], x: Point) -> [f64; 3] {
    let e1 = [p[1][0] - p[0][0], p[1][1] - p[0][1]];
    let e2 = [p[2][0] - p[0][0], p[2][1] - p[0][1]];
    let d = [x[0] - p[0][0], x[1] - p[0][1]];
    let area2 = e1[0] * e2[1] - e1[1] * e2[0];
    let l1 = (d[0] * e2[1] - d[1] * e2[0]) / area2;
    let l2 = (e1[0] * d[1] - e1[1] * d[0]) / area2;
    [1.0 - l1 - l2, l1, l2]
}

/// Tolerance on barycentric coordinates when testing containment.
const LOCATE_TOL: f64 = 1e-12;

/// Self-contained serialised form of a [`ScalarField`].
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FieldRecord {
    pub polygon: Vec<Point>,
    pub corners: Vec<usize>,
    pub grading_depth: Vec<usize>,
    pub h: f64,
    pub nodes: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub values: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub clamped: usize,
}

impl ScalarField {
    pub fn to_record(&self) -> FieldRecord {
        let m = &self.mesh;
        FieldRecord {
            polygon: m.polygon.vertices().to_vec(),
            corners: m.corners.clone(),
            grading_depth: m.grading_depth.clone(),
            h: m.h,
            nodes: m.nodes.clone(),
            triangles: m.triangles.clone(),
            values: self.values.clone(),
            residual: self.residual,
            iterations: self.iterations,
            clamped: self.clamped,
        }
    }

    pub fn from_record(rec: FieldRecord) -> Result<ScalarField> {
        let poly = Polygon::new(rec.polygon)?;
        let n = rec.nodes.len();
        if rec.triangles.iter().flatten().any(|&k| k >= n) {
            return invalid("triangle refers to a node that does not exist");
        }
        let mesh = TriMesh::from_parts(&poly, rec.nodes, rec.triangles, &rec.corners, rec.grading_depth, rec.h)?;
        let mut f = ScalarField::from_values(mesh, rec.values, rec.residual)?;
        f.iterations = rec.iterations;
        f.clamped = rec.clamped;
        Ok(f)
    }

    pub fn from_values(mesh: impl Into<Arc<TriMesh>>, values: Vec<f64>, residual: f64) -> Result<ScalarField> {
        let mesh: Arc<TriMesh> = mesh.into();
        if values.len() != mesh.num_nodes() {
            return invalid(format!("{} values for {} nodes", values.len(), mesh.num_nodes()));
        }
        let h = mesh.h;
        Ok(ScalarField { mesh, values, residual, h, iterations: 0, clamped: 0, locator: OnceLock::new() })
    }

    /// Copy of the field with values multiplied by `c`.
    pub fn scaled(&self, c: f64) -> ScalarField {
        let mut f = self.clone();
        f.values.iter_mut().for_each(|v| *v *= c);
        f
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    fn locator(&self) -> &Locator {
        self.locator.get_or_init(|| Locator::new(&self.mesh))
    }

    /// Triangle containing `x` and the barycentric coordinates of `x` in it.
    pub fn locate(&self, x: Point) -> Result<(usize, [f64; 3])> {
        let inside = |t: usize| {
            let l = barycentric(self.mesh.vertices_of(t), x);
            if l.iter().all(|&v| v >= -LOCATE_TOL) {
                Some(l)
            } else {
                None
            }
        };
        for &t in self.locator().candidates(x) {
            if let Some(l) = inside(t) {
                return Ok((t, l));
            }
        }
        for t in 0..self.mesh.triangles.len() {
            if let Some(l) = inside(t) {
                return Ok((t, l));
            }
        }
        Err(Error::OutOfDomain(x))
    }

    /// Linear interpolation of the nodal values at `x`.
    pub fn interpolate(&self, x: Point) -> Result<f64> {
        let (t, l) = self.locate(x)?;
        let tri = self.mesh.triangles[t];
        // a barycentric coordinate that is exactly one selects the node value unchanged
        for k in 0..3 {
            if l[k] == 1.0 {
                return Ok(self.values[tri[k]]);
            }
        }
        let v: f64 = (0..3).map(|k| l[k].max(0.0) * self.values[tri[k]]).sum();
        let w: f64 = l.iter().map(|v| v.max(0.0)).sum();
        Ok((v / w).max(0.0))
    }
}

/// Interpolation of the discrete field at a point.
pub fn interpolate(field: &ScalarField, x: Point) -> Result<f64> {
    field.interpolate(x)
}

/// Richardson extrapolation of a functional sampled on meshes `h, h/2, h/4, …`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Richardson {
    pub extrapolated: f64,
    /// Observed order from the last three levels (assumed 2 with only two levels).
    pub order: f64,
    /// `|I_finest − I_extrapolated|`.
    pub budget: f64,
}

/// Extrapolate the last levels of `values` (coarse to fine, halving `h`).
pub fn richardson(values: &[f64]) -> Result<Richardson> {
    let m = values.len();
    if m < 2 {
        return invalid("Richardson extrapolation needs at least two levels");
    }
    let i2 = values[m - 1];
    let i1 = values[m - 2];
    let mut order = 2.0;
    if m >= 3 {
        let i0 = values[m - 3];
        let ratio = (i1 - i0) / (i2 - i1);
        if ratio.is_finite() && ratio > 1.0 {
            order = ratio.log2();
        }
    }
    // extrapolation is only trusted for orders in a sensible band
    let p = order.clamp(0.5, 4.0);
    let extrapolated = i2 + (i2 - i1) / (2f64.powf(p) - 1.0);
    Ok(Richardson { extrapolated, order, budget: (i2 - extrapolated).abs() })
}

/// Solutions on a coarse mesh of `domain` and `levels − 1` red refinements.
pub fn solve_sequence(domain: &Domain, params: MeshParams, levels: usize) -> Result<Vec<ScalarField>> {
    if levels < 2 {
        return invalid(format!("a refinement sequence needs at least 2 levels, got {levels}"));
    }
    let mut mesh = domain.mesh(params)?;
    let mut out = Vec::with_capacity(levels);
    for l in 0..levels {
        if l > 0 {
            mesh = refine_red(&mesh)?;
        }
        out.push(poisson_solve(mesh.clone())?);
    }
    Ok(out)
}

/// Discretization budget `5 h² log(1/h)` used as slack in pointwise comparisons.
pub fn discretization_slack(h: f64) -> f64 {
    5.0 * h * h * (1.0 / h).ln().max(1.0)
}

/// Outcome of a pointwise barrier comparison at a corner.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SandwichReport {
    pub corner: usize,
    pub theta: f64,
    pub r: f64,
    pub samples: usize,
    /// `min (u_h − v_{θ,r})` over the sector samples.
    pub lower_gap: f64,
    /// `min (w − u_h)` over the upper barriers that apply, sampled over the sector.
    pub upper_gap: f64,
    /// Names of the upper barriers used.
    pub upper_barriers: Vec<String>,
    pub slack: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

fn rotate(p: Point, c: f64, s: f64) -> Point {
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

/// Compare `u_h` with the sector barrier `v_{θ,r}` at polygon vertex `corner`
/// and with the upper barriers whose domains contain the polygon: the disc
/// through the smallest enclosing circle always, and the corner wedge when the
/// polygon lies inside it and its opening is below `π/2`.
pub fn barrier_sandwich_check(field: &ScalarField, corner: usize, theta: f64, r: f64) -> Result<SandwichReport> {
    let mesh = &field.mesh;
    let poly = &mesh.polygon;
    if !mesh.corners.contains(&corner) {
        return invalid(format!("vertex {corner} is not a corner of the meshed domain"));
    }
    if !(theta > 0.0 && theta < PI) || !(r > 0.0) {
        return invalid(format!("need theta in (0, pi) and r > 0, got ({theta}, {r})"));
    }
    let apex = poly.vertex(corner);
    let prev = poly.vertex(corner + poly.len() - 1);
    let next = poly.vertex(corner + 1);
    // interior bisector: counter-clockwise loop has the interior on the left of next − apex
    let a_next = (next[1] - apex[1]).atan2(next[0] - apex[0]);
    let a_prev = (prev[1] - apex[1]).atan2(prev[0] - apex[0]);
    let mut opening = a_prev - a_next;
    while opening <= 0.0 {
        opening += 2.0 * PI;
    }
    if theta > 0.5 * opening * (1.0 + 1e-12) {
        return invalid(format!("half-aperture {theta} exceeds half the corner opening {}", 0.5 * opening));
    }
    let axis = a_next + 0.5 * opening;
    let (ca, sa) = (axis.cos(), axis.sin());
    let to_global = |p: Point| {
        let q = rotate(p, ca, sa);
        [apex[0] + q[0], apex[1] + q[1]]
    };
    let tol = 1e-9 * poly.diameter();
    // containment: boundary samples inside, no other polygon vertex strictly inside the sector
    for k in 0..=256 {
        let w = -theta + 2.0 * theta * k as f64 / 256.0;
        for rho in [r, 0.5 * r] {
            let g = to_global([rho * w.cos(), rho * w.sin()]);
            if !poly.contains(g) && poly.distance(g) > tol {
                return invalid(format!("sector S({theta}, {r}) at vertex {corner} leaves the domain"));
            }
        }
    }
    for (i, v) in poly.vertices().iter().enumerate() {
        if i == corner {
            continue;
        }
        let d = [v[0] - apex[0], v[1] - apex[1]];
        let local = rotate(d, ca, -sa);
        let rho = local[0].hypot(local[1]);
        if rho < r - tol && local[1].atan2(local[0]).abs() < theta - 1e-12 {
            return invalid(format!("vertex {i} lies inside the sector placed at vertex {corner}"));
        }
    }

    let (cc, rc) = min_enclosing_circle(poly.vertices());
    let wedge_ok = opening < 0.5 * PI
        && poly.vertices().iter().all(|v| {
            let d = [v[0] - apex[0], v[1] - apex[1]];
            let l = rotate(d, a_next.cos(), -a_next.sin());
            l[1] >= -tol && l[1] <= l[0] * opening.tan() + tol
        });
    let mut upper_barriers = vec!["disk".to_string()];
    if wedge_ok {
        upper_barriers.push("triangle".to_string());
    }

    let slack = discretization_slack(field.h);
    let (nr, nw) = (32, 33);
    let mut lower_gap = f64::INFINITY;
    let mut upper_gap = f64::INFINITY;
    let mut samples = 0;
    for i in 1..=nr {
        let rho = r * i as f64 / nr as f64;
        for j in 0..nw {
            let w = -theta + 2.0 * theta * j as f64 / (nw - 1) as f64;
            let x = to_global([rho * w.cos(), rho * w.sin()]);
            let u = match field.interpolate(x) {
                Ok(u) => u,
                Err(Error::OutOfDomain(_)) if poly.distance(x) <= tol => 0.0,
                Err(e) => return Err(e),
            };
            let v = sector_barrier(theta, r, rho, w)?;
            lower_gap = lower_gap.min(u - v);
            let d2 = (x[0] - cc[0]).powi(2) + (x[1] - cc[1]).powi(2);
            upper_gap = upper_gap.min((rc * rc - d2) / 4.0 - u);
            if wedge_ok {
                let d = [x[0] - apex[0], x[1] - apex[1]];
                let l = rotate(d, a_next.cos(), -a_next.sin());
                let y = l[1].clamp(0.0, l[0] * opening.tan());
                upper_gap = upper_gap.min(triangle_barrier(opening, l[0], y)? - u);
            }
            samples += 1;
        }
    }
    Ok(SandwichReport {
        corner,
        theta,
        r,
        samples,
        lower_gap,
        upper_gap,
        upper_barriers,
        slack,
        lower_ok: lower_gap >= -slack,
        upper_ok: upper_gap >= -slack,
    })
}

/// Global pointwise bounds at the interior nodes: `min (u_h − δ²/4)` and
/// `min ((R_c² − |x − x_c|²)/4 − u_h)` with the smallest enclosing circle.
pub fn global_bounds_gaps(field: &ScalarField) -> (f64, f64) {
    let poly = &field.mesh.polygon;
    let (cc, rc) = min_enclosing_circle(poly.vertices());
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    for (i, p) in field.mesh.nodes.iter().enumerate() {
        if field.mesh.boundary[i] {
            continue;
        }
        let u = field.values[i];
        let d = poly.distance(*p);
        lower = lower.min(u - d * d / 4.0);
        let d2 = (p[0] - cc[0]).powi(2) + (p[1] - cc[1]).powi(2);
        upper = upper.min((rc * rc - d2) / 4.0 - u);
    }
    (lower, upper)
}

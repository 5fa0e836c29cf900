//! Curved and cuspidal domains, sectors, and the domain description used by
//! the experiments and the command line.

use super::mesh::{ladder_mesh, triangulate_with_corners, MeshParams, TriMesh};
use super::polygon::{make_regular_polygon, Polygon};
use crate::error::{invalid, Result};
use crate::Point;
use std::f64::consts::PI;

/// Smallest abscissa sampled on the curvilinear triangle.
const CURVILINEAR_X_MIN: f64 = 1e-4;
/// Cross-sections narrower than this are not resolved.
const MIN_WIDTH: f64 = 1e-8;
/// Relative station spacing of cuspidal ladders.
const CUSP_STATION_RATIO: f64 = 0.15;
/// Arc segments per radian of sector opening.
const SECTOR_ARC_DENSITY: f64 = 32.0;

/// Profile `F` of a cusp `{0 < x_n ≤ η, |x′| < εF(x_n)}`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CuspFamily {
    /// `F(t) = t^p`, `p > 1`.
    Power { p: f64 },
    /// Piecewise linear through `(t_i, F_i)`, `t_0 = 0`.
    Tabulated { t: Vec<f64>, f: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CuspProfile {
    pub family: CuspFamily,
    pub epsilon: f64,
    pub eta: f64,
}

impl CuspProfile {
    pub fn power(p: f64, epsilon: f64, eta: f64) -> Result<CuspProfile> {
        let c = CuspProfile { family: CuspFamily::Power { p }, epsilon, eta };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !(self.eta > 0.0) {
            return invalid(format!("cusp needs epsilon > 0 and eta > 0 (got {}, {})", self.epsilon, self.eta));
        }
        match &self.family {
            CuspFamily::Power { p } => {
                if !(*p > 1.0) || !p.is_finite() {
                    return invalid(format!("power cusp needs p > 1 so that F'(0) = 0, got {p}"));
                }
            }
            CuspFamily::Tabulated { t, f } => {
                if t.len() != f.len() || t.len() < 2 {
                    return invalid("tabulated profile needs matching sample vectors of length >= 2");
                }
                if t[0] != 0.0 || f[0] != 0.0 {
                    return invalid(format!("profile must vanish at 0, got F({}) = {}", t[0], f[0]));
                }
                if t.windows(2).any(|w| !(w[1] > w[0])) {
                    return invalid("profile abscissae must increase");
                }
                if (t[t.len() - 1] - self.eta).abs() > 1e-12 * self.eta {
                    return invalid("profile samples must end at eta");
                }
                if f[1..].iter().any(|&v| !(v > 0.0)) {
                    return invalid("profile must be positive on (0, eta]");
                }
                if f.windows(2).any(|w| w[1] < w[0]) {
                    return invalid("tabulated profile must be non-decreasing");
                }
            }
        }
        Ok(())
    }

    /// `F(t)`.
    pub fn f(&self, t: f64) -> f64 {
        match &self.family {
            CuspFamily::Power { p } => t.powf(*p),
            CuspFamily::Tabulated { t: ts, f } => {
                let k = ts.partition_point(|&x| x <= t).clamp(1, ts.len() - 1);
                let s = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
                f[k - 1] + s * (f[k] - f[k - 1])
            }
        }
    }

    /// `F′(t)` (one-sided from the left for tabulated profiles).
    pub fn df(&self, t: f64) -> f64 {
        match &self.family {
            CuspFamily::Power { p } => p * t.powf(p - 1.0),
            CuspFamily::Tabulated { t: ts, f } => {
                let k = ts.partition_point(|&x| x < t).clamp(1, ts.len() - 1);
                (f[k] - f[k - 1]) / (ts[k] - ts[k - 1])
            }
        }
    }

    /// Half-width `εF(t)` of the cross-section at height `t`.
    pub fn half_width(&self, t: f64) -> f64 {
        self.epsilon * self.f(t)
    }
}

/// Closure of a truncated sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    Arc,
    Chord,
}

/// Truncated sector `S_{θ,r}` of half-aperture `theta`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SectorSpec {
    pub theta: f64,
    pub r: f64,
}

impl SectorSpec {
    pub fn new(theta: f64, r: f64) -> Result<SectorSpec> {
        if !(theta > 0.0 && theta < PI) {
            return invalid(format!("sector half-aperture must lie in (0, pi), got {theta}"));
        }
        if !(r > 0.0) || !r.is_finite() {
            return invalid(format!("sector radius must be positive, got {r}"));
        }
        Ok(SectorSpec { theta, r })
    }
}

/// Number of segments used for the arc of a sector of half-aperture `theta`.
pub fn sector_arc_segments(theta: f64) -> usize {
    ((2.0 * theta * SECTOR_ARC_DENSITY).ceil() as usize).max(8)
}

/// Radius of the largest concentric sector inside the polygonal sector.
///
/// The arc is replaced by chords, so the inscribed sector has radius
/// `r·cos(Δω/2)` for arc closure and `r·cos θ` for chord closure.
pub fn sector_inscribed_radius(spec: SectorSpec, closure: Closure) -> f64 {
    match closure {
        Closure::Arc => spec.r * (spec.theta / sector_arc_segments(spec.theta) as f64).cos(),
        Closure::Chord => spec.r * spec.theta.cos(),
    }
}

/// Polygonal sector with apex at the origin, symmetric about the positive x-axis.
///
/// Chord closure requires `theta < π/2`.
pub fn make_sector(spec: SectorSpec, closure: Closure) -> Result<Polygon> {
    let SectorSpec { theta, r } = SectorSpec::new(spec.theta, spec.r)?;
    let mut v = vec![[0.0, 0.0]];
    match closure {
        Closure::Chord => {
            if theta >= 0.5 * PI {
                return invalid(format!("chord closure needs theta < pi/2, got {theta}"));
            }
            v.push([r * theta.cos(), -r * theta.sin()]);
            v.push([r * theta.cos(), r * theta.sin()]);
        }
        Closure::Arc => {
            let m = sector_arc_segments(theta);
            for k in 0..=m {
                let w = -theta + 2.0 * theta * k as f64 / m as f64;
                v.push([r * w.cos(), r * w.sin()]);
            }
        }
    }
    Polygon::new(v)
}

/// Abscissae of the curve samples of the curvilinear triangle, from 1 down to the tip.
fn curvilinear_abscissae(beta: f64, epsilon: f64, m: usize) -> Vec<f64> {
    let k = 1.0 / (2.0 * beta - 1.0);
    let x_min = CURVILINEAR_X_MIN.max((MIN_WIDTH / epsilon).powf(1.0 / k)).min(0.5);
    let span = x_min.ln();
    (0..m).map(|i| (span * i as f64 / (m - 1) as f64).exp()).collect()
}

/// Polygonal approximation of `{0 < x < 1, 0 < y < ε x^{1/(2β−1)}}`.
///
/// The `m` curve samples are spaced geometrically from `x = 1` towards the tip
/// down to `x = max(1e-4, (1e-8/ε)^{2β−1})`; the polygon has `m + 2` vertices.
pub fn make_curvilinear_triangle(beta: f64, epsilon: f64, m: usize) -> Result<Polygon> {
    if !(beta > 0.5 && beta < 1.0) {
        return invalid(format!("beta must lie in (1/2, 1), got {beta}"));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return invalid(format!("epsilon must be positive, got {epsilon}"));
    }
    if m < 16 {
        return invalid(format!("curve resolution must be at least 16, got {m}"));
    }
    let k = 1.0 / (2.0 * beta - 1.0);
    let mut v = vec![[0.0, 0.0], [1.0, 0.0]];
    for x in curvilinear_abscissae(beta, epsilon, m) {
        v.push([x, epsilon * x.powf(k)]);
    }
    Polygon::new(v)
}

/// Heights of the cross-sections of the cusp ladder, from `eta` down to the tip.
fn cusp_stations(profile: &CuspProfile, h: f64) -> Vec<f64> {
    let eta = profile.eta;
    let t_min = 1e-4 * eta;
    let mut ts = vec![eta];
    let mut t = eta;
    loop {
        let step = h.min(CUSP_STATION_RATIO * t);
        t -= step;
        if t < t_min || profile.half_width(t) < MIN_WIDTH {
            break;
        }
        ts.push(t);
    }
    ts
}

/// Cap closing the cusp above `x_n = η`: the circle through `(±W, η)` tangent
/// to the walls there, `W = εF(η)`.  Returns the arc from `(W, η)` over the top
/// to `(−W, η)`, excluding both ends.
fn cusp_cap(profile: &CuspProfile, segments: usize) -> Vec<Point> {
    let eta = profile.eta;
    let w = profile.half_width(eta);
    let s = profile.epsilon * profile.df(eta);
    let center = [0.0, eta + w * s];
    let radius = w * (1.0 + s * s).sqrt();
    let a0 = (eta - center[1]).atan2(w);
    let a1 = PI - a0;
    (1..segments)
        .map(|k| {
            let a = a0 + (a1 - a0) * k as f64 / segments as f64;
            [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
        })
        .collect()
}

fn cap_segments(profile: &CuspProfile, h: f64) -> usize {
    let w = profile.half_width(profile.eta);
    let s = profile.epsilon * profile.df(profile.eta);
    let radius = w * (1.0 + s * s).sqrt();
    let sweep = PI + 2.0 * s.atan();
    ((sweep * radius / h).ceil() as usize).max(16)
}

/// Number of nodes across the cusp ladder.
fn cusp_layers(profile: &CuspProfile, h: f64) -> usize {
    ((2.0 * profile.half_width(profile.eta) / h).ceil() as usize).max(4)
}

/// Polygonal cusp `{0 < x_n ≤ η, |x′| < εF(x_n)}` closed by a rounded cap,
/// tip at the origin; `h` sets the wall sampling and cap resolution.
pub fn make_cusp_domain(profile: &CuspProfile, h: f64) -> Result<Polygon> {
    profile.validate()?;
    Ok(cusp_geometry(profile, h)?.0)
}

type CuspGeometry = (Polygon, Vec<(Point, Point)>, Vec<Point>);

fn cusp_geometry(profile: &CuspProfile, h: f64) -> Result<CuspGeometry> {
    if !(h > 0.0) {
        return invalid(format!("mesh size must be positive, got {h}"));
    }
    let ts = cusp_stations(profile, h);
    let stations: Vec<(Point, Point)> = ts
        .iter()
        .map(|&t| {
            let w = profile.half_width(t);
            ([-w, t], [w, t])
        })
        .collect();
    let cap = cusp_cap(profile, cap_segments(profile, h));
    // boundary loop: tip, right wall upwards, cap, left wall downwards
    let mut v = vec![[0.0, 0.0]];
    v.extend(stations.iter().rev().map(|s| s.1));
    v.extend(cap.iter().copied());
    v.extend(stations.iter().map(|s| s.0));
    // the cap arc runs from the right wall to the left wall; the ladder glue expects
    // it from the section's upper (right) end to its lower (left) end
    Ok((Polygon::new(v)?, stations, cap))
}

/// Domain description accepted by the command line and experiment configs.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainSpec {
    Polygon { vertices: Vec<Point> },
    Regular { n: usize, inradius: f64 },
    Sector { theta: f64, r: f64, closure: Closure },
    Cusp { p: f64, epsilon: f64, eta: f64 },
    Curvilinear { beta: f64, epsilon: f64, m: usize },
}

/// How a domain is meshed.
#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    /// Constrained Delaunay refinement, graded at the listed polygon vertices.
    Unstructured { corners: Vec<usize> },
    /// Ladder from the far cross-section to the tip.
    Ladder { stations: Vec<(Point, Point)>, tip: Point },
    /// Cusp ladder glued to a cap meshed by Delaunay refinement.
    Cusp { profile: CuspProfile },
}

/// A polygonal domain together with its meshing layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub spec: DomainSpec,
    pub polygon: Polygon,
    pub layout: Layout,
}

/// Resolution used to build cusp polygons from a [`DomainSpec`].
pub const CUSP_SPEC_RESOLUTION: f64 = 0.05;

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        let (polygon, layout) = match self {
            DomainSpec::Polygon { vertices } => {
                let p = Polygon::new(vertices.clone())?;
                let corners = (0..p.len()).collect();
                (p, Layout::Unstructured { corners })
            }
            DomainSpec::Regular { n, inradius } => {
                let p = make_regular_polygon(*n, *inradius)?;
                let corners = (0..p.len()).collect();
                (p, Layout::Unstructured { corners })
            }
            DomainSpec::Sector { theta, r, closure } => {
                let p = make_sector(SectorSpec::new(*theta, *r)?, *closure)?;
                let n = p.len();
                (p, Layout::Unstructured { corners: vec![0, 1, n - 1] })
            }
            DomainSpec::Curvilinear { beta, epsilon, m } => {
                let p = make_curvilinear_triangle(*beta, *epsilon, *m)?;
                let stations = p.vertices()[2..].iter().map(|&[x, y]| ([x, 0.0], [x, y])).collect();
                (p, Layout::Ladder { stations, tip: [0.0, 0.0] })
            }
            DomainSpec::Cusp { p, epsilon, eta } => {
                let profile = CuspProfile::power(*p, *epsilon, *eta)?;
                let poly = make_cusp_domain(&profile, CUSP_SPEC_RESOLUTION)?;
                (poly, Layout::Cusp { profile })
            }
        };
        Ok(Domain { spec: self.clone(), polygon, layout })
    }
}

impl Domain {
    /// Domain with an explicit polygon and graded corners.
    pub fn from_polygon(polygon: Polygon, corners: Vec<usize>) -> Domain {
        let spec = DomainSpec::Polygon { vertices: polygon.vertices().to_vec() };
        Domain { spec, polygon, layout: Layout::Unstructured { corners } }
    }

    /// Regular `n`-gon inscribed in the circle of radius `radius`, meshed as a
    /// curved boundary without corner grading.
    pub fn disk_approximation(n: usize, radius: f64) -> Result<Domain> {
        let polygon = make_regular_polygon(n, radius * (PI / n as f64).cos())?;
        let spec = DomainSpec::Regular { n, inradius: radius * (PI / n as f64).cos() };
        Ok(Domain { spec, polygon, layout: Layout::Unstructured { corners: vec![] } })
    }

    /// Cusp domain whose polygon resolution follows the mesh size.
    pub fn cusp(profile: CuspProfile, h: f64) -> Result<Domain> {
        profile.validate()?;
        let polygon = make_cusp_domain(&profile, h)?;
        let spec = match profile.family {
            CuspFamily::Power { p } => DomainSpec::Cusp { p, epsilon: profile.epsilon, eta: profile.eta },
            CuspFamily::Tabulated { .. } => DomainSpec::Polygon { vertices: polygon.vertices().to_vec() },
        };
        Ok(Domain { spec, polygon, layout: Layout::Cusp { profile } })
    }

    /// Corner vertices that receive grading.
    pub fn corners(&self) -> Vec<usize> {
        match &self.layout {
            Layout::Unstructured { corners } => corners.clone(),
            Layout::Ladder { .. } | Layout::Cusp { .. } => vec![],
        }
    }

    /// Initial mesh of the domain.
    pub fn mesh(&self, params: MeshParams) -> Result<TriMesh> {
        match &self.layout {
            Layout::Unstructured { corners } => triangulate_with_corners(&self.polygon, corners, params),
            Layout::Ladder { stations, tip } => {
                let top = stations.iter().map(|s| (s.1[1] - s.0[1]).abs()).fold(0.0, f64::max);
                let layers = ((top / params.h).ceil() as usize).max(4);
                ladder_mesh(&self.polygon, stations, *tip, layers, None, params.h, &[])
            }
            Layout::Cusp { profile } => {
                let (poly, stations, cap) = cusp_geometry(profile, params.h)?;
                if poly != self.polygon {
                    return invalid(
                        "cusp domain polygon was built for a different mesh size; use Domain::cusp with this h",
                    );
                }
                let layers = cusp_layers(profile, params.h);
                // the ladder glue walks the first section lower → upper, then the arc back
                ladder_mesh(&self.polygon, &stations, [0.0, 0.0], layers, Some(&cap), params.h, &[])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curvilinear_examples() {
        let p = make_curvilinear_triangle(0.75, 0.1, 64).unwrap();
        assert_eq!(p.len(), 66);
        for v in &p.vertices()[2..] {
            assert!((v[1] - 0.1 * v[0] * v[0]).abs() < 1e-16);
        }
        let p = make_curvilinear_triangle(0.6, 0.05, 128).unwrap();
        for v in &p.vertices()[2..] {
            assert!((v[1] - 0.05 * v[0].powi(5)).abs() < 1e-15 * v[1].max(1e-300) + 1e-18);
        }
        assert!(make_curvilinear_triangle(0.5, 0.1, 64).is_err());
        assert!(make_curvilinear_triangle(0.75, 0.1, 8).is_err());
    }

    #[test]
    fn cusp_profile_validation() {
        assert!(CuspProfile::power(1.0, 0.5, 1.0).is_err());
        let bad = CuspProfile {
            family: CuspFamily::Tabulated { t: vec![0.0, 1.0], f: vec![0.1, 0.5] },
            epsilon: 1.0,
            eta: 1.0,
        };
        assert!(bad.validate().is_err());
        let good = CuspProfile {
            family: CuspFamily::Tabulated { t: vec![0.0, 0.5, 1.0], f: vec![0.0, 0.1, 0.5] },
            epsilon: 1.0,
            eta: 1.0,
        };
        assert!(good.validate().is_ok());
        assert!((good.f(0.75) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn cusp_walls_follow_profile() {
        let prof = CuspProfile::power(2.0, 0.5, 1.0).unwrap();
        let p = make_cusp_domain(&prof, 0.05).unwrap();
        let mut walls = 0;
        for v in p.vertices() {
            if v[1] <= 1.0 && v[1] > 0.0 {
                assert!((v[0].abs() - 0.5 * v[1] * v[1]).abs() < 1e-15);
                walls += 1;
            }
        }
        assert!(walls > 20);
        assert_eq!(p.vertex(0), [0.0, 0.0]);
    }

    #[test]
    fn cusp_cap_is_tangent() {
        let prof = CuspProfile::power(2.0, 0.5, 1.0).unwrap();
        let cap = cusp_cap(&prof, 64);
        let w = prof.half_width(1.0);
        let s = prof.epsilon * prof.df(1.0);
        let c = [0.0, 1.0 + w * s];
        let r = w * (1.0 + s * s).sqrt();
        for p in &cap {
            assert!(((p[0] - c[0]).hypot(p[1] - c[1]) - r).abs() < 1e-14);
        }
        // radius vector at the wall point is normal to the wall direction (s, 1)
        let rv = [w - c[0], 1.0 - c[1]];
        assert!((rv[0] * s + rv[1]).abs() < 1e-14);
    }

    #[test]
    fn sector_polygons() {
        let spec = SectorSpec::new(PI / 3.0, 1.0).unwrap();
        let arc = make_sector(spec, Closure::Arc).unwrap();
        assert!(arc.area() < PI / 3.0 && arc.area() > PI / 3.0 * 0.999);
        let chord = make_sector(spec, Closure::Chord).unwrap();
        assert_eq!(chord.len(), 3);
        assert!(make_sector(SectorSpec::new(2.0, 1.0).unwrap(), Closure::Chord).is_err());
        assert!(SectorSpec::new(PI, 1.0).is_err());
    }

    #[test]
    fn domain_json_round_trip() {
        let text = r#"{"type":"sector","theta":1.0,"r":2.0,"closure":"arc"}"#;
        let spec: DomainSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec, DomainSpec::Sector { theta: 1.0, r: 2.0, closure: Closure::Arc });
        let back: DomainSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        let reg: DomainSpec = serde_json::from_str(r#"{"type":"regular","n":6,"inradius":1}"#).unwrap();
        assert_eq!(reg.build().unwrap().polygon.len(), 6);
    }

    #[test]
    fn ladder_meshes_cover_their_domains() {
        let d = DomainSpec::Curvilinear { beta: 0.75, epsilon: 0.1, m: 64 }.build().unwrap();
        let m = d.mesh(MeshParams::new(0.05, 0.5, 0)).unwrap();
        assert!((m.total_area() - d.polygon.area()).abs() < 1e-12 * d.polygon.area());
        for t in &m.triangles {
            assert!(t.iter().any(|&k| !m.boundary[k]));
        }
        let prof = CuspProfile::power(2.0, 0.5, 1.0).unwrap();
        let d = Domain::cusp(prof, 0.1).unwrap();
        let m = d.mesh(MeshParams::new(0.1, 0.5, 0)).unwrap();
        assert!((m.total_area() - d.polygon.area()).abs() < 1e-10 * d.polygon.area());
        for t in &m.triangles {
            assert!(t.iter().any(|&k| !m.boundary[k]));
        }
    }
}

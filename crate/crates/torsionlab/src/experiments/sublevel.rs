use super::{Check, ExperimentReport, MeshConfig, Series, Table};
use crate::error::{Error, Result};
use crate::geometry::{Domain, MeshParams, Polygon, TriMesh};
use crate::measures::beta_integral_value;
use crate::quad::triangle_rule_7;
use crate::solver::{richardson, solve_sequence, ScalarField};
use crate::Point;
use std::f64::consts::PI;

/// Exponent `γ` of the sublevel chain; the matching `β = γ/(1−γ)` is ½.
pub const CHAIN_GAMMA: f64 = 1.0 / 3.0;

/// Rays used for the sublevel area quadrature.
const AREA_RAYS: usize = 4096;

/// Convex test functions with `v(0) = 0`, `∇v(0) = 0` and `Δv ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TestFunction {
    /// `|x|²`.
    Paraboloid,
    /// `x₁² + x₂⁴`.
    Quartic,
    /// `x₁² + ε x₂²`.
    Anisotropic { epsilon: f64 },
}

impl TestFunction {
    pub fn eval(&self, x: Point) -> f64 {
        match *self {
            TestFunction::Paraboloid => x[0] * x[0] + x[1] * x[1],
            TestFunction::Quartic => x[0] * x[0] + x[1].powi(4),
            TestFunction::Anisotropic { epsilon } => x[0] * x[0] + epsilon * x[1] * x[1],
        }
    }

    pub fn laplacian(&self, x: Point) -> f64 {
        match *self {
            TestFunction::Paraboloid => 4.0,
            TestFunction::Quartic => 2.0 + 12.0 * x[1] * x[1],
            TestFunction::Anisotropic { epsilon } => 2.0 + 2.0 * epsilon,
        }
    }

    pub fn name(&self) -> String {
        match self {
            TestFunction::Paraboloid => "paraboloid".into(),
            TestFunction::Quartic => "quartic".into(),
            TestFunction::Anisotropic { epsilon } => format!("anisotropic-{epsilon}"),
        }
    }

    fn validate(&self) -> Result<()> {
        if let TestFunction::Anisotropic { epsilon } = *self {
            if !(epsilon > 0.0 && epsilon.is_finite()) {
                return Err(Error::InvalidTestFunction(format!("epsilon must be positive, got {epsilon}")));
            }
        }
        Ok(())
    }
}

/// Distance from the origin to `{v = t}` along the unit direction `d`.
fn ray_crossing(f: &TestFunction, t: f64, d: Point) -> Result<f64> {
    let at = |r: f64| f.eval([r * d[0], r * d[1]]);
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut k = 0;
    while at(hi) < t {
        lo = hi;
        hi *= 2.0;
        k += 1;
        if k > 200 {
            return Err(Error::InvalidTestFunction(format!("sublevel set {{v < {t}}} is unbounded along {d:?}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inscribed polygon of `{v < t}` through the boundary crossings of `m`
/// equally spaced rays from the origin, checked for convexity and `Δv ≥ 2`.
pub fn polygonize_sublevel(f: &TestFunction, t: f64, m: usize) -> Result<Polygon> {
    f.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidTestFunction(format!("level must be positive, got {t}")));
    }
    if m < 8 {
        return Err(Error::InvalidTestFunction(format!("need at least 8 rays, got {m}")));
    }
    let mut v = Vec::with_capacity(m);
    for k in 0..m {
        let phi = 2.0 * PI * k as f64 / m as f64;
        let d = [phi.cos(), phi.sin()];
        let r = ray_crossing(f, t, d)?;
        v.push([r * d[0], r * d[1]]);
    }
    let poly = Polygon::new(v).map_err(|e| Error::InvalidTestFunction(format!("sublevel polygon: {e}")))?;
    if !poly.is_convex() {
        return Err(Error::InvalidTestFunction(format!("sublevel set {{v < {t}}} is not convex")));
    }
    for &p in poly.vertices() {
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let x = [s * p[0], s * p[1]];
            if f.laplacian(x) < 2.0 {
                return Err(Error::InvalidTestFunction(format!("laplacian {} < 2 at {x:?}", f.laplacian(x))));
            }
        }
    }
    Ok(poly)
}

/// `|{v < t}| = ½∫ r(φ)² dφ` by the periodic trapezoid rule.
fn sublevel_set_area(f: &TestFunction, t: f64) -> Result<f64> {
    let mut s = 0.0;
    for k in 0..AREA_RAYS {
        let phi = 2.0 * PI * k as f64 / AREA_RAYS as f64;
        let r = ray_crossing(f, t, [phi.cos(), phi.sin()])?;
        s += r * r;
    }
    Ok(PI * s / AREA_RAYS as f64)
}

/// `∫ g(x, u(x))` over the mesh with the 7-point rule and linear `u`.
fn mesh_integral(field: &ScalarField, g: impl Fn(Point, f64) -> f64) -> f64 {
    let mesh: &TriMesh = &field.mesh;
    let rule = triangle_rule_7();
    let mut s = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let p = mesh.vertices_of(t);
        let u = [field.values[tri[0]], field.values[tri[1]], field.values[tri[2]]];
        let a = mesh.triangle_area(t);
        for (b, w) in rule.iter() {
            let x =
                [b[0] * p[0][0] + b[1] * p[1][0] + b[2] * p[2][0], b[0] * p[0][1] + b[1] * p[1][1] + b[2] * p[2][1]];
            s += a * w * g(x, b[0] * u[0] + b[1] * u[1] + b[2] * u[2]);
        }
    }
    s
}

/// Both sides of `∫(Δv)^γ ≤ t^γ |Ω_t|^γ (∫u^{−β})^{1−γ}` on `Ω_t = {v < t}`,
/// the graph-volume identity `∫(t − v) = ∫Δv·u`, and `|Ω_t|/t`.  The
/// anisotropic family `x₁² + εx₂²` is appended to show `|Ω_t|/t = π/√ε`.
pub fn exp_sublevel_chain(f: &TestFunction, ts: &[f64], mesh: &MeshConfig) -> Result<ExperimentReport> {
    f.validate()?;
    mesh.validate()?;
    if ts.is_empty() {
        return Err(Error::InvalidArgument("need at least one level t".into()));
    }
    let gamma = CHAIN_GAMMA;
    let beta = gamma / (1.0 - gamma);
    let mut table = Table::new(&[
        "t",
        "area",
        "area_over_t",
        "beta_integral",
        "budget",
        "lhs",
        "rhs",
        "chain_margin",
        "graph_volume",
        "laplacian_moment",
        "graph_gap",
        "domain_hash",
        "h",
        "residual",
    ]);
    let mut chain_ok = true;
    let mut worst_gap: f64 = 0.0;
    let mut series = Vec::new();
    for &t in ts {
        let poly = polygonize_sublevel(f, t, 256)?;
        let h = mesh.h0 * 0.5 * poly.diameter();
        let dom = Domain::from_polygon(poly.clone(), vec![]);
        let fields = solve_sequence(&dom, MeshParams::new(h, mesh.q, mesh.depth), mesh.levels)?;
        let vals = fields.iter().map(|fl| beta_integral_value(fl, beta)).collect::<Result<Vec<_>>>()?;
        let b = richardson(&vals)?.budget.max((vals[vals.len() - 1] - vals[vals.len() - 2]).abs());
        let integral = *vals.last().unwrap();
        let fine = fields.last().unwrap();
        let omega = fine.mesh.total_area();
        let lhs = mesh_integral(fine, |x, _| f.laplacian(x).powf(gamma));
        let rhs = (t * omega).powf(gamma) * (integral + b).powf(1.0 - gamma);
        chain_ok &= lhs <= rhs;
        let graph = mesh_integral(fine, |x, _| t - f.eval(x));
        let moment = mesh_integral(fine, |x, u| f.laplacian(x) * u);
        let gap = (graph - moment).abs() / graph;
        worst_gap = worst_gap.max(gap);
        let area = sublevel_set_area(f, t)?;
        series.push((t, area / t));
        table.push(vec![
            t.into(),
            area.into(),
            (area / t).into(),
            integral.into(),
            b.into(),
            lhs.into(),
            rhs.into(),
            (rhs / lhs).into(),
            graph.into(),
            moment.into(),
            gap.into(),
            super::domain_hash(&poly).into(),
            fine.h.into(),
            fine.residual.into(),
        ]);
    }
    let mut rep = ExperimentReport::new("sublevel", table);
    rep.checks.push(Check::new("chain", chain_ok, format!("gamma = {gamma}, beta = {beta}")));
    rep.checks.push(Check::new(
        "graph-volume",
        worst_gap <= 1e-2,
        format!("largest relative gap between int(t - v) and int(lap v * u): {worst_gap:.3e}"),
    ));
    if *f == TestFunction::Paraboloid {
        let worst = series.iter().map(|(_, r)| (r - PI).abs() / PI).fold(0.0, f64::max);
        rep.checks.push(Check::new("disc-area", worst <= 1e-3, format!("|area/t - pi|/pi = {worst:.3e}")));
    }
    rep.series.push(Series::new("area_over_t", "t", "area/t", series));

    let t0 = ts[0];
    let mut blow = Vec::new();
    let mut worst: f64 = 0.0;
    for eps in [1e-1, 1e-2, 1e-3] {
        let a = sublevel_set_area(&TestFunction::Anisotropic { epsilon: eps }, t0)? / t0;
        let want = PI / eps.sqrt();
        worst = worst.max((a - want).abs() / want);
        blow.push((eps, a));
        rep.notes.push(format!("anisotropic eps = {eps}: area/t = {a:.10} (ellipse value {want:.10})"));
    }
    let grows = blow.windows(2).all(|w| w[1].1 > w[0].1);
    rep.checks.push(Check::new(
        "anisotropic-blow-up",
        worst <= 1e-3 && grows,
        format!("area/t against pi/sqrt(eps): largest relative deviation {worst:.3e}"),
    ));
    rep.series.push(Series::new("anisotropic", "epsilon", "area/t", blow));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_sublevel() {
        let p = polygonize_sublevel(&TestFunction::Paraboloid, 0.25, 64).unwrap();
        assert!(p.vertices().iter().all(|v| ((v[0] * v[0] + v[1] * v[1]).sqrt() - 0.5).abs() < 1e-12));
        let a = sublevel_set_area(&TestFunction::Paraboloid, 0.25).unwrap();
        assert!((a - PI * 0.25).abs() < 1e-12);
    }

    #[test]
    fn ellipse_area() {
        let f = TestFunction::Anisotropic { epsilon: 1e-3 };
        let a = sublevel_set_area(&f, 0.5).unwrap();
        let want = PI * 0.5 / 1e-3f64.sqrt();
        assert!((a - want).abs() < 1e-9 * want, "{a} vs {want}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            polygonize_sublevel(&TestFunction::Anisotropic { epsilon: -1.0 }, 1.0, 64),
            Err(Error::InvalidTestFunction(_))
        ));
        assert!(polygonize_sublevel(&TestFunction::Quartic, 0.0, 64).is_err());
    }
}

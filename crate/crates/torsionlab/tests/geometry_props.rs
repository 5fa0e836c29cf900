use proptest::prelude::*;
use std::f64::consts::PI;
use torsionlab::geometry::{
    convex_descriptors, make_rectangle, make_regular_polygon, make_sector, polygon_distance, refine_red,
    triangulate_with_corners, Closure, MeshParams, Polygon, SectorSpec,
};

/// Star-shaped polygon with radii `rs` on equally spaced rays.
fn star(rs: &[f64]) -> Polygon {
    let n = rs.len();
    let v = rs
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let a = 2.0 * PI * k as f64 / n as f64;
            [r * a.cos(), r * a.sin()]
        })
        .collect();
    Polygon::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_one_lipschitz(rs in prop::collection::vec(0.5f64..1.5, 5..12),
                                 a in prop::array::uniform2(-2.0f64..2.0),
                                 b in prop::array::uniform2(-2.0f64..2.0)) {
        let p = star(&rs);
        let d = (a[0] - b[0]).hypot(a[1] - b[1]);
        prop_assert!((polygon_distance(&p, a) - polygon_distance(&p, b)).abs() <= d + 1e-12);
    }

    #[test]
    fn distance_vanishes_on_vertices_and_is_positive_inside(rs in prop::collection::vec(0.5f64..1.5, 5..12)) {
        let p = star(&rs);
        for &v in p.vertices() {
            prop_assert!(polygon_distance(&p, v) < 1e-14);
        }
        prop_assert!(p.contains([0.0, 0.0]));
        prop_assert!(polygon_distance(&p, [0.0, 0.0]) > 0.0);
    }

    #[test]
    fn regular_polygon_descriptors(n in 3usize..40, r in 0.1f64..5.0) {
        let p = make_regular_polygon(n, r).unwrap();
        let d = convex_descriptors(&p).unwrap();
        prop_assert!((d.inradius - r).abs() <= 1e-9 * r);
        prop_assert!((d.circumradius - r / (PI / n as f64).cos()).abs() <= 1e-9 * r);
        let area = n as f64 * r * r * (PI / n as f64).tan();
        prop_assert!((p.area() - area).abs() <= 1e-12 * area);
    }

    #[test]
    fn mesh_tiles_the_polygon(w in 0.5f64..2.0, h in 0.5f64..2.0, size in 0.15f64..0.4) {
        let p = make_rectangle(0.0, 0.0, w, h).unwrap();
        let m = triangulate_with_corners(&p, &[0, 1, 2, 3], MeshParams::new(size, 0.5, 2)).unwrap();
        prop_assert!((m.total_area() - p.area()).abs() <= 1e-12 * p.area());
        prop_assert!((0..m.triangles.len()).all(|t| m.triangle_area(t) > 0.0));
        let r = refine_red(&m).unwrap();
        prop_assert_eq!(r.triangles.len(), 4 * m.triangles.len());
        prop_assert!((r.total_area() - p.area()).abs() <= 1e-12 * p.area());
        prop_assert!((r.min_angle() - m.min_angle()).abs() <= 1e-9);
    }

    #[test]
    fn sectors_scale_with_radius(theta in 0.2f64..3.0, r in 0.2f64..3.0) {
        let spec = SectorSpec::new(theta, r).unwrap();
        let unit = make_sector(SectorSpec::new(theta, 1.0).unwrap(), Closure::Arc).unwrap();
        let p = make_sector(spec, Closure::Arc).unwrap();
        prop_assert!((p.area() - r * r * unit.area()).abs() <= 1e-12 * p.area());
        prop_assert!(p.area() <= theta * r * r);
    }
}

use proptest::prelude::*;
use torsionlab::barriers::disk_solution;
use torsionlab::geometry::{make_rectangle, Domain, MeshParams};
use torsionlab::solver::{global_bounds_gaps, poisson_solve, richardson, solve_sequence, ScalarField};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rectangle_solutions_respect_global_bounds(w in 0.5f64..2.0, h in 0.5f64..2.0) {
        let dom = Domain::from_polygon(make_rectangle(0.0, 0.0, w, h).unwrap(), vec![0, 1, 2, 3]);
        let f = poisson_solve(dom.mesh(MeshParams::new(0.1, 0.5, 3)).unwrap()).unwrap();
        let (lower, upper) = global_bounds_gaps(&f);
        prop_assert!(lower >= -1e-3 && upper >= -1e-3, "{lower} {upper}");
        prop_assert!(f.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn record_round_trip(w in 0.5f64..2.0) {
        let dom = Domain::from_polygon(make_rectangle(0.0, 0.0, w, 1.0).unwrap(), vec![0, 1, 2, 3]);
        let f = poisson_solve(dom.mesh(MeshParams::new(0.2, 0.5, 2)).unwrap()).unwrap();
        let text = serde_json::to_string(&f.to_record()).unwrap();
        let g = ScalarField::from_record(serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(f, g);
    }
}

#[test]
fn disk_converges_at_second_order() {
    let dom = Domain::disk_approximation(128, 1.0).unwrap();
    let fields = solve_sequence(&dom, MeshParams::new(0.2, 0.5, 0), 3).unwrap();
    let errs: Vec<f64> = fields
        .iter()
        .map(|f| {
            f.mesh
                .nodes
                .iter()
                .zip(&f.values)
                .filter(|(p, _)| p[0].hypot(p[1]) < 0.9)
                .map(|(p, v)| (v - disk_solution(1.0, p).unwrap()).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    assert!(errs[2] < errs[1] && errs[1] < errs[0], "{errs:?}");
    assert!(errs[2] < 2e-3, "{errs:?}");
}

#[test]
fn richardson_budget_shrinks_for_smooth_sequences() {
    let vals: Vec<f64> = (0..4).map(|k| 1.0 + 0.3 * 0.25f64.powi(k)).collect();
    let r = richardson(&vals).unwrap();
    assert!((r.extrapolated - 1.0).abs() < 1e-12);
    assert!((r.order - 2.0).abs() < 1e-9);
}

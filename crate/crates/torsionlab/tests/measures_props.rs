use proptest::prelude::*;
use std::sync::OnceLock;
use torsionlab::geometry::{make_l_shape, unit_square, Domain, MeshParams};
use torsionlab::measures::{
    beta_integral, beta_integral_value, linear_power_integral, linear_power_integral_exact, sublevel_areas,
    sublevel_measure, torsional_rigidity,
};
use torsionlab::solver::{poisson_solve, ScalarField};

fn l_field() -> &'static ScalarField {
    static F: OnceLock<ScalarField> = OnceLock::new();
    F.get_or_init(|| {
        let dom = Domain::from_polygon(make_l_shape(), (0..6).collect());
        poisson_solve(dom.mesh(MeshParams::new(0.15, 0.5, 3)).unwrap()).unwrap()
    })
}

fn triangle() -> impl Strategy<Value = [[f64; 2]; 3]> {
    prop::array::uniform3(prop::array::uniform2(-1.0f64..1.0)).prop_filter("non-degenerate", |p| {
        let a = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        a.abs() > 1e-3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_covariance(beta in 0.05f64..0.95, c in 1e-3f64..1e3) {
        let f = l_field();
        let base = beta_integral_value(f, beta).unwrap();
        let scaled = beta_integral_value(&f.scaled(c), beta).unwrap();
        prop_assert!((scaled - c.powf(-beta) * base).abs() <= 1e-12 * scaled);
    }

    #[test]
    fn sublevel_partition_and_monotonicity(l1 in 1e-4f64..0.1, dl in 1e-4f64..0.05) {
        let f = l_field();
        let total: f64 = sublevel_areas(f, l1).iter().sum();
        let m1 = sublevel_measure(f, l1);
        prop_assert!((total - m1).abs() <= 1e-12 * f.mesh.total_area());
        prop_assert!(sublevel_measure(f, l1 + dl) >= m1);
        prop_assert!(m1 <= f.mesh.total_area());
    }

    #[test]
    fn per_triangle_rule_matches_closed_form(p in triangle(), u in prop::array::uniform3(0.0f64..1.0),
                                             beta in 0.05f64..0.95) {
        prop_assume!(u.iter().any(|&v| v > 1e-3));
        let got = linear_power_integral(p, u, beta, 0.0).unwrap();
        let want = linear_power_integral_exact(p, u, beta);
        prop_assert!((got - want).abs() <= 1e-5 * want, "{got} vs {want}");
    }

    #[test]
    fn beta_integral_increases_with_beta(b1 in 0.05f64..0.85, db in 0.01f64..0.1) {
        // max u < 1 on the L-shape, so u^{−β} grows with β
        let f = l_field();
        prop_assert!(beta_integral_value(f, b1 + db).unwrap() > beta_integral_value(f, b1).unwrap());
    }
}

#[test]
fn corner_contributions_sum_below_total() {
    let r = beta_integral(l_field(), 0.5).unwrap();
    let corners: f64 = r.corner_contributions.iter().map(|c| c.value).sum();
    assert!(corners > 0.0 && corners < r.value);
    assert_eq!(r.corner_contributions.len(), 6);
}

#[test]
fn rigidity_energy_identity_on_square() {
    let dom = Domain::from_polygon(unit_square(), vec![0, 1, 2, 3]);
    let f = poisson_solve(dom.mesh(MeshParams::new(0.05, 0.5, 4)).unwrap()).unwrap();
    let r = torsional_rigidity(&f);
    assert!(r.mismatch <= 1e-8 * r.integral_u);
}

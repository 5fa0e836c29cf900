use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI};
use torsionlab::barriers::{
    disk_beta_integral_exact, sector_barrier, sector_beta_integral_exact, sector_constant, slab_beta_integral_exact,
    triangle_barrier,
};
use torsionlab::quad::tanh_sinh;

fn fd_neg_laplacian(f: &dyn Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
    -(f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sector_barrier_pde_and_sign(theta in 0.2f64..3.0, r in 0.5f64..2.0, s in 0.15f64..0.85, t in -0.85f64..0.85) {
        let (rho, w) = (s * r, t * theta);
        let v = |x: f64, y: f64| sector_barrier(theta, r, x.hypot(y), y.atan2(x)).unwrap();
        let (x, y) = (rho * w.cos(), rho * w.sin());
        prop_assert!(v(x, y) > 0.0);
        let res = fd_neg_laplacian(&v, x, y, 1e-4 * r) - (PI * w / (2.0 * theta)).cos();
        prop_assert!(res.abs() <= 1e-4, "residual {res}");
    }

    #[test]
    fn sector_barrier_scales_quadratically(theta in 0.2f64..3.0, r in 0.5f64..2.0, c in 0.1f64..10.0,
                                           s in 0.0f64..1.0, t in -1.0f64..1.0) {
        let a = sector_barrier(theta, c * r, c * s * r, t * theta).unwrap();
        let b = sector_barrier(theta, r, s * r, t * theta).unwrap();
        prop_assert!((a - c * c * b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn sector_integral_scaling(theta in 0.1f64..3.1, beta in 0.05f64..0.95, r in 0.1f64..10.0) {
        let one = sector_beta_integral_exact(theta, 1.0, beta).unwrap();
        let at_r = sector_beta_integral_exact(theta, r, beta).unwrap();
        prop_assert!((at_r - one * r.powf(2.0 * (1.0 - beta))).abs() <= 1e-12 * at_r);
        prop_assert!(sector_constant(theta, beta).unwrap() > 0.0);
    }

    #[test]
    fn sector_constant_increases_with_beta(theta in 0.1f64..3.1, b1 in 0.05f64..0.9, db in 0.01f64..0.05) {
        // v ≤ max v < 1 on the unit sector, so v^{−β} grows with β
        let lo = sector_constant(theta, b1).unwrap();
        let hi = sector_constant(theta, b1 + db).unwrap();
        prop_assert!(hi > lo);
    }

    #[test]
    fn triangle_barrier_pde(open in 0.2f64..1.5, x in 0.2f64..1.0, f in 0.1f64..0.9) {
        let y = f * x * open.tan();
        let v = |x: f64, y: f64| triangle_barrier(open, x, y).unwrap();
        prop_assert!((fd_neg_laplacian(&v, x, y, 1e-4) - 1.0).abs() <= 1e-4);
    }

    #[test]
    fn slab_matches_quadrature(eps in 0.1f64..3.0, beta in 0.05f64..0.95) {
        let q = tanh_sinh(|_, lo, hi| (0.5 * lo * hi).powf(-beta), -eps, eps, 1e-12).unwrap();
        let e = slab_beta_integral_exact(eps, beta).unwrap();
        prop_assert!((q - e).abs() <= 1e-9 * e);
    }

    #[test]
    fn disk_matches_radial_quadrature(radius in 0.2f64..3.0, beta in 0.05f64..0.95) {
        // (R² − ρ²)/4 = (R − ρ)(R + ρ)/4
        let q = tanh_sinh(|rho, _, d| 2.0 * PI * rho * (0.25 * d * (radius + rho)).powf(-beta), 0.0, radius, 1e-12)
            .unwrap();
        let e = disk_beta_integral_exact(2, radius, beta).unwrap();
        prop_assert!((q - e).abs() <= 1e-9 * e);
    }
}

#[test]
fn middle_line_is_continuous() {
    for beta in [0.1, 0.5, 0.9] {
        let mid = sector_constant(FRAC_PI_4, beta).unwrap();
        for s in [-1.0, 1.0] {
            let near = sector_constant(FRAC_PI_4 + s * 1e-6, beta).unwrap();
            let far = sector_constant(FRAC_PI_4 + s * 2e-6, beta).unwrap();
            assert!((2.0 * near - far - mid).abs() <= 1e-8 * mid);
        }
    }
}

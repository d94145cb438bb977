use std::sync::Arc;

use massratio::bvp::{self, DEFAULT_TOL};
use massratio::grid::{integrate_weighted, make_grid, Domain};
use massratio::subsuper::{self, ConstantsPoint, ExplicitFamily, ROUNDING_SLACK};
use massratio::sweep::grid_size;
use massratio::Error;

#[test]
fn region_membership() {
    let inside = [(2, 0.05, 0.2), (3, 0.04, 0.15)];
    for (n, c1, c2) in inside {
        let p = ConstantsPoint::new(n, c1, c2).unwrap();
        assert!(subsuper::region_contains(&p));
        assert!(p.margins().iter().all(|&m| m > 0.0));
    }
    let p = ConstantsPoint::new(2, 0.5, 0.5).unwrap();
    assert!(!subsuper::region_contains(&p));
    assert!(matches!(
        ConstantsPoint::new(1, 0.1, 0.1),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn vertices_bound_the_region() {
    for n in [2, 3, 4] {
        let v = subsuper::region_vertices(n).unwrap();
        let k = v.len() as f64;
        let (c1, c2) = v.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / k, a.1 + p.1 / k));
        assert!(
            subsuper::region_contains(&ConstantsPoint::new(n, c1, c2).unwrap()),
            "n {n}"
        );
    }
}

#[test]
fn residual_signs_for_reference_constants() {
    for (n, c1, c2) in [(2, 0.05, 0.2), (3, 0.04, 0.15)] {
        let scan = subsuper::scan_threshold_nd(n, c1, c2, 6, 4096).unwrap();
        assert_eq!(scan.threshold, Some(0.1), "n {n}: {scan:?}");
    }
}

#[test]
fn explicit_sub_is_c1_at_eps() {
    let fam = ExplicitFamily::new(2, 1e-4, 0.05, 0.2).unwrap();
    let eps = 1e-4;
    let jump = (fam.sub_inner(eps) - fam.sub_outer(eps)).abs() / fam.sub_outer(eps);
    let djump = (fam.sub_inner_derivative(eps) - fam.sub_outer_derivative(eps)).abs()
        / fam.sub_outer_derivative(eps).abs();
    assert!(jump <= 1e-12 && djump <= 1e-12);
    assert!(fam.sub(0.0) <= fam.sup());
}

#[test]
fn analytic_l1_matches_quadrature() {
    for (n, eps, c1, c2) in [(2, 1e-3, 0.05, 0.2), (3, 1e-3, 0.04, 0.15)] {
        let fam = ExplicitFamily::new(n, eps, c1, c2).unwrap();
        let fine = Arc::new(make_grid(Domain::ball(n).unwrap(), 1 << 16, eps).unwrap());
        let quad = integrate_weighted(&fam.sample_sub(&fine).unwrap(), n);
        let exact = subsuper::analytic_sub_l1(n, eps, c2).unwrap();
        assert!((quad - exact).abs() <= 1e-6 * exact, "n {n}: {quad} vs {exact}");
    }
}

#[test]
fn interval_sub_solution_for_small_eps() {
    for eps in [1e-3, 1e-4, 1e-5] {
        let grid = Arc::new(make_grid(Domain::interval(), grid_size(4096, eps), eps).unwrap());
        let v = bvp::solve_neumann_reference(eps, &grid, DEFAULT_TOL).unwrap();
        let sub = subsuper::build_sub_1d(&v, eps).unwrap();
        let res = subsuper::residual_1d(&sub, eps).unwrap();
        assert!(res.min_relative >= -ROUNDING_SLACK, "eps {eps}: {res:?}");
    }
}

#[test]
fn interval_sub_solution_fails_for_large_eps() {
    let grid = Arc::new(make_grid(Domain::interval(), 4096, 0.1).unwrap());
    let v = bvp::solve_neumann_reference(0.1, &grid, DEFAULT_TOL).unwrap();
    let res = subsuper::residual_1d(&subsuper::build_sub_1d(&v, 0.1).unwrap(), 0.1).unwrap();
    assert!(res.min_relative < -ROUNDING_SLACK);
}

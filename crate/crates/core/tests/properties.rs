use std::sync::Arc;

use proptest::prelude::*;

use massratio::grid::{l1_ratio, make_grid, Domain, GridFunction};
use massratio::subsuper::{self, ConstantsPoint, ExplicitFamily};
use massratio::sweep::{self, SweepRecord, STATUS_OK};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratio_is_homogeneous(n in 1usize..4, scale in 0.01f64..100.0, k in 1.0f64..5.0) {
        let grid = Arc::new(make_grid(Domain::for_dimension(n).unwrap(), 128, 0.25).unwrap());
        let m = GridFunction::from_fn(Arc::clone(&grid), |r| 1.0 + k * r).unwrap();
        let u = GridFunction::from_fn(grid, |r| (1.0 - r) * (1.0 + r)).unwrap();
        let base = l1_ratio(&u, &m, n).unwrap();
        let both = l1_ratio(&u.scaled(scale), &m.scaled(scale), n).unwrap();
        let only_u = l1_ratio(&u.scaled(scale), &m, n).unwrap();
        prop_assert!((both - base).abs() <= 1e-12 * base);
        prop_assert!((only_u - scale * base).abs() <= 1e-12 * scale * base);
    }

    #[test]
    fn sub_stays_below_super(n in 2usize..4, a in 0.0f64..1.0, b in 0.0f64..1.0, log_eps in -8.0f64..-2.0, r in 0.0f64..1.0) {
        let v = subsuper::region_vertices(n).unwrap();
        // a point of the convex hull of the first, second and last vertex
        let (s, t) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
        let (p0, p1, p2) = (v[0], v[1], v[v.len() - 1]);
        let c1 = p0.0 + s * (p1.0 - p0.0) + t * (p2.0 - p0.0);
        let c2 = p0.1 + s * (p1.1 - p0.1) + t * (p2.1 - p0.1);
        prop_assume!(c1 > 1e-6 && c2 > 1e-6);
        prop_assume!(subsuper::region_contains(&ConstantsPoint::new(n, c1, c2).unwrap()));
        let fam = ExplicitFamily::new(n, 10f64.powf(log_eps), c1, c2).unwrap();
        prop_assert!(fam.sub(r) <= fam.sup());
        prop_assert!(fam.sub(r) >= 0.0);
    }

    #[test]
    fn grids_are_deterministic(n in 1usize..4, intervals in 64usize..2000, log_eps in -6.0f64..-0.5) {
        let eps = 10f64.powf(log_eps);
        let a = make_grid(Domain::for_dimension(n).unwrap(), intervals, eps).unwrap();
        let b = make_grid(Domain::for_dimension(n).unwrap(), intervals, eps).unwrap();
        prop_assert_eq!(a.nodes(), b.nodes());
        prop_assert_eq!(a.nodes()[a.interface_index()], eps);
        prop_assert!(a.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn json_round_trips(eps in 1e-9f64..1.0, ratio in proptest::option::of(0.0f64..1e6), grid_n in 64usize..1_000_000) {
        let rec = SweepRecord {
            n: 2,
            eps,
            d: eps.sqrt(),
            lambda1: Some(eps.ln().abs()),
            ratio,
            lower_bound: Some(0.5),
            upper_bound: None,
            grid_n,
            wallclock_ms: 0.0,
            status: STATUS_OK.into(),
        };
        let text = sweep::to_json(std::slice::from_ref(&rec)).unwrap();
        prop_assert_eq!(sweep::from_json(&text).unwrap(), vec![rec]);
    }
}

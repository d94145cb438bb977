#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;
use std::sync::Arc;

use massratio::eigen::{self, SpikeProfile};
use massratio::grid::{make_grid, Domain, GridFunction};
use massratio::Error;

// 40-digit reference values for the interval and disc determinants.
const INTERVAL_LAMBDA1: [(f64, f64); 5] = [
    (0.5, 1.4803477687899340844),
    (0.1, 1.0711525715717746528),
    (0.01, 1.0067091399643165548),
    (0.001, 1.0006670891387578018),
    (1e-4, 1.0000666708891386377),
];

const INTERVAL_HIGHER: [(f64, [f64; 3]); 2] = [
    (
        0.1,
        [
            100.90513564024873176,
            397.00305888489343541,
            890.48512936145934694,
        ],
    ),
    (
        0.01,
        [
            988.97960351547855276,
            3949.8617024030386466,
            8884.6640473886001012,
        ],
    ),
];

const DISC_LAMBDA1: [(f64, f64); 4] = [
    (1e-3, 0.27930166228821737384),
    (1e-4, 0.21135903639488918852),
    (1e-6, 0.14217667663784879971),
    (1e-8, 0.10711337782967676229),
];

fn spike_grid(n: usize, eps: f64, intervals: usize) -> Arc<massratio::grid::Grid> {
    Arc::new(make_grid(Domain::for_dimension(n).unwrap(), intervals, eps).unwrap())
}

#[test]
fn interval_principal_values() {
    for (eps, expected) in INTERVAL_LAMBDA1 {
        let got = eigen::lambda_k_interval(eps, 1).unwrap();
        assert!((got - expected).abs() <= 1e-11 * expected, "eps {eps}: {got}");
    }
}

#[test]
fn interval_higher_branches() {
    for (eps, values) in INTERVAL_HIGHER {
        for (k, expected) in values.iter().enumerate() {
            let got = eigen::lambda_k_interval(eps, k + 2).unwrap();
            assert!(
                (got - expected).abs() <= 1e-11 * expected,
                "eps {eps} k {}: {got}",
                k + 2
            );
            let kf = (k + 2) as f64;
            assert!((kf - 1.0).powi(2) * PI * PI / eps < got);
            assert!(got < (kf - 0.5).powi(2) * PI * PI / eps);
        }
    }
}

#[test]
fn disc_values() {
    for (eps, expected) in DISC_LAMBDA1 {
        let got = eigen::lambda1_ball2(eps).unwrap();
        assert!((got - expected).abs() <= 1e-11 * expected, "eps {eps}: {got}");
    }
    let at_limit = eigen::lambda1_ball2((-10f64).exp()).unwrap();
    assert!((at_limit - 0.19508279732349857811).abs() < 1e-11);
    assert!(matches!(
        eigen::lambda1_ball2(0.2),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn discrete_matches_closed_forms() {
    for eps in [0.1, 0.01, 0.001] {
        let grid = spike_grid(1, eps, 4096);
        let m = eigen::sample_spike(&SpikeProfile::new(1, eps).unwrap(), &grid).unwrap();
        let d = eigen::lambda1_discrete(&m, 1).unwrap();
        let exact = eigen::lambda_k_interval(eps, 1).unwrap();
        assert!((d.lambda1 - exact).abs() <= 1e-6 * exact, "eps {eps}");
        assert!(d.residual <= eigen::POWER_TOL);
        assert!(d.eigenfunction.values().iter().all(|&v| v >= 0.0));
    }
    let grid = spike_grid(2, 1e-3, 4096);
    let m = eigen::sample_spike(&SpikeProfile::new(2, 1e-3).unwrap(), &grid).unwrap();
    let d = eigen::lambda1_discrete(&m, 2).unwrap().lambda1;
    let exact = eigen::lambda1_ball2(1e-3).unwrap();
    assert!((d - exact).abs() <= 1e-2 * exact);
}

#[test]
fn closed_form_eigenfunction_is_continuous_at_eps() {
    let eps = 0.1;
    let grid = spike_grid(1, eps, 1024);
    let e = eigen::eigen_interval(eps, &grid).unwrap();
    let phi = e.eigenfunction.values();
    let k = grid.interface_index();
    assert!((phi[k] - phi[k - 1]).abs() < 1e-2);
    assert_eq!(phi[0], 1.0);
    assert_eq!(*phi.last().unwrap(), 0.0);
}

#[test]
fn dimension_three_stays_below_variational_bound() {
    let eps = 1e-2;
    let grid = spike_grid(3, eps, 4096);
    let m = eigen::sample_spike(&SpikeProfile::new(3, eps).unwrap(), &grid).unwrap();
    let l = eigen::lambda1_discrete(&m, 3).unwrap().lambda1;
    let bound = eigen::lambda1_variational_bound(3, eps).unwrap();
    assert!(l <= bound, "{l} > {bound}");
    assert!((l - 0.02487562).abs() < 1e-4);
}

#[test]
fn constant_resource_gives_laplacian_eigenvalues() {
    let z01 = 2.404825557695772769;
    for (n, expected) in [(1, PI * PI / 4.0), (2, z01 * z01)] {
        let grid = spike_grid(n, 0.5, 4096);
        let one = GridFunction::from_fn(grid, |_| 1.0).unwrap();
        let l = eigen::lambda1_discrete(&one, n).unwrap().lambda1;
        assert!((l - expected).abs() <= 1e-4 * expected, "n {n}: {l}");
    }
}

#[test]
fn negative_resource_is_rejected() {
    let grid = spike_grid(1, 0.5, 64);
    let m = GridFunction::from_fn(grid, |r| 0.5 - r).unwrap();
    assert!(matches!(
        eigen::lambda1_discrete(&m, 1),
        Err(Error::InvalidParameter(_))
    ));
}

//! Principal eigenvalue of `Δφ + λ m φ = 0` in the unit ball (or `(-1, 1)`)
//! with `φ = 0` on the boundary.
//!
//! Four routes are provided:
//!
//! * [`lambda_k_interval`]: for the 1D spike the eigenfunction is
//!   `cos(√(λ/ε) r)` inside and linear outside; `C¹` matching gives
//!   `θ tan θ = ε/(1-ε)` with `θ = √(λε)`, one root on each branch
//!   `((k-1)π, (k-½)π)`.
//! * [`lambda1_ball2`]: in the disc the inner profile is `J_0(√λ r/ε)` and the
//!   outer one `log r`, giving `J_0(z) - z J_1(z) |log ε| = 0`, `λ = z²`,
//!   with the smallest root below the first zero of `J_0`.
//! * [`lambda1_variational_bound`]: Rayleigh quotient of `(ε - r)⁺`.
//! * [`lambda1_discrete`]: inverse power iteration on the finite-volume
//!   discretization, for any sampled `m >= 0`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bessel::{self, BesselFamily};
use crate::error::{Error, Result};
use crate::grid::{unit_ball_volume, Grid, GridFunction};
use crate::operator::{Boundary, RadialOperator};
use crate::roots::bisect;

/// Relative tolerance of the transcendental root solves.
pub const ROOT_TOL: f64 = 1e-13;

/// Stopping tolerance of the inverse power iteration (relative eigen-residual).
pub const POWER_TOL: f64 = 1e-10;

pub const POWER_MAX_ITER: usize = 10_000;

/// The resource `m_ε = ε^{-n}` on the closed ball of radius `ε`, zero outside.
/// Its mass is `|B_0(1)|` (2 on the interval) for every `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpikeProfile {
    n: usize,
    eps: f64,
}

impl SpikeProfile {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
        }
        Ok(SpikeProfile { n, eps })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn amplitude(&self) -> f64 {
        self.eps.powi(-(self.n as i32))
    }

    pub fn mass(&self) -> f64 {
        unit_ball_volume(self.n)
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= self.eps {
            self.amplitude()
        } else {
            0.0
        }
    }
}

/// Samples `m_ε` on a grid whose interface node is `ε`. The interface node
/// takes the spike value; its right-hand limit is recorded as 0.
pub fn sample_spike(profile: &SpikeProfile, grid: &Arc<Grid>) -> Result<GridFunction> {
    if grid.eps() != profile.eps {
        return Err(Error::invalid(format!(
            "grid interface {} does not match spike radius {}",
            grid.eps(),
            profile.eps
        )));
    }
    GridFunction::from_fn(Arc::clone(grid), |r| profile.value(r))?.with_outer_value(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenMethod {
    Transcendental1D,
    Bessel2D,
    Discrete,
}

impl EigenMethod {
    pub fn label(&self) -> &'static str {
        match self {
            EigenMethod::Transcendental1D => "transcendental",
            EigenMethod::Bessel2D => "bessel",
            EigenMethod::Discrete => "discrete",
        }
    }
}

/// Principal eigenpair. The eigenfunction is normalised to max 1.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda1: f64,
    pub eigenfunction: GridFunction,
    pub method: EigenMethod,
    /// Determinant defect for the closed-form routes, largest nodewise
    /// relative defect of `Lφ = λMφ` for the discrete route.
    pub residual: f64,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

/// Determinant of the matching conditions in the variable `θ = √(λε)`,
/// rescaled to remove the poles of `tan`: `(1-ε) θ sin θ - ε cos θ`.
fn interval_determinant(eps: f64, theta: f64) -> f64 {
    (1.0 - eps) * theta * theta.sin() - eps * theta.cos()
}

fn interval_theta(eps: f64, k: usize) -> Result<f64> {
    check_eps(eps)?;
    if k == 0 {
        return Err(Error::invalid("eigenvalue index starts at 1"));
    }
    let lo = (k - 1) as f64 * PI;
    let hi = (k as f64 - 0.5) * PI;
    bisect(lo, hi, ROOT_TOL, |t| interval_determinant(eps, t))
}

/// `λ_k(m_ε)` on `(-1, 1)` from `tan √(λε) = √(ε/λ)/(1-ε)`, solved on the
/// `k`-th branch `(k-1)²π²/ε < λ < (k-½)²π²/ε`.
pub fn lambda_k_interval(eps: f64, k: usize) -> Result<f64> {
    let theta = interval_theta(eps, k)?;
    Ok(theta * theta / eps)
}

/// Principal eigenpair of the 1D spike with the closed-form eigenfunction
/// sampled on `grid`.
pub fn eigen_interval(eps: f64, grid: &Arc<Grid>) -> Result<EigenResult> {
    let theta = interval_theta(eps, 1)?;
    let edge = theta.cos();
    let phi = GridFunction::from_fn(Arc::clone(grid), |r| {
        if r <= eps {
            (theta * r / eps).cos()
        } else {
            edge * (1.0 - r) / (1.0 - eps)
        }
    })?;
    Ok(EigenResult {
        lambda1: theta * theta / eps,
        eigenfunction: phi,
        method: EigenMethod::Transcendental1D,
        residual: interval_determinant(eps, theta).abs(),
    })
}

/// Largest `ε` accepted by the disc route (`|log ε| >= 2`).
pub fn ball2_eps_limit() -> f64 {
    (-2.0f64).exp()
}

fn ball2_root(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if eps > ball2_eps_limit() {
        return Err(Error::invalid(format!("disc route needs eps <= e^-2, got {eps}")));
    }
    let log_eps = -eps.ln();
    let z01 = bessel::bessel_zero(BesselFamily::J0, 1)?;
    bisect(1e-12, z01, ROOT_TOL, |z| {
        bessel::j0(z) - z * bessel::j1(z) * log_eps
    })
}

/// `λ_1(m_ε; 2)` from `J_0(√λ) - √λ J_1(√λ) |log ε| = 0`.
pub fn lambda1_ball2(eps: f64) -> Result<f64> {
    let z = ball2_root(eps)?;
    Ok(z * z)
}

/// Principal eigenpair in the disc with `J_0` inside and `log r` outside.
pub fn eigen_ball2(eps: f64, grid: &Arc<Grid>) -> Result<EigenResult> {
    let z = ball2_root(eps)?;
    let log_eps = eps.ln();
    let edge = bessel::j0(z);
    let phi = GridFunction::from_fn(Arc::clone(grid), |r| {
        if r <= eps {
            bessel::j0(z * r / eps)
        } else {
            edge * r.ln() / log_eps
        }
    })?;
    Ok(EigenResult {
        lambda1: z * z,
        eigenfunction: phi,
        method: EigenMethod::Bessel2D,
        residual: (bessel::j0(z) + z * bessel::j1(z) * log_eps).abs(),
    })
}

/// Rayleigh quotient of the test function `(ε - r)⁺`:
/// `(n+1)(n+2)/2 · ε^{n-2}`, an upper bound for `λ_1(m_ε; n)`.
pub fn lambda1_variational_bound(n: usize, eps: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("variational bound is stated for n >= 2"));
    }
    check_eps(eps)?;
    Ok(((n + 1) * (n + 2)) as f64 / 2.0 * eps.powi(n as i32 - 2))
}

/// `2 / ((n+1)(n+2) ε^{n-2})`, a lower bound for `1/λ_1` and hence the
/// largest diffusion for which existence is guaranteed by this estimate.
pub fn reciprocal_variational_bound(n: usize, eps: f64) -> Result<f64> {
    Ok(1.0 / lambda1_variational_bound(n, eps)?)
}

/// Smallest eigenvalue of `L φ = λ M φ` (Dirichlet at `r = 1`) by inverse
/// power iteration on `L⁻¹ M`. `M` may be singular; `L` never is.
pub fn lambda1_discrete(m: &GridFunction, n: usize) -> Result<EigenResult> {
    if m.values().iter().any(|&v| v < 0.0) || m.outer_value().is_some_and(|v| v < 0.0) {
        return Err(Error::invalid("resource must be nonnegative"));
    }
    let grid = Arc::clone(m.grid());
    let op = RadialOperator::new(&grid, n, Boundary::Dirichlet)?;
    let stiffness = op.stiffness();
    let mass = op.cell_masses(m);
    let total: f64 = mass.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateResource(total));
    }

    // Nodewise defect relative to the magnitude of the terms at the node, so
    // rounding in the flux differences does not set a floor.
    let residual = |x: &[f64], lambda: f64| {
        let lx = stiffness.apply(x);
        let flux = op.flux_magnitude(x);
        (0..x.len()).fold(0.0_f64, |acc, i| {
            let load = lambda * mass[i] * x[i];
            let scale = flux[i] + load.abs();
            if scale > 0.0 {
                acc.max((lx[i] - load).abs() / scale)
            } else {
                acc
            }
        })
    };

    // The Rayleigh quotient converges at twice the rate of the vector, so
    // stop on the eigen-residual instead.
    let mut x = vec![1.0; op.unknowns()];
    let mut lambda = f64::NAN;
    let mut defect = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        let mx: Vec<f64> = mass.iter().zip(&x).map(|(m, x)| m * x).collect();
        let y = stiffness.solve(&mx)?;
        // L y = M x, so yᵀ L y = yᵀ M x.
        let num: f64 = y.iter().zip(&mx).map(|(a, b)| a * b).sum();
        let den: f64 = y.iter().zip(&mass).map(|(a, m)| m * a * a).sum();
        lambda = num / den;
        let scale = y.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        x = y.iter().map(|v| v / scale).collect();
        defect = residual(&x, lambda);
        if defect <= POWER_TOL {
            break;
        }
    }
    if !(defect <= POWER_TOL) || !lambda.is_finite() {
        return Err(Error::numerical(format!(
            "inverse power iteration did not converge in {POWER_MAX_ITER} steps"
        )));
    }

    let phi = GridFunction::new(grid, op.to_nodal(&x))?;
    Ok(EigenResult {
        lambda1: lambda,
        eigenfunction: phi,
        method: EigenMethod::Discrete,
        residual: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{integrate_weighted, make_grid, Domain};

    fn grid(n: usize, intervals: usize, eps: f64) -> Arc<Grid> {
        Arc::new(make_grid(Domain::for_dimension(n).unwrap(), intervals, eps).unwrap())
    }

    #[test]
    fn spike_samples() {
        let g = grid(1, 256, 0.25);
        let m = sample_spike(&SpikeProfile::new(1, 0.25).unwrap(), &g).unwrap();
        assert_eq!(m.values()[g.interface_index()], 4.0);
        assert_eq!(*m.values().last().unwrap(), 0.0);
        assert!((integrate_weighted(&m, 1) - 2.0).abs() < 1e-12);

        let g = grid(2, 512, 0.1);
        let m = sample_spike(&SpikeProfile::new(2, 0.1).unwrap(), &g).unwrap();
        assert!((m.values()[0] - 100.0).abs() < 1e-12);
        assert!((integrate_weighted(&m, 2) - PI).abs() < 1e-12 * PI);

        assert!((SpikeProfile::new(3, 0.5).unwrap().amplitude() - 8.0).abs() < 1e-15);
    }

    #[test]
    fn spike_grid_mismatch() {
        let g = grid(1, 128, 0.25);
        let p = SpikeProfile::new(1, 0.2).unwrap();
        assert!(matches!(sample_spike(&p, &g), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn interval_upper_estimate() {
        let l = lambda_k_interval(0.1, 1).unwrap();
        assert!(l <= 1.0 / 0.9);
    }

    #[test]
    fn interval_second_branch() {
        let l = lambda_k_interval(0.1, 2).unwrap();
        assert!(l > PI * PI / 0.1 && l < 2.25 * PI * PI / 0.1);
    }

    #[test]
    fn variational_bound_values() {
        assert_eq!(lambda1_variational_bound(2, 0.37).unwrap(), 6.0);
        assert!((lambda1_variational_bound(3, 0.1).unwrap() - 1.0).abs() < 1e-15);
        assert!(lambda1_variational_bound(1, 0.1).is_err());
    }

    #[test]
    fn ball2_precondition() {
        assert!(lambda1_ball2(0.2).is_err());
        assert!(lambda1_ball2(1e-3).is_ok());
    }

    #[test]
    fn ball2_monotone_in_eps() {
        assert!(lambda1_ball2(1e-6).unwrap() < lambda1_ball2(1e-4).unwrap());
    }

    #[test]
    fn discrete_rejects_empty_resource() {
        let g = grid(1, 128, 0.5);
        let zero = GridFunction::zeros(g);
        assert!(matches!(
            lambda1_discrete(&zero, 1),
            Err(Error::DegenerateResource(_))
        ));
    }

    #[test]
    fn discrete_eigenfunction_positive() {
        let g = grid(1, 512, 0.1);
        let m = sample_spike(&SpikeProfile::new(1, 0.1).unwrap(), &g).unwrap();
        let e = lambda1_discrete(&m, 1).unwrap();
        let phi = e.eigenfunction.values();
        assert_eq!(*phi.last().unwrap(), 0.0);
        assert!(phi[..phi.len() - 1].iter().all(|&v| v > 0.0));
        assert!(e.residual < 1e-8, "{}", e.residual);
    }
}

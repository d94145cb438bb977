//! Positive solutions of the stationary logistic equation
//! `d Δu + u (m - u) = 0` on the interval or the radial n-ball with a
//! symmetry condition at `r = 0` and Dirichlet or Neumann conditions at
//! `r = 1`.
//!
//! Discretely the problem is `F(u) = d L u - M u + W u² = 0` with the
//! finite-volume stiffness `L`, lumped resource masses `M` and cell volumes
//! `W` from [`crate::operator`]. The primary solver is damped Newton; the
//! fallback is a monotone iteration started from a super-solution, which
//! cannot leave the order interval and always converges to the maximal
//! solution in it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::eigen::{lambda1_discrete, sample_spike, SpikeProfile};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::operator::{Boundary, RadialOperator, Tridiagonal};

/// Dirichlet problems are accepted only for `d λ_1 <= ADMISSIBLE_MARGIN`.
pub const ADMISSIBLE_MARGIN: f64 = 0.999;

/// Default tolerance on the relative size of the last update.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative step size below which an iteration that can no longer make
/// progress is taken to sit at its rounding floor.
const ROUNDING_FLOOR: f64 = 1e-6;

const NEWTON_MAX_ITER: usize = 100;
const MAX_HALVINGS: usize = 30;
const MONOTONE_MAX_ITER: usize = 5_000;

/// `d Δu + u (m - u) = 0` with the given boundary condition at `r = 1`.
#[derive(Debug, Clone)]
pub struct LogisticProblem {
    n: usize,
    d: f64,
    m: GridFunction,
    bc: Boundary,
}

impl LogisticProblem {
    pub fn new(n: usize, d: f64, m: GridFunction, bc: Boundary) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::invalid(format!("diffusion must be positive, got {d}")));
        }
        if m.values().iter().any(|&v| v < 0.0) || m.outer_value().is_some_and(|v| v < 0.0) {
            return Err(Error::invalid("resource must be nonnegative"));
        }
        if m.max_abs() == 0.0 {
            return Err(Error::DegenerateResource(0.0));
        }
        Ok(LogisticProblem { n, d, m, bc })
    }

    /// The spike problem `d Δu + u (m_ε - u) = 0` on `grid`.
    pub fn spike(n: usize, eps: f64, d: f64, bc: Boundary, grid: &Arc<Grid>) -> Result<Self> {
        let m = sample_spike(&SpikeProfile::new(n, eps)?, grid)?;
        Self::new(n, d, m, bc)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn diffusion(&self) -> f64 {
        self.d
    }

    pub fn resource(&self) -> &GridFunction {
        &self.m
    }

    pub fn boundary(&self) -> Boundary {
        self.bc
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.m.grid()
    }

    fn discretize(&self) -> Result<Discrete> {
        let op = RadialOperator::new(self.grid(), self.n, self.bc)?;
        let stiffness = op.stiffness();
        let mass = op.cell_masses(&self.m);
        let volume = op.cell_volumes();
        Ok(Discrete {
            d: self.d,
            op,
            stiffness,
            mass,
            volume,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    Newton,
    MonotoneIteration,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: GridFunction,
    pub iterations: usize,
    /// Largest nodewise defect relative to the magnitude of the terms of the
    /// equation at that node.
    pub final_residual: f64,
    pub method: SolveMethod,
    /// Discrete principal eigenvalue, computed for Dirichlet problems.
    pub lambda1: Option<f64>,
    /// Sub/super-solution sign checks that failed by more than the slack.
    pub warnings: Vec<String>,
}

struct Discrete {
    d: f64,
    op: RadialOperator,
    stiffness: Tridiagonal,
    mass: Vec<f64>,
    volume: Vec<f64>,
}

impl Discrete {
    /// `F(u) = d L u - M u + W u²`; zero at a solution, `<= 0` at a
    /// sub-solution and `>= 0` at a super-solution.
    fn residual(&self, u: &[f64]) -> Vec<f64> {
        let lu = self.stiffness.apply(u);
        (0..u.len())
            .map(|i| self.d * lu[i] - self.mass[i] * u[i] + self.volume[i] * u[i] * u[i])
            .collect()
    }

    /// Magnitude of the terms of the equation at each node: `|F_i|` can not
    /// be resolved below a few ulps of it.
    fn term_scale(&self, u: &[f64]) -> Vec<f64> {
        let flux = self.op.flux_magnitude(u);
        (0..u.len())
            .map(|i| self.d * flux[i] + (self.mass[i] * u[i]).abs() + self.volume[i] * u[i] * u[i])
            .collect()
    }

    /// Largest `|F_i|` relative to the term scale at node `i`.
    fn relative_defect(&self, u: &[f64], f: &[f64]) -> f64 {
        let scale = self.term_scale(u);
        let mut worst: f64 = 0.0;
        for i in 0..u.len() {
            if scale[i] > 0.0 {
                worst = worst.max(f[i].abs() / scale[i]);
            } else if f[i] != 0.0 {
                return f64::INFINITY;
            }
        }
        worst
    }

    /// Weighted norm `‖F / s‖₂` for fixed positive weights `s`.
    fn merit(f: &[f64], weights: &[f64]) -> f64 {
        f.iter()
            .zip(weights)
            .map(|(f, s)| (f / s).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn jacobian(&self, u: &[f64], shift: impl Fn(usize) -> f64) -> Tridiagonal {
        let mut j = self.stiffness.clone();
        for i in 0..u.len() {
            j.sub[i] *= self.d;
            j.sup[i] *= self.d;
            j.diag[i] = self.d * j.diag[i] + shift(i);
        }
        j
    }

    fn local_resource(&self, i: usize) -> f64 {
        self.mass[i] / self.volume[i]
    }
}

/// Nodewise defect `d Δu + u (m - u)` of `u` in the discrete sense (cell
/// balance divided by the cell volume), at the unknowns of the problem
/// (every node except `r = 1` under Dirichlet conditions).
pub fn pointwise_defect(problem: &LogisticProblem, u: &GridFunction) -> Result<Vec<f64>> {
    if !u.same_grid(problem.resource()) {
        return Err(Error::invalid("candidate and resource live on different grids"));
    }
    let disc = problem.discretize()?;
    let x = disc.op.from_nodal(u.values());
    let f = disc.residual(x);
    Ok(f.iter().zip(&disc.volume).map(|(f, w)| -f / w).collect())
}

/// Magnitude of the individual terms of the equation at each unknown, on
/// the same per-volume scale as [`pointwise_defect`]. Rounding alone makes
/// the defect a small multiple of `f64::EPSILON` times this.
pub fn defect_scale(problem: &LogisticProblem, u: &GridFunction) -> Result<Vec<f64>> {
    if !u.same_grid(problem.resource()) {
        return Err(Error::invalid("candidate and resource live on different grids"));
    }
    let disc = problem.discretize()?;
    let x = disc.op.from_nodal(u.values());
    Ok(disc
        .term_scale(x)
        .iter()
        .zip(&disc.volume)
        .map(|(s, w)| s / w)
        .collect())
}

fn admissibility(problem: &LogisticProblem) -> Result<Option<f64>> {
    if problem.bc != Boundary::Dirichlet {
        return Ok(None);
    }
    let eig = lambda1_discrete(problem.resource(), problem.n)?;
    let product = problem.d * eig.lambda1;
    if product > ADMISSIBLE_MARGIN {
        return Err(Error::NoPositiveSolution(product));
    }
    Ok(Some(eig.lambda1))
}

/// Solves the logistic problem until the update is below `tol` relative to
/// the solution.
pub fn solve_logistic(problem: &LogisticProblem, tol: f64) -> Result<SolveReport> {
    solve_logistic_from(problem, tol, None)
}

/// As [`solve_logistic`], seeding Newton with an explicit sub-solution when
/// one is supplied.
pub fn solve_logistic_from(
    problem: &LogisticProblem,
    tol: f64,
    sub_solution: Option<&GridFunction>,
) -> Result<SolveReport> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let lambda1 = admissibility(problem)?;
    let disc = problem.discretize()?;
    let m_max = problem.m.max_abs();

    let guess: Vec<f64> = match sub_solution {
        Some(sub) => {
            if !sub.same_grid(&problem.m) {
                return Err(Error::invalid("sub-solution lives on a different grid"));
            }
            disc.op
                .from_nodal(sub.values())
                .iter()
                .map(|v| v.clamp(0.0, m_max))
                .collect()
        }
        None => disc
            .op
            .from_nodal(problem.m.values())
            .iter()
            .map(|v| v.min(0.5 * m_max))
            .collect(),
    };

    if let Some((u, iterations, defect)) = newton(&disc, guess, tol) {
        if is_nontrivial(&u, m_max) {
            return finish(
                problem,
                &disc,
                u,
                iterations,
                defect,
                SolveMethod::Newton,
                lambda1,
                vec![],
            );
        }
    }

    let upper = GridFunction::from_fn(Arc::clone(problem.grid()), |_| m_max)?;
    let lower = GridFunction::zeros(Arc::clone(problem.grid()));
    let mut report = monotone_iterate(problem, &lower, &upper, tol)?;
    report.lambda1 = lambda1;
    Ok(report)
}

fn is_nontrivial(u: &[f64], m_max: f64) -> bool {
    let top = u.iter().fold(0.0_f64, |a, &v| a.max(v));
    top > 1e-8 * m_max && u.iter().all(|v| v.is_finite())
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

/// Damped Newton; `None` on stagnation away from a solution.
///
/// Converged once a full step is below `tol` relative to the iterate. The
/// defect alone is no stopping test: it is a backward error, and the
/// diffusion operator amplifies it by up to `1/h²`.
fn newton(disc: &Discrete, mut u: Vec<f64>, tol: f64) -> Option<(Vec<f64>, usize, f64)> {
    let mut f = disc.residual(&u);
    for it in 0..NEWTON_MAX_ITER {
        let jac = disc.jacobian(&u, |i| disc.volume[i] * 2.0 * u[i] - disc.mass[i]);
        let step = jac.solve(&f).ok()?;
        let size = max_abs(&step) / max_abs(&u).max(f64::MIN_POSITIVE);
        let full: Vec<f64> = u.iter().zip(&step).map(|(u, s)| u - s).collect();
        if size <= tol {
            let f_full = disc.residual(&full);
            let defect = disc.relative_defect(&full, &f_full);
            return Some((full, it + 1, defect));
        }
        // Weigh the merit by the term scale at the current and the full-step
        // point, so that rounding noise in the spike, where the terms are
        // huge, cannot mask progress elsewhere.
        let weights: Vec<f64> = disc
            .term_scale(&u)
            .iter()
            .zip(disc.term_scale(&full))
            .map(|(a, b)| (a + b).max(f64::MIN_POSITIVE))
            .collect();
        let merit = Discrete::merit(&f, &weights);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(u, s)| u - t * s).collect();
            let f_trial = disc.residual(&trial);
            let m_trial = Discrete::merit(&f_trial, &weights);
            if m_trial.is_finite() && m_trial < merit {
                u = trial;
                f = f_trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // At the rounding floor the merit can no longer decrease while
            // the step is already tiny.
            if size <= ROUNDING_FLOOR {
                let defect = disc.relative_defect(&u, &f);
                return Some((u, it, defect));
            }
            return None;
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn finish(
    problem: &LogisticProblem,
    disc: &Discrete,
    u: Vec<f64>,
    iterations: usize,
    final_residual: f64,
    method: SolveMethod,
    lambda1: Option<f64>,
    warnings: Vec<String>,
) -> Result<SolveReport> {
    let nodal = disc.op.to_nodal(&u);
    let interior_end = match problem.bc {
        Boundary::Dirichlet => nodal.len() - 1,
        Boundary::Neumann => nodal.len(),
    };
    if nodal[..interior_end].iter().any(|&v| !(v > 0.0)) {
        return Err(Error::numerical(
            "solution is not positive at every interior node",
        ));
    }
    let solution = GridFunction::new(Arc::clone(problem.grid()), nodal)?;
    Ok(SolveReport {
        solution,
        iterations,
        final_residual,
        method,
        lambda1,
        warnings,
    })
}

/// Relative slack for the sub/super sign checks and the sandwich.
pub const SANDWICH_SLACK: f64 = 1e-6;

/// Monotone iteration between a sub-solution `lower` and a super-solution
/// `upper`, started from `upper`.
///
/// Each step solves `(d L + K W) u_{k+1} = K W u_k + M u_k - W u_k²` with the
/// nodewise shift `K_i = max(2 u_k,i - m_i, 0)` (plus a tiny floor). Since the
/// iterates decrease, `K` dominates `-∂_u[u(m - u)]` on `[lower, u_k]`, which
/// keeps the map order preserving; the sequence therefore decreases from
/// `upper`, stays above `lower`, and converges quadratically once `K`
/// matches the Newton linearization.
pub fn monotone_iterate(
    problem: &LogisticProblem,
    lower: &GridFunction,
    upper: &GridFunction,
    tol: f64,
) -> Result<SolveReport> {
    if !lower.same_grid(&problem.m) || !upper.same_grid(&problem.m) {
        return Err(Error::invalid(
            "bounds live on a different grid than the resource",
        ));
    }
    if lower.values().iter().zip(upper.values()).any(|(l, u)| l > u) {
        return Err(Error::invalid("lower bound exceeds upper bound"));
    }
    let disc = problem.discretize()?;
    let lo = disc.op.from_nodal(lower.values()).to_vec();
    let mut u = disc.op.from_nodal(upper.values()).to_vec();
    let scale = u
        .iter()
        .fold(0.0_f64, |a, v| a.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let slack = SANDWICH_SLACK * scale;

    let mut warnings = Vec::new();
    let f_lo = disc.residual(&lo);
    let f_up = disc.residual(&u);
    let sign_slack = |i: usize, v: &[f64]| {
        SANDWICH_SLACK
            * (disc.d * disc.op.flux_magnitude(v)[i]
                + (disc.mass[i] * v[i]).abs()
                + disc.volume[i] * v[i] * v[i])
    };
    if let Some(i) = (0..lo.len()).find(|&i| f_lo[i] > sign_slack(i, &lo)) {
        warnings.push(format!("lower bound is not a discrete sub-solution at node {i}"));
    }
    if let Some(i) = (0..u.len()).find(|&i| f_up[i] < -sign_slack(i, &u)) {
        warnings.push(format!(
            "upper bound is not a discrete super-solution at node {i}"
        ));
    }

    let floor = 1e-12 * problem.m.max_abs();
    let mut prev_change = f64::INFINITY;
    for it in 1..=MONOTONE_MAX_ITER {
        let shift: Vec<f64> = (0..u.len())
            .map(|i| (2.0 * u[i] - disc.local_resource(i)).max(0.0) + floor)
            .collect();
        let mat = disc.jacobian(&u, |i| shift[i] * disc.volume[i]);
        let rhs: Vec<f64> = (0..u.len())
            .map(|i| {
                let w = disc.volume[i];
                shift[i] * w * u[i] + disc.mass[i] * u[i] - w * u[i] * u[i]
            })
            .collect();
        let next = mat.solve(&rhs)?;
        let mut change: f64 = 0.0;
        for i in 0..u.len() {
            if next[i] < lo[i] - slack || next[i] > u[i] + slack {
                return Err(Error::numerical(format!(
                    "monotone iterate left the order interval at node {i} (iteration {it})"
                )));
            }
            change = change.max((next[i] - u[i]).abs());
        }
        let top = max_abs(&next).max(f64::MIN_POSITIVE);
        u = next;
        // Rounding bounds how small the change can get on fine grids; a
        // change that stops shrinking at that level also counts.
        let stalled = change >= prev_change && change <= ROUNDING_FLOOR * top;
        prev_change = change;
        if change <= tol * top || stalled {
            let f = disc.residual(&u);
            let defect = disc.relative_defect(&u, &f);
            return finish(
                problem,
                &disc,
                u,
                it,
                defect,
                SolveMethod::MonotoneIteration,
                None,
                warnings,
            );
        }
    }
    Err(Error::numerical(format!(
        "monotone iteration did not settle in {MONOTONE_MAX_ITER} steps"
    )))
}

/// The Neumann reference `v_ε`: `√ε v'' + v (m_ε - v) = 0` on `(0, 1)` with
/// `v'(0) = v'(1) = 0`.
pub fn solve_neumann_reference(eps: f64, grid: &Arc<Grid>, tol: f64) -> Result<GridFunction> {
    let problem = LogisticProblem::spike(1, eps, eps.sqrt(), Boundary::Neumann, grid)?;
    let v = solve_logistic(&problem, tol)?.solution;
    if let Some(i) = v.values().windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::numerical(format!(
            "Neumann reference is not decreasing at node {i}"
        )));
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub u_dir: GridFunction,
    pub u_neu: GridFunction,
    /// `max(u_dir - u_neu, 0)` over the nodes.
    pub max_violation: f64,
}

/// Solves the 1D spike problem with both boundary conditions on one grid.
pub fn compare_dirichlet_neumann(eps: f64, d: f64, grid: &Arc<Grid>) -> Result<Comparison> {
    if !(d > 0.0 && d < 1.0 - eps) {
        return Err(Error::invalid(format!(
            "need 0 < d < 1 - eps for a guaranteed Dirichlet solution, got d = {d}"
        )));
    }
    let dir = LogisticProblem::spike(1, eps, d, Boundary::Dirichlet, grid)?;
    let neu = LogisticProblem::spike(1, eps, d, Boundary::Neumann, grid)?;
    let u_dir = solve_logistic(&dir, DEFAULT_TOL)?.solution;
    let u_neu = solve_logistic(&neu, DEFAULT_TOL)?.solution;
    let max_violation = u_dir
        .values()
        .iter()
        .zip(u_neu.values())
        .fold(0.0_f64, |a, (d, n)| a.max(d - n));
    Ok(Comparison {
        u_dir,
        u_neu,
        max_violation,
    })
}

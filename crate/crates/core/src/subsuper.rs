//! Explicit sub- and super-solutions of the spike problem, the region of
//! admissible constants, residual checks and the closed-form `L¹` mass of
//! the sub-solution.
//!
//! In the n-ball with `d = c1 / ε^(n-2)` the pair is
//!
//! ```text
//! super(r) = ε^-n
//! sub(r)   = c2 ε^-n exp(-(r/ε)^n) - c2/e      r <= ε
//!            c2 / (e r^n)          - c2/e      r >  ε
//! ```
//!
//! `sub` is `C¹` at `r = ε`, vanishes at `r = 1`, and is a sub-solution for
//! every `(c1, c2)` in the region `T_n` cut out by four linear inequalities.
//! On the interval the sub-solution is built from the Neumann reference
//! solution instead, see [`build_sub_1d`].
//!
//! (The Neumann problem has an older explicit family of the same shape; it
//! is not needed here.)

use std::f64::consts::E;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bvp::{defect_scale, pointwise_defect, LogisticProblem};
use crate::error::{Error, Result};
use crate::grid::{surface_area, Grid, GridFunction};
use crate::operator::Boundary;

/// A pair of constants `(c1, c2)` for dimension `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsPoint {
    pub n: usize,
    pub c1: f64,
    pub c2: f64,
}

impl ConstantsPoint {
    pub fn new(n: usize, c1: f64, c2: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("the explicit family needs n >= 2"));
        }
        if !(c1 > 0.0 && c2 > 0.0 && c1.is_finite() && c2.is_finite()) {
            return Err(Error::invalid(format!(
                "constants must be positive, got ({c1}, {c2})"
            )));
        }
        Ok(ConstantsPoint { n, c1, c2 })
    }

    /// Slack of each defining inequality of `T_n`; all four are positive
    /// (the third may be zero) exactly on the region.
    pub fn margins(&self) -> [f64; 4] {
        let n = self.n as f64;
        [
            2.0 / ((n + 1.0) * (n + 2.0)) - self.c1,
            1.0 - 2.0 * n * (n - 1.0) * self.c1 - E * self.c2,
            2.0 * n * E * self.c1 - self.c2,
            1.0 - self.c2,
        ]
    }
}

/// Membership in `T_n`:
/// `c1 < 2/((n+1)(n+2))`, `1 - 2n(n-1) c1 > e c2`, `2ne c1 >= c2`, `c2 < 1`.
pub fn region_contains(p: &ConstantsPoint) -> bool {
    let [a, b, c, d] = p.margins();
    a > 0.0 && b > 0.0 && c >= 0.0 && d > 0.0
}

/// Corners of `T_n` in counter-clockwise order starting at the origin.
///
/// For `n >= 3` the eigenvalue constraint is inactive and `T_n` is the
/// triangle cut out by the other three lines. For `n = 2` the triangle pokes
/// past `c1 = 1/6` and is clipped there, leaving a quadrilateral.
pub fn region_vertices(n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::invalid("the explicit family needs n >= 2"));
    }
    let nf = n as f64;
    let apex_c1 = 1.0 / (2.0 * nf * (E * E + nf - 1.0));
    let apex = (apex_c1, E / (E * E + nf - 1.0));
    let base = 1.0 / (2.0 * nf * (nf - 1.0));
    let cap = 2.0 / ((nf + 1.0) * (nf + 2.0));
    if base <= cap {
        return Ok(vec![(0.0, 0.0), (base, 0.0), apex]);
    }
    // The line 1 - 2n(n-1) c1 = e c2 meets c1 = cap at this height.
    let top = (1.0 - 2.0 * nf * (nf - 1.0) * cap) / E;
    Ok(vec![(0.0, 0.0), (cap, 0.0), (cap, top), apex])
}

/// The explicit pair for one `(n, ε, c1, c2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitFamily {
    pub n: usize,
    pub eps: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Values of the pair at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyValue {
    pub sub: f64,
    pub sup: f64,
}

impl ExplicitFamily {
    pub fn new(n: usize, eps: f64, c1: f64, c2: f64) -> Result<Self> {
        ConstantsPoint::new(n, c1, c2)?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
        }
        Ok(ExplicitFamily { n, eps, c1, c2 })
    }

    pub fn constants(&self) -> ConstantsPoint {
        ConstantsPoint {
            n: self.n,
            c1: self.c1,
            c2: self.c2,
        }
    }

    /// `d = c1 / ε^(n-2)`.
    pub fn diffusion(&self) -> f64 {
        self.c1 * self.eps.powi(2 - self.n as i32)
    }

    fn amplitude(&self) -> f64 {
        self.eps.powi(-(self.n as i32))
    }

    fn s(&self, r: f64) -> f64 {
        (r / self.eps).powi(self.n as i32)
    }

    pub fn sup(&self) -> f64 {
        self.amplitude()
    }

    /// Inner branch, valid for `r <= ε`.
    pub fn sub_inner(&self, r: f64) -> f64 {
        self.c2 * (self.amplitude() * (-self.s(r)).exp() - 1.0 / E)
    }

    /// Outer branch, valid for `r >= ε`.
    pub fn sub_outer(&self, r: f64) -> f64 {
        self.c2 / E * (r.powi(-(self.n as i32)) - 1.0)
    }

    pub fn sub(&self, r: f64) -> f64 {
        if r <= self.eps {
            self.sub_inner(r)
        } else {
            self.sub_outer(r)
        }
    }

    pub fn sub_inner_derivative(&self, r: f64) -> f64 {
        let n = self.n as f64;
        -self.c2 * n * self.amplitude() / self.eps
            * (r / self.eps).powi(self.n as i32 - 1)
            * (-self.s(r)).exp()
    }

    pub fn sub_outer_derivative(&self, r: f64) -> f64 {
        -self.c2 * self.n as f64 / E * r.powi(-(self.n as i32) - 1)
    }

    pub fn eval(&self, r: f64) -> FamilyValue {
        FamilyValue {
            sub: self.sub(r),
            sup: self.sup(),
        }
    }

    /// `d Δsub + sub (m_ε - sub)` from the closed-form derivatives.
    pub fn sub_residual(&self, r: f64) -> f64 {
        let n = self.n as f64;
        let d = self.diffusion();
        if r <= self.eps {
            let s = self.s(r);
            let a = self.amplitude();
            // Δ of c2 ε^-n exp(-s) is c2 n ε^-2n r^(n-2) exp(-s) (n s - 2n + 2).
            let lap = self.c2 * n * a * a * r.powi(self.n as i32 - 2) * (-s).exp() * (n * s - 2.0 * n + 2.0);
            let u = self.sub_inner(r);
            d * lap + u * (a - u)
        } else {
            let lap = self.c2 / E * 2.0 * n * r.powi(-(self.n as i32) - 2);
            let u = self.sub_outer(r);
            d * lap - u * u
        }
    }

    /// `d Δsup + sup (m_ε - sup)`: zero on the spike, `-ε^-2n` off it.
    pub fn sup_residual(&self, r: f64) -> f64 {
        let a = self.amplitude();
        if r <= self.eps {
            0.0
        } else {
            -a * a
        }
    }

    pub fn sample_sub(&self, grid: &Arc<Grid>) -> Result<GridFunction> {
        GridFunction::from_fn(Arc::clone(grid), |r| self.sub(r))
    }

    pub fn sample_sup(&self, grid: &Arc<Grid>) -> Result<GridFunction> {
        GridFunction::from_fn(Arc::clone(grid), |_| self.sup())
    }
}

/// Extreme residuals of the explicit pair over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSummary {
    /// Minimum of the sub-solution residual (should be `>= 0`).
    pub min_sub_residual: f64,
    /// Maximum of the super-solution residual (should be `<= 0`).
    pub max_super_residual: f64,
    /// Node attaining the sub-solution minimum.
    pub argmin_sub: f64,
}

impl ResidualSummary {
    pub fn signs_hold(&self) -> bool {
        self.min_sub_residual >= 0.0 && self.max_super_residual <= 0.0
    }
}

/// Evaluates both residuals at every node except `r = 0` and `r = ε`.
pub fn residual_nd(fam: &ExplicitFamily, grid: &Grid) -> Result<ResidualSummary> {
    if grid.eps() != fam.eps {
        return Err(Error::invalid("grid interface does not match the family's eps"));
    }
    let mut out = ResidualSummary {
        min_sub_residual: f64::INFINITY,
        max_super_residual: f64::NEG_INFINITY,
        argmin_sub: f64::NAN,
    };
    for (i, &r) in grid.nodes().iter().enumerate() {
        if i == 0 || i == grid.interface_index() {
            continue;
        }
        let sub = fam.sub_residual(r);
        if sub < out.min_sub_residual {
            out.min_sub_residual = sub;
            out.argmin_sub = r;
        }
        out.max_super_residual = out.max_super_residual.max(fam.sup_residual(r));
    }
    Ok(out)
}

/// `∫_{B_1} sub = A_n/n (c2 n/e |log ε| + c2 - 2 c2/e)`.
pub fn analytic_sub_l1(n: usize, eps: f64, c2: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("the explicit family needs n >= 2"));
    }
    let nf = n as f64;
    Ok(surface_area(n) / nf * (c2 * nf / E * eps.ln().abs() + c2 - 2.0 * c2 / E))
}

/// `∫ sub / ∫ m_ε = c2 (n/e |log ε| + 1 - 2/e)`.
pub fn analytic_sub_ratio(n: usize, eps: f64, c2: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("the explicit family needs n >= 2"));
    }
    Ok(c2 * (n as f64 / E * eps.ln().abs() + 1.0 - 2.0 / E))
}

/// `(1 - ε^(1/4)) (v - v(1))` for the Neumann reference `v` of the 1D spike.
pub fn build_sub_1d(v: &GridFunction, eps: f64) -> Result<GridFunction> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let factor = 1.0 - eps.powf(0.25);
    let tail = *v.values().last().expect("grids have at least two nodes");
    let mut values: Vec<f64> = v.values().iter().map(|x| factor * (x - tail)).collect();
    *values.last_mut().expect("nonempty") = 0.0;
    GridFunction::new(Arc::clone(v.grid()), values)
}

/// Relative slack for the 1D sign check: a few ulps, since the relative
/// defect of an exact discrete sub-solution can only be rounding.
pub const ROUNDING_SLACK: f64 = 64.0 * f64::EPSILON;

/// Residual of a 1D candidate under `√ε U'' + U (m_ε - U)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual1d {
    /// Minimum of the defect over the checked nodes.
    pub min_residual: f64,
    /// Minimum of the defect divided by the magnitude of the terms at the
    /// same node. Inside the spike the diffusion and reaction terms are huge
    /// and nearly cancel, so only this relative form is meaningful there.
    pub min_relative: f64,
}

/// Defect of `candidate` at the nodes strictly inside `(0, 1)`, skipping the
/// interface.
pub fn residual_1d(candidate: &GridFunction, eps: f64) -> Result<Residual1d> {
    let grid = Arc::clone(candidate.grid());
    let problem = LogisticProblem::spike(1, eps, eps.sqrt(), Boundary::Dirichlet, &grid)?;
    let defect = pointwise_defect(&problem, candidate)?;
    let scale = defect_scale(&problem, candidate)?;
    let mut out = Residual1d {
        min_residual: f64::INFINITY,
        min_relative: f64::INFINITY,
    };
    for i in 1..defect.len() {
        if i == grid.interface_index() {
            continue;
        }
        out.min_residual = out.min_residual.min(defect[i]);
        if scale[i] > 0.0 {
            out.min_relative = out.min_relative.min(defect[i] / scale[i]);
        }
    }
    Ok(out)
}

/// One decade of a sign-check scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanEntry {
    pub eps: f64,
    pub value: f64,
    pub passes: bool,
}

/// Result of scanning `ε` over decades for the smallness assumption.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdScan {
    pub entries: Vec<ScanEntry>,
    /// Largest scanned `ε` from which every smaller scanned `ε` passes.
    pub threshold: Option<f64>,
}

impl ThresholdScan {
    fn from_entries(entries: Vec<ScanEntry>) -> Self {
        let mut threshold = None;
        for e in entries.iter().rev() {
            if !e.passes {
                break;
            }
            threshold = Some(e.eps);
        }
        ThresholdScan { entries, threshold }
    }
}

fn decades(first: i32, last: i32) -> Vec<f64> {
    (first..=last).map(|k| 10f64.powi(-k)).collect()
}

/// Scans `ε = 10^-1 .. 10^-last` for the sign of the closed-form residuals.
pub fn scan_threshold_nd(
    n: usize,
    c1: f64,
    c2: f64,
    last_decade: i32,
    intervals: usize,
) -> Result<ThresholdScan> {
    let mut entries = Vec::new();
    for eps in decades(1, last_decade) {
        let fam = ExplicitFamily::new(n, eps, c1, c2)?;
        let grid = crate::grid::make_grid(crate::grid::Domain::ball(n)?, intervals, eps)?;
        let res = residual_nd(&fam, &grid)?;
        entries.push(ScanEntry {
            eps,
            value: res.min_sub_residual,
            passes: res.signs_hold(),
        });
    }
    Ok(ThresholdScan::from_entries(entries))
}

/// Scans `ε = 10^-1 .. 10^-last` for the 1D sub-solution, accepting a
/// relative violation of at most `slack`.
pub fn scan_threshold_1d(last_decade: i32, min_intervals: usize, slack: f64) -> Result<ThresholdScan> {
    let mut entries = Vec::new();
    for eps in decades(1, last_decade) {
        let intervals = crate::sweep::grid_size(min_intervals, eps);
        let grid = Arc::new(crate::grid::make_grid(
            crate::grid::Domain::interval(),
            intervals,
            eps,
        )?);
        let v = crate::bvp::solve_neumann_reference(eps, &grid, crate::bvp::DEFAULT_TOL)?;
        let sub = build_sub_1d(&v, eps)?;
        let res = residual_1d(&sub, eps)?;
        entries.push(ScanEntry {
            eps,
            value: res.min_relative,
            passes: res.min_relative >= -slack,
        });
    }
    Ok(ThresholdScan::from_entries(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Domain};

    #[test]
    fn membership_examples() {
        assert!(!region_contains(&ConstantsPoint::new(2, 0.2, 0.1).unwrap()));
        assert!(region_contains(&ConstantsPoint::new(2, 0.05, 0.2).unwrap()));
        for n in 2..6 {
            let c1 = 1.0 / (2.0 * n as f64 * (n as f64 - 1.0));
            assert!(!region_contains(&ConstantsPoint::new(n, c1, 1e-9).unwrap()));
        }
        assert!(ConstantsPoint::new(1, 0.1, 0.1).is_err());
        assert!(ConstantsPoint::new(2, -0.1, 0.1).is_err());
    }

    #[test]
    fn vertices_for_three_and_two() {
        let v = region_vertices(3).unwrap();
        let q = E * E + 2.0;
        assert_eq!(v.len(), 3);
        assert!((v[1].0 - 1.0 / 12.0).abs() < 1e-15);
        assert!((v[2].0 - 1.0 / (6.0 * q)).abs() < 1e-15);
        assert!((v[2].1 - E / q).abs() < 1e-15);

        let v = region_vertices(2).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v.iter().filter(|p| p.0 == 1.0 / 6.0).count(), 2);
    }

    #[test]
    fn family_boundary_values() {
        let fam = ExplicitFamily::new(2, 0.01, 0.05, 0.2).unwrap();
        assert_eq!(fam.sub(1.0), 0.0);
        let expect = 0.2 / E * (1e4 - 1.0);
        assert!((fam.sub_inner(0.01) - expect).abs() <= 1e-12 * expect);
        assert!((fam.sub_outer(0.01) - expect).abs() <= 1e-12 * expect);
        let slope = -0.2 * 2.0 / (E * 1e-6);
        assert!((fam.sub_inner_derivative(0.01) - slope).abs() <= 1e-12 * slope.abs());
        assert!((fam.sub_outer_derivative(0.01) - slope).abs() <= 1e-12 * slope.abs());
        assert!(fam.sub(0.0) < fam.sup());
    }

    #[test]
    fn super_residual_signs() {
        let fam = ExplicitFamily::new(2, 1e-2, 0.05, 0.2).unwrap();
        assert_eq!(fam.sup_residual(0.005), 0.0);
        assert_eq!(fam.sup_residual(0.5), -1e8);
    }

    #[test]
    fn sub_residual_nonnegative_for_small_eps() {
        let fam = ExplicitFamily::new(2, 1e-3, 0.05, 0.2).unwrap();
        let grid = make_grid(Domain::ball(2).unwrap(), 2048, 1e-3).unwrap();
        let res = residual_nd(&fam, &grid).unwrap();
        assert!(res.signs_hold(), "{res:?}");
    }

    #[test]
    fn large_eps_is_reported_not_rejected() {
        let fam = ExplicitFamily::new(2, 0.5, 0.05, 0.2).unwrap();
        let grid = make_grid(Domain::ball(2).unwrap(), 256, 0.5).unwrap();
        assert!(residual_nd(&fam, &grid).unwrap().min_sub_residual.is_finite());
    }

    #[test]
    fn analytic_ratio_examples() {
        let r = analytic_sub_ratio(2, (-1.0f64).exp(), 0.2).unwrap();
        assert!((r - 0.2).abs() < 1e-15);
        let r = analytic_sub_ratio(2, 1e-5, 0.2).unwrap();
        assert!((r - 1.746).abs() < 1e-3, "{r}");
        let l1 = analytic_sub_l1(3, 1e-3, 0.15).unwrap();
        let mass = crate::grid::unit_ball_volume(3);
        assert!((l1 / mass - analytic_sub_ratio(3, 1e-3, 0.15).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn sub_1d_vanishes_at_the_boundary_and_stays_below() {
        let g = Arc::new(make_grid(Domain::interval(), 128, 0.1).unwrap());
        let v = GridFunction::from_fn(Arc::clone(&g), |r| 3.0 - r).unwrap();
        let u = build_sub_1d(&v, 0.1).unwrap();
        assert_eq!(*u.values().last().unwrap(), 0.0);
        assert!(u.values().iter().zip(v.values()).all(|(a, b)| a <= b));
    }

    #[test]
    fn scan_threshold_keeps_trailing_passes() {
        let mk = |eps, passes| ScanEntry {
            eps,
            value: 0.0,
            passes,
        };
        let s = ThresholdScan::from_entries(vec![
            mk(0.1, true),
            mk(0.01, false),
            mk(1e-3, true),
            mk(1e-4, true),
        ]);
        assert_eq!(s.threshold, Some(1e-3));
        let s = ThresholdScan::from_entries(vec![mk(0.1, true), mk(0.01, false)]);
        assert_eq!(s.threshold, None);
    }
}

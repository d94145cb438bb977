//! Radial domains, graded grids over `[0, 1]` and weighted quadrature.
//!
//! Every problem in this crate is radially symmetric, so a field on the
//! interval `(-1, 1)` or on the unit ball `B_0(1)` in `R^n` is stored as its
//! profile in `r = |x|` on `[0, 1]`. The interval is treated as the half
//! interval with even symmetry; full-interval quantities carry a factor 2,
//! which is exactly the "surface area" of the unit 0-sphere.
//!
//! Grids always contain the spike radius `eps` as an exact node. Fields that
//! jump there (the resource) carry a separate one-sided value for the right
//! side of that node so neither quadrature nor the discrete operators smear
//! the discontinuity across a cell.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest accepted grid size (number of intervals).
pub const MIN_INTERVALS: usize = 64;

/// Amplitude of the sinusoidal node clustering inside the spike.
const INNER_CLUSTERING: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    /// `(-1, 1)`, reduced to `[0, 1]` by symmetry.
    Interval,
    /// The unit ball in `R^n`, `n >= 2`.
    Ball,
}

/// A radially symmetric domain of radius 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    kind: DomainKind,
    n: usize,
}

impl Domain {
    pub fn interval() -> Self {
        Domain {
            kind: DomainKind::Interval,
            n: 1,
        }
    }

    pub fn ball(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("ball dimension must be >= 2, got {n}")));
        }
        Ok(Domain {
            kind: DomainKind::Ball,
            n,
        })
    }

    /// Interval for `n == 1`, ball otherwise.
    pub fn for_dimension(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::invalid("dimension must be >= 1")),
            1 => Ok(Self::interval()),
            _ => Self::ball(n),
        }
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Lebesgue measure of the domain (2 for the interval, `|B_0(1)|` otherwise).
    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.n)
    }
}

/// Surface area `A_n` of the unit `(n-1)`-sphere. `A_1 = 2` counts both
/// endpoints of `(-1, 1)`.
pub fn surface_area(n: usize) -> f64 {
    assert!(n >= 1, "dimension must be >= 1");
    let mut area = if n % 2 == 1 { 2.0 } else { 2.0 * PI };
    let mut k = if n % 2 == 1 { 1 } else { 2 };
    while k < n {
        area *= 2.0 * PI / k as f64;
        k += 2;
    }
    area
}

/// `|B_0(1)| = A_n / n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    surface_area(n) / n as f64
}

/// Nodes `0 = r_0 < r_1 < ... < r_N = 1` with `eps` as an exact node.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    interface_index: usize,
    eps: f64,
}

impl Grid {
    /// Builds a grid from explicit nodes. `eps` must appear among them.
    pub fn from_nodes(nodes: Vec<f64>, eps: f64) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::invalid("grid needs at least 3 nodes"));
        }
        if nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return Err(Error::invalid("grid must start at 0 and end at 1"));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid nodes must be strictly increasing"));
        }
        let interface_index = nodes
            .iter()
            .position(|&r| r == eps)
            .ok_or_else(|| Error::invalid(format!("eps = {eps} is not a grid node")))?;
        if interface_index == 0 || interface_index == nodes.len() - 1 {
            return Err(Error::invalid("eps must be an interior node"));
        }
        Ok(Grid {
            nodes,
            interface_index,
            eps,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of nodes, `N + 1`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of intervals, `N`.
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn interface_index(&self) -> usize {
        self.interface_index
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Largest spacing between consecutive nodes.
    pub fn max_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Spacing of the interval `[r_i, r_{i+1}]`.
    pub fn spacing(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }
}

/// Builds the graded grid used throughout: `max(16, N/4)` intervals inside
/// the spike with mild clustering at both `0` and `eps`, and geometric
/// spacing from `eps` out to `1`. Doubling `N` nests the grid.
pub fn make_grid(domain: Domain, intervals: usize, eps: f64) -> Result<Grid> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    if intervals < MIN_INTERVALS {
        return Err(Error::invalid(format!(
            "grid needs at least {MIN_INTERVALS} intervals, got {intervals}"
        )));
    }
    let _ = domain;
    let inner = (intervals / 4).max(16);
    let outer = intervals - inner;

    let mut nodes = Vec::with_capacity(intervals + 1);
    for k in 0..inner {
        let t = k as f64 / inner as f64;
        let s = t - INNER_CLUSTERING * (2.0 * PI * t).sin() / (2.0 * PI);
        nodes.push(eps * s);
    }
    nodes.push(eps);
    let log_span = -eps.ln();
    for k in 1..outer {
        let t = k as f64 / outer as f64;
        nodes.push(eps * (t * log_span).exp());
    }
    nodes.push(1.0);
    Grid::from_nodes(nodes, eps)
}

/// Samples of a radial field on a grid.
///
/// `outer_value` is the limit from the right at the interface node and is only
/// set for fields that jump at `r = eps`.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<f64>,
    outer_value: Option<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at node {i}")));
        }
        Ok(GridFunction {
            grid,
            values,
            outer_value: None,
        })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![0.0; grid.len()];
        GridFunction {
            grid,
            values,
            outer_value: None,
        }
    }

    /// Sets the right-hand limit at the interface node.
    pub fn with_outer_value(mut self, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::invalid("non-finite interface value"));
        }
        self.outer_value = Some(value);
        Ok(self)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn outer_value(&self) -> Option<f64> {
        self.outer_value
    }

    /// Value used on the right of node `i`, i.e. on `(r_i, r_{i+1})`.
    pub fn right_value(&self, i: usize) -> f64 {
        match self.outer_value {
            Some(v) if i == self.grid.interface_index() => v,
            _ => self.values[i],
        }
    }

    pub fn max_abs(&self) -> f64 {
        let m = self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        m.max(self.outer_value.map_or(0.0, f64::abs))
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        GridFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| alpha * v).collect(),
            outer_value: self.outer_value.map(|v| alpha * v),
        }
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid.nodes() == other.grid.nodes()
    }
}

/// `sum_j C(n-1, j) a^(n-1-j) h^j c_j` for the binomial expansion of
/// `(a + h t)^(n-1)`; keeps small shells on far-out radii free of cancellation.
fn binomial_moment(a: f64, h: f64, n: usize, coeff: impl Fn(usize) -> f64) -> f64 {
    let p = n - 1;
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=p {
        acc += binom * a.powi((p - j) as i32) * h.powi(j as i32) * coeff(j);
        binom = binom * (p - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// `∫_a^{a+len} r^(n-1) dr`.
pub(crate) fn shell_volume(a: f64, len: f64, n: usize) -> f64 {
    len * binomial_moment(a, len, n, |j| 1.0 / (j + 1) as f64)
}

/// Product-trapezoid weights on `[a, a + h]`: the integrals of the two linear
/// hat functions against `r^(n-1)`.
pub(crate) fn hat_weights(a: f64, h: f64, n: usize) -> (f64, f64) {
    let left = h * binomial_moment(a, h, n, |j| 1.0 / ((j + 1) * (j + 2)) as f64);
    let right = h * binomial_moment(a, h, n, |j| 1.0 / (j + 2) as f64);
    (left, right)
}

/// `A_n ∫_0^1 f(r) r^(n-1) dr` by the trapezoid rule on the grid with the
/// weight `r^(n-1)` integrated exactly against the linear interpolant of `f`.
/// For `n = 1` this is `2 ∫_0^1 f`, the integral over `(-1, 1)` of the even
/// extension.
pub fn integrate_weighted(f: &GridFunction, n: usize) -> f64 {
    surface_area(n) * radial_integral(f, n)
}

/// `∫_0^1 f(r) r^(n-1) dr` with the same rule as [`integrate_weighted`].
pub fn radial_integral(f: &GridFunction, n: usize) -> f64 {
    let r = f.grid.nodes();
    let mut acc = 0.0;
    for i in 0..r.len() - 1 {
        let (wl, wr) = hat_weights(r[i], r[i + 1] - r[i], n);
        acc += wl * f.right_value(i) + wr * f.values[i + 1];
    }
    acc
}

const DEGENERATE_MASS: f64 = 1e-14;

/// Mass ratio `‖u‖_{L¹} / ‖m‖_{L¹}`.
pub fn l1_ratio(u: &GridFunction, m: &GridFunction, n: usize) -> Result<f64> {
    if !u.same_grid(m) {
        return Err(Error::invalid("u and m live on different grids"));
    }
    let mass = integrate_weighted(m, n);
    if !(mass > DEGENERATE_MASS) {
        return Err(Error::DegenerateResource(mass));
    }
    Ok(integrate_weighted(u, n) / mass)
}

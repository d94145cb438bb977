//! Finite-volume discretization of the radial Laplacian
//! `φ'' + (n-1)/r φ'` on a graded grid over `[0, 1]`.
//!
//! Each node owns the dual cell between the neighbouring midpoints. Outside
//! the spike (`r >= eps`) fluxes use the exact harmonic coefficient
//! `1 / ∫ r^(1-n) dr` of the interval, so profiles that are harmonic there
//! (`a + b r` for `n = 1`, `a + b log r` for `n = 2`, `a + b r^(2-n)`
//! otherwise) carry no truncation error. Inside the spike the midpoint
//! coefficient `r_{i+1/2}^(n-1) / h` is used, which is exact for `a + b r²`.
//! The first cell `[0, r_1/2]` has no inner flux; on a uniform patch near the
//! origin this is the ghost-node form `n φ''(0) ≈ 2n (φ_1 - φ_0)/h²`.
//!
//! The stiffness `L` is the symmetric positive semidefinite matrix with
//! `(L u)_i = -(flux_{i+1/2} - flux_{i-1/2})`, so `-L u ≈ w ⊙ Δu` where `w`
//! holds the cell volumes `∫_cell r^(n-1) dr`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{shell_volume, Grid, GridFunction};

/// Condition imposed at `r = 1`; `r = 0` is always the symmetry condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    Dirichlet,
    Neumann,
}

/// Tridiagonal matrix stored by bands; `sub[0]` and `sup[dim-1]` are unused.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl Tridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.sub[i] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.sup[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Thomas algorithm; fine for the diagonally dominant and SPD systems
    /// assembled here.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut beta = self.diag[0];
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::numerical("singular tridiagonal pivot at row 0"));
        }
        c[0] = if n > 1 { self.sup[0] / beta } else { 0.0 };
        d[0] = rhs[0] / beta;
        for i in 1..n {
            beta = self.diag[i] - self.sub[i] * c[i - 1];
            if beta == 0.0 || !beta.is_finite() {
                return Err(Error::numerical(format!("singular tridiagonal pivot at row {i}")));
            }
            if i + 1 < n {
                c[i] = self.sup[i] / beta;
            }
            d[i] = (rhs[i] - self.sub[i] * d[i - 1]) / beta;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}

/// Assembled radial operator for one grid, dimension and boundary condition.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    n: usize,
    boundary: Boundary,
    /// Flux coefficient of interval `[r_i, r_{i+1}]`.
    flux: Vec<f64>,
    /// Volumes of the inner and outer half cells of each node.
    half_in: Vec<f64>,
    half_out: Vec<f64>,
    nodes: usize,
}

impl RadialOperator {
    pub fn new(grid: &Grid, n: usize, boundary: Boundary) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        let r = grid.nodes();
        let intervals = r.len() - 1;
        let outside = grid.interface_index();
        let flux = (0..intervals)
            .map(|i| flux_coefficient(r[i], r[i + 1] - r[i], n, i >= outside))
            .collect();
        let mut half_in = vec![0.0; r.len()];
        let mut half_out = vec![0.0; r.len()];
        for i in 0..intervals {
            let h = r[i + 1] - r[i];
            half_out[i] = shell_volume(r[i], 0.5 * h, n);
            half_in[i + 1] = shell_volume(r[i] + 0.5 * h, 0.5 * h, n);
        }
        Ok(RadialOperator {
            n,
            boundary,
            flux,
            half_in,
            half_out,
            nodes: r.len(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Number of unknowns: all nodes for Neumann, all but `r = 1` for Dirichlet.
    pub fn unknowns(&self) -> usize {
        match self.boundary {
            Boundary::Dirichlet => self.nodes - 1,
            Boundary::Neumann => self.nodes,
        }
    }

    /// Cell volumes `w_i = ∫_cell r^(n-1) dr` of the unknowns.
    pub fn cell_volumes(&self) -> Vec<f64> {
        (0..self.unknowns())
            .map(|i| self.half_in[i] + self.half_out[i])
            .collect()
    }

    /// Cell integrals `∫_cell m r^(n-1) dr` of a sampled resource, using the
    /// one-sided value on the outer half of the interface cell.
    pub fn cell_masses(&self, m: &GridFunction) -> Vec<f64> {
        let v = m.values();
        (0..self.unknowns())
            .map(|i| v[i] * self.half_in[i] + m.right_value(i) * self.half_out[i])
            .collect()
    }

    /// Stiffness `L` restricted to the unknowns.
    pub fn stiffness(&self) -> Tridiagonal {
        let dim = self.unknowns();
        let mut sub = vec![0.0; dim];
        let mut diag = vec![0.0; dim];
        let mut sup = vec![0.0; dim];
        for i in 0..dim {
            if i > 0 {
                let k = self.flux[i - 1];
                sub[i] = -k;
                diag[i] += k;
            }
            if i < self.flux.len() {
                let k = self.flux[i];
                diag[i] += k;
                if i + 1 < dim {
                    sup[i] = -k;
                }
            }
        }
        Tridiagonal { sub, diag, sup }
    }

    /// Expands an unknown vector to nodal values (appends the Dirichlet zero).
    pub fn to_nodal(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        if self.boundary == Boundary::Dirichlet {
            out.push(0.0);
        }
        out
    }

    /// Restricts nodal values to the unknowns.
    pub fn from_nodal<'a>(&self, values: &'a [f64]) -> &'a [f64] {
        &values[..self.unknowns()]
    }

    /// `Σ_j |L_ij| |x_j|`, the componentwise scale of `(L x)_i` used to
    /// judge cancellation; rounding in `L x` is a small multiple of it.
    pub fn flux_magnitude(&self, x: &[f64]) -> Vec<f64> {
        let nodal = self.to_nodal(x);
        (0..self.unknowns())
            .map(|i| {
                let mut s = 0.0;
                if i > 0 {
                    s += self.flux[i - 1] * (nodal[i].abs() + nodal[i - 1].abs());
                }
                if i < self.flux.len() {
                    s += self.flux[i] * (nodal[i + 1].abs() + nodal[i].abs());
                }
                s
            })
            .collect()
    }
}

/// Harmonic coefficient `1 / ∫_a^{a+h} r^(1-n) dr` outside the spike,
/// midpoint coefficient `(a + h/2)^(n-1) / h` inside it.
fn flux_coefficient(a: f64, h: f64, n: usize, harmonic: bool) -> f64 {
    if n == 1 {
        return 1.0 / h;
    }
    if !harmonic || a == 0.0 {
        return (a + 0.5 * h).powi(n as i32 - 1) / h;
    }
    let log_ratio = (h / a).ln_1p();
    if n == 2 {
        1.0 / log_ratio
    } else {
        let p = 2.0 - n as f64;
        p / (a.powf(p) * (p * log_ratio).exp_m1())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::grid::{make_grid, Domain};

    fn op(n: usize, bc: Boundary, eps: f64, intervals: usize) -> (Arc<Grid>, RadialOperator) {
        let g = Arc::new(make_grid(Domain::for_dimension(n).unwrap(), intervals, eps).unwrap());
        let o = RadialOperator::new(&g, n, bc).unwrap();
        (g, o)
    }

    #[test]
    fn thomas_matches_dense_product() {
        let t = Tridiagonal {
            sub: vec![0.0, -1.0, -1.0, -1.0],
            diag: vec![4.0, 4.0, 4.0, 4.0],
            sup: vec![-1.0, -1.0, -1.0, 0.0],
        };
        let x = vec![1.0, -2.0, 0.5, 3.0];
        let b = t.apply(&x);
        let y = t.solve(&b).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn harmonic_profiles_are_in_the_kernel() {
        for n in 1..=4 {
            let (g, o) = op(n, Boundary::Dirichlet, 0.05, 256);
            let r = g.nodes();
            let harmonic = |x: f64| match n {
                1 => 1.0 - x,
                2 => -x.ln(),
                _ => x.powf(2.0 - n as f64) - 1.0,
            };
            let x: Vec<f64> = r[..r.len() - 1]
                .iter()
                .map(|&x| harmonic(x.max(1e-300)))
                .collect();
            let lx = o.stiffness().apply(&x);
            let scale = o.flux_magnitude(&x);
            for i in g.interface_index() + 1..lx.len() {
                assert!(lx[i].abs() <= 1e-9 * scale[i].max(1e-300), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn laplacian_of_r_squared_is_2n() {
        for n in 1..=3 {
            let (g, o) = op(n, Boundary::Neumann, 0.3, 128);
            let x: Vec<f64> = g.nodes().iter().map(|r| r * r).collect();
            let lx = o.stiffness().apply(&x);
            let w = o.cell_volumes();
            for i in 0..g.interface_index() {
                let lap = -lx[i] / w[i];
                assert!((lap - 2.0 * n as f64).abs() < 1e-9, "n={n} i={i} lap={lap}");
            }
            for i in g.interface_index() + 1..lx.len() - 1 {
                let lap = -lx[i] / w[i];
                assert!((lap - 2.0 * n as f64).abs() < 1e-3, "n={n} i={i} lap={lap}");
            }
        }
    }

    #[test]
    fn cell_volumes_partition_the_ball() {
        for n in 1..=4 {
            let (_, o) = op(n, Boundary::Neumann, 0.2, 128);
            let total: f64 = o.cell_volumes().iter().sum();
            assert!((total - 1.0 / n as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn stiffness_is_symmetric_and_annihilates_constants_under_neumann() {
        let (g, o) = op(2, Boundary::Neumann, 0.1, 128);
        let s = o.stiffness();
        for i in 1..s.dim() {
            assert_eq!(s.sub[i], s.sup[i - 1]);
        }
        let ones = vec![1.0; g.len()];
        assert!(s.apply(&ones).iter().all(|v| v.abs() < 1e-9));
    }
}

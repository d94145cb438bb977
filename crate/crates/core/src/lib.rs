//! Numerical experiments on the total mass of the stationary logistic
//! equation `d Δu + u (m - u) = 0` with concentrated resources.

// `!(x > 0.0)` is used on purpose so that NaN fails the guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod bvp;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod operator;
pub mod roots;
pub mod subsuper;
pub mod svg;
pub mod sweep;

pub use error::{Error, Result};

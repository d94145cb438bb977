//! Bessel functions `J_0`, `J_1` of real argument on `[0, 50]` and their
//! positive zeros.
//!
//! Below [`SERIES_SWITCH`] the ascending power series is summed directly
//! (at least 30 terms). Above it, Miller's downward recurrence normalised by
//! `J_0 + 2 Σ J_2k = 1` is used; it stays accurate to a few ulps of the
//! largest `|J_k|` where the alternating series would lose every digit.
//!
//! [`oracle`] holds an independent double-double evaluation of the same
//! series, used by the self test and by the tests.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{bisect, sign_changes};

pub mod oracle;

/// Crossover between the power series and the downward recurrence.
pub const SERIES_SWITCH: f64 = 12.0;

/// Largest supported argument.
pub const MAX_ARG: f64 = 50.0;

/// Number of tabulated zeros per family.
pub const ZERO_TABLE_SIZE: usize = 8;

const MIN_SERIES_TERMS: usize = 30;

fn check_arg(z: f64) -> Result<()> {
    if !(0.0..=MAX_ARG).contains(&z) {
        return Err(Error::invalid(format!(
            "Bessel argument {z} outside [0, {MAX_ARG}]"
        )));
    }
    Ok(())
}

/// `J_0(z)` for `0 <= z <= 50`, absolute error below `1e-10`.
pub fn bessel_j0(z: f64) -> Result<f64> {
    check_arg(z)?;
    Ok(j0(z))
}

/// `J_1(z)` for `0 <= z <= 50`, absolute error below `1e-10`.
pub fn bessel_j1(z: f64) -> Result<f64> {
    check_arg(z)?;
    Ok(j1(z))
}

/// Unchecked `J_0`; callers guarantee `0 <= z <= 50`.
pub(crate) fn j0(z: f64) -> f64 {
    if z <= SERIES_SWITCH {
        series(z, 0)
    } else {
        miller(z).0
    }
}

pub(crate) fn j1(z: f64) -> f64 {
    if z <= SERIES_SWITCH {
        series(z, 1)
    } else {
        miller(z).1
    }
}

/// `Σ_m (-1)^m (z/2)^(2m+order) / (m! (m+order)!)` for order 0 or 1.
fn series(z: f64, order: u32) -> f64 {
    let q = 0.25 * z * z;
    let mut term = if order == 0 { 1.0 } else { 0.5 * z };
    let mut sum = term;
    let mut m = 1usize;
    loop {
        term *= -q / (m as f64 * (m as f64 + order as f64));
        sum += term;
        if m >= MIN_SERIES_TERMS && term.abs() <= 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        if m > 200 {
            break;
        }
        m += 1;
    }
    sum
}

/// `(J_0(z), J_1(z))` by Miller's backward recurrence.
fn miller(z: f64) -> (f64, f64) {
    let start = 2 * (((1.3 * z + 40.0) / 2.0).ceil() as usize);
    let two_over_z = 2.0 / z;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_z * cur - next;
        next = cur;
        cur = prev;
        // cur is now J_{k-1}
        if k - 1 == 1 {
            j1 = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += cur;
    (cur / norm, j1 / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BesselFamily {
    J0,
    J1,
}

/// First [`ZERO_TABLE_SIZE`] positive zeros of `J_0` and `J_1`
/// (`z_{1,0} = 0` is implicit).
#[derive(Debug, Clone, Serialize)]
pub struct BesselZeroTable {
    pub j0_zeros: Vec<f64>,
    pub j1_zeros: Vec<f64>,
}

impl BesselZeroTable {
    fn build() -> Result<Self> {
        let zeros = |f: fn(f64) -> f64| -> Result<Vec<f64>> {
            let brackets = sign_changes(0.5, 30.0, 6000, f);
            if brackets.len() < ZERO_TABLE_SIZE {
                return Err(Error::numerical("too few Bessel sign changes on [0.5, 30]"));
            }
            brackets
                .into_iter()
                .take(ZERO_TABLE_SIZE)
                .map(|(a, b)| bisect(a, b, 1e-15, f))
                .collect()
        };
        Ok(BesselZeroTable {
            j0_zeros: zeros(j0)?,
            j1_zeros: zeros(j1)?,
        })
    }

    /// Memoized table, built on first use.
    pub fn global() -> &'static BesselZeroTable {
        static TABLE: OnceLock<BesselZeroTable> = OnceLock::new();
        TABLE.get_or_init(|| BesselZeroTable::build().expect("Bessel zero scan on [0.5, 30]"))
    }

    /// `0 < z_{0,1} < z_{1,1} < z_{0,2} < ...`
    pub fn interlaces(&self) -> bool {
        let mut prev = 0.0;
        for (a, b) in self.j0_zeros.iter().zip(&self.j1_zeros) {
            if !(prev < *a && a < b) {
                return false;
            }
            prev = *b;
        }
        true
    }
}

/// The `k`-th positive zero (`k >= 1`) of `J_0` or `J_1`.
pub fn bessel_zero(family: BesselFamily, k: usize) -> Result<f64> {
    if k == 0 || k > ZERO_TABLE_SIZE {
        return Err(Error::invalid(format!(
            "zero index {k} outside 1..={ZERO_TABLE_SIZE}"
        )));
    }
    let table = BesselZeroTable::global();
    Ok(match family {
        BesselFamily::J0 => table.j0_zeros[k - 1],
        BesselFamily::J1 => table.j1_zeros[k - 1],
    })
}

/// Maximum deviations of the production evaluators from the double-double
/// oracle.
#[derive(Debug, Clone, Serialize)]
pub struct SelfTestReport {
    pub max_err_j0: f64,
    pub max_err_j1: f64,
    pub max_zero_err: f64,
    pub max_crossover_jump: f64,
    pub interlacing: bool,
    pub samples: usize,
}

impl SelfTestReport {
    pub fn passes(&self) -> bool {
        self.max_err_j0 <= 1e-10
            && self.max_err_j1 <= 1e-10
            && self.max_zero_err <= 1e-9
            && self.max_crossover_jump <= 1e-10
            && self.interlacing
    }
}

/// Compares `J_0`, `J_1` on `samples + 1` equispaced points of `[0, 50]` and
/// the tabulated zeros against the oracle.
pub fn self_test(samples: usize) -> SelfTestReport {
    let mut max_err_j0: f64 = 0.0;
    let mut max_err_j1: f64 = 0.0;
    for i in 0..=samples {
        let z = MAX_ARG * i as f64 / samples as f64;
        max_err_j0 = max_err_j0.max((j0(z) - oracle::j0(z)).abs());
        max_err_j1 = max_err_j1.max((j1(z) - oracle::j1(z)).abs());
    }
    let table = BesselZeroTable::global();
    let mut max_zero_err: f64 = 0.0;
    for (k, &z) in table.j0_zeros.iter().enumerate() {
        max_zero_err = max_zero_err.max((z - oracle::zero(BesselFamily::J0, k + 1)).abs());
    }
    for (k, &z) in table.j1_zeros.iter().enumerate() {
        max_zero_err = max_zero_err.max((z - oracle::zero(BesselFamily::J1, k + 1)).abs());
    }
    let below = SERIES_SWITCH * (1.0 - f64::EPSILON);
    let max_crossover_jump = (series(below, 0) - miller(SERIES_SWITCH).0)
        .abs()
        .max((series(below, 1) - miller(SERIES_SWITCH).1).abs());
    SelfTestReport {
        max_err_j0,
        max_err_j1,
        max_zero_err,
        max_crossover_jump,
        interlacing: table.interlaces(),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        assert_eq!(bessel_j1(0.0).unwrap(), 0.0);
    }

    #[test]
    fn truncated_series_at_small_argument() {
        // 1 - 0.01 + 0.2^4/64 - 0.2^6/2304 and 0.1 - 0.0005 + 0.2^5/384
        assert!((bessel_j0(0.2).unwrap() - 0.990_024_972_222).abs() < 1e-8);
        assert!((bessel_j1(0.2).unwrap() - 0.099_500_833_333).abs() < 1e-7);
    }

    #[test]
    fn derivative_identity() {
        let (z, h) = (1.0, 1e-5);
        let d = (j0(z + h) - j0(z - h)) / (2.0 * h);
        assert!((d + j1(z)).abs() < 1e-8);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(bessel_j0(-0.1).is_err());
        assert!(bessel_j1(50.5).is_err());
        assert!(bessel_zero(BesselFamily::J0, 0).is_err());
        assert!(bessel_zero(BesselFamily::J1, 9).is_err());
    }

    #[test]
    fn crossover_is_continuous() {
        let (a0, a1) = miller(SERIES_SWITCH);
        assert!((series(SERIES_SWITCH, 0) - a0).abs() < 1e-10);
        assert!((series(SERIES_SWITCH, 1) - a1).abs() < 1e-10);
    }

    #[test]
    fn envelope_is_bounded() {
        for i in 0..=1000 {
            let z = 0.05 * i as f64;
            let s = j0(z).powi(2) + j1(z).powi(2);
            assert!(s > 0.0 && s <= 1.0 + 1e-15, "z={z} s={s}");
        }
    }

    #[test]
    fn first_zeros_and_interlacing() {
        let a = bessel_zero(BesselFamily::J0, 1).unwrap();
        let b = bessel_zero(BesselFamily::J1, 1).unwrap();
        let c = bessel_zero(BesselFamily::J0, 2).unwrap();
        assert!((a - 2.404825557695773).abs() < 1e-9);
        assert!((b - 3.831705970207512).abs() < 1e-9);
        assert!(a < b && b < c);
        assert!(BesselZeroTable::global().interlaces());
    }
}

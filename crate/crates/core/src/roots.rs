//! Bracketing root finders.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]`; `f(lo)` and `f(hi)` must have opposite signs.
/// Stops once the bracket is narrower than `tol * max(|lo|, |hi|, 1e-300)`.
pub fn bisect(mut lo: f64, mut hi: f64, rel_tol: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(Error::numerical(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo:e}, {f_hi:e}"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * lo.abs().max(hi.abs()).max(1e-300) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans `[a, b]` in `steps` equal pieces and returns every bracket where `f`
/// changes sign.
pub fn sign_changes(a: f64, b: f64, steps: usize, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let dx = (b - a) / steps as f64;
    let mut x0 = a;
    let mut f0 = f(a);
    for k in 1..=steps {
        let x1 = if k == steps { b } else { a + k as f64 * dx };
        let f1 = f(x1);
        if f0 != 0.0 && f0.signum() != f1.signum() {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(1.0, 2.0, 1e-14, |x| x * x - 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(bisect(2.0, 3.0, 1e-12, |x| x * x - 2.0).is_err());
    }

    #[test]
    fn scan_finds_sine_roots() {
        let b = sign_changes(0.5, 10.0, 1000, f64::sin);
        assert_eq!(b.len(), 3);
        for (k, (lo, hi)) in b.iter().enumerate() {
            let z = std::f64::consts::PI * (k + 1) as f64;
            assert!(*lo <= z && z <= *hi);
        }
    }
}

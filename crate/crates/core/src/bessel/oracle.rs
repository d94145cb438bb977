//! Reference `J_0`, `J_1` from the ascending series summed in double-double
//! arithmetic (about 32 significant digits). Slow, but independent of the
//! production evaluators and accurate to ~1e-13 absolute on `[0, 50]` where
//! the largest series term is near `1e20`.

use super::BesselFamily;

#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let s = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        let lo = p.lo + (self.hi * o.lo + self.lo * o.hi);
        quick_two_sum(p.hi, lo)
    }

    fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let p = two_prod(q1, b);
        let r = two_sum(self.hi, -p.hi);
        let r_lo = r.lo - p.lo + self.lo;
        let q2 = (r.hi + r_lo) / b;
        quick_two_sum(q1, q2)
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

fn series_dd(z: f64, order: u32) -> f64 {
    let half = Dd::from(z).div_f64(2.0);
    let q = half.mul(half);
    let mut term = if order == 0 { Dd::from(1.0) } else { half };
    let mut sum = term;
    let mut m = 1u32;
    loop {
        term = term.mul(q).neg().div_f64(m as f64).div_f64((m + order) as f64);
        sum = sum.add(term);
        if m as f64 > z && term.hi.abs() < 1e-34 {
            break;
        }
        m += 1;
        if m > 400 {
            break;
        }
    }
    sum.hi + sum.lo
}

pub fn j0(z: f64) -> f64 {
    series_dd(z, 0)
}

pub fn j1(z: f64) -> f64 {
    series_dd(z, 1)
}

/// `k`-th positive zero by a 0.01-step scan and plain bisection on the
/// double-double series.
pub fn zero(family: BesselFamily, k: usize) -> f64 {
    let f = match family {
        BesselFamily::J0 => j0,
        BesselFamily::J1 => j1,
    };
    let mut found = 0;
    let mut a = 0.5;
    let mut fa = f(a);
    loop {
        let b = a + 0.01;
        let fb = f(b);
        if fa.signum() != fb.signum() {
            found += 1;
            if found == k {
                let (mut lo, mut hi, mut flo) = (a, b, fa);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(mid);
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        a = b;
        fa = fb;
        assert!(a < 60.0, "zero {k} not found below 60");
    }
}

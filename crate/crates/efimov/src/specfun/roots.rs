//! Certified bracketing root finder: bisection until the bracket is narrow,
//! then one secant step inside the final bracket.

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub fx: T,
    /// Final bracket; `f(lo)` and `f(hi)` have opposite signs (or one is zero).
    pub lo: T,
    pub hi: T,
    pub f_lo: T,
    pub f_hi: T,
    pub iterations: u32,
}

impl<T: Real> Root<T> {
    pub fn width(&self) -> T {
        (self.hi - self.lo).abs()
    }
}

/// Finds a root of `f` in `[lo, hi]`. Stops when the bracket is narrower than
/// `x_rel_tol·|x|` (plus a tiny absolute floor) or an exact zero is hit.
pub fn bisect_secant<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    lo: T,
    hi: T,
    x_rel_tol: T,
    max_iter: u32,
) -> Result<Root<T>> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    let to64 = |v: T| v.to_f64().unwrap_or(f64::NAN);
    if !(f_lo.is_finite() && f_hi.is_finite()) {
        return Err(Error::domain("non-finite function value at bracket end"));
    }
    let zero = T::zero();
    let done = |x: T, fx: T, lo, hi, f_lo, f_hi, it| Root {
        x,
        fx,
        lo,
        hi,
        f_lo,
        f_hi,
        iterations: it,
    };
    if f_lo == zero {
        return Ok(done(lo, zero, lo, lo, zero, zero, 0));
    }
    if f_hi == zero {
        return Ok(done(hi, zero, hi, hi, zero, zero, 0));
    }
    if (f_lo > zero) == (f_hi > zero) {
        return Err(Error::Bracket {
            lo: to64(lo),
            hi: to64(hi),
        });
    }
    let floor = T::min_positive_value() * T::c(16.0);
    let mut it = 0;
    while it < max_iter {
        let mid = lo + (hi - lo) * T::c(0.5);
        if hi - lo <= x_rel_tol * mid.abs() + floor || !(mid > lo && mid < hi) {
            break;
        }
        it += 1;
        let fm = f(mid)?;
        if fm == zero {
            return Ok(done(mid, zero, mid, mid, zero, zero, it));
        }
        if (fm > zero) == (f_lo > zero) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    if hi - lo > x_rel_tol * (lo + (hi - lo) * T::c(0.5)).abs() + floor && it >= max_iter {
        return Err(Error::no_conv(
            "bisection",
            format!("bracket [{:e}, {:e}] after {it} steps", to64(lo), to64(hi)),
        ));
    }
    // Secant polish; the point stays inside the certified bracket.
    let mut x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if !(x >= lo && x <= hi) {
        x = lo + (hi - lo) * T::c(0.5);
    }
    let fx = f(x)?;
    Ok(done(x, fx, lo, hi, f_lo, f_hi, it + 1))
}

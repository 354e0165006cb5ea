//! Macdonald function of imaginary order,
//! K_{is}(t) = ∫₀^∞ cos(s z) e^{−t cosh z} dz.
//!
//! The integrand is even and entire in z and decays doubly exponentially, so
//! the trapezoidal rule on a fixed step converges geometrically. A fixed step
//! keeps the result a smooth function of t, which the finite-difference
//! residual checks rely on. The error estimate compares against the rule with
//! twice the step, using every other node.

use crate::specfun::quadrature::{Integral, QuadratureSpec};
use crate::{Error, Real, Result};

pub fn bessel_k_imag<T: Real>(s: T, t: T, q: &QuadratureSpec<T>) -> Result<T> {
    Ok(bessel_k_imag_with_err(s, t, q)?.value)
}

pub fn bessel_k_imag_with_err<T: Real>(s: T, t: T, q: &QuadratureSpec<T>) -> Result<Integral<T>> {
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::domain(format!("imaginary order modulus must be positive, got {s}")));
    }
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("argument must be positive, got {t}")));
    }
    q.validate()?;
    let floor = T::min_positive_value().max(T::c(1e-300));
    let tol = q.abs_tol.max(floor);
    let decay = -tol.ln() + T::c(10.0);
    // e^{−t(cosh z − 1)} = e^{−decay} at z_max.
    let z_max = T::c(2.0) * (decay / (T::c(2.0) * t)).sqrt().asinh();
    let h = T::c(0.05).min(T::c(0.25) / t.sqrt());
    let n = (z_max / h).ceil().to_usize().unwrap_or(usize::MAX);
    if n > 20_000_000 {
        return Err(Error::no_conv("K_is trapezoid", format!("t={t} needs {n} nodes")));
    }
    let two = T::c(2.0);
    let term = |k: usize| {
        let z = h * T::from_usize_exact(k);
        let sh = (z / two).sinh();
        (s * z).cos() * (-two * t * sh * sh).exp()
    };
    let mut fine = T::c(0.5) * term(0);
    let mut coarse = fine;
    for k in 1..=n {
        let v = term(k);
        fine = fine + v;
        if k % 2 == 0 {
            coarse = coarse + v;
        }
    }
    let damp = (-t).exp();
    let value = fine * h * damp;
    let coarse = coarse * two * h * damp;
    let err = (value - coarse).abs();
    if !value.is_finite() {
        return Err(Error::no_conv("K_is trapezoid", format!("non-finite value at t={t}")));
    }
    if err > q.target(value).max(T::epsilon() * T::c(64.0) * damp) {
        return Err(Error::no_conv("K_is trapezoid", format!("error {err} at t={t}")));
    }
    Ok(Integral {
        value,
        err,
        evals: n + 1,
    })
}

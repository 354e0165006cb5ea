//! Special functions and the numerical engines (quadrature, root bracketing)
//! the rest of the crate is built on. Everything here is generic over [`Real`].
//!
//! [`Real`]: crate::Real

pub mod bessel;
pub mod gamma;
pub mod gegenbauer;
pub mod kis;
pub mod quadrature;
pub mod roots;

pub use bessel::{bessel_i, bessel_ik_scaled, bessel_k, i_ratio_ladder, k_ratio_ladder};
pub use gamma::{arg_gamma_one_plus_is, ln_gamma_complex};
pub use gegenbauer::{chebyshev_u, gegenbauer_c2, gegenbauer_c2_all};
pub use kis::bessel_k_imag;
pub use quadrature::{gauss_legendre, integrate, Domain, Integral, QuadratureSpec, Scheme};
pub use roots::{bisect_secant, Root};

/// Order of a modified Bessel function: real `ν` or purely imaginary `i s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BesselOrder<T> {
    Real(T),
    Imaginary(T),
}

impl<T: crate::Real> BesselOrder<T> {
    pub fn new_real(nu: T) -> crate::Result<Self> {
        Self::check(nu).map(BesselOrder::Real)
    }

    pub fn new_imaginary(s: T) -> crate::Result<Self> {
        Self::check(s).map(BesselOrder::Imaginary)
    }

    fn check(v: T) -> crate::Result<T> {
        if v.is_finite() && v >= T::zero() {
            Ok(v)
        } else {
            Err(crate::Error::domain("Bessel order must be finite and non-negative"))
        }
    }

    /// K of this order at `t`.
    pub fn k(&self, t: T, q: &QuadratureSpec<T>) -> crate::Result<T> {
        match *self {
            BesselOrder::Real(nu) => bessel_k(nu, t),
            BesselOrder::Imaginary(s) => bessel_k_imag(s, t, q),
        }
    }
}

//! Efimov trimers of three identical bosons with contact interactions and a
//! hard-core hyper-radius `a`.
//!
//! The numeric primitives in [`specfun`] are generic over the scalar type
//! through [`Real`]; the physics modules work in `f64`, and the aliases at the
//! bottom of this file fix the generic primitives to `f64` for convenience.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigenfunctions;
pub mod error;
pub mod forms;
pub mod kernels;
pub mod potential;
pub mod scalar;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::Real;

pub use eigenfunctions::{EigenfunctionSpec, HyperPoint};
pub use forms::{FormReport, GammaResidual, RadialCharge};
pub use kernels::{KernelSeriesConfig, KernelValue};
pub use potential::PotentialConfig;
pub use spectrum::{EfimovLevel, ModelGeometry, SpectralConstants};

pub type QuadratureSpec = specfun::quadrature::QuadratureSpec<f64>;
pub type Domain = specfun::quadrature::Domain<f64>;
pub type Integral = specfun::quadrature::Integral<f64>;
pub type BesselIK = specfun::bessel::BesselIK<f64>;
pub type Root = specfun::roots::Root<f64>;

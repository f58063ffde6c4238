//! Fluctuating two-ray (FTR) fading.
//!
//! Two specular waves whose common amplitude fluctuates with a unit-mean
//! Gamma variable, plus diffuse Gaussian scatter. The crate provides the
//! SNR moment generating function, exact and mixture-approximate PDF/CDF for
//! integer fluctuation index, a seeded Monte Carlo channel sampler, average
//! BER and outage metrics with their high-SNR asymptotes, reductions to the
//! classical fading models, and a log-CDF goodness-of-fit engine.
//!
//! Core numerics are generic over the scalar type through [`Real`]; the
//! `*F64` / `*F32` aliases below are the concrete instantiations. The
//! sampler, fitting engine and Monte Carlo metrics work in `f64`.

pub mod error;
pub mod fit;
pub mod metrics;
pub mod model;
pub mod sampler;
pub mod scalar;
pub mod specfn;

pub use error::{Error, Result};
pub use scalar::Real;

pub type FtrParamsF64 = model::FtrParams<f64>;
pub type FtrParamsF32 = model::FtrParams<f32>;
pub type SpecularGeometryF64 = model::SpecularGeometry<f64>;
pub type PolyCoeffsF64 = model::PolyCoeffs<f64>;
pub type MixtureCoeffsF64 = model::MixtureCoeffs<f64>;
pub type MixtureCoeffsF32 = model::MixtureCoeffs<f32>;
pub type QuadratureF64 = specfn::Quadrature<f64>;
pub type QuadratureF32 = specfn::Quadrature<f32>;
pub type LaplaceInversionF64 = specfn::LaplaceInversion<f64>;
pub type LaplaceInversionF32 = specfn::LaplaceInversion<f32>;
pub type CepFamilyF64 = metrics::CepFamily<f64>;
pub type OutageSpecF64 = metrics::OutageSpec<f64>;

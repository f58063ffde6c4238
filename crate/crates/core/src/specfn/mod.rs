//! Special functions and numerical building blocks.

mod bessel;
mod hypergeometric;
mod laplace;
mod legendre;
mod quadrature;

pub use bessel::{bessel_i0, bessel_i0_scaled};
pub use hypergeometric::{gauss_2f1, gauss_2f1_tol, kummer_1f1_integer, lauricella_fd4};
pub use laplace::{contour_crossing, inverse_laplace, inverse_laplace_shifted, InversionMethod, Inverted, LaplaceInversion};
pub use legendre::{
    legendre_coefficient, legendre_fn, legendre_fn_laplace, legendre_poly, legendre_poly_explicit,
    legendre_poly_recurrence,
};
pub use quadrature::{Integral, Quadrature};

pub(crate) use legendre::{legendre_poly_complex, ln_legendre_any};

use crate::scalar::Real;

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    T::lit(libm::lgamma(x.to_f64_lossy()))
}

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    T::lit(libm::erfc(x.to_f64_lossy()))
}

/// Gaussian tail `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function<T: Real>(x: T) -> T {
    erfc(x * T::FRAC_1_SQRT_2()) / T::lit(2.0)
}

//! Envelope `r = sqrt(gamma)` distributions with `Omega = E[r^2]` in place of `gamma_bar`.

use super::{cdf_approx, cdf_exact, pdf_approx, pdf_exact, FtrParams, MixtureCoeffs};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfn::LaplaceInversion;

fn power_params<T: Real>(p: &FtrParams<T>, r: T, omega: T) -> Result<FtrParams<T>> {
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::domain(format!("envelope argument must be finite and >= 0, got {r}")));
    }
    p.with_gamma_bar(omega)
}

/// `f_r(r) = 2 r f_gamma(r^2)`, exact.
pub fn envelope_pdf<T: Real>(p: &FtrParams<T>, r: T, omega: T, cfg: &LaplaceInversion<T>) -> Result<T> {
    let q = power_params(p, r, omega)?;
    Ok(T::lit(2.0) * r * pdf_exact(&q, r * r, cfg)?)
}

/// `F_r(r) = F_gamma(r^2)`, exact.
pub fn envelope_cdf<T: Real>(p: &FtrParams<T>, r: T, omega: T, cfg: &LaplaceInversion<T>) -> Result<T> {
    let q = power_params(p, r, omega)?;
    cdf_exact(&q, r * r, cfg)
}

/// Envelope density from the mixture approximation.
pub fn envelope_pdf_approx<T: Real>(p: &FtrParams<T>, r: T, omega: T, c: &MixtureCoeffs<T>) -> Result<T> {
    let q = power_params(p, r, omega)?;
    Ok(T::lit(2.0) * r * pdf_approx(&q, r * r, c)?)
}

/// Envelope CDF from the mixture approximation.
pub fn envelope_cdf_approx<T: Real>(p: &FtrParams<T>, r: T, omega: T, c: &MixtureCoeffs<T>) -> Result<T> {
    let q = power_params(p, r, omega)?;
    cdf_approx(&q, r * r, c)
}

//! Moment generating functions of the SNR.

use super::{poly_coeffs, shape_constants, FtrParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfn::{gauss_2f1, ln_legendre_any};

/// `M(s) = E[exp(s gamma)]` for real `s < a2` (see [`super::PolyCoeffs`]).
///
/// `M(s) = (1+K)/(1+K-gbar s) * (m(1+K-gbar s)/sqrt R)^m * P_{m-1}(z)` with
/// `z = (m(1+K) - (m+K) gbar s)/sqrt R`. Evaluated in the log domain; `z >= 1`
/// throughout, so the Legendre factor is positive. `M(0) = 1` exactly.
pub fn mgf<T: Real>(p: &FtrParams<T>, s: T) -> Result<T> {
    Ok(ln_mgf(p, s)?.exp())
}

pub(crate) fn ln_mgf<T: Real>(p: &FtrParams<T>, s: T) -> Result<T> {
    if s == T::zero() {
        return Ok(T::zero());
    }
    let a2 = poly_coeffs(p).a2;
    if !(s < a2) {
        return Err(Error::domain(format!("mgf is defined for s < {a2}, got s = {s}")));
    }
    let one = T::one();
    let (c1, c2, c3) = shape_constants(p);
    let base = p.m() * (one + p.k());
    let u = p.gamma_bar() * s;
    let root = (base - c2 * u).sqrt() * (base - c3 * u).sqrt();
    let ln_b = ((one + p.k()) / (one + p.k() - u)).ln();
    let ratio = p.m() * (one + p.k() - u) / root;
    let z = ((base - c1 * u) / root).max(one);
    let ln_p = ln_legendre_any(p.m() - one, z)?;
    Ok(ln_b + p.m() * ratio.ln() + ln_p)
}

/// Mean SNR recovered from the MGF slope at the origin.
///
/// Five-point central difference with step `a2 * eps^(1/5)`; should
/// reproduce `gamma_bar`.
pub fn mgf_derivative_mean<T: Real>(p: &FtrParams<T>) -> Result<T> {
    let h = poly_coeffs(p).a2 * T::epsilon().powf(T::lit(0.2));
    let f = |s: T| mgf(p, s);
    let eight = T::lit(8.0);
    let d = (f(-(h + h))? - eight * f(-h)? + eight * f(h)? - f(h + h)?) / (T::lit(12.0) * h);
    Ok(d)
}

/// MGF when the two specular components fluctuate independently.
///
/// `M(s) = (1+K)/(1+K-gbar s) * (1 - K g/m + K^2 Delta^2 g^2/(4m^2))^-m
///  * 2F1(m, m; 1; K^2 Delta^2 g^2 / (4m^2 - 4mKg + K^2 Delta^2 g^2))`
/// with `g = gbar s/(1+K-gbar s)`, for `s <= 0`.
pub fn mgf_independent<T: Real>(p: &FtrParams<T>, s: T) -> Result<T> {
    if s == T::zero() {
        return Ok(T::one());
    }
    if !(s < T::zero()) {
        return Err(Error::domain(format!("mgf_independent is defined for s <= 0, got s = {s}")));
    }
    let one = T::one();
    let (k, m) = (p.k(), p.m());
    let u = p.gamma_bar() * s;
    let g = u / (one + k - u);
    let kdg = k * p.delta() * g;
    let four_m2 = T::lit(4.0) * m * m;
    let quad = one - k * g / m + kdg * kdg / four_m2;
    let arg = kdg * kdg / (four_m2 - T::lit(4.0) * m * k * g + kdg * kdg);
    if !(arg >= T::zero() && arg < one) {
        return Err(Error::domain(format!("2F1 argument {arg} outside [0, 1)")));
    }
    let f21 = gauss_2f1(m, m, one, arg)?;
    Ok((one + k) / (one + k - u) * (-m * quad.ln()).exp() * f21)
}

//! Exact PDF and CDF for integer `m` by numerical Laplace inversion.
//!
//! With `s = -q` the MGF factors as
//! `M(-q) = (m/D)^m (1+K)/gbar (a4+q)^(m-1) / (sqrt(a2+q) sqrt(a3+q))^m * P_{m-1}(z)`,
//! `z = (m+K)/D (a1+q) / (sqrt(a2+q) sqrt(a3+q))`, `D = sqrt((m+K)^2 - K^2 Delta^2)`.
//! Principal branches are analytic for `Re q > -a2`, so the density is the
//! inverse transform of this expression and the CDF that of `M(-q)/q`.

use num_complex::Complex;

use super::{poly_coeffs, shape_constants, FtrParams, PolyCoeffs};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfn::{contour_crossing, inverse_laplace, inverse_laplace_shifted, legendre_poly, legendre_poly_complex, LaplaceInversion};

/// Contour abscissas as fractions of the distance to the nearest
/// singularity, tried in order until one certifies. Moderate tilts suit the
/// bulk; deep tails need the contour close to the singularity.
const BULK_TILTS: [f64; 4] = [0.5, 0.9, 0.2, 0.0];
const TAIL_TILTS: [f64; 4] = [0.9, 0.5, 0.2, 0.0];

/// `a2 x` beyond which the tail ordering is used.
const DEEP_TAIL: f64 = 10.0;

struct Transform<T> {
    n: usize,
    m: T,
    ln_c0: T,
    z_scale: T,
    a: PolyCoeffs<T>,
}

impl<T: Real> Transform<T> {
    fn new(p: &FtrParams<T>, n: usize) -> Self {
        let (c1, c2, c3) = shape_constants(p);
        let d = (c2 * c3).sqrt();
        let m = p.m();
        Transform {
            n,
            m,
            ln_c0: m * (m / d).ln() + ((T::one() + p.k()) / p.gamma_bar()).ln(),
            z_scale: c1 / d,
            a: poly_coeffs(p),
        }
    }

    fn eval(&self, q: Complex<T>) -> Complex<T> {
        let half = T::lit(0.5);
        let ln_root = ((q + self.a.a2).ln() + (q + self.a.a3).ln()) * half;
        let z = (q + self.a.a1) * (-ln_root).exp() * self.z_scale;
        let (mant, ln_scale) = legendre_poly_complex(self.n - 1, z);
        let ln = (q + self.a.a4).ln() * (self.m - T::one()) - ln_root * self.m + (self.ln_c0 + ln_scale);
        ln.exp() * mant
    }
}

/// `M(-q)` for complex `q` right of `-a2`; integer `m` only.
pub fn transform<T: Real>(p: &FtrParams<T>, q: Complex<T>) -> Result<Complex<T>> {
    let n = p.require_integer_m("the factorized transform")?;
    Ok(Transform::new(p, n).eval(q))
}

/// `f(0) = (m/D)^m (1+K)/gbar P_{m-1}((m+K)/D)`.
pub fn pdf_at_origin<T: Real>(p: &FtrParams<T>) -> Result<T> {
    let n = p.require_integer_m("pdf_at_origin")?;
    let t = Transform::new(p, n);
    Ok(t.ln_c0.exp() * legendre_poly(n - 1, t.z_scale))
}

/// Exact SNR density for integer `m`.
pub fn pdf_exact<T: Real>(p: &FtrParams<T>, x: T, cfg: &LaplaceInversion<T>) -> Result<T> {
    let n = p.require_integer_m("pdf_exact")?;
    check_x(x)?;
    if x == T::zero() {
        return pdf_at_origin(p);
    }
    let t = Transform::new(p, n);
    let v = tilted(&t, x, cfg, false, |q| t.eval(q))?;
    Ok(v.max(T::zero()))
}

/// Inverts `f` on the first certifying contour left of the origin;
/// `through_origin` admits the unshifted contour as a last resort.
fn tilted<T: Real, F>(t: &Transform<T>, x: T, cfg: &LaplaceInversion<T>, across_pole: bool, f: F) -> Result<T>
where
    F: Fn(Complex<T>) -> Complex<T>,
{
    let order = if t.a.a2 * x > T::lit(DEEP_TAIL) { TAIL_TILTS } else { BULK_TILTS };
    let mut first = None;
    for tilt in order {
        let sigma = -T::lit(tilt) * t.a.a2;
        if across_pole && !(contour_crossing(x, sigma, cfg) < T::zero()) {
            continue;
        }
        match inverse_laplace_shifted(&f, x, sigma, cfg) {
            Ok(v) => return Ok(v.value),
            Err(e) => {
                first.get_or_insert(e);
            }
        }
    }
    Err(first.unwrap_or_else(|| Error::domain("no contour fits between the origin and the transform singularities")))
}

/// Exact SNR CDF for integer `m`.
pub fn cdf_exact<T: Real>(p: &FtrParams<T>, x: T, cfg: &LaplaceInversion<T>) -> Result<T> {
    let n = p.require_integer_m("cdf_exact")?;
    check_x(x)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    let t = Transform::new(p, n);
    let v = inverse_laplace(|q| t.eval(q) / q, x, cfg)?.value;
    if v <= T::lit(0.5) {
        return Ok(v.max(T::zero()));
    }
    // Upper tail: moving the contour left across the pole at the origin
    // leaves -(1 - F), certified relative to the tail itself.
    match tilted(&t, x, cfg, true, |q| -t.eval(q) / q) {
        Ok(tail) => Ok((T::one() - tail.max(T::zero())).max(T::zero())),
        Err(_) => Ok(v.min(T::one())),
    }
}

fn check_x<T: Real>(x: T) -> Result<()> {
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("SNR argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mgf;

    #[test]
    fn transform_matches_real_mgf() {
        let p = FtrParams::<f64>::new(15.0, 0.9, 5.0, 1.0).unwrap();
        for s in [-0.1, -1.0, -7.5, -40.0] {
            let a = transform(&p, Complex::new(-s, 0.0)).unwrap();
            let b = mgf(&p, s).unwrap();
            assert!((a.re - b).abs() < 1e-13 * b, "s={s}");
            assert!(a.im.abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_case() {
        let p = FtrParams::<f64>::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let cfg = LaplaceInversion::default();
        let v = pdf_exact(&p, 1.0, &cfg).unwrap();
        assert!((v - (-1.0_f64).exp()).abs() < 1e-10);
        let p = FtrParams::<f64>::new(0.0, 0.0, 2.0, 1.0).unwrap();
        let f = cdf_exact(&p, std::f64::consts::LN_2, &cfg).unwrap();
        assert!((f - 0.5).abs() < 1e-10);
        assert_eq!(cdf_exact(&p, 0.0, &cfg).unwrap(), 0.0);
        assert!((pdf_exact(&p, 0.0, &cfg).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn origin_value_is_the_limit() {
        let p = FtrParams::<f64>::new(15.0, 0.9, 5.0, 1.0).unwrap();
        let cfg = LaplaceInversion::talbot();
        let f0 = pdf_at_origin(&p).unwrap();
        let near = pdf_exact(&p, 1e-7, &cfg).unwrap();
        assert!(((f0 - near) / f0).abs() < 1e-5);
    }

    #[test]
    fn non_integer_m_rejected() {
        let p = FtrParams::<f64>::new(1.0, 0.5, 1.5, 1.0).unwrap();
        let cfg = LaplaceInversion::default();
        assert!(matches!(pdf_exact(&p, 1.0, &cfg), Err(Error::Domain(_))));
        assert!(matches!(cdf_exact(&p, 1.0, &cfg), Err(Error::Domain(_))));
    }
}

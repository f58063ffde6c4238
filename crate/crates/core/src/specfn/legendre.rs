//! Legendre polynomials and Legendre functions of the first kind.

use num_complex::Complex;

use super::hypergeometric::gauss_2f1;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Degrees up to this value use the explicit finite sum, above it the
/// three-term recurrence.
const EXPLICIT_MAX_DEGREE: usize = 10;

/// `C(n, k)` as a float, multiplicative form.
pub(crate) fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1);
    }
    acc
}

/// Coefficient `C(n, q) * C(2n - 2q, n)` of the explicit Legendre sum.
pub fn legendre_coefficient<T: Real>(n: usize, q: usize) -> T {
    binomial::<T>(n, q) * binomial::<T>(2 * n - 2 * q, n)
}

/// Legendre polynomial `P_n(z)`.
///
/// Low degrees are summed explicitly as
/// `2^-n * sum_q (-1)^q C(n,q) C(2n-2q,n) z^(n-2q)`; higher degrees use the
/// upward recurrence, which does not suffer from the alternating-sum
/// cancellation.
pub fn legendre_poly<T: Real>(n: usize, z: T) -> T {
    if n <= EXPLICIT_MAX_DEGREE {
        legendre_poly_explicit(n, z)
    } else {
        legendre_poly_recurrence(n, z)
    }
}

/// `P_n(z)` from the explicit alternating sum.
pub fn legendre_poly_explicit<T: Real>(n: usize, z: T) -> T {
    let mut sum = T::zero();
    for q in 0..=n / 2 {
        let term = legendre_coefficient::<T>(n, q) * z.powi((n - 2 * q) as i32);
        if q % 2 == 0 {
            sum = sum + term;
        } else {
            sum = sum - term;
        }
    }
    sum / T::lit(2.0).powi(n as i32)
}

/// `P_n(z)` from `(k+1) P_{k+1} = (2k+1) z P_k - k P_{k-1}`.
pub fn legendre_poly_recurrence<T: Real>(n: usize, z: T) -> T {
    if n == 0 {
        return T::one();
    }
    let (mut prev, mut cur) = (T::one(), z);
    for k in 1..n {
        let kf = T::from_usize_lossy(k);
        let next = ((kf + kf + T::one()) * z * cur - kf * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln P_n(z)` for `z >= 1`, where `P_n(z) >= 1`. Rescales the recurrence so
/// large degrees do not overflow.
pub(crate) fn ln_legendre_poly<T: Real>(n: usize, z: T) -> T {
    debug_assert!(z >= T::one());
    if n == 0 {
        return T::zero();
    }
    let limit = T::max_value().powf(T::lit(0.25));
    let (mut prev, mut cur) = (T::one(), z);
    let mut ln_scale = T::zero();
    for k in 1..n {
        let kf = T::from_usize_lossy(k);
        let next = ((kf + kf + T::one()) * z * cur - kf * prev) / (kf + T::one());
        prev = cur;
        cur = next;
        if cur > limit {
            prev = prev / cur;
            ln_scale = ln_scale + cur.ln();
            cur = T::one();
        }
    }
    ln_scale + cur.ln()
}

/// `P_n(z)` for complex `z`, returned as `(mantissa, ln_scale)` with
/// `P_n(z) = mantissa * exp(ln_scale)`.
pub(crate) fn legendre_poly_complex<T: Real>(n: usize, z: Complex<T>) -> (Complex<T>, T) {
    let one = Complex::new(T::one(), T::zero());
    if n == 0 {
        return (one, T::zero());
    }
    let limit = T::max_value().powf(T::lit(0.25));
    let (mut prev, mut cur) = (one, z);
    let mut ln_scale = T::zero();
    for k in 1..n {
        let kf = T::from_usize_lossy(k);
        let next = (cur * z * (kf + kf + T::one()) - prev * kf) / (kf + T::one());
        prev = cur;
        cur = next;
        let size = cur.norm();
        if size > limit {
            prev = prev / size;
            cur = cur / size;
            ln_scale = ln_scale + size.ln();
        }
    }
    (cur, ln_scale)
}

/// Legendre function of the first kind `P_mu(z) = 2F1(-mu, mu+1; 1; (1-z)/2)`.
///
/// Only the hypergeometric series region `|1 - z| < 2` is accepted. Integer
/// degrees (with `P_{-mu-1} = P_mu`) go through the recurrence, which avoids
/// the cancellation of the terminating series.
pub fn legendre_fn<T: Real>(mu: T, z: T) -> Result<T> {
    if !mu.is_finite() || !z.is_finite() {
        return Err(Error::domain("legendre_fn: non-finite argument"));
    }
    if (T::one() - z).abs() >= T::lit(2.0) {
        return Err(Error::domain(format!(
            "legendre_fn: |1 - z| must be < 2, got z = {z}"
        )));
    }
    let degree = if mu < T::zero() { -mu - T::one() } else { mu };
    if degree == degree.floor() {
        if let Some(n) = degree.to_usize() {
            return Ok(legendre_poly(n, z));
        }
    }
    gauss_2f1(-mu, mu + T::one(), T::one(), (T::one() - z) / T::lit(2.0))
}

/// `P_mu(z)` for real `z >= 1` and any real degree, from Laplace's integral
/// `(1/pi) * int_0^pi (z + sqrt(z^2-1) cos t)^mu dt`.
pub fn legendre_fn_laplace<T: Real>(mu: T, z: T) -> Result<T> {
    let ln = ln_legendre_fn_laplace(mu, z)?;
    let v = ln.exp();
    if v.is_infinite() {
        return Err(Error::Overflow(format!("P_{mu}({z}) exceeds the representable range")));
    }
    Ok(v)
}

/// `ln P_mu(z)` for `z >= 1`.
///
/// The integrand is even and 2pi-periodic in `t`, so the trapezoid rule
/// converges geometrically; the node count doubles until two successive
/// estimates agree to a few ulps.
pub(crate) fn ln_legendre_fn_laplace<T: Real>(mu: T, z: T) -> Result<T> {
    if !mu.is_finite() || !z.is_finite() || z < T::one() {
        return Err(Error::domain(format!(
            "Laplace integral for P_mu(z) needs finite mu and z >= 1, got z = {z}"
        )));
    }
    if mu == T::zero() || z == T::one() {
        return Ok(T::zero());
    }
    let root = (z * z - T::one()).sqrt();
    let top = z + root;
    let ln_top = top.ln();
    // integrand / top^mu, in (0, 1] for mu > 0 and >= 1 for mu < 0
    let scaled = |t: T| -> T { (mu * ((z + root * t.cos()) / top).ln()).exp() };
    let pi = T::PI();
    let tol = T::epsilon() * T::lit(16.0);
    let mut n = 16usize;
    let mut prev = trapezoid_half_period(&scaled, n, pi);
    loop {
        n *= 2;
        let cur = trapezoid_half_period(&scaled, n, pi);
        if (cur - prev).abs() <= tol * cur.abs() {
            return Ok(mu * ln_top + cur.ln());
        }
        if n > 1 << 20 {
            return Err(Error::NonConvergence {
                what: "Laplace integral for the Legendre function",
                estimate: ((cur - prev).abs() / cur.abs()).to_f64_lossy(),
                target: tol.to_f64_lossy(),
            });
        }
        prev = cur;
    }
}

/// Mean of `f` over `[0, pi]` by the trapezoid rule with `n` panels.
fn trapezoid_half_period<T: Real>(f: &impl Fn(T) -> T, n: usize, pi: T) -> T {
    let h = pi / T::from_usize_lossy(n);
    let mut sum = (f(T::zero()) + f(pi)) / T::lit(2.0);
    for i in 1..n {
        sum = sum + f(h * T::from_usize_lossy(i));
    }
    sum / T::from_usize_lossy(n)
}

/// `ln P_mu(z)` for `z >= 1`, choosing the cheapest accurate route.
pub(crate) fn ln_legendre_any<T: Real>(mu: T, z: T) -> Result<T> {
    if z == T::one() {
        return Ok(T::zero());
    }
    let deg = mu.round();
    if (mu - deg).abs() <= T::epsilon() * T::lit(8.0) * deg.abs().max(T::one()) && deg >= T::zero() {
        if let Some(n) = deg.to_usize() {
            return Ok(ln_legendre_poly(n, z));
        }
    }
    if z - T::one() < T::lit(0.5) {
        if let Ok(v) = legendre_fn(mu, z) {
            if v > T::zero() && v.is_finite() {
                return Ok(v.ln());
            }
        }
    }
    ln_legendre_fn_laplace(mu, z)
}

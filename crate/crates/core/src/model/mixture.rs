//! Finite mixture approximation of the PDF and CDF for integer `m`.
//!
//! The density is approximated by `sum_i alpha_i/2 [G(x; beta, K(1-delta_i)) + G(x; beta, K(1+delta_i))]`,
//! a weighted set of Rician-shadowed kernels. The weights are closed
//! Newton-Cotes weights on `2M` equispaced nodes, obtained in exact rational
//! arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FtrParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orders above this lose accuracy in floating point: the weights alternate
/// in sign and grow factorially.
pub const PRECISE_MIXTURE_ORDER: usize = 25;

/// Mixture order `M`, weights `alpha_i` and similarity offsets `delta_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureCoeffs<T> {
    order: usize,
    alpha: Vec<T>,
    delta: Vec<T>,
    source_delta: T,
}

impl<T: Real> MixtureCoeffs<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn delta(&self) -> &[T] {
        &self.delta
    }

    /// True when the order exceeds [`PRECISE_MIXTURE_ORDER`].
    pub fn precision_warning(&self) -> bool {
        self.order > PRECISE_MIXTURE_ORDER
    }

    fn check(&self, p: &FtrParams<T>) -> Result<()> {
        let tol = T::epsilon() * T::lit(16.0);
        if (self.source_delta - p.delta()).abs() > tol {
            return Err(Error::invalid(format!(
                "mixture coefficients built for Delta = {}, used with Delta = {}",
                self.source_delta,
                p.delta()
            )));
        }
        Ok(())
    }
}

/// `ceil(K Delta) + 1`, the smallest admissible order.
pub fn default_mixture_order<T: Real>(p: &FtrParams<T>) -> usize {
    (p.k() * p.delta()).ceil().to_usize().unwrap_or(usize::MAX - 1) + 1
}

/// Exact weights `alpha_1..alpha_M`.
///
/// `alpha_i = 2(-1)^i / ((2M-1)(2M-i)!(i-1)!) * int_0^{2M-1} prod_{k != i} (u - k + 1) du`.
pub fn alpha_exact(order: usize) -> Vec<BigRational> {
    assert!(order >= 1, "mixture order must be positive");
    let nodes = 2 * order;
    // prod_{k=0}^{2M-1} (u - k), ascending coefficients
    let mut full = vec![BigInt::one()];
    for k in 0..nodes {
        full = mul_linear(&full, &BigInt::from(k));
    }
    let upper = BigInt::from(nodes - 1);
    let mut fact = vec![BigInt::one()];
    for i in 1..=nodes {
        let next = &fact[i - 1] * BigInt::from(i);
        fact.push(next);
    }
    (1..=order)
        .map(|i| {
            let q = div_linear(&full, &BigInt::from(i - 1));
            let mut integral = BigRational::zero();
            let mut power = upper.clone();
            for (j, c) in q.iter().enumerate() {
                integral += BigRational::new(c * &power, BigInt::from(j + 1));
                power *= &upper;
            }
            let sign = if i % 2 == 0 { 2 } else { -2 };
            let denom = BigInt::from(nodes - 1) * &fact[nodes - i] * &fact[i - 1];
            BigRational::new(BigInt::from(sign), denom) * integral
        })
        .collect()
}

/// `poly * (u - r)`.
fn mul_linear(poly: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); poly.len() + 1];
    for (j, c) in poly.iter().enumerate() {
        out[j + 1] += c;
        out[j] -= c * r;
    }
    out
}

/// `poly / (u - r)` for an exact root `r`, by synthetic division.
fn div_linear(poly: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let deg = poly.len() - 1;
    let mut out = vec![BigInt::zero(); deg];
    let mut carry = BigInt::zero();
    for j in (1..=deg).rev() {
        carry = &poly[j] + carry * r;
        out[j - 1] = carry.clone();
    }
    debug_assert!((&poly[0] + carry * r).is_zero());
    out
}

/// Mixture coefficients of order `order` for the parameters `p`.
///
/// `delta_i = Delta cos((i-1) pi / (2M-1))`. Requires `order > ceil(K Delta)`.
pub fn mixture_coeffs<T: Real>(p: &FtrParams<T>, order: usize) -> Result<MixtureCoeffs<T>> {
    let min = default_mixture_order(p);
    if order < min.max(1) {
        return Err(Error::invalid(format!(
            "mixture order must exceed ceil(K Delta) = {}, got {order}",
            min - 1
        )));
    }
    Ok(MixtureCoeffs::with_order(order, p.delta()))
}

impl<T: Real> MixtureCoeffs<T> {
    /// Coefficients of order `order >= 1` for similarity `delta`, without the
    /// order check of [`mixture_coeffs`].
    pub fn with_order(order: usize, delta: T) -> Self {
        let alpha = alpha_exact(order)
            .iter()
            .map(|a| {
                let v = a.to_f64().unwrap_or(if a.is_negative() { f64::MIN } else { f64::MAX });
                T::lit(v)
            })
            .collect();
        let span = T::from_usize_lossy(2 * order - 1);
        let offsets = (0..order)
            .map(|i| delta * (T::from_usize_lossy(i) * T::PI() / span).cos())
            .collect();
        MixtureCoeffs { order, alpha, delta: offsets, source_delta: delta }
    }
}

fn ln_factorials<T: Real>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::zero());
    for i in 1..=n {
        out.push(out[i - 1] + T::from_usize_lossy(i).ln());
    }
    out
}

/// `e * ln(base)`, taking `0 * ln 0` as `0`.
fn ln_pow<T: Real>(ln_base: T, e: usize) -> T {
    if e == 0 {
        T::zero()
    } else {
        ln_base * T::from_usize_lossy(e)
    }
}

/// Rician-shadowed density kernel
/// `G_m(x; beta, K) = (m/(K+m))^m beta e^{-beta x m/(K+m)} sum_n C(m-1,n) (K beta x/(K+m))^n / n!`.
pub fn kernel_g<T: Real>(m: usize, x: T, beta: T, k: T) -> T {
    let mf = T::from_usize_lossy(m);
    let lf = ln_factorials::<T>(m);
    let ln_y = (k * beta * x / (k + mf)).ln();
    let base = mf * (mf / (k + mf)).ln() + beta.ln() - beta * x * mf / (k + mf);
    let terms: Vec<T> = (0..m)
        .map(|n| base + lf[m - 1] - lf[n] - lf[m - 1 - n] + ln_pow(ln_y, n) - lf[n])
        .filter(|t| !t.is_nan())
        .collect();
    log_sum_exp(&terms)
}

/// Complementary CDF of [`kernel_g`]:
/// `H_m = sum_n sum_j (m/(m+K))^{m-n-1} (K/(m+K))^{n+j} C(m-1,n+j) (beta x)^j / j! e^{-beta m x/(m+K)}`.
pub fn kernel_h<T: Real>(m: usize, x: T, beta: T, k: T) -> T {
    let mf = T::from_usize_lossy(m);
    let lf = ln_factorials::<T>(m);
    let ln_a = (mf / (mf + k)).ln();
    let ln_b = (k / (mf + k)).ln();
    let ln_bx = (beta * x).ln();
    let decay = -beta * mf * x / (mf + k);
    let mut terms = Vec::with_capacity(m * m);
    for n in 0..m {
        for j in 0..m - n {
            let t = ln_pow(ln_a, m - n - 1) + ln_pow(ln_b, n + j) + lf[m - 1]
                - lf[n + j]
                - lf[m - 1 - n - j]
                + ln_pow(ln_bx, j)
                - lf[j]
                + decay;
            if !t.is_nan() {
                terms.push(t);
            }
        }
    }
    log_sum_exp(&terms)
}

fn log_sum_exp<T: Real>(terms: &[T]) -> T {
    let top = terms.iter().copied().fold(T::neg_infinity(), T::max);
    if top == T::neg_infinity() {
        return T::zero();
    }
    top.exp() * terms.iter().map(|&t| (t - top).exp()).sum::<T>()
}

/// Mixture approximation of the SNR density.
pub fn pdf_approx<T: Real>(p: &FtrParams<T>, x: T, c: &MixtureCoeffs<T>) -> Result<T> {
    let m = p.require_integer_m("pdf_approx")?;
    c.check(p)?;
    check_x(x)?;
    let beta = (T::one() + p.k()) / p.gamma_bar();
    Ok(mix(c, p.k(), |k| kernel_g(m, x, beta, k)))
}

/// Mixture approximation of the SNR CDF.
pub fn cdf_approx<T: Real>(p: &FtrParams<T>, x: T, c: &MixtureCoeffs<T>) -> Result<T> {
    let m = p.require_integer_m("cdf_approx")?;
    c.check(p)?;
    check_x(x)?;
    let beta = (T::one() + p.k()) / p.gamma_bar();
    Ok(T::one() - mix(c, p.k(), |k| kernel_h(m, x, beta, k)))
}

fn mix<T: Real>(c: &MixtureCoeffs<T>, k: T, kernel: impl Fn(T) -> T) -> T {
    let half = T::lit(0.5);
    c.alpha
        .iter()
        .zip(&c.delta)
        .map(|(&a, &d)| a * half * (kernel(k * (T::one() - d)) + kernel(k * (T::one() + d))))
        .sum()
}

fn check_x<T: Real>(x: T) -> Result<()> {
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("SNR argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

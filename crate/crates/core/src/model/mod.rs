//! The FTR distribution: parameters, MGF, PDF/CDF and model reductions.
//!
//! The received SNR is `gamma = |sqrt(zeta) V1 e^{j phi1} + sqrt(zeta) V2 e^{j phi2} + X + jY|^2`
//! scaled to mean `gamma_bar`, where `zeta` is unit-mean Gamma with shape `m`.
//! `K` is the specular-to-diffuse power ratio and `Delta = 2 V1 V2 / (V1^2 + V2^2)`.

mod envelope;
mod exact;
mod mgf;
mod mixture;
mod reduce;

pub use envelope::{envelope_cdf, envelope_cdf_approx, envelope_pdf, envelope_pdf_approx};
pub use exact::{cdf_exact, pdf_at_origin, pdf_exact, transform};
pub use mgf::{mgf, mgf_derivative_mean, mgf_independent};
pub use mixture::{
    alpha_exact, cdf_approx, default_mixture_order, kernel_g, kernel_h, mixture_coeffs, pdf_approx,
    MixtureCoeffs, PRECISE_MIXTURE_ORDER,
};
pub use reduce::{hoyt_q, reduce, ReductionTarget, ReferenceMgf, K_INF, M_INF};

use crate::error::{Error, Result};
use crate::scalar::{as_positive_integer, Real};

/// Validated model quadruple `(K, Delta, m, gamma_bar)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtrParams<T> {
    k: T,
    delta: T,
    m: T,
    gamma_bar: T,
}

impl<T: Real> FtrParams<T> {
    /// Checks `K >= 0`, `0 <= Delta <= 1`, `m > 0`, `gamma_bar > 0`, and
    /// `Delta = 0` whenever `K = 0`.
    pub fn new(k: T, delta: T, m: T, gamma_bar: T) -> Result<Self> {
        if !(k >= T::zero()) || !k.is_finite() {
            return Err(Error::invalid(format!("K must be finite and >= 0, got {k}")));
        }
        if !(delta >= T::zero() && delta <= T::one()) {
            return Err(Error::invalid(format!("Delta must lie in [0, 1], got {delta}")));
        }
        if !(m > T::zero()) || !m.is_finite() {
            return Err(Error::invalid(format!("m must be finite and > 0, got {m}")));
        }
        if !(gamma_bar > T::zero()) || !gamma_bar.is_finite() {
            return Err(Error::invalid(format!("gamma_bar must be finite and > 0, got {gamma_bar}")));
        }
        if k == T::zero() && delta != T::zero() {
            return Err(Error::invalid("Delta must be 0 when K = 0"));
        }
        Ok(FtrParams { k, delta, m, gamma_bar })
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn m(&self) -> T {
        self.m
    }

    pub fn gamma_bar(&self) -> T {
        self.gamma_bar
    }

    /// Same shape parameters with a different average SNR.
    pub fn with_gamma_bar(&self, gamma_bar: T) -> Result<Self> {
        Self::new(self.k, self.delta, self.m, gamma_bar)
    }

    /// `m` as an integer, if it is one.
    pub fn m_integer(&self) -> Option<usize> {
        as_positive_integer(self.m)
    }

    pub(crate) fn require_integer_m(&self, what: &str) -> Result<usize> {
        self.m_integer()
            .ok_or_else(|| Error::domain(format!("{what} requires a positive integer m, got {}", self.m)))
    }
}

/// Physical amplitudes behind a parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecularGeometry<T> {
    v1: T,
    v2: T,
    sigma: T,
}

impl<T: Real> SpecularGeometry<T> {
    /// Orders the amplitudes so that `v1 >= v2`.
    pub fn new(v1: T, v2: T, sigma: T) -> Result<Self> {
        if !(v1 >= T::zero() && v2 >= T::zero()) || !v1.is_finite() || !v2.is_finite() {
            return Err(Error::invalid("specular amplitudes must be finite and >= 0"));
        }
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return Err(Error::invalid(format!("sigma must be finite and > 0, got {sigma}")));
        }
        Ok(SpecularGeometry { v1: v1.max(v2), v2: v1.min(v2), sigma })
    }

    pub fn v1(&self) -> T {
        self.v1
    }

    pub fn v2(&self) -> T {
        self.v2
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// Recovers `(K, Delta)` and attaches `m` and `gamma_bar`.
    pub fn to_params(&self, m: T, gamma_bar: T) -> Result<FtrParams<T>> {
        let power = self.v1 * self.v1 + self.v2 * self.v2;
        let k = power / (T::lit(2.0) * self.sigma * self.sigma);
        let delta = if power > T::zero() {
            (T::lit(2.0) * self.v1 * self.v2 / power).min(T::one())
        } else {
            T::zero()
        };
        FtrParams::new(k, delta, m, gamma_bar)
    }
}

/// Amplitudes solving `V1^2 + V2^2 = 2 sigma^2 K` and `V1 V2 = sigma^2 K Delta`.
pub fn params_to_geometry<T: Real>(p: &FtrParams<T>, sigma: T) -> Result<SpecularGeometry<T>> {
    let scale = T::lit(2.0) * sigma * sigma * p.k;
    // (V1 + V2)^2 = 2 sigma^2 K (1 + Delta), (V1 - V2)^2 = 2 sigma^2 K (1 - Delta)
    let sum = (scale * (T::one() + p.delta)).sqrt();
    let diff = (scale * (T::one() - p.delta)).sqrt();
    SpecularGeometry::new((sum + diff) / T::lit(2.0), (sum - diff) / T::lit(2.0), sigma)
}

/// Pole and branch-point magnitudes `a1..a4` of the factorized MGF.
///
/// `M(-p)` has singularities at `p = -a_i`; `a2` is always the one nearest
/// the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyCoeffs<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub a4: T,
}

/// `a1 = m(1+K)/((m+K) gamma_bar)`, `a2,3 = m(1+K)/((m+K(1 +- Delta)) gamma_bar)`,
/// `a4 = (1+K)/gamma_bar`. Defined for any real `m > 0`.
pub fn poly_coeffs<T: Real>(p: &FtrParams<T>) -> PolyCoeffs<T> {
    let num = p.m * (T::one() + p.k);
    let (c1, c2, c3) = shape_constants(p);
    PolyCoeffs {
        a1: num / (c1 * p.gamma_bar),
        a2: num / (c2 * p.gamma_bar),
        a3: num / (c3 * p.gamma_bar),
        a4: (T::one() + p.k) / p.gamma_bar,
    }
}

/// `(m + K, m + K(1 + Delta), m + K(1 - Delta))`.
pub(crate) fn shape_constants<T: Real>(p: &FtrParams<T>) -> (T, T, T) {
    let kd = p.k * p.delta;
    (p.m + p.k, p.m + p.k + kd, p.m + p.k - kd)
}

impl<T: Real> PolyCoeffs<T> {
    /// The quadratic `R(s) = (m(1+K) - c2 gamma_bar s)(m(1+K) - c3 gamma_bar s)`
    /// rebuilt from the factorization `c2 c3 gamma_bar^2 (a2 - s)(a3 - s)`.
    pub fn quadratic_from_factors(&self, p: &FtrParams<T>, s: T) -> T {
        let (_, c2, c3) = shape_constants(p);
        c2 * c3 * p.gamma_bar * p.gamma_bar * (self.a2 - s) * (self.a3 - s)
    }
}

/// The quadratic `R(s)` in its expanded form.
pub fn quadratic<T: Real>(p: &FtrParams<T>, s: T) -> T {
    let (c1, _, _) = shape_constants(p);
    let base = p.m * (T::one() + p.k);
    let u = p.gamma_bar * s;
    let kdu = p.k * p.delta * u;
    // (base - c1 u)^2 - (K Delta u)^2
    (base - c1 * u) * (base - c1 * u) - kdu * kdu
}

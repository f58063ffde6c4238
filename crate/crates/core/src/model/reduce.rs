//! Classical fading models contained in FTR, with their own closed-form MGFs.
//!
//! Cells reached only in a limit (`K -> inf`, `m -> inf`) are matched by
//! parameters at or beyond the surrogates [`K_INF`] and [`M_INF`].

use std::fmt;
use std::str::FromStr;

use super::FtrParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfn::bessel_i0_scaled;

/// Surrogate for `K -> inf`.
pub const K_INF: f64 = 1e6;
/// Surrogate for `m -> inf`.
pub const M_INF: f64 = 1e4;

const FINITE_TOL: f64 = 1e-9;
const LIMIT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionTarget {
    Rayleigh,
    Rician,
    RicianShadowed,
    Hoyt,
    NakagamiM,
    Twdp,
    OneSidedGaussian,
    TwoWave,
    FluctuatingTwoWave,
}

impl ReductionTarget {
    pub const ALL: [ReductionTarget; 9] = [
        ReductionTarget::Rayleigh,
        ReductionTarget::Rician,
        ReductionTarget::RicianShadowed,
        ReductionTarget::Hoyt,
        ReductionTarget::NakagamiM,
        ReductionTarget::Twdp,
        ReductionTarget::OneSidedGaussian,
        ReductionTarget::TwoWave,
        ReductionTarget::FluctuatingTwoWave,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ReductionTarget::Rayleigh => "rayleigh",
            ReductionTarget::Rician => "rician",
            ReductionTarget::RicianShadowed => "rician_shadowed",
            ReductionTarget::Hoyt => "hoyt",
            ReductionTarget::NakagamiM => "nakagami_m",
            ReductionTarget::Twdp => "twdp",
            ReductionTarget::OneSidedGaussian => "one_sided_gaussian",
            ReductionTarget::TwoWave => "two_wave",
            ReductionTarget::FluctuatingTwoWave => "fluctuating_two_wave",
        }
    }
}

impl fmt::Display for ReductionTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        ReductionTarget::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| Error::invalid(format!("unknown reduction target '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Reference<T> {
    Exponential,
    Rician { k: T },
    RicianShadowed { k: T, m: T },
    Hoyt { q: T },
    Nakagami { m: T },
    Twdp { k: T, delta: T },
    OneSidedGaussian,
    TwoWave { delta: T },
    FluctuatingTwoWave { delta: T, m: T },
}

/// Independent reference MGF of a target model, normalized to the same
/// `gamma_bar`, and the agreement expected from the FTR MGF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceMgf<T> {
    target: ReductionTarget,
    reference: Reference<T>,
    gamma_bar: T,
    limit: bool,
}

impl<T: Real> ReferenceMgf<T> {
    pub fn target(&self) -> ReductionTarget {
        self.target
    }

    /// True when the match relies on a limit surrogate.
    pub fn is_limit(&self) -> bool {
        self.limit
    }

    /// `1e-9` for exact cells, `1e-3` for surrogate cells.
    pub fn tolerance(&self) -> T {
        T::lit(if self.limit { LIMIT_TOL } else { FINITE_TOL })
    }

    /// Reference MGF at `s <= 0`.
    pub fn eval(&self, s: T) -> Result<T> {
        if !(s <= T::zero()) {
            return Err(Error::domain(format!("reference MGFs are evaluated at s <= 0, got {s}")));
        }
        let one = T::one();
        let two = T::lit(2.0);
        let u = self.gamma_bar * s;
        Ok(match self.reference {
            Reference::Exponential => one / (one - u),
            Reference::Rician { k } => {
                let d = one + k - u;
                (one + k) / d * (k * u / d).exp()
            }
            Reference::RicianShadowed { k, m } => {
                let d = one + k - u;
                (one + k) / d * (one - k * u / (d * m)).powf(-m)
            }
            Reference::Hoyt { q } => {
                let q2 = q * q;
                let c = T::lit(4.0) * q2 / ((one + q2) * (one + q2));
                one / (c * u * u - two * u + one).sqrt()
            }
            Reference::Nakagami { m } => (one - u / m).powf(-m),
            Reference::Twdp { k, delta } => {
                let d = one + k - u;
                let a = k * u / d;
                let b = delta * a;
                (one + k) / d * (a + b.abs()).exp() * bessel_i0_scaled(b)
            }
            Reference::OneSidedGaussian => (one - two * u).powf(-T::lit(0.5)),
            Reference::TwoWave { delta } => {
                let b = delta * u;
                (u + b.abs()).exp() * bessel_i0_scaled(b)
            }
            Reference::FluctuatingTwoWave { delta, m } => {
                // average of the Gamma MGF over the two-wave phase difference
                periodic_mean(|t: T| (one - u * (one + delta * t.cos()) / m).powf(-m))
            }
        })
    }
}

/// Mean of `f` over `[0, pi]` by trapezoid doubling.
fn periodic_mean<T: Real>(f: impl Fn(T) -> T) -> T {
    let pi = T::PI();
    let eval = |n: usize| {
        let h = pi / T::from_usize_lossy(n);
        let inner: T = (1..n).map(|i| f(h * T::from_usize_lossy(i))).sum();
        (inner + (f(T::zero()) + f(pi)) / T::lit(2.0)) / T::from_usize_lossy(n)
    };
    let mut n = 16;
    let mut prev = eval(n);
    while n < 1 << 16 {
        n *= 2;
        let cur = eval(n);
        if (cur - prev).abs() <= T::epsilon() * T::lit(8.0) * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Hoyt parameter `q = sqrt((1 + K(1-Delta)) / (1 + K(1+Delta)))` of the `m = 1` model.
pub fn hoyt_q<T: Real>(p: &FtrParams<T>) -> Result<T> {
    if p.m() != T::one() {
        return Err(Error::domain(format!("hoyt_q requires m = 1, got m = {}", p.m())));
    }
    let kd = p.k() * p.delta();
    Ok(((T::one() + p.k() - kd) / (T::one() + p.k() + kd)).sqrt())
}

/// Reference MGF of `target`, provided `p` lies in (or at the surrogate
/// limit of) the corresponding cell.
pub fn reduce<T: Real>(p: &FtrParams<T>, target: ReductionTarget) -> Result<ReferenceMgf<T>> {
    let (k, delta, m) = (p.k(), p.delta(), p.m());
    let zero = T::zero();
    let k_inf = k >= T::lit(K_INF);
    let m_inf = m >= T::lit(M_INF);
    let half = T::lit(0.5);
    let found = match target {
        ReductionTarget::Rayleigh if delta == zero && k == zero => Some((Reference::Exponential, false)),
        ReductionTarget::Rayleigh if delta == zero && k_inf && m == T::one() => {
            Some((Reference::Exponential, true))
        }
        ReductionTarget::Rician if delta == zero && m_inf => Some((Reference::Rician { k }, true)),
        ReductionTarget::RicianShadowed if delta == zero => {
            Some((Reference::RicianShadowed { k, m }, false))
        }
        ReductionTarget::Hoyt if m == T::one() => Some((Reference::Hoyt { q: hoyt_q(p)? }, false)),
        ReductionTarget::Hoyt if delta == zero && m == half => {
            let q = (T::one() / (T::one() + k + k)).sqrt();
            Some((Reference::Hoyt { q }, false))
        }
        ReductionTarget::NakagamiM if delta == zero && k_inf => Some((Reference::Nakagami { m }, true)),
        ReductionTarget::Twdp if m_inf => Some((Reference::Twdp { k, delta }, true)),
        ReductionTarget::OneSidedGaussian
            if k_inf && ((delta == zero && m == half) || (delta == T::one() && m == T::one())) =>
        {
            Some((Reference::OneSidedGaussian, true))
        }
        ReductionTarget::TwoWave if k_inf && m_inf => Some((Reference::TwoWave { delta }, true)),
        ReductionTarget::FluctuatingTwoWave if k_inf => {
            Some((Reference::FluctuatingTwoWave { delta, m }, true))
        }
        _ => None,
    };
    let (reference, limit) = found.ok_or_else(|| {
        Error::domain(format!(
            "parameters K = {k}, Delta = {delta}, m = {m} do not lie in the {target} cell"
        ))
    })?;
    Ok(ReferenceMgf { target, reference, gamma_bar: p.gamma_bar(), limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mgf;

    fn check(k: f64, d: f64, m: f64, target: ReductionTarget) {
        let p = FtrParams::<f64>::new(k, d, m, 1.7).unwrap();
        let r = reduce(&p, target).unwrap();
        for s in [-0.25, -1.0, -4.0] {
            let a = mgf(&p, s).unwrap();
            let b = r.eval(s).unwrap();
            assert!((a - b).abs() <= r.tolerance(), "{target} s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn finite_cells() {
        check(0.0, 0.0, 7.0, ReductionTarget::Rayleigh);
        check(4.0, 0.0, 3.0, ReductionTarget::RicianShadowed);
        check(5.0, 0.6, 1.0, ReductionTarget::Hoyt);
        check(2.3, 0.0, 0.5, ReductionTarget::Hoyt);
    }

    #[test]
    fn limit_cells() {
        check(K_INF, 0.0, 1.0, ReductionTarget::Rayleigh);
        check(6.0, 0.0, M_INF, ReductionTarget::Rician);
        check(K_INF, 0.0, 3.0, ReductionTarget::NakagamiM);
        check(6.0, 0.7, M_INF, ReductionTarget::Twdp);
        check(K_INF, 0.0, 0.5, ReductionTarget::OneSidedGaussian);
        check(K_INF, 1.0, 1.0, ReductionTarget::OneSidedGaussian);
        check(K_INF, 0.4, M_INF, ReductionTarget::TwoWave);
        check(K_INF, 0.8, 2.0, ReductionTarget::FluctuatingTwoWave);
    }

    #[test]
    fn mismatch_is_rejected() {
        let p = FtrParams::<f64>::new(3.0, 0.5, 2.0, 1.0).unwrap();
        assert!(matches!(reduce(&p, ReductionTarget::Rayleigh), Err(Error::Domain(_))));
        assert!(matches!(hoyt_q(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn hoyt_q_limits() {
        let p = FtrParams::<f64>::new(9.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(hoyt_q(&p).unwrap(), 1.0);
        let p = FtrParams::<f64>::new(K_INF, 0.6, 1.0, 1.0).unwrap();
        assert!((hoyt_q(&p).unwrap() - (0.4_f64 / 1.6).sqrt()).abs() < 1e-3);
    }

    #[test]
    fn names_round_trip() {
        for t in ReductionTarget::ALL {
            assert_eq!(t.name().parse::<ReductionTarget>().unwrap(), t);
        }
    }
}

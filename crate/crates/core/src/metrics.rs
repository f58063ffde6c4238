//! Average BER and outage probability over FTR fading.
//!
//! The conditional error probability of a coherent modulation is
//! `sum_r alpha_r Q(sqrt(beta_r x))`. Its average has an exact
//! representation through four-variable Lauricella functions for integer
//! `m`, which is cross-checked against direct integration over the exact
//! density and against Monte Carlo counting.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{cdf_exact, pdf_at_origin, pdf_exact, poly_coeffs, shape_constants, FtrParams};
use crate::sampler::SampleBatch;
use crate::scalar::Real;
use crate::specfn::{lauricella_fd4, legendre_coefficient, q_function, LaplaceInversion, Quadrature};

/// Conditional error probability constants `{(alpha_r, beta_r)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CepFamily<T> {
    terms: Vec<(T, T)>,
}

impl<T: Real> CepFamily<T> {
    pub fn new(terms: Vec<(T, T)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("CEP family needs at least one term"));
        }
        if terms.iter().any(|&(a, b)| !(a > T::zero() && b > T::zero())) {
            return Err(Error::invalid("CEP constants must be positive"));
        }
        Ok(CepFamily { terms })
    }

    /// `Q(sqrt(2x))`.
    pub fn bpsk() -> Self {
        CepFamily { terms: vec![(T::one(), T::lit(2.0))] }
    }

    pub fn terms(&self) -> &[(T, T)] {
        &self.terms
    }

    /// Error probability at instantaneous SNR `x`.
    pub fn conditional(&self, x: T) -> T {
        self.terms.iter().map(|&(a, b)| a * q_function((b * x).sqrt())).sum()
    }
}

/// Outage rate threshold `R_S` in bit/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageSpec<T> {
    rate_threshold: T,
}

impl<T: Real> OutageSpec<T> {
    pub fn new(rate_threshold: T) -> Result<Self> {
        if !(rate_threshold > T::zero()) || !rate_threshold.is_finite() {
            return Err(Error::invalid(format!("rate threshold must be > 0, got {rate_threshold}")));
        }
        Ok(OutageSpec { rate_threshold })
    }

    pub fn rate_threshold(&self) -> T {
        self.rate_threshold
    }

    /// SNR threshold `2^R_S - 1`.
    pub fn snr_threshold(&self) -> T {
        self.rate_threshold.exp2() - T::one()
    }
}

/// Exact average BER through the Lauricella representation (integer `m`).
pub fn ber_exact<T: Real>(p: &FtrParams<T>, cep: &CepFamily<T>, quad: &Quadrature<T>) -> Result<T> {
    let m = p.require_integer_m("ber_exact")?;
    let (c1, c2, c3) = shape_constants(p);
    let d = (c2 * c3).sqrt();
    let mf = p.m();
    let a = poly_coeffs(p);
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let pre = (T::one() + p.k()) / p.gamma_bar() * (mf * (mf / d).ln()).exp() / two.powi(m as i32 - 1);
    let ratio = c1 / d;
    let mut total = T::zero();
    for q in 0..=(m - 1) / 2 {
        let qf = T::from_usize_lossy(q);
        let b = [
            T::one() + qf + qf - mf,
            mf - qf - half,
            mf - qf - half,
            T::one() - mf,
        ];
        let mut inner = T::zero();
        for &(alpha, beta) in cep.terms() {
            let x = [a.a1, a.a2, a.a3, a.a4].map(|ai| -two * ai / beta);
            inner = inner + alpha / (two * beta) * lauricella_fd4(T::lit(1.5), b, two, x, quad)?;
        }
        let sign = if q % 2 == 0 { T::one() } else { -T::one() };
        let weight = legendre_coefficient::<T>(m - 1, q) * ratio.powi((m - 1 - 2 * q) as i32);
        total = total + sign * weight * inner;
    }
    Ok(pre * total)
}

/// Average BER by integrating the CEP against the exact density.
///
/// The integrand carries the inversion error, so `quad` should not ask for
/// more relative accuracy than `cfg` delivers.
pub fn ber_quadrature<T: Real>(
    p: &FtrParams<T>,
    cep: &CepFamily<T>,
    cfg: &LaplaceInversion<T>,
    quad: &Quadrature<T>,
) -> Result<T> {
    p.require_integer_m("ber_quadrature")?;
    let mut failure = None;
    let v = quad.integrate_to_infinity(
        |x| match pdf_exact(p, x, cfg) {
            Ok(f) => f * cep.conditional(x),
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        T::zero(),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v.value),
    }
}

/// High-SNR BER `f(0) sum_r alpha_r/(2 beta_r)`, exactly proportional to `1/gamma_bar`.
pub fn ber_asymptotic<T: Real>(p: &FtrParams<T>, cep: &CepFamily<T>) -> Result<T> {
    let f0 = pdf_at_origin(p)?;
    let two = T::lit(2.0);
    Ok(f0 * cep.terms().iter().map(|&(a, b)| a / (two * b)).sum::<T>())
}

/// `P(log2(1 + gamma) < R_S) = F(2^R_S - 1)`.
pub fn outage_probability<T: Real>(p: &FtrParams<T>, spec: &OutageSpec<T>, cfg: &LaplaceInversion<T>) -> Result<T> {
    cdf_exact(p, spec.snr_threshold(), cfg)
}

/// High-SNR outage `f(0) (2^R_S - 1)`.
pub fn outage_asymptotic<T: Real>(p: &FtrParams<T>, spec: &OutageSpec<T>) -> Result<T> {
    Ok(pdf_at_origin(p)? * spec.snr_threshold())
}

/// Semi-analytic BER: mean CEP over the sampled SNRs times `scale`, with its standard error.
pub fn ber_monte_carlo(batch: &SampleBatch, cep: &CepFamily<f64>, scale: f64) -> Result<(f64, f64)> {
    mean_and_error(batch, |g| cep.conditional(g * scale))
}

/// Fraction of sampled SNRs (times `scale`) below the outage threshold, with its standard error.
pub fn outage_monte_carlo(batch: &SampleBatch, spec: &OutageSpec<f64>, scale: f64) -> Result<(f64, f64)> {
    let t = spec.snr_threshold();
    mean_and_error(batch, |g| if g * scale < t { 1.0 } else { 0.0 })
}

fn mean_and_error(batch: &SampleBatch, f: impl Fn(f64) -> f64 + Sync) -> Result<(f64, f64)> {
    if batch.is_empty() {
        return Err(Error::invalid("empty sample batch"));
    }
    let n = batch.len() as f64;
    let (s, s2) = batch
        .snr
        .par_iter()
        .map(|&g| {
            let v = f(g);
            (v, v * v)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let mean = s / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

/// How a `gamma_bar` value is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrUnit {
    Linear,
    Db,
}

pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

pub fn linear_to_db<T: Real>(x: T) -> T {
    T::lit(10.0) * x.log10()
}

/// One point of a `gamma_bar` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma_bar_db: f64,
    pub value: f64,
    pub method: String,
}

/// Evaluates `f(p with gamma_bar)` over a grid, in parallel, keeping grid order.
pub fn sweep<F>(p: &FtrParams<f64>, grid: &[f64], unit: SnrUnit, method: &str, f: F) -> Result<Vec<SweepRow>>
where
    F: Fn(&FtrParams<f64>) -> Result<f64> + Sync,
{
    grid.par_iter()
        .map(|&g| {
            let (lin, db) = match unit {
                SnrUnit::Linear => (g, linear_to_db(g)),
                SnrUnit::Db => (db_to_linear(g), g),
            };
            let q = p.with_gamma_bar(lin)?;
            Ok(SweepRow { gamma_bar_db: db, value: f(&q)?, method: method.to_string() })
        })
        .collect()
}

/// Writes sweep rows as `gamma_bar_db,value,method` CSV.
pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["gamma_bar_db", "value", "method"])?;
    for r in rows {
        w.write_record([format!("{:.16e}", r.gamma_bar_db), format!("{:.16e}", r.value), r.method.clone()])?;
    }
    w.flush()?;
    Ok(())
}

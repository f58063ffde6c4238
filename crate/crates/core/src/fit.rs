//! Fitting FTR and Rician envelope models to an empirical CDF.
//!
//! The error factor is `eps = max_i |log10 F_emp(r_i) - log10 F(r_i)|` over
//! the empirical support points, with the model mean power fixed at the
//! empirical second moment `Omega`. FTR fits scan a `(K, Delta)` grid per
//! candidate `m` and refine the best cell with Nelder-Mead on `(ln K, Delta)`.

use std::cmp::Ordering;
use std::io::Read;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{envelope_cdf, FtrParams, M_INF};
use crate::specfn::{InversionMethod, LaplaceInversion};

/// Minimum number of points in an empirical CDF.
pub const MIN_POINTS: usize = 10;

/// Sorted `(amplitude, probability)` pairs and the second moment `Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    points: Vec<(f64, f64)>,
    omega: f64,
}

impl EmpiricalCdf {
    /// Validates the points and estimates `Omega` as the second moment of
    /// the piecewise-linear CDF through `(0, 0)` and the points, normalized
    /// by the last probability.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::validate(&points)?;
        let (mut r0, mut f0) = (0.0, 0.0);
        let mut acc = 0.0;
        for &(r, f) in &points {
            acc += (f - f0) * (r0 * r0 + r0 * r + r * r) / 3.0;
            (r0, f0) = (r, f);
        }
        Self::with_omega(points, acc / f0)
    }

    /// Points with a known second moment.
    pub fn with_omega(points: Vec<(f64, f64)>, omega: f64) -> Result<Self> {
        Self::validate(&points)?;
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::invalid(format!("Omega must be > 0, got {omega}")));
        }
        Ok(EmpiricalCdf { points, omega })
    }

    fn validate(points: &[(f64, f64)]) -> Result<()> {
        if points.len() < MIN_POINTS {
            return Err(Error::invalid(format!(
                "empirical CDF needs at least {MIN_POINTS} points, got {}",
                points.len()
            )));
        }
        for (i, &(r, f)) in points.iter().enumerate() {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::invalid(format!("amplitude must be > 0, got {r}")));
            }
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::invalid(format!("probability must lie in (0, 1], got {f}")));
            }
            if i > 0 {
                let (r0, f0) = points[i - 1];
                if r <= r0 {
                    return Err(Error::invalid("amplitudes must be strictly increasing"));
                }
                if f < f0 {
                    return Err(Error::invalid("probabilities must be non-decreasing"));
                }
            }
        }
        Ok(())
    }

    /// Reads CSV with header `amplitude,cdf`.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        let headers = rd.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::invalid(format!("CSV header lacks column '{name}'")))
        };
        let (ia, ic) = (col("amplitude")?, col("cdf")?);
        let mut points = Vec::new();
        for row in rd.records() {
            let row = row?;
            let num = |i: usize| -> Result<f64> {
                row.get(i)
                    .unwrap_or("")
                    .trim()
                    .parse()
                    .map_err(|e| Error::invalid(format!("bad number in CSV: {e}")))
            };
            points.push((num(ia)?, num(ic)?));
        }
        Self::new(points)
    }

    /// ECDF of envelope samples read at `levels` probabilities log-spaced on
    /// `[min_prob, 1]`; `Omega` is the sample mean of `r^2`.
    pub fn from_samples(samples: &[f64], levels: usize, min_prob: f64) -> Result<Self> {
        if samples.is_empty() || levels < 2 || !(min_prob > 0.0 && min_prob < 1.0) {
            return Err(Error::invalid("from_samples needs samples, >= 2 levels and 0 < min_prob < 1"));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        let n = sorted.len();
        let omega = sorted.iter().map(|r| r * r).sum::<f64>() / n as f64;
        let mut points: Vec<(f64, f64)> = Vec::with_capacity(levels);
        let span = -min_prob.log10();
        for j in 0..levels {
            let p = 10f64.powf(-span * (1.0 - j as f64 / (levels - 1) as f64));
            let k = ((p * n as f64).ceil() as usize).clamp(1, n);
            let r = sorted[k - 1];
            let f = k as f64 / n as f64;
            match points.last() {
                Some(&(r0, _)) if r <= r0 => continue,
                _ => points.push((r, f)),
            }
        }
        Self::with_omega(points, omega)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Tuning of the fit search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub k_points: usize,
    pub delta_step: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub inversion: LaplaceInversion<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            k_min: 0.1,
            k_max: 200.0,
            k_points: 40,
            delta_step: 0.05,
            max_iterations: 200,
            tolerance: 1e-6,
            inversion: LaplaceInversion { method: InversionMethod::FixedTalbot, terms: 16, target_rel_error: 1e-4 },
        }
    }
}

/// Default FTR fluctuation candidates: `1..=12`, 15 and 20.
pub fn default_m_candidates() -> Vec<usize> {
    (1..=12).chain([15, 20]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Ftr,
    /// Rician baseline; parameters carry `Delta = 0` and `m` at the `m -> inf` surrogate.
    Rician,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    /// Fitted parameters with `gamma_bar` holding `Omega`.
    pub params: FtrParams<f64>,
    pub epsilon: f64,
    pub evaluations: usize,
}

impl FitResult {
    /// `{"model", "K", "Delta", "m", "Omega", "epsilon", "evaluations"}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "model": match self.model { FitModel::Ftr => "ftr", FitModel::Rician => "rician" },
            "K": self.params.k(),
            "Delta": self.params.delta(),
            "m": self.params.m(),
            "Omega": self.params.gamma_bar(),
            "epsilon": self.epsilon,
            "evaluations": self.evaluations,
        })
    }
}

/// Error factor of the FTR envelope model `p` (`gamma_bar` read as `Omega`).
pub fn epsilon(emp: &EmpiricalCdf, p: &FtrParams<f64>) -> Result<f64> {
    epsilon_with(emp, p, &SearchConfig::default().inversion)
}

/// [`epsilon`] with an explicit inversion setting.
pub fn epsilon_with(emp: &EmpiricalCdf, p: &FtrParams<f64>, cfg: &LaplaceInversion<f64>) -> Result<f64> {
    max_log_gap(emp, |r| envelope_cdf(p, r, p.gamma_bar(), cfg))
}

/// Error factor of the Rician envelope model with factor `k` and power `omega`.
pub fn epsilon_rician(emp: &EmpiricalCdf, k: f64, omega: f64) -> Result<f64> {
    max_log_gap(emp, |r| Ok(rician_cdf(k, omega, r)))
}

fn max_log_gap(emp: &EmpiricalCdf, cdf: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(r, f_emp) in &emp.points {
        let f = cdf(r)?;
        if !(f > 0.0) {
            return Err(Error::domain(format!("model CDF vanishes at amplitude {r}")));
        }
        worst = worst.max((f_emp.log10() - f.log10()).abs());
    }
    Ok(worst)
}

/// Rician envelope CDF `1 - Q1(sqrt(2K), r sqrt(2(1+K)/Omega))` as a
/// Poisson mixture of Gamma CDFs.
pub fn rician_cdf(k: f64, omega: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let y = (1.0 + k) * r * r / omega;
    if k == 0.0 {
        return -(-y).exp_m1();
    }
    let ln_k = k.ln();
    let centre = k.floor() as usize;
    let width = (12.0 * k.sqrt()) as usize + 40;
    let lo = centre.saturating_sub(width);
    let hi = centre + width;
    let mut lgam = libm::lgamma(lo as f64 + 1.0);
    let mut total = 0.0;
    for n in lo..=hi {
        if n > lo {
            lgam += (n as f64).ln();
        }
        let w = (n as f64 * ln_k - k - lgam).exp();
        total += w * gamma_p_integer(n + 1, y);
    }
    total.min(1.0)
}

/// Regularized lower incomplete gamma `P(a, y)` for integer `a >= 1`.
fn gamma_p_integer(a: usize, y: f64) -> f64 {
    let af = a as f64;
    if y < af + 1.0 {
        // y^a e^-y / a! * sum_k y^k / ((a+1)...(a+k))
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= y / (af + k);
            sum += term;
            k += 1.0;
        }
        (af * y.ln() - y - libm::lgamma(af + 1.0)).exp() * sum
    } else {
        // 1 - e^-y sum_{k<a} y^k / k!, here P >= 1/2
        let mut term = (-y).exp();
        let mut sum = term;
        for k in 1..a {
            term *= y / k as f64;
            sum += term;
        }
        1.0 - sum
    }
}

fn eval_ftr(emp: &EmpiricalCdf, k: f64, delta: f64, m: usize, cfg: &LaplaceInversion<f64>) -> f64 {
    FtrParams::new(k, delta, m as f64, emp.omega)
        .and_then(|p| epsilon_with(emp, &p, cfg))
        .unwrap_or(f64::INFINITY)
}

#[derive(Clone, Copy)]
struct Candidate {
    eps: f64,
    k: f64,
    delta: f64,
    m: usize,
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    (a.eps, a.k, a.delta, a.m)
        .partial_cmp(&(b.eps, b.k, b.delta, b.m))
        .map(|o| o == Ordering::Less)
        .unwrap_or(false)
}

fn k_grid(search: &SearchConfig) -> Vec<f64> {
    let n = search.k_points.max(2);
    let (a, b) = (search.k_min.ln(), search.k_max.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn delta_grid(search: &SearchConfig) -> Vec<f64> {
    let steps = (1.0 / search.delta_step).round().max(1.0) as usize;
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

/// Best FTR fit over the candidate fluctuation indices.
///
/// The Rician model, the `m -> inf`, `Delta = 0` limit cell, is always
/// evaluated as well and returned when it scores better, so the FTR error
/// never exceeds the Rician one.
pub fn fit_ftr(emp: &EmpiricalCdf, m_candidates: &[usize], search: &SearchConfig) -> Result<FitResult> {
    if m_candidates.is_empty() || m_candidates.contains(&0) {
        return Err(Error::invalid("m candidates must be positive integers"));
    }
    let ks = k_grid(search);
    let ds = delta_grid(search);
    let mut cells = Vec::with_capacity(m_candidates.len() * ks.len() * ds.len());
    for &m in m_candidates {
        for &k in &ks {
            cells.extend(ds.iter().map(|&d| (m, k, d)));
        }
    }
    let scored: Vec<Candidate> = cells
        .par_iter()
        .map(|&(m, k, delta)| Candidate { eps: eval_ftr(emp, k, delta, m, &search.inversion), k, delta, m })
        .collect();
    let mut evaluations = scored.len();

    let mut best: Option<Candidate> = None;
    let refined: Vec<(Candidate, usize)> = m_candidates
        .par_iter()
        .filter_map(|&m| {
            let start = scored
                .iter()
                .filter(|c| c.m == m && c.eps.is_finite())
                .fold(None::<Candidate>, |acc, c| match acc {
                    Some(a) if !better(c, &a) => Some(a),
                    _ => Some(*c),
                })?;
            let f = |v: &[f64]| {
                let k = v[0].exp();
                let d = v[1].clamp(0.0, 1.0);
                eval_ftr(emp, k, d, m, &search.inversion)
            };
            let step_d = if start.delta > 0.5 { -search.delta_step } else { search.delta_step };
            let (x, fx, evals) = nelder_mead(
                f,
                &[start.k.ln(), start.delta],
                &[0.2, step_d],
                search.max_iterations,
                search.tolerance,
            );
            let cand = Candidate { eps: fx, k: x[0].exp(), delta: x[1].clamp(0.0, 1.0), m };
            let pick = if better(&cand, &start) { cand } else { start };
            Some((pick, evals))
        })
        .collect();
    for (c, evals) in refined {
        evaluations += evals;
        if best.as_ref().is_none_or(|b| better(&c, b)) {
            best = Some(c);
        }
    }

    let rice = fit_rician(emp, search);
    let ftr = best.map(|c| {
        let params = FtrParams::new(c.k, c.delta, c.m as f64, emp.omega)?;
        Ok::<_, Error>(FitResult { model: FitModel::Ftr, params, epsilon: c.eps, evaluations })
    });
    match (ftr, rice) {
        (Some(Ok(f)), Ok(r)) => {
            let total = f.evaluations + r.evaluations;
            let mut out = if r.epsilon < f.epsilon { r } else { f };
            out.evaluations = total;
            Ok(out)
        }
        (Some(Ok(f)), Err(_)) => Ok(f),
        (_, Ok(mut r)) => {
            r.evaluations += evaluations;
            Ok(r)
        }
        (Some(Err(e)), Err(_)) => Err(e),
        (None, Err(_)) => Err(Error::NoFit("every candidate failed to evaluate".into())),
    }
}

/// Best Rician fit: grid over `K in {0} U logspace(k_min/100, 10 k_max)`,
/// then golden-section refinement between the neighbours of the best node.
pub fn fit_rician(emp: &EmpiricalCdf, search: &SearchConfig) -> Result<FitResult> {
    let omega = emp.omega;
    let score = |k: f64| epsilon_rician(emp, k, omega).unwrap_or(f64::INFINITY);
    let n = 4 * search.k_points.max(2);
    let (a, b) = ((search.k_min / 100.0).ln(), (search.k_max * 10.0).ln());
    let mut ks = vec![0.0];
    ks.extend((0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()));
    let scores: Vec<f64> = ks.iter().map(|&k| score(k)).collect();
    let mut evaluations = ks.len();
    let (ib, &eb) = scores
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(y.1).unwrap_or(Ordering::Equal))
        .expect("grid is non-empty");
    if !eb.is_finite() {
        return Err(Error::NoFit("Rician CDF vanished at every grid point".into()));
    }
    let lo = ks[ib.saturating_sub(1)];
    let hi = ks[(ib + 1).min(ks.len() - 1)];
    let (k, e, evals) = golden_section(score, lo, hi, search.tolerance, search.max_iterations);
    evaluations += evals;
    let (k, e) = if e < eb { (k, e) } else { (ks[ib], eb) };
    Ok(FitResult {
        model: FitModel::Rician,
        params: FtrParams::new(k, 0.0, M_INF, omega)?,
        epsilon: e,
        evaluations,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> (f64, f64, usize) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    while (b - a) > tol * (1.0 + c.abs()) && evals < max_iter {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc <= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

/// Derivative-free minimization; returns `(x, f(x), evaluations)`.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: &[f64],
    max_iter: usize,
    tol: f64,
) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step[i];
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut evals = n + 1;
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
    };
    for _ in 0..max_iter {
        order(&mut simplex);
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (spread.is_finite() && spread <= tol) && size <= tol.sqrt() {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect()
        };
        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let x = along(-0.5);
                let fx = f(&x);
                (x, fx)
            } else {
                let x = along(0.5);
                let fx = f(&x);
                (x, fx)
            };
            evals += 1;
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *fx = f(x);
                    evals += 1;
                }
            }
        }
    }
    order(&mut simplex);
    let (x, fx) = simplex.swap_remove(0);
    (x, fx, evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::Quadrature;

    #[test]
    fn validation() {
        let ok: Vec<(f64, f64)> = (1..=10).map(|i| (i as f64, i as f64 / 10.0)).collect();
        assert!(EmpiricalCdf::new(ok.clone()).is_ok());
        assert!(EmpiricalCdf::new(ok[..9].to_vec()).is_err());
        let mut bad = ok.clone();
        bad[0].1 = 0.0;
        assert!(EmpiricalCdf::new(bad).is_err());
        let mut bad = ok.clone();
        bad[3].0 = bad[2].0;
        assert!(EmpiricalCdf::new(bad).is_err());
        let mut bad = ok;
        bad[3].1 = 0.05;
        assert!(EmpiricalCdf::new(bad).is_err());
    }

    #[test]
    fn csv_ingestion() {
        let mut text = String::from("amplitude,cdf\n");
        for i in 1..=12 {
            text.push_str(&format!("{},{}\n", 0.1 * i as f64, i as f64 / 12.0));
        }
        let e = EmpiricalCdf::from_csv(text.as_bytes()).unwrap();
        assert_eq!(e.points().len(), 12);
        assert!(EmpiricalCdf::from_csv("amp,cdf\n1,0.5\n".as_bytes()).is_err());
        assert!(EmpiricalCdf::from_csv("amplitude,cdf\n1,0\n".as_bytes()).is_err());
    }

    #[test]
    fn rician_cdf_limits() {
        for r in [0.1, 0.7, 1.5] {
            assert!((rician_cdf(0.0, 1.0, r) - (1.0 - (-r * r as f64).exp())).abs() < 1e-15);
        }
        assert!((rician_cdf(4.0, 1.0, 10.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rician_cdf_matches_density_integral() {
        // Rician envelope pdf: 2(1+K)r/Omega exp(-K - (1+K)r^2/Omega) I0(2 r sqrt(K(1+K)/Omega))
        let (k, om) = (4.0_f64, 1.3_f64);
        let pdf = |r: f64| {
            let a = 2.0 * r * (k * (1.0 + k) / om).sqrt();
            2.0 * (1.0 + k) * r / om
                * (-k - (1.0 + k) * r * r / om + a).exp()
                * crate::specfn::bessel_i0_scaled(a)
        };
        let q = Quadrature::default();
        for r in [0.3, 0.9, 1.4] {
            let want = q.integrate(pdf, 0.0, r).unwrap().value;
            assert!((rician_cdf(k, om, r) - want).abs() < 1e-12 * want.max(1e-3), "r={r}");
        }
    }

    #[test]
    fn nelder_mead_quadratic() {
        let (x, fx, _) = nelder_mead(
            |v| (v[0] - 1.0).powi(2) + 3.0 * (v[1] + 0.5).powi(2),
            &[0.0, 0.0],
            &[0.3, 0.3],
            500,
            1e-14,
        );
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 0.5).abs() < 1e-5 && fx < 1e-10);
    }

    #[test]
    fn self_fit_has_zero_error() {
        let p = FtrParams::new(6.0, 0.5, 3.0, 1.0).unwrap();
        let cfg = LaplaceInversion::default();
        let points: Vec<(f64, f64)> = (1..=20)
            .map(|i| {
                let r = 0.1 * i as f64;
                (r, envelope_cdf(&p, r, 1.0, &cfg).unwrap())
            })
            .collect();
        let emp = EmpiricalCdf::with_omega(points, 1.0).unwrap();
        assert!(epsilon(&emp, &p).unwrap() < 1e-6);
    }
}

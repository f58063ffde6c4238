use ftr::model::{
    cdf_approx, cdf_exact, default_mixture_order, envelope_pdf, mgf, mixture_coeffs, pdf_approx, pdf_at_origin,
    pdf_exact, FtrParams,
};
use ftr::specfn::{bessel_i0_scaled, inverse_laplace_shifted, ln_gamma, LaplaceInversion, Quadrature};
use num_complex::Complex;

const SETS: [(f64, f64, f64, f64); 6] = [
    (15.0, 0.9, 2.0, 1.0),
    (15.0, 0.9, 5.0, 1.0),
    (15.0, 0.9, 10.0, 1.0),
    (4.0, 0.5, 1.0, 2.0),
    (8.0, 0.1, 8.0, 1.0),
    (0.0, 0.0, 3.0, 1.0),
];

fn all() -> impl Iterator<Item = FtrParams<f64>> {
    SETS.iter().map(|&(k, d, m, g)| FtrParams::new(k, d, m, g).unwrap())
}

fn loose() -> Quadrature<f64> {
    Quadrature::new(1e-300, 1e-9, 4000).unwrap()
}

#[test]
fn densities_normalize() {
    let cfg = LaplaceInversion::default();
    for p in all() {
        let c = mixture_coeffs(&p, default_mixture_order(&p)).unwrap();
        let e = loose().integrate_to_infinity(|x| pdf_exact(&p, x, &cfg).unwrap(), 0.0).unwrap().value;
        let a = loose().integrate_to_infinity(|x| pdf_approx(&p, x, &c).unwrap(), 0.0).unwrap().value;
        assert!((e - 1.0).abs() < 1e-6 && (a - 1.0).abs() < 1e-6, "{p:?}: {e} {a}");
    }
}

#[test]
fn mgf_is_transform_of_density() {
    let cfg = LaplaceInversion::default();
    for p in all() {
        for s in [-0.25, -1.0, -4.0] {
            let v = loose().integrate_to_infinity(|x| (s * x).exp() * pdf_exact(&p, x, &cfg).unwrap(), 0.0).unwrap().value;
            assert!((v - mgf(&p, s).unwrap()).abs() < 1e-5, "{p:?} s={s}");
        }
    }
}

#[test]
fn cdf_derivative_is_density() {
    let cfg = LaplaceInversion::default();
    let h = 1e-4;
    for p in all() {
        for i in 0..=99 {
            let x = 0.1 + 9.9 * i as f64 / 99.0;
            let d = (cdf_exact(&p, x + h, &cfg).unwrap() - cdf_exact(&p, x - h, &cfg).unwrap()) / (2.0 * h);
            assert!((d - pdf_exact(&p, x, &cfg).unwrap()).abs() < 1e-5, "{p:?} x={x}");
        }
    }
}

#[test]
fn approximate_cdf_tracks_exact() {
    let cfg = LaplaceInversion::default();
    for p in all() {
        let c = mixture_coeffs(&p, default_mixture_order(&p)).unwrap();
        for x in [0.05, 0.3, 1.0, 2.5, 6.0] {
            assert!((cdf_approx(&p, x, &c).unwrap() - cdf_exact(&p, x, &cfg).unwrap()).abs() < 1e-3);
        }
    }
}

#[test]
fn density_at_origin() {
    let cfg = LaplaceInversion::default();
    for p in all() {
        let f0 = pdf_at_origin(&p).unwrap();
        assert!((pdf_exact(&p, 1e-6, &cfg).unwrap() - f0).abs() < 1e-4 * f0.max(1.0), "{p:?}");
    }
    // exponential density at the origin is 1/gamma_bar
    let p = FtrParams::<f64>::new(0.0, 0.0, 4.0, 2.5).unwrap();
    assert!((pdf_at_origin(&p).unwrap() - 0.4).abs() < 1e-15);
}

#[test]
fn exponential_inversion() {
    let cfg = LaplaceInversion::<f64>::default();
    let mut sup = 0.0f64;
    for i in 0..=999 {
        let x = 0.01 + (10.0 - 0.01) * i as f64 / 999.0;
        let v = inverse_laplace_shifted(|q: Complex<f64>| (q + 1.0).inv(), x, -0.9, &cfg).unwrap().value;
        sup = sup.max((v - (-x).exp()).abs());
    }
    assert!(sup <= 1e-7, "sup error {sup}");
}

fn strict_maxima(values: &[f64]) -> usize {
    values.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}

/// Envelope density with unit power as a Rician density averaged over the
/// phase difference and a unit-mean Gamma power fluctuation.
fn envelope_oracle(k: f64, d: f64, m: f64, r: f64) -> f64 {
    let q = Quadrature::new(1e-300, 1e-11, 4000).unwrap();
    let s2 = 0.5 / (1.0 + k);
    let rice = |a: f64| r / s2 * (-(r - a).powi(2) / (2.0 * s2)).exp() * bessel_i0_scaled(r * a / s2);
    let twdp = |z: f64| {
        let phase = |ph: f64| rice((z * k / (1.0 + k) * (1.0 + d * ph.cos())).sqrt());
        q.integrate(phase, 0.0, std::f64::consts::PI).unwrap().value / std::f64::consts::PI
    };
    let gamma = |z: f64| (m * m.ln() + (m - 1.0) * z.ln() - m * z - ln_gamma(m)).exp();
    q.integrate_to_infinity(|z| if z > 0.0 { twdp(z) * gamma(z) } else { 0.0 }, 0.0).unwrap().value
}

#[test]
fn envelope_matches_phase_and_power_average() {
    let cfg = LaplaceInversion::default();
    for m in [2.0, 10.0, 30.0] {
        let p = FtrParams::new(15.0, 0.9, m, 1.0).unwrap();
        for r in [0.2, 0.6, 1.0, 1.4] {
            let want = envelope_oracle(15.0, 0.9, m, r);
            let got = envelope_pdf(&p, r, 1.0, &cfg).unwrap();
            assert!(((got - want) / want).abs() < 1e-6, "m={m} r={r}: {got} vs {want}");
        }
    }
}

#[test]
fn envelope_becomes_bimodal_as_fluctuations_vanish() {
    let cfg = LaplaceInversion::default();
    let grid: Vec<f64> = (1..2000).map(|i| i as f64 * 1e-3).collect();
    for (m, want) in [(2.0, 1), (5.0, 1), (10.0, 1), (30.0, 2), (100.0, 2)] {
        let p = FtrParams::new(15.0, 0.9, m, 1.0).unwrap();
        let f: Vec<f64> = grid.iter().map(|&r| envelope_pdf(&p, r, 1.0, &cfg).unwrap()).collect();
        assert_eq!(strict_maxima(&f), want, "m = {m}");
    }
}

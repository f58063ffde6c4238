use ftr::fit::{epsilon, EmpiricalCdf};
use ftr::metrics::{ber_exact, outage_probability, CepFamily, OutageSpec};
use ftr::model::{
    alpha_exact, cdf_exact, kernel_g, mgf, mgf_derivative_mean, mgf_independent, poly_coeffs, quadratic, FtrParams,
};
use ftr::sampler::{sample_ftr, SampleConfig};
use ftr::specfn::{
    kummer_1f1_integer, lauricella_fd4, legendre_fn, legendre_poly, LaplaceInversion, Quadrature,
};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ftr_params() -> impl Strategy<Value = FtrParams<f64>> {
    (0.01f64..100.0, 0.0f64..=1.0, 1usize..=12, 0.2f64..5.0)
        .prop_map(|(k, d, m, g)| FtrParams::new(k, d, m as f64, g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn legendre_at_one_is_one(n in 0usize..=50) {
        prop_assert!((legendre_poly(n, 1.0f64) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn legendre_fn_matches_polynomial(n in 0usize..=20, z in -0.999f64..2.999) {
        let want = legendre_poly(n, z);
        let got = legendre_fn(n as f64, z).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "n={} z={}: {} vs {}", n, z, got, want);
    }

    #[test]
    fn kummer_at_zero(m in 0usize..=50) {
        prop_assert_eq!(kummer_1f1_integer(m, 0.0f64), 1.0);
    }

    #[test]
    fn lauricella_trivial_arguments(a in 0.5f64..3.0, c in 3.5f64..6.0, b in prop::array::uniform4(-3.0f64..3.0), x in prop::array::uniform4(-0.9f64..0.0)) {
        let q = Quadrature::default();
        let zero_b = lauricella_fd4(a, [0.0; 4], c, x, &q).unwrap();
        let zero_x = lauricella_fd4(a, b, c, [0.0; 4], &q).unwrap();
        prop_assert!((zero_b - 1.0).abs() < 1e-10);
        prop_assert!((zero_x - 1.0).abs() < 1e-10);
    }

    #[test]
    fn factorized_quadratic(p in ftr_params(), t in -50.0f64..0.999) {
        let c = poly_coeffs(&p);
        let s = t * c.a3;
        let a = quadratic(&p, s);
        let b = c.quadratic_from_factors(&p, s);
        prop_assert!(((a - b) / a).abs() < 1e-10);
    }

    #[test]
    fn mgf_is_a_laplace_transform(p in ftr_params(), s1 in -20.0f64..-0.01, s2 in -20.0f64..-0.01) {
        let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
        let (a, b) = (mgf(&p, lo).unwrap(), mgf(&p, hi).unwrap());
        prop_assert!(a > 0.0 && b <= 1.0 && a <= b * (1.0 + 1e-14));
    }

    #[test]
    fn mean_preserved(p in ftr_params()) {
        let mean = mgf_derivative_mean(&p).unwrap();
        prop_assert!(((mean - p.gamma_bar()) / p.gamma_bar()).abs() < 1e-6);
    }

    #[test]
    fn hoyt_identity(k in 0.01f64..100.0, d in 0.0f64..=1.0, g in 0.2f64..5.0, s in -20.0f64..0.0) {
        let p = FtrParams::new(k, d, 1.0, g).unwrap();
        let q2 = (1.0 + k * (1.0 - d)) / (1.0 + k * (1.0 + d));
        let c = 2.0 * q2.sqrt() / (1.0 + q2);
        let u = g * s;
        let want = 1.0 / (1.0 - 2.0 * u + c * c * u * u).sqrt();
        prop_assert!(((mgf(&p, s).unwrap() - want) / want).abs() < 1e-10);
    }

    #[test]
    fn independent_variant_at_delta_zero(k in 0.01f64..100.0, m in 1usize..=12, g in 0.2f64..5.0, s in -20.0f64..0.0) {
        let p = FtrParams::new(k, 0.0, m as f64, g).unwrap();
        prop_assert!((mgf_independent(&p, s).unwrap() - mgf(&p, s).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn kernel_g_is_a_density(m in 1usize..=10, beta in 0.2f64..5.0, k in 0.0f64..40.0) {
        let q = Quadrature::new(1e-300, 1e-11, 2000).unwrap();
        let total = q.integrate_to_infinity(|x| kernel_g(m, x, beta, k), 0.0).unwrap().value;
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cdf_is_monotone(p in ftr_params(), xs in prop::collection::vec(0.01f64..20.0, 2..6)) {
        let cfg = LaplaceInversion::default();
        let mut xs = xs;
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let values: Vec<f64> = xs.iter().map(|&x| cdf_exact(&p, x, &cfg).unwrap()).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-9);
        }
        prop_assert!(values.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn metrics_decrease_with_snr(k in 0.1f64..30.0, d in 0.0f64..=1.0, m in 1usize..=10) {
        let cep = CepFamily::bpsk();
        let spec = OutageSpec::new(2.0).unwrap();
        let (q, cfg) = (Quadrature::default(), LaplaceInversion::default());
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for db in (0..=40).step_by(5) {
            let p = FtrParams::new(k, d, m as f64, 10f64.powf(db as f64 / 10.0)).unwrap();
            let cur = (ber_exact(&p, &cep, &q).unwrap(), outage_probability(&p, &spec, &cfg).unwrap());
            prop_assert!(cur.0 < prev.0 && cur.1 < prev.1, "{} dB: {:?} vs {:?}", db, cur, prev);
            prev = cur;
        }
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), n in 1usize..5000) {
        let p = FtrParams::new(4.0, 0.5, 2.0, 1.0).unwrap();
        let cfg = SampleConfig::new(seed, n).unwrap();
        prop_assert_eq!(sample_ftr(&p, &cfg).unwrap(), sample_ftr(&p, &cfg).unwrap());
    }

    #[test]
    fn epsilon_is_scale_invariant(c in 0.1f64..20.0) {
        let p = FtrParams::new(6.0, 0.5, 3.0, 1.0).unwrap();
        let b = sample_ftr(&p, &SampleConfig::new(1, 5000).unwrap()).unwrap();
        let emp = EmpiricalCdf::from_samples(&b.envelope, 20, 1e-2).unwrap();
        let scaled: Vec<(f64, f64)> = emp.points().iter().map(|&(r, f)| (c * r, f)).collect();
        let emp_c = EmpiricalCdf::with_omega(scaled, c * c * emp.omega()).unwrap();
        let model = p.with_gamma_bar(emp.omega()).unwrap();
        let model_c = p.with_gamma_bar(c * c * emp.omega()).unwrap();
        let (e1, e2) = (epsilon(&emp, &model).unwrap(), epsilon(&emp_c, &model_c).unwrap());
        prop_assert!((e1 - e2).abs() < 1e-7, "{} vs {}", e1, e2);
    }
}

#[test]
fn exact_weights_sum_to_one() {
    for order in 1..=20 {
        let total = alpha_exact(order).iter().fold(BigRational::zero(), |acc, a| acc + a);
        assert!(total == BigRational::one(), "M = {order}");
    }
}

//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and subdivision budget of the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: T,
    pub subdivisions: usize,
}

impl<T: Real> Default for Quadrature<T> {
    /// About 100 ulps absolute and 1000 ulps relative, 2000 subintervals.
    fn default() -> Self {
        Quadrature {
            abs_tol: T::epsilon() * T::lit(100.0),
            rel_tol: T::epsilon() * T::lit(1000.0),
            max_subdivisions: 2000,
        }
    }
}

impl<T: Real> Quadrature<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > T::zero()) || !(rel_tol > T::zero()) || max_subdivisions == 0 {
            return Err(Error::invalid(
                "quadrature needs abs_tol > 0, rel_tol > 0 and max_subdivisions >= 1",
            ));
        }
        Ok(Quadrature { abs_tol, rel_tol, max_subdivisions })
    }

    /// Integrates `f` over the finite interval `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> Result<Integral<T>> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::domain("integration limits must be finite"));
        }
        if a == b {
            return Ok(Integral { value: T::zero(), abs_error: T::zero(), subdivisions: 0 });
        }
        let first = gk15(&mut f, a, b)?;
        let mut parts = vec![first];
        loop {
            let value: T = parts.iter().map(|p| p.value).sum();
            let error: T = parts.iter().map(|p| p.error).sum();
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= target {
                return Ok(Integral { value, abs_error: error, subdivisions: parts.len() });
            }
            if parts.len() >= self.max_subdivisions {
                return Err(Error::NonConvergence {
                    what: "adaptive quadrature",
                    estimate: error.to_f64_lossy(),
                    target: target.to_f64_lossy(),
                });
            }
            let worst = (0..parts.len())
                .max_by(|&i, &j| parts[i].error.partial_cmp(&parts[j].error).unwrap())
                .unwrap();
            let Panel { a: lo, b: hi, .. } = parts.swap_remove(worst);
            let mid = (lo + hi) / T::lit(2.0);
            if !(mid > lo && mid < hi) {
                // interval cannot be split further in this precision
                return Err(Error::NonConvergence {
                    what: "adaptive quadrature",
                    estimate: error.to_f64_lossy(),
                    target: target.to_f64_lossy(),
                });
            }
            parts.push(gk15(&mut f, lo, mid)?);
            parts.push(gk15(&mut f, mid, hi)?);
        }
    }

    /// Integrates `f` over `[a, inf)` through `x = a + t/(1-t)`.
    pub fn integrate_to_infinity<F: FnMut(T) -> T>(&self, mut f: F, a: T) -> Result<Integral<T>> {
        self.integrate(
            |t: T| {
                if t >= T::one() {
                    return T::zero();
                }
                let u = T::one() - t;
                let y = f(a + t / u) / (u * u);
                if y.is_finite() {
                    y
                } else {
                    T::zero()
                }
            },
            T::zero(),
            T::one(),
        )
    }
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Result<Panel<T>> {
    let half = (b - a) / T::lit(2.0);
    let center = (a + b) / T::lit(2.0);
    let fc = f(center);
    let mut res_k = fc * T::lit(WGK[7]);
    let mut res_g = fc * T::lit(WG[3]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + T::lit(WGK[j]) * (f1 + f2);
        res_abs = res_abs + T::lit(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        return Err(Error::domain(format!("integrand not finite on [{a}, {b}]")));
    }
    let mean = res_k / T::lit(2.0);
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let hl = half.abs();
    let res_asc = res_asc * hl;
    let res_abs = res_abs * hl;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != T::zero() && err != T::zero() {
        err = res_asc * T::one().min((T::lit(200.0) * err / res_asc).powf(T::lit(1.5)));
    }
    let floor = T::lit(50.0) * T::epsilon();
    if res_abs > T::min_positive_value() / floor {
        err = err.max(floor * res_abs);
    }
    Ok(Panel { a, b, value: res_k * half, error: err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = Quadrature::<f64>::default();
        let r = q.integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0).unwrap();
        assert!((r.value - (9.0 - 1.5 + 6.0)).abs() < 1e-13);
        assert_eq!(r.subdivisions, 1);
    }

    #[test]
    fn endpoint_singularity() {
        let q = Quadrature::<f64>::default();
        let r = q.integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite() {
        let q = Quadrature::<f64>::default();
        let r = q.integrate_to_infinity(|x: f64| (-x).exp(), 0.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = q.integrate_to_infinity(|x: f64| 1.0 / (1.0 + x * x), 0.0).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q = Quadrature::new(1e-15, 1e-15, 3).unwrap();
        let r = q.integrate(|x: f64| (50.0 * x).sin() / x.max(1e-300).sqrt(), 0.0, 10.0);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn invalid_config() {
        assert!(Quadrature::new(0.0_f64, 1e-8, 10).is_err());
        assert!(Quadrature::new(1e-8_f64, 1e-8, 0).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let q = Quadrature::<f32>::default();
        let r = q.integrate(|x: f32| x.cos(), 0.0, 1.5).unwrap();
        assert!((r.value - 1.5_f32.sin()).abs() < 1e-5);
    }
}

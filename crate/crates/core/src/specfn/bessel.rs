//! Modified Bessel function `I0`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Switch from the power series to the asymptotic expansion here; the
/// smallest asymptotic term is then about `e^(-2x)`.
const ASYMPTOTIC_FROM: f64 = 20.0;

/// `I0(x)`. Fails with [`Error::Overflow`] when the value is not representable.
pub fn bessel_i0<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::domain("bessel_i0: non-finite argument"));
    }
    let ax = x.abs();
    if ax < T::lit(ASYMPTOTIC_FROM) {
        return Ok(series(ax));
    }
    let ln = ax + bessel_i0_scaled(ax).ln();
    if ln >= T::max_value().ln() {
        return Err(Error::Overflow(format!("I0({x}) exceeds the representable range")));
    }
    Ok(ln.exp())
}

/// Exponentially scaled `e^(-|x|) I0(x)`; finite for every finite `x`.
pub fn bessel_i0_scaled<T: Real>(x: T) -> T {
    let ax = x.abs();
    if ax < T::lit(ASYMPTOTIC_FROM) {
        return series(ax) * (-ax).exp();
    }
    // e^x/sqrt(2 pi x) * sum ((2k-1)!!)^2 / (k! (8x)^k)
    let eight_x = T::lit(8.0) * ax;
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..64 {
        let kf = T::from_usize_lossy(k);
        let odd = kf + kf - T::one();
        let next = term * odd * odd / (kf * eight_x);
        if next >= term {
            break;
        }
        term = next;
        sum = sum + term;
        if term < T::epsilon() * sum {
            break;
        }
    }
    sum / (T::lit(2.0) * T::PI() * ax).sqrt()
}

/// `sum (x^2/4)^k / (k!)^2`, all terms positive.
fn series<T: Real>(x: T) -> T {
    let q = x * x / T::lit(4.0);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..200 {
        let kf = T::from_usize_lossy(k);
        term = term * q / (kf * kf);
        sum = sum + term;
        if term < T::epsilon() * sum * T::lit(0.5) {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(x: f64, terms: usize) -> f64 {
        (0..terms)
            .map(|k| {
                let lf: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
                (2.0 * k as f64 * (x / 2.0).ln() - 2.0 * lf).exp()
            })
            .sum()
    }

    #[test]
    fn known_values() {
        assert_eq!(bessel_i0(0.0_f64).unwrap(), 1.0);
        assert!((bessel_i0(1.0_f64).unwrap() - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert_eq!(bessel_i0(-2.3_f64).unwrap(), bessel_i0(2.3_f64).unwrap());
    }

    #[test]
    fn relative_accuracy_over_range() {
        for &x in &[0.5, 3.0, 10.0, 19.9, 20.0, 20.1, 35.0, 60.0, 120.0] {
            let want = oracle(x, 400);
            let got = bessel_i0(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn scaled_is_stable_at_700() {
        let v = bessel_i0_scaled(700.0_f64);
        let want = 1.0 / (2.0 * std::f64::consts::PI * 700.0).sqrt() * (1.0 + 1.0 / 5600.0);
        assert!(((v - want) / want).abs() < 1e-6);
        assert!(bessel_i0(700.0_f64).unwrap().is_finite());
        assert!(matches!(bessel_i0(800.0_f64), Err(Error::Overflow(_))));
    }
}

//! Gauss, Kummer and Lauricella hypergeometric functions.

use super::quadrature::Quadrature;
use super::ln_gamma;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_TERMS: usize = 1_000_000;

/// Gauss hypergeometric `2F1(a, b; c; x)` by its power series, `|x| < 1`.
///
/// Summation stops once a geometric bound on the remaining tail falls below
/// `max(1e-13, 8 eps)` relative to the running sum. Terminating series
/// (`a` or `b` a non-positive integer) are summed exactly.
pub fn gauss_2f1<T: Real>(a: T, b: T, c: T, x: T) -> Result<T> {
    let tol = T::lit(1e-13).max(T::epsilon() * T::lit(8.0));
    gauss_2f1_tol(a, b, c, x, tol)
}

/// [`gauss_2f1`] with an explicit relative tail tolerance.
pub fn gauss_2f1_tol<T: Real>(a: T, b: T, c: T, x: T, tol: T) -> Result<T> {
    if ![a, b, c, x].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("gauss_2f1: non-finite argument"));
    }
    if x.abs() >= T::one() {
        return Err(Error::domain(format!("gauss_2f1: |x| must be < 1, got {x}")));
    }
    if c <= T::zero() && c == c.round() {
        return Err(Error::domain(format!("gauss_2f1: c = {c} is a non-positive integer")));
    }
    if x == T::zero() {
        return Ok(T::one());
    }
    // beyond this index the term ratio is close to monotone in n
    let settle = (a.abs() + b.abs() + c.abs()).to_usize().unwrap_or(0) + 2;
    let mut term = T::one();
    let mut sum = T::one();
    for n in 0..MAX_TERMS {
        let nf = T::from_usize_lossy(n);
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + T::one())) * x;
        term = term * ratio;
        if term == T::zero() {
            return Ok(sum);
        }
        sum = sum + term;
        if n >= settle {
            let r = ratio.abs().max(x.abs());
            if r < T::one() && term.abs() * r / (T::one() - r) <= tol * sum.abs().max(T::one()) {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence {
        what: "2F1 power series",
        estimate: term.abs().to_f64_lossy(),
        target: tol.to_f64_lossy(),
    })
}

/// Kummer `1F1(m; 1; z)` for integer `m`, as `e^z * sum_{n<m} C(m-1,n) z^n / n!`.
pub fn kummer_1f1_integer<T: Real>(m: usize, z: T) -> T {
    if m == 0 {
        return T::one();
    }
    let mut term = T::one();
    let mut sum = T::one();
    for n in 0..m - 1 {
        let k = T::from_usize_lossy(n + 1);
        term = term * T::from_usize_lossy(m - 1 - n) / k * z / k;
        sum = sum + term;
    }
    z.exp() * sum
}

/// Lauricella `F_D` in four variables from its Euler integral
/// `Gamma(c)/(Gamma(a)Gamma(c-a)) int_0^1 t^(a-1)(1-t)^(c-a-1) prod (1-x_i t)^(-b_i) dt`.
///
/// The substitution `t = sin^2 u` removes the endpoint singularities of the
/// Beta weight for `a, c - a >= 1/2`, which covers the BER use.
pub fn lauricella_fd4<T: Real>(a: T, b: [T; 4], c: T, x: [T; 4], quad: &Quadrature<T>) -> Result<T> {
    if !(a > T::zero() && c > a) {
        return Err(Error::domain(format!("lauricella_fd4: need c > a > 0, got a = {a}, c = {c}")));
    }
    if let Some(xi) = x.iter().find(|&&xi| !(xi < T::one())) {
        return Err(Error::domain(format!("lauricella_fd4: x_i must be < 1, got {xi}")));
    }
    let two = T::lit(2.0);
    let pa = two * a - T::one();
    let pc = two * (c - a) - T::one();
    let integrand = |u: T| -> T {
        let (s, co) = u.sin_cos();
        let t = s * s;
        let mut ln_prod = T::zero();
        for i in 0..4 {
            if b[i] != T::zero() && x[i] != T::zero() {
                ln_prod = ln_prod - b[i] * (T::one() - x[i] * t).ln();
            }
        }
        two * s.powf(pa) * co.powf(pc) * ln_prod.exp()
    };
    let integral = quad.integrate(integrand, T::zero(), T::FRAC_PI_2())?;
    let ln_norm = ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a);
    Ok(ln_norm.exp() * integral.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        assert_eq!(gauss_2f1(0.3_f64, -2.1, 1.7, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn log_identity() {
        let v = gauss_2f1(1.0_f64, 1.0, 2.0, 0.5).unwrap();
        let want = -(1.0_f64 - 0.5).ln() / 0.5;
        assert!((v - want).abs() < 1e-13);
        assert!((v - 1.386_294_361_119_890_6).abs() < 1e-13);
    }

    #[test]
    fn terminating_series() {
        // 2F1(-2, b; c; x) = 1 - 2bx/c + b(b+1)x^2/(c(c+1))
        let (b, c, x) = (1.5_f64, 2.5, -0.7);
        let want = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
        assert!((gauss_2f1(-2.0, b, c, x).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn rejects_outside_disc() {
        assert!(matches!(gauss_2f1(1.0_f64, 1.0, 2.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(gauss_2f1(1.0_f64, 1.0, -2.0, 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn euler_integral_oracle() {
        // 2F1(a,b;c;x) = Gamma(c)/(Gamma(b)Gamma(c-b)) int t^(b-1)(1-t)^(c-b-1)(1-xt)^(-a)
        // with a = b = 3, c = 4 to keep the weight regular; midpoint rule
        let (a, b, c, x) = (3.0_f64, 3.0, 4.0, 0.2);
        let n = 200_000;
        let h = 1.0 / n as f64;
        let s: f64 = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) * h;
                t.powf(b - 1.0) * (1.0 - t).powf(c - b - 1.0) * (1.0 - x * t).powf(-a)
            })
            .sum::<f64>()
            * h;
        let want = s * 3.0; // Gamma(4)/(Gamma(3)Gamma(1)) = 3
        assert!((gauss_2f1(a, b, c, x).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn kummer_small_orders() {
        assert!((kummer_1f1_integer(1, 0.8_f64) - 0.8_f64.exp()).abs() < 1e-15);
        assert!((kummer_1f1_integer(2, 1.0_f64) - 5.436_563_656_918_09).abs() < 1e-13);
        for m in 0..=50 {
            assert_eq!(kummer_1f1_integer(m, 0.0_f64), 1.0);
        }
    }

    #[test]
    fn kummer_against_power_series() {
        // 1F1(a;1;z) = sum (a)_n z^n / (n!)^2
        let (m, z) = (5usize, 0.7_f64);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..80 {
            let nf = n as f64;
            term *= (m as f64 + nf) * z / ((nf + 1.0) * (nf + 1.0));
            sum += term;
        }
        assert!((kummer_1f1_integer(m, z) - sum).abs() < 1e-13 * sum);
    }

    #[test]
    fn lauricella_trivial_cases() {
        let q = Quadrature::<f64>::default();
        let v = lauricella_fd4(1.5, [0.0; 4], 2.0, [-0.3, 0.2, -4.0, 0.9], &q).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = lauricella_fd4(1.5, [-1.0, 0.5, 0.5, 0.0], 2.0, [0.0; 4], &q).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lauricella_one_variable_is_gauss() {
        // F_D with a single active variable is 2F1(a, b1; c; x1)
        let q = Quadrature::<f64>::default();
        let v = lauricella_fd4(1.5, [0.7, 0.0, 0.0, 0.0], 2.0, [-0.4, 0.0, 0.0, 0.0], &q).unwrap();
        let want = gauss_2f1(1.5, 0.7, 2.0, -0.4).unwrap();
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn lauricella_domain() {
        let q = Quadrature::<f64>::default();
        assert!(lauricella_fd4(1.5, [0.0; 4], 2.0, [1.0, 0.0, 0.0, 0.0], &q).is_err());
        assert!(lauricella_fd4(2.0, [0.0; 4], 1.5, [0.0; 4], &q).is_err());
    }
}

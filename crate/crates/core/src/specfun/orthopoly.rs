//! Associated Laguerre polynomials and associated Legendre functions.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use super::gamma::{double_factorial, ln_factorial};
use crate::error::{Error, Result};

/// Scalars the Laguerre recurrence can run on.
pub trait LaguerreArg:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn constant(c: f64) -> Self;
}

impl LaguerreArg for f64 {
    fn constant(c: f64) -> Self {
        c
    }
}

impl LaguerreArg for Complex64 {
    fn constant(c: f64) -> Self {
        Complex64::new(c, 0.0)
    }
}

/// L_n^α(x) by the three-term recurrence
/// `(j+1) L_{j+1} = (2j+1+α-x) L_j - (j+α) L_{j-1}`.
pub fn laguerre_generic<T: LaguerreArg>(n: u32, alpha: f64, x: T) -> T {
    let mut prev = T::constant(1.0);
    if n == 0 {
        return prev;
    }
    let mut cur = T::constant(1.0 + alpha) - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((T::constant(2.0 * jf + 1.0 + alpha) - x) * cur - prev * (jf + alpha))
            / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Real associated Laguerre polynomial L_n^α(x), α > -1.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    laguerre_generic(n, alpha, x)
}

/// L_n^α at a complex argument.
pub fn laguerre_complex(n: u32, alpha: f64, x: Complex64) -> Complex64 {
    laguerre_generic(n, alpha, x)
}

/// Condon–Shortley P_n^m(x) for x in (-1, 1].
pub fn legendre_assoc(n: u32, m: i32, x: f64) -> Result<f64> {
    if !(x > -1.0 && x <= 1.0) {
        return Err(Error::Domain(format!("legendre argument {x} outside (-1, 1]")));
    }
    legendre_assoc_sc(n, m, x, (1.0 - x * x).max(0.0).sqrt())
}

/// P_n^m with cos and sin of the angle supplied separately, so the caller
/// can keep full relative accuracy in a small `sin`.
pub fn legendre_assoc_sc(n: u32, m: i32, cos: f64, sin: f64) -> Result<f64> {
    let am = m.unsigned_abs();
    if am > n {
        return Err(Error::Domain(format!("|m| = {am} exceeds degree {n}")));
    }
    let p = legendre_nonneg(n, am, cos, sin);
    if m >= 0 {
        return Ok(p);
    }
    // P_n^{-m} = (-1)^m (n-m)!/(n+m)! P_n^m
    let ratio = (ln_factorial(n - am) - ln_factorial(n + am)).exp();
    let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * ratio * p)
}

fn legendre_nonneg(n: u32, m: u32, cos: f64, sin: f64) -> f64 {
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let pmm = sign * double_factorial(2 * m as i64 - 1) * sin.powi(m as i32);
    if n == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = cos * (2 * m + 1) as f64 * pmm;
    for l in (m + 2)..=n {
        let next = ((2 * l - 1) as f64 * cos * cur - (l + m - 1) as f64 * prev) / (l - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_low_orders() {
        let (a, x) = (0.37, 1.9);
        assert_eq!(laguerre(0, a, x), 1.0);
        assert!((laguerre(1, a, x) - (1.0 + a - x)).abs() < 1e-15);
        // L_2^{1/2}(1) = ((a+1)(a+2) - 2(a+2)x + x^2)/2 at a = 1/2
        assert!((laguerre(2, 0.5, 1.0) + 0.125).abs() < 1e-15);
    }

    #[test]
    fn laguerre_satisfies_its_ode() {
        let h = 1e-4;
        for n in 0..8 {
            for &alpha in &[-0.5, 0.0, 0.6, 2.5] {
                for &x in &[0.3, 1.7, 4.2] {
                    let l = |y: f64| laguerre(n, alpha, y);
                    let d1 = (l(x + h) - l(x - h)) / (2.0 * h);
                    let d2 = (l(x + h) - 2.0 * l(x) + l(x - h)) / (h * h);
                    let res = x * d2 + (alpha + 1.0 - x) * d1 + n as f64 * l(x);
                    let scale = l(x).abs().max(1.0);
                    assert!(res.abs() / scale < 1e-5, "n={n} a={alpha} x={x} res={res}");
                }
            }
        }
    }

    #[test]
    fn complex_laguerre_matches_real_on_axis() {
        let z = laguerre_complex(6, 0.3, Complex64::new(2.1, 0.0));
        assert!((z.re - laguerre(6, 0.3, 2.1)).abs() < 1e-13);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn legendre_closed_forms() {
        let x = 0.6;
        assert_eq!(legendre_assoc(0, 0, x).unwrap(), 1.0);
        assert!((legendre_assoc(1, 0, x).unwrap() - x).abs() < 1e-16);
        assert!((legendre_assoc(2, 1, x).unwrap() + 3.0 * 0.6 * 0.8).abs() < 1e-14);
        assert!((legendre_assoc(2, 2, x).unwrap() - 3.0 * 0.64).abs() < 1e-14);
        // P_1^{-1} = -(1/2) P_1^1 = sin/2
        assert!((legendre_assoc(1, -1, x).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn legendre_rejects_bad_order() {
        assert!(matches!(legendre_assoc(2, 3, 0.5), Err(Error::Domain(_))));
        assert!(matches!(legendre_assoc(2, -3, 0.5), Err(Error::Domain(_))));
    }
}

//! Terminating Gauss hypergeometric series F[-m, b; c; z].
//!
//! The sum is accumulated by the term recurrence
//! `t_{s+1} = t_s (s - m)(b + s) / ((c + s)(1 + s)) z` in whatever scalar
//! type the caller needs: `f64`, `Complex64`, double-double, or exact
//! rationals for the badly conditioned verification routes.

use std::ops::{Add, Div, Mul};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use super::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Scalar types the series can be summed in.
pub trait SeriesScalar:
    Clone + Add<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn is_zero_value(&self) -> bool;
    /// Approximate magnitude, used only for the condition estimate.
    fn magnitude(&self) -> f64;
}

impl SeriesScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl SeriesScalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn is_zero_value(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl SeriesScalar for DoubleDouble {
    fn from_f64(x: f64) -> Self {
        DoubleDouble::new(x)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl SeriesScalar for BigRational {
    fn from_f64(x: f64) -> Self {
        exact(x)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }
}

/// Parameters of F[-m, b; c; z].
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomSpec<Z> {
    pub m: u32,
    pub b: f64,
    pub c: f64,
    pub z: Z,
}

impl<Z> HypergeomSpec<Z> {
    pub fn new(m: u32, b: f64, c: f64, z: Z) -> Self {
        Self { m, b, c, z }
    }
}

/// Value of the series together with Σ|t_s| / |Σ t_s|.
#[derive(Debug, Clone)]
pub struct SeriesSum<T> {
    pub value: T,
    pub condition: f64,
}

/// Sums F[-m, b; c; z] and reports its condition number.
///
/// The series stops early when `b + s` vanishes. A vanishing `c + s`
/// while terms are still nonzero is a pole.
pub fn terminating_sum<T: SeriesScalar>(m: u32, b: f64, c: f64, z: T) -> Result<SeriesSum<T>> {
    let mut term = T::from_f64(1.0);
    let mut sum = term.clone();
    let mut abs_sum = 1.0;
    let b_t = T::from_f64(b);
    let c_t = T::from_f64(c);
    for s in 0..m {
        let sf = s as f64;
        let b_s = b_t.clone() + T::from_f64(sf);
        if b_s.is_zero_value() {
            break;
        }
        if c + sf == 0.0 {
            return Err(Error::Pole { c, s: s as usize });
        }
        let num = T::from_f64(sf - m as f64) * b_s;
        let den = (c_t.clone() + T::from_f64(sf)) * T::from_f64(sf + 1.0);
        term = term * num * z.clone() / den;
        abs_sum += term.magnitude();
        sum = sum + term.clone();
    }
    let mag = sum.magnitude();
    let condition = if mag > 0.0 { abs_sum / mag } else { f64::INFINITY };
    Ok(SeriesSum {
        value: sum,
        condition,
    })
}

/// F[-m, b; c; z] for real or complex `z` (or any [`SeriesScalar`]).
pub fn hypergeom_terminating<T: SeriesScalar>(spec: &HypergeomSpec<T>) -> Result<T> {
    terminating_sum(spec.m, spec.b, spec.c, spec.z.clone()).map(|s| s.value)
}

/// Exact rational value of a finite double.
pub fn exact(x: f64) -> BigRational {
    <BigRational as FromPrimitive>::from_f64(x).expect("finite value")
}

/// Correctly scaled conversion of a big rational to the nearest-ish double.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(v) = q.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    // rescale by a power of two so that the quotient has ~64 significant bits
    let neg = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let scaled: BigInt = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    let mant = scaled.to_f64().unwrap_or(f64::NAN);
    let v = mant * 2f64.powi(-(shift.clamp(-1000, 1000) as i32));
    let v = if shift.abs() > 1000 {
        // outside double range in practice
        mant * (2f64).powf(-shift as f64)
    } else {
        v
    };
    if neg {
        -v
    } else {
        v
    }
}

/// F[-m, b; c; z] summed exactly; only the final result is rounded.
pub fn hypergeom_terminating_exact(m: u32, b: f64, c: f64, z: &BigRational) -> Result<f64> {
    exact_sum(m, b, c, z).map(|q| rational_to_f64(&q))
}

/// Exact rational F[-m, b; c; z].
pub fn exact_sum(m: u32, b: f64, c: f64, z: &BigRational) -> Result<BigRational> {
    exact_sum_q(m, &exact(b), &exact(c), z)
}

/// Exact rational F[-m, b; c; z] with rational parameters.
///
/// Terms share the running denominator and nothing is reduced, inside the
/// loop or at the end; callers only combine and round the result.
pub fn exact_sum_q(m: u32, b: &BigRational, c: &BigRational, z: &BigRational) -> Result<BigRational> {
    let (zn, zd) = (z.numer(), z.denom());
    let (bn, bd) = (b.numer(), b.denom());
    let (cn, cd) = (c.numer(), c.denom());
    // running term t_s = tn / td, running sum S = sn / td
    let mut tn = BigInt::from(1);
    let mut td = BigInt::from(1);
    let mut sn = BigInt::from(1);
    for s in 0..m {
        let shift = BigInt::from(s);
        // b + s = (bn + s bd) / bd, likewise for c
        let b_s = bn + &shift * bd;
        if b_s.is_zero() {
            break;
        }
        let c_s = cn + &shift * cd;
        if c_s.is_zero() {
            return Err(Error::Pole {
                c: rational_to_f64(c),
                s: s as usize,
            });
        }
        let a_s = BigInt::from(s as i64 - m as i64);
        // t_{s+1} = t_s * a_s * b_s * z / (c_s * (s+1))
        let num_f = a_s * b_s * cd * zn;
        let den_f = BigInt::from(s + 1) * c_s * bd * zd;
        tn *= &num_f;
        sn *= &den_f;
        td *= &den_f;
        sn += &tn;
    }
    if td.is_negative() {
        sn = -sn;
        td = -td;
    }
    Ok(BigRational::new_raw(sn, td))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(m: u32, b: f64, c: f64, z: f64) -> f64 {
        hypergeom_terminating(&HypergeomSpec::new(m, b, c, z)).unwrap()
    }

    #[test]
    fn empty_series_is_one() {
        assert_eq!(f(0, 3.0, 2.0, 0.7), 1.0);
    }

    #[test]
    fn one_term() {
        let (b, c, z) = (1.7, 2.3, 0.4);
        assert!((f(1, b, c, z) - (1.0 - b * z / c)).abs() < 1e-15);
    }

    #[test]
    fn term_by_term_oracle() {
        // F[-2,3;2;0.5] = 1 + (-2)(3)/(2·1)·0.5 + (-2)(-1)(3)(4)/((2)(3)·2)·0.25
        //              = 1 - 1.5 + 0.5
        assert!(f(2, 3.0, 2.0, 0.5).abs() < 1e-15);
    }

    #[test]
    fn complex_argument_matches_real() {
        let z = 0.37;
        let rc = hypergeom_terminating(&HypergeomSpec::new(5, 1.25, 2.5, Complex64::new(z, 0.0)))
            .unwrap();
        assert!((rc.re - f(5, 1.25, 2.5, z)).abs() < 1e-14);
        assert_eq!(rc.im, 0.0);
    }

    #[test]
    fn pole_is_reported() {
        // c + 1 = 0 while the second term is still live
        let err = hypergeom_terminating(&HypergeomSpec::new(3, 1.0, -1.0, 0.5)).unwrap_err();
        assert!(matches!(err, Error::Pole { s: 1, .. }));
    }

    #[test]
    fn vanishing_b_terminates_before_pole() {
        // (b, s) = 0 from s = 2 on, so the pole at c + 2 = 0 is never reached
        assert!(hypergeom_terminating(&HypergeomSpec::new(4, -1.0, -2.0, 0.5)).is_ok());
    }

    #[test]
    fn exact_matches_double_double_on_benign_input() {
        let z = 0.3125;
        let dd = terminating_sum(12, 2.75, 1.5, DoubleDouble::new(z)).unwrap().value;
        let ex = hypergeom_terminating_exact(12, 2.75, 1.5, &exact(z)).unwrap();
        assert!((dd.to_f64() - ex).abs() <= 1e-15 * ex.abs());
    }

    #[test]
    fn exact_beats_double_under_cancellation() {
        // F[-20, -19.5; -39.5; 1.0001]: terms of size ~1e20 cancel almost completely
        let z = 1.0001;
        let ex = exact_sum(20, -19.5, -39.5, &exact(z)).unwrap();
        let dd = terminating_sum(20, -19.5, -39.5, DoubleDouble::new(z)).unwrap();
        assert!(dd.condition > 1e10);
        let exf = rational_to_f64(&ex);
        assert!(((dd.value.to_f64() - exf) / exf).abs() < 1e-6 * dd.condition * 1e-16 + 1e-12);
    }

    #[test]
    fn rational_conversion_handles_tiny_and_huge() {
        let tiny = exact(3.0e-250) * exact(1.0e-100);
        let v = rational_to_f64(&tiny);
        assert!(v == 0.0 || (v / 3.0e-350 - 1.0).abs() < 1e-12);
        let q = exact(1e300) / exact(7.0);
        assert!((rational_to_f64(&q) / (1e300 / 7.0) - 1.0).abs() < 1e-15);
    }
}

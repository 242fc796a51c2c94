//! Residual checks for the hypergeometric and Legendre identities the
//! Bargmann forms rely on.
//!
//! Hypergeometric sides are summed exactly, so a residual above round-off
//! means the identity (or our reading of its parameters) is wrong rather
//! than that the series lost digits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use super::gamma::{appell, double_factorial, log_gamma, ln_factorial};
use super::hypergeom::{exact, exact_sum_q, rational_to_f64};
use super::orthopoly::legendre_assoc;
use crate::error::Result;

fn resid(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(1.0)
}

fn q_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q_pow(x: &BigRational, n: i64) -> BigRational {
    if n >= 0 {
        num_traits::pow(x.clone(), n as usize)
    } else {
        num_traits::pow(x.clone(), (-n) as usize).recip()
    }
}

/// F[-m,b;c;z] against (1-z)^m F[-m, c-b; c; z/(z-1)].
pub fn check_transformation(m: u32, b: f64, c: f64, z: f64) -> Result<f64> {
    let (bq, cq, zq) = (exact(b), exact(c), exact(z));
    let lhs = exact_sum_q(m, &bq, &cq, &zq)?;
    let one = BigRational::one();
    let w = &zq / (&zq - &one);
    let rhs = q_pow(&(&one - &zq), m as i64) * exact_sum_q(m, &(&cq - &bq), &cq, &w)?;
    Ok(resid(rational_to_f64(&lhs), rational_to_f64(&rhs)))
}

/// F[-p, q+1/2; 1/2; x²] = (-)^q (2p)!!/(2q-1)!! (1-x²)^{(p-q)/2} P_{q+p}^{q-p}(x).
pub fn check_legendre_identity_even(p: u32, q: u32, x: f64) -> Result<f64> {
    let xq = exact(x);
    let lhs = exact_sum_q(p, &(q_int(q as i64) + q_half()), &q_half(), &(&xq * &xq))?;
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let pref = double_factorial(2 * p as i64) / double_factorial(2 * q as i64 - 1);
    let pw = (1.0 - x * x).powf((p as f64 - q as f64) / 2.0);
    let rhs = sign * pref * pw * legendre_assoc(q + p, q as i32 - p as i32, x)?;
    Ok(resid(rational_to_f64(&lhs), rhs))
}

/// F[-p, q+3/2; 3/2; x²] = (-)^q (2p)!!/(2q+1)!! x^{-1} (1-x²)^{(p-q)/2} P_{q+p+1}^{q-p}(x).
pub fn check_legendre_identity_odd(p: u32, q: u32, x: f64) -> Result<f64> {
    let xq = exact(x);
    let three_halves = q_int(3) * q_half();
    let lhs = exact_sum_q(p, &(q_int(q as i64) + &three_halves), &three_halves, &(&xq * &xq))?;
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let pref = double_factorial(2 * p as i64) / double_factorial(2 * q as i64 + 1);
    let pw = (1.0 - x * x).powf((p as f64 - q as f64) / 2.0) / x;
    let rhs = sign * pref * pw * legendre_assoc(q + p + 1, q as i32 - p as i32, x)?;
    Ok(resid(rational_to_f64(&lhs), rhs))
}

fn q_half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Gauss-type evaluation: F[-m,-m';1-m-m'-2k; 1+1/s] equals
/// Γ(m'+2k)Γ(m+2k)/(Γ(2k)Γ(m+m'+2k)) F[-m,-m';2k;-1/s].
pub fn check_gauss_shift(m: u32, mp: u32, k: f64, s: f64) -> Result<f64> {
    let sq = exact(s);
    let inv = sq.recip();
    let one = BigRational::one();
    let (a, b) = (m, -(mp as f64));
    let c = 1.0 - m as f64 - mp as f64 - 2.0 * k;
    let lhs = exact_sum_q(a, &exact(b), &exact(c), &(&one + &inv))?;
    let f = exact_sum_q(a, &exact(b), &exact(2.0 * k), &(-inv))?;
    let ln_pref = log_gamma(mp as f64 + 2.0 * k)? + log_gamma(m as f64 + 2.0 * k)?
        - log_gamma(2.0 * k)?
        - log_gamma((m + mp) as f64 + 2.0 * k)?;
    let rhs = ln_pref.exp() * rational_to_f64(&f);
    Ok(resid(rational_to_f64(&lhs), rhs))
}

/// Inversion F[-l,b;c;-y] = (b,l)/(c,l) y^l F[-l, 1-l-c; 1-l-b; -1/y].
pub fn check_inversion(l: u32, b: f64, c: f64, y: f64) -> Result<f64> {
    let (bq, cq, yq) = (exact(b), exact(c), exact(y));
    let lhs = exact_sum_q(l, &bq, &cq, &(-yq.clone()))?;
    let one_minus_l = q_int(1 - l as i64);
    let f = exact_sum_q(l, &(&one_minus_l - &cq), &(&one_minus_l - &bq), &(-yq.recip()))?;
    let rhs = rational_to_f64(&(q_pow(&yq, l as i64) * f)) * appell(b, l) / appell(c, l);
    Ok(resid(rational_to_f64(&lhs), rhs))
}

/// Specialisations of the inversion for the F of the general Bargmann
/// form: for m ≥ m'
/// F[-m,-m';1-m-m'-2k;(1+s)/s] = m!Γ(m+2k)/((m-m')!Γ(m+m'+2k)) (-s)^{-m'} F[-m',1-m'-2k;1+m-m';-s],
/// and the mirror statement with m and m' exchanged otherwise.
pub fn check_inversion_general(m: u32, mp: u32, k: f64, s: f64) -> Result<f64> {
    let sq = exact(s);
    let one = BigRational::one();
    let c = 1.0 - m as f64 - mp as f64 - 2.0 * k;
    let lhs = exact_sum_q(m, &exact(-(mp as f64)), &exact(c), &((&one + &sq) / &sq))?;
    let (hi, lo) = if m >= mp { (m, mp) } else { (mp, m) };
    let f = exact_sum_q(
        lo,
        &exact(1.0 - lo as f64 - 2.0 * k),
        &q_int(1 + hi as i64 - lo as i64),
        &(-sq.clone()),
    )?;
    let scaled = q_pow(&(-sq), -(lo as i64)) * f;
    let ln_pref = ln_factorial(hi) + log_gamma(hi as f64 + 2.0 * k)?
        - ln_factorial(hi - lo)
        - log_gamma((m + mp) as f64 + 2.0 * k)?;
    let rhs = ln_pref.exp() * rational_to_f64(&scaled);
    Ok(resid(rational_to_f64(&lhs), rhs))
}

/// Worst residual of one identity family over a randomized sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySweep {
    pub name: &'static str,
    pub samples: usize,
    pub skipped: usize,
    pub max_residual: f64,
}

impl IdentitySweep {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            samples: 0,
            skipped: 0,
            max_residual: 0.0,
        }
    }

    fn record(&mut self, r: Result<f64>) {
        match r {
            Ok(v) => {
                self.samples += 1;
                if !(v <= self.max_residual) {
                    self.max_residual = v;
                }
            }
            Err(_) => self.skipped += 1,
        }
    }
}

/// Randomized sweep of all identity families with indices up to `max_index`.
pub fn identity_sweeps<R: Rng>(rng: &mut R, samples: usize, max_index: u32) -> Vec<IdentitySweep> {
    let ks = [0.25, 0.75, 1.0, 2.5];
    let mut tr = IdentitySweep::new("transformation");
    let mut even = IdentitySweep::new("legendre_even");
    let mut odd = IdentitySweep::new("legendre_odd");
    let mut gauss = IdentitySweep::new("gauss_shift");
    let mut inv = IdentitySweep::new("inversion");
    let mut gen = IdentitySweep::new("inversion_general");
    for _ in 0..samples {
        let m = rng.gen_range(0..=max_index);
        let mp = rng.gen_range(0..=max_index);
        let b = rng.gen_range(-6.0..6.0);
        let c = rng.gen_range(0.3..8.0);
        let z = rng.gen_range(-0.9..0.45);
        tr.record(check_transformation(m, b, c, z));

        let x = rng.gen_range(0.05..0.95);
        even.record(check_legendre_identity_even(m, mp, x));
        odd.record(check_legendre_identity_odd(m, mp, x));

        let k = ks[rng.gen_range(0..ks.len())];
        let s = rng.gen_range(0.05..8.0);
        gauss.record(check_gauss_shift(m, mp, k, s));
        gen.record(check_inversion_general(m, mp, k, s));

        // the inversion needs (b, l) != 0
        let b = rng.gen_range(-6.0..6.0);
        let y = rng.gen_range(0.1..5.0);
        if appell(b, m).abs() > 1e-8 && appell(c, m) != 0.0 {
            inv.record(check_inversion(m, b, c, y));
        } else {
            inv.skipped += 1;
        }
    }
    vec![tr, even, odd, gauss, inv, gen]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_legendre_case() {
        assert!(check_legendre_identity_even(0, 0, 0.3).unwrap() < 1e-15);
    }

    #[test]
    fn legendre_example_values() {
        // F[-1,1/2;1/2;0.25] = 0.75 = 2·1·(0.75)^{1/2}·P_1^{-1}(0.5)
        let p11 = legendre_assoc(1, -1, 0.5).unwrap();
        assert!((2.0 * 0.75f64.sqrt() * p11 - 0.75).abs() < 1e-12);
        assert!(check_legendre_identity_even(1, 0, 0.5).unwrap() < 1e-12);
    }

    #[test]
    fn small_sweep_is_clean() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sweep in identity_sweeps(&mut rng, 40, 12) {
            assert!(sweep.max_residual <= 1e-10, "{sweep:?}");
            assert!(sweep.samples > 0);
        }
    }

    #[test]
    fn broken_identity_is_detected() {
        // drop the (1-z)^m factor: the residual must be large
        let lhs = rational_to_f64(&exact_sum_q(3, &exact(1.5), &exact(2.5), &exact(0.4)).unwrap());
        let w = exact(0.4) / (exact(0.4) - BigRational::one());
        let rhs = rational_to_f64(&exact_sum_q(3, &exact(1.0), &exact(2.5), &w).unwrap());
        assert!(resid(lhs, rhs) > 1e-2);
    }
}

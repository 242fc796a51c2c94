//! Matrix elements V_{m'm}(g) of SU(1,1) in the discrete series of Bargmann
//! index k, in several equivalent closed forms plus two series oracles.
//!
//! Every form takes its magnitudes from the single quantity s = |β|² and its
//! phases from the tracked branch θ of arg α, so ᾱ^p = (1+s)^{p/2} e^{-ipθ}.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{DisentangledParams, GroupElement};
use crate::specfun::{
    exact, exact_sum, ln_factorial, log_gamma, rational_to_f64, terminating_sum, DoubleDouble,
};

/// Condition number above which the double-double sum is replaced by an
/// exact one.
const DD_CONDITION_LIMIT: f64 = 1e22;

/// Terms allowed in the infinite antinormal series.
const MAX_SERIES_TERMS: usize = 100_000;

/// Closed forms and oracles selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    Standard,
    General,
    /// ₂F₁ at argument 1 + s.
    Alt,
    /// ₂F₁ at argument 1/(1 + s).
    AltInverse,
    Legendre,
    Series,
}

impl Form {
    pub const ALL: [Form; 6] = [
        Form::Standard,
        Form::General,
        Form::Alt,
        Form::AltInverse,
        Form::Legendre,
        Form::Series,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Form::Standard => "standard",
            Form::General => "general",
            Form::Alt => "alt",
            Form::AltInverse => "alt-inverse",
            Form::Legendre => "legendre",
            Form::Series => "series",
        }
    }

    pub fn parse(name: &str) -> Option<Form> {
        Form::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn evaluate(self, k: f64, mp: u32, m: u32, g: &GroupElement) -> Result<Complex64> {
        match self {
            Form::Standard => v_standard(k, mp, m, g),
            Form::General => v_general(k, mp, m, g),
            Form::Alt => v_alt(k, mp, m, g),
            Form::AltInverse => v_alt_inverse(k, mp, m, g),
            Form::Legendre => v_legendre(k, mp, m, g),
            Form::Series => {
                let p = crate::group::disentangle(g)?;
                v_series_oracle(k, mp, m, &p)
            }
        }
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("Bargmann index k = {k} must be positive")));
    }
    Ok(())
}

fn parity(n: u32) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn lgamma(x: f64) -> f64 {
    log_gamma(x).expect("positive argument")
}

/// ½ ln(m! Γ(m+2k)), the normalization of |k, m⟩ under the ladder operators.
fn half_ln_norm(k: f64, m: u32) -> f64 {
    0.5 * (ln_factorial(m) + lgamma(m as f64 + 2.0 * k))
}

/// Shared tail of all forms: builds sign·e^{ln_abs}·e^{i phase}.
fn assemble(ln_abs: f64, sign: f64, phase: f64) -> Complex64 {
    if ln_abs == f64::NEG_INFINITY || sign == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(sign * ln_abs.exp(), phase)
}

/// ln|x| and the sign of x.
fn ln_split(x: f64) -> (f64, f64) {
    if x == 0.0 {
        (f64::NEG_INFINITY, 0.0)
    } else {
        (x.abs().ln(), x.signum())
    }
}

/// Phase common to every form: (m+m'+2k)θ from ᾱ^{-(m+m'+2k)} and
/// (m'-m)·arg β.
fn common_phase(k: f64, mp: u32, m: u32, g: &GroupElement) -> f64 {
    let p = mp as f64 + m as f64 + 2.0 * k;
    let psi = if g.beta.norm_sqr() > 0.0 { g.beta_arg() } else { 0.0 };
    p * g.phase_branch + (mp as f64 - m as f64) * psi
}

fn s_exact(g: &GroupElement) -> BigRational {
    let s = g.s_dd();
    exact(s.hi) + exact(s.lo)
}

/// f·s^e without gcd reductions; the result only feeds a final rounding.
fn scale_by_power(f: BigRational, s: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return f;
    }
    let (num, den) = f.into_raw();
    let n = e.unsigned_abs() as usize;
    let (up, down) = (num_traits::pow(s.numer().clone(), n), num_traits::pow(s.denom().clone(), n));
    let (mut num, mut den) = if e > 0 { (num * up, den * down) } else { (num * down, den * up) };
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    BigRational::new_raw(num, den)
}

/// Standard form:
/// V = A ᾱ^{-(m+m'+2k)} β^{m'-m} F[-m, 1-m-2k; 1+m'-m; -s] for m' ≥ m and
/// the (-β̄)^{m-m'} mirror otherwise.
pub fn v_standard(k: f64, mp: u32, m: u32, g: &GroupElement) -> Result<Complex64> {
    check_k(k)?;
    let (hi, lo) = if mp >= m { (mp, m) } else { (m, mp) };
    let d = hi - lo;
    let s = g.s_dd();
    if s.is_zero() && d > 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let b = 1.0 - lo as f64 - 2.0 * k;
    let c = 1.0 + d as f64;
    let sum = terminating_sum(lo, b, c, -s)?;
    let f = if sum.condition > DD_CONDITION_LIMIT {
        rational_to_f64(&exact_sum(lo, b, c, &-(exact(s.hi) + exact(s.lo)))?)
    } else {
        sum.value.to_f64()
    };
    let (ln_f, sign_f) = ln_split(f);
    let s64 = s.to_f64();
    let ln_a = half_ln_norm(k, hi) - half_ln_norm(k, lo) - ln_factorial(d);
    let p = mp as f64 + m as f64 + 2.0 * k;
    let ln_s_part = if d == 0 { 0.0 } else { 0.5 * d as f64 * s64.ln() };
    let ln_abs = ln_a - 0.5 * p * s64.ln_1p() + ln_s_part + ln_f;
    let sign = sign_f * if mp >= m { 1.0 } else { parity(d) };
    Ok(assemble(ln_abs, sign, common_phase(k, mp, m, g)))
}

/// ln of Γ(m+m'+2k)/√(m! m'! Γ(m+2k) Γ(m'+2k)), the prefactor of the
/// general forms.
fn ln_pre_general(k: f64, mp: u32, m: u32) -> f64 {
    lgamma(m as f64 + mp as f64 + 2.0 * k) - half_ln_norm(k, m) - half_ln_norm(k, mp)
}

/// General form, valid for β ≠ 0:
/// V = pre ᾱ^{-(m+m'+2k)} β^{m'} (-β̄)^m F[-m, -m'; 1-m-m'-2k; (1+s)/s].
pub fn v_general(k: f64, mp: u32, m: u32, g: &GroupElement) -> Result<Complex64> {
    check_k(k)?;
    let s = s_exact(g);
    if s.is_zero() {
        return Err(Error::NotApplicable(
            "general form needs beta != 0 (argument (1+s)/s)".into(),
        ));
    }
    let lo = m.min(mp);
    let c = 1.0 - m as f64 - mp as f64 - 2.0 * k;
    let z = (BigRational::one() + &s) / &s;
    // F·s^lo stays O(1) as s → 0
    let f = scale_by_power(exact_sum(m, -(mp as f64), c, &z)?, &s, lo as i64);
    let (ln_f, sign_f) = ln_split(rational_to_f64(&f));
    let s64 = g.s();
    let p = mp as f64 + m as f64 + 2.0 * k;
    let d = (mp as f64 - m as f64).abs();
    let ln_abs = ln_pre_general(k, mp, m) - 0.5 * p * s64.ln_1p() + 0.5 * d * s64.ln() + ln_f;
    Ok(assemble(ln_abs, sign_f * parity(m), common_phase(k, mp, m, g)))
}

/// Rational s^{-(m-m')} correction so that F·s^{..} is finite when m > m'.
fn scale_for_negative_power(f: BigRational, s: &BigRational, mp: u32, m: u32) -> BigRational {
    if m > mp {
        scale_by_power(f, s, -((m - mp) as i64))
    } else {
        f
    }
}

/// Alternative form with argument 1 + s:
/// V = pre ᾱ^{-(m+m'+2k)} β^{m'-m} F[-m, 1-m-2k; 1-m-m'-2k; 1+s].
///
/// At β = 0 the factor β^{m'-m} is taken in the limit, which gives δ_{m'm}.
pub fn v_alt(k: f64, mp: u32, m: u32, g: &GroupElement) -> Result<Complex64> {
    check_k(k)?;
    let s = s_exact(g);
    if s.is_zero() && m != mp {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let b = 1.0 - m as f64 - 2.0 * k;
    let c = 1.0 - m as f64 - mp as f64 - 2.0 * k;
    let z = BigRational::one() + &s;
    let f = scale_for_negative_power(exact_sum(m, b, c, &z)?, &s, mp, m);
    let (ln_f, sign_f) = ln_split(rational_to_f64(&f));
    let s64 = g.s();
    let p = mp as f64 + m as f64 + 2.0 * k;
    let d = (mp as f64 - m as f64).abs();
    let ln_s_part = if d == 0.0 { 0.0 } else { 0.5 * d * s64.ln() };
    let ln_abs = ln_pre_general(k, mp, m) - 0.5 * p * s64.ln_1p() + ln_s_part + ln_f;
    Ok(assemble(ln_abs, sign_f, common_phase(k, mp, m, g)))
}

/// Alternative form with argument 1/(1+s):
/// V = (-1)^m/Γ(2k) √(Γ(m+2k)Γ(m'+2k)/(m! m'!)) ᾱ^{-(m'+2k)} α^m β^{m'-m}
///     F[-m, m'+2k; 2k; 1/(1+s)].
pub fn v_alt_inverse(k: f64, mp: u32, m: u32, g: &GroupElement) -> Result<Complex64> {
    check_k(k)?;
    let s = s_exact(g);
    if s.is_zero() && m != mp {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let z = (BigRational::one() + &s).recip();
    let f = exact_sum(m, mp as f64 + 2.0 * k, 2.0 * k, &z)?;
    let f = scale_for_negative_power(f, &s, mp, m);
    let (ln_f, sign_f) = ln_split(rational_to_f64(&f));
    let s64 = g.s();
    let d = (mp as f64 - m as f64).abs();
    let ln_pre = 0.5
        * (lgamma(m as f64 + 2.0 * k) + lgamma(mp as f64 + 2.0 * k)
            - ln_factorial(m)
            - ln_factorial(mp))
        - lgamma(2.0 * k);
    let ln_s_part = if d == 0.0 { 0.0 } else { 0.5 * d * s64.ln() };
    let ln_abs = ln_pre + 0.5 * (m as f64 - mp as f64 - 2.0 * k) * s64.ln_1p() + ln_s_part + ln_f;
    Ok(assemble(ln_abs, sign_f * parity(m), common_phase(k, mp, m, g)))
}

/// Legendre form for k = 1/4 and k = 3/4, the even and odd oscillator
/// sectors:
/// V = (-1)^{m+m'} √((2m+σ)!/(2m'+σ)!) |α|^{-1/2} e^{iθ(m+m'+2k)}
///     e^{-i arg β (m-m')} P_{m+m'+σ}^{m'-m}(1/|α|), with σ = 2k - ½.
pub fn v_legendre(k: f64, mp: u32, m: u32, g: &GroupElement) -> Result<Complex64> {
    let sigma = if k == 0.25 {
        0
    } else if k == 0.75 {
        1
    } else {
        return Err(Error::Domain(format!(
            "Legendre form needs k = 1/4 or k = 3/4, got {k}"
        )));
    };
    let s = g.s_dd();
    let one_plus = DoubleDouble::ONE + s;
    let cos = one_plus.sqrt().recip().to_f64();
    let sin = (s / one_plus).sqrt().to_f64();
    let order = mp as i32 - m as i32;
    let p = crate::specfun::legendre_assoc_sc(m + mp + sigma, order, cos, sin)?;
    let (ln_p, sign_p) = ln_split(p);
    let ln_abs = 0.5 * (ln_factorial(2 * m + sigma) - ln_factorial(2 * mp + sigma))
        - 0.25 * s.to_f64().ln_1p()
        + ln_p;
    Ok(assemble(ln_abs, sign_p * parity(m + mp), common_phase(k, mp, m, g)))
}

/// Oracle from the normal-ordered product e^{ξK₊} e^{-γK₀} e^{-ξ̄K₋} e^{iφK₀}
/// acting on the ladder basis; a finite sum over the intermediate level n.
pub fn v_series_oracle(k: f64, mp: u32, m: u32, p: &DisentangledParams) -> Result<Complex64> {
    check_k(k)?;
    let (hi, lo) = if mp >= m { (mp, m) } else { (m, mp) };
    let d = hi - lo;
    let x2 = p.xi_abs2;
    let sp = DoubleDouble::ONE - x2; // e^{-γ}
    if x2.is_zero() && d > 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let f = ladder_sum(k, mp, m, x2, sp);
    let (ln_f, sign_f) = ln_split(f);
    let ln_xi = if d == 0 { 0.0 } else { 0.5 * d as f64 * x2.to_f64().ln() };
    let ln_t_lo = ln_xi
        + (lo as f64 + k) * sp.to_f64().ln()
        - ln_factorial(d)
        - ln_factorial(lo)
        - lgamma(lo as f64 + 2.0 * k)
        + half_ln_norm(k, m)
        + half_ln_norm(k, mp);
    let chi = if x2.is_zero() { 0.0 } else { p.xi.arg() };
    let phase = (m as f64 + k) * p.phi + (mp as f64 - m as f64) * chi;
    Ok(assemble(ln_t_lo + ln_f, sign_f * parity(m - lo), phase))
}

/// Σ_n t_n/t_lo of the normal-ordered ladder sum, n = lo down to 0, with
/// t_{n-1}/t_n = -(|ξ|²/(1-|ξ|²)) n(n-1+2k)/((m-n+1)(m'-n+1)).
/// Falls back to exact arithmetic when the alternating sum is too
/// ill-conditioned for double-double.
fn ladder_sum(k: f64, mp: u32, m: u32, x2: DoubleDouble, sp: DoubleDouble) -> f64 {
    let lo = m.min(mp);
    let ratio = |n: u32| {
        let nf = n as f64;
        (nf * (nf - 1.0 + 2.0 * k), (m - n + 1) as f64 * (mp - n + 1) as f64)
    };
    let r = x2 / sp;
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut abs_sum = 1.0;
    for n in (1..=lo).rev() {
        let (num, den) = ratio(n);
        term = -(term * r * num / DoubleDouble::new(den));
        sum = sum + term;
        abs_sum += term.to_f64().abs();
    }
    if abs_sum <= DD_CONDITION_LIMIT * sum.to_f64().abs() {
        return sum.to_f64();
    }
    let x2q = exact(x2.hi) + exact(x2.lo);
    let rq = &x2q / (BigRational::one() - &x2q);
    let two_k = exact(2.0 * k);
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for n in (1..=lo).rev() {
        let nq = BigRational::from_integer(n.into());
        let den = BigRational::from_integer(((m - n + 1) as u64 * (mp - n + 1) as u64).into());
        term = -(term * &rq * &nq * (&nq - BigRational::one() + &two_k)) / den;
        sum += &term;
    }
    rational_to_f64(&sum)
}

/// Oracle from the antinormal product e^{-ξ̄K₋} e^{γK₀} e^{ξK₊} e^{iφK₀};
/// an infinite series that converges only for |ξ|² < 1/2.
pub fn v_series_antinormal(k: f64, mp: u32, m: u32, p: &DisentangledParams, tol: f64) -> Result<Complex64> {
    check_k(k)?;
    let x2 = p.xi_abs2;
    // |ξ|² e^{γ} = |ξ|²/(1-|ξ|²)
    let ratio = x2 / (DoubleDouble::ONE - x2);
    if !(ratio.to_f64() < 1.0) {
        return Err(Error::Convergence { terms: 0 });
    }
    let x2 = x2.to_f64();
    // q counts K₊ steps; the intermediate level is N = m + q and
    // q - (N - m') = m' - m is fixed
    let q0 = mp.saturating_sub(m);
    let n0 = m + q0;
    let pw0 = n0 - mp;
    if x2 == 0.0 && (q0 > 0 || pw0 > 0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ln_first = 0.5 * (q0 + pw0) as f64 * if q0 + pw0 > 0 { x2.ln() } else { 0.0 }
        - ln_factorial(q0)
        - ln_factorial(pw0)
        + ln_factorial(n0)
        + lgamma(n0 as f64 + 2.0 * k)
        - half_ln_norm(k, m)
        - half_ln_norm(k, mp)
        + p.gamma * (n0 as f64 + k);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut converged = false;
    for j in 1..MAX_SERIES_TERMS {
        let q = (q0 as usize + j) as f64;
        let pw = (pw0 as usize + j) as f64;
        let n = (n0 as usize + j) as f64;
        // (-ξ̄)^p ξ^q: one more of each; N!Γ(N+2k) grows by N(N-1+2k)
        term = -(term * ratio * (n * (n - 1.0 + 2.0 * k)) / DoubleDouble::new(q * pw));
        sum = sum + term;
        if term.to_f64().abs() <= tol * sum.to_f64().abs() {
            converged = true;
            break;
        }
        if !term.to_f64().is_finite() {
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            terms: MAX_SERIES_TERMS,
        });
    }
    let (ln_f, sign_f) = ln_split(sum.to_f64());
    let chi = if x2 == 0.0 { 0.0 } else { p.xi.arg() };
    let phase = (m as f64 + k) * p.phi + (mp as f64 - m as f64) * chi;
    Ok(assemble(ln_first + ln_f, sign_f * parity(pw0), phase))
}

/// Relative deviation |a-b|/max(|a|,|b|), zero when both vanish.
pub fn rel_deviation(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Truncated Bargmann matrix V_{m'm}, 0 ≤ m, m' < n.
#[derive(Debug, Clone)]
pub struct BargmannMatrix {
    pub k: f64,
    pub n: usize,
    /// Row-major: `entries[m' * n + m]`.
    pub entries: Vec<Complex64>,
    /// 1 - Σ_{m'<n} |V_{m'm}|² per column m.
    pub tails: Vec<f64>,
    /// True when some column tail exceeds the tolerance.
    pub truncated: bool,
}

impl BargmannMatrix {
    pub fn get(&self, mp: usize, m: usize) -> Complex64 {
        self.entries[mp * self.n + m]
    }

    /// Running sums Σ_{m'≤j} |V_{m'm}|², j = 0..n.
    pub fn column_partial_sums(&self, m: usize) -> Vec<f64> {
        let mut acc = 0.0;
        (0..self.n)
            .map(|mp| {
                acc += self.get(mp, m).norm_sqr();
                acc
            })
            .collect()
    }
}

/// Builds the n×n matrix with the standard form, entries in parallel.
pub fn build_matrix(k: f64, g: &GroupElement, n: usize, tail_tol: f64) -> Result<BargmannMatrix> {
    build_matrix_form(Form::Standard, k, g, n, tail_tol)
}

/// Same as [`build_matrix`] with any of the closed forms or the oracle.
pub fn build_matrix_form(form: Form, k: f64, g: &GroupElement, n: usize, tail_tol: f64) -> Result<BargmannMatrix> {
    check_k(k)?;
    if n == 0 {
        return Err(Error::Domain("truncation size must be positive".into()));
    }
    let entries = (0..n * n)
        .into_par_iter()
        .map(|idx| form.evaluate(k, (idx / n) as u32, (idx % n) as u32, g))
        .collect::<Result<Vec<_>>>()?;
    let mut mat = BargmannMatrix {
        k,
        n,
        entries,
        tails: Vec::new(),
        truncated: false,
    };
    mat.tails = (0..n)
        .map(|m| 1.0 - mat.column_partial_sums(m)[n - 1])
        .collect();
    mat.truncated = mat.tails.iter().any(|t| *t > tail_tol);
    Ok(mat)
}

/// Transition probability |V_{m'm}|².
pub fn transition_probability(k: f64, mp: u32, m: u32, g: &GroupElement) -> Result<f64> {
    v_standard(k, mp, m, g).map(|v| v.norm_sqr())
}

/// Oscillator level of Bargmann level m: 2m for k = 1/4, 2m+1 for k = 3/4.
pub fn oscillator_level(k: f64, m: u32) -> Option<u32> {
    if k == 0.25 {
        Some(2 * m)
    } else if k == 0.75 {
        Some(2 * m + 1)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn derived_element() -> GroupElement {
        // |α|² = 9/8, |β|² = 1/8
        GroupElement::from_polar(0.125, 0.0, 0.0)
    }

    #[test]
    fn identity_gives_delta() {
        let g = GroupElement::identity();
        for form in [Form::Standard, Form::Alt, Form::AltInverse, Form::Series] {
            for mp in 0..6 {
                for m in 0..6 {
                    let v = form.evaluate(0.7, mp, m, &g).unwrap();
                    let want = if m == mp { 1.0 } else { 0.0 };
                    assert!((v - want).norm() < 1e-13, "{} {mp} {m} {v}", form.name());
                }
            }
        }
        assert!(matches!(v_general(0.7, 1, 1, &g), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn ground_state_is_alpha_bar_power() {
        let g = GroupElement::from_polar(0.8, 0.9, -0.4);
        let k = 1.3;
        let v = v_standard(k, 0, 0, &g).unwrap();
        assert!((v - g.alpha_bar_pow(-2.0 * k)).norm() < 1e-14);
    }

    #[test]
    fn forms_agree_on_derived_element() {
        let g = derived_element();
        for &k in &[0.25, 0.75] {
            for mp in 0..12 {
                for m in 0..12 {
                    let a = v_standard(k, mp, m, &g).unwrap();
                    for form in [Form::General, Form::Alt, Form::AltInverse, Form::Legendre, Form::Series] {
                        let b = form.evaluate(k, mp, m, &g).unwrap();
                        assert!(rel_deviation(a, b) < 1e-10, "{} k={k} {mp} {m}: {a} {b}", form.name());
                    }
                }
            }
        }
    }

    #[test]
    fn forms_agree_with_phases() {
        let g = GroupElement::from_polar(2.7, 1.1 + 4.0 * std::f64::consts::PI, -2.3);
        for &k in &[0.25, 0.75, 1.0, 2.5, 0.4] {
            for mp in 0..15 {
                for m in 0..15 {
                    let a = v_standard(k, mp, m, &g).unwrap();
                    for form in [Form::General, Form::Alt, Form::AltInverse, Form::Series] {
                        let b = form.evaluate(k, mp, m, &g).unwrap();
                        assert!(rel_deviation(a, b) < 1e-10, "{} k={k} {mp} {m}: {a} {b}", form.name());
                    }
                }
            }
        }
    }

    #[test]
    fn antinormal_series_matches_when_convergent() {
        let g = GroupElement::from_polar(0.3, 0.5, 1.2);
        let p = crate::group::disentangle(&g).unwrap();
        for mp in 0..5 {
            for m in 0..5 {
                let a = v_standard(0.6, mp, m, &g).unwrap();
                let b = v_series_antinormal(0.6, mp, m, &p, 1e-17).unwrap();
                assert!(rel_deviation(a, b) < 1e-10, "{mp} {m}: {a} {b}");
            }
        }
        let far = crate::group::disentangle(&GroupElement::from_polar(3.0, 0.0, 0.0)).unwrap();
        assert!(matches!(
            v_series_antinormal(0.6, 0, 0, &far, 1e-15),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn columns_are_normalized() {
        let g = derived_element();
        let mat = build_matrix(0.75, &g, 64, 1e-8).unwrap();
        for m in 0..10 {
            assert!(mat.tails[m].abs() < 1e-10, "column {m}: {}", mat.tails[m]);
        }
        assert!(!mat.truncated || mat.tails.iter().any(|t| *t > 1e-8));
    }

    #[test]
    fn oscillator_levels() {
        assert_eq!(oscillator_level(0.25, 3), Some(6));
        assert_eq!(oscillator_level(0.75, 3), Some(7));
        assert_eq!(oscillator_level(1.0, 3), None);
    }
}

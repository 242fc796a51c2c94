//! Adaptive Gauss–Legendre quadrature on [0, X] for integrands with an
//! integrable power-law endpoint at 0 and Gaussian or exponential decay.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

const LOW_ORDER: usize = 15;
const HIGH_ORDER: usize = 30;
const MAX_DEPTH: u32 = 60;
/// Panels narrower than this, relative to their position, are limited by
/// rounding in the integrand and are accepted as they are.
const ROUNDOFF_WIDTH: f64 = 1e-11;
/// Work limit per call, in accepted or split panels.
const MAX_PANELS: usize = 200_000;
/// Number of geometric grading levels toward the origin.
const GRADING_LEVELS: i32 = 40;

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn rule(order: usize) -> Rule {
    let q = GaussLegendre::new(NonZeroUsize::new(order).expect("positive order"));
    let (nodes, weights) = q.iter().map(|(x, w)| (*x, *w)).unzip();
    Rule { nodes, weights }
}

fn rules() -> &'static (Rule, Rule) {
    static RULES: OnceLock<(Rule, Rule)> = OnceLock::new();
    RULES.get_or_init(|| (rule(LOW_ORDER), rule(HIGH_ORDER)))
}

fn apply<F: Fn(f64) -> Complex64>(r: &Rule, f: &F, a: f64, b: f64) -> Complex64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in r.nodes.iter().zip(&r.weights) {
        acc += f(mid + half * x) * *w;
    }
    acc * half
}

/// ∫_a^b f by recursive bisection, comparing 15- and 30-point rules.
/// `abs_tol` is the error budget for the whole interval, shared by width.
/// Bisection stops early where the panel is too narrow to resolve, since
/// there the rule difference is rounding noise.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<Complex64> {
    let (lo, hi) = rules();
    let width = b - a;
    let mut stack = vec![(a, b, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut panels = 0usize;
    while let Some((a, b, depth)) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::Quadrature(format!("more than {MAX_PANELS} panels needed on [{a:e}, {b:e}]")));
        }
        let coarse = apply(lo, f, a, b);
        let fine = apply(hi, f, a, b);
        if !fine.re.is_finite() || !fine.im.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand on [{a:e}, {b:e}]")));
        }
        let narrow = b - a <= ROUNDOFF_WIDTH * a.abs().max(b.abs());
        if (fine - coarse).norm() <= abs_tol * (b - a) / width || narrow {
            total += fine;
        } else if depth >= MAX_DEPTH {
            return Err(Error::Quadrature(format!(
                "no convergence on [{a:e}, {b:e}] after {MAX_DEPTH} bisections"
            )));
        } else {
            let mid = 0.5 * (a + b);
            stack.push((a, mid, depth + 1));
            stack.push((mid, b, depth + 1));
        }
    }
    Ok(total)
}

/// ∫_0^cutoff f(x) dx for f behaving like x^p near the origin, p > -1.
///
/// Substitutes x = y^q with q(p+1) ≥ 2, so the transformed integrand
/// vanishes at y = 0, then grades panels geometrically toward the origin.
/// `rel_tol` is relative to the integral of |f| on the same panels.
pub fn integrate_half_line<F: Fn(f64) -> Complex64>(f: F, p: f64, cutoff: f64, rel_tol: f64) -> Result<Complex64> {
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::Quadrature(format!("invalid cutoff {cutoff}")));
    }
    if !(p > -1.0) {
        return Err(Error::Quadrature(format!("endpoint power {p} is not integrable")));
    }
    let q = (2.0 / (p + 1.0)).max(2.0);
    let g = |y: f64| {
        if y == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        f(y.powf(q)) * (q * y.powf(q - 1.0))
    };
    let y_max = cutoff.powf(1.0 / q);
    let mut breaks: Vec<f64> = (0..GRADING_LEVELS).map(|j| y_max * 0.5f64.powi(j)).collect();
    breaks.push(0.0);
    breaks.reverse();
    let (_, hi) = rules();
    let scale: f64 = breaks
        .windows(2)
        .map(|w| apply(hi, &|y: f64| Complex64::new(g(y).norm(), 0.0), w[0], w[1]).re)
        .sum();
    if !scale.is_finite() {
        return Err(Error::Quadrature("integrand magnitude is not finite".into()));
    }
    if scale == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let abs_tol = rel_tol * scale;
    let mut total = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        total += integrate_adaptive(&g, w[0], w[1], abs_tol * (w[1] - w[0]) / y_max)?;
    }
    Ok(total)
}

/// Smallest X beyond the peak of x^p e^{-c x²} where the envelope has
/// fallen by the factor `rel` relative to its maximum.
pub fn gaussian_cutoff(p: f64, c: f64, rel: f64) -> f64 {
    let ln_env = |x: f64| p * x.ln() - c * x * x;
    let peak = if p > 0.0 { (p / (2.0 * c)).sqrt() } else { 1.0 / c.sqrt() };
    let target = ln_env(peak) + rel.ln();
    let mut x = peak.max(1.0 / c.sqrt());
    while ln_env(x) > target {
        x *= 1.25;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_half_line() {
        let v = integrate_half_line(|x| Complex64::new((-x * x).exp(), 0.0), 0.0, gaussian_cutoff(0.0, 1.0, 1e-20), 1e-13)
            .unwrap();
        assert!((v.re - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn unresolvable_tolerance_is_reported() {
        let f = |x: f64| Complex64::new((1e3 * x).sin(), 0.0);
        assert!(matches!(integrate_adaptive(&f, 0.0, 1.0, 1e-40), Err(Error::Quadrature(_))));
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        // ∫_0^∞ x^{-1/2} e^{-x} dx = √π
        let v = integrate_half_line(|x| Complex64::new((-x).exp() / x.sqrt(), 0.0), -0.5, 60.0, 1e-13).unwrap();
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-12, "{}", v.re);
    }

    #[test]
    fn stronger_endpoint_singularity() {
        // ∫_0^∞ x^{-0.9} e^{-x} dx = Γ(0.1)
        let v = integrate_half_line(|x| Complex64::new((-x).exp() * x.powf(-0.9), 0.0), -0.9, 60.0, 1e-12).unwrap();
        let want = crate::specfun::gamma(0.1).unwrap();
        assert!((v.re - want).abs() < 1e-10 * want, "{} {want}", v.re);
    }
}

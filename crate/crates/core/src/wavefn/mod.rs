//! Wave functions of the harmonic oscillator with an inverse-square
//! interaction on the half-line: stationary states, their unitary
//! evolution along a classical trajectory, overlaps with the Bargmann
//! functions, and a finite-difference check of the Schrödinger equation.

pub mod quad;

use num_complex::Complex64;

use crate::bargmann::v_standard;
use crate::classical::ClassicalTrajectory;
use crate::coeffs::{CoefficientProfile, Constants};
use crate::error::{Error, Result};
use crate::group::group_element_at;
use crate::specfun::{laguerre, ln_factorial, log_gamma, terminating_sum};

pub use quad::{gaussian_cutoff, integrate_adaptive, integrate_half_line};

/// Envelope drop at which half-line integrals are truncated.
const CUTOFF_REL: f64 = 1e-22;

/// g = 2(k - 1/4)(k - 3/4), the inverse-square coupling of index k.
pub fn coupling(k: f64) -> f64 {
    2.0 * (k - 0.25) * (k - 0.75)
}

/// Sign convention of the stationary states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// φ_n^{s-}, positive leading Laguerre coefficient at the origin.
    SMinus,
    /// ⟨x|n, k⟩ e^{-2i(n+k)w_c t} = (-1)^n φ_n^{s-}.
    Basis,
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    Ok(())
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("Bargmann index k = {k} must be positive")));
    }
    Ok(())
}

/// ½ ln(n!/Γ(n+2k)).
fn half_ln_ratio(k: f64, n: u32) -> f64 {
    0.5 * (ln_factorial(n) - log_gamma(n as f64 + 2.0 * k).expect("positive argument"))
}

/// Real radial profile y^{k-1/4} e^{-y/2} L_n^{2k-1}(y) times the
/// normalization, with y = c x²/ħ; shared by both wave functions.
fn radial(k: f64, n: u32, c: f64, hbar: f64, x: f64) -> f64 {
    let y = c * x * x / hbar;
    let ln_env = 0.25 * (4.0 * c / hbar).ln() + half_ln_ratio(k, n) + (k - 0.25) * y.ln();
    ln_env.exp() * laguerre(n, 2.0 * k - 1.0, y)
}

/// φ_n^{s-}(k; x, t) = (4w_c/ħ)^{1/4} (n!/Γ(n+2k))^{1/2} e^{-2i(n+k)w_c t}
/// (w_c x²/ħ)^{k-1/4} e^{-w_c x²/2ħ} L_n^{2k-1}(w_c x²/ħ).
pub fn phi_stationary(k: f64, n: u32, c: &Constants, x: f64, t: f64, conv: Convention) -> Result<Complex64> {
    check_k(k)?;
    check_x(x)?;
    let y = c.w_c * x * x / c.hbar;
    let amp = radial(k, n, c.w_c, c.hbar, x) * (-0.5 * y).exp();
    let sign = match conv {
        Convention::Basis if n % 2 == 1 => -1.0,
        _ => 1.0,
    };
    Ok(Complex64::from_polar(sign * amp, -2.0 * (n as f64 + k) * c.w_c * t))
}

/// Trajectory data entering the evolved wave function at one grid index.
#[derive(Debug, Clone, Copy)]
struct Snapshot {
    /// Ω/ρ², the Gaussian width.
    width: f64,
    /// Im part of the Gaussian exponent coefficient, M ρ̇/ρ + 2Ma.
    chirp: f64,
    tau: f64,
}

fn snapshot(traj: &ClassicalTrajectory, profile: &CoefficientProfile, i: usize) -> Result<Snapshot> {
    if i >= traj.len() {
        return Err(Error::Domain(format!("grid index {i} out of range (len {})", traj.len())));
    }
    let a = profile.eval(traj.t[i])?.a;
    let (rho, m) = (traj.rho[i], traj.mass[i]);
    Ok(Snapshot {
        width: traj.omega / (rho * rho),
        chirp: m * traj.drho[i] / rho + 2.0 * m * a,
        tau: traj.tau[i],
    })
}

fn phi_evolved_at(k: f64, n: u32, hbar: f64, s: &Snapshot, x: f64) -> Complex64 {
    let amp = radial(k, n, s.width, hbar, x);
    let q = x * x / (2.0 * hbar);
    // exp[-(x²/2ħ)(Ω/ρ² - i(Mρ̇/ρ + 2Ma))] e^{-2i(n+k)τ}
    let phase = q * s.chirp - 2.0 * (n as f64 + k) * s.tau;
    Complex64::from_polar(amp * (-q * s.width).exp(), phase)
}

/// φ_n^-(k; x, t_i): the stationary state carried along the trajectory by
/// the unitary relation.
pub fn phi_evolved(
    k: f64,
    traj: &ClassicalTrajectory,
    profile: &CoefficientProfile,
    n: u32,
    x: f64,
    i: usize,
) -> Result<Complex64> {
    check_k(k)?;
    check_x(x)?;
    let s = snapshot(traj, profile, i)?;
    Ok(phi_evolved_at(k, n, traj.constants.hbar, &s, x))
}

/// ∫_0^∞ φ̄_m^{s-} φ_n^- dx at grid index `i`, by adaptive quadrature.
pub fn overlap_quadrature(
    k: f64,
    m: u32,
    n: u32,
    traj: &ClassicalTrajectory,
    profile: &CoefficientProfile,
    i: usize,
) -> Result<Complex64> {
    check_k(k)?;
    let c = traj.constants;
    let s = snapshot(traj, profile, i)?;
    let t = traj.t[i];
    let f = |x: f64| {
        let a = phi_stationary(k, m, &c, x, t, Convention::SMinus).expect("x > 0");
        a.conj() * phi_evolved_at(k, n, c.hbar, &s, x)
    };
    let decay = 0.5 * (c.w_c + s.width) / c.hbar;
    let p = 4.0 * k - 1.0;
    let cutoff = gaussian_cutoff(p + 2.0 * (m + n) as f64, decay, CUTOFF_REL);
    integrate_half_line(f, p, cutoff, 1e-12)
}

/// ∫_0^∞ |φ|² dx of a wave function given pointwise.
pub fn norm_quadrature<F: Fn(f64) -> Complex64>(phi: F, k: f64, n: u32, width: f64) -> Result<f64> {
    let cutoff = gaussian_cutoff(4.0 * k - 1.0 + 4.0 * n as f64, width, CUTOFF_REL);
    integrate_half_line(|x| Complex64::new(phi(x).norm_sqr(), 0.0), 4.0 * k - 1.0, cutoff, 1e-13).map(|v| v.re)
}

/// Even simple-oscillator eigenfunction written with Hermite polynomials,
/// (-1)^n (2√w_c/(2^{2n}(2n)!√(πħ)))^{1/2} e^{-2i(n+1/4)w_c t}
/// e^{-w_c x²/2ħ} H_{2n}(√(w_c/ħ) x), which should coincide with
/// φ_n^{s-} at k = 1/4.
pub fn hermite_even_state(n: u32, c: &Constants, x: f64, t: f64) -> Complex64 {
    let y = (c.w_c / c.hbar).sqrt() * x;
    // physicists' Hermite polynomials, H_{j+1} = 2yH_j - 2jH_{j-1}
    let (mut h_prev, mut h) = (0.0, 1.0);
    for j in 0..2 * n {
        let next = 2.0 * y * h - 2.0 * j as f64 * h_prev;
        h_prev = h;
        h = next;
    }
    let ln_norm = 0.5
        * ((2.0 * c.w_c.sqrt()).ln()
            - (2 * n) as f64 * std::f64::consts::LN_2
            - ln_factorial(2 * n)
            - 0.5 * (std::f64::consts::PI * c.hbar).ln());
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let amp = sign * ln_norm.exp() * (-0.5 * y * y).exp() * h;
    Complex64::from_polar(amp, -2.0 * (n as f64 + 0.25) * c.w_c * t)
}

/// |⟨φ_0(w1)|φ_0(w0)⟩|² for the ground states of index k of two
/// oscillators, by quadrature. This is the sudden-jump survival
/// probability of the ground state.
pub fn ground_overlap_probability(k: f64, w0: f64, w1: f64, hbar: f64) -> Result<f64> {
    let c0 = Constants::new(w0, hbar, k)?;
    let c1 = Constants::new(w1, hbar, k)?;
    let f = |x: f64| {
        let a = phi_stationary(k, 0, &c0, x, 0.0, Convention::SMinus).expect("x > 0");
        let b = phi_stationary(k, 0, &c1, x, 0.0, Convention::SMinus).expect("x > 0");
        a * b
    };
    let p = 4.0 * k - 1.0;
    let cutoff = gaussian_cutoff(p, 0.5 * (w0 + w1) / hbar, CUTOFF_REL);
    integrate_half_line(f, p, cutoff, 1e-14).map(|v| v.norm_sqr())
}

/// Closed form of ∫_0^∞ e^{-bx} x^α L_n^α(λx) L_m^α(μx) dx:
/// Γ(m+n+α+1)/(m! n!) (b-λ)^n (b-μ)^m / b^{m+n+α+1}
///   × F[-m, -n; -m-n-α; b(b-λ-μ)/((b-λ)(b-μ))].
///
/// The hypergeometric sum is expanded term by term against the
/// (b-λ)^n (b-μ)^m prefactor, so b = λ or b = μ needs no special case.
pub fn laguerre_integral_closed(
    b: Complex64,
    lambda: Complex64,
    mu: Complex64,
    alpha: f64,
    n: u32,
    m: u32,
) -> Result<Complex64> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must exceed -1")));
    }
    if !(b.re > 0.0) {
        return Err(Error::Domain(format!("Re b = {} must be positive", b.re)));
    }
    let c = -(m as f64) - n as f64 - alpha;
    // c + s stays negative for s < min(m, n) when α > -1; the shared
    // series code still guards the pole
    terminating_sum(m.min(n), -(m.max(n) as f64), c, 0.0)?;
    let bl = b - lambda;
    let bm = b - mu;
    let w = b * (b - lambda - mu);
    let mut coef = 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=m.min(n) {
        if j > 0 {
            let s = (j - 1) as f64;
            coef *= (s - m as f64) * (s - n as f64) / ((c + s) * (s + 1.0));
        }
        acc += w.powu(j) * bl.powu(n - j) * bm.powu(m - j) * coef;
    }
    let ln_pre = log_gamma(m as f64 + n as f64 + alpha + 1.0)? - ln_factorial(m) - ln_factorial(n);
    let denom = b.powf(m as f64 + n as f64 + alpha + 1.0);
    Ok(acc * ln_pre.exp() / denom)
}

/// Options for [`schrodinger_residual`].
#[derive(Debug, Clone, Copy)]
pub struct ResidualOptions {
    /// Step of the centered x-differences.
    pub dx: f64,
    /// Number of stationary states kept in the expansion.
    pub truncation: u32,
    /// Multiplies the a(t) term; 1 is the true equation, -1 a mutation.
    pub a_sign: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            dx: 1e-3,
            truncation: 64,
            a_sign: 1.0,
        }
    }
}

/// φ_n = Σ_m V_{m,n} φ_m^{s-} at grid index `i` (no (-1)^{n+m}); this is
/// the state that evolves under the equation checked by
/// [`schrodinger_residual`].
pub fn phi_tilde(
    k: f64,
    traj: &ClassicalTrajectory,
    profile: &CoefficientProfile,
    n: u32,
    i: usize,
    truncation: u32,
) -> Result<impl Fn(f64) -> Result<Complex64>> {
    let g = group_element_at(traj, i, profile)?;
    let coeffs = (0..truncation)
        .map(|m| v_standard(k, m, n, &g))
        .collect::<Result<Vec<_>>>()?;
    let c = traj.constants;
    let t = traj.t[i];
    Ok(move |x: f64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, v) in coeffs.iter().enumerate() {
            acc += v * phi_stationary(k, m as u32, &c, x, t, Convention::SMinus)?;
        }
        Ok(acc)
    })
}

/// Scale-normalized residual of
/// iħ∂_tφ = (M/8w_c²)(A₀²-A₁²)(-ħ²∂_x² + 2għ²/x²)φ + (w_c²x²/2M)φ - iħa(2x∂_x + 1)φ
/// over the grid indices with t in `window` and the points `x_grid`.
///
/// Derivatives are centered differences: in t over the trajectory grid,
/// in x with step `opts.dx`. The result is max|LHS - RHS| divided by
/// max|ħ∂_tφ| over the same samples.
pub fn schrodinger_residual(
    k: f64,
    traj: &ClassicalTrajectory,
    profile: &CoefficientProfile,
    n: u32,
    x_grid: &[f64],
    window: (f64, f64),
    opts: &ResidualOptions,
) -> Result<f64> {
    check_k(k)?;
    if let Some(x) = x_grid.iter().find(|x| !(**x > opts.dx)) {
        return Err(Error::Domain(format!("x = {x} is not an interior point for dx = {}", opts.dx)));
    }
    let c = traj.constants;
    let (hbar, w_c) = (c.hbar, c.w_c);
    let g2 = 2.0 * coupling(k) * hbar * hbar;
    let jumps = profile.jump_times();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut used = 0usize;
    for i in 1..traj.len().saturating_sub(1) {
        let (tm, t0, tp) = (traj.t[i - 1], traj.t[i], traj.t[i + 1]);
        if t0 < window.0 || t0 > window.1 || jumps.iter().any(|&tj| tj > tm && tj < tp) {
            continue;
        }
        let prev = phi_tilde(k, traj, profile, n, i - 1, opts.truncation)?;
        let cur = phi_tilde(k, traj, profile, n, i, opts.truncation)?;
        let next = phi_tilde(k, traj, profile, n, i + 1, opts.truncation)?;
        let co = profile.eval(t0)?;
        let mass = traj.mass[i];
        let (hm, hp) = (t0 - tm, tp - t0);
        for &x in x_grid {
            let (fm, f0, fp) = (prev(x)?, cur(x)?, next(x)?);
            let dt = (fp * (hm * hm) - fm * (hp * hp) + f0 * (hp * hp - hm * hm)) / (hm * hp * (hm + hp));
            let (xm, xp) = (cur(x - opts.dx)?, cur(x + opts.dx)?);
            let dxf = (xp - xm) / (2.0 * opts.dx);
            let dxx = (xp - f0 * 2.0 + xm) / (opts.dx * opts.dx);
            let lhs = Complex64::i() * hbar * dt;
            let kinetic = mass / (8.0 * w_c * w_c) * (co.a0 * co.a0 - co.a1 * co.a1);
            let rhs = (dxx * (-hbar * hbar) + f0 * (g2 / (x * x))) * kinetic
                + f0 * (w_c * w_c * x * x / (2.0 * mass))
                - Complex64::i() * (opts.a_sign * co.a * hbar) * (dxf * (2.0 * x) + f0);
            worst = worst.max((lhs - rhs).norm());
            scale = scale.max((hbar * dt).norm());
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::Grid("no interior grid points inside the time window".into()));
    }
    Ok(worst / scale)
}

/// Wave function sampled on a radial grid.
#[derive(Debug, Clone)]
pub struct RadialWaveFunction {
    pub k: f64,
    pub n: u32,
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub t: f64,
    pub constants: Constants,
}

/// x_j = j x_max / n_points, j = 1..=n_points.
pub fn radial_grid(x_max: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(x_max > 0.0) || n_points < 2 {
        return Err(Error::Grid(format!(
            "grid needs x_max > 0 and at least two points, got {x_max} and {n_points}"
        )));
    }
    Ok((1..=n_points).map(|j| j as f64 * x_max / n_points as f64).collect())
}

impl RadialWaveFunction {
    pub fn stationary(k: f64, n: u32, constants: Constants, t: f64, grid: Vec<f64>) -> Result<Self> {
        let values = grid
            .iter()
            .map(|&x| phi_stationary(k, n, &constants, x, t, Convention::SMinus))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            k,
            n,
            grid,
            values,
            t,
            constants,
        })
    }

    pub fn evolved(
        k: f64,
        traj: &ClassicalTrajectory,
        profile: &CoefficientProfile,
        n: u32,
        i: usize,
        grid: Vec<f64>,
    ) -> Result<Self> {
        let values = grid
            .iter()
            .map(|&x| phi_evolved(k, traj, profile, n, x, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            k,
            n,
            grid,
            values,
            t: traj.t[i],
            constants: traj.constants,
        })
    }

    /// Trapezoid rule for ∫|φ|² over the grid. The piece from the origin to
    /// the first point uses |φ|² ∝ x^{4k-1} there, which integrates to
    /// x₁|φ(x₁)|²/4k.
    pub fn norm_trapezoid(&self) -> f64 {
        let f: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        let mut acc = self.grid[0] * f[0] / (4.0 * self.k);
        for j in 1..f.len() {
            acc += 0.5 * (self.grid[j] - self.grid[j - 1]) * (f[j] + f[j - 1]);
        }
        acc
    }

    /// |φ(x_max)| / max|φ|; small when the grid covers the support.
    pub fn decay_ratio(&self) -> f64 {
        let max = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        self.values.last().map_or(0.0, |v| v.norm()) / max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Constants {
        Constants::new(1.0, 1.0, 0.25).unwrap()
    }

    #[test]
    fn ground_state_value() {
        let v = phi_stationary(0.25, 0, &unit(), 1.0, 0.0, Convention::SMinus).unwrap();
        let want = 2f64.sqrt() * std::f64::consts::PI.powf(-0.25) * (-0.5f64).exp();
        assert!((v.re - want).abs() < 1e-14 && v.im == 0.0, "{v} {want}");
    }

    #[test]
    fn stationary_states_are_orthonormal() {
        let c = unit();
        for &k in &[0.25, 0.75, 1.3] {
            let norm = norm_quadrature(|x| phi_stationary(k, 0, &c, x, 0.0, Convention::SMinus).unwrap(), k, 0, 1.0)
                .unwrap();
            assert!((norm - 1.0).abs() < 1e-10, "k={k} norm {norm}");
        }
        let k = 0.75;
        let f = |x: f64| {
            phi_stationary(k, 2, &c, x, 0.3, Convention::SMinus).unwrap().conj()
                * phi_stationary(k, 5, &c, x, 0.3, Convention::SMinus).unwrap()
        };
        let v = integrate_half_line(f, 4.0 * k - 1.0, 12.0, 1e-13).unwrap();
        assert!(v.norm() < 1e-9, "{v}");
    }

    #[test]
    fn laguerre_integral_trivial_and_degenerate() {
        let b = Complex64::new(1.7, 0.4);
        let z = Complex64::new(0.0, 0.0);
        let v = laguerre_integral_closed(b, z, z, 0.3, 0, 0).unwrap();
        let want = crate::specfun::gamma(1.3).unwrap() / b.powf(1.3);
        assert!((v - want).norm() < 1e-14);
        // b = λ = μ: only the j = 1 term survives
        let one = Complex64::new(1.0, 0.0);
        let v = laguerre_integral_closed(one, one, one, 0.5, 1, 1).unwrap();
        let want = crate::specfun::gamma(3.5).unwrap() * 0.4;
        assert!((v.re - want).abs() < 1e-13 && v.im.abs() < 1e-15, "{v} {want}");
    }

    #[test]
    fn laguerre_integral_rejects_bad_parameters() {
        let one = Complex64::new(1.0, 0.0);
        assert!(matches!(laguerre_integral_closed(one, one, one, -1.0, 1, 1), Err(Error::Domain(_))));
        assert!(matches!(laguerre_integral_closed(-one, one, one, 0.5, 1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn hermite_form_matches_at_quarter() {
        let c = Constants::new(1.7, 0.8, 0.25).unwrap();
        for n in 0..=6 {
            for j in 1..=50 {
                let x = 0.1 * j as f64;
                let a = phi_stationary(0.25, n, &c, x, 0.4, Convention::SMinus).unwrap();
                let b = hermite_even_state(n, &c, x, 0.4);
                assert!((a - b).norm() < 1e-12, "n={n} x={x}: {a} {b}");
            }
        }
    }

    #[test]
    fn radial_grid_spacing() {
        let g = radial_grid(2.0, 4).unwrap();
        assert_eq!(g, vec![0.5, 1.0, 1.5, 2.0]);
        assert!(radial_grid(1.0, 1).is_err());
    }
}

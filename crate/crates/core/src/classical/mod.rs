//! Classical solutions u, v of the oscillator equation and the Ermakov data
//! ρ, Ω, τ built from them.

pub mod ode;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::coeffs::{CoefficientProfile, Coeffs, Constants};
use crate::error::{Error, Result};
use ode::dp45_step;

/// Values and time-derivatives of the two solutions at t0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub u0: f64,
    pub du0: f64,
    pub v0: f64,
    pub dv0: f64,
}

impl InitialData {
    pub fn new(u0: f64, du0: f64, v0: f64, dv0: f64) -> Self {
        Self { u0, du0, v0, dv0 }
    }

    pub fn wronskian(&self) -> f64 {
        self.u0 * self.dv0 - self.du0 * self.v0
    }

    /// Ω = M(t0)·W, which must be positive.
    pub fn omega(&self, mass: f64) -> Result<f64> {
        let w = self.wronskian();
        if w == 0.0 || !w.is_finite() {
            return Err(Error::Invariant(
                "initial data are linearly dependent (zero Wronskian)".into(),
            ));
        }
        let omega = mass * w;
        if !(omega > 0.0) {
            return Err(Error::Invariant(format!(
                "Omega = M(t0)·(u0 dv0 - du0 v0) = {omega} must be positive"
            )));
        }
        Ok(omega)
    }
}

/// u0 = 1, du0 = 0, v0 = 0, dv0 = w_c / M(t0): ρ(t0) = 1, ρ̇(t0) = 0, Ω = w_c.
pub fn default_init(profile: &CoefficientProfile, constants: &Constants, t0: f64) -> Result<InitialData> {
    let m = profile.eval(t0)?.mass(constants.w_c);
    Ok(InitialData::new(1.0, 0.0, 0.0, constants.w_c / m))
}

/// Representative of atan2(v, u) + 2πℤ closest to `tau_prev`.
pub fn tau_unwrap(u: f64, v: f64, tau_prev: f64) -> f64 {
    let base = v.atan2(u);
    base + TAU * ((tau_prev - base) / TAU).round()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub rel_tol: f64,
    /// Largest internal step; also the spacing of the output grid.
    pub max_step: f64,
    /// Additional output times inside [t0, t1].
    pub extra_times: Vec<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_step: 0.01,
            extra_times: Vec::new(),
        }
    }
}

impl SolveOptions {
    pub fn new(rel_tol: f64, max_step: f64) -> Self {
        Self {
            rel_tol,
            max_step,
            extra_times: Vec::new(),
        }
    }
}

/// Sampled classical solution together with ρ, ρ̇, τ and M.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTrajectory {
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub v: Vec<f64>,
    pub dv: Vec<f64>,
    pub rho: Vec<f64>,
    pub drho: Vec<f64>,
    pub tau: Vec<f64>,
    pub mass: Vec<f64>,
    pub omega: f64,
    pub constants: Constants,
    /// Times where the profile jumps, as used for the integration split.
    pub jumps: Vec<f64>,
}

impl ClassicalTrajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Index of the grid point equal to `t` (to 1e-12 relative).
    pub fn index_at(&self, t: f64) -> Option<usize> {
        let tol = 1e-12 * t.abs().max(1.0);
        let i = self.t.partition_point(|&x| x < t - tol);
        (i < self.t.len() && (self.t[i] - t).abs() <= tol).then_some(i)
    }

    /// Index of the grid point nearest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        let i = self.t.partition_point(|&x| x < t);
        if i == 0 {
            0
        } else if i >= self.t.len() {
            self.t.len() - 1
        } else if (self.t[i] - t) < (t - self.t[i - 1]) {
            i
        } else {
            i - 1
        }
    }

    /// max_i |M(u·dv - du·v) - Ω| / Ω.
    pub fn omega_drift(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let w = self.mass[i] * (self.u[i] * self.dv[i] - self.du[i] * self.v[i]);
                (w - self.omega).abs() / self.omega
            })
            .fold(0.0, f64::max)
    }
}

/// Output grid: uniform spacing `h` from t0, t1 as last point, jump and
/// extra times merged in.
fn output_grid(t0: f64, t1: f64, h: f64, inserts: &[f64]) -> Vec<f64> {
    let n = ((t1 - t0) / h).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| t0 + i as f64 * h).collect();
    let snap = 1e-9 * h;
    if t1 - grid[grid.len() - 1] > snap {
        grid.push(t1);
    } else {
        *grid.last_mut().unwrap() = t1;
    }
    for &t in inserts {
        if t > t0 && t < t1 {
            let i = grid.partition_point(|&x| x < t);
            let near = |j: usize| j < grid.len() && (grid[j] - t).abs() <= snap;
            if near(i) {
                grid[i] = t;
            } else if i > 0 && near(i - 1) {
                grid[i - 1] = t;
            } else {
                grid.insert(i, t);
            }
        }
    }
    grid
}

/// Integrates the classical equation for u and v on [t0, t1].
///
/// The state is (u, M u̇, v, M v̇), whose momenta stay continuous across
/// coefficient jumps. Integration is split at the profile's jump times.
pub fn solve_classical(
    profile: &CoefficientProfile,
    constants: &Constants,
    init: &InitialData,
    t0: f64,
    t1: f64,
    opts: &SolveOptions,
) -> Result<ClassicalTrajectory> {
    if !(t1 > t0) {
        return Err(Error::Domain(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    if !(opts.rel_tol > 0.0) || !(opts.max_step > 0.0) {
        return Err(Error::Domain("rel_tol and max_step must be positive".into()));
    }
    let (lo, hi) = profile.domain();
    if t0 < lo || t1 > hi {
        return Err(Error::Domain(format!(
            "[{t0}, {t1}] outside the profile domain [{lo}, {hi}]"
        )));
    }
    let w_c = constants.w_c;
    let m0 = profile.eval(t0)?.mass(w_c);
    let omega = init.omega(m0)?;

    let jumps: Vec<f64> = profile
        .jump_times()
        .into_iter()
        .filter(|&j| j > t0 && j < t1)
        .collect();
    let mut inserts = jumps.clone();
    inserts.extend(opts.extra_times.iter().copied());
    let grid = output_grid(t0, t1, opts.max_step, &inserts);

    let mut y = [init.u0, m0 * init.du0, init.v0, m0 * init.dv0];
    let scale_u0 = y[0].hypot(y[1]);
    let scale_v0 = y[2].hypot(y[3]);

    let n = grid.len();
    let mut traj = ClassicalTrajectory {
        t: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        du: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
        dv: Vec::with_capacity(n),
        rho: Vec::with_capacity(n),
        drho: Vec::with_capacity(n),
        tau: Vec::with_capacity(n),
        mass: Vec::with_capacity(n),
        omega,
        constants: *constants,
        jumps: jumps.clone(),
    };
    let mut tau = init.v0.atan2(init.u0);
    record(&mut traj, t0, &y, m0, tau);

    let mut h_next = opts.max_step;
    for w in grid.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        let end_is_jump = jumps.iter().any(|&j| j == tb);
        let coeff = |t: f64, at_end: bool| -> Result<Coeffs> {
            if end_is_jump && at_end {
                profile.eval_left(t)
            } else {
                profile.eval(t)
            }
        };
        let rhs = |t: f64, at_end: bool, s: &[f64; 4]| -> Result<[f64; 4]> {
            let c = coeff(t, at_end)?;
            let m = c.mass(w_c);
            let q = c.restoring();
            Ok([s[1] / m, -m * q * s[0], s[3] / m, -m * q * s[2]])
        };

        let mut t = ta;
        while t < tb {
            let rest = tb - t;
            let mut h = h_next.min(rest);
            // cap the phase advance: τ̇ = Ω / (M ρ²)
            let c = profile.eval(t)?;
            let rho2 = y[0] * y[0] + y[2] * y[2];
            let rate = (omega / (c.mass(w_c) * rho2)).abs();
            if rate * h > 0.5 * FRAC_PI_2 {
                h = 0.5 * FRAC_PI_2 / rate;
            }
            let lands = h >= rest * (1.0 - 1e-6);
            let h_eff = if lands { rest } else { h };
            if h_eff < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integration(format!("step size underflow at t = {t}")));
            }
            let (y5, err) = if lands {
                dp45_step(&rhs, t, &y, h_eff)?
            } else {
                let interior = |ts: f64, _end: bool, s: &[f64; 4]| rhs(ts, false, s);
                dp45_step(&interior, t, &y, h_eff)?
            };
            let su = scale_u0.max(y[0].hypot(y[1])) * opts.rel_tol;
            let sv = scale_v0.max(y[2].hypot(y[3])) * opts.rel_tol;
            let e = (err[0].abs() / su)
                .max(err[1].abs() / su)
                .max(err[2].abs() / sv)
                .max(err[3].abs() / sv);
            if !e.is_finite() || y5.iter().any(|x| !x.is_finite()) {
                return Err(Error::Integration(format!("non-finite state near t = {t}")));
            }
            let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            if e <= 1.0 {
                t = if lands { tb } else { t + h_eff };
                y = y5;
                tau = tau_unwrap(y[0], y[2], tau);
                h_next = (h_eff * factor).min(opts.max_step);
            } else {
                h_next = h_eff * factor;
            }
        }
        let m = profile.eval(tb)?.mass(w_c);
        record(&mut traj, tb, &y, m, tau);
    }
    Ok(traj)
}

fn record(traj: &mut ClassicalTrajectory, t: f64, y: &[f64; 4], m: f64, tau: f64) {
    let (u, v) = (y[0], y[2]);
    let (du, dv) = (y[1] / m, y[3] / m);
    let rho = u.hypot(v);
    traj.t.push(t);
    traj.u.push(u);
    traj.du.push(du);
    traj.v.push(v);
    traj.dv.push(dv);
    traj.rho.push(rho);
    traj.drho.push((u * du + v * dv) / rho);
    traj.tau.push(tau);
    traj.mass.push(m);
}

/// Largest absolute residual of the Ermakov equation
/// d/dt(Mρ̇) - Ω²/(Mρ³) + M Q ρ = 0 over interior grid points, with the
/// time derivative taken by second-order centered differences.
pub fn ermakov_residual(traj: &ClassicalTrajectory, profile: &CoefficientProfile) -> Result<f64> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::Grid(format!("need at least 3 grid points, have {n}")));
    }
    let f: Vec<f64> = (0..n).map(|i| traj.mass[i] * traj.drho[i]).collect();
    let mut worst: f64 = 0.0;
    let mut used = 0usize;
    for i in 1..n - 1 {
        let (ta, tb, tc) = (traj.t[i - 1], traj.t[i], traj.t[i + 1]);
        if traj.jumps.iter().any(|&j| j > ta && j < tc) {
            continue;
        }
        let (hm, hp) = (tb - ta, tc - tb);
        let df = (hm * hm * f[i + 1] - hp * hp * f[i - 1] + (hp * hp - hm * hm) * f[i])
            / (hm * hp * (hm + hp));
        let c = profile.eval(tb)?;
        let m = traj.mass[i];
        let rho = traj.rho[i];
        let res = df - traj.omega * traj.omega / (m * rho * rho * rho) + m * c.restoring() * rho;
        worst = worst.max(res.abs());
        used += 1;
    }
    if used == 0 {
        return Err(Error::Grid("no smooth interior stencil available".into()));
    }
    Ok(worst)
}

/// Wrapped difference of two angles in (-π, π].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b) % TAU;
    if d > PI {
        d - TAU
    } else if d <= -PI {
        d + TAU
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h0() -> (CoefficientProfile, Constants) {
        (
            CoefficientProfile::constant(2.0, 0.0, 0.0, 1.0),
            Constants::new(1.0, 1.0, 0.25).unwrap(),
        )
    }

    #[test]
    fn tau_unwrap_examples() {
        assert_eq!(tau_unwrap(1.0, 0.0, 0.0), 0.0);
        assert!((tau_unwrap(-1.0, 1e-9, 3.0) - PI).abs() < 1e-8);
        assert!((tau_unwrap(0.0, -1.0, -1.0) + FRAC_PI_2).abs() < 1e-15);
        assert!((tau_unwrap(-1.0, -1e-9, 3.0) - PI).abs() < 1e-8);
    }

    #[test]
    fn default_init_examples() {
        let (p, c) = h0();
        assert_eq!(default_init(&p, &c, 0.0).unwrap(), InitialData::new(1.0, 0.0, 0.0, 1.0));
        let neg = CoefficientProfile::constant(-2.0, 0.0, 0.0, 1.0);
        let init = default_init(&neg, &c, 0.0).unwrap();
        assert_eq!(init, InitialData::new(1.0, 0.0, 0.0, -1.0));
        assert_eq!(init.omega(-1.0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_initial_data() {
        let (p, c) = h0();
        let dep = InitialData::new(1.0, 0.0, 2.0, 0.0);
        assert!(matches!(
            solve_classical(&p, &c, &dep, 0.0, 1.0, &SolveOptions::default()),
            Err(Error::Invariant(_))
        ));
        let neg = InitialData::new(1.0, 0.0, 0.0, -1.0);
        assert!(solve_classical(&p, &c, &neg, 0.0, 1.0, &SolveOptions::default()).is_err());
    }

    #[test]
    fn simple_oscillator_closed_form() {
        let (p, c) = h0();
        let init = InitialData::new(1.0, 0.0, 0.0, 1.0);
        let tr = solve_classical(&p, &c, &init, 0.0, 20.0, &SolveOptions::default()).unwrap();
        for i in 0..tr.len() {
            let t = tr.t[i];
            assert!((tr.u[i] - t.cos()).abs() < 1e-9);
            assert!((tr.v[i] - t.sin()).abs() < 1e-9);
            assert!((tr.rho[i] - 1.0).abs() < 1e-9);
            assert!((tr.tau[i] - t).abs() < 1e-9);
        }
        assert_eq!(tr.omega, 1.0);
        assert_eq!(*tr.t.last().unwrap(), 20.0);
    }

    #[test]
    fn grid_includes_extra_and_jump_times() {
        let g = output_grid(0.0, 1.0, 0.25, &[0.3, 0.5 + 1e-12]);
        assert_eq!(g, vec![0.0, 0.25, 0.3, 0.5 + 1e-12, 0.75, 1.0]);
        let g = output_grid(0.0, 1.1, 0.5, &[]);
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.1]);
    }

    #[test]
    fn ermakov_needs_three_points() {
        let (p, c) = h0();
        let init = InitialData::new(1.0, 0.0, 0.0, 1.0);
        let tr = solve_classical(&p, &c, &init, 0.0, 0.01, &SolveOptions::default()).unwrap();
        assert!(matches!(ermakov_residual(&tr, &p), Err(Error::Grid(_))));
    }
}

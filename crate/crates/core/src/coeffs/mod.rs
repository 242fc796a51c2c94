//! Time-dependent coefficient profiles A₀(t), A₁(t), a(t) and the global
//! constants of the system.

mod config;
mod spline;

use std::sync::Arc;

pub use config::{
    load_config, parse_config, BargmannSettings, Config, GridSettings, IntegrationSettings,
};
pub use spline::CubicSpline;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub w_c: f64,
    pub hbar: f64,
    pub k: f64,
}

impl Constants {
    pub fn new(w_c: f64, hbar: f64, k: f64) -> Result<Self> {
        for (name, v) in [("w_c", w_c), ("hbar", hbar), ("k", k)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(
                    format!("system.{name}"),
                    format!("must be a positive number, got {v}"),
                ));
            }
        }
        Ok(Self { w_c, hbar, k })
    }
}

/// Coefficient values and first time-derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coeffs {
    pub a0: f64,
    pub a1: f64,
    pub a: f64,
    pub da0: f64,
    pub da1: f64,
    pub da: f64,
}

impl Coeffs {
    /// M = 2w_c / (A₀ - A₁).
    pub fn mass(&self, w_c: f64) -> f64 {
        2.0 * w_c / (self.a0 - self.a1)
    }

    /// Ṁ / M.
    pub fn mass_log_rate(&self) -> f64 {
        -(self.da0 - self.da1) / (self.a0 - self.a1)
    }

    /// ¼(A₀² - A₁²) - 4a² + (2/M) d(Ma)/dt, the restoring coefficient of
    /// the classical equation.
    pub fn restoring(&self) -> f64 {
        0.25 * (self.a0 * self.a0 - self.a1 * self.a1) - 4.0 * self.a * self.a
            + 2.0 * self.mass_log_rate() * self.a
            + 2.0 * self.da
    }

    /// ¼(A₀² - A₁²), the squared frequency when M = 1 and a = 0.
    pub fn freq_sq(&self) -> f64 {
        0.25 * (self.a0 * self.a0 - self.a1 * self.a1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Constant { a0: f64, a1: f64, a: f64 },
    /// Unit mass, frequency w0 before `t_jump` and w1 from `t_jump` on.
    FrequencyJump { w0: f64, w1: f64, t_jump: f64 },
    /// Unit mass, w²(t) = w0_sq + delta·tanh(rate·t), a = 0.
    TanhQuench { w0_sq: f64, delta: f64, rate: f64 },
    Tabulated(Arc<Table>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub rows: Vec<[f64; 4]>,
    a0: CubicSpline,
    a1: CubicSpline,
    a: CubicSpline,
}

impl Table {
    /// Rows of (t, A₀, A₁, a), strictly increasing in t.
    pub fn new(rows: Vec<[f64; 4]>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Domain("table needs at least two rows".into()));
        }
        if let Some(w) = rows.windows(2).find(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::Domain(format!(
                "table rows not strictly increasing in t at t = {}",
                w[1][0]
            )));
        }
        let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
        let t = col(0);
        Ok(Self {
            a0: CubicSpline::new(t.clone(), col(1))?,
            a1: CubicSpline::new(t.clone(), col(2))?,
            a: CubicSpline::new(t, col(3))?,
            rows,
        })
    }
}

/// Immutable coefficient profile. `w_c` is carried because the unit-mass
/// families are expressed through it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProfile {
    pub kind: ProfileKind,
    pub w_c: f64,
}

impl CoefficientProfile {
    pub fn constant(a0: f64, a1: f64, a: f64, w_c: f64) -> Self {
        Self {
            kind: ProfileKind::Constant { a0, a1, a },
            w_c,
        }
    }

    pub fn tanh_quench(w0_sq: f64, delta: f64, rate: f64, w_c: f64) -> Self {
        Self {
            kind: ProfileKind::TanhQuench { w0_sq, delta, rate },
            w_c,
        }
    }

    pub fn tabulated(table: Table, w_c: f64) -> Self {
        Self {
            kind: ProfileKind::Tabulated(Arc::new(table)),
            w_c,
        }
    }

    /// Closed domain of validity; unbounded for the analytic kinds.
    pub fn domain(&self) -> (f64, f64) {
        match &self.kind {
            ProfileKind::Tabulated(tab) => tab.a0.domain(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Times where the coefficients jump.
    pub fn jump_times(&self) -> Vec<f64> {
        match self.kind {
            ProfileKind::FrequencyJump { w0, w1, t_jump } if w0 != w1 => vec![t_jump],
            _ => Vec::new(),
        }
    }

    /// True for the A₀ = 2w_c, A₁ = a = 0 family (H equal to H₀).
    pub fn is_free_h0(&self) -> bool {
        match self.kind {
            ProfileKind::Constant { a0, a1, a } => a0 == 2.0 * self.w_c && a1 == 0.0 && a == 0.0,
            ProfileKind::FrequencyJump { w0, w1, .. } => w0 == w1 && w0 == self.w_c,
            _ => false,
        }
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, t: f64) -> Result<Coeffs> {
        self.eval_side(t, false)
    }

    /// Left limit at `t`; differs from [`eval`](Self::eval) only at jumps.
    pub fn eval_left(&self, t: f64) -> Result<Coeffs> {
        self.eval_side(t, true)
    }

    fn eval_side(&self, t: f64, left: bool) -> Result<Coeffs> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("time {t} is not finite")));
        }
        let w_c = self.w_c;
        let unit_mass = |w2: f64, dw2: f64| Coeffs {
            a0: w_c + w2 / w_c,
            a1: w2 / w_c - w_c,
            a: 0.0,
            da0: dw2 / w_c,
            da1: dw2 / w_c,
            da: 0.0,
        };
        let c = match &self.kind {
            ProfileKind::Constant { a0, a1, a } => Coeffs {
                a0: *a0,
                a1: *a1,
                a: *a,
                da0: 0.0,
                da1: 0.0,
                da: 0.0,
            },
            ProfileKind::FrequencyJump { w0, w1, t_jump } => {
                let before = if left { t <= *t_jump } else { t < *t_jump };
                let w = if before { *w0 } else { *w1 };
                unit_mass(w * w, 0.0)
            }
            ProfileKind::TanhQuench { w0_sq, delta, rate } => {
                let th = (rate * t).tanh();
                unit_mass(w0_sq + delta * th, delta * rate * (1.0 - th * th))
            }
            ProfileKind::Tabulated(tab) => {
                let (a0, da0) = tab.a0.eval(t)?;
                let (a1, da1) = tab.a1.eval(t)?;
                let (a, da) = tab.a.eval(t)?;
                Coeffs {
                    a0,
                    a1,
                    a,
                    da0,
                    da1,
                    da,
                }
            }
        };
        if c.a0 == c.a1 {
            return Err(Error::SingularM { t });
        }
        Ok(c)
    }
}

/// Coefficients and derivatives of `profile` at `t`.
pub fn eval_profile(profile: &CoefficientProfile, t: f64) -> Result<Coeffs> {
    profile.eval(t)
}

/// Unit-mass oscillator whose frequency jumps from `w0` to `w1` at `t_jump`.
pub fn builtin_frequency_jump(w0: f64, w1: f64, t_jump: f64, w_c: f64) -> Result<CoefficientProfile> {
    for (name, v) in [("w0", w0), ("w1", w1), ("w_c", w_c)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::config(
                format!("profile.{name}"),
                format!("frequency must be positive, got {v}"),
            ));
        }
    }
    if !t_jump.is_finite() {
        return Err(Error::config("profile.t_jump", "must be finite"));
    }
    Ok(CoefficientProfile {
        kind: ProfileKind::FrequencyJump { w0, w1, t_jump },
        w_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_values() {
        let p = CoefficientProfile::constant(2.0, 0.0, 0.0, 1.0);
        let c = p.eval(5.0).unwrap();
        assert_eq!((c.a0, c.a1, c.a, c.da0, c.da1, c.da), (2.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(c.mass(1.0), 1.0);
    }

    #[test]
    fn tanh_quench_at_origin() {
        let p = CoefficientProfile::tanh_quench(1.0, 0.5, 1.0, 1.0);
        let c = p.eval(0.0).unwrap();
        assert!((c.a0 - 2.0).abs() < 1e-15 && c.a1.abs() < 1e-15);
        assert!((c.a0 - c.a1 - 2.0).abs() < 1e-15);
        assert!((c.freq_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frequency_jump_sides() {
        let p = builtin_frequency_jump(1.0, 2.0, 0.0, 1.0).unwrap();
        assert!((p.eval(-1.0).unwrap().freq_sq() - 1.0).abs() < 1e-15);
        assert!((p.eval(1.0).unwrap().freq_sq() - 4.0).abs() < 1e-15);
        // right-continuous at the jump, left limit is the old frequency
        assert!((p.eval(0.0).unwrap().freq_sq() - 4.0).abs() < 1e-15);
        assert!((p.eval_left(0.0).unwrap().freq_sq() - 1.0).abs() < 1e-15);
        for t in [-1.0, 0.0, 1.0] {
            assert!((p.eval(t).unwrap().mass(1.0) - 1.0).abs() < 1e-15);
        }
        assert_eq!(p.jump_times(), vec![0.0]);
    }

    #[test]
    fn equal_frequencies_match_constant_kind() {
        let p = builtin_frequency_jump(1.0, 1.0, 0.0, 1.0).unwrap();
        let q = CoefficientProfile::constant(2.0, 0.0, 0.0, 1.0);
        for t in [-2.0, 0.0, 3.0] {
            assert_eq!(p.eval(t).unwrap(), q.eval(t).unwrap());
        }
        assert!(p.jump_times().is_empty());
    }

    #[test]
    fn rejects_nonpositive_frequency() {
        assert!(matches!(
            builtin_frequency_jump(0.0, 2.0, 0.0, 1.0),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn singular_mass_is_reported() {
        let p = CoefficientProfile::constant(1.0, 1.0, 0.0, 1.0);
        assert!(matches!(p.eval(0.0), Err(Error::SingularM { .. })));
    }

    #[test]
    fn negative_mass_is_accepted() {
        let p = CoefficientProfile::constant(-2.0, 0.0, 0.0, 1.0);
        assert_eq!(p.eval(0.0).unwrap().mass(1.0), -1.0);
    }
}

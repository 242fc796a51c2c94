//! Subcommand pipelines. Each one builds everything from the config file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use su11_core::bargmann::{build_matrix_form, oscillator_level, rel_deviation, v_standard};
use su11_core::classical::{default_init, solve_classical, ClassicalTrajectory, InitialData, SolveOptions};
use su11_core::coeffs::{load_config, Config};
use su11_core::group::{disentangle, group_element_at};
use su11_core::specfun::identity_sweeps;
use su11_core::wavefn::{overlap_quadrature, radial_grid, RadialWaveFunction};

use crate::format::{sci, to_json_line};
use crate::verify::{run_verify, Suite};
use crate::{CliError, CliResult, FormArg};

pub fn load(path: &Path) -> CliResult<(Config, Vec<u8>)> {
    let bytes = fs::read(path).map_err(|e| {
        CliError::Core(su11_core::Error::Config {
            path: path.display().to_string(),
            msg: format!("cannot read config: {e}"),
        })
    })?;
    let cfg = load_config(path)?;
    Ok((cfg, bytes))
}

fn write_out(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes to `out`, or to stdout when absent.
fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_out(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

pub fn initial_data(cfg: &Config) -> CliResult<InitialData> {
    Ok(match cfg.initial {
        Some([u0, du0, v0, dv0]) => InitialData::new(u0, du0, v0, dv0),
        None => default_init(&cfg.profile, &cfg.constants, cfg.integration.t0)?,
    })
}

/// Trajectory on [t0, t1] with `extra` times placed on the grid.
pub fn trajectory(cfg: &Config, t1: f64, max_step: f64, extra: &[f64]) -> CliResult<ClassicalTrajectory> {
    let init = initial_data(cfg)?;
    let mut opts = SolveOptions::new(cfg.integration.rel_tol, max_step);
    opts.extra_times = extra.to_vec();
    Ok(solve_classical(
        &cfg.profile,
        &cfg.constants,
        &init,
        cfg.integration.t0,
        t1,
        &opts,
    )?)
}

/// Trajectory reaching `t` and the grid index of `t`.
pub fn trajectory_to(cfg: &Config, t: f64) -> CliResult<(ClassicalTrajectory, usize)> {
    let t0 = cfg.integration.t0;
    if !(t >= t0) || !t.is_finite() {
        return Err(CliError::Usage(format!("--t {t} must not precede t0 = {t0}")));
    }
    let (lo, hi) = cfg.profile.domain();
    let max_step = cfg.integration.max_step;
    let t1 = if t > t0 { t } else { (t0 + max_step).min(hi) };
    if t1 > hi || t < lo {
        return Err(CliError::Usage(format!("--t {t} lies outside the profile domain [{lo}, {hi}]")));
    }
    let traj = trajectory(cfg, t1, max_step, &[t])?;
    let i = traj
        .index_at(t)
        .ok_or_else(|| CliError::Usage(format!("time {t} is not on the output grid")))?;
    Ok((traj, i))
}

fn required_t1(cfg: &Config) -> CliResult<f64> {
    cfg.integration.t1.ok_or_else(|| {
        CliError::Core(su11_core::Error::Config {
            path: "integration.t1".into(),
            msg: "required by this subcommand".into(),
        })
    })
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn run_trajectory(config: &Path, out: Option<&Path>) -> CliResult<()> {
    let (cfg, _) = load(config)?;
    let t1 = required_t1(&cfg)?;
    let tr = trajectory(&cfg, t1, cfg.integration.max_step, &[])?;
    let mut csv = String::from("t,u,du,v,dv,rho,drho,tau,M\n");
    for i in 0..tr.len() {
        let row = [
            tr.t[i], tr.u[i], tr.du[i], tr.v[i], tr.dv[i], tr.rho[i], tr.drho[i], tr.tau[i], tr.mass[i],
        ];
        let cells: Vec<String> = row.iter().map(|x| sci(*x)).collect();
        writeln!(csv, "{}", cells.join(",")).expect("string write");
    }
    emit(out, &csv)?;
    if let Some(p) = out {
        let c = &cfg.constants;
        let meta = json!({"Omega": tr.omega, "w_c": c.w_c, "hbar": c.hbar, "k": c.k});
        write_out(&sidecar(p), &to_json_line(&meta))?;
    }
    Ok(())
}

pub fn run_group(config: &Path, t: f64, out: Option<&Path>) -> CliResult<()> {
    let (cfg, _) = load(config)?;
    let (tr, i) = trajectory_to(&cfg, t)?;
    let g = group_element_at(&tr, i, &cfg.profile)?;
    let p = disentangle(&g)?;
    let doc = json!({
        "t": t,
        "alpha": pair(g.alpha),
        "beta": pair(g.beta),
        "xi": pair(p.xi),
        "gamma": p.gamma,
        "phi": p.phi,
    });
    emit(out, &to_json_line(&doc))
}

#[derive(Serialize)]
struct BargmannMeta {
    k: f64,
    #[serde(rename = "N")]
    n: usize,
    form: &'static str,
    t: f64,
    alpha: [f64; 2],
    beta: [f64; 2],
    tail_max: f64,
    truncated: bool,
    oscillator_mapping: Option<&'static str>,
}

pub fn run_bargmann(
    config: &Path,
    t: f64,
    form: FormArg,
    compare: Option<FormArg>,
    out: Option<&Path>,
) -> CliResult<()> {
    let (cfg, _) = load(config)?;
    let (tr, i) = trajectory_to(&cfg, t)?;
    let g = group_element_at(&tr, i, &cfg.profile)?;
    let k = cfg.constants.k;
    let n = cfg.bargmann.truncation_n;
    let tol = cfg.bargmann.tail_tol;
    let mat = build_matrix_form(form.form(), k, &g, n, tol)?;
    let mut csv = String::from("m_prime,m,re,im,prob\n");
    for mp in 0..n {
        for m in 0..n {
            let v = mat.get(mp, m);
            writeln!(csv, "{mp},{m},{},{},{}", sci(v.re), sci(v.im), sci(v.norm_sqr())).expect("string write");
        }
    }
    let mapping = oscillator_level(k, 1).map(|l| if l == 2 { "2m" } else { "2m+1" });
    let meta = BargmannMeta {
        k,
        n,
        form: form.form().name(),
        t,
        alpha: pair(g.alpha),
        beta: pair(g.beta),
        tail_max: mat.tails.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        truncated: mat.truncated,
        oscillator_mapping: mapping,
    };
    emit(out, &csv)?;
    if let Some(p) = out {
        write_out(&sidecar(p), &to_json_line(&meta))?;
    }
    if let Some(other) = compare {
        let b = build_matrix_form(other.form(), k, &g, n, tol)?;
        let mut max_abs: f64 = 0.0;
        let mut max_rel: f64 = 0.0;
        for (x, y) in mat.entries.iter().zip(&b.entries) {
            max_abs = max_abs.max((x - y).norm());
            max_rel = max_rel.max(rel_deviation(*x, *y));
        }
        let report = json!({
            "form": form.form().name(),
            "compare": other.form().name(),
            "N": n,
            "max_abs_diff": max_abs,
            "max_rel_diff": max_rel,
        });
        // the comparison goes to stdout unless the CSV already does
        if out.is_some() {
            print!("{}", to_json_line(&report));
        } else {
            eprint!("{}", to_json_line(&report));
        }
    }
    Ok(())
}

pub fn run_wavefn(config: &Path, n: u32, t: f64, out: Option<&Path>) -> CliResult<()> {
    let (cfg, _) = load(config)?;
    let grid = cfg.grid.clone().ok_or_else(|| {
        CliError::Core(su11_core::Error::Config {
            path: "grid".into(),
            msg: "section [grid] with x_max and n_points is required".into(),
        })
    })?;
    let xs = radial_grid(grid.x_max, grid.n_points)?;
    let (tr, i) = trajectory_to(&cfg, t)?;
    let wf = RadialWaveFunction::evolved(cfg.constants.k, &tr, &cfg.profile, n, i, xs)?;
    let mut csv = String::from("x,re,im,abs2\n");
    for (x, v) in wf.grid.iter().zip(&wf.values) {
        writeln!(csv, "{},{},{},{}", sci(*x), sci(v.re), sci(v.im), sci(v.norm_sqr())).expect("string write");
    }
    emit(out, &csv)
}

pub fn run_overlap(config: &Path, m: u32, n: u32, t: f64, out: Option<&Path>) -> CliResult<()> {
    let (cfg, _) = load(config)?;
    let k = cfg.constants.k;
    let (tr, i) = trajectory_to(&cfg, t)?;
    let q = overlap_quadrature(k, m, n, &tr, &cfg.profile, i)?;
    let g = group_element_at(&tr, i, &cfg.profile)?;
    let sign = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
    let closed = v_standard(k, m, n, &g)? * sign;
    let doc = json!({
        "t": t,
        "k": k,
        "m": m,
        "n": n,
        "quadrature": pair(q),
        "closed_form": pair(closed),
        "discrepancy": (q - closed).norm(),
    });
    emit(out, &to_json_line(&doc))
}

pub fn run_verify_command(config: &Path, suite: Suite, out: Option<&Path>) -> CliResult<()> {
    let (cfg, bytes) = load(config)?;
    let (report, err) = run_verify(&cfg, &bytes, suite);
    emit(out, &to_json_line(&report))?;
    if let Some(e) = err {
        return Err(e);
    }
    if report.checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(CliError::Verification(failed.join(", ")))
    }
}

pub fn run_specfun_selftest(seed: u64, samples: usize, max_index: u32, out: Option<&Path>) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sweeps = identity_sweeps(&mut rng, samples, max_index);
    let tol = 1e-10;
    let rows: Vec<_> = sweeps
        .iter()
        .map(|s| {
            json!({
                "name": s.name,
                "samples": s.samples,
                "skipped": s.skipped,
                "max_residual": s.max_residual,
                "tolerance": tol,
                "passed": s.max_residual <= tol,
            })
        })
        .collect();
    let passed = sweeps.iter().all(|s| s.max_residual <= tol);
    emit(out, &to_json_line(&json!({"seed": seed, "sweeps": rows, "passed": passed})))?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification("identity sweep residual above tolerance".into()))
    }
}

//! INI-style run configuration.
//!
//! ```text
//! [system]       w_c, hbar (1.0), k
//! [profile]      kind + kind-specific keys
//! [integration]  t0 (0), t1, rel_tol (1e-10), max_step (0.01)
//! [bargmann]     truncation_N (64), tail_tol (1e-8)
//! [grid]         x_max, n_points
//! [initial]      u0, du0, v0, dv0   (optional override of the default init)
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::{builtin_frequency_jump, CoefficientProfile, Constants, Table};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSettings {
    pub t0: f64,
    pub t1: Option<f64>,
    pub rel_tol: f64,
    pub max_step: f64,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self {
            t0: 0.0,
            t1: None,
            rel_tol: 1e-10,
            max_step: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargmannSettings {
    pub truncation_n: usize,
    pub tail_tol: f64,
}

impl Default for BargmannSettings {
    fn default() -> Self {
        Self {
            truncation_n: 64,
            tail_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSettings {
    pub x_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub constants: Constants,
    pub profile: CoefficientProfile,
    pub integration: IntegrationSettings,
    pub bargmann: BargmannSettings,
    pub grid: Option<GridSettings>,
    /// (u0, du0, v0, dv0) when given explicitly.
    pub initial: Option<[f64; 4]>,
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn tokenize(text: &str) -> Result<Sections> {
    let mut out: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::config(format!("line {}", lineno + 1), "unterminated section header"))?
                .trim()
                .to_string();
            out.entry(name.clone()).or_default();
            current = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}", lineno + 1), "expected key = value"))?;
        let key = key.trim().to_string();
        let section = current
            .clone()
            .ok_or_else(|| Error::config(key.clone(), "key outside of any section"))?;
        let value = strip_comment(value.trim()).to_string();
        let entries = out.get_mut(&section).expect("section registered");
        if entries.contains_key(&key) {
            return Err(Error::config(format!("{section}.{key}"), "duplicate key"));
        }
        entries.insert(key, value);
    }
    Ok(out)
}

fn strip_comment(v: &str) -> &str {
    match v.find([';', '#']) {
        Some(i) => v[..i].trim_end(),
        None => v,
    }
}

struct Section<'a> {
    name: &'a str,
    entries: BTreeMap<String, String>,
}

impl<'a> Section<'a> {
    fn take(sections: &mut Sections, name: &'a str) -> Option<Self> {
        sections.remove(name).map(|entries| Self { name, entries })
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{}", self.name, key)
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| Error::config(self.path(key), format!("expected a number, got `{v}`"))),
        }
    }

    fn f64(&mut self, key: &str) -> Result<f64> {
        self.opt_f64(key)?
            .ok_or_else(|| Error::config(self.path(key), "missing key"))
    }

    fn opt_usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse::<usize>().map(Some).map_err(|_| {
                Error::config(self.path(key), format!("expected a nonnegative integer, got `{v}`"))
            }),
        }
    }

    fn string(&mut self, key: &str) -> Result<String> {
        self.raw(key)
            .ok_or_else(|| Error::config(self.path(key), "missing key"))
    }

    fn finish(self) -> Result<()> {
        match self.entries.keys().next() {
            Some(k) => Err(Error::config(self.path(k), "unknown key")),
            None => Ok(()),
        }
    }
}

fn positive(path: String, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::config(path, format!("must be positive, got {v}")))
    }
}

/// Parses and validates a configuration document. Relative table paths
/// are resolved against `base_dir`.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<Config> {
    let mut sections = tokenize(text)?;

    let mut sys = Section::take(&mut sections, "system")
        .ok_or_else(|| Error::config("system", "missing section"))?;
    let w_c = sys.f64("w_c")?;
    let hbar = sys.opt_f64("hbar")?.unwrap_or(1.0);
    let k = sys.f64("k")?;
    sys.finish()?;
    let constants = Constants::new(w_c, hbar, k)?;

    let mut prof = Section::take(&mut sections, "profile")
        .ok_or_else(|| Error::config("profile", "missing section"))?;
    let kind = prof.string("kind")?;
    let profile = match kind.as_str() {
        "constant" => {
            let a0 = prof.f64("A0")?;
            let a1 = prof.f64("A1")?;
            let a = prof.f64("a")?;
            if a0 == a1 {
                return Err(Error::config(prof.path("A1"), "A0 = A1 makes M(t) singular"));
            }
            CoefficientProfile::constant(a0, a1, a, w_c)
        }
        "frequency_jump" => {
            let w0 = prof.f64("w0")?;
            let w1 = prof.f64("w1")?;
            let t_jump = prof.f64("t_jump")?;
            builtin_frequency_jump(w0, w1, t_jump, w_c)?
        }
        "tanh_quench" => {
            let w0_sq = prof.f64("w0_sq")?;
            let delta = prof.f64("delta")?;
            let rate = prof.f64("rate")?;
            CoefficientProfile::tanh_quench(w0_sq, delta, rate, w_c)
        }
        "tabulated" => {
            let rel = prof.string("table_path")?;
            let path = resolve(base_dir, &rel);
            let table = read_table(&path).map_err(|e| match e {
                Error::Domain(msg) => Error::config(prof.path("table_path"), msg),
                other => other,
            })?;
            CoefficientProfile::tabulated(table, w_c)
        }
        other => {
            return Err(Error::config(
                prof.path("kind"),
                format!("unknown kind `{other}` (constant, frequency_jump, tanh_quench, tabulated)"),
            ))
        }
    };
    prof.finish()?;

    let mut integration = IntegrationSettings::default();
    if let Some(mut s) = Section::take(&mut sections, "integration") {
        integration.t0 = s.opt_f64("t0")?.unwrap_or(0.0);
        integration.t1 = s.opt_f64("t1")?;
        if let Some(v) = s.opt_f64("rel_tol")? {
            integration.rel_tol = positive(s.path("rel_tol"), v)?;
        }
        if let Some(v) = s.opt_f64("max_step")? {
            integration.max_step = positive(s.path("max_step"), v)?;
        }
        if let Some(t1) = integration.t1 {
            if !(t1 > integration.t0) {
                return Err(Error::config(s.path("t1"), format!("t1 = {t1} must exceed t0")));
            }
        }
        s.finish()?;
    }
    let (lo, hi) = profile.domain();
    let t_end = integration.t1.unwrap_or(integration.t0);
    if integration.t0 < lo || t_end > hi {
        return Err(Error::config(
            "integration",
            format!("[t0, t1] outside the profile domain [{lo}, {hi}]"),
        ));
    }
    profile
        .eval(integration.t0)
        .map_err(|e| Error::config("profile", e.to_string()))?;

    let mut bargmann = BargmannSettings::default();
    if let Some(mut s) = Section::take(&mut sections, "bargmann") {
        if let Some(n) = s.opt_usize("truncation_N")? {
            if n == 0 {
                return Err(Error::config(s.path("truncation_N"), "must be at least 1"));
            }
            bargmann.truncation_n = n;
        }
        if let Some(v) = s.opt_f64("tail_tol")? {
            bargmann.tail_tol = positive(s.path("tail_tol"), v)?;
        }
        s.finish()?;
    }

    let grid = match Section::take(&mut sections, "grid") {
        Some(mut s) => {
            let x_max = positive(s.path("x_max"), s.f64("x_max")?)?;
            let n_points = s
                .opt_usize("n_points")?
                .ok_or_else(|| Error::config(s.path("n_points"), "missing key"))?;
            if n_points < 2 {
                return Err(Error::config(s.path("n_points"), "need at least 2 points"));
            }
            s.finish()?;
            Some(GridSettings { x_max, n_points })
        }
        None => None,
    };

    let initial = match Section::take(&mut sections, "initial") {
        Some(mut s) => {
            let v = [s.f64("u0")?, s.f64("du0")?, s.f64("v0")?, s.f64("dv0")?];
            s.finish()?;
            Some(v)
        }
        None => None,
    };

    if let Some(name) = sections.keys().next() {
        return Err(Error::config(name.clone(), "unknown section"));
    }

    Ok(Config {
        constants,
        profile,
        integration,
        bargmann,
        grid,
        initial,
    })
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Reads a `t,A0,A1,a` CSV table.
pub fn read_table(path: &Path) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| Error::Domain(format!("bad table header: {e}")))?
        .clone();
    let want = ["t", "A0", "A1", "a"];
    if headers.len() != 4 || headers.iter().zip(want).any(|(h, w)| h != w) {
        return Err(Error::Domain(format!(
            "table header must be t,A0,A1,a, got {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Domain(format!("table row {}: {e}", i + 1)))?;
        let mut row = [0.0; 4];
        for (j, field) in rec.iter().enumerate() {
            row[j] = field
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("table row {}: `{field}` is not a number", i + 1)))?;
        }
        rows.push(row);
    }
    Table::new(rows)
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config> {
        parse_config(text, Path::new("."))
    }

    const MINIMAL: &str = "[system]\nw_c = 1\nk = 0.25\n[profile]\nkind = constant\nA0 = 2\nA1 = 0\na = 0\n";

    #[test]
    fn minimal_document_gets_defaults() {
        let c = parse(MINIMAL).unwrap();
        assert_eq!(c.constants.hbar, 1.0);
        assert_eq!(c.integration.t0, 0.0);
        assert_eq!(c.integration.rel_tol, 1e-10);
        assert_eq!(c.bargmann.truncation_n, 64);
        assert_eq!(c.bargmann.tail_tol, 1e-8);
        assert!(c.grid.is_none() && c.initial.is_none());
    }

    #[test]
    fn zero_k_is_rejected() {
        let err = parse(&MINIMAL.replace("k = 0.25", "k = 0")).unwrap_err();
        assert!(matches!(err, Error::Config { ref path, .. } if path == "system.k"), "{err}");
    }

    #[test]
    fn duplicate_and_missing_keys() {
        let dup = MINIMAL.replace("k = 0.25", "k = 0.25\nk = 0.75");
        assert!(matches!(parse(&dup), Err(Error::Config { ref path, .. }) if path == "system.k"));
        let missing = MINIMAL.replace("A1 = 0\n", "");
        assert!(matches!(parse(&missing), Err(Error::Config { ref path, .. }) if path == "profile.A1"));
    }

    #[test]
    fn type_mismatch_and_unknowns() {
        let bad = MINIMAL.replace("w_c = 1", "w_c = fast");
        assert!(matches!(parse(&bad), Err(Error::Config { ref path, .. }) if path == "system.w_c"));
        let extra = format!("{MINIMAL}[bargmann]\ntruncation_n = 3\n");
        assert!(matches!(parse(&extra), Err(Error::Config { ref path, .. }) if path == "bargmann.truncation_n"));
        let sect = format!("{MINIMAL}[plot]\n");
        assert!(parse(&sect).is_err());
    }

    #[test]
    fn full_document() {
        let text = "\
# quench run
[system]
w_c = 2.0
hbar = 1.0
k = 0.75
[profile]
kind = frequency_jump
w0 = 1 ; before
w1 = 2
t_jump = 0
[integration]
t0 = -1
t1 = 3
rel_tol = 1e-11
max_step = 0.005
[bargmann]
truncation_N = 16
tail_tol = 1e-6
[grid]
x_max = 8
n_points = 400
[initial]
u0 = 1
du0 = 0
v0 = 0
dv0 = 1
";
        let c = parse(text).unwrap();
        assert_eq!(c.integration.t1, Some(3.0));
        assert_eq!(c.bargmann.truncation_n, 16);
        assert_eq!(c.grid, Some(GridSettings { x_max: 8.0, n_points: 400 }));
        assert_eq!(c.initial, Some([1.0, 0.0, 0.0, 1.0]));
        assert_eq!(c.profile.jump_times(), vec![0.0]);
    }

    #[test]
    fn tabulated_rows_out_of_order() {
        let dir = std::env::temp_dir().join(format!("su11-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("bad.csv"), "t,A0,A1,a\n0,2,0,0\n2,2,0,0\n1,2,0,0\n").unwrap();
        std::fs::write(dir.join("good.csv"), "t,A0,A1,a\n0,2,0,0\n1,2.1,0.1,0\n2,2,0,0\n").unwrap();
        let doc = |f: &str| {
            format!("[system]\nw_c = 1\nk = 0.25\n[profile]\nkind = tabulated\ntable_path = {f}\n[integration]\nt1 = 2\n")
        };
        let err = parse_config(&doc("bad.csv"), &dir).unwrap_err();
        assert!(matches!(err, Error::Config { ref path, .. } if path == "profile.table_path"), "{err}");
        let ok = parse_config(&doc("good.csv"), &dir).unwrap();
        assert_eq!(ok.profile.domain(), (0.0, 2.0));
        let beyond = doc("good.csv").replace("t1 = 2", "t1 = 5");
        assert!(parse_config(&beyond, &dir).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}

//! Run configuration: a plain `key = value` file overlaid by command-line
//! flags, resolved and range-checked before anything is computed.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::channel::Model;
use crate::crossover::{DEFAULT_GRID_N, DEFAULT_TOL, MIN_GRID_N};
use crate::entropy::check_mu_grid;
use crate::error::{Error, Result};
use crate::linalg::NORM_TOL;

pub const DEFAULT_MU_POINTS: usize = 101;
/// Environment variable read for the default worker count.
pub const WORKERS_ENV: &str = "QUDIT_MEMORY_WORKERS";

/// Every key accepted in a config file, spelled like the long flags.
pub const KEYS: &[&str] = &[
    "model", "d", "dims", "eta", "etas", "nu", "nus", "mu-points", "mu-list", "state", "alphas",
    "phis", "offset", "output", "format", "tol", "grid-n", "workers",
];

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Curve,
    Crossover,
    Sweep,
    Validate,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Curve => "curve",
            Command::Crossover => "crossover",
            Command::Sweep => "sweep",
            Command::Validate => "validate",
        })
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!(
                "format: unknown value '{other}', expected one of csv, json"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MuGrid {
    /// Uniform grid of this many points from 0 to 1 inclusive.
    Points(usize),
    List(Vec<f64>),
}

impl MuGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            MuGrid::Points(n) => (0..*n).map(|i| i as f64 / (*n - 1) as f64).collect(),
            MuGrid::List(v) => v.clone(),
        }
    }
}

/// The input evaluated next to the product and maximally entangled states.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Product,
    MaxEntangled,
    /// The interpolating family at this angle.
    Alpha(f64),
    Ansatz {
        alphas: Vec<f64>,
        phis: Vec<f64>,
        offset: usize,
    },
}

impl StateSpec {
    /// Only alpha and ansatz states add an `I_custom` column.
    pub fn is_custom(&self) -> bool {
        matches!(self, StateSpec::Alpha(_) | StateSpec::Ansatz { .. })
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Product => f.write_str("product"),
            StateSpec::MaxEntangled => f.write_str("max-entangled"),
            StateSpec::Alpha(a) => write!(f, "alpha={a}"),
            StateSpec::Ansatz { alphas, phis, offset } => {
                write!(f, "ansatz alphas={} phis={} offset={offset}", join(alphas), join(phis))
            }
        }
    }
}

pub(crate) fn join<T: fmt::Display>(values: &[T]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Unparsed key/value settings from one source.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: Vec<(String, String)>,
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl RawConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing an earlier value. Unknown keys are an error.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let key = normalize_key(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }
        let value = value.into().trim().to_string();
        match self.entries.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((key, value)),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Parses `key = value` lines. `#` starts a comment; blank lines are
    /// skipped; a key given twice is an error.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected 'key = value', got '{line}'",
                    lineno + 1
                )));
            };
            if out.get(&normalize_key(key)).is_some() {
                return Err(Error::Config(format!(
                    "line {}: key '{}' given twice",
                    lineno + 1,
                    normalize_key(key)
                )));
            }
            out.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("config: cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `self` with every entry of `top` taking precedence.
    pub fn overlay(mut self, top: &RawConfig) -> Self {
        for (k, v) in &top.entries {
            self.set(k, v.clone()).expect("keys were validated on insert");
        }
        self
    }
}

fn parse_value<T: FromStr>(key: &'static str, raw: &str, what: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: '{raw}' is not {what}")))
}

fn parse_list<T: FromStr>(key: &'static str, raw: &str, what: &str) -> Result<Vec<T>> {
    let items: Vec<&str> = raw
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(Error::Config(format!("{key}: list is empty")));
    }
    items.iter().map(|s| parse_value(key, s, what)).collect()
}

fn in_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value, lo, hi })
    }
}

/// A fully resolved, validated run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: Model,
    /// One entry for curve and crossover.
    pub dims: Vec<usize>,
    pub etas: Vec<f64>,
    pub nus: Vec<f64>,
    pub mu_grid: MuGrid,
    pub state: StateSpec,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub tol: f64,
    pub grid_n: usize,
    /// Parallelism hint; never changes results or their order.
    pub workers: Option<usize>,
}

impl RunConfig {
    /// Resolves `raw` for `command`, checking every field against its range.
    /// `validate` needs no channel parameters and ignores them.
    pub fn resolve(command: Command, raw: &RawConfig) -> Result<Self> {
        let format = match raw.get("format") {
            Some(s) => s.parse()?,
            None => Format::default(),
        };
        let tol = match raw.get("tol") {
            Some(s) => {
                let t: f64 = parse_value("tol", s, "a number")?;
                if !(t > 0.0 && t < 1.0) {
                    return Err(Error::Config(format!("tol: {t} is outside its valid range (0, 1)")));
                }
                t
            }
            None => DEFAULT_TOL,
        };
        let grid_n = match raw.get("grid-n") {
            Some(s) => {
                let n: usize = parse_value("grid-n", s, "a positive integer")?;
                if n < MIN_GRID_N {
                    return Err(Error::Config(format!(
                        "grid-n: {n} is outside its valid range [{MIN_GRID_N}, inf)"
                    )));
                }
                n
            }
            None => DEFAULT_GRID_N,
        };
        let workers = match raw.get("workers") {
            Some(s) => {
                let w: usize = parse_value("workers", s, "a positive integer")?;
                if w == 0 {
                    return Err(Error::Config("workers: 0 is outside its valid range [1, inf)".into()));
                }
                Some(w)
            }
            None => None,
        };
        let output = raw.get("output").map(PathBuf::from);

        if command == Command::Validate {
            return Ok(Self {
                command,
                model: Model::Qd,
                dims: Vec::new(),
                etas: Vec::new(),
                nus: Vec::new(),
                mu_grid: MuGrid::Points(DEFAULT_MU_POINTS),
                state: StateSpec::Product,
                output,
                format,
                tol,
                grid_n,
                workers,
            });
        }

        let model: Model = raw
            .get("model")
            .ok_or_else(|| Error::Config("model: missing, expected one of qd, qcd".into()))?
            .parse()?;

        let sweep = command == Command::Sweep;
        let dims = pick_list::<usize>(raw, "d", "dims", sweep, "an integer >= 2")?;
        for &d in &dims {
            if d < 2 {
                return Err(Error::Config(format!("d: {d} is outside its valid range [2, inf)")));
            }
        }
        let etas = pick_list::<f64>(raw, "eta", "etas", sweep, "a number")?;
        for &eta in &etas {
            for &d in &dims {
                let (lo, hi) = model.eta_range(d);
                in_range("eta", eta, lo, hi)?;
            }
        }
        let nus = pick_list::<f64>(raw, "nu", "nus", sweep, "a number")?;
        for &nu in &nus {
            in_range("nu", nu, 0.0, 1.0)?;
        }

        let mu_grid = match (raw.get("mu-points"), raw.get("mu-list")) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("mu-points, mu-list: give at most one of them".into()))
            }
            (Some(s), None) => {
                let n: usize = parse_value("mu-points", s, "an integer")?;
                if n < 2 {
                    return Err(Error::Config(format!(
                        "mu-points: {n} is outside its valid range [2, inf)"
                    )));
                }
                MuGrid::Points(n)
            }
            (None, Some(s)) => {
                let v: Vec<f64> = parse_list("mu-list", s, "a number")?;
                check_mu_grid(&v).map_err(|e| Error::Config(format!("mu-list: {e}")))?;
                MuGrid::List(v)
            }
            (None, None) => MuGrid::Points(DEFAULT_MU_POINTS),
        };

        let state = resolve_state(raw, dims[0])?;
        if let StateSpec::Ansatz { alphas, .. } = &state {
            if let Some(&d) = dims.iter().find(|&&d| d != alphas.len()) {
                return Err(Error::Config(format!(
                    "alphas: {} values given but d = {d} needs {d}",
                    alphas.len()
                )));
            }
        }

        Ok(Self {
            command,
            model,
            dims,
            etas,
            nus,
            mu_grid,
            state,
            output,
            format,
            tol,
            grid_n,
            workers,
        })
    }

    /// Worker count from the environment, used when no hint is configured.
    pub fn workers_from_env() -> Result<Option<usize>> {
        match std::env::var(WORKERS_ENV) {
            Ok(s) if !s.trim().is_empty() => {
                let w: usize = s.trim().parse().map_err(|_| {
                    Error::Config(format!("{WORKERS_ENV}: '{s}' is not a positive integer"))
                })?;
                if w == 0 {
                    return Err(Error::Config(format!(
                        "{WORKERS_ENV}: 0 is outside its valid range [1, inf)"
                    )));
                }
                Ok(Some(w))
            }
            _ => Ok(None),
        }
    }

    /// The settings echoed in output headers. The worker hint and the output
    /// path are left out so equal runs give equal bytes wherever they land.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("artifact".to_string(), env!("CARGO_PKG_NAME").to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("command".to_string(), self.command.to_string()),
        ];
        if self.command == Command::Validate {
            return out;
        }
        let single = self.command != Command::Sweep;
        let pair = |k: &str, v: String| (k.to_string(), v);
        out.push(pair("model", self.model.to_string()));
        if single {
            out.push(pair("d", self.dims[0].to_string()));
            out.push(pair("eta", self.etas[0].to_string()));
            out.push(pair("nu", self.nus[0].to_string()));
        } else {
            out.push(pair("dims", join(&self.dims)));
            out.push(pair("etas", join(&self.etas)));
            out.push(pair("nus", join(&self.nus)));
        }
        match self.command {
            Command::Curve => {
                out.push(match &self.mu_grid {
                    MuGrid::Points(n) => pair("mu-points", n.to_string()),
                    MuGrid::List(v) => pair("mu-list", join(v)),
                });
                out.push(pair("state", self.state.to_string()));
            }
            _ => {
                out.push(pair("grid-n", self.grid_n.to_string()));
                out.push(pair("tol", self.tol.to_string()));
            }
        }
        out.push(pair("format", self.format.to_string()));
        out
    }
}

/// Values for the single key or its list form. Single-run commands need
/// exactly one value.
fn pick_list<T: FromStr + Copy>(
    raw: &RawConfig,
    single: &'static str,
    list: &'static str,
    allow_many: bool,
    what: &str,
) -> Result<Vec<T>> {
    let values = match (raw.get(single), raw.get(list)) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(format!("{single}, {list}: give at most one of them")))
        }
        (Some(s), None) => vec![parse_value(single, s, what)?],
        (None, Some(s)) => parse_list(list, s, what)?,
        (None, None) => {
            return Err(Error::Config(format!(
                "{single}: missing (set --{single}{})",
                if allow_many { format!(" or --{list}") } else { String::new() }
            )))
        }
    };
    if !allow_many && values.len() != 1 {
        return Err(Error::Config(format!(
            "{list}: this command takes a single value, got {}",
            values.len()
        )));
    }
    Ok(values)
}

fn resolve_state(raw: &RawConfig, d: usize) -> Result<StateSpec> {
    let ansatz_keys = ["alphas", "phis", "offset"]
        .iter()
        .any(|k| raw.get(k).is_some());
    let state = raw.get("state").map(|s| s.trim().to_ascii_lowercase());
    match state.as_deref() {
        None | Some("ansatz") if ansatz_keys => {
            let alphas: Vec<f64> = match raw.get("alphas") {
                Some(s) => parse_list("alphas", s, "a number")?,
                None => return Err(Error::Config("alphas: missing for an ansatz state".into())),
            };
            let phis: Vec<f64> = match raw.get("phis") {
                Some(s) => parse_list("phis", s, "a number")?,
                None => vec![0.0; alphas.len()],
            };
            if phis.len() != alphas.len() {
                return Err(Error::Config(format!(
                    "phis: {} values given but alphas has {}",
                    phis.len(),
                    alphas.len()
                )));
            }
            if let Some(&a) = alphas.iter().find(|a| !(**a >= 0.0)) {
                return Err(Error::Config(format!("alphas: {a} is outside its valid range [0, 1]")));
            }
            let norm: f64 = alphas.iter().map(|a| a * a).sum();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::Config(format!(
                    "alphas: sum of squares is {norm}, must be 1 within {NORM_TOL:e}"
                )));
            }
            let offset = match raw.get("offset") {
                Some(s) => parse_value("offset", s, "an integer")?,
                None => 0,
            };
            if offset >= d {
                return Err(Error::Config(format!(
                    "offset: {offset} is outside its valid range [0, {}]",
                    d - 1
                )));
            }
            Ok(StateSpec::Ansatz { alphas, phis, offset })
        }
        Some("ansatz") => Err(Error::Config("alphas: missing for an ansatz state".into())),
        _ if ansatz_keys => Err(Error::Config(
            "state: alphas/phis/offset only go with state = ansatz".into(),
        )),
        None | Some("product") => Ok(StateSpec::Product),
        Some("max-entangled") => Ok(StateSpec::MaxEntangled),
        Some(s) => match s.strip_prefix("alpha=") {
            Some(a) => {
                let alpha: f64 = parse_value("state", a, "a number")?;
                Ok(StateSpec::Alpha(in_range("alpha", alpha, 0.0, FRAC_PI_2)?))
            }
            None => Err(Error::Config(format!(
                "state: unknown value '{s}', expected product, max-entangled, alpha=<radians> or ansatz"
            ))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(&str, &str)]) -> RawConfig {
        let mut r = RawConfig::new();
        for (k, v) in pairs {
            r.set(k, *v).unwrap();
        }
        r
    }

    #[test]
    fn parses_file_text() {
        let r = RawConfig::parse("# recipe\nmodel = qd\n d=4 \n\neta = 0.8 # shrink\nmu_points = 11\n").unwrap();
        assert_eq!(r.get("model"), Some("qd"));
        assert_eq!(r.get("d"), Some("4"));
        assert_eq!(r.get("mu-points"), Some("11"));
        assert!(RawConfig::parse("model qd").is_err());
        assert!(RawConfig::parse("colour = red").is_err());
        assert!(RawConfig::parse("d = 2\nd = 3").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = raw(&[("model", "qd"), ("d", "4"), ("eta", "0.8"), ("nu", "0")]);
        let merged = file.overlay(&raw(&[("d", "2")]));
        let cfg = RunConfig::resolve(Command::Curve, &merged).unwrap();
        assert_eq!(cfg.dims, vec![2]);
        assert_eq!(cfg.mu_grid.values().len(), DEFAULT_MU_POINTS);
    }

    #[test]
    fn errors_name_field_and_range() {
        let base = [("model", "qd"), ("d", "3"), ("nu", "0")];
        let mut r = raw(&base);
        r.set("eta", "1.5").unwrap();
        let msg = RunConfig::resolve(Command::Curve, &r).unwrap_err().to_string();
        assert!(msg.contains("eta") && msg.contains("-0.125") && msg.contains('1'), "{msg}");

        let mut r = raw(&base);
        r.set("eta", "0.5").unwrap();
        r.set("nu", "2").unwrap();
        let msg = RunConfig::resolve(Command::Curve, &r).unwrap_err().to_string();
        assert!(msg.contains("nu") && msg.contains("[0, 1]"), "{msg}");

        let mut r = raw(&base);
        r.set("eta", "0.5").unwrap();
        r.set("grid-n", "4").unwrap();
        let msg = RunConfig::resolve(Command::Crossover, &r).unwrap_err().to_string();
        assert!(msg.contains("grid-n") && msg.contains("16"), "{msg}");

        let mut r = raw(&base);
        r.set("eta", "0.5").unwrap();
        r.set("state", "alpha=2").unwrap();
        let msg = RunConfig::resolve(Command::Curve, &r).unwrap_err().to_string();
        assert!(msg.contains("alpha"), "{msg}");

        let msg = RunConfig::resolve(Command::Curve, &raw(&[("d", "2")])).unwrap_err().to_string();
        assert!(msg.starts_with("configuration error: model"), "{msg}");
    }

    #[test]
    fn single_run_commands_take_one_value() {
        let r = raw(&[("model", "qd"), ("dims", "2,4"), ("eta", "0.8"), ("nu", "0")]);
        assert!(RunConfig::resolve(Command::Crossover, &r).is_err());
        let cfg = RunConfig::resolve(Command::Sweep, &r).unwrap();
        assert_eq!(cfg.dims, vec![2, 4]);
    }

    #[test]
    fn state_specs() {
        let base = raw(&[("model", "qcd"), ("d", "3"), ("eta", "0.4"), ("nu", "0")]);
        let with = |pairs: &[(&str, &str)]| RunConfig::resolve(Command::Curve, &base.clone().overlay(&raw(pairs)));
        assert_eq!(with(&[]).unwrap().state, StateSpec::Product);
        assert_eq!(with(&[("state", "max-entangled")]).unwrap().state, StateSpec::MaxEntangled);
        assert_eq!(with(&[("state", "alpha=0.5")]).unwrap().state, StateSpec::Alpha(0.5));
        let s = with(&[("alphas", "0.6, 0.8, 0"), ("offset", "1")]).unwrap().state;
        assert!(matches!(s, StateSpec::Ansatz { offset: 1, .. }));
        assert!(with(&[("alphas", "0.6,0.8")]).is_err());
        assert!(with(&[("alphas", "0.5,0.5,0.5")]).is_err());
        assert!(with(&[("state", "alpha=0.5"), ("alphas", "1,0,0")]).is_err());
        assert!(with(&[("state", "ghz")]).is_err());
    }

    #[test]
    fn mu_grid_forms() {
        assert_eq!(MuGrid::Points(5).values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let base = raw(&[("model", "qd"), ("d", "2"), ("eta", "0.8"), ("nu", "0")]);
        let r = base.clone().overlay(&raw(&[("mu-list", "0.5,0.2")]));
        assert!(RunConfig::resolve(Command::Curve, &r).is_err());
        let r = base.overlay(&raw(&[("mu-list", "0,0.5"), ("mu-points", "3")]));
        assert!(RunConfig::resolve(Command::Curve, &r).is_err());
    }
}

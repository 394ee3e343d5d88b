//! Command-line front end: `curve`, `crossover`, `sweep` and `validate`.
//!
//! Settings come from an optional `--config` file of `key = value` lines and
//! from flags, which take precedence. Results go to `--output` or stdout.

pub mod config;
pub mod emit;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::blocks::DifferenceBlocks;
use crate::channel::ChannelSpec;
use crate::crossover::{find_crossover, sweep_crossover, DeltaEvaluator};
use crate::entropy::{mutual_information, mutual_information_blocks};
use crate::error::{Error, Result};
use crate::states::{ansatz_state, interpolating_state, AnsatzParams, PureState};
use crate::validation;

pub use config::{Command, Format, MuGrid, RawConfig, RunConfig, StateSpec, WORKERS_ENV};
pub use emit::{CrossoverRecord, CurveRow, CurveTable};

#[derive(Debug, Parser)]
#[command(name = "qudit-memory", version, about = "Mutual information of two correlated qudit channel uses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// I(μ) for product, maximally entangled and an optional custom input.
    Curve(Flags),
    /// Crossover memory μ_c for one channel.
    Crossover(Flags),
    /// μ_c over every (d, η, ν) combination.
    Sweep(Flags),
    /// Run the self-check suite at small dimension.
    Validate(Flags),
}

/// Every flag is kept as text and parsed together with the config file so
/// both sources give the same diagnostics.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Config file of `key = value` lines; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// qd or qcd.
    #[arg(long, allow_hyphen_values = true)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    /// Comma-separated dimensions (sweep).
    #[arg(long, allow_hyphen_values = true)]
    pub dims: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub etas: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nus: Option<String>,
    /// Uniform μ grid from 0 to 1 with this many points.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_points: Option<String>,
    /// Explicit comma-separated μ values, strictly increasing.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_list: Option<String>,
    /// product, max-entangled, alpha=<radians> or ansatz.
    #[arg(long, allow_hyphen_values = true)]
    pub state: Option<String>,
    /// Ansatz amplitudes, one per basis pair.
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,
    /// Ansatz phases in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub phis: Option<String>,
    /// Ansatz diagonal offset m.
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub output: Option<String>,
    /// csv or json.
    #[arg(long, allow_hyphen_values = true)]
    pub format: Option<String>,
    /// Bisection tolerance on μ_c.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<String>,
    /// Scan intervals before bisection.
    #[arg(long, allow_hyphen_values = true)]
    pub grid_n: Option<String>,
    /// Worker threads (hint only).
    #[arg(long, env = WORKERS_ENV, allow_hyphen_values = true)]
    pub workers: Option<String>,
}

impl Flags {
    fn to_raw(&self) -> Result<RawConfig> {
        let mut raw = RawConfig::new();
        let pairs = [
            ("model", &self.model),
            ("d", &self.d),
            ("dims", &self.dims),
            ("eta", &self.eta),
            ("etas", &self.etas),
            ("nu", &self.nu),
            ("nus", &self.nus),
            ("mu-points", &self.mu_points),
            ("mu-list", &self.mu_list),
            ("state", &self.state),
            ("alphas", &self.alphas),
            ("phis", &self.phis),
            ("offset", &self.offset),
            ("output", &self.output),
            ("format", &self.format),
            ("tol", &self.tol),
            ("grid-n", &self.grid_n),
            ("workers", &self.workers),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                raw.set(k, v.clone())?;
            }
        }
        Ok(raw)
    }

    /// File settings overlaid by flags, resolved for `command`.
    pub fn resolve(&self, command: Command) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::new(),
        };
        RunConfig::resolve(command, &file.overlay(&self.to_raw()?))
    }
}

impl Sub {
    pub fn resolve(&self) -> Result<RunConfig> {
        match self {
            Sub::Curve(f) => f.resolve(Command::Curve),
            Sub::Crossover(f) => f.resolve(Command::Crossover),
            Sub::Sweep(f) => f.resolve(Command::Sweep),
            Sub::Validate(f) => f.resolve(Command::Validate),
        }
    }
}

/// Outcome of a successful run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub bytes: Vec<u8>,
    /// False only when `validate` found a failing check.
    pub passed: bool,
}

/// Executes `config` and returns the rendered output without writing it.
pub fn execute(config: &RunConfig) -> Result<RunOutcome> {
    let work = || -> Result<RunOutcome> {
        match config.command {
            Command::Curve => Ok(RunOutcome {
                bytes: emit::render_curve(&curve_table(config)?, config.format)?,
                passed: true,
            }),
            Command::Crossover => {
                let (d, eta, nu) = (config.dims[0], config.etas[0], config.nus[0]);
                let spec = ChannelSpec::new(config.model, d, eta, 0.0, nu)?;
                let record = CrossoverRecord {
                    model: config.model.to_string(),
                    d,
                    eta,
                    nu,
                    result: find_crossover(&spec, config.grid_n, config.tol)?,
                };
                Ok(RunOutcome {
                    bytes: emit::render_crossover(&config.echo(), &[record], config.format)?,
                    passed: true,
                })
            }
            Command::Sweep => {
                let rows = sweep_crossover(
                    config.model,
                    &config.dims,
                    &config.etas,
                    &config.nus,
                    config.grid_n,
                    config.tol,
                )?;
                Ok(RunOutcome {
                    bytes: emit::render_sweep(&config.echo(), &rows, config.format)?,
                    passed: true,
                })
            }
            Command::Validate => {
                let checks = validation::run_suite();
                let mut out = Vec::new();
                for c in &checks {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    writeln!(out, "{tag} {}: {}", c.name, c.detail)?;
                }
                let passed = checks.iter().all(|c| c.passed);
                writeln!(
                    out,
                    "{} of {} checks passed",
                    checks.iter().filter(|c| c.passed).count(),
                    checks.len()
                )?;
                Ok(RunOutcome { bytes: out, passed })
            }
        }
    };
    let workers = match config.workers {
        Some(w) => Some(w),
        None => RunConfig::workers_from_env()?,
    };
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("workers: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Builds the curve for a resolved `curve` config.
pub fn curve_table(config: &RunConfig) -> Result<CurveTable> {
    let (d, eta, nu) = (config.dims[0], config.etas[0], config.nus[0]);
    let spec = ChannelSpec::new(config.model, d, eta, 0.0, nu)?;
    let eval = DeltaEvaluator::new(&spec)?;
    let custom = match &config.state {
        StateSpec::Alpha(a) => Some(interpolating_state(d, *a)?),
        StateSpec::Ansatz { alphas, phis, offset } => {
            Some(ansatz_state(d, &AnsatzParams::new(alphas.clone(), phis.clone(), *offset)?)?)
        }
        StateSpec::Product | StateSpec::MaxEntangled => None,
    };
    let custom_eval = custom.as_ref().map(CustomInput::new);
    let rows = config
        .mu_grid
        .values()
        .par_iter()
        .map(|&mu| {
            let (i_product, i_entangled) = eval.both(mu)?;
            let i_custom = match &custom_eval {
                Some(c) => Some(c.information(&spec.with_mu(mu)?)?),
                None => None,
            };
            Ok(CurveRow {
                mu,
                i_product,
                i_entangled,
                i_custom,
                delta: i_entangled - i_product,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveTable {
        metadata: config.echo(),
        has_custom: custom.is_some(),
        rows,
    })
}

enum CustomInput {
    Blocks(DifferenceBlocks),
    Dense(crate::linalg::DensityMatrix),
}

impl CustomInput {
    fn new(state: &PureState) -> Self {
        match DifferenceBlocks::from_pure(state) {
            Some(b) => CustomInput::Blocks(b),
            None => CustomInput::Dense(state.to_density()),
        }
    }

    fn information(&self, spec: &ChannelSpec) -> Result<f64> {
        match self {
            CustomInput::Blocks(b) => mutual_information_blocks(spec, b),
            CustomInput::Dense(rho) => mutual_information(spec, rho),
        }
    }
}

/// Parses `args` (program name first), runs, writes the output and returns
/// the process exit code: 0 on success, 1 when validation fails, 2 on error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = cli.command.resolve().and_then(|config| {
        let outcome = execute(&config)?;
        emit::write_output(config.output.as_deref(), &outcome.bytes)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

//! Command-line front end.
//!
//! Settings are taken from the built-in defaults, then the `--config` file
//! (or the figure preset for `reproduce`), then individual flags, with later
//! sources overriding earlier ones.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{analyze, sweep, AnalysisReport};
use crate::config::{parse_angle, Angle, RunConfig};
use crate::error::{Error, Result};
use crate::output::{write_report, write_spectrum_csv};
use crate::presets::FigureId;
use crate::verify::run_all;

#[derive(Debug, Parser)]
#[command(name = "qdchain", version, about = "Transport through PT-symmetric quantum-dot chains")]
pub struct Cli {
    /// Worker threads for sweeps (defaults to all cores).
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep transmission and amplitude, write long-format CSV.
    Spectrum(RunArgs),
    /// Sweep and report peaks, antiresonances and phase features.
    Analyze(RunArgs),
    /// Regenerate the data behind one figure panel.
    Reproduce {
        /// Panel id, e.g. fig3c.
        figure: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Run the self-check suite.
    Verify,
}

#[derive(Debug, Default, Clone, Args)]
pub struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of dots.
    #[arg(long)]
    pub n: Option<usize>,
    /// Interdot hopping.
    #[arg(long)]
    pub tc: Option<f64>,
    /// Gain/loss strengths, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Flux values, comma separated; accepts `pi`, `2pi`, `pi/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Center-dot detuning (odd chains).
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Chain-lead coupling.
    #[arg(long)]
    pub v0: Option<f64>,
    /// Lead hopping.
    #[arg(long)]
    pub t0: Option<f64>,
    /// Energy grid as `min:max:points`.
    #[arg(long, allow_hyphen_values = true, value_name = "A:B:POINTS")]
    pub omega_range: Option<String>,
}

fn parse_list<T>(text: &str, what: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| parse(item.trim()).map_err(|_| Error::Config(format!("bad {what} value {item:?}"))))
        .collect()
}

/// Parses `min:max:points`.
pub fn parse_omega_range(text: &str) -> Result<(f64, f64, usize)> {
    let bad = || Error::Config(format!("omega range must look like min:max:points, got {text:?}"));
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}

impl RunArgs {
    /// Applies the flags on top of `config`.
    pub fn apply(&self, config: &mut RunConfig) -> Result<()> {
        if let Some(n) = self.n {
            config.chain.n_dots = n;
        }
        if let Some(tc) = self.tc {
            config.chain.tc = tc;
        }
        if let Some(delta) = self.delta {
            config.chain.delta = delta;
        }
        if let Some(v0) = self.v0 {
            config.coupling.v0 = v0;
        }
        if let Some(t0) = self.t0 {
            config.leads.t0 = t0;
        }
        if let Some(g) = &self.gamma {
            config.sweep.gammas = parse_list(g, "gamma", |s| {
                s.parse::<f64>().map_err(|e| Error::Config(e.to_string()))
            })?;
        }
        if let Some(p) = &self.phi {
            config.sweep.phis = parse_list(p, "phi", |s| parse_angle(s).map(Angle))?;
        }
        if let Some(r) = &self.omega_range {
            let (a, b, points) = parse_omega_range(r)?;
            config.sweep.omega_min = a;
            config.sweep.omega_max = b;
            config.sweep.omega_points = points;
        }
        if let Some(out) = &self.out {
            config.output.path = Some(out.clone());
        }
        Ok(())
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        self.apply(&mut config)?;
        Ok(config)
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes the sweep described by `config` as CSV.
pub fn cmd_spectrum(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let series = sweep(&config.template(), &config.sweep.gammas, &config.phis(), &config.grid()?)?;
    log::info!("{} series of {} points", series.len(), config.sweep.omega_points);
    write_spectrum_csv(open_output(config.output.path.as_deref())?, &series)
}

pub fn analyze_config(config: &RunConfig) -> Result<Vec<AnalysisReport>> {
    config.validate()?;
    let series = sweep(&config.template(), &config.sweep.gammas, &config.phis(), &config.grid()?)?;
    series.iter().map(|s| analyze(s, &config.analysis)).collect()
}

/// Writes the feature report for every series of the sweep.
pub fn cmd_analyze(config: &RunConfig) -> Result<()> {
    let reports = analyze_config(config)?;
    write_report(open_output(config.output.path.as_deref())?, &reports)
}

/// Writes the CSV for a figure panel; `args` may override preset values.
pub fn cmd_reproduce(figure: &str, args: &RunArgs) -> Result<()> {
    let id: FigureId = figure.parse()?;
    let mut config = id.config();
    args.apply(&mut config)?;
    log::info!("reproducing {id}");
    cmd_spectrum(&config)
}

/// Prints one line per check; returns whether all passed.
pub fn cmd_verify<W: Write>(mut out: W) -> Result<bool> {
    let checks = run_all()?;
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} checks, {} failed", checks.len(), failed)?;
    Ok(failed == 0)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    let result = match &cli.command {
        Command::Spectrum(args) => args.resolve().and_then(|c| cmd_spectrum(&c)).map(|_| true),
        Command::Analyze(args) => args.resolve().and_then(|c| cmd_analyze(&c)).map(|_| true),
        Command::Reproduce { figure, args } => {
            let with_file = match &args.config {
                Some(_) => Err(Error::Config("reproduce takes its settings from the preset; drop --config".into())),
                None => Ok(()),
            };
            with_file.and_then(|_| cmd_reproduce(figure, args)).map(|_| true)
        }
        Command::Verify => cmd_verify(io::stdout().lock()),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

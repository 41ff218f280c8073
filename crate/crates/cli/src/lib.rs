//! Command-line front end: configuration, the five subcommands and their
//! CSV/JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};
use error::{CliError, CliResult};
use output::OutDir;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SUSYCHAIN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "susychain", version, about = "Saw-chain flat bands and Darboux-coupled Dirac operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration file; built-in defaults when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for CSV and JSON output.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Override for the verification tolerances.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
    /// Points of the base spatial grid.
    #[arg(long = "grid-points", global = true, value_name = "N")]
    pub grid_points: Option<usize>,
    /// Half-width of the spatial box (grid and chain).
    #[arg(long = "box", global = true, value_name = "W")]
    pub half_width: Option<f64>,
    /// Number of chain cells.
    #[arg(long, global = true, value_name = "N")]
    pub cells: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bloch bands on a uniform k-grid.
    Bands,
    /// Flat-band solutions for t_cc.
    Tune,
    /// Darboux frame, transformed potential and its checks.
    Susy,
    /// Finite-chain and/or discretized spectrum of a model.
    Spectrum,
    /// The full property suite.
    Verify,
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            tol: self.tol,
            grid_points: self.grid_points,
            half_width: self.half_width,
            cells: self.cells,
        }
    }
}

/// Thread cap from the environment; `None` when unset.
pub fn thread_cap(value: Option<&str>) -> CliResult<Option<usize>> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV}: expected a positive integer, got {v:?}"))),
        },
    }
}

/// Run one subcommand. Returns the lines to print on success.
pub fn run(cli: &Cli) -> CliResult<Vec<String>> {
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides())?;
    let out = OutDir::new(&cli.out);
    let dir = out.path().display().to_string();
    let lines = match cli.command {
        Command::Bands => {
            let r = commands::bands::run(&cfg, &out)?;
            let flat = match &r.flat_band {
                Some(f) => format!("flat band {} at {:.6e}", f.band, f.energy.0),
                None => "no flat band".into(),
            };
            vec![format!("wrote {dir}/bands.csv, {dir}/bands.json ({flat})")]
        }
        Command::Tune => {
            let r = commands::tune::run(&cfg, &out)?;
            let mut lines: Vec<String> = r
                .solutions
                .iter()
                .map(|s| format!("t_cc = {}  a2 = {}  residual = {:.3e}", output::fmt17(s.t_cc.0), output::fmt17(s.a2.0), s.residual_max_over_k.0))
                .collect();
            lines.push(format!("wrote {dir}/tune.json"));
            lines
        }
        Command::Susy => {
            let r = commands::susy::run(&cfg, &out)?;
            vec![
                format!("dual-path difference {:.3e}, hermiticity {:.3e}", r.dual_path_max_diff.0, r.hermiticity_max_asymmetry.0),
                format!("wrote {dir}/potential.csv, {dir}/susy.json"),
            ]
        }
        Command::Spectrum => {
            let r = commands::spectrum::run(&cfg, &out)?;
            let mut lines = vec![format!("analytic edges ±{:.6e} ({})", r.analytic.upper.0, r.analytic.provenance)];
            for (name, m) in [("chain", r.chain.as_ref().map(|c| &c.measured)), ("continuum", r.continuum.as_ref().map(|c| &c.measured))] {
                if let Some(m) = m {
                    lines.push(format!(
                        "{name}: cluster {} of {} states, edges {:?} / {:?}",
                        m.cluster_count,
                        m.states,
                        m.gap_lower.map(|v| v.0),
                        m.gap_upper.map(|v| v.0)
                    ));
                }
            }
            lines.push(format!("wrote {dir}/spectrum.json"));
            lines
        }
        Command::Verify => {
            let r = commands::verify::run(&cfg, &out)?;
            let mut lines: Vec<String> = r
                .checks
                .iter()
                .map(|c| {
                    let verdict = if c.pass { "PASS" } else { "FAIL" };
                    format!("{verdict} [{}] {} = {:.6e} ({} {:.1e})", c.criterion, c.name, c.measured.0, c.kind, c.bound.0)
                })
                .collect();
            if r.failed > 0 {
                for l in &lines {
                    println!("{l}");
                }
                return Err(CliError::Verification(format!("{} of {} checks failed; see {dir}/verify.json", r.failed, r.checks.len())));
            }
            lines.push(format!("all {} checks passed; wrote {dir}/verify.json", r.passed));
            lines
        }
    };
    Ok(lines)
}

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use eofbound::bounds::{SweepConfig, DEFAULT_GRID};
use eofbound::region::GridSpec;

use crate::commands;
use crate::error::{CliError, CliResult};
use crate::figures::{self, FigureConfig, DEFAULT_MU4};
use crate::state_file::read_state;
use crate::surface_file::{self, cache_path, SurfaceParams};
use crate::verify::{self, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "eofbound", version, about = "Entanglement monotones and EOF lower bounds for 4xN states")]
pub struct Cli {
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Nodes per axis of the bound surface.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    pub grid: usize,

    /// Sweep step in the smallest Schmidt coefficient.
    #[arg(long = "mu4-step", global = true, default_value_t = 1e-3)]
    pub mu4_step: f64,

    /// Use max(n_T, n_R) in place of n_T.
    #[arg(long = "use-realignment", global = true)]
    pub use_realignment: bool,

    /// Surface file; defaults to the cache entry for --grid and --mu4-step.
    #[arg(long, global = true)]
    pub surface: Option<PathBuf>,

    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Accept state files with N above 16.
    #[arg(long = "allow-large", global = true)]
    pub allow_large: bool,

    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print n_T, n_Phi, n_R and the region class of a state.
    Monotones { state: PathBuf },
    /// Print the EOF lower bound of a state from a cached surface.
    Bound { state: PathBuf },
    /// Build the bound surface (reusing a matching cached file).
    BuildSurface {
        /// Rebuild even when a matching file exists.
        #[arg(long)]
        force: bool,
    },
    /// Write plot data for the region, coverage, surface and contours.
    ExportFigures {
        /// Smallest-coefficient values for the coverage masks.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_MU4)]
        mu4: Vec<f64>,
        /// Number of pure-state scatter points.
        #[arg(long, default_value_t = 5000)]
        scatter: usize,
    },
    /// Run the verification suite and print a JSON summary.
    Verify {
        #[arg(long, default_value_t = 10_000)]
        pure_samples: usize,
        #[arg(long, default_value_t = 1000)]
        ensemble_samples: usize,
        #[arg(long, default_value_t = 1000)]
        separable_samples: usize,
        #[arg(long, default_value_t = 1000)]
        formula_samples: usize,
        #[arg(long, default_value_t = 10_000)]
        convexity_pairs: usize,
        /// Simplex lattice resolution of the brute-force oracle.
        #[arg(long, default_value_t = 400)]
        resolution: u32,
        /// Replacement for the log2(3) constant in the oracle comparison.
        #[arg(long = "log2-3", hide = true)]
        log2_3: Option<f64>,
    },
    /// Print the nodes reachable at each smallest-coefficient value.
    Coverage {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_MU4)]
        mu4: Vec<f64>,
    },
}

impl Cli {
    pub fn params(&self) -> CliResult<SurfaceParams> {
        let grid = GridSpec::new(self.grid).map_err(|e| CliError::Usage(e.to_string()))?;
        let sweep = SweepConfig::with_step(self.mu4_step);
        Ok(SurfaceParams { grid, sweep })
    }

    fn surface_path(&self) -> CliResult<PathBuf> {
        match &self.surface {
            Some(p) => Ok(p.clone()),
            None => Ok(cache_path(&self.params()?)),
        }
    }
}

fn emit(out: &mut impl Write, text: &str) -> CliResult<()> {
    writeln!(out, "{text}").map_err(|e| CliError::io("<stdout>", e))
}

fn emit_or_write(out: &mut impl Write, target: Option<&Path>, text: &str) -> CliResult<()> {
    match target {
        Some(p) => commands::write_file(p, text),
        None => emit(out, text.trim_end()),
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialise")
}

/// Executes one parsed command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut impl Write) -> CliResult<()> {
    match &cli.command {
        Command::Monotones { state } => {
            let (file, rho) = read_state(state, cli.allow_large)?;
            let r = commands::monotones(&rho, file.label, cli.use_realignment)?;
            emit(out, &if cli.json { json(&r) } else { r.to_string() })
        }
        Command::Bound { state } => {
            let (file, rho) = read_state(state, cli.allow_large)?;
            let surface = surface_file::load(&cli.surface_path()?)?;
            let m = commands::monotones(&rho, file.label, cli.use_realignment)?;
            let r = commands::bound(&surface, m)?;
            emit(out, &if cli.json { json(&r) } else { r.to_string() })
        }
        Command::BuildSurface { force } => {
            let params = cli.params()?;
            let path = match (&cli.output, &cli.surface) {
                (Some(p), _) | (None, Some(p)) => p.clone(),
                (None, None) => cache_path(&params),
            };
            let (report, _) = commands::build(params, &path, *force)?;
            emit(out, &report.to_string())
        }
        Command::ExportFigures { mu4, scatter } => {
            let surface = surface_file::load(&cli.surface_path()?)?;
            let dir = cli.output.clone().unwrap_or_else(|| PathBuf::from("figures"));
            let cfg = FigureConfig {
                mu4: mu4.clone(),
                scatter_samples: *scatter,
                seed: cli.seed,
                ..FigureConfig::default()
            };
            for p in figures::export(&surface, &dir, &cfg)? {
                emit(out, &p.display().to_string())?;
            }
            Ok(())
        }
        Command::Verify {
            pure_samples,
            ensemble_samples,
            separable_samples,
            formula_samples,
            convexity_pairs,
            resolution,
            log2_3,
        } => {
            let path = cli.surface_path()?;
            let surface = match surface_file::load(&path) {
                Ok(s) => s,
                Err(CliError::MissingSurface(_)) if cli.surface.is_none() => {
                    log::info!("no cached surface; building {}", path.display());
                    commands::build(cli.params()?, &path, false)?.1
                }
                Err(e) => return Err(e),
            };
            let defaults = VerifyConfig::default();
            let cfg = VerifyConfig {
                seed: cli.seed,
                pure_samples: *pure_samples,
                ensemble_samples: *ensemble_samples,
                separable_samples: *separable_samples,
                formula_samples: *formula_samples,
                convexity_pairs: *convexity_pairs,
                resolution: *resolution,
                log2_3: log2_3.unwrap_or(defaults.log2_3),
                ..defaults
            };
            let summary = verify::run(&surface, &cfg)?;
            emit_or_write(out, cli.output.as_deref(), &(json(&summary) + "\n"))?;
            if summary.passed {
                Ok(())
            } else {
                let failed: Vec<String> = summary
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| format!("{} ({})", c.id, c.name))
                    .collect();
                Err(CliError::Verification(format!("failed checks: {}", failed.join(", "))))
            }
        }
        Command::Coverage { mu4 } => {
            let table = commands::coverage_table(cli.params()?.grid, mu4)?;
            emit_or_write(out, cli.output.as_deref(), &table)
        }
    }
}

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, Result, EXIT_VALIDATION};
use crate::spec::StateSpec;
use crate::sweep::{FamilyKind, Measures, Range, SweepSpec, DEFAULT_MEASURES};
use crate::{compute, protocol, sweep, validate};

#[derive(Debug, Parser)]
#[command(
    name = "ogd",
    version,
    about = "Gaussian discord measures for two-mode states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Seed for optimizer start points and random test states.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute OGD, GQD and Renyi-2 discord for one state.
    Compute {
        /// TOML state file.
        #[arg(long)]
        state: PathBuf,
        /// Also write a JSON record here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Sweep one parameter of a reference family and write CSV.
    Sweep {
        #[arg(long)]
        family: FamilyKind,
        /// Fixed family parameter, `name=value`; repeat for each.
        #[arg(long = "param", value_parser = sweep::parse_param)]
        params: Vec<(String, f64)>,
        /// `start:stop:step` for the remaining parameter.
        #[arg(long, allow_hyphen_values = true)]
        range: Range,
        #[arg(long, default_value = DEFAULT_MEASURES)]
        measures: Measures,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Local and joint mutual informations of the signal-encoding protocol.
    Protocol {
        #[arg(long)]
        state: PathBuf,
        /// Comma-separated signal variances (default 1,1e2,1e4,1e6,1e8).
        #[arg(long)]
        vs: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Run the acceptance checks and print a table.
    Validate {
        #[command(flatten)]
        seed: SeedArg,
        /// Comma-separated criterion numbers to run (default all).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
        /// Replace one criterion's tolerances with unsatisfiable ones.
        #[arg(long, hide = true)]
        corrupt_tolerance: Option<u8>,
    },
}

fn load_state(path: &Path) -> Result<(StateSpec, ogd_core::TwoModeCov)> {
    let spec = StateSpec::load(path)?;
    let state = spec.state()?;
    Ok((spec, state))
}

fn write_output(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => stdout.write_all(bytes).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

/// Runs a parsed command, writing reports to `stdout`. Returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Compute { state, out, seed } => {
            let (spec, cov) = load_state(&state)?;
            let family = spec.family();
            let rec = compute::compute(&cov, family.as_ref(), seed.seed)?;
            write_output(None, compute::render_text(&rec).as_bytes(), stdout)?;
            if let Some(path) = out {
                compute::write_json(&rec, &path)?;
            }
            Ok(0)
        }
        Command::Sweep {
            family,
            params,
            range,
            measures,
            out,
            seed,
        } => {
            let spec = SweepSpec::new(family, &params, range, measures, seed.seed)?;
            let rows = sweep::run(&spec)?;
            let mut buf = Vec::new();
            sweep::write_csv(&rows, &mut buf)?;
            write_output(out.as_deref(), &buf, stdout)?;
            Ok(0)
        }
        Command::Protocol {
            state,
            vs,
            out,
            seed,
        } => {
            let (_, cov) = load_state(&state)?;
            let schedule = match vs {
                Some(s) => protocol::parse_schedule(&s)?,
                None => protocol::default_schedule(),
            };
            let study = protocol::run(&cov, &schedule, seed.seed)?;
            let mut buf = Vec::new();
            protocol::write_csv(&study, &mut buf)?;
            write_output(out.as_deref(), &buf, stdout)?;
            Ok(0)
        }
        Command::Validate {
            seed,
            only,
            corrupt_tolerance,
        } => {
            let opts = validate::ValidateOptions {
                seed: seed.seed,
                only,
                corrupt_tolerance,
            };
            let checks = validate::run(&opts)?;
            write_output(None, validate::render_table(&checks).as_bytes(), stdout)?;
            Ok(if validate::all_passed(&checks) {
                0
            } else {
                EXIT_VALIDATION
            })
        }
    }
}

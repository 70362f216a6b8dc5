//! `minsurf`: catalog listing, verification, derivation by recursion and
//! surface synthesis from the command line.
//!
//! Exit codes: 0 success, 1 verification or run failure, 2 usage or name error.

mod catalog_cmd;
mod config;
mod surface_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use minsurf::legendre::GridSpec;
use serde::Deserialize;

use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "minsurf", version, about = "Contact symmetries and minimal surfaces of the minimal surface equation")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Catalog manifest read on start and written by `derive --register`.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog generators whose name contains FILTER.
    List { filter: Option<String> },
    /// Check residuals and brackets of catalog names, ranges such as
    /// `phi5..phi13`, or expressions.
    Verify {
        #[arg(required = true, allow_hyphen_values = true)]
        names: Vec<String>,
    },
    /// Apply recursion operators (rot12, t1, t2, dil) to a seed, left to right.
    Derive {
        seed: String,
        #[arg(required = true)]
        ops: Vec<String>,
        /// Add the results to the manifest.
        #[arg(long)]
        register: bool,
    },
    /// Sample, triangulate and export the surface of one generator.
    Surface {
        #[arg(allow_hyphen_values = true)]
        name: String,
        #[arg(long, value_name = "PMIN:PMAX:PCOUNT,QMIN:QMAX:QCOUNT", allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Vec<Format>,
        /// Accept expressions that do not solve the linearised equation.
        #[arg(long)]
        allow_nonminimal: bool,
        #[arg(long, value_name = "FLOAT", allow_negative_numbers = true)]
        tol_h: Option<f64>,
        #[arg(long, value_name = "FLOAT", allow_negative_numbers = true)]
        eps_s: Option<f64>,
    },
    /// Export the surfaces of phi5 .. phi13 with a summary manifest.
    Gallery {
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "NAME")]
        only: Vec<String>,
        #[arg(long, value_enum)]
        format: Vec<Format>,
        #[arg(long, value_name = "FLOAT", allow_negative_numbers = true)]
        tol_h: Option<f64>,
        #[arg(long, value_name = "FLOAT", allow_negative_numbers = true)]
        eps_s: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Obj,
    Ply,
    Csv,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Obj, Format::Ply, Format::Csv];

    pub fn ext(&self) -> &'static str {
        match self {
            Format::Obj => "obj",
            Format::Ply => "ply",
            Format::Csv => "csv",
        }
    }
}

/// Error carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unknown name, bad argument or invalid configuration.
    Usage(anyhow::Error),
    /// A check did not pass.
    Verification(String),
    /// Filesystem or other run-time error.
    Runtime(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Verification(_) | Failure::Runtime(_) => 1,
        }
    }

    pub fn usage(msg: impl std::fmt::Display) -> Self {
        Failure::Usage(anyhow::anyhow!("{msg}"))
    }
}

pub type CmdResult = Result<(), Failure>;

fn build_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(Failure::Usage)?,
        None => RunConfig::default(),
    };
    if let Some(m) = &cli.manifest {
        cfg.manifest = m.clone();
    }
    Ok(cfg)
}

fn apply_overrides(
    cfg: &mut RunConfig,
    out: &Option<PathBuf>,
    format: &[Format],
    tol_h: Option<f64>,
    eps_s: Option<f64>,
) -> Result<(), Failure> {
    if let Some(out) = out {
        cfg.out = out.clone();
    }
    if !format.is_empty() {
        let mut formats = format.to_vec();
        formats.sort();
        formats.dedup();
        cfg.formats = formats;
    }
    if let Some(v) = tol_h {
        cfg.set_tol_h(v).map_err(Failure::Usage)?;
    }
    if let Some(v) = eps_s {
        cfg.set_eps_s(v).map_err(Failure::Usage)?;
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    let mut cfg = build_config(&cli)?;
    match cli.command {
        Command::List { filter } => catalog_cmd::list(&cfg, filter.as_deref()),
        Command::Verify { names } => catalog_cmd::verify(&cfg, &names),
        Command::Derive { seed, ops, register } => catalog_cmd::derive(&cfg, &seed, &ops, register),
        Command::Surface { name, grid, out, format, allow_nonminimal, tol_h, eps_s } => {
            apply_overrides(&mut cfg, &out, &format, tol_h, eps_s)?;
            surface_cmd::surface(&cfg, &name, grid, allow_nonminimal)
        }
        Command::Gallery { out, only, format, tol_h, eps_s } => {
            apply_overrides(&mut cfg, &out, &format, tol_h, eps_s)?;
            surface_cmd::gallery(&cfg, &only)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(e) | Failure::Runtime(e) => eprintln!("error: {e:#}"),
                Failure::Verification(msg) => eprintln!("{msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qfc::commands;
use qfc::config::RunConfig;
use qfc::netlink::{write_sweep_csv, write_sweep_log10_csv};
use qfc::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qfc",
    version,
    about = "Quantum frequency conversion design and analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Evaluate dispersion outside the model's validity box.
    #[arg(long)]
    allow_extrapolation: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Poling period and temperature tuning slopes.
    Design(Common),
    /// Phase-matching curve as CSV.
    Curve {
        #[command(flatten)]
        common: Common,
        /// Override the curve grid as START:STOP:STEP in nm.
        #[arg(long)]
        range: Option<String>,
    },
    /// Fit the normalized efficiency to measured points.
    Efficiency {
        #[command(flatten)]
        common: Common,
        /// CSV with header `P_pump_W,eta_ext`.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Photon budget from a counts CSV.
    Budget {
        #[command(flatten)]
        common: Common,
        /// CSV with header `integration_s,signal_counts,noise_counts`.
        #[arg(long)]
        counts: Option<PathBuf>,
    },
    /// Network link sweep and summary.
    Link {
        #[command(flatten)]
        common: Common,
        /// Comma-separated distances in km.
        #[arg(long, value_delimiter = ',')]
        distances: Option<Vec<f64>>,
    },
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(&common.config)?;
    if common.allow_extrapolation {
        cfg.set_allow_extrapolation(true);
    }
    Ok(cfg)
}

fn open(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            Error::Io {
                path: p.to_path_buf(),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut w = open(out)?;
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidParameter(format!("JSON encoding failed: {e}")))?;
    writeln!(w, "{text}")
        .and_then(|_| w.flush())
        .map_err(|source| Error::Io {
            path: out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| "<stdout>".into()),
            source,
        })
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn parse_range(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameter(format!("bad --range `{s}`: {e}")))?;
    match parts.as_slice() {
        [a, b, c] => Ok((*a, *b, *c)),
        _ => Err(Error::InvalidParameter(format!(
            "--range expects START:STOP:STEP, got `{s}`"
        ))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Design(common) => {
            let report = commands::design(&load(&common)?)?;
            write_json(&report, common.out.as_deref())
        }
        Command::Curve { common, range } => {
            let mut cfg = load(&common)?;
            if let Some(r) = range {
                let (start_nm, stop_nm, step_nm) = parse_range(&r)?;
                cfg.curve = Some(qfc::config::CurveSection {
                    start_nm,
                    stop_nm,
                    step_nm,
                });
                cfg.validate()?;
            }
            let report = commands::curve(&cfg)?;
            match common.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let w = open(common.out.as_deref())?;
                    commands::write_curve_csv(&report.points, w)
                }
                Format::Json => write_json(&report, common.out.as_deref()),
            }
        }
        Command::Efficiency { common, points } => {
            let report = commands::efficiency(&load(&common)?, points.as_deref())?;
            write_json(&report, common.out.as_deref())
        }
        Command::Budget { common, counts } => {
            let report = commands::budget(&load(&common)?, counts.as_deref())?;
            write_json(&report, common.out.as_deref())
        }
        Command::Link { common, distances } => {
            let report = commands::link(&load(&common)?, distances.as_deref())?;
            match (common.out.as_deref(), common.format.unwrap_or(Format::Csv)) {
                (Some(out), Format::Csv) => {
                    write_sweep_csv(&report.rows, open(Some(out))?)?;
                    write_sweep_log10_csv(&report.rows, open(Some(&sibling(out, "_log10.csv")))?)?;
                    write_json(&report.summary, Some(&sibling(out, "_summary.json")))
                }
                (None, Format::Csv) => write_sweep_csv(&report.rows, open(None)?),
                (out, Format::Json) => write_json(&report.summary, out),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

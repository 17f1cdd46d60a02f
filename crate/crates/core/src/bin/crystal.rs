use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crystal::experiment::{self, ExperimentConfig};
use crystal::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_VIOLATED: u8 = 4;

#[derive(Parser)]
#[command(name = "crystal", about = "Crystallized rates region experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Comma-separated seed list, overriding the config.
    #[arg(long, global = true, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,

    /// Grid size for frontier sampling and area integration.
    #[arg(long, global = true)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    Corners,
    Region,
    AreaSweep,
    Learn,
    CeCheck {
        /// Pmf file with 2^n probabilities in profile-index order.
        #[arg(long)]
        pmf: Option<PathBuf>,
    },
    VcgTable,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => EXIT_FAILURE,
        _ => EXIT_CONFIG,
    }
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::from_toml_str("")?,
    };
    if let Some(seeds) = cli.seeds {
        config.learning.seeds = seeds;
    }
    if let Some(grid) = cli.grid {
        config.grid.area = grid;
        config.grid.frontier = grid;
    }
    let out = cli.out.or_else(|| config.out_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));

    match cli.command {
        Command::Corners => {
            let corners = experiment::cmd_corners(&config, &out)?;
            println!("{} corners written to {}", corners.len(), out.join("corners.csv").display());
        }
        Command::Region => {
            let report = experiment::cmd_region(&config, &out)?;
            println!("{}", serde_json::to_string(&report)?);
        }
        Command::AreaSweep => {
            let rows = experiment::cmd_area_sweep(&config, &out)?;
            for r in rows {
                println!(
                    "{:>7.2} dB  power control {:.6}  via B {:.6}  A-C {:.6}  gain {:+.3}%",
                    r.db, r.area_pc, r.area_b, r.area_ac, r.gain_pct
                );
            }
        }
        Command::Learn => {
            let s = experiment::cmd_learn(&config, &out)?;
            println!(
                "theta {:?} (std {:?}), ce_residual {}, avg_regret {:?}",
                s.theta, s.theta_std, s.ce_residual, s.avg_regret
            );
        }
        Command::CeCheck { pmf } => {
            let pmf = pmf
                .or_else(|| config.pmf_file.clone())
                .ok_or_else(|| Error::Config("ce-check needs --pmf or pmf_file".into()))?;
            let report = experiment::cmd_ce_check(&config, &pmf, &out)?;
            println!("{}", serde_json::to_string(&report.verdict)?);
            return Ok(report.verdict.holds());
        }
        Command::VcgTable => {
            let report = experiment::cmd_vcg_table(&config, &out)?;
            for row in &report.rows {
                println!("{:>3} {} {:?}", row.index, row.bits, row.utility);
            }
            println!("pure Nash profiles: {:?}", report.nash_profiles);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATED),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

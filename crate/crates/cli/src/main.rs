use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sptrack::metrics::ospa;
use sptrack::radar::SensorGrid;
use sptrack::sim::{self, io, SimConfig};
use sptrack::tracker::ProposalKind;
use sptrack::Error;

#[derive(Parser)]
#[command(name = "sptrack", version, about = "Labeled multi-target tracking on radar power returns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProposalArg {
    Lmb,
    Vovo,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate ground truth and radar scans.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed of the configuration.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Track a simulated scan sequence.
    Track {
        #[arg(long)]
        config: PathBuf,
        /// Directory written by `simulate`.
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long, value_enum)]
        proposal: Option<ProposalArg>,
        /// Output directory; defaults to the measurement directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte Carlo runs with aggregated outputs.
    Mc {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "mc_out")]
        out: PathBuf,
    },
    /// OSPA and cardinality per step of an estimate file against a truth file.
    Evaluate {
        #[arg(long)]
        est: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Configuration providing the OSPA parameters.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load(config: &Path, seed: Option<u64>) -> sptrack::Result<SimConfig> {
    let mut cfg = SimConfig::load(config)?;
    if let Some(s) = seed {
        cfg.run.seed = s;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> sptrack::Result<()> {
    match cli.command {
        Command::Simulate { config, out, seed } => {
            let cfg = load(&config, seed)?;
            let truth = sim::generate_truth(&cfg.scenario, cfg.run.seed)?;
            let sensor = sim::build_sensor(&cfg.scenario)?;
            let z = sim::simulate_measurements(&sensor, &truth, cfg.run.seed);
            io::write_measurements(&out, &cfg.scenario.grid, &sensor.grid, &z)?;
            io::write_truth_csv(&out.join("truth.csv"), &truth)?;
        }
        Command::Track { config, measurements, proposal, out, seed } => {
            let mut cfg = load(&config, seed)?;
            if let Some(p) = proposal {
                cfg.run.proposal = match p {
                    ProposalArg::Lmb => ProposalKind::Lmb,
                    ProposalArg::Vovo => ProposalKind::Vovo,
                };
            }
            let grid = SensorGrid::from_spec(&cfg.scenario.grid)?;
            let z = io::read_measurements(&measurements.join("measurements.csv"), grid.cell_count())?;
            let truth_path = measurements.join("truth.csv");
            let truth = if truth_path.exists() { io::read_truth_csv(&truth_path)? } else { Vec::new() };
            let steps = sim::track(&cfg, &z, &truth, cfg.run.seed)?;
            let out = out.unwrap_or(measurements);
            std::fs::create_dir_all(&out)?;
            let est: Vec<_> = steps.iter().map(|s| s.estimate.clone()).collect();
            io::write_estimates_csv(&out.join("estimates.csv"), &est)?;
            io::write_diagnostics(&out.join("diagnostics.json"), &steps)?;
        }
        Command::Mc { config, runs, seed, out } => {
            let cfg = load(&config, seed)?;
            let runs = runs.unwrap_or(cfg.run.mc_runs);
            if runs == 0 {
                return Err(Error::Config("--runs must be at least 1".into()));
            }
            let mc = sim::run_mc(&cfg, runs, cfg.run.seed)?;
            io::write_mc(&out, &mc, cfg.run.seed)?;
        }
        Command::Evaluate { est, truth, config } => {
            let params = match config {
                Some(c) => SimConfig::load(&c)?.run.ospa,
                None => Default::default(),
            };
            let est = io::read_estimate_positions(&est)?;
            let truth = io::read_truth_csv(&truth)?;
            println!("k,n_hat,true_n,ospa");
            for k in 0..est.len().max(truth.len()) {
                let e = est.get(k).cloned().unwrap_or_default();
                let t = truth.get(k).map(sim::positions).unwrap_or_default();
                println!("{},{},{},{}", k + 1, e.len(), t.len(), ospa(&e, &t, &params));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() || matches!(e, Error::Io(_) | Error::Csv(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

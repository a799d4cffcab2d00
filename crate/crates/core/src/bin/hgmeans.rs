use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hgmeans::bench::{cmd_genmix, cmd_plotdata, cmd_run, ExitStatus, RunOptions};
use hgmeans::dataset::{GmmSpec, MAX_MIXTURE_ATTEMPTS};

#[derive(Parser)]
#[command(name = "hgmeans", version, about = "Minimum sum-of-squares clustering benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark grid described by a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Seconds per HG-means run; overrides the configuration.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Generate an overlapping spherical Gaussian mixture.
    Genmix {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output prefix; files get .txt, .labels, .mixture.csv and .separation.txt.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = MAX_MIXTURE_ATTEMPTS)]
        max_attempts: usize,
    },
    /// Turn run CSVs into per-series plot data and a power-law fit log.
    Plotdata {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, jobs, time_limit } => {
            let (status, path, messages) = cmd_run(&config, RunOptions { jobs, time_limit });
            for m in &messages {
                eprintln!("hgmeans: {m}");
            }
            if let Some(p) = path {
                println!("{}", p.display());
            }
            ExitCode::from(status.code() as u8)
        }
        Command::Genmix { m, d, n, seed, out, max_attempts } => {
            match cmd_genmix(&GmmSpec::new(m, d, n, seed), &out, max_attempts) {
                Ok(files) => {
                    println!("accepted after {} attempt(s)", files.attempts);
                    for p in [&files.data, &files.labels, &files.mixture, &files.separation] {
                        println!("{}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("hgmeans: {e}");
                    ExitCode::from(ExitStatus::PartialFailure.code() as u8)
                }
            }
        }
        Command::Plotdata { csv, out } => match cmd_plotdata(&csv, &out) {
            Ok(o) => {
                for p in &o.series {
                    println!("{}", p.display());
                }
                println!("{}", o.fit_log.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("hgmeans: {e}");
                ExitCode::from(ExitStatus::PartialFailure.code() as u8)
            }
        },
    }
}

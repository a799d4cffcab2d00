//! Benchmark harness: configuration, runs, mixture files and plot data.

mod config;
mod genmix;
mod plot;
mod run;

pub use config::{BenchConfig, DatasetSource};
pub use genmix::{cmd_genmix, GenmixFiles};
pub use plot::{cmd_plotdata, fit_power_law, PlotOutput, PowerLaw};
pub use run::{
    cmd_run, load_bks, load_source, run_benchmark, run_cell, BenchOutcome, CellResult, ExitStatus,
    LoadedDataset, RunOptions,
};

use std::fmt;
use std::str::FromStr;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Standard parameters (10, 20, 500, 5000).
    HgMeans,
    /// Reduced parameters (5, 10, 50, 500).
    HgMeansFast,
    /// K-means from random distinct samples.
    Kmeans,
    /// K-means from K-means++ seeding.
    KmeansPp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::HgMeans,
        Algorithm::HgMeansFast,
        Algorithm::Kmeans,
        Algorithm::KmeansPp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::HgMeans => "hgmeans",
            Algorithm::HgMeansFast => "hgmeans-fast",
            Algorithm::Kmeans => "kmeans",
            Algorithm::KmeansPp => "kmeanspp",
        }
    }

    /// Repeated baselines get a best-of summary row.
    pub fn is_baseline(self) -> bool {
        matches!(self, Algorithm::Kmeans | Algorithm::KmeansPp)
    }

    fn code(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown algorithm `{s}`")))
    }
}

//! Drive the benchmark harness from code: a configuration with a file
//! dataset and a generated mixture, several algorithms and repetitions.

use std::path::Path;

use hgmeans::bench::{run_benchmark, BenchConfig, RunOptions};
use hgmeans::metrics::write_reports;

fn main() -> hgmeans::Result<()> {
    let dir = std::env::temp_dir().join("hgmeans-benchmark-grid");
    let text = "\
dataset = iris.txt labeled id=iris
gmm = blobs m=6 d=4 n=600 seed=2
m = 3, 6
algorithms = hgmeans-fast, kmeanspp
repetitions = 10
seed = 7
";
    let mut cfg = BenchConfig::parse(text, &Path::new(env!("CARGO_MANIFEST_DIR")).join("data"))?;
    cfg.output = dir.clone();

    let outcome = run_benchmark(&cfg, RunOptions { jobs: 2, time_limit: Some(10.0) })?;
    for f in &outcome.failures {
        eprintln!("failed: {f}");
    }
    let mut csv = Vec::new();
    write_reports(&mut csv, &outcome.reports)?;
    let csv = String::from_utf8(csv).expect("csv is utf-8");
    for line in csv.lines().filter(|l| !l.contains(",kmeanspp,")) {
        println!("{line}");
    }
    println!("({} rows in total)", outcome.reports.len());
    Ok(())
}

//! Cluster a dataset file with the default solver settings.
//!
//! ```text
//! cargo run --example cluster_file -- [path] [m] [labeled]
//! ```
//!
//! Without arguments, clusters the bundled Iris sample into 3 groups and
//! compares the result with its species labels.

use std::ops::ControlFlow;

use hgmeans::dataset::{load_dataset, Format};
use hgmeans::genetic::{hgmeans_run, HgParams};
use hgmeans::metrics::{crand, nmi};

fn main() -> hgmeans::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.txt").to_string());
    let m: usize = args.next().map_or(3, |s| s.parse().expect("m must be an integer"));
    let format = match args.next().as_deref() {
        Some("labeled") => Format::Labeled,
        Some(_) => Format::Plain,
        None if path.ends_with("iris.txt") => Format::Labeled,
        None => Format::Plain,
    };

    let (ds, truth) = load_dataset(&path, format)?;
    println!("{path}: n={} d={}", ds.n(), ds.d());

    let outcome = hgmeans_run(&ds, &HgParams::new(m).with_seed(1), |_| ControlFlow::Continue(()))?;
    println!(
        "m={m} objective={:.6} iterations={} ({:?}, {:.2}s)",
        outcome.best.cost,
        outcome.iterations,
        outcome.termination,
        outcome.elapsed.as_secs_f64()
    );
    for (k, size) in outcome.best.member.counts(m).iter().enumerate() {
        println!("  cluster {k}: {size} samples at {:?}", outcome.best.centers.center(k));
    }
    if let Some(t) = truth {
        println!(
            "vs labels: CRand={:.4} NMI={:.4}",
            crand(t.labels(), &outcome.best.member)?,
            nmi(t.labels(), &outcome.best.member)?
        );
    }
    Ok(())
}

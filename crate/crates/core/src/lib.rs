//! Minimum sum-of-squares clustering (MSSC) with a hybrid genetic search.
//!
//! The solver keeps a population of complete K-means local optima, recombines
//! them with a matching crossover (optimal pairing of parent centers followed by
//! a coin flip per pair), relocates one center per offspring with an adaptive
//! roulette, and polishes every offspring with Hamerly-accelerated K-means.
//!
//! Modules:
//!
//! - [`dataset`]: point storage, text loaders, Gaussian-mixture generation.
//! - [`kmeans`]: objective, chromosome decoding, Lloyd and Hamerly K-means,
//!   seeding and empty-cluster repair.
//! - [`matching`]: dense Hungarian solver used by the crossover.
//! - [`genetic`]: individuals, population management and the main loop.
//! - [`metrics`]: percentage gap, adjusted Rand, NMI, centroid index and the
//!   CSV run report.
//! - [`bench`]: benchmark harness behind the `hgmeans` binary.
//!
//! ```no_run
//! use hgmeans::dataset::{load_dataset, Format};
//! use hgmeans::genetic::{hgmeans_run, HgParams};
//!
//! let (ds, _) = load_dataset("iris.txt", Format::Labeled).unwrap();
//! let outcome = hgmeans_run(&ds, &HgParams::new(3), |_| std::ops::ControlFlow::Continue(())).unwrap();
//! println!("MSSC = {}", outcome.best.cost);
//! ```

pub mod bench;
pub mod dataset;
mod error;
pub mod genetic;
pub mod kmeans;
pub mod matching;
pub mod metrics;
pub mod rng;

pub use error::{Error, Result};

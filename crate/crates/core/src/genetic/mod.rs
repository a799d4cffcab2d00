//! Hybrid genetic search for MSSC.
//!
//! The population starts from `pi_max` K-means runs seeded on random samples.
//! Each iteration selects two parents by binary tournament, recombines their
//! centers with the matching crossover, relocates one center with the
//! adaptive roulette, runs K-means on the result and inserts it. Whenever the
//! population exceeds `pi_max`, clones and then the worst individuals are
//! removed down to `pi_min`. The loop stops after `n1` iterations without
//! improving the best solution or `n2` iterations overall.

mod operators;
mod population;
pub mod roulette;

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::Rng as _;
use rayon::prelude::*;

pub use operators::{binary_tournament, crossover_mx, mutate, mutate_alpha, relocate_center, ALPHA_STEP};
pub use population::{eliminate_clones, survivor_selection, Individual, Population};

use crate::dataset::Dataset;
use crate::kmeans::{local_search, seed_random_samples};
use crate::rng::{self, purpose};
use crate::{Error, Result};

/// Relative margin a new solution must beat the incumbent by to reset the
/// no-improvement counter.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct HgParams {
    pub m: usize,
    pub pi_min: usize,
    pub pi_max: usize,
    /// Consecutive iterations without improvement before stopping.
    pub n1: usize,
    /// Total iteration budget.
    pub n2: usize,
    pub seed: u64,
    /// Coordinate tolerance for clone detection; 0 means exact equality.
    pub clone_epsilon: f64,
}

impl HgParams {
    /// Standard configuration: population (10, 20), termination (500, 5000).
    pub fn new(m: usize) -> Self {
        Self { m, pi_min: 10, pi_max: 20, n1: 500, n2: 5000, seed: 0, clone_epsilon: 0.0 }
    }

    /// Reduced configuration: population (5, 10), termination (50, 500).
    pub fn fast(m: usize) -> Self {
        Self { m, pi_min: 5, pi_max: 10, n1: 50, n2: 500, seed: 0, clone_epsilon: 0.0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, ds: &Dataset) -> Result<()> {
        if self.m == 0 || self.m > ds.n() {
            return Err(Error::TooManyCenters { m: self.m, n: ds.n() });
        }
        if self.pi_min == 0 || self.pi_min > self.pi_max {
            return Err(Error::Invalid(format!(
                "population bounds need 1 ≤ pi_min ≤ pi_max, got ({}, {})",
                self.pi_min, self.pi_max
            )));
        }
        if !(self.clone_epsilon >= 0.0) {
            return Err(Error::Invalid("clone epsilon must be nonnegative".into()));
        }
        Ok(())
    }
}

/// `pi_max` K-means local optima from random-sample seeds, each with a
/// uniform mutation weight. Individual `i` uses its own random stream, so the
/// result does not depend on how the runs are scheduled across threads.
pub fn init_population(ds: &Dataset, params: &HgParams) -> Result<Population> {
    params.validate(ds)?;
    let individuals = (0..params.pi_max)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(rng::derive(params.seed, &[i as u64]), purpose::INIT);
            let alpha: f64 = rng.random();
            let init = seed_random_samples(ds, params.m, &mut rng)?;
            let res = local_search(ds, &init, alpha, &mut rng)?;
            Ok(Individual::from_kmeans(res, alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Population::new(individuals, params.pi_min, params.pi_max)?.with_clone_epsilon(params.clone_epsilon))
}

/// Snapshot passed to the progress callback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub iteration: usize,
    pub best_cost: f64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    NoImprovement,
    IterationLimit,
    /// The callback asked to stop.
    Interrupted,
}

#[derive(Debug, Clone)]
pub struct HgOutcome {
    pub best: Individual,
    pub iterations: usize,
    pub elapsed: Duration,
    pub termination: Termination,
}

/// Runs the search.
///
/// `progress` is called once after initialization (iteration 0) and once
/// after every iteration; returning `ControlFlow::Break` stops the search at
/// that point and the best solution so far is returned.
pub fn hgmeans_run<F>(ds: &Dataset, params: &HgParams, mut progress: F) -> Result<HgOutcome>
where
    F: FnMut(&Progress) -> ControlFlow<()>,
{
    let start = Instant::now();
    let mut pop = init_population(ds, params)?;

    let mut tournament_rng = rng::stream(params.seed, purpose::TOURNAMENT);
    let mut crossover_rng = rng::stream(params.seed, purpose::CROSSOVER);
    let mut mutation_rng = rng::stream(params.seed, purpose::MUTATION);
    let mut repair_rng = rng::stream(params.seed, purpose::REPAIR);
    let mut survivor_rng = rng::stream(params.seed, purpose::SURVIVORS);

    let snapshot = |iteration: usize, pop: &Population| Progress {
        iteration,
        best_cost: pop.best().cost,
        elapsed: start.elapsed(),
    };
    if progress(&snapshot(0, &pop)).is_break() {
        return Ok(HgOutcome {
            best: pop.best().clone(),
            iterations: 0,
            elapsed: start.elapsed(),
            termination: Termination::Interrupted,
        });
    }

    let mut iterations = 0;
    let mut stale = 0;
    let termination = loop {
        if stale >= params.n1 {
            break Termination::NoImprovement;
        }
        if iterations >= params.n2 {
            break Termination::IterationLimit;
        }
        let (child, alpha) = {
            let p1 = binary_tournament(&pop, &mut tournament_rng);
            let p2 = binary_tournament(&pop, &mut tournament_rng);
            crossover_mx(p1, p2, &mut crossover_rng)
        };
        let (mutated, alpha) = mutate(child, alpha, ds, &mut mutation_rng);
        let res = local_search(ds, &mutated, alpha, &mut repair_rng)?;
        let offspring = Individual::from_kmeans(res, alpha);

        iterations += 1;
        let incumbent = pop.best().cost;
        if offspring.cost < incumbent - IMPROVEMENT_TOLERANCE * incumbent {
            stale = 0;
        } else {
            stale += 1;
        }
        pop.insert(offspring);
        if pop.len() > pop.pi_max() {
            survivor_selection(&mut pop, &mut survivor_rng);
        }
        if progress(&snapshot(iterations, &pop)).is_break() {
            break Termination::Interrupted;
        }
    };

    Ok(HgOutcome {
        best: pop.best().clone(),
        iterations,
        elapsed: start.elapsed(),
        termination,
    })
}

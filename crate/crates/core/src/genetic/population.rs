use rand::Rng as _;

use crate::dataset::Dataset;
use crate::kmeans::{mssc_cost, Centers, KmeansResult, Membership};
use crate::rng::Rng;
use crate::{Error, Result};

/// A complete MSSC solution: both chromosomes, the mutation weight and the
/// cached objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub centers: Centers,
    pub member: Membership,
    pub alpha: f64,
    pub cost: f64,
}

impl Individual {
    pub fn from_kmeans(res: KmeansResult, alpha: f64) -> Self {
        Self {
            centers: res.centers,
            member: res.member,
            alpha: alpha.clamp(0.0, 1.0),
            cost: res.cost,
        }
    }

    /// Builds an individual from chromosomes, computing the cost.
    pub fn new(ds: &Dataset, centers: Centers, member: Membership, alpha: f64) -> Self {
        let cost = mssc_cost(ds, &centers, &member);
        Self { centers, member, alpha: alpha.clamp(0.0, 1.0), cost }
    }

    /// Same center set up to order, coordinates compared within `eps`.
    pub fn is_clone_of(&self, other: &Individual, eps: f64) -> bool {
        same_center_set(&self.centers, &other.centers, eps)
    }
}

pub(crate) fn same_center_set(a: &Centers, b: &Centers, eps: f64) -> bool {
    if a.m() != b.m() || a.d() != b.d() {
        return false;
    }
    a.sorted_rows()
        .iter()
        .zip(b.sorted_rows())
        .all(|(x, y)| x.iter().zip(y).all(|(p, q)| (p - q).abs() <= eps))
}

/// Living individuals plus a copy of the best one ever inserted.
#[derive(Debug, Clone)]
pub struct Population {
    individuals: Vec<Individual>,
    pi_min: usize,
    pi_max: usize,
    clone_epsilon: f64,
    best: Individual,
}

impl Population {
    pub fn new(individuals: Vec<Individual>, pi_min: usize, pi_max: usize) -> Result<Self> {
        if pi_min == 0 || pi_min > pi_max {
            return Err(Error::Invalid(format!(
                "population bounds need 1 ≤ pi_min ≤ pi_max, got ({pi_min}, {pi_max})"
            )));
        }
        let best = individuals
            .iter()
            .min_by(|a, b| a.cost.total_cmp(&b.cost))
            .cloned()
            .ok_or_else(|| Error::Invalid("empty population".into()))?;
        Ok(Self { individuals, pi_min, pi_max, clone_epsilon: 0.0, best })
    }

    pub fn with_clone_epsilon(mut self, eps: f64) -> Self {
        self.clone_epsilon = eps;
        self
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn best(&self) -> &Individual {
        &self.best
    }

    pub fn pi_min(&self) -> usize {
        self.pi_min
    }

    pub fn pi_max(&self) -> usize {
        self.pi_max
    }

    /// Adds an individual unconditionally; returns true when it is a new best.
    pub fn insert(&mut self, ind: Individual) -> bool {
        let improved = ind.cost < self.best.cost;
        if improved {
            self.best = ind.clone();
        }
        self.individuals.push(ind);
        improved
    }
}

/// Removes one member of a clone pair (chosen by coin flip) at a time, until
/// no clones remain or the population is down to `pi_min`.
pub fn eliminate_clones(pop: &mut Population, rng: &mut Rng) {
    let eps = pop.clone_epsilon;
    while pop.individuals.len() > pop.pi_min {
        let n = pop.individuals.len();
        let pair = (0..n).find_map(|i| {
            (i + 1..n)
                .find(|&j| pop.individuals[i].is_clone_of(&pop.individuals[j], eps))
                .map(|j| (i, j))
        });
        match pair {
            Some((i, j)) => {
                let victim = if rng.random_bool(0.5) { i } else { j };
                pop.individuals.remove(victim);
            }
            None => break,
        }
    }
}

/// Clones first, then the highest-cost individuals, until `pi_min` remain.
pub fn survivor_selection(pop: &mut Population, rng: &mut Rng) {
    eliminate_clones(pop, rng);
    pop.individuals.sort_by(|a, b| a.cost.total_cmp(&b.cost));
    pop.individuals.truncate(pop.pi_min);
}

//! Biased sample selection used to relocate centers.
//!
//! `P(Y = i) = (1 − α)/n + α · w_i / Σ_j w_j`, where `w_i` is the distance from
//! sample `i` to its nearest remaining center. `α = 0` is uniform; `α = 1` is
//! proportional to distance. When every weight is zero the distance term
//! degenerates to uniform.

use rand::Rng as _;

use crate::rng::Rng;

pub fn probabilities(dist: &[f64], alpha: f64) -> Vec<f64> {
    let n = dist.len() as f64;
    let total: f64 = dist.iter().sum();
    let uniform = (1.0 - alpha) / n;
    if total > 0.0 {
        dist.iter().map(|w| uniform + alpha * w / total).collect()
    } else {
        vec![1.0 / n; dist.len()]
    }
}

/// One roulette-wheel draw from [`probabilities`].
pub fn sample(dist: &[f64], alpha: f64, rng: &mut Rng) -> usize {
    assert!(!dist.is_empty(), "roulette over no samples");
    let probs = probabilities(dist, alpha);
    let target: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if acc > target {
                return i;
            }
        }
    }
    last
}

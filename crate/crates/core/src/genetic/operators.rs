use rand::Rng as _;

use super::roulette;
use super::{Individual, Population};
use crate::dataset::Dataset;
use crate::kmeans::{distances_to_nearest, Centers};
use crate::matching::{solve_assignment, CostMatrix};
use crate::rng::Rng;

/// Half-width of the uniform perturbation applied to the mutation weight.
pub const ALPHA_STEP: f64 = 0.2;

/// Lower-cost of two independent uniform draws (duplicates allowed; ties
/// keep the first draw).
pub fn binary_tournament<'a>(pop: &'a Population, rng: &mut Rng) -> &'a Individual {
    let inds = pop.individuals();
    assert!(!inds.is_empty(), "tournament on an empty population");
    let a = &inds[rng.random_range(0..inds.len())];
    let b = &inds[rng.random_range(0..inds.len())];
    if b.cost < a.cost {
        b
    } else {
        a
    }
}

/// Matching crossover.
///
/// Pairs the parents' centers by a minimum total Euclidean distance
/// assignment, then keeps one center of every pair by a fair coin. Child
/// center `i` comes from row `i` of the assignment (parent 1's index). The
/// child's mutation weight is the parents' mean.
pub fn crossover_mx(p1: &Individual, p2: &Individual, rng: &mut Rng) -> (Centers, f64) {
    let (perm, _) = solve_assignment(&CostMatrix::from_centers(&p1.centers, &p2.centers));
    let mut child = p1.centers.clone();
    for (i, &j) in perm.iter().enumerate() {
        if rng.random_bool(0.5) {
            child.set_center(i, p2.centers.center(j));
        }
    }
    (child, 0.5 * (p1.alpha + p2.alpha))
}

/// `clamp(alpha + U[−0.2, 0.2], 0, 1)`.
pub fn mutate_alpha(alpha: f64, rng: &mut Rng) -> f64 {
    (alpha + rng.random_range(-ALPHA_STEP..=ALPHA_STEP)).clamp(0.0, 1.0)
}

/// Removes a uniformly chosen center and places it on a sample drawn by the
/// roulette, using distances to the remaining (unmoved) centers. With a
/// single center there is nothing left to measure against and the draw is
/// uniform.
pub fn relocate_center(centers: &Centers, alpha: f64, ds: &Dataset, rng: &mut Rng) -> Centers {
    let m = centers.m();
    let removed = rng.random_range(0..m);
    let remaining: Vec<usize> = (0..m).filter(|&k| k != removed).collect();
    let dist = if remaining.is_empty() {
        vec![0.0; ds.n()]
    } else {
        distances_to_nearest(ds, centers, &remaining)
    };
    let pick = roulette::sample(&dist, alpha, rng);
    let mut out = centers.clone();
    out.set_center(removed, ds.point(pick));
    out
}

/// Adapts the mutation weight, then relocates one center with it.
pub fn mutate(centers: Centers, alpha: f64, ds: &Dataset, rng: &mut Rng) -> (Centers, f64) {
    let alpha = mutate_alpha(alpha, rng);
    (relocate_center(&centers, alpha, ds, rng), alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmeans::Membership;
    use crate::rng::stream;

    fn ind(rows: &[&[f64]], alpha: f64, cost: f64) -> Individual {
        Individual {
            centers: Centers::from_rows(rows).unwrap(),
            member: Membership::new(vec![]),
            alpha,
            cost,
        }
    }

    #[test]
    fn tournament_single_and_pair() {
        let pop = Population::new(vec![ind(&[&[0.0]], 0.5, 3.0)], 1, 2).unwrap();
        assert_eq!(binary_tournament(&pop, &mut stream(0, 0)).cost, 3.0);

        let pop = Population::new(vec![ind(&[&[0.0]], 0.5, 5.0), ind(&[&[1.0]], 0.5, 9.0)], 1, 2).unwrap();
        let mut rng = stream(1, 0);
        let wins = (0..40_000).filter(|_| binary_tournament(&pop, &mut rng).cost == 5.0).count();
        // The cheaper one loses only when both draws hit the other: 1/4.
        let p: f64 = 0.75;
        let se = (p * (1.0 - p) / 40_000.0_f64).sqrt();
        assert!((wins as f64 / 40_000.0 - p).abs() < 4.0 * se);
    }

    #[test]
    fn identical_parents_reproduce_their_centers() {
        let p1 = ind(&[&[0.0, 0.0], &[5.0, 1.0], &[2.0, 9.0]], 0.2, 1.0);
        let p2 = ind(&[&[2.0, 9.0], &[0.0, 0.0], &[5.0, 1.0]], 0.6, 1.0);
        for s in 0..20 {
            let (child, alpha) = crossover_mx(&p1, &p2, &mut stream(s, 0));
            assert_eq!(child, p1.centers);
            assert!((alpha - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn crossover_picks_within_matched_pairs() {
        let p1 = ind(&[&[0.0, 0.0], &[10.0, 10.0]], 0.5, 1.0);
        let p2 = ind(&[&[10.0, 10.1], &[0.1, 0.0]], 0.5, 1.0);
        let mut rng = stream(4, 0);
        let mut counts = [0usize; 4];
        let trials = 10_000;
        for _ in 0..trials {
            let (child, _) = crossover_mx(&p1, &p2, &mut rng);
            let first = child.center(0) == [0.1, 0.0];
            let second = child.center(1) == [10.0, 10.1];
            assert!(first || child.center(0) == [0.0, 0.0]);
            assert!(second || child.center(1) == [10.0, 10.0]);
            counts[usize::from(first) * 2 + usize::from(second)] += 1;
        }
        let se = (0.25 * 0.75 / trials as f64).sqrt();
        for c in counts {
            assert!((c as f64 / trials as f64 - 0.25).abs() < 4.0 * se, "{counts:?}");
        }
    }

    #[test]
    fn alpha_is_clamped() {
        let mut rng = stream(5, 0);
        for _ in 0..1000 {
            let a = mutate_alpha(0.95, &mut rng);
            assert!((0.75..=1.0).contains(&a));
            let b = mutate_alpha(0.05, &mut rng);
            assert!((0.0..=0.25).contains(&b));
        }
        assert_eq!((0.95_f64 + 0.2).clamp(0.0, 1.0), 1.0);
    }

    #[test]
    fn relocation_moves_exactly_one_center_onto_a_sample() {
        let ds = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.0], [5.0, 5.0], [6.0, 5.0]]).unwrap();
        let centers = Centers::from_rows(&[[0.5, 0.0], [5.5, 5.0]]).unwrap();
        let mut rng = stream(6, 0);
        for _ in 0..200 {
            let (out, alpha) = mutate(centers.clone(), 0.5, &ds, &mut rng);
            assert!((0.3..=0.7).contains(&alpha));
            let changed: Vec<usize> = (0..2).filter(|&k| out.center(k) != centers.center(k)).collect();
            assert_eq!(changed.len(), 1);
            assert!(ds.rows().any(|p| p == out.center(changed[0])));
        }
    }

    #[test]
    fn single_center_single_sample_is_identity() {
        let ds = Dataset::from_rows(&[[3.0, 4.0]]).unwrap();
        let centers = Centers::from_rows(&[[3.0, 4.0]]).unwrap();
        let (out, _) = mutate(centers.clone(), 0.7, &ds, &mut stream(0, 0));
        assert_eq!(out, centers);
    }
}

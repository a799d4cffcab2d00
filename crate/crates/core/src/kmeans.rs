//! K-means local search.
//!
//! A solution has two equivalent encodings: the coordinate chromosome
//! ([`Centers`]) and the membership chromosome ([`Membership`]). Decoding one
//! into the other and back until nothing changes is Lloyd's algorithm;
//! [`hamerly_kmeans`] reaches the same fixed point while skipping most
//! distance evaluations through one upper and one lower bound per sample.
//!
//! Nearest-center ties always go to the lowest center index. Both K-means
//! variants share that rule and the centroid routine, so from the same
//! initial centers they produce identical memberships.

use rand::seq::index;
use rand::Rng as _;

use crate::dataset::Dataset;
use crate::genetic::roulette;
use crate::rng::Rng;
use crate::{Error, Result};

/// Iteration cap for a single K-means run.
pub const MAX_ITER: usize = 5_000;

/// Attempts allowed to [`repair_empty_clusters`].
pub const REPAIR_ATTEMPTS: usize = 100;

/// `m × d` center coordinates, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Centers {
    coords: Vec<f64>,
    m: usize,
    d: usize,
}

impl Centers {
    pub fn new(coords: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 || coords.is_empty() || !coords.len().is_multiple_of(d) {
            return Err(Error::Invalid(format!(
                "{} coordinates do not form centers of width {d}",
                coords.len()
            )));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite center coordinate".into()));
        }
        let m = coords.len() / d;
        Ok(Self { coords, m, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != d) {
            return Err(Error::Invalid("ragged center rows".into()));
        }
        Self::new(rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect(), d)
    }

    /// Copies the given sample rows.
    pub fn from_samples(ds: &Dataset, indices: impl IntoIterator<Item = usize>) -> Self {
        let coords: Vec<f64> = indices
            .into_iter()
            .flat_map(|i| ds.point(i).iter().copied())
            .collect();
        Self::new(coords, ds.d()).expect("samples are finite")
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn center(&self, k: usize) -> &[f64] {
        &self.coords[k * self.d..(k + 1) * self.d]
    }

    pub fn set_center(&mut self, k: usize, coords: &[f64]) {
        self.coords[k * self.d..(k + 1) * self.d].copy_from_slice(coords);
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.d)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    /// Center rows in lexicographic order; two center sets are equal as sets
    /// exactly when these sequences are equal.
    pub fn sorted_rows(&self) -> Vec<&[f64]> {
        let mut rows: Vec<&[f64]> = self.iter().collect();
        rows.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        rows
    }
}

/// Cluster index of every sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership(Vec<usize>);

impl Membership {
    pub fn new(assign: Vec<usize>) -> Self {
        Self(assign)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn counts(&self, m: usize) -> Vec<usize> {
        let mut counts = vec![0; m];
        for &a in &self.0 {
            counts[a] += 1;
        }
        counts
    }

    pub fn empty_clusters(&self, m: usize) -> Vec<usize> {
        self.counts(m)
            .iter()
            .enumerate()
            .filter_map(|(k, &c)| (c == 0).then_some(k))
            .collect()
    }
}

impl std::ops::Deref for Membership {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KmeansResult {
    pub centers: Centers,
    pub member: Membership,
    pub cost: f64,
    /// Number of centroid updates performed.
    pub iterations: usize,
    /// False when the iteration cap stopped the run.
    pub converged: bool,
}

#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index and squared distance of the nearest center.
#[inline]
pub fn nearest(point: &[f64], centers: &Centers) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (k, c) in centers.iter().enumerate() {
        let dist = sq_dist(point, c);
        if dist < best.1 {
            best = (k, dist);
        }
    }
    best
}

/// Nearest center plus the squared distances to the nearest and second
/// nearest centers (`∞` when `m == 1`).
#[inline]
fn nearest_two(point: &[f64], centers: &Centers) -> (usize, f64, f64) {
    let (mut a, mut d1, mut d2) = (0, f64::INFINITY, f64::INFINITY);
    for (k, c) in centers.iter().enumerate() {
        let dist = sq_dist(point, c);
        if dist < d1 {
            d2 = d1;
            d1 = dist;
            a = k;
        } else if dist < d2 {
            d2 = dist;
        }
    }
    (a, d1, d2)
}

/// MSSC objective: total squared distance from each sample to its center.
pub fn mssc_cost(ds: &Dataset, centers: &Centers, member: &Membership) -> f64 {
    ds.rows()
        .zip(member.iter())
        .map(|(p, &k)| sq_dist(p, centers.center(k)))
        .sum()
}

pub fn decode_membership(ds: &Dataset, centers: &Centers) -> Membership {
    Membership(ds.rows().map(|p| nearest(p, centers).0).collect())
}

/// Centroids of the clusters in `member`.
///
/// A cluster without members keeps its position from `previous` when given,
/// otherwise it is placed at the origin. Its index is returned either way.
pub fn decode_centers(
    ds: &Dataset,
    member: &Membership,
    m: usize,
    previous: Option<&Centers>,
) -> (Centers, Vec<usize>) {
    let d = ds.d();
    let mut sums = vec![0.0; m * d];
    let mut counts = vec![0usize; m];
    for (p, &k) in ds.rows().zip(member.iter()) {
        counts[k] += 1;
        for (s, x) in sums[k * d..(k + 1) * d].iter_mut().zip(p) {
            *s += x;
        }
    }
    let mut empty = Vec::new();
    for k in 0..m {
        let row = &mut sums[k * d..(k + 1) * d];
        if counts[k] == 0 {
            empty.push(k);
            match previous {
                Some(prev) => row.copy_from_slice(prev.center(k)),
                None => row.fill(0.0),
            }
        } else {
            let inv = counts[k] as f64;
            row.iter_mut().for_each(|s| *s /= inv);
        }
    }
    (Centers { coords: sums, m, d }, empty)
}

fn lloyd(ds: &Dataset, init: &Centers, max_iter: usize, mut trace: Option<&mut Vec<f64>>) -> KmeansResult {
    let m = init.m();
    let mut member = decode_membership(ds, init);
    let mut centers = init.clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter.max(1) {
        iterations += 1;
        centers = decode_centers(ds, &member, m, Some(&centers)).0;
        if let Some(t) = trace.as_deref_mut() {
            t.push(mssc_cost(ds, &centers, &member));
        }
        if iterations >= max_iter {
            break;
        }
        let next = decode_membership(ds, &centers);
        if next == member {
            converged = true;
            break;
        }
        member = next;
    }
    let cost = mssc_cost(ds, &centers, &member);
    KmeansResult { centers, member, cost, iterations, converged }
}

/// Plain Lloyd iteration: assign to nearest center, move centers to
/// centroids, stop when no assignment changes or after `max_iter` updates.
pub fn lloyd_kmeans(ds: &Dataset, init: &Centers, max_iter: usize) -> KmeansResult {
    lloyd(ds, init, max_iter, None)
}

/// [`lloyd_kmeans`] that also returns the objective after every centroid update.
pub fn lloyd_kmeans_traced(ds: &Dataset, init: &Centers, max_iter: usize) -> (KmeansResult, Vec<f64>) {
    let mut trace = Vec::new();
    let res = lloyd(ds, init, max_iter, Some(&mut trace));
    (res, trace)
}

/// Hamerly's accelerated K-means.
///
/// Each sample keeps an upper bound on the distance to its own center and a
/// lower bound on the distance to every other center. After centers move by
/// `δ_k`, the upper bound grows by the own center's move and the lower bound
/// shrinks by the largest move among the other centers. A sample is skipped
/// when its upper bound is below both its lower bound and half the distance
/// from its center to the closest other center. The skip test keeps a small
/// margin so floating-point drift in the bounds can never hide a change of
/// nearest center, and every sample that is not skipped is rescanned with
/// the same routine Lloyd uses.
pub fn hamerly_kmeans(ds: &Dataset, init: &Centers, max_iter: usize) -> KmeansResult {
    let n = ds.n();
    let m = init.m();
    let scale = ds.magnitude().max(init.as_slice().iter().fold(0.0_f64, |a, x| a.max(x.abs())));
    let abs_margin = 1e-10 * scale;
    let skip = |upper: f64, bound: f64| upper * (1.0 + 1e-10) + abs_margin < bound;

    let mut assign = vec![0usize; n];
    let mut upper = vec![0.0; n];
    let mut lower = vec![0.0; n];
    for (i, p) in ds.rows().enumerate() {
        let (a, d1, d2) = nearest_two(p, init);
        assign[i] = a;
        upper[i] = d1.sqrt();
        lower[i] = d2.sqrt();
    }
    let mut member = Membership(assign);
    let mut centers = init.clone();
    let mut moves = vec![0.0; m];
    let mut half_gap = vec![f64::INFINITY; m];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter.max(1) {
        iterations += 1;
        let next = decode_centers(ds, &member, m, Some(&centers)).0;
        let (mut far, mut max1, mut max2) = (0, 0.0_f64, 0.0_f64);
        for k in 0..m {
            moves[k] = sq_dist(centers.center(k), next.center(k)).sqrt();
            if moves[k] > max1 {
                max2 = max1;
                max1 = moves[k];
                far = k;
            } else if moves[k] > max2 {
                max2 = moves[k];
            }
        }
        centers = next;
        if max1 > 0.0 {
            for i in 0..n {
                let a = member.0[i];
                upper[i] += moves[a];
                lower[i] -= if a == far { max2 } else { max1 };
            }
        }
        if iterations >= max_iter {
            break;
        }

        half_gap.fill(f64::INFINITY);
        for k in 0..m {
            for j in k + 1..m {
                let gap = 0.5 * sq_dist(centers.center(k), centers.center(j)).sqrt();
                half_gap[k] = half_gap[k].min(gap);
                half_gap[j] = half_gap[j].min(gap);
            }
        }

        let mut changed = false;
        for (i, p) in ds.rows().enumerate() {
            let a = member.0[i];
            let bound = half_gap[a].max(lower[i]);
            if skip(upper[i], bound) {
                continue;
            }
            upper[i] = sq_dist(p, centers.center(a)).sqrt();
            if skip(upper[i], bound) {
                continue;
            }
            let (b, d1, d2) = nearest_two(p, &centers);
            upper[i] = d1.sqrt();
            lower[i] = d2.sqrt();
            if b != a {
                member.0[i] = b;
                changed = true;
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    let cost = mssc_cost(ds, &centers, &member);
    KmeansResult { centers, member, cost, iterations, converged }
}

/// `m` distinct samples chosen uniformly without replacement.
pub fn seed_random_samples(ds: &Dataset, m: usize, rng: &mut Rng) -> Result<Centers> {
    if m == 0 || m > ds.n() {
        return Err(Error::TooManyCenters { m, n: ds.n() });
    }
    Ok(Centers::from_samples(ds, index::sample(rng, ds.n(), m)))
}

/// K-means++ seeding: first center uniform, every next one drawn with
/// probability proportional to the squared distance to the nearest chosen
/// center.
pub fn seed_kmeanspp(ds: &Dataset, m: usize, rng: &mut Rng) -> Result<Centers> {
    if m == 0 || m > ds.n() {
        return Err(Error::TooManyCenters { m, n: ds.n() });
    }
    let first = rng.random_range(0..ds.n());
    seed_kmeanspp_from(ds, m, first, rng)
}

/// [`seed_kmeanspp`] with the first center fixed at sample `first`.
pub fn seed_kmeanspp_from(ds: &Dataset, m: usize, first: usize, rng: &mut Rng) -> Result<Centers> {
    let n = ds.n();
    if m == 0 || m > n {
        return Err(Error::TooManyCenters { m, n });
    }
    let mut chosen = Vec::with_capacity(m);
    chosen.push(first);
    let mut weight: Vec<f64> = ds.rows().map(|p| sq_dist(p, ds.point(first))).collect();
    while chosen.len() < m {
        let total: f64 = weight.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in weight.iter().enumerate() {
                if w > 0.0 {
                    acc += w;
                    pick = Some(i);
                    if acc > target {
                        break;
                    }
                }
            }
            pick.expect("positive total weight")
        } else {
            // Every sample sits on a chosen center.
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen.push(pick);
        let c = ds.point(pick);
        for (w, p) in weight.iter_mut().zip(ds.rows()) {
            *w = w.min(sq_dist(p, c));
        }
    }
    Ok(Centers::from_samples(ds, chosen))
}

/// Distance from every sample to the nearest of the `active` centers.
pub fn distances_to_nearest(ds: &Dataset, centers: &Centers, active: &[usize]) -> Vec<f64> {
    ds.rows()
        .map(|p| {
            active
                .iter()
                .map(|&k| sq_dist(p, centers.center(k)))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .collect()
}

/// Relocates every empty center onto a sample drawn from the mutation
/// roulette (distances to the occupied centers, mixing weight `alpha`) and
/// reruns K-means from the repaired centers, until all `m` clusters are used.
pub fn repair_empty_clusters(
    ds: &Dataset,
    mut current: KmeansResult,
    alpha: f64,
    rng: &mut Rng,
    max_iter: usize,
) -> Result<KmeansResult> {
    let m = current.centers.m();
    if m > ds.n() {
        return Err(Error::TooManyCenters { m, n: ds.n() });
    }
    for _ in 0..REPAIR_ATTEMPTS {
        let empty = current.member.empty_clusters(m);
        if empty.is_empty() {
            return Ok(current);
        }
        let mut centers = current.centers.clone();
        let mut active: Vec<usize> = (0..m).filter(|k| !empty.contains(k)).collect();
        for &k in &empty {
            let dist = distances_to_nearest(ds, &centers, &active);
            let pick = roulette::sample(&dist, alpha, rng);
            centers.set_center(k, ds.point(pick));
            active.push(k);
        }
        current = hamerly_kmeans(ds, &centers, max_iter);
    }
    let empty = current.member.empty_clusters(m).len();
    if empty == 0 {
        Ok(current)
    } else {
        Err(Error::RepairFailed { empty, attempts: REPAIR_ATTEMPTS })
    }
}

/// Hamerly K-means from `init`, followed by empty-cluster repair when needed.
pub fn local_search(ds: &Dataset, init: &Centers, alpha: f64, rng: &mut Rng) -> Result<KmeansResult> {
    let res = hamerly_kmeans(ds, init, MAX_ITER);
    if res.member.empty_clusters(init.m()).is_empty() {
        Ok(res)
    } else {
        repair_empty_clusters(ds, res, alpha, rng, MAX_ITER)
    }
}

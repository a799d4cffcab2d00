//! Dense minimum-cost assignment.
//!
//! Shortest-augmenting-path form of the Hungarian method with row and column
//! potentials (Jonker-Volgenant style), `O(m³)` time. Rows are inserted one
//! at a time; each insertion grows a Dijkstra-like tree over the columns in
//! index order until it reaches a free column.

use crate::{Error, Result};

/// Square matrix of nonnegative finite costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    cost: Vec<f64>,
    m: usize,
}

impl CostMatrix {
    pub fn new(cost: Vec<f64>, m: usize) -> Result<Self> {
        if cost.len() != m * m {
            return Err(Error::Invalid(format!("{} entries do not form a {m}×{m} matrix", cost.len())));
        }
        if cost.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::Invalid("costs must be finite and nonnegative".into()));
        }
        Ok(Self { cost, m })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.as_ref().len() != m) {
            return Err(Error::Invalid("cost matrix is not square".into()));
        }
        Self::new(rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect(), m)
    }

    /// Euclidean distances between two center sets of equal size.
    pub fn from_centers(a: &crate::kmeans::Centers, b: &crate::kmeans::Centers) -> Self {
        assert_eq!(a.m(), b.m(), "center sets differ in size");
        let cost = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| crate::kmeans::sq_dist(x, y).sqrt()))
            .collect();
        Self { cost, m: a.m() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.m + j]
    }

    /// Total cost of assigning row `i` to column `perm[i]`.
    pub fn total(&self, perm: &[usize]) -> f64 {
        perm.iter().enumerate().map(|(i, &j)| self.get(i, j)).sum()
    }
}

/// Returns `perm` with `perm[i]` the column matched to row `i`, and the
/// minimum total cost.
pub fn solve_assignment(c: &CostMatrix) -> (Vec<usize>, f64) {
    let m = c.m;
    if m == 0 {
        return (Vec::new(), 0.0);
    }
    // 1-based internally; column 0 is the virtual root of each search tree.
    let mut u = vec![0.0; m + 1];
    let mut v = vec![0.0; m + 1];
    let mut row_of = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    let mut minv = vec![f64::INFINITY; m + 1];
    let mut used = vec![false; m + 1];

    for i in 1..=m {
        row_of[0] = i;
        let mut j0 = 0;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let reduced = c.get(i0 - 1, j - 1) - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0; m];
    for j in 1..=m {
        perm[row_of[j] - 1] = j - 1;
    }
    let total = c.total(&perm);
    (perm, total)
}

//! Solution quality and cluster validity.
//!
//! [`gap_percent`] compares an objective with a best-known value. The
//! external indices compare a partition with a reference one: [`crand`] is
//! the Hubert-Arabie adjusted Rand index, [`nmi`] the normalized mutual
//! information, and [`centroid_index`] counts orphaned centers under
//! nearest-neighbor mapping between two center sets.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::kmeans::{nearest, Centers};
use crate::{Error, Result};

/// `100 · (z − z_bks) / z_bks`; negative when `z` beats the reference.
pub fn gap_percent(z: f64, z_bks: f64) -> Result<f64> {
    if !(z_bks > 0.0) {
        return Err(Error::Invalid(format!("best-known value must be positive, got {z_bks}")));
    }
    Ok(100.0 * (z - z_bks) / z_bks)
}

/// Co-occurrence counts between two partitions of the same samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contingency {
    table: Vec<u64>,
    rows: Vec<u64>,
    cols: Vec<u64>,
    n: u64,
}

impl Contingency {
    pub fn new(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Invalid(format!(
                "partitions differ in length ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        let ka = a.iter().max().map_or(0, |&x| x + 1);
        let kb = b.iter().max().map_or(0, |&x| x + 1);
        let mut table = vec![0u64; ka * kb];
        let mut rows = vec![0u64; ka];
        let mut cols = vec![0u64; kb];
        for (&x, &y) in a.iter().zip(b) {
            table[x * kb + y] += 1;
            rows[x] += 1;
            cols[y] += 1;
        }
        Ok(Self { table, rows, cols, n: a.len() as u64 })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.rows
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.table[i * self.cols.len() + j]
    }

    pub fn cells(&self) -> &[u64] {
        &self.table
    }
}

fn pairs(x: u64) -> f64 {
    (x as f64) * (x.saturating_sub(1) as f64) / 2.0
}

/// Adjusted Rand index. When the index cannot vary (both partitions all
/// singletons, or both a single cluster) the partitions are identical and
/// the result is 1.
pub fn crand(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() < 2 {
        return Err(Error::Invalid("adjusted Rand needs at least 2 samples".into()));
    }
    let t = Contingency::new(a, b)?;
    let index: f64 = t.cells().iter().map(|&c| pairs(c)).sum();
    let sum_a: f64 = t.row_sums().iter().map(|&c| pairs(c)).sum();
    let sum_b: f64 = t.col_sums().iter().map(|&c| pairs(c)).sum();
    let expected = sum_a * sum_b / pairs(t.n());
    let max = 0.5 * (sum_a + sum_b);
    let denom = max - expected;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

/// Denominator used to normalize mutual information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NmiNormalization {
    /// `(H(A) + H(B)) / 2`.
    #[default]
    Arithmetic,
    /// `max(H(A), H(B))`.
    Max,
    /// `sqrt(H(A) · H(B))`.
    Geometric,
}

fn entropy(counts: &[u64], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// NMI with the arithmetic-mean normalization.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    nmi_with(a, b, NmiNormalization::Arithmetic)
}

/// NMI under a chosen normalization. Two single-cluster partitions score 1;
/// a single-cluster partition against a non-trivial one scores 0.
pub fn nmi_with(a: &[usize], b: &[usize], norm: NmiNormalization) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Invalid("NMI needs at least 1 sample".into()));
    }
    let t = Contingency::new(a, b)?;
    let n = t.n() as f64;
    let ha = entropy(t.row_sums(), n);
    let hb = entropy(t.col_sums(), n);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let kb = t.col_sums().len();
    let mut mi = 0.0;
    for (idx, &c) in t.cells().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (i, j) = (idx / kb, idx % kb);
        let pij = c as f64 / n;
        let pi = t.row_sums()[i] as f64 / n;
        let pj = t.col_sums()[j] as f64 / n;
        mi += pij * (pij / (pi * pj)).ln();
    }
    let denom = match norm {
        NmiNormalization::Arithmetic => 0.5 * (ha + hb),
        NmiNormalization::Max => ha.max(hb),
        NmiNormalization::Geometric => (ha * hb).sqrt(),
    };
    Ok((mi / denom).clamp(0.0, 1.0))
}

/// Number of centers in `to` that no center of `from` picks as nearest.
fn orphans(from: &Centers, to: &Centers) -> usize {
    let mut hit = vec![false; to.m()];
    for c in from.iter() {
        hit[nearest(c, to).0] = true;
    }
    hit.iter().filter(|h| !**h).count()
}

/// Centroid index: the larger orphan count of the two mapping directions.
pub fn centroid_index(c1: &Centers, c2: &Centers) -> usize {
    orphans(c1, c2).max(orphans(c2, c1))
}

/// Centroid index of a solution against the generating means.
pub fn centroid_index_vs_truth(solution: &Centers, truth_means: &Centers) -> usize {
    centroid_index(solution, truth_means)
}

/// CSV header of the run report, in column order.
pub const REPORT_HEADER: [&str; 10] = [
    "dataset",
    "m",
    "algorithm",
    "seed",
    "objective",
    "gap_percent",
    "wall_seconds",
    "crand",
    "nmi",
    "ci",
];

/// One benchmark row. External indices are absent without a reference
/// partition, the gap without a best-known value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub m: usize,
    pub algorithm: String,
    pub seed: u64,
    pub objective: f64,
    pub gap_percent: Option<f64>,
    pub wall_seconds: f64,
    pub crand: Option<f64>,
    pub nmi: Option<f64>,
    pub ci: Option<usize>,
}

pub fn write_reports<W: Write>(out: W, reports: &[RunReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if reports.is_empty() {
        w.write_record(REPORT_HEADER)?;
    }
    for r in reports {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_reports<R: Read>(input: R) -> Result<Vec<RunReport>> {
    let mut rd = csv::Reader::from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if header != REPORT_HEADER {
        return Err(Error::Invalid(format!("unexpected report header {header:?}")));
    }
    rd.deserialize().map(|r| r.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng as _;

    /// Adjusted Rand from explicit pair enumeration.
    fn crand_pairs(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let (mut both, mut in_a, mut in_b, mut total) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                let sa = a[i] == a[j];
                let sb = b[i] == b[j];
                both += f64::from(u8::from(sa && sb));
                in_a += f64::from(u8::from(sa));
                in_b += f64::from(u8::from(sb));
                total += 1.0;
            }
        }
        let expected = in_a * in_b / total;
        let max = 0.5 * (in_a + in_b);
        if max == expected {
            1.0
        } else {
            (both - expected) / (max - expected)
        }
    }

    /// NMI from per-label empirical frequencies, without a contingency table.
    fn nmi_direct(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len() as f64;
        let labels = |v: &[usize]| {
            let mut l = v.to_vec();
            l.sort_unstable();
            l.dedup();
            l
        };
        let (la, lb) = (labels(a), labels(b));
        let freq = |f: &dyn Fn(usize) -> bool| (0..a.len()).filter(|&i| f(i)).count() as f64 / n;
        let h = |ls: &[usize], v: &[usize]| -> f64 {
            ls.iter()
                .map(|&x| {
                    let p = freq(&|i| v[i] == x);
                    -p * p.ln()
                })
                .sum()
        };
        let (ha, hb) = (h(&la, a), h(&lb, b));
        if ha == 0.0 && hb == 0.0 {
            return 1.0;
        }
        if ha == 0.0 || hb == 0.0 {
            return 0.0;
        }
        let mut mi = 0.0;
        for &x in &la {
            for &y in &lb {
                let pxy = freq(&|i| a[i] == x && b[i] == y);
                if pxy > 0.0 {
                    mi += pxy * (pxy / (freq(&|i| a[i] == x) * freq(&|i| b[i] == y))).ln();
                }
            }
        }
        2.0 * mi / (ha + hb)
    }

    fn random_partition(rng: &mut crate::rng::Rng, n: usize, k: usize) -> Vec<usize> {
        (0..n).map(|_| rng.random_range(0..k)).collect()
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gap_percent(3.0, 3.0).unwrap(), 0.0);
        assert!((gap_percent(1.05 * 200.0, 200.0).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(gap_percent(5432601.91, 5432601.91).unwrap(), 0.0);
        assert!(gap_percent(9.0, 10.0).unwrap() < 0.0);
        assert!(gap_percent(1.0, 0.0).is_err());
        assert!(gap_percent(1.0, -2.0).is_err());
    }

    #[test]
    fn contingency_marginals() {
        let t = Contingency::new(&[0, 0, 1, 2], &[1, 0, 0, 0]).unwrap();
        assert_eq!(t.n(), 4);
        assert_eq!(t.row_sums(), &[2, 1, 1]);
        assert_eq!(t.col_sums(), &[3, 1]);
        assert_eq!(t.get(0, 1), 1);
        assert_eq!(t.cells().iter().sum::<u64>(), 4);
        assert!(Contingency::new(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn crand_examples() {
        assert_eq!(crand(&[0, 0, 1, 1, 2], &[2, 2, 0, 0, 1]).unwrap(), 1.0);
        let a = [0, 0, 0, 0, 1, 1, 1, 1];
        let b = [0; 8];
        assert_eq!(crand(&a, &b).unwrap(), 0.0);
        assert_eq!(crand_pairs(&a, &b), 0.0);
        assert!(crand(&[0], &[0]).is_err());
        assert!(crand(&[0, 1], &[0]).is_err());

        let mut rng = stream(31, 0);
        let a = random_partition(&mut rng, 12, 3);
        let b = random_partition(&mut rng, 12, 4);
        assert!((crand(&a, &b).unwrap() - crand_pairs(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn nmi_examples() {
        assert!((nmi(&[0, 0, 1, 1, 2], &[1, 1, 2, 2, 0]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(nmi(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), 0.0);
        assert_eq!(nmi(&[0, 0], &[0, 0]).unwrap(), 1.0);
        assert_eq!(nmi(&[0, 0, 0], &[0, 1, 1]).unwrap(), 0.0);
        assert!(nmi(&[], &[]).is_err());

        let mut rng = stream(32, 0);
        let a = random_partition(&mut rng, 12, 3);
        let b = random_partition(&mut rng, 12, 2);
        assert!((nmi(&a, &b).unwrap() - nmi_direct(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn nmi_normalizations_order() {
        let a = [0, 0, 1, 1, 2, 2, 2, 0];
        let b = [0, 1, 1, 1, 0, 0, 0, 1];
        let max = nmi_with(&a, &b, NmiNormalization::Max).unwrap();
        let geo = nmi_with(&a, &b, NmiNormalization::Geometric).unwrap();
        let ari = nmi_with(&a, &b, NmiNormalization::Arithmetic).unwrap();
        assert!(max <= ari + 1e-15 && ari <= geo + 1e-15);
    }

    #[test]
    fn centroid_index_examples() {
        let c = Centers::from_rows(&[[0.0, 0.0], [3.0, 1.0]]).unwrap();
        assert_eq!(centroid_index(&c, &c), 0);
        let c1 = Centers::from_rows(&[[0.0, 0.0], [0.1, 0.0]]).unwrap();
        let c2 = Centers::from_rows(&[[0.0, 0.0], [100.0, 100.0]]).unwrap();
        assert_eq!(centroid_index(&c1, &c2), 1);
        assert_eq!(centroid_index(&c2, &c1), 1);
    }

    #[test]
    fn centroid_index_against_truth() {
        let truth = Centers::from_rows(&[[0.0], [10.0], [20.0]]).unwrap();
        assert_eq!(centroid_index_vs_truth(&truth, &truth), 0);
        // Two true clusters merged into one center, a spare center elsewhere.
        let merged = Centers::from_rows(&[[5.0], [20.0], [40.0]]).unwrap();
        assert_eq!(centroid_index_vs_truth(&merged, &truth), 1);
        let uncovered = Centers::from_rows(&[[0.0], [1.0], [20.0]]).unwrap();
        assert!(centroid_index_vs_truth(&uncovered, &truth) >= 1);
    }

    #[test]
    fn report_csv_round_trip() {
        let reports = vec![
            RunReport {
                dataset: "iris".into(),
                m: 3,
                algorithm: "hgmeans".into(),
                seed: 18446744073709551615,
                objective: 78.85144142614601,
                gap_percent: Some(-1e-7),
                wall_seconds: 0.125,
                crand: Some(0.7302382722834697),
                nmi: Some(0.7581756800057784),
                ci: Some(0),
            },
            RunReport {
                dataset: "pts".into(),
                m: 2,
                algorithm: "kmeans".into(),
                seed: 1,
                objective: 1.0,
                gap_percent: None,
                wall_seconds: 0.0,
                crand: None,
                nmi: None,
                ci: None,
            },
        ];
        let mut buf = Vec::new();
        write_reports(&mut buf, &reports).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("dataset,m,algorithm,seed,objective,gap_percent,wall_seconds,crand,nmi,ci\n"));
        assert!(text.ends_with("pts,2,kmeans,1,1.0,,0.0,,,\n"), "{text}");
        assert_eq!(read_reports(&buf[..]).unwrap(), reports);

        let mut empty = Vec::new();
        write_reports(&mut empty, &[]).unwrap();
        assert!(read_reports(&empty[..]).unwrap().is_empty());
        assert!(read_reports(&b"a,b\n1,2\n"[..]).is_err());
    }

    proptest! {
        #[test]
        fn crand_matches_pair_counting(
            n in 2usize..=30,
            ka in 1usize..6,
            kb in 1usize..6,
            raw in proptest::collection::vec(0usize..1000, 60),
        ) {
            let a: Vec<usize> = raw[..n].iter().map(|x| x % ka).collect();
            let b: Vec<usize> = raw[30..30 + n].iter().map(|x| x % kb).collect();
            let v = crand(&a, &b).unwrap();
            prop_assert!((v - crand_pairs(&a, &b)).abs() <= 1e-12);
            prop_assert!(v <= 1.0 + 1e-12);
            prop_assert!((v - crand(&b, &a).unwrap()).abs() <= 1e-12);
        }

        #[test]
        fn nmi_bounded_symmetric_relabel_invariant(
            n in 1usize..=30,
            raw in proptest::collection::vec(0usize..4, 60),
        ) {
            let a = raw[..n].to_vec();
            let b = raw[30..30 + n].to_vec();
            let v = nmi(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!((v - nmi(&b, &a).unwrap()).abs() <= 1e-12);
            let relabeled: Vec<usize> = a.iter().map(|x| 3 - x).collect();
            prop_assert!((v - nmi(&relabeled, &b).unwrap()).abs() <= 1e-12);
            if n >= 2 {
                prop_assert!((crand(&a, &b).unwrap() - crand(&relabeled, &b).unwrap()).abs() <= 1e-12);
            }
        }

        #[test]
        fn centroid_index_symmetric(
            raw1 in proptest::collection::vec(-5.0f64..5.0, 2..12),
            raw2 in proptest::collection::vec(-5.0f64..5.0, 2..12),
        ) {
            let c1 = Centers::new(raw1[..raw1.len() / 2 * 2].to_vec(), 2).unwrap();
            let c2 = Centers::new(raw2[..raw2.len() / 2 * 2].to_vec(), 2).unwrap();
            let ci = centroid_index(&c1, &c2);
            prop_assert_eq!(ci, centroid_index(&c2, &c1));
            prop_assert!(ci < c1.m().max(c2.m()));
        }
    }
}

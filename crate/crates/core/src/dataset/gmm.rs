//! Spherical Gaussian mixtures with a separation filter.
//!
//! A mixture draws each mean coordinate uniformly in `mean_range` and each
//! variance uniformly in `var_range`. Samples pick a component uniformly and
//! add isotropic Gaussian noise. Two components are `c`-separated when
//! `‖μ_i − μ_j‖ ≥ c · √d · max(σ_i, σ_j)`; a mixture is accepted when it is not
//! fully 1-separated and at least 99% of its pairs are ½-separated.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use super::{Dataset, GroundTruth};
use crate::kmeans::Centers;
use crate::rng::{self, purpose, Rng};
use crate::{Error, Result};

/// Upper bound on regeneration attempts in [`generate_accepted_mixture`].
pub const MAX_MIXTURE_ATTEMPTS: usize = 10_000;

const ACCEPT_HALF_FRACTION: f64 = 0.99;

#[derive(Debug, Clone, PartialEq)]
pub struct GmmSpec {
    pub m: usize,
    pub d: usize,
    pub n: usize,
    pub mean_range: (f64, f64),
    pub var_range: (f64, f64),
    pub seed: u64,
}

impl GmmSpec {
    pub fn new(m: usize, d: usize, n: usize, seed: u64) -> Self {
        Self {
            m,
            d,
            n,
            mean_range: (0.0, 5.0),
            var_range: (1.0, 10.0),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Invalid(msg));
        if self.m == 0 || self.d == 0 {
            return bad("mixture needs m ≥ 1 and d ≥ 1".into());
        }
        if self.n < self.m {
            return bad(format!("n = {} is smaller than m = {}", self.n, self.m));
        }
        let (lo, hi) = self.mean_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return bad(format!("invalid mean range [{lo}, {hi}]"));
        }
        let (lo, hi) = self.var_range;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo <= hi) {
            return bad(format!("invalid variance range [{lo}, {hi}]"));
        }
        Ok(())
    }
}

/// Generating parameters: one mean and one variance per component.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    pub means: Centers,
    pub variances: Vec<f64>,
}

impl Mixture {
    pub fn m(&self) -> usize {
        self.variances.len()
    }

    /// CSV dump with columns `component,sigma2,mu_1..mu_d`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,sigma2");
        for j in 1..=self.means.d() {
            let _ = write!(out, ",mu_{j}");
        }
        out.push('\n');
        for (k, s2) in self.variances.iter().enumerate() {
            let _ = write!(out, "{k},{s2}");
            for x in self.means.center(k) {
                let _ = write!(out, ",{x}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    pub is_1_separated: bool,
    pub frac_half_separated: f64,
}

fn uniform_in(rng: &mut Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn draw_mixture(spec: &GmmSpec, rng: &mut Rng) -> Mixture {
    let coords = (0..spec.m * spec.d)
        .map(|_| uniform_in(rng, spec.mean_range))
        .collect();
    let variances = (0..spec.m).map(|_| uniform_in(rng, spec.var_range)).collect();
    Mixture {
        means: Centers::new(coords, spec.d).expect("mean ranges are finite"),
        variances,
    }
}

/// Draws `n` samples. Every component receives at least one sample (one slot
/// per component is reserved before the i.i.d. draws); the slots are then
/// shuffled so the reserved ones do not sit at the front.
fn sample_mixture(mixture: &Mixture, n: usize, rng: &mut Rng) -> (Dataset, GroundTruth) {
    let m = mixture.m();
    let d = mixture.means.d();
    let mut labels: Vec<usize> = (0..m).collect();
    labels.extend((m..n).map(|_| rng.random_range(0..m)));
    labels.shuffle(rng);

    let mut points = Vec::with_capacity(n * d);
    for &k in &labels {
        let sigma = mixture.variances[k].sqrt();
        for &mu in mixture.means.center(k) {
            let z: f64 = StandardNormal.sample(rng);
            points.push(mu + sigma * z);
        }
    }
    (
        Dataset::new(points, d).expect("finite samples"),
        GroundTruth::new(labels).expect("every component is sampled"),
    )
}

/// One draw of mixture parameters and samples, without the separation filter.
pub fn generate_gmm(spec: &GmmSpec) -> Result<(Dataset, GroundTruth, Mixture)> {
    spec.validate()?;
    let mixture = draw_mixture(spec, &mut rng::stream(spec.seed, purpose::MIXTURE));
    let (ds, truth) = sample_mixture(&mixture, spec.n, &mut sampling_rng(spec.seed, 0));
    Ok((ds, truth, mixture))
}

fn sampling_rng(seed: u64, attempt: u64) -> Rng {
    rng::stream(rng::derive(seed, &[attempt]), purpose::SEEDING)
}

pub fn separation_report(means: &Centers, variances: &[f64], d: usize) -> SeparationReport {
    let m = variances.len();
    let sqrt_d = (d as f64).sqrt();
    let mut all_one = true;
    let mut half = 0usize;
    let mut pairs = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            let dist = crate::kmeans::sq_dist(means.center(i), means.center(j)).sqrt();
            let spread = sqrt_d * variances[i].max(variances[j]).sqrt();
            all_one &= dist >= spread;
            half += usize::from(dist >= 0.5 * spread);
            pairs += 1;
        }
    }
    SeparationReport {
        is_1_separated: all_one,
        frac_half_separated: if pairs == 0 { 1.0 } else { half as f64 / pairs as f64 },
    }
}

pub fn accept_mixture(report: &SeparationReport) -> bool {
    !report.is_1_separated && report.frac_half_separated >= ACCEPT_HALF_FRACTION
}

/// Redraws mixture parameters until [`accept_mixture`] holds, then samples.
/// Returns the number of attempts used alongside the data.
pub fn generate_accepted_mixture(
    spec: &GmmSpec,
    max_attempts: usize,
) -> Result<(Dataset, GroundTruth, Mixture, SeparationReport, usize)> {
    spec.validate()?;
    if spec.m < 2 {
        return Err(Error::Invalid("separation needs at least 2 components".into()));
    }
    let mut rng = rng::stream(spec.seed, purpose::MIXTURE);
    for attempt in 1..=max_attempts {
        let mixture = draw_mixture(spec, &mut rng);
        let report = separation_report(&mixture.means, &mixture.variances, spec.d);
        if accept_mixture(&report) {
            let (ds, truth) = sample_mixture(&mixture, spec.n, &mut sampling_rng(spec.seed, attempt as u64));
            return Ok((ds, truth, mixture, report, attempt));
        }
    }
    Err(Error::MixtureRejected(max_attempts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn centers(rows: &[&[f64]]) -> Centers {
        Centers::from_rows(rows).unwrap()
    }

    #[test]
    fn single_component_mean() {
        let mut spec = GmmSpec::new(1, 2, 100, 11);
        spec.var_range = (1.0, 1.0);
        let (ds, truth, mix) = generate_gmm(&spec).unwrap();
        assert!(truth.labels().iter().all(|&l| l == 0));
        for j in 0..2 {
            let mean = ds.rows().map(|r| r[j]).sum::<f64>() / 100.0;
            assert!((mean - mix.means.center(0)[j]).abs() <= 5.0 / 10.0);
        }
    }

    #[test]
    fn dimensions_and_labels() {
        let (ds, truth, mix) = generate_gmm(&GmmSpec::new(20, 20, 50_000, 3)).unwrap();
        assert_eq!((ds.n(), ds.d()), (50_000, 20));
        assert_eq!(truth.m_true(), 20);
        assert_eq!(truth.len(), 50_000);
        assert_eq!(mix.m(), 20);
        for (k, &s2) in mix.variances.iter().enumerate() {
            assert!((1.0..=10.0).contains(&s2));
            assert!(mix.means.center(k).iter().all(|x| (0.0..=5.0).contains(x)));
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let spec = GmmSpec::new(2, 1, 50, 99);
        let a = generate_gmm(&spec).unwrap();
        let b = generate_gmm(&spec).unwrap();
        assert_eq!(a, b);
        let c = generate_gmm(&GmmSpec { seed: 100, ..spec }).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn covariance_converges_to_isotropic() {
        let mut spec = GmmSpec::new(1, 3, 20_000, 5);
        spec.var_range = (4.0, 4.0);
        let (ds, _, _) = generate_gmm(&spec).unwrap();
        let n = ds.n() as f64;
        let mean: Vec<f64> = (0..3).map(|j| ds.rows().map(|r| r[j]).sum::<f64>() / n).collect();
        for a in 0..3 {
            for b in 0..3 {
                let cov = ds
                    .rows()
                    .map(|r| (r[a] - mean[a]) * (r[b] - mean[b]))
                    .sum::<f64>()
                    / (n - 1.0);
                let (target, se) = if a == b {
                    (4.0, 4.0 * (2.0 / n).sqrt())
                } else {
                    (0.0, 4.0 / n.sqrt())
                };
                assert!((cov - target).abs() <= 3.0 * se, "cov[{a}][{b}] = {cov}");
            }
        }
    }

    #[test]
    fn coincident_means() {
        let r = separation_report(&centers(&[&[1.0, 1.0], &[1.0, 1.0]]), &[2.0, 3.0], 2);
        assert!(!r.is_1_separated);
        assert_eq!(r.frac_half_separated, 0.0);
    }

    #[test]
    fn direct_inequality() {
        let r = separation_report(&centers(&[&[0.0], &[2.0]]), &[1.0, 1.0], 1);
        assert!(r.is_1_separated);
        assert_eq!(r.frac_half_separated, 1.0);
    }

    #[test]
    fn one_of_three_pairs_half_separated() {
        // d = 1, σ = 1: ½-separated iff |Δμ| ≥ 0.5. Means 0, 0.2, 0.6 give
        // gaps 0.2, 0.6, 0.4; only the (0, 0.6) pair qualifies.
        let r = separation_report(&centers(&[&[0.0], &[0.2], &[0.6]]), &[1.0; 3], 1);
        assert!(!r.is_1_separated);
        assert!((r.frac_half_separated - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn acceptance_predicate() {
        let rep = |a, f| SeparationReport { is_1_separated: a, frac_half_separated: f };
        assert!(!accept_mixture(&rep(true, 1.0)));
        assert!(accept_mixture(&rep(false, 0.99)));
        assert!(!accept_mixture(&rep(false, 0.985)));
        assert_eq!(accept_mixture(&rep(false, 0.99)), accept_mixture(&rep(false, 0.99)));
    }

    #[test]
    fn accepted_mixture_satisfies_filter() {
        let spec = GmmSpec::new(20, 20, 2_000, 1);
        let (ds, truth, mix, rep, attempts) = generate_accepted_mixture(&spec, MAX_MIXTURE_ATTEMPTS).unwrap();
        assert!(accept_mixture(&rep));
        assert_eq!(rep, separation_report(&mix.means, &mix.variances, 20));
        assert!(attempts >= 1);
        assert_eq!(truth.len(), ds.n());
    }

    #[test]
    fn rejection_cap() {
        // Means packed into a tiny box with large variances are never ½-separated.
        let mut spec = GmmSpec::new(2, 2, 10, 0);
        spec.mean_range = (0.0, 0.01);
        spec.var_range = (100.0, 100.0);
        assert!(matches!(generate_accepted_mixture(&spec, 50), Err(Error::MixtureRejected(50))));
        // Far-apart means with tiny variances are always 1-separated.
        spec.mean_range = (0.0, 1e6);
        spec.var_range = (1e-12, 1e-12);
        assert!(matches!(generate_accepted_mixture(&spec, 50), Err(Error::MixtureRejected(50))));
    }

    #[test]
    fn csv_dump() {
        let mix = Mixture { means: centers(&[&[0.5, 1.0], &[2.0, 3.0]]), variances: vec![1.5, 2.0] };
        assert_eq!(mix.to_csv(), "component,sigma2,mu_1,mu_2\n0,1.5,0.5,1\n1,2,2,3\n");
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_gmm(&GmmSpec::new(3, 2, 2, 0)).is_err());
        assert!(generate_gmm(&GmmSpec::new(0, 2, 2, 0)).is_err());
        let mut spec = GmmSpec::new(2, 2, 4, 0);
        spec.var_range = (0.0, 1.0);
        assert!(generate_gmm(&spec).is_err());
    }
}

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{Algorithm, BenchConfig, DatasetSource};
use crate::dataset::{
    generate_accepted_mixture, generate_gmm, load_dataset, Dataset, GroundTruth,
    MAX_MIXTURE_ATTEMPTS,
};
use crate::genetic::{hgmeans_run, HgParams};
use crate::kmeans::{decode_centers, hamerly_kmeans, seed_kmeanspp, seed_random_samples, Centers, Membership, MAX_ITER};
use crate::metrics::{centroid_index, crand, gap_percent, nmi, write_reports, RunReport};
use crate::rng::{self, purpose};
use crate::{Error, Result};

/// A dataset ready for benchmarking, with its reference structure if known.
#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub id: String,
    pub data: Dataset,
    pub truth: Option<GroundTruth>,
    /// Generating means for mixtures, label centroids for labeled files.
    pub truth_centers: Option<Centers>,
}

fn read_labels(path: &Path) -> Result<GroundTruth> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse::<i64>().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("label `{}` is not an integer", l.trim()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GroundTruth::from_raw(&raw)
}

pub fn load_source(src: &DatasetSource) -> Result<LoadedDataset> {
    match src {
        DatasetSource::File { id, path, format, labels } => {
            let (data, mut truth) = load_dataset(path, *format)?;
            if let Some(lp) = labels {
                let t = read_labels(lp)?;
                if t.len() != data.n() {
                    return Err(Error::Invalid(format!(
                        "{}: {} labels for {} samples",
                        lp.display(),
                        t.len(),
                        data.n()
                    )));
                }
                truth = Some(t);
            }
            let truth_centers = truth.as_ref().map(|t| {
                let member = Membership::new(t.labels().to_vec());
                decode_centers(&data, &member, t.m_true(), None).0
            });
            Ok(LoadedDataset { id: id.clone(), data, truth, truth_centers })
        }
        DatasetSource::Gmm { id, spec } => {
            let (data, truth, mixture) = if spec.m >= 2 {
                let (ds, t, mix, _, _) = generate_accepted_mixture(spec, MAX_MIXTURE_ATTEMPTS)?;
                (ds, t, mix)
            } else {
                generate_gmm(spec)?
            };
            Ok(LoadedDataset {
                id: id.clone(),
                data,
                truth: Some(truth),
                truth_centers: Some(mixture.means),
            })
        }
    }
}

/// Reads a `dataset,m,bks_objective` table.
pub fn load_bks(path: &Path) -> Result<HashMap<(String, usize), f64>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rd = csv::Reader::from_reader(file);
    let mut table = HashMap::new();
    for row in rd.deserialize() {
        let (dataset, m, bks): (String, usize, f64) = row?;
        table.insert((dataset, m), bks);
    }
    Ok(table)
}

/// Outcome of one algorithm execution.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub centers: Centers,
    pub member: Membership,
    pub objective: f64,
    pub wall: Duration,
}

/// Runs `algo` once on `ds` with `m` clusters.
pub fn run_cell(
    ds: &Dataset,
    m: usize,
    algo: Algorithm,
    seed: u64,
    time_limit: Option<f64>,
) -> Result<CellResult> {
    let start = Instant::now();
    let mut rng = rng::stream(seed, purpose::SEEDING);
    let (centers, member, objective) = match algo {
        Algorithm::Kmeans | Algorithm::KmeansPp => {
            let init = if algo == Algorithm::Kmeans {
                seed_random_samples(ds, m, &mut rng)?
            } else {
                seed_kmeanspp(ds, m, &mut rng)?
            };
            let res = hamerly_kmeans(ds, &init, MAX_ITER);
            (res.centers, res.member, res.cost)
        }
        Algorithm::HgMeans | Algorithm::HgMeansFast => {
            let params = if algo == Algorithm::HgMeans {
                HgParams::new(m)
            } else {
                HgParams::fast(m)
            }
            .with_seed(seed);
            let limit = time_limit.map(Duration::from_secs_f64);
            let out = hgmeans_run(ds, &params, |p| match limit {
                Some(l) if p.elapsed >= l => ControlFlow::Break(()),
                _ => ControlFlow::Continue(()),
            })?;
            (out.best.centers, out.best.member, out.best.cost)
        }
    };
    Ok(CellResult { centers, member, objective, wall: start.elapsed() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub jobs: usize,
    /// Overrides the configuration's time limit when set.
    pub time_limit: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { jobs: 1, time_limit: None }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchOutcome {
    pub reports: Vec<RunReport>,
    /// One message per dataset or cell that could not be run.
    pub failures: Vec<String>,
}

struct Cell {
    dataset: usize,
    m: usize,
    algo: Algorithm,
    rep: usize,
    seed: u64,
}

fn report_for(
    ds: &LoadedDataset,
    m: usize,
    algorithm: String,
    seed: u64,
    res: &CellResult,
    bks: &HashMap<(String, usize), f64>,
) -> Result<RunReport> {
    let gap = bks
        .get(&(ds.id.clone(), m))
        .map(|&z| gap_percent(res.objective, z))
        .transpose()?;
    let (cr, nm) = match &ds.truth {
        Some(t) if t.len() >= 2 => (
            Some(crand(t.labels(), &res.member)?),
            Some(nmi(t.labels(), &res.member)?),
        ),
        _ => (None, None),
    };
    Ok(RunReport {
        dataset: ds.id.clone(),
        m,
        algorithm,
        seed,
        objective: res.objective,
        gap_percent: gap,
        wall_seconds: res.wall.as_secs_f64(),
        crand: cr,
        nmi: nm,
        ci: ds.truth_centers.as_ref().map(|tc| centroid_index(&res.centers, tc)),
    })
}

/// Runs every (dataset, m, algorithm, repetition) cell of `cfg`.
///
/// Cell seeds derive from the master seed and the cell coordinates, so the
/// rows do not depend on `jobs`. Rows come out in configuration order, with a
/// `<algorithm>-best` summary row after each repeated baseline cell.
pub fn run_benchmark(cfg: &BenchConfig, opts: RunOptions) -> Result<BenchOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let time_limit = opts.time_limit.or(cfg.time_limit);
    let bks = match &cfg.bks {
        Some(p) => load_bks(p)?,
        None => HashMap::new(),
    };

    let mut outcome = BenchOutcome::default();
    let loaded: Vec<Option<LoadedDataset>> = pool.install(|| {
        cfg.datasets.par_iter().map(load_source).collect::<Vec<_>>()
    })
    .into_iter()
    .zip(&cfg.datasets)
    .map(|(r, src)| match r {
        Ok(ds) => Some(ds),
        Err(e) => {
            outcome.failures.push(format!("dataset {}: {e}", src.id()));
            None
        }
    })
    .collect();

    let mut cells = Vec::new();
    for (di, ds) in loaded.iter().enumerate() {
        if ds.is_none() {
            continue;
        }
        for &m in &cfg.ms {
            for &algo in &cfg.algorithms {
                let reps = if algo.is_baseline() { cfg.repetitions } else { cfg.hg_repetitions };
                for rep in 0..reps {
                    let seed = rng::derive(cfg.seed, &[di as u64, m as u64, algo.code(), rep as u64]);
                    cells.push(Cell { dataset: di, m, algo, rep, seed });
                }
            }
        }
    }

    let results: Vec<Result<CellResult>> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| {
                let ds = loaded[c.dataset].as_ref().expect("loaded");
                run_cell(&ds.data, c.m, c.algo, c.seed, time_limit)
            })
            .collect()
    });

    let mut i = 0;
    while i < cells.len() {
        let head = &cells[i];
        let ds = loaded[head.dataset].as_ref().expect("loaded");
        let end = cells[i..]
            .iter()
            .position(|c| c.dataset != head.dataset || c.m != head.m || c.algo != head.algo)
            .map_or(cells.len(), |k| i + k);
        let mut best: Option<(usize, &CellResult)> = None;
        let mut total_wall = Duration::ZERO;
        for k in i..end {
            let c = &cells[k];
            match &results[k] {
                Ok(res) => {
                    match report_for(ds, c.m, c.algo.name().to_owned(), c.seed, res, &bks) {
                        Ok(r) => outcome.reports.push(r),
                        Err(e) => outcome.failures.push(format!("{} m={} {} rep {}: {e}", ds.id, c.m, c.algo, c.rep)),
                    }
                    total_wall += res.wall;
                    if best.is_none_or(|(_, b)| res.objective < b.objective) {
                        best = Some((k, res));
                    }
                }
                Err(e) => outcome
                    .failures
                    .push(format!("{} m={} {} rep {}: {e}", ds.id, c.m, c.algo, c.rep)),
            }
        }
        if head.algo.is_baseline() && end - i > 1 {
            if let Some((k, res)) = best {
                let summary = CellResult { wall: total_wall, ..res.clone() };
                let name = format!("{}-best", head.algo.name());
                if let Ok(r) = report_for(ds, head.m, name, cells[k].seed, &summary, &bks) {
                    outcome.reports.push(r);
                }
            }
        }
        i = end;
    }
    Ok(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    PartialFailure,
    InvalidConfig,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::PartialFailure => 1,
            ExitStatus::InvalidConfig => 2,
        }
    }
}

/// Loads the configuration, runs it and writes `<output>/results.csv`.
/// Returns the exit status and the path of the CSV when one was written.
pub fn cmd_run(config: &Path, opts: RunOptions) -> (ExitStatus, Option<PathBuf>, Vec<String>) {
    let cfg = match BenchConfig::load(config) {
        Ok(c) => c,
        Err(e) => return (ExitStatus::InvalidConfig, None, vec![e.to_string()]),
    };
    let outcome = match run_benchmark(&cfg, opts) {
        Ok(o) => o,
        Err(e) => return (ExitStatus::InvalidConfig, None, vec![e.to_string()]),
    };
    let mut messages = outcome.failures;
    let write = || -> Result<PathBuf> {
        std::fs::create_dir_all(&cfg.output).map_err(|e| Error::io(&cfg.output, e))?;
        let path = cfg.output.join("results.csv");
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_reports(std::io::BufWriter::new(file), &outcome.reports)?;
        Ok(path)
    };
    match write() {
        Ok(path) => {
            let status = if messages.is_empty() { ExitStatus::Success } else { ExitStatus::PartialFailure };
            (status, Some(path), messages)
        }
        Err(e) => {
            messages.push(e.to_string());
            (ExitStatus::PartialFailure, None, messages)
        }
    }
}

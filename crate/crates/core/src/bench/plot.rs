use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::metrics::read_reports;
use crate::{Error, Result};

/// `y ≈ coefficient · x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub coefficient: f64,
    pub exponent: f64,
}

/// Least-squares line through `(ln x, ln y)`. Needs at least two distinct
/// positive `x` values; points with a non-positive coordinate are ignored.
pub fn fit_power_law(points: &[(f64, f64)]) -> Option<PowerLaw> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    Some(PowerLaw { coefficient: (my - exponent * mx).exp(), exponent })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOutput {
    /// One `<dataset>.<algorithm>.dat` file per series.
    pub series: Vec<PathBuf>,
    /// `powerlaw.log`.
    pub fit_log: PathBuf,
    /// Fitted laws per (dataset, algorithm); `None` when the fit was skipped.
    pub fits: Vec<(String, String, Option<PowerLaw>)>,
}

/// Aggregates run reports into plot-ready series: for every dataset and
/// algorithm, one whitespace-separated row per `m` with the median wall time
/// and the mean gap (`NaN` when no gap is known). Also fits
/// `time ≈ a · m^b` per series and logs the exponents.
pub fn cmd_plotdata(csvs: &[PathBuf], out_dir: &Path) -> Result<PlotOutput> {
    type Cell = (Vec<f64>, Vec<f64>);
    let mut groups: BTreeMap<(String, String), BTreeMap<usize, Cell>> = BTreeMap::new();
    for path in csvs {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        for r in read_reports(file)? {
            let cell = groups.entry((r.dataset, r.algorithm)).or_default().entry(r.m).or_default();
            cell.0.push(r.wall_seconds);
            if let Some(g) = r.gap_percent {
                cell.1.push(g);
            }
        }
    }
    if groups.is_empty() {
        return Err(Error::Invalid("no run reports in input".into()));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut out = PlotOutput { series: Vec::new(), fit_log: out_dir.join("powerlaw.log"), fits: Vec::new() };
    let mut log = String::new();
    for ((dataset, algorithm), by_m) in groups {
        let mut body = String::from("# m median_wall_seconds mean_gap_percent runs\n");
        let mut points = Vec::new();
        for (m, (mut times, gaps)) in by_m {
            let t = median(&mut times);
            let gap = if gaps.is_empty() { f64::NAN } else { gaps.iter().sum::<f64>() / gaps.len() as f64 };
            let _ = writeln!(body, "{m} {t} {gap} {}", times.len());
            points.push((m as f64, t));
        }
        let path = out_dir.join(format!("{dataset}.{algorithm}.dat"));
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        out.series.push(path);

        let fit = fit_power_law(&points);
        match fit {
            Some(f) => {
                let _ = writeln!(
                    log,
                    "{dataset} {algorithm} points={} time ~ {:.6e} * m^{:.4}",
                    points.len(),
                    f.coefficient,
                    f.exponent
                );
            }
            None => {
                let _ = writeln!(log, "{dataset} {algorithm} points={} fit skipped", points.len());
            }
        }
        out.fits.push((dataset, algorithm, fit));
    }
    std::fs::write(&out.fit_log, log).map_err(|e| Error::io(&out.fit_log, e))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{write_reports, RunReport};
    use crate::rng::stream;
    use rand::Rng as _;

    fn report(m: usize, wall: f64, gap: Option<f64>) -> RunReport {
        RunReport {
            dataset: "d".into(),
            m,
            algorithm: "hgmeans".into(),
            seed: 0,
            objective: 1.0,
            gap_percent: gap,
            wall_seconds: wall,
            crand: None,
            nmi: None,
            ci: None,
        }
    }

    fn write(dir: &Path, name: &str, rows: &[RunReport]) -> PathBuf {
        let p = dir.join(name);
        write_reports(std::fs::File::create(&p).unwrap(), rows).unwrap();
        p
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [2.0, 5.0, 10.0, 20.0, 50.0].iter().map(|&m| (m, 2.0 * m * m)).collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.exponent - 2.0).abs() < 0.01);
        assert!((f.coefficient - 2.0).abs() < 1e-9);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = stream(17, 0);
        let pts: Vec<(f64, f64)> = (1..=40)
            .map(|k| {
                let m = 5.0 * k as f64;
                (m, 0.3 * m.powf(1.3) * (1.0 + rng.random_range(-0.1..0.1)))
            })
            .collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((1.2..=1.4).contains(&f.exponent), "{}", f.exponent);
    }

    #[test]
    fn degenerate_fits() {
        assert!(fit_power_law(&[(3.0, 1.0)]).is_none());
        assert!(fit_power_law(&[(3.0, 1.0), (3.0, 2.0)]).is_none());
        assert!(fit_power_law(&[(0.0, 1.0), (3.0, 2.0)]).is_none());
    }

    #[test]
    fn single_row_series() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), "r.csv", &[report(5, 0.25, None)]);
        let out = cmd_plotdata(&[csv], &dir.path().join("plots")).unwrap();
        assert_eq!(out.series.len(), 1);
        let body = std::fs::read_to_string(&out.series[0]).unwrap();
        assert_eq!(body.lines().nth(1).unwrap(), "5 0.25 NaN 1");
        assert_eq!(out.fits[0].2, None);
        assert!(std::fs::read_to_string(&out.fit_log).unwrap().contains("fit skipped"));
    }

    #[test]
    fn medians_means_and_fit_across_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.csv", &[report(2, 8.0, Some(1.0)), report(2, 1.0, Some(3.0)), report(4, 32.0, None)]);
        let b = write(dir.path(), "b.csv", &[report(2, 9.0, None), report(4, 32.0, Some(0.5))]);
        let out = cmd_plotdata(&[a, b], dir.path()).unwrap();
        let body = std::fs::read_to_string(&out.series[0]).unwrap();
        let rows: Vec<&str> = body.lines().skip(1).collect();
        assert_eq!(rows, vec!["2 8 2 3", "4 32 0.5 2"]);
        let fit = out.fits[0].2.unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_input_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), "e.csv", &[]);
        assert!(cmd_plotdata(&[csv], dir.path()).is_err());
    }
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::dataset::{generate_accepted_mixture, write_dataset, GmmSpec};
use crate::{Error, Result};

/// Files written by [`cmd_genmix`].
#[derive(Debug, Clone, PartialEq)]
pub struct GenmixFiles {
    /// `<prefix>.txt`, plain dataset format.
    pub data: PathBuf,
    /// `<prefix>.labels`, one generating component per line.
    pub labels: PathBuf,
    /// `<prefix>.mixture.csv`, columns `component,sigma2,mu_1..mu_d`.
    pub mixture: PathBuf,
    /// `<prefix>.separation.txt`, `key: value` lines.
    pub separation: PathBuf,
    pub attempts: usize,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Generates an accepted mixture and writes its files under `prefix`.
pub fn cmd_genmix(spec: &GmmSpec, prefix: &Path, max_attempts: usize) -> Result<GenmixFiles> {
    let (ds, truth, mixture, report, attempts) = generate_accepted_mixture(spec, max_attempts)?;
    if let Some(dir) = prefix.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let files = GenmixFiles {
        data: with_suffix(prefix, ".txt"),
        labels: with_suffix(prefix, ".labels"),
        mixture: with_suffix(prefix, ".mixture.csv"),
        separation: with_suffix(prefix, ".separation.txt"),
        attempts,
    };
    let put = |path: &Path, body: String| std::fs::write(path, body).map_err(|e| Error::io(path, e));

    write_dataset(&files.data, &ds, None)?;
    let mut labels = String::with_capacity(truth.len() * 3);
    for l in truth.labels() {
        let _ = writeln!(labels, "{l}");
    }
    put(&files.labels, labels)?;
    put(&files.mixture, mixture.to_csv())?;
    put(
        &files.separation,
        format!(
            "m: {}\nd: {}\nn: {}\nseed: {}\nattempts: {attempts}\nis_1_separated: {}\nfrac_half_separated: {}\naccepted: true\n",
            spec.m, spec.d, spec.n, spec.seed, report.is_1_separated, report.frac_half_separated
        ),
    )?;
    Ok(files)
}

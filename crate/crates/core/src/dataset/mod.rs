//! Point storage and dataset files.
//!
//! Text format: the first line holds `n d`, followed by `n` rows of `d`
//! whitespace-separated reals. The labeled variant appends one integer label
//! to each row. Blank lines are ignored; `\r\n` line endings are accepted.

mod gmm;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub use gmm::{
    accept_mixture, generate_accepted_mixture, generate_gmm, separation_report, GmmSpec,
    Mixture, SeparationReport, MAX_MIXTURE_ATTEMPTS,
};

use crate::{Error, Result};

/// Immutable `n × d` matrix of finite coordinates, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<f64>,
    n: usize,
    d: usize,
}

impl Dataset {
    /// Builds a dataset from row-major coordinates.
    pub fn new(points: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        if points.is_empty() || !points.len().is_multiple_of(d) {
            return Err(Error::Invalid(format!(
                "{} coordinates do not form rows of width {d}",
                points.len()
            )));
        }
        if let Some(pos) = points.iter().position(|x| !x.is_finite()) {
            return Err(Error::Invalid(format!(
                "non-finite coordinate at row {}, column {}",
                pos / d,
                pos % d
            )));
        }
        let n = points.len() / d;
        Ok(Self { points, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut points = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::Invalid(format!(
                    "row {i} has {} values, expected {d}",
                    row.len()
                )));
            }
            points.extend_from_slice(row);
        }
        Self::new(points, d)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.points.chunks_exact(self.d)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.points
    }

    /// Largest absolute coordinate, used to scale numerical tolerances.
    pub fn magnitude(&self) -> f64 {
        self.points.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// Number of pairwise-distinct points.
    pub fn distinct_points(&self) -> usize {
        let mut rows: Vec<&[f64]> = self.rows().collect();
        rows.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        rows.dedup();
        rows.len()
    }
}

/// Reference partition with dense labels `0..m_true`, every label used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    labels: Vec<usize>,
    m_true: usize,
}

impl GroundTruth {
    /// Validates already-dense labels.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let m_true = labels.iter().max().map_or(0, |&x| x + 1);
        let mut seen = vec![false; m_true];
        for &l in &labels {
            seen[l] = true;
        }
        if labels.is_empty() || seen.iter().any(|s| !s) {
            return Err(Error::Invalid("labels are not a dense 0-based range".into()));
        }
        Ok(Self { labels, m_true })
    }

    /// Remaps arbitrary integer labels onto `0..k` in increasing label order.
    pub fn from_raw(raw: &[i64]) -> Result<Self> {
        let dense: BTreeMap<i64, usize> = raw
            .iter()
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(k, v)| (v, k))
            .collect();
        Self::new(raw.iter().map(|v| dense[v]).collect())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn m_true(&self) -> usize {
        self.m_true
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Labeled,
}

pub fn load_dataset(
    path: impl AsRef<Path>,
    format: Format,
) -> Result<(Dataset, Option<GroundTruth>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(&text, format)
}

pub fn parse_dataset(text: &str, format: Format) -> Result<(Dataset, Option<GroundTruth>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `n d` header".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |tok: &str| {
        tok.parse::<usize>().ok().filter(|&v| v > 0).ok_or_else(|| Error::Parse {
            line: hline,
            msg: format!("malformed header `{header}`: expected two positive integers"),
        })
    };
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("malformed header `{header}`: expected two positive integers"),
        });
    }
    let (n, d) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    let width = d + usize::from(format == Format::Labeled);

    let mut points = Vec::with_capacity(n * d);
    let mut raw_labels = Vec::new();
    let mut row = 0;
    for (line, content) in lines {
        row += 1;
        if row > n {
            return Err(Error::Parse {
                line,
                msg: format!("more than the {n} rows declared in the header"),
            });
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != width {
            return Err(Error::Parse {
                line,
                msg: format!("row {row} has {} of {width} values", tokens.len()),
            });
        }
        for tok in &tokens[..d] {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("non-numeric token `{tok}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("non-finite coordinate `{tok}`"),
                });
            }
            points.push(v);
        }
        if format == Format::Labeled {
            let tok = tokens[d];
            raw_labels.push(tok.parse::<i64>().map_err(|_| Error::Parse {
                line,
                msg: format!("label `{tok}` is not an integer"),
            })?);
        }
    }
    if row != n {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: format!("header declares {n} rows, found {row}"),
        });
    }

    let ds = Dataset::new(points, d)?;
    let truth = match format {
        Format::Plain => None,
        Format::Labeled => Some(GroundTruth::from_raw(&raw_labels)?),
    };
    Ok((ds, truth))
}

/// Renders a dataset (and optional labels) in the loader's text format.
pub fn format_dataset(ds: &Dataset, labels: Option<&[usize]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", ds.n(), ds.d());
    for (i, row) in ds.rows().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{x}");
        }
        if let Some(l) = labels {
            let _ = write!(out, " {}", l[i]);
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(path: impl AsRef<Path>, ds: &Dataset, labels: Option<&[usize]>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_dataset(ds, labels)).map_err(|e| Error::io(path, e))
}

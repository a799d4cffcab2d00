//! Benchmark configuration files.
//!
//! One `key = value` entry per line; `#` starts a comment. Keys:
//!
//! ```text
//! dataset = <path> [labeled] [labels=<path>] [id=<name>]   # repeatable
//! gmm = <id> m=<M> d=<D> n=<N> [seed=<S>] [mean=<lo>:<hi>] [var=<lo>:<hi>]   # repeatable
//! m = 2, 5, 10
//! algorithms = hgmeans, hgmeans-fast, kmeans, kmeanspp   # default: hgmeans
//! repetitions = 500          # runs per baseline cell, default 1
//! hg_repetitions = 1         # runs per HG-means cell, default 1
//! bks = <path>               # CSV dataset,m,bks_objective
//! output = <dir>             # default: results
//! seed = 42                  # master seed, default 0
//! time_limit = 60            # seconds per HG-means run
//! ```
//!
//! Relative paths resolve against the configuration file's directory. A
//! dataset id defaults to the file stem and must not contain commas.

use std::path::{Path, PathBuf};

use super::Algorithm;
use crate::dataset::{Format, GmmSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    File {
        id: String,
        path: PathBuf,
        format: Format,
        labels: Option<PathBuf>,
    },
    Gmm {
        id: String,
        spec: GmmSpec,
    },
}

impl DatasetSource {
    pub fn id(&self) -> &str {
        match self {
            DatasetSource::File { id, .. } | DatasetSource::Gmm { id, .. } => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub datasets: Vec<DatasetSource>,
    pub ms: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: usize,
    pub hg_repetitions: usize,
    pub bks: Option<PathBuf>,
    pub output: PathBuf,
    pub seed: u64,
    pub time_limit: Option<f64>,
}

impl BenchConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let resolve = |p: &str| {
            let p = PathBuf::from(p);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        let mut cfg = BenchConfig {
            datasets: Vec::new(),
            ms: Vec::new(),
            algorithms: Vec::new(),
            repetitions: 1,
            hg_repetitions: 1,
            bks: None,
            output: resolve("results"),
            seed: 0,
            time_limit: None,
        };

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| Error::Config { line, msg };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let number = |v: &str| -> Result<u64> {
                v.parse().map_err(|_| err(format!("`{v}` is not a nonnegative integer")))
            };
            match key {
                "dataset" => cfg.datasets.push(parse_file_source(value, &resolve).map_err(err)?),
                "gmm" => cfg.datasets.push(parse_gmm_source(value).map_err(err)?),
                "m" => {
                    for tok in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                        let m = number(tok)? as usize;
                        if m == 0 {
                            return Err(err("m must be positive".into()));
                        }
                        cfg.ms.push(m);
                    }
                }
                "algorithms" => {
                    for tok in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                        let a: Algorithm = tok.parse().map_err(|e: Error| err(e.to_string()))?;
                        if !cfg.algorithms.contains(&a) {
                            cfg.algorithms.push(a);
                        }
                    }
                }
                "repetitions" => cfg.repetitions = number(value)? as usize,
                "hg_repetitions" => cfg.hg_repetitions = number(value)? as usize,
                "bks" => cfg.bks = Some(resolve(value)),
                "output" => cfg.output = resolve(value),
                "seed" => cfg.seed = number(value)?,
                "time_limit" => {
                    let t: f64 = value
                        .parse()
                        .ok()
                        .filter(|t: &f64| *t > 0.0 && t.is_finite())
                        .ok_or_else(|| err(format!("`{value}` is not a positive number of seconds")))?;
                    cfg.time_limit = Some(t);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }

        let fail = |msg: &str| Err(Error::Config { line: 0, msg: msg.into() });
        if cfg.datasets.is_empty() {
            return fail("no dataset or gmm entry");
        }
        if cfg.ms.is_empty() {
            return fail("no m values");
        }
        if cfg.repetitions == 0 || cfg.hg_repetitions == 0 {
            return fail("repetitions must be at least 1");
        }
        if cfg.algorithms.is_empty() {
            cfg.algorithms.push(Algorithm::HgMeans);
        }
        let mut ids: Vec<&str> = cfg.datasets.iter().map(DatasetSource::id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return fail("dataset ids must be unique");
        }
        Ok(cfg)
    }
}

fn check_id(id: &str) -> std::result::Result<(), String> {
    if id.is_empty() || id.contains(',') || id.contains(char::is_whitespace) {
        Err(format!("invalid dataset id `{id}`"))
    } else {
        Ok(())
    }
}

fn parse_file_source(
    value: &str,
    resolve: &dyn Fn(&str) -> PathBuf,
) -> std::result::Result<DatasetSource, String> {
    let mut toks = value.split_whitespace();
    let path_str = toks.next().ok_or("dataset entry needs a path")?;
    let path = resolve(path_str);
    let mut format = Format::Plain;
    let mut labels = None;
    let mut id = Path::new(path_str)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    for tok in toks {
        match tok.split_once('=') {
            None if tok == "labeled" => format = Format::Labeled,
            Some(("labels", p)) => labels = Some(resolve(p)),
            Some(("id", name)) => id = name.to_owned(),
            _ => return Err(format!("unknown dataset option `{tok}`")),
        }
    }
    if format == Format::Labeled && labels.is_some() {
        return Err("use either `labeled` or `labels=`, not both".into());
    }
    check_id(&id)?;
    Ok(DatasetSource::File { id, path, format, labels })
}

fn parse_range(v: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = v.split_once(':').ok_or_else(|| format!("range `{v}` must look like lo:hi"))?;
    let p = |s: &str| s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
    Ok((p(lo)?, p(hi)?))
}

fn parse_gmm_source(value: &str) -> std::result::Result<DatasetSource, String> {
    let mut toks = value.split_whitespace();
    let id = toks.next().ok_or("gmm entry needs an id")?.to_owned();
    check_id(&id)?;
    let (mut m, mut d, mut n) = (None, None, None);
    let mut spec = GmmSpec::new(0, 0, 0, 0);
    for tok in toks {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("expected key=value, got `{tok}`"))?;
        let int = || v.parse::<u64>().map_err(|_| format!("`{v}` is not an integer"));
        match k {
            "m" => m = Some(int()? as usize),
            "d" => d = Some(int()? as usize),
            "n" => n = Some(int()? as usize),
            "seed" => spec.seed = int()?,
            "mean" => spec.mean_range = parse_range(v)?,
            "var" => spec.var_range = parse_range(v)?,
            _ => return Err(format!("unknown gmm option `{k}`")),
        }
    }
    spec.m = m.ok_or("gmm entry needs m=")?;
    spec.d = d.ok_or("gmm entry needs d=")?;
    spec.n = n.ok_or("gmm entry needs n=")?;
    spec.validate().map_err(|e| e.to_string())?;
    Ok(DatasetSource::Gmm { id, spec })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config() {
        let text = "\
# grid
dataset = data/iris.txt labeled
dataset = /abs/pts.txt id=points labels=pts.labels
gmm = g20 m=20 d=5 n=400 seed=3 mean=0:5 var=1:10
m = 2, 5,10
algorithms = hgmeans, kmeanspp, hgmeans
repetitions = 50   # restarts
bks = bks.csv
output = out
seed = 42
time_limit = 2.5
";
        let cfg = BenchConfig::parse(text, Path::new("/base")).unwrap();
        assert_eq!(cfg.ms, vec![2, 5, 10]);
        assert_eq!(cfg.algorithms, vec![Algorithm::HgMeans, Algorithm::KmeansPp]);
        assert_eq!(cfg.repetitions, 50);
        assert_eq!(cfg.hg_repetitions, 1);
        assert_eq!(cfg.bks, Some(PathBuf::from("/base/bks.csv")));
        assert_eq!(cfg.output, PathBuf::from("/base/out"));
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.time_limit, Some(2.5));
        assert_eq!(
            cfg.datasets[0],
            DatasetSource::File {
                id: "iris".into(),
                path: "/base/data/iris.txt".into(),
                format: Format::Labeled,
                labels: None
            }
        );
        assert_eq!(cfg.datasets[1].id(), "points");
        match &cfg.datasets[2] {
            DatasetSource::Gmm { id, spec } => {
                assert_eq!(id, "g20");
                assert_eq!((spec.m, spec.d, spec.n, spec.seed), (20, 5, 400, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn defaults() {
        let cfg = BenchConfig::parse("dataset = a.txt\nm = 3\n", Path::new(".")).unwrap();
        assert_eq!(cfg.algorithms, vec![Algorithm::HgMeans]);
        assert_eq!(cfg.repetitions, 1);
        assert_eq!(cfg.time_limit, None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("dataset = a.txt\nm = 3\nfoo = 1\n", 3),
            ("dataset = a.txt\nm = x\n", 2),
            ("m = 3\nalgorithms = simplex\n", 2),
            ("dataset = a.txt weird\n", 1),
            ("gmm = g m=2 d=2\n", 1),
            ("gmm = g m=5 d=2 n=3\n", 1),
            ("no equals sign\n", 1),
            ("time_limit = -1\n", 1),
        ];
        for (text, expect) in cases {
            match BenchConfig::parse(text, Path::new(".")) {
                Err(Error::Config { line, .. }) => assert_eq!(line, expect, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn structural_errors() {
        for text in [
            "m = 3\n",
            "dataset = a.txt\n",
            "dataset = a.txt\nm = 3\nrepetitions = 0\n",
            "dataset = a.txt\ndataset = b/a.txt\nm = 2\n",
            "dataset = a.txt id=x,y\nm = 2\n",
        ] {
            assert!(BenchConfig::parse(text, Path::new(".")).is_err(), "{text}");
        }
    }
}

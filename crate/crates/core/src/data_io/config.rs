use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::updaters::Method;

pub const CONFIG_KEYS: [&str; 12] = [
    "dataset",
    "method",
    "rho",
    "lambda",
    "mu_reg",
    "eta0",
    "passes",
    "seeds",
    "checkpoint_every",
    "split",
    "graph_threshold",
    "dim",
];

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSource {
    /// `synthetic:<n>x<d>[:seed]`, the fused-lasso generator.
    Synthetic { n: usize, d: usize, seed: u64 },
    Libsvm(PathBuf),
}

impl DatasetSource {
    pub fn parse(s: &str) -> Result<Self> {
        let Some(rest) = s.strip_prefix("synthetic:") else {
            if s.is_empty() {
                return Err(Error::InvalidInput("empty dataset path".into()));
            }
            return Ok(DatasetSource::Libsvm(PathBuf::from(s)));
        };
        let bad = || Error::InvalidInput(format!("expected `synthetic:<n>x<d>[:seed]`, got `{s}`"));
        let (shape, seed) = match rest.split_once(':') {
            Some((shape, seed)) => (shape, seed.parse().map_err(|_| bad())?),
            None => (rest, 0),
        };
        let (n, d) = shape.split_once('x').ok_or_else(bad)?;
        Ok(DatasetSource::Synthetic {
            n: n.parse().map_err(|_| bad())?,
            d: d.parse().map_err(|_| bad())?,
            seed,
        })
    }
}

impl fmt::Display for DatasetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetSource::Synthetic { n, d, seed } => write!(f, "synthetic:{n}x{d}:{seed}"),
            DatasetSource::Libsvm(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Flat `key = value` experiment description. `#` starts a comment; unknown
/// keys are rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dataset: DatasetSource,
    pub methods: Vec<Method>,
    pub rho: f64,
    pub lambda: f64,
    pub mu_reg: f64,
    /// Fixed stepsize constant; tuned per method when absent.
    pub eta0: Option<f64>,
    /// Budget in effective passes over the training set.
    pub passes: usize,
    pub seeds: Vec<u64>,
    /// Trace cadence in effective passes.
    pub checkpoint_every: usize,
    pub split: f64,
    pub graph_threshold: f64,
    /// Feature dimension override; may only raise the parsed `d`.
    pub dim: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dataset: DatasetSource::Synthetic {
                n: 1000,
                d: 50,
                seed: 0,
            },
            methods: Method::COMPARED.to_vec(),
            rho: 0.01,
            lambda: 1e-5,
            mu_reg: 0.0,
            eta0: None,
            passes: 50,
            seeds: (0..10).collect(),
            checkpoint_every: 1,
            split: 0.5,
            graph_threshold: 0.1,
            dim: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::InvalidInput(format!("{key}: expected a finite number, got `{v}`")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::InvalidInput(format!("{key}: expected a non-negative integer, got `{v}`")))
}

/// `0..10`, `1,2,5` or a single seed.
fn parse_seeds(v: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidInput(format!("seeds: expected `a..b` or a comma list, got `{v}`"));
    if let Some((a, b)) = v.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..b).collect());
    }
    v.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

impl RunConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse {
                path: origin.to_string(),
                line: lineno + 1,
                msg,
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| perr(format!("expected `key = value`, got `{line}`")))?;
            cfg.set(k.trim(), v.trim()).map_err(|e| perr(e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies one key, as from a config line or a command-line flag.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "dataset" => self.dataset = DatasetSource::parse(value)?,
            "method" => {
                self.methods = value
                    .split(',')
                    .map(|m| m.trim().parse::<Method>())
                    .collect::<Result<_>>()?
            }
            "rho" => self.rho = parse_f64(key, value)?,
            "lambda" => self.lambda = parse_f64(key, value)?,
            "mu_reg" => self.mu_reg = parse_f64(key, value)?,
            "eta0" => {
                self.eta0 = match value {
                    "" | "auto" => None,
                    v => Some(parse_f64(key, v)?),
                }
            }
            "passes" => self.passes = parse_usize(key, value)?,
            "seeds" => self.seeds = parse_seeds(value)?,
            "checkpoint_every" => self.checkpoint_every = parse_usize(key, value)?,
            "split" => self.split = parse_f64(key, value)?,
            "graph_threshold" => self.graph_threshold = parse_f64(key, value)?,
            "dim" => self.dim = Some(parse_usize(key, value)?),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown key `{key}` (known: {})",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidInput(m));
        if !(self.rho > 0.0) {
            return fail(format!("rho must be positive, got {}", self.rho));
        }
        if !(self.lambda >= 0.0) {
            return fail(format!("lambda must be non-negative, got {}", self.lambda));
        }
        if !(self.mu_reg >= 0.0) {
            return fail(format!("mu_reg must be non-negative, got {}", self.mu_reg));
        }
        if let Some(e) = self.eta0 {
            if !(e > 0.0) {
                return fail(format!("eta0 must be positive, got {e}"));
            }
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return fail(format!("split must lie in (0,1), got {}", self.split));
        }
        if !(0.0..1.0).contains(&self.graph_threshold) {
            return fail(format!("graph_threshold must lie in [0,1), got {}", self.graph_threshold));
        }
        if self.passes == 0 {
            return fail("passes must be at least 1".into());
        }
        if self.checkpoint_every == 0 {
            return fail("checkpoint_every must be at least 1".into());
        }
        if self.methods.is_empty() || self.seeds.is_empty() {
            return fail("need at least one method and one seed".into());
        }
        Ok(())
    }

    /// Canonical text form; parses back to an equal config.
    pub fn to_config_string(&self) -> String {
        let methods: Vec<&str> = self.methods.iter().map(|m| m.name()).collect();
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        let mut s = format!(
            "dataset = {}\nmethod = {}\nrho = {:?}\nlambda = {:?}\nmu_reg = {:?}\neta0 = {}\npasses = {}\nseeds = {}\ncheckpoint_every = {}\nsplit = {:?}\ngraph_threshold = {:?}\n",
            self.dataset,
            methods.join(","),
            self.rho,
            self.lambda,
            self.mu_reg,
            self.eta0.map_or("auto".to_string(), |e| format!("{e:?}")),
            self.passes,
            seeds.join(","),
            self.checkpoint_every,
            self.split,
            self.graph_threshold,
        );
        if let Some(d) = self.dim {
            s.push_str(&format!("dim = {d}\n"));
        }
        s
    }
}

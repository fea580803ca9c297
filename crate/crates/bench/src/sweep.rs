use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sadmm::data_io::{read_trace_csv, write_trace_csv, RunConfig};
use sadmm::{run, Error, Method, Problem64, Result, RunTrace64, Sample64, UpdaterSpec};

use crate::dataset::load_problem;
use crate::tune::{tune_stepsize, TuneProtocol};

/// Relative objective gap used for the passes-to-gap column.
pub const GAP: f64 = 1e-3;

pub const SUMMARY_HEADER: &str = "method,seed,eta0,final_objective,final_test_loss,passes_to_1e-3_gap";

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub method: Method,
    pub seed: u64,
    pub eta0: Option<f64>,
    pub trace: std::result::Result<RunTrace64, String>,
}

impl RunRecord {
    pub fn file_name(&self) -> String {
        trace_file(self.method, self.seed)
    }
}

fn trace_file(method: Method, seed: u64) -> String {
    format!("{}_seed{seed}.csv", method.name())
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    /// Sorted by `(method, seed)` in the order the methods were requested.
    pub runs: Vec<RunRecord>,
    /// Lowest checkpointed objective across every successful run.
    pub best: f64,
}

impl SweepResult {
    fn new(runs: Vec<RunRecord>) -> Self {
        let best = runs
            .iter()
            .filter_map(|r| r.trace.as_ref().ok())
            .map(|t| t.best_objective())
            .fold(f64::INFINITY, f64::min);
        SweepResult { runs, best }
    }

    pub fn failures(&self) -> Vec<(Method, u64, &str)> {
        self.runs
            .iter()
            .filter_map(|r| r.trace.as_ref().err().map(|e| (r.method, r.seed, e.as_str())))
            .collect()
    }

    pub fn methods(&self) -> Vec<Method> {
        let mut out: Vec<Method> = Vec::new();
        for r in &self.runs {
            if !out.contains(&r.method) {
                out.push(r.method);
            }
        }
        out
    }

    /// Passes to reach `GAP` relative to the sweep-wide best, `inf` if never.
    pub fn passes_to_gap(&self, r: &RunRecord) -> f64 {
        match &r.trace {
            Ok(t) => t.passes_to_gap(self.best, GAP).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn median_passes_to_gap(&self, method: Method) -> f64 {
        let v: Vec<f64> = self
            .runs
            .iter()
            .filter(|r| r.method == method)
            .map(|r| self.passes_to_gap(r))
            .collect();
        median(&v)
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from(SUMMARY_HEADER);
        s.push('\n');
        let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:?}"));
        for r in &self.runs {
            let last = r.trace.as_ref().ok().and_then(|t| t.last().copied());
            s.push_str(&format!(
                "{},{},{},{:?},{:?},{:?}\n",
                r.method,
                r.seed,
                opt(r.eta0),
                last.map_or(f64::NAN, |c| c.objective),
                last.map_or(f64::NAN, |c| c.test_loss),
                self.passes_to_gap(r)
            ));
        }
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
        for r in &self.runs {
            if let Ok(t) = &r.trace {
                write_trace_csv(t, dir.join(r.file_name()))?;
            }
        }
        let path = dir.join("summary.csv");
        fs::write(&path, self.summary_csv()).map_err(|e| Error::Io { path, source: e })
    }
}

/// Middle value, averaging the two central ones for even counts. `inf`
/// entries sort last.
pub fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len() / 2;
    if s.len() % 2 == 1 {
        s[k]
    } else {
        0.5 * (s[k - 1] + s[k])
    }
}

/// Iterations and checkpoint cadence for a pass budget; both count in
/// effective passes so every method lands on the same grid.
fn schedule(method: Method, n: usize, passes: usize, every: usize) -> (usize, usize) {
    let per_pass = n / method.evals_per_iter(n);
    (passes * per_pass, every * per_pass)
}

fn one_run(
    p: &Problem64,
    test: &[Sample64],
    cfg: &RunConfig,
    method: Method,
    eta0: Option<f64>,
    seed: u64,
) -> std::result::Result<RunTrace64, String> {
    let mut spec = UpdaterSpec::for_problem(method, p).map_err(|e| e.to_string())?;
    if let Some(eta) = eta0 {
        spec = spec.with_eta0(eta);
    }
    let (iters, every) = schedule(method, p.n(), cfg.passes, cfg.checkpoint_every);
    let test = (!test.is_empty()).then_some(test);
    run(p, spec, iters, seed, every, test)
        .map(|o| o.trace)
        .map_err(|e| e.to_string())
}

/// Tunes every method (unless `eta0` is fixed for all of them), then runs every `(method, seed)` pair on
/// the rayon pool.
pub fn run_sweep_in(
    p: &Problem64,
    test: &[Sample64],
    cfg: &RunConfig,
    methods: &[Method],
    proto: &TuneProtocol,
) -> SweepResult {
    let etas: Vec<std::result::Result<Option<f64>, String>> = methods
        .par_iter()
        .map(|&m| match cfg.eta0 {
            Some(e) => Ok(Some(e)),
            None => tune_stepsize(p, m, proto, cfg.seeds[0])
                .map(Some)
                .map_err(|e| e.to_string()),
        })
        .collect();
    let jobs: Vec<(usize, u64)> = (0..methods.len())
        .flat_map(|i| cfg.seeds.iter().map(move |&s| (i, s)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let method = methods[i];
            let (eta0, trace) = match &etas[i] {
                Ok(eta0) => (*eta0, one_run(p, test, cfg, method, *eta0, seed)),
                Err(e) => (None, Err(format!("tuning failed: {e}"))),
            };
            if let Err(e) = &trace {
                log::warn!("{method} seed {seed}: {e}");
            }
            RunRecord {
                method,
                seed,
                eta0,
                trace,
            }
        })
        .collect();
    SweepResult::new(runs)
}

/// Loads the configured dataset, sweeps `cfg.methods × cfg.seeds` and writes
/// the trace and summary CSVs under `out`.
pub fn run_sweep(cfg: &RunConfig, out: &Path, proto: &TuneProtocol) -> Result<SweepResult> {
    let loaded = load_problem(cfg)?;
    let res = run_sweep_in(&loaded.problem, &loaded.test, cfg, &cfg.methods, proto);
    res.write(out)?;
    Ok(res)
}

/// Rebuilds a sweep from a directory written by [`SweepResult::write`].
pub fn load_sweep(dir: &Path) -> Result<SweepResult> {
    let path: PathBuf = dir.join("summary.csv");
    let text = fs::read_to_string(&path).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })?;
    let origin = path.display().to_string();
    let mut runs = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let perr = |msg: String| Error::Parse {
            path: origin.clone(),
            line: lineno + 1,
            msg,
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(perr(format!("expected 6 fields, got {}", f.len())));
        }
        let method: Method = f[0].parse()?;
        let seed: u64 = f[1].parse().map_err(|_| perr(format!("bad seed `{}`", f[1])))?;
        let eta0 = match f[2] {
            "" => None,
            v => Some(v.parse().map_err(|_| perr(format!("bad eta0 `{v}`")))?),
        };
        let file = dir.join(trace_file(method, seed));
        let trace = if file.exists() {
            Ok(read_trace_csv(&file)?)
        } else {
            Err("run failed".to_string())
        };
        runs.push(RunRecord {
            method,
            seed,
            eta0,
            trace,
        });
    }
    Ok(SweepResult::new(runs))
}

use sadmm::data_io::subsample;
use sadmm::{run, Error, Method, Problem64, Result, UpdaterSpec};

/// How stepsize constants are picked for the stochastic baselines.
#[derive(Clone, Debug, PartialEq)]
pub struct TuneProtocol {
    pub subset: usize,
    pub trials: usize,
    /// Half-decade steps from `1e-3` to `1e4`.
    pub grid: Vec<f64>,
    /// Iterations for batch probes.
    pub batch_probe: usize,
    /// Effective passes over the subset per trial.
    pub passes: usize,
}

impl Default for TuneProtocol {
    fn default() -> Self {
        TuneProtocol {
            subset: 500,
            trials: 5,
            grid: (0..15).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect(),
            batch_probe: 100,
            passes: 5,
        }
    }
}

impl TuneProtocol {
    pub fn with_grid(mut self, grid: Vec<f64>) -> Self {
        self.grid = grid;
        self
    }
}

/// Picks the grid value with the lowest mean final training objective over
/// `trials` runs on a seeded subset. For the constant-step rules the grid
/// value scales the step `1/L`.
pub fn tune_stepsize(p: &Problem64, method: Method, proto: &TuneProtocol, seed: u64) -> Result<f64> {
    if proto.grid.is_empty() || proto.trials == 0 {
        return Err(Error::InvalidInput("tuning needs a nonempty grid and at least one trial".into()));
    }
    let sub = p.with_samples(subsample(p.samples(), proto.subset.min(p.n()), seed))?;
    let iterations = if method.is_batch() {
        proto.batch_probe
    } else {
        proto.passes.max(1) * sub.n()
    };
    // batch rules are deterministic, one trial says everything
    let trials = if method.is_batch() { 1 } else { proto.trials };
    let mut best: Option<(f64, f64)> = None;
    for &eta in &proto.grid {
        let spec = UpdaterSpec::for_problem(method, &sub)?.with_eta0(eta);
        let mut total = 0.0;
        for trial in 0..trials {
            let trial_seed = seed.wrapping_mul(1_000_003).wrapping_add(trial as u64);
            total += match run(&sub, spec, iterations, trial_seed, 0, None) {
                Ok(out) => out.trace.last().map_or(f64::NAN, |c| c.objective),
                Err(Error::Numerical(_)) => f64::INFINITY,
                Err(e) => return Err(e),
            };
        }
        let mean = total / trials as f64;
        log::debug!("{method} eta0={eta:e}: mean objective {mean}");
        if mean.is_finite() && best.is_none_or(|(_, b)| mean < b) {
            best = Some((eta, mean));
        }
    }
    match best {
        Some((eta, _)) => Ok(eta),
        None => Err(Error::Numerical(format!(
            "every stepsize diverged for {method}; grid was {:?}",
            proto.grid
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sadmm::problem::Loss;
    use sadmm::synth::SyntheticSpec;

    fn problem() -> Problem64 {
        SyntheticSpec::fused_lasso(300, 10, 1).build().unwrap()
    }

    #[test]
    fn default_grid() {
        let g = TuneProtocol::default().grid;
        assert_eq!(g.len(), 15);
        assert!((g[0] - 1e-3).abs() < 1e-18 && (g[14] - 1e4).abs() < 1e-9);
        assert!((g[1] - 10f64.powf(-2.5)).abs() < 1e-15);
    }

    #[test]
    fn single_candidate() {
        let proto = TuneProtocol::default().with_grid(vec![0.05]);
        for m in Method::COMPARED {
            assert_eq!(tune_stepsize(&problem(), m, &proto, 0).unwrap(), 0.05, "{m}");
        }
    }

    #[test]
    fn avoids_divergent_candidate() {
        let proto = TuneProtocol::default().with_grid(vec![1e-3, 1e3]);
        for m in [Method::Stoc, Method::Opg, Method::Rda] {
            assert_eq!(tune_stepsize(&problem(), m, &proto, 2).unwrap(), 1e-3, "{m}");
        }
    }

    #[test]
    fn all_divergent_is_error() {
        let p: Problem64 = SyntheticSpec::fused_lasso(300, 10, 1).with_loss(Loss::Square).build().unwrap();
        let proto = TuneProtocol::default().with_grid(vec![1e6, 1e8]);
        let err = tune_stepsize(&p, Method::Opg, &proto, 0).unwrap_err();
        assert!(err.to_string().contains("grid"), "{err}");
    }

    #[test]
    fn deterministic() {
        let proto = TuneProtocol::default();
        let a = tune_stepsize(&problem(), Method::Stoc, &proto, 4).unwrap();
        let b = tune_stepsize(&problem(), Method::Stoc, &proto, 4).unwrap();
        assert_eq!(a, b);
    }
}

use sadmm::data_io::{parse_libsvm, split_train_test, DatasetSource, RunConfig};
use sadmm::synth::SyntheticSpec;
use sadmm::{correlation_graph, penalty_matrix, LossKind, Problem64, Result, Sample64};

/// Training problem and held-out samples described by a config.
#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub problem: Problem64,
    pub test: Vec<Sample64>,
    pub edges: usize,
}

/// Synthetic sources use the fused-lasso generator and its chain-plus-random
/// graph. LIBSVM sources are split with the first seed, and their graph is
/// built from feature correlations on the training half.
pub fn load_problem(cfg: &RunConfig) -> Result<LoadedProblem> {
    cfg.validate()?;
    let split_seed = cfg.seeds[0];
    let loss = LossKind::logistic().with_ridge(cfg.mu_reg);
    match &cfg.dataset {
        DatasetSource::Synthetic { n, d, seed } => {
            let spec = SyntheticSpec::fused_lasso(*n, *d, *seed)
                .with_rho(cfg.rho)
                .with_lambda(cfg.lambda)
                .with_ridge(cfg.mu_reg);
            let all = spec.build::<f64>()?;
            let (train, test) = split_train_test(all.samples().to_vec(), cfg.split, split_seed)?;
            let problem = all.with_samples(train)?;
            let edges = problem.m();
            Ok(LoadedProblem { problem, test, edges })
        }
        DatasetSource::Libsvm(path) => {
            let (samples, d) = parse_libsvm::<f64>(path)?;
            let d = d.max(cfg.dim.unwrap_or(0));
            let (train, test) = split_train_test(samples, cfg.split, split_seed)?;
            let graph = correlation_graph(&train, d, cfg.graph_threshold)?;
            log::info!("{}: {} train / {} test, d={d}, {} edges", path.display(), train.len(), test.len(), graph.edges().len());
            let a = penalty_matrix(&graph)?;
            let problem = Problem64::generalized_lasso(train, d, loss, a, cfg.rho, cfg.lambda)?;
            let edges = problem.m();
            Ok(LoadedProblem { problem, test, edges })
        }
    }
}

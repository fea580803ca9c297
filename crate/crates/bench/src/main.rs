use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use sadmm::data_io::{parse_libsvm, write_trace_csv, DatasetSource, RunConfig};
use sadmm::{correlation_graph, UpdaterSpec};
use sadmm_bench::{emit_svg, load_problem, load_sweep, run_sweep, tune_stepsize, TuneProtocol};

#[derive(Parser)]
#[command(name = "sadmm", version, about = "Stochastic average ADMM experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pick eta0 for each configured method on a training subset
    Tune(Common),
    /// Run the first configured method with the first seed
    Run {
        #[command(flatten)]
        common: Common,
        /// Trace CSV to write
        #[arg(long, default_value = "trace.csv")]
        out: PathBuf,
    },
    /// Run every method and seed; writes trace CSVs, summary.csv and plot.svg
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
    },
    /// Build a correlation edge list from a LIBSVM file
    Graph {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "graph.txt")]
        out: PathBuf,
    },
    /// Redraw plot.svg from a sweep directory
    Plot {
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// key = value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<String>,
    /// Comma-separated method list
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    mu_reg: Option<String>,
    #[arg(long)]
    eta0: Option<String>,
    #[arg(long)]
    passes: Option<String>,
    /// `a..b` or a comma list
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    checkpoint_every: Option<String>,
    #[arg(long)]
    split: Option<String>,
    #[arg(long)]
    graph_threshold: Option<String>,
    #[arg(long)]
    dim: Option<String>,
    /// Comma-separated eta0 candidates for tuning
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    /// Record wall-clock milliseconds in traces (makes output nondeterministic)
    #[arg(long)]
    wall_clock: bool,
}

impl Common {
    fn config(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let flags = [
            ("dataset", &self.dataset),
            ("method", &self.method),
            ("rho", &self.rho),
            ("lambda", &self.lambda),
            ("mu_reg", &self.mu_reg),
            ("eta0", &self.eta0),
            ("passes", &self.passes),
            ("seeds", &self.seeds),
            ("checkpoint_every", &self.checkpoint_every),
            ("split", &self.split),
            ("graph_threshold", &self.graph_threshold),
            ("dim", &self.dim),
        ];
        for (key, val) in flags {
            if let Some(v) = val {
                cfg.set(key, v).with_context(|| format!("--{}", key.replace('_', "-")))?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn protocol(&self) -> TuneProtocol {
        match &self.grid {
            Some(g) => TuneProtocol::default().with_grid(g.clone()),
            None => TuneProtocol::default(),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.cmd {
        Cmd::Tune(common) => {
            let cfg = common.config()?;
            let proto = common.protocol();
            let loaded = load_problem(&cfg)?;
            for &m in &cfg.methods {
                let eta = tune_stepsize(&loaded.problem, m, &proto, cfg.seeds[0])?;
                println!("{m} eta0={eta:?}");
            }
        }
        Cmd::Run { common, out } => {
            let cfg = common.config()?;
            let loaded = load_problem(&cfg)?;
            let p = &loaded.problem;
            let method = cfg.methods[0];
            let eta = match cfg.eta0 {
                Some(e) => e,
                None => tune_stepsize(p, method, &common.protocol(), cfg.seeds[0])?,
            };
            let spec = UpdaterSpec::for_problem(method, p)?.with_eta0(eta);
            let per_pass = p.n() / method.evals_per_iter(p.n());
            let opts = sadmm::RunOptions::new(cfg.passes * per_pass, cfg.seeds[0])
                .checkpoint_every(cfg.checkpoint_every * per_pass)
                .wall_clock(common.wall_clock);
            let test = (!loaded.test.is_empty()).then_some(loaded.test.as_slice());
            let res = sadmm::run_with(p, spec, &opts, test)?;
            write_trace_csv(&res.trace, &out)?;
            if let Some(c) = res.trace.last() {
                println!("{method}: objective {:.10} after {} passes -> {}", c.objective, c.passes, out.display());
            }
        }
        Cmd::Sweep { common, out } => {
            let cfg = common.config()?;
            let res = run_sweep(&cfg, &out, &common.protocol())?;
            std::fs::write(out.join("config.txt"), cfg.to_config_string())
                .with_context(|| format!("writing {}", out.display()))?;
            emit_svg(&res, &out.join("plot.svg"))?;
            for m in res.methods() {
                println!("{m}: median passes to 1e-3 gap {}", res.median_passes_to_gap(m));
            }
            let failures = res.failures();
            for (m, seed, e) in &failures {
                eprintln!("failed: {m} seed {seed}: {e}");
            }
            if !failures.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Graph { common, out } => {
            let cfg = common.config()?;
            let DatasetSource::Libsvm(path) = &cfg.dataset else {
                bail!("graph needs a LIBSVM dataset");
            };
            let (samples, d) = parse_libsvm::<f64>(path)?;
            let d = d.max(cfg.dim.unwrap_or(0));
            let g = correlation_graph(&samples, d, cfg.graph_threshold)?;
            g.write_edge_list(&out)?;
            println!("{} nodes, {} edges -> {}", g.nodes(), g.edges().len(), out.display());
        }
        Cmd::Plot { dir, out } => {
            let res = load_sweep(&dir)?;
            let out = out.unwrap_or_else(|| dir.join("plot.svg"));
            emit_svg(&res, &out)?;
            println!("{}", out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

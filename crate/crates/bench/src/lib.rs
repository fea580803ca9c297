//! Benchmark harness: stepsize tuning, multi-method sweeps over seeds,
//! trace/summary CSVs and SVG convergence plots.

pub mod dataset;
pub mod svg;
pub mod sweep;
pub mod tune;

pub use dataset::{load_problem, LoadedProblem};
pub use svg::{emit_svg, render_svg, PlotSeries};
pub use sweep::{load_sweep, median, run_sweep, run_sweep_in, RunRecord, SweepResult, GAP};
pub use tune::{tune_stepsize, TuneProtocol};

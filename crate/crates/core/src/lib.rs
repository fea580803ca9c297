//! Stochastic average ADMM (SA-ADMM, SA-IU-ADMM) together with the stochastic
//! and batch ADMM baselines it is usually compared against, specialised to
//! regularized risk minimization with a generalized-lasso splitting
//! `min (1/n) Σ ℓ_i(x) + Ω(x) + λ‖y‖₁  s.t.  Ax + By = c`.
//!
//! Every numeric type is generic over a [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases at the crate root pin the double precision variants that the
//! data loaders and benchmark harness use.

pub mod data_io;
pub mod engine;
pub mod error;
pub mod graph;
pub mod numkit;
pub mod problem;
pub mod scalar;
pub mod synth;
pub mod updaters;

pub use engine::{
    dual_update, run, run_with, solve_reference, theorem_bound_report, y_update, AdmmState,
    BoundReport, Checkpoint, Reference, RunOptions, RunOutput, RunTrace,
};
pub use error::{Error, Result};
pub use graph::{correlation_graph, penalty_matrix, FeatureGraph};
pub use numkit::{
    build_spd_solver, power_iter_bound, spmv, sym_eig, CachedSpdSolver, DenseMat, DenseVec,
    SparseMat, SpectralCache,
};
pub use problem::{prox_l1, LossKind, Omega, Problem, Psi, Sample, SmoothnessInfo};
pub use scalar::Scalar;
pub use updaters::{GradientMemory, Method, RdaState, UpdaterSpec};

pub type DenseVec64 = DenseVec<f64>;
pub type SparseMat64 = SparseMat<f64>;
pub type Problem64 = Problem<f64>;
pub type Sample64 = Sample<f64>;
pub type RunTrace64 = RunTrace<f64>;
pub type UpdaterSpec64 = UpdaterSpec<f64>;

pub type DenseVec32 = DenseVec<f32>;
pub type SparseMat32 = SparseMat<f32>;
pub type Problem32 = Problem<f32>;

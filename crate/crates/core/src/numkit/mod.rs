//! Linear algebra kernels: compressed-row sparse products, a cached dense
//! Cholesky solver for `ρAᵀA + LI`, a Jacobi symmetric eigensolver and a
//! power-iteration bound on `λ_max(ρAᵀA)`.
//!
//! Reductions always run in ascending index order so repeated runs are
//! bitwise reproducible.

mod cholesky;
mod dense;
mod eigen;
mod power;
mod sparse;
mod vector;

pub use cholesky::{build_spd_solver, CachedSpdSolver, DENSE_LIMIT};
pub use dense::DenseMat;
pub use eigen::{sym_eig, SpectralCache};
pub use power::{power_iter_bound, POWER_ITERS, POWER_SLACK};
pub use sparse::{spmv, SparseMat};
pub use vector::DenseVec;

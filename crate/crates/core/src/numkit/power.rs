use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numkit::{DenseVec, SparseMat};
use crate::scalar::Scalar;

/// Iteration count used when estimating `L_A` for a problem.
pub const POWER_ITERS: usize = 100;
/// Multiplicative safety margin applied to the Rayleigh estimate.
pub const POWER_SLACK: f64 = 1.01;

const START_SEED: u64 = 0x5AD_3A11;

/// `slack · vᵀ(ρAᵀA)v` after `iters` power iterations from a fixed
/// pseudo-random unit start vector.
///
/// Returns exactly zero when `ρAᵀA` annihilates the start vector (the zero
/// matrix in particular); callers must not use that value as `L_A`.
pub fn power_iter_bound<F: Scalar>(a: &SparseMat<F>, rho: F, iters: usize, slack: F) -> Result<F> {
    if iters == 0 {
        return Err(Error::InvalidInput("power iteration needs iters >= 1".into()));
    }
    if !(rho > F::zero()) {
        return Err(Error::InvalidInput(format!("rho must be positive, got {rho}")));
    }
    if !(slack >= F::one()) {
        return Err(Error::InvalidInput(format!("slack must be >= 1, got {slack}")));
    }
    let d = a.cols();
    if d == 0 || a.rows() == 0 {
        return Ok(F::zero());
    }
    // a non-constant start: graph penalty matrices annihilate the all-ones vector
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: DenseVec<F> = (0..d).map(|_| F::lit(rng.random_range(0.5..1.5))).collect();
    let n0 = v.norm();
    v.scale(F::one() / n0);

    let mut rayleigh = F::zero();
    for _ in 0..iters {
        let av = a.mul_vec_unchecked(&v);
        rayleigh = rho * av.norm_sq();
        let mut w = a.tr_mul_vec_unchecked(&av);
        let wn = w.norm();
        if wn == F::zero() {
            return Ok(F::zero());
        }
        w.scale(F::one() / wn);
        v = w;
    }
    let av = a.mul_vec_unchecked(&v);
    rayleigh = rayleigh.max(rho * av.norm_sq());
    Ok(slack * rayleigh)
}

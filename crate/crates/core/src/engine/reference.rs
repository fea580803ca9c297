use crate::error::{Error, Result};
use crate::numkit::{DenseVec, DENSE_LIMIT};
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::updaters::{Method, UpdaterSpec, XUpdater};

use super::{dual_update, y_update};

/// High-precision solution used as `(x*, y*)` and `Φ*`.
#[derive(Clone, Debug)]
pub struct Reference<F> {
    pub x: DenseVec<F>,
    /// `y(x*)`, so the pair is exactly feasible.
    pub y: DenseVec<F>,
    pub alpha: DenseVec<F>,
    pub objective: F,
    pub iterations: usize,
    pub converged: bool,
}

/// Runs batch ADMM (batch-IU above the dense limit) until successive
/// iterates and the constraint residual both fall below `tol`, or
/// `max_iter` is reached. Returns the last iterate.
pub fn solve_reference<F: Scalar>(p: &Problem<F>, max_iter: usize, tol: F) -> Result<Reference<F>> {
    let method = if p.d() <= DENSE_LIMIT {
        Method::Batch
    } else {
        Method::BatchIu
    };
    let spec = UpdaterSpec::for_problem(method, p)?;
    let (d, m) = (p.d(), p.m());
    let mut x = DenseVec::zeros(d);
    let mut y = DenseVec::zeros(m);
    let mut alpha = DenseVec::zeros(m);
    let mut up = XUpdater::new(p, spec, &x)?;
    let mut converged = false;
    let mut iterations = 0;
    for t in 0..max_iter {
        let x_next = up.step(p, 0, t, &x, &y, &alpha)?;
        let y_next = y_update(p, &x_next, &alpha)?;
        let a_next = dual_update(p, &alpha, &x_next, &y_next)?;
        let step = x_next.max_abs_diff(&x).max(y_next.max_abs_diff(&y));
        let feas = p.feasibility(&x_next, &y_next)?;
        x = x_next;
        y = y_next;
        alpha = a_next;
        iterations = t + 1;
        if !x.is_finite() {
            return Err(Error::Numerical("reference solve diverged".into()));
        }
        if step <= tol && feas <= tol {
            converged = true;
            break;
        }
    }
    let y_star = p.y_of_x(&x)?;
    let objective = p.primal_objective(&x)?;
    Ok(Reference {
        x,
        y: y_star,
        alpha,
        objective,
        iterations,
        converged,
    })
}

use crate::error::{Error, Result};
use crate::numkit::{DenseMat, DenseVec, SparseMat};
use crate::scalar::Scalar;

/// Largest `d` for which `ρAᵀA + LI` is formed and factorized densely.
pub const DENSE_LIMIT: usize = 5000;

/// Cholesky factorization of `M = ρAᵀA + LI`, computed once and reused for
/// every SA-ADMM / batch-ADMM x-step.
#[derive(Clone, Debug)]
pub struct CachedSpdSolver<F> {
    matrix: DenseMat<F>,
    factor: DenseMat<F>,
    shift: F,
}

impl<F: Scalar> CachedSpdSolver<F> {
    /// Factorizes an arbitrary symmetric positive definite matrix.
    pub fn factorize(matrix: DenseMat<F>) -> Result<Self> {
        let n = matrix.rows();
        if matrix.cols() != n {
            return Err(Error::dim("cholesky (square)", n, matrix.cols()));
        }
        let mut l = DenseMat::zeros(n, n);
        for j in 0..n {
            let mut diag = matrix[(j, j)];
            for k in 0..j {
                diag -= l[(j, k)] * l[(j, k)];
            }
            if !(diag > F::zero()) || !diag.is_finite() {
                return Err(Error::Factorization {
                    pivot: j,
                    value: diag.as_f64(),
                });
            }
            let ljj = diag.sqrt();
            l[(j, j)] = ljj;
            for i in (j + 1)..n {
                let mut s = matrix[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(CachedSpdSolver {
            matrix,
            factor: l,
            shift: F::zero(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &DenseMat<F> {
        &self.matrix
    }

    /// Lower-triangular factor `L` with `M = L Lᵀ`.
    pub fn factor(&self) -> &DenseMat<F> {
        &self.factor
    }

    /// The `L` in `ρAᵀA + LI` when built through [`build_spd_solver`].
    pub fn shift(&self) -> F {
        self.shift
    }

    pub fn solve(&self, b: &[F]) -> Result<DenseVec<F>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::dim("cholesky solve", n, b.len()));
        }
        let l = &self.factor;
        let mut z = DenseVec::from_slice(b);
        for i in 0..n {
            let mut s = z[i];
            for k in 0..i {
                s -= l[(i, k)] * z[k];
            }
            z[i] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in (i + 1)..n {
                s -= l[(k, i)] * z[k];
            }
            z[i] = s / l[(i, i)];
        }
        Ok(z)
    }

    /// `‖M x − b‖`
    pub fn residual(&self, x: &[F], b: &[F]) -> Result<F> {
        let mx = self.matrix.mul_vec(x)?;
        Ok(mx.sub(b).norm())
    }
}

/// Factorizes `ρAᵀA + LI` for the d×d system behind the SA-ADMM x-step.
pub fn build_spd_solver<F: Scalar>(a: &SparseMat<F>, rho: F, l: F) -> Result<CachedSpdSolver<F>> {
    if !(rho > F::zero()) || !(l > F::zero()) {
        return Err(Error::InvalidInput(format!(
            "rho and L must be positive (rho={rho}, L={l})"
        )));
    }
    let d = a.cols();
    if d > DENSE_LIMIT {
        return Err(Error::TooLarge {
            dim: d,
            limit: DENSE_LIMIT,
        });
    }
    let mut m = a.gram(rho);
    m.add_diag(l);
    let mut solver = CachedSpdSolver::factorize(m)?;
    solver.shift = l;
    Ok(solver)
}

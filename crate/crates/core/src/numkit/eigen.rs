use crate::error::{Error, Result};
use crate::numkit::{DenseMat, DenseVec};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `M = Q Λ Qᵀ` of a symmetric matrix, used to apply
/// `(s I + M)⁻¹` for a shift `s` that changes every iteration.
#[derive(Clone, Debug)]
pub struct SpectralCache<F> {
    eigvals: Vec<F>,
    eigvecs: DenseMat<F>,
    source: DenseMat<F>,
}

impl<F: Scalar> SpectralCache<F> {
    /// Eigenvalues in ascending order.
    pub fn eigvals(&self) -> &[F] {
        &self.eigvals
    }

    /// Orthonormal eigenvectors stored as columns.
    pub fn eigvecs(&self) -> &DenseMat<F> {
        &self.eigvecs
    }

    pub fn source(&self) -> &DenseMat<F> {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.eigvals.len()
    }

    pub fn lambda_max(&self) -> F {
        self.eigvals.last().copied().unwrap_or_else(F::zero)
    }

    pub fn lambda_min(&self) -> F {
        self.eigvals.first().copied().unwrap_or_else(F::zero)
    }

    /// `(shift·I + M)⁻¹ b`
    pub fn shifted_solve(&self, shift: F, b: &[F]) -> Result<DenseVec<F>> {
        if b.len() != self.dim() {
            return Err(Error::dim("spectral shifted solve", self.dim(), b.len()));
        }
        let mut coef = self.eigvecs.tr_mul_vec(b)?;
        for (c, &lam) in coef.iter_mut().zip(&self.eigvals) {
            let denom = shift + lam;
            if !(denom > F::zero()) {
                return Err(Error::Numerical(format!(
                    "shifted system singular (shift {shift}, eigenvalue {lam})"
                )));
            }
            *c /= denom;
        }
        self.eigvecs.mul_vec(&coef)
    }

    /// `Q Λ Qᵀ`
    pub fn reconstruct(&self) -> DenseMat<F> {
        let n = self.dim();
        let mut out = DenseMat::zeros(n, n);
        for k in 0..n {
            let lam = self.eigvals[k];
            for i in 0..n {
                let qik = self.eigvecs[(i, k)] * lam;
                if qik == F::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += qik * self.eigvecs[(j, k)];
                }
            }
        }
        out
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eig<F: Scalar>(m: &DenseMat<F>) -> Result<SpectralCache<F>> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::dim("sym_eig (square)", n, m.cols()));
    }
    let scale = m.frobenius();
    if !scale.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let sym_tol = F::lit(1e-12) * scale.max(F::one());
    if m.max_asymmetry() > sym_tol {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric (max asymmetry {})",
            m.max_asymmetry()
        )));
    }

    let mut a = m.clone();
    let mut v = DenseMat::identity(n);
    let target = F::epsilon() * scale;
    for _ in 0..MAX_SWEEPS {
        let mut off = F::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == F::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (F::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + F::one()).sqrt());
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = F::zero();
                a[(q, p)] = F::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let eigvals: Vec<F> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigvecs = DenseMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            eigvecs[(k, dst)] = v[(k, src)];
        }
    }
    Ok(SpectralCache {
        eigvals,
        eigvecs,
        source: m.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::SparseMat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, seed: u64) -> DenseMat<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = DenseMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-1.0..1.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    #[test]
    fn diagonal_input() {
        let e = sym_eig(&DenseMat::from_diag(&[1.0f64, 4.0])).unwrap();
        assert_eq!(e.eigvals(), &[1.0, 4.0]);
        assert_eq!(e.eigvecs()[(0, 0)].abs(), 1.0);
        assert_eq!(e.eigvecs()[(1, 1)].abs(), 1.0);
    }

    #[test]
    fn two_by_two_characteristic_polynomial() {
        // det([[2-l,1],[1,2-l]]) = (2-l)^2 - 1 -> l in {1, 3}
        let m = DenseMat::from_row_major(2, 2, vec![2.0f64, 1.0, 1.0, 2.0]).unwrap();
        let e = sym_eig(&m).unwrap();
        assert!((e.eigvals()[0] - 1.0).abs() < 1e-14);
        assert!((e.eigvals()[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let m = random_symmetric(20, 5);
        let e = sym_eig(&m).unwrap();
        let err = e.reconstruct().sub(&m).frobenius();
        assert!(err <= 1e-8, "reconstruction error {err}");
        let qtq = e.eigvecs().transpose().matmul(e.eigvecs()).unwrap();
        assert!(qtq.sub(&DenseMat::identity(20)).frobenius() < 1e-10);
        assert!(e.eigvals().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn gram_spectrum_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let trip: Vec<_> = (0..60)
            .map(|_| (rng.random_range(0..15), rng.random_range(0..12), rng.random_range(-1.0..1.0)))
            .collect();
        let a = SparseMat::from_triplets(15, 12, &trip).unwrap();
        let g = a.gram(0.01);
        let e = sym_eig(&g).unwrap();
        assert!(e.lambda_min() >= -1e-10);
        let err = e.reconstruct().sub(&g).frobenius();
        assert!(err <= 1e-8 * g.frobenius());
    }

    #[test]
    fn shifted_solve_matches_cholesky() {
        let m = random_symmetric(12, 8);
        let gram = m.matmul(&m.transpose()).unwrap();
        let e = sym_eig(&gram).unwrap();
        let mut shifted = gram.clone();
        shifted.add_diag(0.5);
        let chol = crate::numkit::CachedSpdSolver::factorize(shifted).unwrap();
        let b: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
        let x1 = e.shifted_solve(0.5, &b).unwrap();
        let x2 = chol.solve(&b).unwrap();
        assert!(x1.max_abs_diff(&x2) < 1e-10);
    }

    #[test]
    fn rejects_non_symmetric() {
        let m = DenseMat::from_row_major(2, 2, vec![1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(sym_eig(&m), Err(Error::InvalidInput(_))));
    }
}

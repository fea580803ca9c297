use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::numkit::DenseVec;
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> DenseMat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("DenseMat::from_row_major", rows * cols, data.len()));
        }
        Ok(DenseMat { rows, cols, data })
    }

    pub fn from_diag(diag: &[F]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<DenseVec<F>> {
        if v.len() != self.cols {
            return Err(Error::dim("dense matvec", self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|r| super::vector::dot(self.row(r), v))
            .collect())
    }

    /// `Mᵀ v`
    pub fn tr_mul_vec(&self, v: &[F]) -> Result<DenseVec<F>> {
        if v.len() != self.rows {
            return Err(Error::dim("dense transpose matvec", self.rows, v.len()));
        }
        let mut out = DenseVec::zeros(self.cols);
        for (r, &vr) in v.iter().enumerate() {
            out.axpy(vr, self.row(r));
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &DenseMat<F>) -> Result<DenseMat<F>> {
        if self.cols != other.rows {
            return Err(Error::dim("dense matmul", self.cols, other.rows));
        }
        let mut out = DenseMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == F::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> DenseMat<F> {
        let mut t = DenseMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn add_diag(&mut self, s: F) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += s;
        }
    }

    pub fn sub(&self, other: &DenseMat<F>) -> DenseMat<F> {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn frobenius(&self) -> F {
        self.data.iter().fold(F::zero(), |acc, &v| acc + v * v).sqrt()
    }

    pub fn max_asymmetry(&self) -> F {
        let mut worst = F::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Quadratic form `vᵀ M v`.
    pub fn quad_form(&self, v: &[F]) -> Result<F> {
        let mv = self.mul_vec(v)?;
        Ok(mv.dot(v))
    }
}

impl<F> Index<(usize, usize)> for DenseMat<F> {
    type Output = F;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for DenseMat<F> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

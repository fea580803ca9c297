use crate::error::{Error, Result};
use crate::numkit::{DenseMat, DenseVec};
use crate::scalar::Scalar;

/// Compressed-row sparse matrix with strictly ascending column indices
/// inside every row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<F> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<F>,
}

impl<F: Scalar> SparseMat<F> {
    /// Builds from `(row, col, value)` triplets in any order. Duplicate
    /// coordinates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, F)]) -> Result<Self> {
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidInput(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite entry at ({r}, {c})")));
            }
        }
        let mut sorted: Vec<(usize, usize, F)> = triplets.to_vec();
        // stable: duplicates are summed in input order
        sorted.sort_by_key(|&(r, c, _)| (r, c));

        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<F> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Ok(SparseMat {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            indptr: vec![0; rows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn scaled_identity(n: usize, s: F) -> Self {
        SparseMat {
            rows: n,
            cols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![s; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, F::one())
    }

    pub fn neg_identity(n: usize) -> Self {
        Self::scaled_identity(n, -F::one())
    }

    /// Row-major dense input; exact zeros are dropped.
    pub fn from_dense(rows: usize, cols: usize, data: &[F]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("SparseMat::from_dense", rows * cols, data.len()));
        }
        let triplets: Vec<_> = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                let v = data[r * cols + c];
                (v != F::zero()).then_some((r, c, v))
            })
            .collect();
        Self::from_triplets(rows, cols, &triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, F)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> Vec<(usize, usize, F)> {
        (0..self.rows)
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .collect()
    }

    /// `A v`
    pub fn mul_vec(&self, v: &[F]) -> Result<DenseVec<F>> {
        if v.len() != self.cols {
            return Err(Error::dim("spmv", self.cols, v.len()));
        }
        Ok(self.mul_vec_unchecked(v))
    }

    pub(crate) fn mul_vec_unchecked(&self, v: &[F]) -> DenseVec<F> {
        (0..self.rows)
            .map(|r| self.row(r).fold(F::zero(), |acc, (c, a)| acc + a * v[c]))
            .collect()
    }

    /// `Aᵀ v`
    pub fn tr_mul_vec(&self, v: &[F]) -> Result<DenseVec<F>> {
        if v.len() != self.rows {
            return Err(Error::dim("spmv transpose", self.rows, v.len()));
        }
        Ok(self.tr_mul_vec_unchecked(v))
    }

    pub(crate) fn tr_mul_vec_unchecked(&self, v: &[F]) -> DenseVec<F> {
        let mut out = DenseVec::zeros(self.cols);
        for (r, &vr) in v.iter().enumerate() {
            if vr == F::zero() {
                continue;
            }
            for (c, a) in self.row(r) {
                out[c] += a * vr;
            }
        }
        out
    }

    /// Dense `scale · AᵀA`.
    pub fn gram(&self, scale: F) -> DenseMat<F> {
        let mut g = DenseMat::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let span = self.indptr[r]..self.indptr[r + 1];
            let idx = &self.indices[span.clone()];
            let val = &self.values[span];
            for (a, (&i, &vi)) in idx.iter().zip(val).enumerate() {
                for (&j, &vj) in idx[a..].iter().zip(&val[a..]) {
                    let inc = scale * vi * vj;
                    g[(i, j)] += inc;
                    if i != j {
                        g[(j, i)] += inc;
                    }
                }
            }
        }
        g
    }

    pub fn to_dense(&self) -> DenseMat<F> {
        let mut m = DenseMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }

    /// True when the matrix equals `s·I` structurally and numerically.
    pub fn is_scaled_identity(&self, s: F) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                let mut it = self.row(r).filter(|&(_, v)| v != F::zero());
                matches!(it.next(), Some((c, v)) if c == r && v == s) && it.next().is_none()
            })
    }

    pub fn cast<G: Scalar>(&self) -> SparseMat<G> {
        SparseMat {
            rows: self.rows,
            cols: self.cols,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values: self.values.iter().map(|v| G::lit(v.as_f64())).collect(),
        }
    }
}

/// Sparse matrix-vector product `M v`.
pub fn spmv<F: Scalar>(m: &SparseMat<F>, v: &[F]) -> Result<DenseVec<F>> {
    m.mul_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_product() {
        let m = SparseMat::<f64>::identity(2);
        assert_eq!(spmv(&m, &[3.0, -1.0]).unwrap().as_slice(), &[3.0, -1.0]);
    }

    #[test]
    fn hand_product() {
        let m = SparseMat::from_dense(2, 2, &[1.0, 2.0, 0.0, 3.0]).unwrap();
        assert_eq!(spmv(&m, &[1.0, 1.0]).unwrap().as_slice(), &[3.0, 3.0]);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let m = SparseMat::<f64>::identity(3);
        assert!(matches!(spmv(&m, &[1.0]), Err(Error::Dimension { .. })));
        assert!(m.tr_mul_vec(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn duplicates_summed_and_sorted() {
        let m = SparseMat::from_triplets(2, 3, &[(0, 2, 1.0), (0, 0, 2.0), (0, 2, 0.5), (1, 1, -1.0)])
            .unwrap();
        assert_eq!(m.nnz(), 3);
        let row0: Vec<_> = m.row(0).collect();
        assert_eq!(row0, vec![(0, 2.0), (2, 1.5)]);
        assert!(SparseMat::from_triplets(2, 2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn matches_dense_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (rows, cols) = (50, 20);
        let mut dense = vec![0.0f64; rows * cols];
        for v in dense.iter_mut() {
            if rng.random::<f64>() < 0.2 {
                *v = rng.random_range(-2.0..2.0);
            }
        }
        let m = SparseMat::from_dense(rows, cols, &dense).unwrap();
        let x: Vec<f64> = (0..cols).map(|_| rng.random_range(-1.0..1.0)).collect();
        let got = spmv(&m, &x).unwrap();
        for r in 0..rows {
            let want: f64 = (0..cols).map(|c| dense[r * cols + c] * x[c]).sum();
            assert!((got[r] - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
        let y: Vec<f64> = (0..rows).map(|_| rng.random_range(-1.0..1.0)).collect();
        let got_t = m.tr_mul_vec(&y).unwrap();
        for c in 0..cols {
            let want: f64 = (0..rows).map(|r| dense[r * cols + c] * y[r]).sum();
            assert!((got_t[c] - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
        let g = m.gram(0.5);
        for i in 0..cols {
            for j in 0..cols {
                let want: f64 = 0.5 * (0..rows).map(|r| dense[r * cols + i] * dense[r * cols + j]).sum::<f64>();
                assert!((g[(i, j)] - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn identity_detection() {
        assert!(SparseMat::<f64>::neg_identity(3).is_scaled_identity(-1.0));
        assert!(!SparseMat::<f64>::identity(3).is_scaled_identity(-1.0));
        let off = SparseMat::from_triplets(2, 2, &[(0, 0, -1.0), (1, 1, -1.0), (0, 1, 0.1)]).unwrap();
        assert!(!off.is_scaled_identity(-1.0));
    }
}

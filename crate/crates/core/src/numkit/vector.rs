use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Owned dense vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DenseVec<F>(Vec<F>);

impl<F: Scalar> DenseVec<F> {
    pub fn new(values: Vec<F>) -> Self {
        DenseVec(values)
    }

    pub fn zeros(len: usize) -> Self {
        DenseVec(vec![F::zero(); len])
    }

    pub fn from_slice(values: &[F]) -> Self {
        DenseVec(values.to_vec())
    }

    pub fn filled(len: usize, value: F) -> Self {
        DenseVec(vec![value; len])
    }

    pub fn into_inner(self) -> Vec<F> {
        self.0
    }

    pub fn as_slice(&self) -> &[F] {
        &self.0
    }

    pub fn dot(&self, other: &[F]) -> F {
        dot(&self.0, other)
    }

    pub fn norm(&self) -> F {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq(&self) -> F {
        dot(&self.0, &self.0)
    }

    pub fn norm_l1(&self) -> F {
        self.0.iter().fold(F::zero(), |acc, v| acc + v.abs())
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: F, x: &[F]) {
        debug_assert_eq!(self.0.len(), x.len());
        for (s, &xi) in self.0.iter_mut().zip(x) {
            *s += a * xi;
        }
    }

    pub fn scale(&mut self, a: F) {
        for s in self.0.iter_mut() {
            *s *= a;
        }
    }

    pub fn scaled(&self, a: F) -> Self {
        DenseVec(self.0.iter().map(|&v| v * a).collect())
    }

    pub fn add(&self, other: &[F]) -> Self {
        debug_assert_eq!(self.0.len(), other.len());
        DenseVec(self.0.iter().zip(other).map(|(&a, &b)| a + b).collect())
    }

    pub fn sub(&self, other: &[F]) -> Self {
        debug_assert_eq!(self.0.len(), other.len());
        DenseVec(self.0.iter().zip(other).map(|(&a, &b)| a - b).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max_abs_diff(&self, other: &[F]) -> F {
        self.0
            .iter()
            .zip(other)
            .fold(F::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub(crate) fn check_len(&self, context: &'static str, expected: usize) -> Result<()> {
        if self.0.len() != expected {
            return Err(Error::dim(context, expected, self.0.len()));
        }
        Ok(())
    }

    pub fn cast<G: Scalar>(&self) -> DenseVec<G> {
        DenseVec(self.0.iter().map(|v| G::lit(v.as_f64())).collect())
    }
}

pub(crate) fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

impl<F> Deref for DenseVec<F> {
    type Target = [F];

    fn deref(&self) -> &[F] {
        &self.0
    }
}

impl<F> DerefMut for DenseVec<F> {
    fn deref_mut(&mut self) -> &mut [F] {
        &mut self.0
    }
}

impl<F> From<Vec<F>> for DenseVec<F> {
    fn from(v: Vec<F>) -> Self {
        DenseVec(v)
    }
}

impl<F> FromIterator<F> for DenseVec<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        DenseVec(iter.into_iter().collect())
    }
}

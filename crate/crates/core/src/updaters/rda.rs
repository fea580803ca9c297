use crate::numkit::DenseVec;
use crate::scalar::Scalar;

/// Running sums behind RDA-ADMM's history averages `ḡ_t`, `x̄_t`, `ȳ_t`,
/// `ᾱ_t`.
#[derive(Clone, Debug)]
pub struct RdaState<F> {
    g_sum: DenseVec<F>,
    x_sum: DenseVec<F>,
    y_sum: DenseVec<F>,
    alpha_sum: DenseVec<F>,
    count: usize,
}

impl<F: Scalar> RdaState<F> {
    pub fn new(d: usize, m: usize) -> Self {
        RdaState {
            g_sum: DenseVec::zeros(d),
            x_sum: DenseVec::zeros(d),
            y_sum: DenseVec::zeros(m),
            alpha_sum: DenseVec::zeros(m),
            count: 0,
        }
    }

    pub fn push(&mut self, g: &[F], x: &[F], y: &[F], alpha: &[F]) {
        self.g_sum.axpy(F::one(), g);
        self.x_sum.axpy(F::one(), x);
        self.y_sum.axpy(F::one(), y);
        self.alpha_sum.axpy(F::one(), alpha);
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    fn mean(&self, sum: &DenseVec<F>) -> DenseVec<F> {
        if self.count == 0 {
            return DenseVec::zeros(sum.len());
        }
        sum.scaled(F::one() / F::from_usize_lossy(self.count))
    }

    pub fn g_avg(&self) -> DenseVec<F> {
        self.mean(&self.g_sum)
    }

    pub fn x_avg(&self) -> DenseVec<F> {
        self.mean(&self.x_sum)
    }

    pub fn y_avg(&self) -> DenseVec<F> {
        self.mean(&self.y_sum)
    }

    pub fn alpha_avg(&self) -> DenseVec<F> {
        self.mean(&self.alpha_sum)
    }
}

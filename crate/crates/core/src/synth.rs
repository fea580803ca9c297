//! Seeded synthetic graph-guided fused lasso instances: Gaussian features, a
//! piecewise-constant ground truth along a chain, and a chain-plus-random
//! feature graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::graph::{penalty_matrix, FeatureGraph};
use crate::problem::{Loss, LossKind, Problem, Sample};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub loss: Loss,
    pub mu_reg: f64,
    pub rho: f64,
    pub lambda: f64,
    /// Random edges added on top of the chain.
    pub extra_edges: usize,
    /// Label flip probability (logistic) or noise std-dev (square).
    pub label_noise: f64,
    /// Share of each feature's variance coming from a factor common to its
    /// block, in `[0, 1)`.
    pub block_correlation: f64,
    /// Rescales every feature vector to unit Euclidean norm.
    pub unit_rows: bool,
}

impl SyntheticSpec {
    /// Benchmark configuration: logistic loss, `ρ = 0.01`, `λ = 1e-5`.
    pub fn fused_lasso(n: usize, d: usize, seed: u64) -> Self {
        SyntheticSpec {
            n,
            d,
            seed,
            loss: Loss::Logistic,
            mu_reg: 0.0,
            rho: 0.01,
            lambda: 1e-5,
            extra_edges: d / 5,
            label_noise: 0.1,
            block_correlation: 0.0,
            unit_rows: false,
        }
    }

    /// Small instance with a stronger penalty (`ρ = 1`, `λ = 0.1`), handy
    /// for unit tests where the constraint should matter.
    pub fn small(n: usize, d: usize, seed: u64) -> Self {
        SyntheticSpec {
            rho: 1.0,
            lambda: 0.1,
            ..Self::fused_lasso(n, d, seed)
        }
    }

    pub fn with_loss(mut self, loss: Loss) -> Self {
        self.loss = loss;
        self
    }

    pub fn with_block_correlation(mut self, c: f64) -> Self {
        self.block_correlation = c;
        self
    }

    pub fn with_unit_rows(mut self, on: bool) -> Self {
        self.unit_rows = on;
        self
    }

    pub fn with_ridge(mut self, mu_reg: f64) -> Self {
        self.mu_reg = mu_reg;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn graph(&self) -> FeatureGraph {
        FeatureGraph::chain(self.d).with_random_edges(self.extra_edges, self.seed ^ 0x9e37_79b9)
    }

    /// Piecewise-constant weights over five contiguous blocks.
    pub fn ground_truth(&self) -> Vec<f64> {
        const LEVELS: [f64; 5] = [2.0, 0.0, -1.5, 0.0, 1.0];
        (0..self.d).map(|j| LEVELS[self.block_of(j)]).collect()
    }

    fn block_of(&self, j: usize) -> usize {
        let block = self.d.div_ceil(5).max(1);
        (j / block).min(4)
    }

    fn draw<F: Scalar>(&self, count: usize, rng: &mut ChaCha8Rng) -> Vec<Sample<F>> {
        let w = self.ground_truth();
        let scale = 1.0 / (self.d as f64).sqrt();
        let (shared, own) = (self.block_correlation.sqrt(), (1.0 - self.block_correlation).sqrt());
        let normal = |rng: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(rng) };
        (0..count)
            .map(|_| {
                let factors: Vec<f64> = (0..5).map(|_| normal(rng)).collect();
                let mut row: Vec<f64> = (0..self.d)
                    .map(|j| scale * (shared * factors[self.block_of(j)] + own * normal(rng)))
                    .collect();
                if self.unit_rows {
                    let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm > 0.0 {
                        row.iter_mut().for_each(|v| *v /= norm);
                    }
                }
                let margin: f64 = row.iter().zip(&w).map(|(a, b)| a * b).sum();
                let label = match self.loss {
                    Loss::Logistic => {
                        let clean = if margin >= 0.0 { 1.0 } else { -1.0 };
                        if rng.random::<f64>() < self.label_noise {
                            -clean
                        } else {
                            clean
                        }
                    }
                    Loss::Square => {
                        margin + self.label_noise * normal(rng)
                    }
                };
                let row: Vec<F> = row.into_iter().map(F::lit).collect();
                Sample::dense(&row, F::lit(label))
            })
            .collect()
    }

    pub fn build<F: Scalar>(&self) -> Result<Problem<F>> {
        Ok(self.build_with_test(0)?.0)
    }

    /// Training problem plus `n_test` held-out samples from the same model.
    pub fn build_with_test<F: Scalar>(&self, n_test: usize) -> Result<(Problem<F>, Vec<Sample<F>>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let train = self.draw(self.n, &mut rng);
        let test = self.draw(n_test, &mut rng);
        let a = penalty_matrix(&self.graph())?;
        let loss = LossKind {
            loss: self.loss,
            mu_reg: F::lit(self.mu_reg),
        };
        let p = Problem::generalized_lasso(train, self.d, loss, a, F::lit(self.rho), F::lit(self.lambda))?;
        Ok((p, test))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_well_formed() {
        let spec = SyntheticSpec::fused_lasso(50, 10, 3);
        let (p1, t1) = spec.build_with_test::<f64>(20).unwrap();
        let (p2, t2) = spec.build_with_test::<f64>(20).unwrap();
        assert_eq!(p1.samples(), p2.samples());
        assert_eq!(t1, t2);
        assert_eq!(p1.n(), 50);
        assert_eq!(p1.m(), 9 + 2);
        assert!(p1.is_standard_splitting());
        assert!(p1.samples().iter().all(|s| s.label().abs() == 1.0));
    }

    #[test]
    fn f32_build() {
        let p = SyntheticSpec::small(10, 4, 1).build::<f32>().unwrap();
        assert_eq!(p.d(), 4);
    }
}

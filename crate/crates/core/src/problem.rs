//! Regularized risk problems `min (1/n) Σ ℓ_i(x) + Ω(x) + ψ(y)` subject to
//! `Ax + By = c`, with linear-model losses `ℓ_i(x) = f(a_iᵀx; y_i) + (μ/2)‖x‖²`.

use crate::error::{Error, Result};
use crate::numkit::{power_iter_bound, DenseVec, SparseMat, POWER_ITERS, POWER_SLACK};
use crate::scalar::Scalar;

/// Floor applied to `L_A` when `ρAᵀA` vanishes.
pub const L_A_FLOOR: f64 = 1e-8;

/// One training example with sparse features.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<F> {
    indices: Vec<usize>,
    values: Vec<F>,
    label: F,
}

impl<F: Scalar> Sample<F> {
    /// `indices` must be strictly ascending.
    pub fn new(indices: Vec<usize>, values: Vec<F>, label: F) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::dim("sample values", indices.len(), values.len()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("sample feature indices not strictly ascending".into()));
        }
        if !label.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sample contains non-finite values".into()));
        }
        Ok(Sample {
            indices,
            values,
            label,
        })
    }

    /// Dense row; exact zeros are dropped.
    pub fn dense(row: &[F], label: F) -> Self {
        let (indices, values) = row
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != F::zero())
            .map(|(j, &v)| (j, v))
            .unzip();
        Sample {
            indices,
            values,
            label,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn label(&self) -> F {
        self.label
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    /// One past the largest feature index.
    pub fn dim_bound(&self) -> usize {
        self.indices.last().map_or(0, |&j| j + 1)
    }

    #[inline]
    pub fn dot(&self, x: &[F]) -> F {
        self.indices
            .iter()
            .zip(&self.values)
            .fold(F::zero(), |acc, (&j, &v)| acc + v * x[j])
    }

    pub fn norm_sq(&self) -> F {
        self.values.iter().fold(F::zero(), |acc, &v| acc + v * v)
    }

    /// `out += s · a`
    #[inline]
    pub fn add_scaled_to(&self, s: F, out: &mut [F]) {
        for (&j, &v) in self.indices.iter().zip(&self.values) {
            out[j] += s * v;
        }
    }

    pub fn to_dense(&self, d: usize) -> DenseVec<F> {
        let mut out = DenseVec::zeros(d);
        self.add_scaled_to(F::one(), &mut out);
        out
    }

    pub fn cast<G: Scalar>(&self) -> Sample<G> {
        Sample {
            indices: self.indices.clone(),
            values: self.values.iter().map(|v| G::lit(v.as_f64())).collect(),
            label: G::lit(self.label.as_f64()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Loss {
    Logistic,
    Square,
}

/// Sample loss plus an optional ridge term `(μ/2)‖x‖²` folded into every ℓ_i.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossKind<F> {
    pub loss: Loss,
    pub mu_reg: F,
}

impl<F: Scalar> LossKind<F> {
    pub fn logistic() -> Self {
        LossKind {
            loss: Loss::Logistic,
            mu_reg: F::zero(),
        }
    }

    pub fn square() -> Self {
        LossKind {
            loss: Loss::Square,
            mu_reg: F::zero(),
        }
    }

    pub fn with_ridge(mut self, mu_reg: F) -> Self {
        self.mu_reg = mu_reg;
        self
    }

    /// Value of `f(margin; label)` and its derivative `s`, so that the
    /// gradient of the data term is `s · a_i`.
    #[inline]
    pub fn value_slope(&self, margin: F, label: F) -> (F, F) {
        match self.loss {
            Loss::Logistic => {
                let z = label * margin;
                let value = if z > F::zero() {
                    (-z).exp().ln_1p()
                } else {
                    -z + z.exp().ln_1p()
                };
                // sigmoid(-z)
                let sig = if z >= F::zero() {
                    let e = (-z).exp();
                    e / (F::one() + e)
                } else {
                    F::one() / (F::one() + z.exp())
                };
                (value, -label * sig)
            }
            Loss::Square => {
                let r = margin - label;
                (F::lit(0.5) * r * r, r)
            }
        }
    }

    /// Upper bound on `f''`.
    pub fn curvature_bound(&self) -> F {
        match self.loss {
            Loss::Logistic => F::lit(0.25),
            Loss::Square => F::one(),
        }
    }
}

/// Simple regularizer handled inside the x-step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Omega<F> {
    None,
    L1(F),
}

/// Splitting function on `y`. Only `λ‖y‖₁` ships.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Psi<F> {
    L1(F),
}

impl<F: Scalar> Psi<F> {
    pub fn lambda(&self) -> F {
        match *self {
            Psi::L1(l) => l,
        }
    }
}

/// Per-sample smoothness `L` and the eigenvalue bound `L_A ≥ λ_max(ρAᵀA)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothnessInfo<F> {
    pub l: F,
    pub l_a: F,
}

#[derive(Clone, Debug)]
pub struct Problem<F> {
    samples: Vec<Sample<F>>,
    d: usize,
    loss: LossKind<F>,
    a: SparseMat<F>,
    b: SparseMat<F>,
    c: DenseVec<F>,
    rho: F,
    omega: Omega<F>,
    psi: Psi<F>,
}

impl<F: Scalar> Problem<F> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        samples: Vec<Sample<F>>,
        d: usize,
        loss: LossKind<F>,
        a: SparseMat<F>,
        b: SparseMat<F>,
        c: DenseVec<F>,
        rho: F,
        omega: Omega<F>,
        psi: Psi<F>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("problem needs at least one sample".into()));
        }
        if let Some(bad) = samples.iter().find(|s| s.dim_bound() > d) {
            return Err(Error::InvalidInput(format!(
                "sample feature index {} >= d={d}",
                bad.dim_bound() - 1
            )));
        }
        if a.cols() != d {
            return Err(Error::dim("A columns vs d", d, a.cols()));
        }
        if b.rows() != a.rows() {
            return Err(Error::dim("B rows vs A rows", a.rows(), b.rows()));
        }
        c.check_len("c vs A rows", a.rows())?;
        if !(rho > F::zero()) {
            return Err(Error::InvalidInput(format!("rho must be positive, got {rho}")));
        }
        if !(loss.mu_reg >= F::zero()) {
            return Err(Error::InvalidInput(format!("mu_reg must be >= 0, got {}", loss.mu_reg)));
        }
        if let Omega::L1(l) = omega {
            if !(l >= F::zero()) {
                return Err(Error::InvalidInput(format!("Ω weight must be >= 0, got {l}")));
            }
        }
        if !(psi.lambda() >= F::zero()) {
            return Err(Error::InvalidInput(format!("lambda must be >= 0, got {}", psi.lambda())));
        }
        Ok(Problem {
            samples,
            d,
            loss,
            a,
            b,
            c,
            rho,
            omega,
            psi,
        })
    }

    /// `min (1/n) Σ ℓ_i(x) + λ‖y‖₁  s.t.  Ax − y = 0`.
    pub fn generalized_lasso(
        samples: Vec<Sample<F>>,
        d: usize,
        loss: LossKind<F>,
        a: SparseMat<F>,
        rho: F,
        lambda: F,
    ) -> Result<Self> {
        let m = a.rows();
        Self::new(
            samples,
            d,
            loss,
            a,
            SparseMat::neg_identity(m),
            DenseVec::zeros(m),
            rho,
            Omega::None,
            Psi::L1(lambda),
        )
    }

    /// Same constraint and regularizers over a different sample set.
    pub fn with_samples(&self, samples: Vec<Sample<F>>) -> Result<Self> {
        Self::new(
            samples,
            self.d,
            self.loss,
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.rho,
            self.omega,
            self.psi,
        )
    }

    /// Same problem with a different penalty parameter; the minimizer does
    /// not depend on `ρ`.
    pub fn with_rho(mut self, rho: F) -> Result<Self> {
        if !(rho > F::zero()) {
            return Err(Error::InvalidInput(format!("rho must be positive, got {rho}")));
        }
        self.rho = rho;
        Ok(self)
    }

    pub fn with_omega(mut self, omega: Omega<F>) -> Self {
        self.omega = omega;
        self
    }

    pub fn samples(&self) -> &[Sample<F>] {
        &self.samples
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of constraint rows.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn loss(&self) -> LossKind<F> {
        self.loss
    }

    pub fn a(&self) -> &SparseMat<F> {
        &self.a
    }

    pub fn b(&self) -> &SparseMat<F> {
        &self.b
    }

    pub fn c(&self) -> &DenseVec<F> {
        &self.c
    }

    pub fn rho(&self) -> F {
        self.rho
    }

    pub fn omega(&self) -> Omega<F> {
        self.omega
    }

    pub fn psi(&self) -> Psi<F> {
        self.psi
    }

    pub fn lambda(&self) -> F {
        self.psi.lambda()
    }

    /// True for the `B = −I, c = 0` splitting used by the generalized lasso.
    pub fn is_standard_splitting(&self) -> bool {
        self.b.is_scaled_identity(-F::one()) && self.c.iter().all(|&v| v == F::zero())
    }

    /// Data-term value and slope `s_i` at `x`: `∇ℓ_i(x) = s_i a_i + μ x`.
    #[inline]
    pub(crate) fn value_slope(&self, i: usize, x: &[F]) -> (F, F) {
        let s = &self.samples[i];
        self.loss.value_slope(s.dot(x), s.label)
    }

    /// `ℓ_i(x)` and `∇ℓ_i(x)`.
    pub fn loss_value_grad(&self, i: usize, x: &[F]) -> Result<(F, DenseVec<F>)> {
        if i >= self.n() {
            return Err(Error::InvalidInput(format!("sample index {i} >= n={}", self.n())));
        }
        if x.len() != self.d {
            return Err(Error::dim("loss_value_grad x", self.d, x.len()));
        }
        let (v, s) = self.value_slope(i, x);
        let mu = self.loss.mu_reg;
        let mut g = DenseVec::from_slice(x);
        g.scale(mu);
        self.samples[i].add_scaled_to(s, &mut g);
        let ridge = F::lit(0.5) * mu * DenseVec::from_slice(x).norm_sq();
        Ok((v + ridge, g))
    }

    /// Mean of the pure data loss (no ridge term) over `samples`; used as the
    /// held-out test loss.
    pub fn data_loss(&self, samples: &[Sample<F>], x: &[F]) -> F {
        if samples.is_empty() {
            return F::nan();
        }
        let total = samples
            .iter()
            .fold(F::zero(), |acc, s| acc + self.loss.value_slope(s.dot(x), s.label).0);
        total / F::from_usize_lossy(samples.len())
    }

    /// `Φ(x, y) = (1/n) Σ ℓ_i(x) + Ω(x) + ψ(y)`.
    pub fn full_objective(&self, x: &[F], y: &[F]) -> Result<F> {
        if x.len() != self.d {
            return Err(Error::dim("full_objective x", self.d, x.len()));
        }
        if y.len() != self.b.cols() {
            return Err(Error::dim("full_objective y", self.b.cols(), y.len()));
        }
        let mu = self.loss.mu_reg;
        let xs = DenseVec::from_slice(x);
        let mut total = self.data_loss(&self.samples, x);
        if mu > F::zero() {
            total += F::lit(0.5) * mu * xs.norm_sq();
        }
        if let Omega::L1(w) = self.omega {
            total += w * xs.norm_l1();
        }
        total += self.lambda() * DenseVec::from_slice(y).norm_l1();
        Ok(total)
    }

    /// `y(x) = B⁻¹(c − Ax)` for `B = s·I`.
    pub fn y_of_x(&self, x: &[F]) -> Result<DenseVec<F>> {
        let m = self.m();
        let diag: Vec<F> = (0..m)
            .map(|r| {
                let mut row = self.b.row(r);
                match (row.next(), row.next()) {
                    (Some((c, v)), None) if c == r && v != F::zero() => Ok(v),
                    _ => Err(Error::Unsupported("y(x) requires a diagonal B".into())),
                }
            })
            .collect::<Result<_>>()?;
        let ax = self.a.mul_vec(x)?;
        Ok((0..m).map(|r| (self.c[r] - ax[r]) / diag[r]).collect())
    }

    /// `Φ(x, y(x))`: the objective with the constraint satisfied exactly,
    /// e.g. `(1/n)Σℓ_i(x) + λ‖Ax‖₁` for the generalized lasso.
    pub fn primal_objective(&self, x: &[F]) -> Result<F> {
        let y = self.y_of_x(x)?;
        self.full_objective(x, &y)
    }

    /// `Ax + By − c`
    pub fn constraint_residual(&self, x: &[F], y: &[F]) -> Result<DenseVec<F>> {
        let mut r = self.a.mul_vec(x)?;
        let by = self.b.mul_vec(y)?;
        for ((ri, &bi), &ci) in r.iter_mut().zip(by.iter()).zip(self.c.iter()) {
            *ri += bi - ci;
        }
        Ok(r)
    }

    /// `‖Ax + By − c‖`
    pub fn feasibility(&self, x: &[F], y: &[F]) -> Result<F> {
        Ok(self.constraint_residual(x, y)?.norm())
    }

    /// Global smoothness constant from the max-norm bound and `L_A` from
    /// power iteration on `ρAᵀA`.
    pub fn estimate_l(&self) -> Result<SmoothnessInfo<F>> {
        let max_norm = self
            .samples
            .iter()
            .map(|s| s.norm_sq())
            .fold(F::zero(), F::max);
        let l = max_norm * self.loss.curvature_bound() + self.loss.mu_reg;
        if !(l > F::zero()) {
            return Err(Error::Degenerate(
                "all features are zero and mu_reg = 0, so L = 0".into(),
            ));
        }
        let bound = power_iter_bound(&self.a, self.rho, POWER_ITERS, F::lit(POWER_SLACK))?;
        let l_a = bound.max(F::lit(L_A_FLOOR));
        Ok(SmoothnessInfo { l, l_a })
    }

    pub fn cast<G: Scalar>(&self) -> Problem<G> {
        Problem {
            samples: self.samples.iter().map(Sample::cast).collect(),
            d: self.d,
            loss: LossKind {
                loss: self.loss.loss,
                mu_reg: G::lit(self.loss.mu_reg.as_f64()),
            },
            a: self.a.cast(),
            b: self.b.cast(),
            c: self.c.cast(),
            rho: G::lit(self.rho.as_f64()),
            omega: match self.omega {
                Omega::None => Omega::None,
                Omega::L1(w) => Omega::L1(G::lit(w.as_f64())),
            },
            psi: Psi::L1(G::lit(self.lambda().as_f64())),
        }
    }
}

/// Soft thresholding, `argmin_z ½‖z − v‖² + κ‖z‖₁`.
pub fn prox_l1<F: Scalar>(v: &[F], kappa: F) -> DenseVec<F> {
    assert!(kappa >= F::zero(), "prox_l1 threshold must be nonnegative");
    v.iter()
        .map(|&vj| {
            let mag = vj.abs() - kappa;
            if mag > F::zero() {
                vj.signum() * mag
            } else {
                F::zero()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{penalty_matrix, FeatureGraph};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_problem(loss: LossKind<f64>, n: usize, d: usize, seed: u64) -> Problem<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..n)
            .map(|_| {
                let row: Vec<f64> = (0..d)
                    .map(|_| if rng.random::<f64>() < 0.6 { rng.random_range(-1.5..1.5) } else { 0.0 })
                    .collect();
                let label = if rng.random::<bool>() { 1.0 } else { -1.0 };
                Sample::dense(&row, label)
            })
            .collect();
        let a = penalty_matrix(&FeatureGraph::chain(d)).unwrap();
        Problem::generalized_lasso(samples, d, loss, a, 0.01, 0.1).unwrap()
    }

    #[test]
    fn logistic_at_origin() {
        let p = random_problem(LossKind::logistic(), 5, 4, 1);
        let x = vec![0.0; 4];
        for i in 0..5 {
            let (v, g) = p.loss_value_grad(i, &x).unwrap();
            assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
            let s = &p.samples()[i];
            let want = s.to_dense(4).scaled(-s.label() / 2.0);
            assert!(g.max_abs_diff(&want) < 1e-15);
        }
    }

    #[test]
    fn square_exact_fit() {
        let s = Sample::dense(&[1.0, 0.0], 2.0);
        let p = Problem::generalized_lasso(vec![s], 2, LossKind::square(), SparseMat::zeros(0, 2), 1.0, 0.0)
            .unwrap();
        let (v, g) = p.loss_value_grad(0, &[2.0, 5.0]).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(g.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn index_and_dimension_errors() {
        let p = random_problem(LossKind::logistic(), 3, 4, 2);
        assert!(p.loss_value_grad(3, &[0.0; 4]).is_err());
        assert!(p.loss_value_grad(0, &[0.0; 3]).is_err());
        assert!(p.full_objective(&[0.0; 4], &[0.0; 2]).is_err());
    }

    fn finite_difference_check(loss: LossKind<f64>) {
        let d = 6;
        let p = random_problem(loss, 8, d, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
            let i = rng.random_range(0..8);
            let (_, g) = p.loss_value_grad(i, &x).unwrap();
            let h = 1e-6;
            let fd: Vec<f64> = (0..d)
                .map(|j| {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[j] += h;
                    xm[j] -= h;
                    (p.loss_value_grad(i, &xp).unwrap().0 - p.loss_value_grad(i, &xm).unwrap().0) / (2.0 * h)
                })
                .collect();
            let err = g.sub(&fd).norm() / g.norm().max(1e-8);
            assert!(err <= 1e-5, "relative fd error {err}");
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        finite_difference_check(LossKind::logistic());
        finite_difference_check(LossKind::square());
        finite_difference_check(LossKind::logistic().with_ridge(0.3));
    }

    #[test]
    fn logistic_is_stable_for_large_margins() {
        let lk = LossKind::<f64>::logistic();
        let (v, s) = lk.value_slope(800.0, 1.0);
        assert!(v >= 0.0 && v < 1e-300 && s.abs() < 1e-300);
        let (v, s) = lk.value_slope(-800.0, 1.0);
        assert!((v - 800.0).abs() < 1e-9 && (s + 1.0).abs() < 1e-15);
    }

    #[test]
    fn objective_of_zero_data() {
        let samples = vec![Sample::dense(&[0.0, 0.0], 1.0), Sample::dense(&[0.0, 0.0], -1.0)];
        let a = SparseMat::from_dense(2, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let p = Problem::generalized_lasso(samples, 2, LossKind::logistic(), a, 1.0, 0.1).unwrap();
        let base = p.full_objective(&[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!((base - std::f64::consts::LN_2).abs() < 1e-15);
        let with_y = p.full_objective(&[0.0, 0.0], &[1.0, -2.0]).unwrap();
        assert!((with_y - base - 0.3).abs() < 1e-15);
    }

    #[test]
    fn objective_matches_naive_sum() {
        for seed in 0..10 {
            let p = random_problem(LossKind::logistic().with_ridge(0.05), 30, 7, seed);
            let p = p.with_omega(Omega::L1(0.02));
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 99);
            let x: Vec<f64> = (0..7).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..p.m()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut naive = 0.0;
            for s in p.samples() {
                let m: f64 = s.indices().iter().zip(s.values()).map(|(&j, &v)| v * x[j]).sum();
                naive += (1.0 + (-s.label() * m).exp()).ln() + 0.5 * 0.05 * x.iter().map(|v| v * v).sum::<f64>();
            }
            naive /= p.n() as f64;
            naive += 0.02 * x.iter().map(|v| v.abs()).sum::<f64>();
            naive += 0.1 * y.iter().map(|v| v.abs()).sum::<f64>();
            let got = p.full_objective(&x, &y).unwrap();
            assert!((got - naive).abs() <= 1e-12 * naive.abs().max(1.0), "{got} vs {naive}");
        }
    }

    #[test]
    fn objective_invariant_under_sample_permutation() {
        let p = random_problem(LossKind::logistic(), 25, 5, 8);
        let mut shuffled = p.samples().to_vec();
        shuffled.reverse();
        shuffled.rotate_left(7);
        let q = p.with_samples(shuffled).unwrap();
        let x = [0.3, -0.2, 0.5, 1.0, -1.0];
        let y = vec![0.1; p.m()];
        let (a, b) = (p.full_objective(&x, &y).unwrap(), q.full_objective(&x, &y).unwrap());
        assert!((a - b).abs() <= 1e-14);
    }

    #[test]
    fn smoothness_constants() {
        let one = |loss| {
            Problem::generalized_lasso(vec![Sample::dense(&[2.0, 0.0], 1.0)], 2, loss, SparseMat::zeros(0, 2), 1.0, 0.0)
                .unwrap()
        };
        assert_eq!(one(LossKind::logistic()).estimate_l().unwrap().l, 1.0);
        assert_eq!(one(LossKind::logistic().with_ridge(0.3)).estimate_l().unwrap().l, 1.3);
        let sq = Problem::generalized_lasso(
            vec![Sample::dense(&[1.0, 1.0], 0.0)],
            2,
            LossKind::square(),
            SparseMat::zeros(0, 2),
            1.0,
            0.0,
        )
        .unwrap();
        assert_eq!(sq.estimate_l().unwrap().l, 2.0);
        // no constraint rows: L_A falls back to the floor
        assert_eq!(sq.estimate_l().unwrap().l_a, L_A_FLOOR);
    }

    #[test]
    fn degenerate_smoothness() {
        let p = Problem::generalized_lasso(
            vec![Sample::dense(&[0.0, 0.0], 1.0)],
            2,
            LossKind::logistic(),
            SparseMat::zeros(0, 2),
            1.0,
            0.0,
        )
        .unwrap();
        assert!(matches!(p.estimate_l(), Err(Error::Degenerate(_))));
        let q = p.with_samples(vec![Sample::dense(&[0.0, 0.0], 1.0)]).unwrap();
        let q = Problem::new(
            q.samples().to_vec(),
            2,
            LossKind::logistic().with_ridge(0.2),
            SparseMat::zeros(0, 2),
            SparseMat::zeros(0, 0),
            DenseVec::zeros(0),
            1.0,
            Omega::None,
            Psi::L1(0.0),
        )
        .unwrap();
        assert_eq!(q.estimate_l().unwrap().l, 0.2);
    }

    #[test]
    fn smoothness_bound_holds_empirically() {
        for loss in [LossKind::logistic(), LossKind::square(), LossKind::logistic().with_ridge(0.1)] {
            let p = random_problem(loss, 12, 5, 21);
            let l = p.estimate_l().unwrap().l;
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..1000 {
                let x: Vec<f64> = (0..5).map(|_| rng.random_range(-3.0..3.0)).collect();
                let x2: Vec<f64> = (0..5).map(|_| rng.random_range(-3.0..3.0)).collect();
                let dx = DenseVec::from_slice(&x).sub(&x2).norm();
                for i in 0..p.n() {
                    let g1 = p.loss_value_grad(i, &x).unwrap().1;
                    let g2 = p.loss_value_grad(i, &x2).unwrap().1;
                    assert!(g1.sub(&g2).norm() <= l * dx * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn problem_validation() {
        let s = vec![Sample::dense(&[1.0, 0.0, 3.0], 1.0)];
        assert!(Problem::generalized_lasso(s.clone(), 2, LossKind::logistic(), SparseMat::zeros(0, 2), 1.0, 0.0).is_err());
        assert!(Problem::generalized_lasso(s.clone(), 3, LossKind::logistic(), SparseMat::zeros(0, 3), 0.0, 0.0).is_err());
        assert!(Problem::generalized_lasso(s.clone(), 3, LossKind::logistic(), SparseMat::zeros(0, 2), 1.0, 0.0).is_err());
        assert!(Problem::generalized_lasso(vec![], 3, LossKind::<f64>::logistic(), SparseMat::zeros(0, 3), 1.0, 0.0).is_err());
        assert!(Sample::new(vec![2, 1], vec![1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn prox_examples() {
        assert_eq!(prox_l1(&[0.5, -2.0, 0.0], 1.0).as_slice(), &[0.0, -1.0, 0.0]);
        assert_eq!(prox_l1(&[0.5, -2.0, 0.25], 0.0).as_slice(), &[0.5, -2.0, 0.25]);
    }

    #[test]
    fn prox_matches_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let v: f64 = rng.random_range(-4.0..4.0);
            let k: f64 = rng.random_range(0.0..2.0);
            let obj = |z: f64| 0.5 * (z - v) * (z - v) + k * z.abs();
            let mut best = (f64::INFINITY, 0.0);
            for step in 0..=100_000 {
                let z = -5.0 + step as f64 * 1e-4;
                let o = obj(z);
                if o < best.0 {
                    best = (o, z);
                }
            }
            let got = prox_l1(&[v], k)[0];
            assert!((got - best.1).abs() <= 1e-3, "v={v} k={k}: {got} vs {}", best.1);
        }
    }

    proptest! {
        #[test]
        fn prox_never_grows_magnitude(v in proptest::collection::vec(-1e3f64..1e3, 1..20), k in 0.0f64..10.0) {
            let z = prox_l1(&v, k);
            for (zi, vi) in z.iter().zip(&v) {
                prop_assert!(zi.abs() <= vi.abs());
                prop_assert!(zi * vi >= 0.0);
            }
            let out = prox_l1(&v, 0.0);
            prop_assert_eq!(out.as_slice(), v.as_slice());
        }
    }
}

use crate::numkit::DenseVec;
use crate::problem::Problem;
use crate::scalar::Scalar;

/// Per-sample snapshot store behind the incremental averages
/// `x̄_t = (1/n) Σ x_{τ_i(t)}` and `∇ℓ̄_t = (1/n) Σ ∇ℓ_i(x_{τ_i(t)})`.
///
/// Losses are linear models, so `∇ℓ_i(x) = s_i a_i + μx` and only the
/// scalar slope `s_i` is stored next to each snapshot.
///
/// Cold start: every snapshot is `x_0` and every stored gradient is zero
/// until the sample is first drawn. Both averages always divide by `n`.
#[derive(Clone, Debug)]
pub struct GradientMemory<F> {
    n: usize,
    d: usize,
    mu: F,
    snapshots: Vec<F>,
    slopes: Vec<F>,
    visited: Vec<bool>,
    snap_sum: DenseVec<F>,
    // Σ over visited samples of s_i a_i
    loss_grad_sum: DenseVec<F>,
    // Σ over visited samples of x_{τ_i}, carries the ridge part of the gradients
    visited_snap_sum: DenseVec<F>,
}

impl<F: Scalar> GradientMemory<F> {
    pub fn new(p: &Problem<F>, x0: &[F]) -> Self {
        let (n, d) = (p.n(), p.d());
        assert_eq!(x0.len(), d, "x0 length");
        let mut snap_sum = DenseVec::zeros(d);
        for _ in 0..n {
            snap_sum.axpy(F::one(), x0);
        }
        GradientMemory {
            n,
            d,
            mu: p.loss().mu_reg,
            snapshots: x0.repeat(n),
            slopes: vec![F::zero(); n],
            visited: vec![false; n],
            snap_sum,
            loss_grad_sum: DenseVec::zeros(d),
            visited_snap_sum: DenseVec::zeros(d),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sets `τ_k(t) = t`: stores `x` and `∇ℓ_k(x)` for sample `k`.
    pub fn refresh(&mut self, p: &Problem<F>, k: usize, x: &[F]) {
        let (_, slope) = p.value_slope(k, x);
        self.record(p, k, x, slope);
    }

    /// Overwrites sample `k`'s entry with snapshot `x` and gradient
    /// `slope · a_k + μx`.
    pub fn record(&mut self, p: &Problem<F>, k: usize, x: &[F], slope: F) {
        let d = self.d;
        let sample = &p.samples()[k];
        let old = &mut self.snapshots[k * d..(k + 1) * d];
        for j in 0..d {
            self.snap_sum[j] = self.snap_sum[j] - old[j] + x[j];
        }
        if self.visited[k] {
            sample.add_scaled_to(-self.slopes[k], &mut self.loss_grad_sum);
            for j in 0..d {
                self.visited_snap_sum[j] -= old[j];
            }
        }
        sample.add_scaled_to(slope, &mut self.loss_grad_sum);
        for j in 0..d {
            self.visited_snap_sum[j] += x[j];
        }
        old.copy_from_slice(x);
        self.slopes[k] = slope;
        self.visited[k] = true;
    }

    pub fn snapshot(&self, i: usize) -> &[F] {
        &self.snapshots[i * self.d..(i + 1) * self.d]
    }

    /// Stored `∇ℓ_i(x_{τ_i})`; zero for samples never drawn.
    pub fn stored_grad(&self, p: &Problem<F>, i: usize) -> DenseVec<F> {
        let mut g = DenseVec::zeros(self.d);
        if self.visited[i] {
            g.axpy(self.mu, self.snapshot(i));
            p.samples()[i].add_scaled_to(self.slopes[i], &mut g);
        }
        g
    }

    pub fn is_visited(&self, i: usize) -> bool {
        self.visited[i]
    }

    /// `x̄_t`
    pub fn snap_avg(&self) -> DenseVec<F> {
        let nf = F::from_usize_lossy(self.n);
        self.snap_sum.iter().map(|&v| v / nf).collect()
    }

    /// `∇ℓ̄_t`
    pub fn grad_avg(&self) -> DenseVec<F> {
        average_gradient(&self.loss_grad_sum, self.mu, &self.visited_snap_sum, self.n)
    }
}

/// `(Σ s_i a_i + μ Σ x_i) / n`, shared with the batch updaters so that
/// `n = 1` runs perform identical arithmetic.
pub(crate) fn average_gradient<F: Scalar>(loss_sum: &[F], mu: F, snap_sum: &[F], n: usize) -> DenseVec<F> {
    let nf = F::from_usize_lossy(n);
    loss_sum
        .iter()
        .zip(snap_sum)
        .map(|(&g, &x)| (g + mu * x) / nf)
        .collect()
}

//! The x-step of each ADMM variant. All take the current `(x_t, y_t, α_t)`
//! and return `x_{t+1}`.

use crate::error::{Error, Result};
use crate::numkit::{CachedSpdSolver, DenseVec, SpectralCache};
use crate::problem::{prox_l1, Omega, Problem, SmoothnessInfo};
use crate::scalar::Scalar;
use crate::updaters::memory::average_gradient;
use crate::updaters::{GradientMemory, RdaState};

/// `By − c + α`
fn shifted_dual<F: Scalar>(p: &Problem<F>, y: &[F], alpha: &[F]) -> Result<DenseVec<F>> {
    let mut v = p.b().mul_vec(y)?;
    for ((vi, &ci), &ai) in v.iter_mut().zip(p.c().iter()).zip(alpha) {
        *vi = *vi - ci + ai;
    }
    Ok(v)
}

/// `∇ₓr = ρAᵀ(Ax + By − c + α)`
pub fn coupling_grad<F: Scalar>(p: &Problem<F>, x: &[F], y: &[F], alpha: &[F]) -> Result<DenseVec<F>> {
    let mut v = p.a().mul_vec(x)?;
    let s = shifted_dual(p, y, alpha)?;
    for (vi, &si) in v.iter_mut().zip(s.iter()) {
        *vi += si;
    }
    let mut g = p.a().tr_mul_vec(&v)?;
    g.scale(p.rho());
    Ok(g)
}

/// `r(x, y, α) = (ρ/2)‖Ax + By − c + α‖²`
pub fn coupling_value<F: Scalar>(p: &Problem<F>, x: &[F], y: &[F], alpha: &[F]) -> Result<F> {
    let mut v = p.constraint_residual(x, y)?;
    v.axpy(F::one(), alpha);
    Ok(F::lit(0.5) * p.rho() * v.norm_sq())
}

/// `P_tʳ(x) = r(x_t) + ∇ₓr(x_t)ᵀ(x − x_t) + (L_A/2)‖x − x_t‖²`
pub fn coupling_majorizer<F: Scalar>(
    p: &Problem<F>,
    l_a: F,
    x_t: &[F],
    y: &[F],
    alpha: &[F],
    x: &[F],
) -> Result<F> {
    let r0 = coupling_value(p, x_t, y, alpha)?;
    let g = coupling_grad(p, x_t, y, alpha)?;
    let dx = DenseVec::from_slice(x).sub(x_t);
    Ok(r0 + g.dot(&dx) + F::lit(0.5) * l_a * dx.norm_sq())
}

/// `(ρAᵀA + LI)⁻¹ [L x̄ − ρAᵀ(By − c + α) − ∇ℓ̄]`
fn direct_step<F: Scalar>(
    p: &Problem<F>,
    x_bar: &[F],
    grad_bar: &[F],
    y: &[F],
    alpha: &[F],
    solver: &CachedSpdSolver<F>,
) -> Result<DenseVec<F>> {
    let l = solver.shift();
    let coupling = p.a().tr_mul_vec(&shifted_dual(p, y, alpha)?)?;
    let rho = p.rho();
    let rhs: DenseVec<F> = (0..p.d())
        .map(|j| l * x_bar[j] - rho * coupling[j] - grad_bar[j])
        .collect();
    solver.solve(&rhs)
}

/// `[L x̄ + L_A x − (∇ℓ̄ + ∇ₓr)] / (L_A + L)`
fn linearized_step<F: Scalar>(
    p: &Problem<F>,
    consts: &SmoothnessInfo<F>,
    x: &[F],
    x_bar: &[F],
    grad_bar: &[F],
    y: &[F],
    alpha: &[F],
) -> Result<DenseVec<F>> {
    let (l, l_a) = (consts.l, consts.l_a);
    let gr = coupling_grad(p, x, y, alpha)?;
    let denom = l_a + l;
    Ok((0..p.d())
        .map(|j| (l * x_bar[j] + l_a * x[j] - (grad_bar[j] + gr[j])) / denom)
        .collect())
}

fn check_state<F: Scalar>(p: &Problem<F>, x: &[F], y: &[F], alpha: &[F]) -> Result<()> {
    if x.len() != p.d() {
        return Err(Error::dim("x-update x", p.d(), x.len()));
    }
    if y.len() != p.b().cols() {
        return Err(Error::dim("x-update y", p.b().cols(), y.len()));
    }
    if alpha.len() != p.m() {
        return Err(Error::dim("x-update alpha", p.m(), alpha.len()));
    }
    Ok(())
}

fn check_sample<F: Scalar>(p: &Problem<F>, k: usize) -> Result<()> {
    if k >= p.n() {
        return Err(Error::InvalidInput(format!("sample index {k} >= n={}", p.n())));
    }
    Ok(())
}

/// SA-ADMM. Refreshes sample `k` in the memory at `x_t`, then solves the
/// averaged surrogate exactly with the cached factorization.
#[allow(clippy::too_many_arguments)]
pub fn sa_x_update<F: Scalar>(
    p: &Problem<F>,
    mem: &mut GradientMemory<F>,
    k: usize,
    x: &[F],
    y: &[F],
    alpha: &[F],
    solver: &CachedSpdSolver<F>,
) -> Result<DenseVec<F>> {
    check_state(p, x, y, alpha)?;
    check_sample(p, k)?;
    mem.refresh(p, k, x);
    direct_step(p, &mem.snap_avg(), &mem.grad_avg(), y, alpha, solver)
}

/// SA-IU-ADMM: the inexact Uzawa version, no matrix inverse.
#[allow(clippy::too_many_arguments)]
pub fn sa_iu_x_update<F: Scalar>(
    p: &Problem<F>,
    consts: &SmoothnessInfo<F>,
    mem: &mut GradientMemory<F>,
    k: usize,
    x: &[F],
    y: &[F],
    alpha: &[F],
) -> Result<DenseVec<F>> {
    check_state(p, x, y, alpha)?;
    check_sample(p, k)?;
    mem.refresh(p, k, x);
    linearized_step(p, consts, x, &mem.snap_avg(), &mem.grad_avg(), y, alpha)
}

/// SA-IU-ADMM followed by the proximal step of `Ω = λ_Ω‖·‖₁`. Falls back to
/// [`sa_iu_x_update`] when `Ω` is absent.
#[allow(clippy::too_many_arguments)]
pub fn sa_prox_x_update<F: Scalar>(
    p: &Problem<F>,
    consts: &SmoothnessInfo<F>,
    mem: &mut GradientMemory<F>,
    k: usize,
    x: &[F],
    y: &[F],
    alpha: &[F],
) -> Result<DenseVec<F>> {
    let v = sa_iu_x_update(p, consts, mem, k, x, y, alpha)?;
    match p.omega() {
        Omega::None => Ok(v),
        Omega::L1(w) => Ok(prox_l1(&v, w / (consts.l_a + consts.l))),
    }
}

/// `∇ℓ_k(x) = s a_k + μx`
fn sample_grad<F: Scalar>(p: &Problem<F>, k: usize, x: &[F]) -> DenseVec<F> {
    let (_, s) = p.value_slope(k, x);
    let mut g = DenseVec::from_slice(x);
    g.scale(p.loss().mu_reg);
    p.samples()[k].add_scaled_to(s, &mut g);
    g
}

fn decaying_step<F: Scalar>(eta0: F, t: usize) -> F {
    eta0 / F::from_usize_lossy(t + 1).sqrt()
}

/// STOC-ADMM with `η_{t+1} = η₀/√(t+1)`. The changing inverse
/// `(I/η + ρAᵀA)⁻¹` is applied through the eigendecomposition of `ρAᵀA`.
#[allow(clippy::too_many_arguments)]
pub fn stoc_x_update<F: Scalar>(
    p: &Problem<F>,
    k: usize,
    x: &[F],
    y: &[F],
    alpha: &[F],
    t: usize,
    eta0: F,
    spectral: &SpectralCache<F>,
) -> Result<DenseVec<F>> {
    check_state(p, x, y, alpha)?;
    check_sample(p, k)?;
    let eta = decaying_step(eta0, t);
    let inv_eta = F::one() / eta;
    let g = sample_grad(p, k, x);
    let coupling = p.a().tr_mul_vec(&shifted_dual(p, y, alpha)?)?;
    let rho = p.rho();
    let rhs: DenseVec<F> = (0..p.d())
        .map(|j| x[j] * inv_eta - g[j] - rho * coupling[j])
        .collect();
    spectral.shifted_solve(inv_eta, &rhs)
}

pub(crate) fn require_standard_splitting<F: Scalar>(p: &Problem<F>, who: &str) -> Result<()> {
    if p.is_standard_splitting() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{who} requires B = -I and c = 0")))
    }
}

/// OPG-ADMM: `x − η_{t+1}[ℓ'_k(x) + ρAᵀ(Ax − y + α)]`.
#[allow(clippy::too_many_arguments)]
pub fn opg_x_update<F: Scalar>(
    p: &Problem<F>,
    k: usize,
    x: &[F],
    y: &[F],
    alpha: &[F],
    t: usize,
    eta0: F,
) -> Result<DenseVec<F>> {
    require_standard_splitting(p, "OPG-ADMM")?;
    check_state(p, x, y, alpha)?;
    check_sample(p, k)?;
    let eta = decaying_step(eta0, t);
    let g = sample_grad(p, k, x);
    let gr = coupling_grad(p, x, y, alpha)?;
    Ok((0..p.d()).map(|j| x[j] - eta * (g[j] + gr[j])).collect())
}

/// RDA-ADMM. Pushes `(ℓ'_k(x_t), x_t, y_t, α_t)` into the history, then
/// returns `−η[ḡ + ρAᵀ(Ax̄ − ȳ + ᾱ)]` with `η = η₀√(t+1)` and all averages
/// over the `t+1` iterates `0..=t`.
///
/// With this normalization and `x_0 = 0`, the first step coincides with
/// OPG-ADMM's first step.
#[allow(clippy::too_many_arguments)]
pub fn rda_x_update<F: Scalar>(
    p: &Problem<F>,
    k: usize,
    x: &[F],
    y: &[F],
    alpha: &[F],
    rda: &mut RdaState<F>,
    t: usize,
    eta0: F,
) -> Result<DenseVec<F>> {
    require_standard_splitting(p, "RDA-ADMM")?;
    check_state(p, x, y, alpha)?;
    check_sample(p, k)?;
    let g = sample_grad(p, k, x);
    rda.push(&g, x, y, alpha);
    let eta = eta0 * F::from_usize_lossy(t + 1).sqrt();
    let g_bar = rda.g_avg();
    let gr = coupling_grad(p, &rda.x_avg(), &rda.y_avg(), &rda.alpha_avg())?;
    Ok((0..p.d()).map(|j| -eta * (g_bar[j] + gr[j])).collect())
}

/// `(1/n) Σ ∇ℓ_i(x)`, costing `n` gradient evaluations.
pub fn full_gradient<F: Scalar>(p: &Problem<F>, x: &[F]) -> DenseVec<F> {
    let mut loss_sum = DenseVec::zeros(p.d());
    for (i, sample) in p.samples().iter().enumerate() {
        let (_, s) = p.value_slope(i, x);
        sample.add_scaled_to(s, &mut loss_sum);
    }
    average_gradient(&loss_sum, p.loss().mu_reg, x, p.n())
}

/// Batch ADMM: the SA-ADMM step with every `τ_i(t) = t`.
pub fn batch_x_update<F: Scalar>(
    p: &Problem<F>,
    x: &[F],
    y: &[F],
    alpha: &[F],
    solver: &CachedSpdSolver<F>,
) -> Result<DenseVec<F>> {
    check_state(p, x, y, alpha)?;
    direct_step(p, x, &full_gradient(p, x), y, alpha, solver)
}

/// Batch inexact-Uzawa ADMM.
pub fn batch_iu_x_update<F: Scalar>(
    p: &Problem<F>,
    consts: &SmoothnessInfo<F>,
    x: &[F],
    y: &[F],
    alpha: &[F],
) -> Result<DenseVec<F>> {
    check_state(p, x, y, alpha)?;
    linearized_step(p, consts, x, x, &full_gradient(p, x), y, alpha)
}

//! Empirical check of the O(1/T) bounds for SA-ADMM (exact x-step) and
//! SA-IU-ADMM (inexact Uzawa x-step).
//!
//! With `H_x = L_A I − ρAᵀA`, `H_y = ρBᵀB`, `Δx = x* − x_0`, `Δy = y* − y_0`:
//!
//! * IU rule:    `E[Φ(x̄,ȳ) − Φ* + γ‖Ax̄+Bȳ−c‖] ≤ (1/2T){‖Δx‖²_{H_x} + nL‖Δx‖² + ‖Δy‖²_{H_y} + 2ρ(γ²/ρ² + ‖α_0‖²)}`
//! * exact rule: the same without the `H_x` term.
//! * With `y(x̄) = B⁻¹(c − Ax̄)` and `ψ` `L̃`-Lipschitz, `E[Φ(x̄, y(x̄)) − Φ*]`
//!   is bounded by the same expression with `2ρ(γ²/ρ² + ‖α_0‖²)` replaced by
//!   `ρ(L̃²L_B/ρ² + ‖α_0‖²)`, `L_B = λ_max((B⁻¹)ᵀB⁻¹)`.
//!
//! Expectations are replaced by the mean over a fixed list of seeds.

use crate::error::{Error, Result};
use crate::numkit::{sym_eig, DenseVec};
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::updaters::{Method, UpdaterSpec};

use super::{run_with, Reference, RunOptions};

/// Seed-averaged left-hand sides for one method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundLhs<F> {
    /// `Φ(x̄_T, ȳ_T) − Φ* + γ‖Ax̄_T + Bȳ_T − c‖`
    pub with_feasibility: F,
    /// `Φ(x̄_T, y(x̄_T)) − Φ*`
    pub primal: F,
}

#[allow(clippy::too_many_arguments)]
pub fn bound_lhs<F: Scalar>(
    p: &Problem<F>,
    spec: UpdaterSpec<F>,
    reference: &Reference<F>,
    start: (&DenseVec<F>, &DenseVec<F>, &DenseVec<F>),
    gamma: F,
    t: usize,
    seeds: &[u64],
) -> Result<BoundLhs<F>> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("bound check needs at least one seed".into()));
    }
    let mut with_feas = F::zero();
    let mut cor = F::zero();
    for &seed in seeds {
        let opts = RunOptions::new(t, seed).start(start.0.clone(), start.1.clone(), start.2.clone());
        let out = run_with(p, spec, &opts, None)?;
        let phi = p.full_objective(&out.x_avg, &out.y_avg)?;
        let feas = p.feasibility(&out.x_avg, &out.y_avg)?;
        with_feas += phi - reference.objective + gamma * feas;
        cor += p.primal_objective(&out.x_avg)? - reference.objective;
    }
    let k = F::from_usize_lossy(seeds.len());
    Ok(BoundLhs {
        with_feasibility: with_feas / k,
        primal: cor / k,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<F> {
    pub t: usize,
    pub seeds: usize,
    pub n: usize,
    pub gamma: F,
    pub rho: F,
    pub l: F,
    pub l_a: F,
    /// Lipschitz constant of `ψ = λ‖·‖₁` in the Euclidean norm, `λ√m`.
    pub l_tilde: F,
    pub l_b: F,
    /// `‖x* − x_0‖²_{H_x}`
    pub hx_dist: F,
    /// `‖x* − x_0‖²`
    pub x_dist: F,
    /// `‖y* − y_0‖²_{H_y}`
    pub hy_dist: F,
    /// `‖α_0‖²`
    pub alpha0_sq: F,
    pub rhs_gamma_iu: F,
    pub rhs_gamma_exact: F,
    pub rhs_primal_iu: F,
    pub rhs_primal_exact: F,
    /// SA-IU-ADMM runs.
    pub lhs_iu: BoundLhs<F>,
    /// SA-ADMM runs.
    pub lhs_exact: BoundLhs<F>,
}

impl<F: Scalar> BoundReport<F> {
    /// `(name, lhs, rhs)` for the four inequalities.
    pub fn checks(&self) -> [(&'static str, F, F); 4] {
        [
            ("penalized gap (sa-iu)", self.lhs_iu.with_feasibility, self.rhs_gamma_iu),
            ("penalized gap (sa)", self.lhs_exact.with_feasibility, self.rhs_gamma_exact),
            ("primal gap (sa-iu)", self.lhs_iu.primal, self.rhs_primal_iu),
            ("primal gap (sa)", self.lhs_exact.primal, self.rhs_primal_exact),
        ]
    }

    pub fn violations(&self) -> Vec<&'static str> {
        self.checks()
            .into_iter()
            .filter(|&(_, lhs, rhs)| !(lhs <= rhs))
            .map(|(name, _, _)| name)
            .collect()
    }
}

/// Largest eigenvalue of `(B⁻¹)ᵀB⁻¹` for diagonal `B`.
fn inverse_gram_bound<F: Scalar>(p: &Problem<F>) -> Result<F> {
    let b = p.b();
    let mut worst = F::zero();
    for r in 0..b.rows() {
        let mut row = b.row(r);
        match (row.next(), row.next()) {
            (Some((c, v)), None) if c == r && v != F::zero() => worst = worst.max(F::one() / (v * v)),
            _ => return Err(Error::Unsupported("L_B needs a diagonal invertible B".into())),
        }
    }
    Ok(worst)
}

/// Evaluates the right-hand sides for horizon `t` and estimates the
/// left-hand sides from SA-ADMM and SA-IU-ADMM runs over `seeds`.
#[allow(clippy::too_many_arguments)]
pub fn theorem_bound_report<F: Scalar>(
    p: &Problem<F>,
    reference: &Reference<F>,
    x0: &DenseVec<F>,
    y0: &DenseVec<F>,
    alpha0: &DenseVec<F>,
    gamma: F,
    t: usize,
    seeds: &[u64],
) -> Result<BoundReport<F>> {
    if !(gamma > F::zero()) {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    if t == 0 {
        return Err(Error::InvalidInput("horizon T must be >= 1".into()));
    }
    let consts = p.estimate_l()?;
    let rho = p.rho();
    let gram = p.a().gram(rho);
    let lam_max = sym_eig(&gram)?.lambda_max();
    let tol = F::lit(1e-10) * consts.l_a.max(F::one());
    if lam_max > consts.l_a + tol {
        return Err(Error::Numerical(format!(
            "H_x = L_A I - rho A^T A is not psd (L_A={}, lambda_max={lam_max}); raise the power-iteration slack",
            consts.l_a
        )));
    }

    let dx = reference.x.sub(x0);
    let dy = reference.y.sub(y0);
    let x_dist = dx.norm_sq();
    let hx_dist = consts.l_a * x_dist - gram.quad_form(&dx)?;
    let hy_dist = rho * p.b().mul_vec(&dy)?.norm_sq();
    let alpha0_sq = alpha0.norm_sq();
    let n = p.n();
    let nf = F::from_usize_lossy(n);
    let l_tilde = p.lambda() * F::from_usize_lossy(p.m()).sqrt();
    let l_b = inverse_gram_bound(p)?;

    let half_t = F::one() / (F::lit(2.0) * F::from_usize_lossy(t));
    let common = nf * consts.l * x_dist + hy_dist;
    let dual_thm = F::lit(2.0) * rho * (gamma * gamma / (rho * rho) + alpha0_sq);
    let dual_cor = rho * (l_tilde * l_tilde * l_b / (rho * rho) + alpha0_sq);

    let iu = UpdaterSpec::new(Method::SaIu, consts);
    let exact = UpdaterSpec::new(Method::Sa, consts);
    let start = (x0, y0, alpha0);
    let lhs_iu = bound_lhs(p, iu, reference, start, gamma, t, seeds)?;
    let lhs_exact = bound_lhs(p, exact, reference, start, gamma, t, seeds)?;

    Ok(BoundReport {
        t,
        seeds: seeds.len(),
        n,
        gamma,
        rho,
        l: consts.l,
        l_a: consts.l_a,
        l_tilde,
        l_b,
        hx_dist,
        x_dist,
        hy_dist,
        alpha0_sq,
        rhs_gamma_iu: half_t * (hx_dist + common + dual_thm),
        rhs_gamma_exact: half_t * (common + dual_thm),
        rhs_primal_iu: half_t * (hx_dist + common + dual_cor),
        rhs_primal_exact: half_t * (common + dual_cor),
        lhs_iu,
        lhs_exact,
    })
}

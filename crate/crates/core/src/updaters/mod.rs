//! x-update rules for SA-ADMM and its baselines, plus the per-run state
//! (gradient memory, cached factorizations, RDA history) they need.
//!
//! | method   | gradient          | linearizes ‖Ax+By−c‖² | constant step |
//! |----------|-------------------|-----------------------|---------------|
//! | sa       | average           | no                    | yes           |
//! | sa-iu    | average           | yes                   | yes           |
//! | stoc     | one sample        | no                    | no            |
//! | opg      | one sample        | yes                   | no            |
//! | rda      | history average   | yes                   | no            |
//! | batch    | all samples       | no                    | yes           |
//! | batch-iu | all samples       | yes                   | yes           |

mod memory;
mod rda;
pub mod rules;

use std::fmt;
use std::str::FromStr;

pub use memory::GradientMemory;
pub use rda::RdaState;
pub use rules::{
    batch_iu_x_update, batch_x_update, coupling_grad, coupling_majorizer, coupling_value, full_gradient,
    opg_x_update, rda_x_update, sa_iu_x_update, sa_prox_x_update, sa_x_update, stoc_x_update,
};

use crate::error::{Error, Result};
use crate::numkit::{build_spd_solver, sym_eig, CachedSpdSolver, DenseVec, SpectralCache, DENSE_LIMIT};
use crate::problem::{Omega, Problem, SmoothnessInfo};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Sa,
    SaIu,
    SaProx,
    Stoc,
    Opg,
    Rda,
    Batch,
    BatchIu,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Sa,
        Method::SaIu,
        Method::SaProx,
        Method::Stoc,
        Method::Opg,
        Method::Rda,
        Method::Batch,
        Method::BatchIu,
    ];

    /// The seven rules compared on the generalized lasso.
    pub const COMPARED: [Method; 7] = [
        Method::SaIu,
        Method::Sa,
        Method::Stoc,
        Method::Opg,
        Method::Rda,
        Method::Batch,
        Method::BatchIu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sa => "sa",
            Method::SaIu => "sa-iu",
            Method::SaProx => "sa-prox",
            Method::Stoc => "stoc",
            Method::Opg => "opg",
            Method::Rda => "rda",
            Method::Batch => "batch",
            Method::BatchIu => "batch-iu",
        }
    }

    pub fn is_batch(self) -> bool {
        matches!(self, Method::Batch | Method::BatchIu)
    }

    /// Draws one sample per iteration.
    pub fn is_stochastic(self) -> bool {
        !self.is_batch()
    }

    /// Needs a tuned stepsize constant `η₀`.
    pub fn needs_eta(self) -> bool {
        matches!(self, Method::Stoc | Method::Opg | Method::Rda)
    }

    /// Uses the constant step `1/L`, which an optional `η₀` rescales to `η₀/L`.
    pub fn has_constant_step(self) -> bool {
        !self.needs_eta()
    }

    /// Gradient evaluations spent per iteration on an `n`-sample problem.
    pub fn evals_per_iter(self, n: usize) -> usize {
        if self.is_batch() {
            n
        } else {
            1
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown method `{s}`")))
    }
}

/// Which x-update to run and its constants.
///
/// `eta0` is the stepsize constant of the decaying-step rules. For the
/// constant-step rules it is optional and replaces `L` by `L/η₀` in the
/// update, leaving `L_A` alone; `None` keeps the theoretical `L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdaterSpec<F> {
    pub method: Method,
    pub eta0: Option<F>,
    pub constants: SmoothnessInfo<F>,
}

impl<F: Scalar> UpdaterSpec<F> {
    pub fn new(method: Method, constants: SmoothnessInfo<F>) -> Self {
        UpdaterSpec {
            method,
            eta0: None,
            constants,
        }
    }

    /// Uses [`Problem::estimate_l`] for the constants.
    pub fn for_problem(method: Method, p: &Problem<F>) -> Result<Self> {
        Ok(Self::new(method, p.estimate_l()?))
    }

    pub fn with_eta0(mut self, eta0: F) -> Self {
        self.eta0 = Some(eta0);
        self
    }

    /// Constants the update actually uses, with `L/η₀` for the constant-step
    /// rules.
    pub fn effective_constants(&self) -> SmoothnessInfo<F> {
        match self.eta0 {
            Some(e) if self.method.has_constant_step() => SmoothnessInfo {
                l: self.constants.l / e,
                l_a: self.constants.l_a,
            },
            _ => self.constants,
        }
    }

    /// Rejects method/problem combinations before any iteration runs.
    pub fn validate(&self, p: &Problem<F>) -> Result<()> {
        let SmoothnessInfo { l, l_a } = self.constants;
        if !(l > F::zero()) || !(l_a > F::zero()) {
            return Err(Error::InvalidInput(format!("L and L_A must be positive (L={l}, L_A={l_a})")));
        }
        if let Some(e) = self.eta0 {
            if !(e > F::zero() && e.is_finite()) {
                return Err(Error::InvalidInput(format!("eta0 must be positive, got {e}")));
            }
        }
        if self.method.needs_eta() {
            match self.eta0 {
                Some(e) if e > F::zero() && e.is_finite() => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "{} needs a positive eta0",
                        self.method
                    )))
                }
            }
        }
        if matches!(self.method, Method::Opg | Method::Rda) {
            rules::require_standard_splitting(p, self.method.name())?;
        }
        if matches!(self.method, Method::Sa | Method::Batch | Method::Stoc) && p.d() > DENSE_LIMIT {
            return Err(Error::TooLarge {
                dim: p.d(),
                limit: DENSE_LIMIT,
            });
        }
        if self.method != Method::SaProx && p.omega() != Omega::None {
            return Err(Error::Unsupported(format!(
                "{} does not handle Ω; use sa-prox",
                self.method
            )));
        }
        Ok(())
    }
}

/// Owns everything one run of an x-update rule needs between iterations.
#[derive(Debug)]
pub struct XUpdater<F> {
    spec: UpdaterSpec<F>,
    memory: Option<GradientMemory<F>>,
    solver: Option<CachedSpdSolver<F>>,
    spectral: Option<SpectralCache<F>>,
    rda: Option<RdaState<F>>,
}

impl<F: Scalar> XUpdater<F> {
    pub fn new(p: &Problem<F>, spec: UpdaterSpec<F>, x0: &[F]) -> Result<Self> {
        spec.validate(p)?;
        let mut up = XUpdater {
            spec,
            memory: None,
            solver: None,
            spectral: None,
            rda: None,
        };
        match spec.method {
            Method::Sa | Method::SaIu | Method::SaProx => up.memory = Some(GradientMemory::new(p, x0)),
            Method::Rda => up.rda = Some(RdaState::new(p.d(), p.m())),
            _ => {}
        }
        match spec.method {
            Method::Sa | Method::Batch => {
                up.solver = Some(build_spd_solver(p.a(), p.rho(), spec.effective_constants().l)?);
            }
            Method::Stoc => up.spectral = Some(sym_eig(&p.a().gram(p.rho()))?),
            _ => {}
        }
        Ok(up)
    }

    pub fn spec(&self) -> &UpdaterSpec<F> {
        &self.spec
    }

    pub fn memory(&self) -> Option<&GradientMemory<F>> {
        self.memory.as_ref()
    }

    /// `x_{t+1}`. `k` is the sample drawn at iteration `t` and is ignored by
    /// the batch rules.
    pub fn step(&mut self, p: &Problem<F>, k: usize, t: usize, x: &[F], y: &[F], alpha: &[F]) -> Result<DenseVec<F>> {
        let consts = self.spec.effective_constants();
        let eta0 = self.spec.eta0.unwrap_or_else(F::one);
        match self.spec.method {
            Method::Sa => sa_x_update(p, self.memory.as_mut().unwrap(), k, x, y, alpha, self.solver.as_ref().unwrap()),
            Method::SaIu => sa_iu_x_update(p, &consts, self.memory.as_mut().unwrap(), k, x, y, alpha),
            Method::SaProx => sa_prox_x_update(p, &consts, self.memory.as_mut().unwrap(), k, x, y, alpha),
            Method::Stoc => stoc_x_update(p, k, x, y, alpha, t, eta0, self.spectral.as_ref().unwrap()),
            Method::Opg => opg_x_update(p, k, x, y, alpha, t, eta0),
            Method::Rda => rda_x_update(p, k, x, y, alpha, self.rda.as_mut().unwrap(), t, eta0),
            Method::Batch => batch_x_update(p, x, y, alpha, self.solver.as_ref().unwrap()),
            Method::BatchIu => batch_iu_x_update(p, &consts, x, y, alpha),
        }
    }
}

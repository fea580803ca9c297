//! The ADMM outer loop: x-step dispatch, closed-form y-step, scaled dual
//! ascent, output averaging and checkpoint capture.

mod bounds;
mod reference;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bounds::{bound_lhs, theorem_bound_report, BoundLhs, BoundReport};
pub use reference::{solve_reference, Reference};

use crate::error::{Error, Result};
use crate::numkit::DenseVec;
use crate::problem::{prox_l1, Problem, Sample};
use crate::scalar::Scalar;
use crate::updaters::{UpdaterSpec, XUpdater};

/// Iterates of one run plus the running sums behind `x̄_T`, `ȳ_T`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmmState<F> {
    pub x: DenseVec<F>,
    pub y: DenseVec<F>,
    pub alpha: DenseVec<F>,
    pub t: usize,
    pub out_x_sum: DenseVec<F>,
    pub out_y_sum: DenseVec<F>,
    pub grad_evals: u64,
}

impl<F: Scalar> AdmmState<F> {
    pub fn new(x: DenseVec<F>, y: DenseVec<F>, alpha: DenseVec<F>) -> Self {
        let (d, m) = (x.len(), y.len());
        AdmmState {
            x,
            y,
            alpha,
            t: 0,
            out_x_sum: DenseVec::zeros(d),
            out_y_sum: DenseVec::zeros(m),
            grad_evals: 0,
        }
    }

    /// `x̄_t = (1/t) Σ_{s=1..t} x_s`; `x_0` is not part of the average.
    pub fn x_avg(&self) -> DenseVec<F> {
        average(&self.out_x_sum, self.t)
    }

    pub fn y_avg(&self) -> DenseVec<F> {
        average(&self.out_y_sum, self.t)
    }
}

fn average<F: Scalar>(sum: &DenseVec<F>, t: usize) -> DenseVec<F> {
    if t == 0 {
        return DenseVec::zeros(sum.len());
    }
    sum.scaled(F::one() / F::from_usize_lossy(t))
}

/// One trace row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Checkpoint<F> {
    pub iter: usize,
    /// Gradient evaluations divided by `n`.
    pub passes: F,
    /// `Φ(x_t, y(x_t))` at the current iterate.
    pub objective: F,
    /// Mean data loss on the held-out set, NaN without one.
    pub test_loss: F,
    /// `‖Ax_t + By_t − c‖`
    pub feasibility: F,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace<F> {
    pub records: Vec<Checkpoint<F>>,
}

impl<F: Scalar> RunTrace<F> {
    pub fn push(&mut self, c: Checkpoint<F>) {
        debug_assert!(self.records.last().is_none_or(|l| l.passes <= c.passes));
        self.records.push(c);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&Checkpoint<F>> {
        self.records.last()
    }

    pub fn best_objective(&self) -> F {
        self.records.iter().map(|c| c.objective).fold(F::infinity(), F::min)
    }

    /// First checkpointed pass count with `(objective − best)/|best| ≤ gap`.
    pub fn passes_to_gap(&self, best: F, gap: F) -> Option<F> {
        let scale = best.abs().max(F::min_positive_value());
        self.records
            .iter()
            .find(|c| (c.objective - best) / scale <= gap)
            .map(|c| c.passes)
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions<F> {
    pub iterations: usize,
    pub seed: u64,
    /// Iterations between trace records; 0 records only the start and end.
    pub checkpoint_every: usize,
    pub x0: Option<DenseVec<F>>,
    pub y0: Option<DenseVec<F>>,
    pub alpha0: Option<DenseVec<F>>,
    /// Records wall-clock milliseconds; otherwise `wall_ms` stays 0 so that
    /// traces are reproducible byte for byte.
    pub wall_clock: bool,
    /// Iteration counts `T` at which to snapshot `(x̄_T, ȳ_T)`.
    pub average_at: Vec<usize>,
}

impl<F: Scalar> RunOptions<F> {
    pub fn new(iterations: usize, seed: u64) -> Self {
        RunOptions {
            iterations,
            seed,
            checkpoint_every: 0,
            x0: None,
            y0: None,
            alpha0: None,
            wall_clock: false,
            average_at: Vec::new(),
        }
    }

    pub fn checkpoint_every(mut self, every: usize) -> Self {
        self.checkpoint_every = every;
        self
    }

    pub fn start(mut self, x0: DenseVec<F>, y0: DenseVec<F>, alpha0: DenseVec<F>) -> Self {
        self.x0 = Some(x0);
        self.y0 = Some(y0);
        self.alpha0 = Some(alpha0);
        self
    }

    pub fn wall_clock(mut self, on: bool) -> Self {
        self.wall_clock = on;
        self
    }

    pub fn average_at(mut self, ts: Vec<usize>) -> Self {
        self.average_at = ts;
        self
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput<F> {
    pub x_avg: DenseVec<F>,
    pub y_avg: DenseVec<F>,
    pub state: AdmmState<F>,
    pub trace: RunTrace<F>,
    /// `(T, x̄_T, ȳ_T)` for each requested `T ≤ iterations`, ascending.
    pub averages: Vec<(usize, DenseVec<F>, DenseVec<F>)>,
}

/// Closed-form y-step for `ψ = λ‖·‖₁`, `B = −I`, `c = 0`:
/// `y = soft(Ax + α, λ/ρ)`.
pub fn y_update<F: Scalar>(p: &Problem<F>, x_next: &[F], alpha: &[F]) -> Result<DenseVec<F>> {
    if !p.is_standard_splitting() {
        return Err(Error::Unsupported(
            "the y-step is closed-form only for B = -I, c = 0".into(),
        ));
    }
    alpha_len(p, alpha)?;
    let mut v = p.a().mul_vec(x_next)?;
    v.axpy(F::one(), alpha);
    Ok(prox_l1(&v, p.lambda() / p.rho()))
}

fn alpha_len<F: Scalar>(p: &Problem<F>, alpha: &[F]) -> Result<()> {
    if alpha.len() != p.m() {
        return Err(Error::dim("alpha", p.m(), alpha.len()));
    }
    Ok(())
}

/// `α + Ax + By − c`
pub fn dual_update<F: Scalar>(p: &Problem<F>, alpha: &[F], x_next: &[F], y_next: &[F]) -> Result<DenseVec<F>> {
    alpha_len(p, alpha)?;
    let r = p.constraint_residual(x_next, y_next)?;
    Ok(alpha.iter().zip(r.iter()).map(|(&a, &ri)| a + ri).collect())
}

/// Runs `iterations` ADMM steps from `x_0 = 0, y_0 = 0, α_0 = 0`.
pub fn run<F: Scalar>(
    p: &Problem<F>,
    spec: UpdaterSpec<F>,
    iterations: usize,
    seed: u64,
    checkpoint_every: usize,
    test_set: Option<&[Sample<F>]>,
) -> Result<RunOutput<F>> {
    run_with(
        p,
        spec,
        &RunOptions::new(iterations, seed).checkpoint_every(checkpoint_every),
        test_set,
    )
}

pub fn run_with<F: Scalar>(
    p: &Problem<F>,
    spec: UpdaterSpec<F>,
    opts: &RunOptions<F>,
    test_set: Option<&[Sample<F>]>,
) -> Result<RunOutput<F>> {
    if opts.iterations == 0 {
        return Err(Error::InvalidInput("a run needs at least one iteration".into()));
    }
    if !p.is_standard_splitting() {
        return Err(Error::Unsupported(
            "the engine needs B = -I, c = 0 for its closed-form y-step".into(),
        ));
    }
    let (n, d, m) = (p.n(), p.d(), p.m());
    let x0 = opts.x0.clone().unwrap_or_else(|| DenseVec::zeros(d));
    let y0 = opts.y0.clone().unwrap_or_else(|| DenseVec::zeros(m));
    let a0 = opts.alpha0.clone().unwrap_or_else(|| DenseVec::zeros(m));
    x0.check_len("x0", d)?;
    y0.check_len("y0", m)?;
    a0.check_len("alpha0", m)?;

    let mut updater = XUpdater::new(p, spec, &x0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut state = AdmmState::new(x0, y0, a0);
    let mut trace = RunTrace::default();
    let mut averages = Vec::new();
    let mut wanted: Vec<usize> = opts
        .average_at
        .iter()
        .copied()
        .filter(|&t| t >= 1 && t <= opts.iterations)
        .collect();
    wanted.sort_unstable();
    wanted.dedup();
    let mut wanted = wanted.into_iter().peekable();

    let evals = spec.method.evals_per_iter(n) as u64;
    let started = Instant::now();
    let record = |state: &AdmmState<F>, trace: &mut RunTrace<F>| -> Result<()> {
        let objective = p.primal_objective(&state.x)?;
        let test_loss = test_set.map_or(F::nan(), |ts| p.data_loss(ts, &state.x));
        trace.push(Checkpoint {
            iter: state.t,
            passes: F::from_u64(state.grad_evals).unwrap() / F::from_usize_lossy(n),
            objective,
            test_loss,
            feasibility: p.feasibility(&state.x, &state.y)?,
            wall_ms: if opts.wall_clock {
                started.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            },
        });
        Ok(())
    };
    record(&state, &mut trace)?;

    for t in 0..opts.iterations {
        let k = if spec.method.is_stochastic() {
            rng.random_range(0..n)
        } else {
            0
        };
        let x_next = updater.step(p, k, t, &state.x, &state.y, &state.alpha)?;
        let y_next = y_update(p, &x_next, &state.alpha)?;
        let a_next = dual_update(p, &state.alpha, &x_next, &y_next)?;
        state.out_x_sum.axpy(F::one(), &x_next);
        state.out_y_sum.axpy(F::one(), &y_next);
        state.x = x_next;
        state.y = y_next;
        state.alpha = a_next;
        state.t = t + 1;
        state.grad_evals += evals;

        if !state.x.is_finite() || !state.alpha.is_finite() {
            return Err(Error::Numerical(format!(
                "{} diverged at iteration {}",
                spec.method, state.t
            )));
        }
        if wanted.peek() == Some(&state.t) {
            wanted.next();
            averages.push((state.t, state.x_avg(), state.y_avg()));
        }
        let last = state.t == opts.iterations;
        if last || (opts.checkpoint_every > 0 && state.t % opts.checkpoint_every == 0) {
            record(&state, &mut trace)?;
        }
    }

    Ok(RunOutput {
        x_avg: state.x_avg(),
        y_avg: state.y_avg(),
        state,
        trace,
        averages,
    })
}

#[cfg(test)]
mod tests;

use super::*;
use crate::numkit::SparseMat;
use crate::problem::{LossKind, Sample};
use crate::synth::SyntheticSpec;
use crate::updaters::Method;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scalar_problem() -> Problem<f64> {
    Problem::generalized_lasso(
        vec![Sample::dense(&[1.0], 1.0)],
        1,
        LossKind::square(),
        SparseMat::identity(1),
        1.0,
        0.1,
    )
    .unwrap()
}

fn small() -> Problem<f64> {
    SyntheticSpec::small(40, 6, 3).build().unwrap()
}

#[test]
fn y_step_soft_threshold() {
    // A = I, x = (0.5, -2), α = 0, λ/ρ = 1
    let p = Problem::generalized_lasso(
        vec![Sample::dense(&[1.0, 1.0], 1.0)],
        2,
        LossKind::square(),
        SparseMat::identity(2),
        1.0,
        1.0,
    )
    .unwrap();
    let y = y_update(&p, &[0.5, -2.0], &[0.0, 0.0]).unwrap();
    assert_eq!(y.as_slice(), &[0.0, -1.0]);
}

#[test]
fn y_step_satisfies_optimality() {
    let p = small();
    let x: Vec<f64> = (0..p.d()).map(|j| (j as f64 * 0.7).sin()).collect();
    let alpha: Vec<f64> = (0..p.m()).map(|i| (i as f64 * 1.3).cos() * 0.05).collect();
    let y = y_update(&p, &x, &alpha).unwrap();
    let v = p.a().mul_vec(&x).unwrap().add(&alpha);
    // 0 ∈ λ ∂|y| + ρ(y − v)
    let (lam, rho) = (p.lambda(), p.rho());
    for (yi, vi) in y.iter().zip(v.iter()) {
        let g = rho * (vi - yi);
        if *yi == 0.0 {
            assert!(g.abs() <= lam + 1e-12);
        } else {
            assert!((g - lam * yi.signum()).abs() < 1e-12);
        }
    }
}

#[test]
fn dual_is_prefix_sum_of_residuals() {
    let p = small();
    let spec = UpdaterSpec::for_problem(Method::SaIu, &p).unwrap();
    let mut up = XUpdater::new(&p, spec, &vec![0.0; p.d()]).unwrap();
    let (mut x, mut y, mut a) = (DenseVec::zeros(p.d()), DenseVec::zeros(p.m()), DenseVec::zeros(p.m()));
    let mut sum = DenseVec::zeros(p.m());
    for t in 0..25 {
        x = up.step(&p, t % p.n(), t, &x, &y, &a).unwrap();
        y = y_update(&p, &x, &a).unwrap();
        a = dual_update(&p, &a, &x, &y).unwrap();
        sum.axpy(1.0, &p.constraint_residual(&x, &y).unwrap());
        assert!(a.max_abs_diff(&sum) < 1e-12);
    }
}

#[test]
fn batch_single_step_by_hand() {
    // x₁ = (ρ + L)⁻¹(L·0 − ρ(−0 + 0) − (0 − 1)) = 1/2, y₁ = soft(1/2, 0.1) = 0.4
    let p = scalar_problem();
    let spec = UpdaterSpec::for_problem(Method::Batch, &p).unwrap();
    let out = run(&p, spec, 1, 0, 0, None).unwrap();
    assert!((out.x_avg[0] - 0.5).abs() < 1e-15);
    assert!((out.y_avg[0] - 0.4).abs() < 1e-15);
    assert!((out.state.alpha[0] - 0.1).abs() < 1e-15);
    assert_eq!(out.trace.len(), 2);
    assert_eq!(out.trace.last().unwrap().passes, 1.0);
}

#[test]
fn runs_are_deterministic() {
    let p = small();
    for m in Method::ALL {
        let mut spec = UpdaterSpec::for_problem(m, &p).unwrap();
        if m.needs_eta() {
            spec = spec.with_eta0(0.1);
        }
        let p = if m == Method::SaProx {
            p.clone().with_omega(crate::problem::Omega::L1(0.01))
        } else {
            p.clone()
        };
        let a = run(&p, spec, 120, 7, 10, Some(p.samples())).unwrap();
        let b = run(&p, spec, 120, 7, 10, Some(p.samples())).unwrap();
        assert_eq!(a.trace, b.trace, "{m}");
        assert_eq!(a.state, b.state, "{m}");
    }
}

#[test]
fn output_is_mean_of_iterates() {
    let p = small();
    let spec = UpdaterSpec::for_problem(Method::Sa, &p).unwrap();
    let mut up = XUpdater::new(&p, spec, &vec![0.0; p.d()]).unwrap();
    let out = run_with(&p, spec, &RunOptions::new(30, 5).average_at(vec![10, 30, 99]), None).unwrap();
    // replay with the same sample sequence
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut x, mut y, mut a) = (DenseVec::zeros(p.d()), DenseVec::zeros(p.m()), DenseVec::zeros(p.m()));
    let mut xs = Vec::new();
    for t in 0..30 {
        let k = rng.random_range(0..p.n());
        x = up.step(&p, k, t, &x, &y, &a).unwrap();
        y = y_update(&p, &x, &a).unwrap();
        a = dual_update(&p, &a, &x, &y).unwrap();
        xs.push(x.clone());
    }
    let mean = |k: usize| -> DenseVec<f64> {
        let mut s = DenseVec::zeros(p.d());
        for v in &xs[..k] {
            s.axpy(1.0 / k as f64, v);
        }
        s
    };
    assert!(out.x_avg.max_abs_diff(&mean(30)) < 1e-12);
    assert_eq!(out.averages.len(), 2);
    assert_eq!(out.averages[0].0, 10);
    assert!(out.averages[0].1.max_abs_diff(&mean(10)) < 1e-12);
    assert_eq!(out.state.x, xs[29]);
}

#[test]
fn checkpoints_follow_cadence() {
    let p = small();
    let spec = UpdaterSpec::for_problem(Method::SaIu, &p).unwrap();
    let out = run(&p, spec, 95, 1, 20, None).unwrap();
    let iters: Vec<usize> = out.trace.records.iter().map(|c| c.iter).collect();
    assert_eq!(iters, vec![0, 20, 40, 60, 80, 95]);
    assert!(out.trace.records.iter().all(|c| c.test_loss.is_nan() && c.wall_ms == 0.0));
    assert!((out.trace.last().unwrap().passes - 95.0 / 40.0).abs() < 1e-15);
}

#[test]
fn batch_and_batch_iu_agree() {
    let p = SyntheticSpec::small(60, 10, 2).build::<f64>().unwrap();
    let exact = solve_reference(&p, 20_000, 1e-11).unwrap();
    assert!(exact.converged);
    let spec = UpdaterSpec::for_problem(Method::BatchIu, &p).unwrap();
    let iu = run(&p, spec, 20_000, 0, 0, None).unwrap();
    let obj = p.primal_objective(&iu.state.x).unwrap();
    assert!((obj - exact.objective) / exact.objective.abs() < 1e-6);
}

#[test]
fn reference_is_stationary() {
    let p = SyntheticSpec::small(60, 10, 4).build::<f64>().unwrap();
    let r = solve_reference(&p, 50_000, 1e-12).unwrap();
    assert!(r.converged);
    // ∇ℓ̄(x) + ρAᵀα = 0 and −ρα ∈ λ∂‖y‖₁ at the fixed point
    let mut g = crate::updaters::full_gradient(&p, &r.x);
    g.axpy(p.rho(), &p.a().tr_mul_vec(&r.alpha).unwrap());
    assert!(g.norm() < 1e-8, "{}", g.norm());
    for (yi, ai) in r.y.iter().zip(r.alpha.iter()) {
        let s = p.rho() * ai;
        if yi.abs() > 1e-9 {
            assert!((s - p.lambda() * yi.signum()).abs() < 1e-8);
        } else {
            assert!(s.abs() <= p.lambda() + 1e-8);
        }
    }
}

#[test]
fn rda_objective_decreases() {
    let p = SyntheticSpec::fused_lasso(200, 8, 6).build::<f64>().unwrap();
    let spec = UpdaterSpec::for_problem(Method::Rda, &p).unwrap().with_eta0(0.5);
    let out = run(&p, spec, 4000, 3, 400, None).unwrap();
    let obj: Vec<f64> = out.trace.records.iter().map(|c| c.objective).collect();
    assert!(obj.windows(2).all(|w| w[1] < w[0]), "{obj:?}");
}

#[test]
fn rejects_general_splitting() {
    let p = Problem::new(
        vec![Sample::dense(&[1.0], 1.0)],
        1,
        LossKind::square(),
        SparseMat::identity(1),
        SparseMat::scaled_identity(1, 2.0),
        DenseVec::zeros(1),
        1.0,
        crate::problem::Omega::None,
        crate::problem::Psi::L1(0.1),
    )
    .unwrap();
    let spec = UpdaterSpec::for_problem(Method::SaIu, &p).unwrap();
    assert!(matches!(run(&p, spec, 1, 0, 0, None), Err(Error::Unsupported(_))));
    assert!(y_update(&p, &[0.0], &[0.0]).is_err());
}

#[test]
fn zero_iterations_rejected() {
    let p = scalar_problem();
    let spec = UpdaterSpec::for_problem(Method::Sa, &p).unwrap();
    assert!(run(&p, spec, 0, 0, 0, None).is_err());
}

#[test]
fn bound_report_small_problem() {
    let p = SyntheticSpec::small(30, 5, 8).build::<f64>().unwrap();
    let r = solve_reference(&p, 50_000, 1e-12).unwrap();
    let z = |k| DenseVec::zeros(k);
    let rep = theorem_bound_report(&p, &r, &z(p.d()), &z(p.m()), &z(p.m()), 1.0, 50, &[0, 1, 2, 3]).unwrap();
    assert_eq!(rep.l_b, 1.0);
    assert!(rep.hx_dist >= 0.0);
    assert!(rep.rhs_gamma_iu >= rep.rhs_gamma_exact);
    assert!(rep.rhs_primal_iu >= rep.rhs_primal_exact);
    assert!(rep.violations().is_empty(), "{rep:?}");
    assert!(theorem_bound_report(&p, &r, &z(p.d()), &z(p.m()), &z(p.m()), 0.0, 5, &[0]).is_err());
}

#[test]
fn bound_rhs_by_hand() {
    // n = 1, x* − x₀ known; check the assembled constants against the formula
    let p = scalar_problem();
    let r = solve_reference(&p, 10_000, 1e-13).unwrap();
    let z = DenseVec::zeros(1);
    let rep = theorem_bound_report(&p, &r, &z, &z, &z, 2.0, 10, &[0]).unwrap();
    let dx2 = r.x[0] * r.x[0];
    let dy2 = r.y[0] * r.y[0];
    let want2 = (1.0 * 1.0 * dx2 + 1.0 * dy2 + 2.0 * (4.0 + 0.0)) / 20.0;
    assert!((rep.rhs_gamma_exact - want2).abs() < 1e-12);
    let want_c = (dx2 + dy2 + (0.01 * 1.0)) / 20.0;
    assert!((rep.rhs_primal_exact - want_c).abs() < 1e-12);
    assert!((rep.hx_dist - (rep.l_a - 1.0) * dx2).abs() < 1e-12);
}

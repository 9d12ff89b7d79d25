use proptest::prelude::*;

use recall_search::analytics::{
    f_of_delta_curve, f_of_m_curve, inverse_log_ratio_sum, total_runs_closed_form, Spacing,
};
use recall_search::driver::{execute_trial, step_budget, Sampler, StepPlan, Strategy as Schedule};
use recall_search::rng::trial_stream;
use recall_search::search::{
    derive_long_params, prepare_uniform, success_probability_in, QuantumState, Representation,
};
use recall_search::ProblemInstance;

fn instance() -> impl Strategy<Value = (usize, usize)> {
    (2usize..300).prop_flat_map(|n| (Just(n), 1..=n))
}

proptest! {
    #[test]
    fn operators_preserve_norm_and_agree_across_representations(
        (n, m) in instance(),
        phi in 0.0f64..std::f64::consts::PI,
        steps in 1usize..12,
    ) {
        let p = ProblemInstance::with_marked_count(n, m, 0.1).unwrap();
        let mut full = prepare_uniform(&p, Representation::Full);
        let mut sub = prepare_uniform(&p, Representation::Subspace);
        for _ in 0..steps {
            full.apply_oracle_phase(&p, phi);
            sub.apply_oracle_phase(&p, phi);
            prop_assert!((full.norm_sqr() - 1.0).abs() <= 1e-12);
            prop_assert!((sub.norm_sqr() - 1.0).abs() <= 1e-12);
            full.apply_diffusion_phase(&p, phi);
            sub.apply_diffusion_phase(&p, phi);
            prop_assert!((full.norm_sqr() - 1.0).abs() <= 1e-12);
            prop_assert!((sub.norm_sqr() - 1.0).abs() <= 1e-12);
            prop_assert!(full.marked_amplitude_spread(&p) <= 1e-10);
            let (fa, fb) = full.subspace_components(&p);
            let (sa, sb) = sub.subspace_components(&p);
            prop_assert!((fa - sa).norm() <= 1e-12 && (fb - sb).norm() <= 1e-12);
        }
    }

    #[test]
    fn every_run_is_exact((n, m) in instance()) {
        let p = ProblemInstance::with_marked_count(n, m, 0.1).unwrap();
        let params = derive_long_params(&p);
        let sub = success_probability_in(&p, &params, Representation::Subspace).unwrap();
        let full = success_probability_in(&p, &params, Representation::Full).unwrap();
        prop_assert!((1.0 - sub).abs() <= 1e-9, "N={} m={} p={}", n, m, sub);
        prop_assert!((full - sub).abs() <= 1e-9);
    }

    #[test]
    fn budget_is_smallest_sufficient_run_count(
        m in 2usize..500,
        frac in 0.0f64..1.0,
        log_delta in -14.0f64..-0.1,
    ) {
        let i = 2 + ((m - 1) as f64 * frac) as usize;
        let i = i.min(m);
        let delta = log_delta.exp();
        let r = step_budget(m, i, delta).unwrap() as i32;
        let ratio = (i - 1) as f64 / m as f64;
        prop_assert!(ratio.powi(r) <= delta * (1.0 + 1e-9));
        prop_assert!(r == 1 || ratio.powi(r - 1) > delta);
    }

    #[test]
    fn budgets_are_nondecreasing_and_bracket_closed_form(
        m in 1usize..400,
        delta in 1e-6f64..0.99,
    ) {
        let plan = StepPlan::for_counts(m, delta, 1).unwrap();
        prop_assert_eq!(plan.budgets[0], 1);
        prop_assert!(plan.budgets.windows(2).all(|w| w[0] <= w[1]));
        let r_real = total_runs_closed_form(m, delta).unwrap();
        let total = plan.total_runs_budget as f64;
        prop_assert!(total >= r_real * (1.0 - 1e-12));
        prop_assert!(total <= r_real + (m - 1) as f64 + 1e-9);
    }

    #[test]
    fn closed_form_is_affine_in_log_inverse_delta(
        m in 1usize..2000,
        d1 in 1e-8f64..0.999,
        d2 in 1e-8f64..0.999,
    ) {
        let f1 = total_runs_closed_form(m, d1).unwrap();
        let f2 = total_runs_closed_form(m, d2).unwrap();
        let c = inverse_log_ratio_sum(m);
        let lhs = f1 - f2;
        let rhs = (d2.ln() - d1.ln()) * c;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn trial_outcomes_are_consistent(seed in any::<u64>(), m in 1usize..12, budgeted in any::<bool>()) {
        let p = ProblemInstance::with_marked_count(64, m, 0.2).unwrap();
        let sampler = Sampler::quantum(&p, Representation::Full);
        let strategy = if budgeted {
            Schedule::Budgeted(StepPlan::for_counts(m, 0.2, sampler.queries_per_run()).unwrap())
        } else {
            Schedule::Unbounded
        };
        let out = execute_trial(&p, &sampler, &strategy, &mut trial_stream(seed, 0)).unwrap();
        let mut seen = out.found_order.clone();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), out.found_order.len());
        prop_assert!(out.found_order.iter().all(|&i| p.is_marked(i)));
        prop_assert_eq!(out.queries_used, out.runs_used * sampler.queries_per_run());
        prop_assert!(out.runs_used as usize >= out.found_order.len());
        if out.success {
            prop_assert_eq!(out.found_order.len(), m);
            prop_assert!(out.failed_at_step.is_none());
        } else {
            prop_assert_eq!(out.failed_at_step, Some(out.found_order.len() + 1));
        }
    }
}

#[test]
fn closed_form_does_not_depend_on_n() {
    use recall_search::analytics::total_queries_closed_form;
    let a = total_queries_closed_form(7, 64, 0.01).unwrap();
    let b = total_queries_closed_form(7, 1 << 20, 0.01).unwrap();
    assert_eq!(a.r_real, b.r_real);
    assert_eq!(a.r_integer, b.r_integer);
    assert!(b.q_real > a.q_real);
}

#[test]
fn curves_are_monotone() {
    let c = f_of_m_curve(0.01, 1, 3000, 7).unwrap();
    assert!(c.windows(2).all(|w| w[1].f > w[0].f));
    let d = f_of_delta_curve(50, 1e-6, 0.9, 300, Spacing::Log).unwrap();
    assert!(d.windows(2).all(|w| w[1].f < w[0].f));
}

#[test]
fn marked_amplitudes_stay_symmetric_for_scattered_targets() {
    let p = ProblemInstance::new(257, vec![200, 3, 77, 128, 5], 0.1).unwrap();
    let params = derive_long_params(&p);
    let mut s = prepare_uniform(&p, Representation::Full);
    for _ in 0..params.iterations {
        s.apply_oracle_phase(&p, params.phi);
        s.apply_diffusion_phase(&p, params.phi);
        assert!(s.marked_amplitude_spread(&p) <= 1e-10);
    }
    let QuantumState::Full(amps) = s else { unreachable!() };
    let mass: f64 = p.marked().iter().map(|&t| amps[t].norm_sqr()).sum();
    assert!((1.0 - mass).abs() <= 1e-9);
}

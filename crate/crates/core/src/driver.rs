//! Repeating exact search runs until every marked state has been recalled.
//!
//! Each run returns one marked state uniformly at random, so finding all of
//! them is a coupon-collector process. Under the budgeted strategy, step `i`
//! (looking for the `i`-th distinct state) may spend at most `r_i` runs,
//! where `r_i` is the smallest integer with `((i-1)/m)^{r_i} <= delta`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{check_delta, ProblemInstance};
use crate::search::{derive_long_params, run_long_once_in, LongParams, Representation};

/// Relative slack applied before taking the ceiling, so that budgets whose
/// exact value is an integer (e.g. `(1/10)^3 = 0.001`) are not bumped by one
/// from rounding in the logarithms.
const CEIL_SLACK: f64 = 1e-12;

/// Runs allowed for step `step` (1-based) when `m` states are marked.
pub fn step_budget(m: usize, step: usize, delta: f64) -> Result<u64> {
    if step == 0 || step > m {
        return Err(Error::StepOutOfRange { step, marked: m });
    }
    check_delta(delta)?;
    if step == 1 {
        return Ok(1);
    }
    let log_inv_delta = -delta.ln();
    let log_ratio = (m as f64).ln() - ((step - 1) as f64).ln();
    let real = log_inv_delta / log_ratio;
    Ok(((real * (1.0 - CEIL_SLACK)).ceil() as u64).max(1))
}

/// How `delta` is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaMode {
    /// Every step fails with probability at most `delta`.
    PerStep,
    /// All steps jointly fail with probability at most `delta`.
    Overall,
}

/// Per-step tolerance to plan with, given the user's tolerance and mode.
///
/// In overall mode a target `D` becomes `1 - (1 - D)^{1/(m-1)}`, so that
/// `m - 1` independent steps each succeeding with `1 - delta_step` succeed
/// jointly with `1 - D`.
pub fn step_delta(delta: f64, m: usize, mode: DeltaMode) -> Result<f64> {
    check_delta(delta)?;
    match mode {
        DeltaMode::PerStep => Ok(delta),
        DeltaMode::Overall if m <= 1 => Ok(delta),
        DeltaMode::Overall => {
            let per = -((-delta).ln_1p() / (m - 1) as f64).exp_m1();
            Ok(per)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepPlan {
    /// `r_1 .. r_m`.
    pub budgets: Vec<u64>,
    pub queries_per_run: u64,
    pub total_runs_budget: u64,
    pub total_queries_budget: u64,
}

impl StepPlan {
    pub fn for_counts(m: usize, delta: f64, queries_per_run: u64) -> Result<Self> {
        let budgets = (1..=m)
            .map(|i| step_budget(m, i, delta))
            .collect::<Result<Vec<_>>>()?;
        let total_runs_budget = budgets.iter().sum();
        Ok(Self {
            budgets,
            queries_per_run,
            total_runs_budget,
            total_queries_budget: total_runs_budget * queries_per_run,
        })
    }
}

pub fn build_plan(problem: &ProblemInstance, params: &LongParams) -> Result<StepPlan> {
    params.check(problem)?;
    StepPlan::for_counts(problem.n_marked(), problem.delta(), params.iterations)
}

/// Uniform draw over the marked states, charging a full run per draw. This
/// stands in for the quantum run once exactness and uniformity are checked.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSampler {
    n_states: usize,
    marked: Vec<usize>,
    queries_per_run: u64,
}

impl IdealSampler {
    pub fn new(problem: &ProblemInstance) -> Self {
        Self {
            n_states: problem.n_states(),
            marked: problem.marked().to_vec(),
            queries_per_run: derive_long_params(problem).iterations,
        }
    }
}

/// Simulates every run with the quantum search and measures it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSampler {
    problem: ProblemInstance,
    params: LongParams,
    representation: Representation,
}

impl QuantumSampler {
    pub fn new(problem: &ProblemInstance, representation: Representation) -> Self {
        Self {
            problem: problem.clone(),
            params: derive_long_params(problem),
            representation,
        }
    }

    pub fn params(&self) -> &LongParams {
        &self.params
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sampler {
    Ideal(IdealSampler),
    Quantum(QuantumSampler),
}

impl Sampler {
    pub fn ideal(problem: &ProblemInstance) -> Self {
        Sampler::Ideal(IdealSampler::new(problem))
    }

    pub fn quantum(problem: &ProblemInstance, representation: Representation) -> Self {
        Sampler::Quantum(QuantumSampler::new(problem, representation))
    }

    pub fn queries_per_run(&self) -> u64 {
        match self {
            Sampler::Ideal(s) => s.queries_per_run,
            Sampler::Quantum(s) => s.params.iterations,
        }
    }

    /// One run; returns the measured index.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        match self {
            Sampler::Ideal(s) => Ok(s.marked[rng.random_range(0..s.marked.len())]),
            Sampler::Quantum(s) => {
                run_long_once_in(&s.problem, &s.params, s.representation, rng).map(|(i, _)| i)
            }
        }
    }

    fn check(&self, problem: &ProblemInstance) -> Result<()> {
        let (n, marked) = match self {
            Sampler::Ideal(s) => (s.n_states, s.marked.as_slice()),
            Sampler::Quantum(s) => (s.problem.n_states(), s.problem.marked()),
        };
        if n != problem.n_states() || marked != problem.marked() {
            return Err(Error::SamplerMismatch(format!(
                "sampler built for N={n} with {} marked states, problem has N={} with {}",
                marked.len(),
                problem.n_states(),
                problem.n_marked()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Budgeted(StepPlan),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// Distinct marked states in the order they were first found.
    pub found_order: Vec<usize>,
    pub runs_used: u64,
    pub queries_used: u64,
    pub success: bool,
    /// 1-based step whose budget ran out.
    pub failed_at_step: Option<usize>,
}

/// Recalls marked states until all are found or a step budget runs out.
pub fn execute_trial<R: Rng + ?Sized>(
    problem: &ProblemInstance,
    sampler: &Sampler,
    strategy: &Strategy,
    rng: &mut R,
) -> Result<TrialOutcome> {
    sampler.check(problem)?;
    let m = problem.n_marked();
    if let Strategy::Budgeted(plan) = strategy {
        if plan.budgets.len() != m {
            return Err(Error::SamplerMismatch(format!(
                "plan has {} steps for {m} marked states",
                plan.budgets.len()
            )));
        }
    }
    let mut seen = vec![false; m];
    let mut found_order = Vec::with_capacity(m);
    let mut runs_used = 0u64;
    let mut failed_at_step = None;

    // Returns true if the draw was a marked state not seen before.
    let mut draw_new = |rng: &mut R, runs: &mut u64, found: &mut Vec<usize>| -> Result<bool> {
        let index = sampler.draw(rng)?;
        *runs += 1;
        match problem.marked_rank(index) {
            Some(rank) if !seen[rank] => {
                seen[rank] = true;
                found.push(index);
                Ok(true)
            }
            _ => Ok(false),
        }
    };

    match strategy {
        Strategy::Budgeted(plan) => {
            'steps: for (step, &budget) in plan.budgets.iter().enumerate() {
                for _ in 0..budget {
                    if draw_new(rng, &mut runs_used, &mut found_order)? {
                        continue 'steps;
                    }
                }
                failed_at_step = Some(step + 1);
                break;
            }
        }
        Strategy::Unbounded => {
            while found_order.len() < m {
                draw_new(rng, &mut runs_used, &mut found_order)?;
            }
        }
    }

    Ok(TrialOutcome {
        success: failed_at_step.is_none(),
        queries_used: runs_used * sampler.queries_per_run(),
        found_order,
        runs_used,
        failed_at_step,
    })
}

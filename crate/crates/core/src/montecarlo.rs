//! Deterministic batch trials and the statistics used to check them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::total_runs_closed_form;
use crate::driver::{build_plan, execute_trial, Sampler, Strategy};
use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::rng::trial_stream;
use crate::search::derive_long_params;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRate {
    /// 1-based step.
    pub step: usize,
    /// Trials that started this step.
    pub reached: u64,
    /// Trials that found a new state within the step's budget.
    pub succeeded: u64,
    pub rate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub n_trials: u64,
    pub master_seed: u64,
    pub queries_per_run: u64,
    pub per_step_success_rate: Vec<StepRate>,
    pub mean_runs: f64,
    /// Standard error of `mean_runs`.
    pub runs_std_error: f64,
    pub mean_queries: f64,
    pub overall_success_rate: f64,
    pub overall_std_error: f64,
}

/// Binomial standard error `sqrt(p (1 - p) / n)`.
pub fn binomial_std_error(p: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

#[derive(Clone, Copy)]
struct Summary {
    runs: u64,
    found: usize,
    success: bool,
}

/// Runs `n_trials` independent trials. Trial `t` draws from the stream
/// `(master_seed, t)` and results are folded in trial order, so the output
/// does not depend on the thread pool.
pub fn run_trials(
    problem: &ProblemInstance,
    strategy: &Strategy,
    sampler: &Sampler,
    n_trials: u64,
    master_seed: u64,
) -> Result<TrialStats> {
    if n_trials == 0 {
        return Err(Error::InvalidRange("n_trials must be at least 1".into()));
    }
    let summaries = (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_stream(master_seed, t);
            execute_trial(problem, sampler, strategy, &mut rng).map(|o| Summary {
                runs: o.runs_used,
                found: o.found_order.len(),
                success: o.success,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let m = problem.n_marked();
    let mut reached = vec![0u64; m];
    let mut succeeded = vec![0u64; m];
    let mut total_runs = 0u64;
    let mut total_runs_sq = 0f64;
    let mut successes = 0u64;
    for s in &summaries {
        let steps_reached = if s.success { m } else { s.found + 1 };
        for r in &mut reached[..steps_reached] {
            *r += 1;
        }
        for c in &mut succeeded[..s.found] {
            *c += 1;
        }
        total_runs += s.runs;
        total_runs_sq += (s.runs as f64).powi(2);
        successes += s.success as u64;
    }

    let n = n_trials as f64;
    let mean_runs = total_runs as f64 / n;
    let var = if n_trials > 1 {
        ((total_runs_sq - n * mean_runs * mean_runs) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let overall = successes as f64 / n;
    let per_step = (0..m)
        .map(|i| {
            let rate = if reached[i] == 0 {
                0.0
            } else {
                succeeded[i] as f64 / reached[i] as f64
            };
            StepRate {
                step: i + 1,
                reached: reached[i],
                succeeded: succeeded[i],
                rate,
                std_error: binomial_std_error(rate, reached[i]),
            }
        })
        .collect();
    let queries_per_run = sampler.queries_per_run();
    Ok(TrialStats {
        n_trials,
        master_seed,
        queries_per_run,
        per_step_success_rate: per_step,
        mean_runs,
        runs_std_error: (var / n).sqrt(),
        mean_queries: mean_runs * queries_per_run as f64,
        overall_success_rate: overall,
        overall_std_error: binomial_std_error(overall, n_trials),
    })
}

/// Upper 0.001 quantiles of the chi-square distribution, dof 1..=64.
const CHI_SQUARE_CRITICAL_0_001: [f64; 64] = [
    10.827566170662733, 13.815510557964274, 16.26623619623813, 18.466826952903173,
    20.515005652432876, 22.457744484825323, 24.321886347856854, 26.124481558376143,
    27.877164871256575, 29.58829844507442, 31.26413362023999, 32.90949040736021,
    34.52817897487089, 36.12327368039814, 37.69729821835383, 39.25235479076848,
    40.79021670690253, 42.31239633167997, 43.82019596451753, 45.31474661812587,
    46.7970380415613, 48.26794229083519, 49.72823246643151, 51.17859777737739,
    52.61965577617283, 54.051962388576655, 55.47602020574521, 56.892285393353625,
    58.30117348979492, 59.703064304429944, 61.09830608105814, 62.487219057088495,
    63.87009852234495, 65.24721746094242, 66.61882884370104, 67.98516762602424,
    69.3464524962412, 70.70288741150503, 72.0546629519878, 73.40195751899103,
    74.74493839842374, 76.08376270770003, 77.41857824131394, 78.74952422804303,
    80.07673201081901, 81.40032565871002, 82.72042251912403, 84.0371337172235,
    85.350564608593, 86.66081519040317, 87.96798047562868, 89.27215083430448,
    90.57341230529862, 91.8718468816601, 93.16753277222854, 94.46054464187806,
    95.75095383248951, 97.03882856650873, 98.32423413474163, 99.60723306984946,
    100.88788530685825, 102.1662483318488, 103.44237731987324, 104.71632526304059,
];

/// Critical value at significance 0.001. Beyond the table the Wilson-Hilferty
/// approximation is used (relative error well under 1% at dof > 64).
pub fn chi_square_critical_0_001(dof: usize) -> f64 {
    match dof {
        0 => f64::NAN,
        1..=64 => CHI_SQUARE_CRITICAL_0_001[dof - 1],
        _ => {
            const Z_0_999: f64 = 3.090232306167813;
            let k = dof as f64;
            let h = 2.0 / (9.0 * k);
            k * (1.0 - h + Z_0_999 * h.sqrt()).powi(3)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub pass: bool,
}

/// Pearson goodness-of-fit against equal expected counts, at significance 0.001.
pub fn chi_square_uniformity(counts: &[u64]) -> Result<ChiSquareResult> {
    let k = counts.len();
    if k < 2 {
        return Err(Error::ChiSquareInput("need at least two categories".into()));
    }
    let total: u64 = counts.iter().sum();
    if total < 5 * k as u64 {
        return Err(Error::ChiSquareInput(format!(
            "total count {total} is below 5 per category ({k} categories)"
        )));
    }
    let expected = total as f64 / k as f64;
    let statistic = counts
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let dof = k - 1;
    let critical = chi_square_critical_0_001(dof);
    Ok(ChiSquareResult {
        statistic,
        dof,
        critical,
        pass: statistic < critical,
    })
}

/// Closed-form budget against simulated behaviour for one problem, using the
/// ideal sampler under the per-step budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormComparison {
    pub r_real: f64,
    pub budget_total: u64,
    pub empirical_mean_runs: f64,
    pub empirical_success_rate: f64,
    /// Smallest per-step success rate over steps 2..=m (1 when m = 1).
    pub min_step_success_rate: f64,
    /// Unconstrained expected runs, `sum_i m / (m - i + 1)`.
    pub expected_runs_unbounded: f64,
}

pub fn empirical_vs_closed_form(
    problem: &ProblemInstance,
    n_trials: u64,
    master_seed: u64,
) -> Result<ClosedFormComparison> {
    let params = derive_long_params(problem);
    let plan = build_plan(problem, &params)?;
    let budget_total = plan.total_runs_budget;
    let stats = run_trials(
        problem,
        &Strategy::Budgeted(plan),
        &Sampler::ideal(problem),
        n_trials,
        master_seed,
    )?;
    let m = problem.n_marked();
    let min_step_success_rate = stats
        .per_step_success_rate
        .iter()
        .skip(1)
        .map(|s| s.rate)
        .fold(1.0, f64::min);
    Ok(ClosedFormComparison {
        r_real: total_runs_closed_form(m, problem.delta())?,
        budget_total,
        empirical_mean_runs: stats.mean_runs,
        empirical_success_rate: stats.overall_success_rate,
        min_step_success_rate,
        expected_runs_unbounded: (1..=m).map(|i| m as f64 / (m - i + 1) as f64).sum(),
    })
}

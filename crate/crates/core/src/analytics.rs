//! Closed-form run and query totals for full recall, the figure curves, and
//! the duality-computer query count.
//!
//! The expected-case run total is
//!
//! ```text
//! r(m, delta) = 1 + sum_{k=1}^{m-1} ln(1/delta) / ln(m/k)
//!             = 1 + ln(1/delta) * C(m),   C(m) = sum_{k=1}^{m-1} 1 / ln(m/k)
//! ```
//!
//! and the query total multiplies it by the exact per-run iteration count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::driver::StepPlan;
use crate::error::{Error, Result};
use crate::problem::check_delta;
use crate::search::LongParams;
use crate::sum::NeumaierSum;

/// `C(m) = sum_{k=1}^{m-1} 1 / ln(m/k)`.
///
/// Terms grow with `k` (the last one is about `m`), so they are accumulated
/// in ascending `k` with compensation.
pub fn inverse_log_ratio_sum(m: usize) -> f64 {
    (1..m)
        .map(|k| 1.0 / log_ratio(m, k))
        .collect::<NeumaierSum>()
        .value()
}

/// `ln(m/k)`, switching to `ln_1p((m-k)/k)` when `k` is close to `m`.
fn log_ratio(m: usize, k: usize) -> f64 {
    if 2 * k <= m {
        (m as f64 / k as f64).ln()
    } else {
        ((m - k) as f64 / k as f64).ln_1p()
    }
}

fn runs_from_sum(log_inv_delta: f64, c: f64) -> f64 {
    1.0 + log_inv_delta * c
}

/// Total runs `r(m, delta)`; independent of `N`.
pub fn total_runs_closed_form(m: usize, delta: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidProblem("m must be positive".into()));
    }
    check_delta(delta)?;
    Ok(runs_from_sum(-delta.ln(), inverse_log_ratio_sum(m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryTotals {
    pub r_real: f64,
    pub r_integer: u64,
    pub queries_per_run: u64,
    pub q_real: f64,
    pub q_integer: u64,
}

/// Real and integerized query totals: runs times `J + 1`.
pub fn total_queries_closed_form(m: usize, n_states: usize, delta: f64) -> Result<QueryTotals> {
    let params = LongParams::for_counts(n_states, m)?;
    let r_real = total_runs_closed_form(m, delta)?;
    let plan = StepPlan::for_counts(m, delta, params.iterations)?;
    Ok(QueryTotals {
        r_real,
        r_integer: plan.total_runs_budget,
        queries_per_run: params.iterations,
        q_real: r_real * params.iterations as f64,
        q_integer: plan.total_queries_budget,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub f: f64,
}

/// `f(m)` at `m_min, m_min + stride, ...`, always ending at `m_max`.
pub fn f_of_m_curve(delta: f64, m_min: usize, m_max: usize, stride: usize) -> Result<Vec<CurvePoint>> {
    check_delta(delta)?;
    if m_min == 0 || m_min > m_max {
        return Err(Error::InvalidRange(format!(
            "need 1 <= m_min <= m_max, got {m_min}..{m_max}"
        )));
    }
    if stride == 0 {
        return Err(Error::InvalidRange("stride must be positive".into()));
    }
    let mut ms: Vec<usize> = (m_min..=m_max).step_by(stride).collect();
    if ms.last() != Some(&m_max) {
        ms.push(m_max);
    }
    // Points are independent; par_iter keeps input order.
    ms.into_par_iter()
        .map(|m| {
            Ok(CurvePoint {
                x: m as f64,
                f: total_runs_closed_form(m, delta)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// `f(delta)` on `n_points` values between `delta_min` and `delta_max`.
///
/// `C(m)` is computed once; every point is `1 + ln(1/delta) * C(m)`, which is
/// the same arithmetic as [`total_runs_closed_form`].
pub fn f_of_delta_curve(
    m: usize,
    delta_min: f64,
    delta_max: f64,
    n_points: usize,
    spacing: Spacing,
) -> Result<Vec<CurvePoint>> {
    check_delta(delta_min)?;
    check_delta(delta_max)?;
    if m == 0 || delta_min > delta_max || n_points == 0 {
        return Err(Error::InvalidRange(format!(
            "need m >= 1, delta_min <= delta_max and n_points >= 1, got m={m}, \
             {delta_min}..{delta_max}, n_points={n_points}"
        )));
    }
    let c = inverse_log_ratio_sum(m);
    let at = |t: f64| match spacing {
        Spacing::Linear => delta_min + t * (delta_max - delta_min),
        Spacing::Log => (delta_min.ln() + t * (delta_max.ln() - delta_min.ln())).exp(),
    };
    Ok((0..n_points)
        .map(|i| {
            let delta = if i == 0 {
                delta_min
            } else if i == n_points - 1 {
                delta_max
            } else {
                at(i as f64 / (n_points - 1) as f64)
            };
            CurvePoint {
                x: delta,
                f: runs_from_sum(-delta.ln(), c),
            }
        })
        .collect())
}

/// Queries to recall all `m` states on a duality computer: `m log2(N/m)`.
pub fn duality_queries(m: usize, n_states: usize) -> Result<f64> {
    if m == 0 || m > n_states {
        return Err(Error::InvalidProblem(format!(
            "need 1 <= m <= N, got m={m}, N={n_states}"
        )));
    }
    if m == n_states {
        return Ok(0.0);
    }
    Ok(m as f64 * (n_states as f64 / m as f64).log2())
}

/// Base of the logarithm used by [`duality_queries`].
pub const DUALITY_LOG_BASE: u32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub m: usize,
    #[serde(rename = "N")]
    pub n_states: usize,
    pub delta: f64,
    pub r_real: f64,
    pub r_integer: u64,
    pub queries_per_run: u64,
    pub q_real: f64,
    pub q_integer: u64,
    pub q_duality: f64,
    /// `q_real / q_duality`; absent when the duality count is zero.
    pub ratio: Option<f64>,
    pub duality_log_base: u32,
}

pub fn compare_models(m: usize, n_states: usize, delta: f64) -> Result<ComplexityReport> {
    let totals = total_queries_closed_form(m, n_states, delta)?;
    let q_duality = duality_queries(m, n_states)?;
    Ok(ComplexityReport {
        m,
        n_states,
        delta,
        r_real: totals.r_real,
        r_integer: totals.r_integer,
        queries_per_run: totals.queries_per_run,
        q_real: totals.q_real,
        q_integer: totals.q_integer,
        q_duality,
        ratio: (q_duality > 0.0).then(|| totals.q_real / q_duality),
        duality_log_base: DUALITY_LOG_BASE,
    })
}

/// [`compare_models`] for every `m` in `m_min..=m_max`.
pub fn compare_table(
    n_states: usize,
    delta: f64,
    m_min: usize,
    m_max: usize,
) -> Result<Vec<ComplexityReport>> {
    if m_min == 0 || m_min > m_max || m_max > n_states {
        return Err(Error::InvalidRange(format!(
            "need 1 <= m_min <= m_max <= N, got {m_min}..{m_max} with N={n_states}"
        )));
    }
    (m_min..=m_max)
        .into_par_iter()
        .map(|m| compare_models(m, n_states, delta))
        .collect()
}

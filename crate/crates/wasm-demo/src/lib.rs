//! Browser bindings for the full-recall search toolkit.
//!
//! Three interactive views are exported: the run-total curve against the
//! number of marked states, the same total against the tolerance, and the
//! per-iteration success probability of one exact search next to plain
//! Grover iteration. The page in `www/` draws them on canvases.

use std::f64::consts::PI;

use recall_search::analytics::{compare_models, f_of_delta_curve, f_of_m_curve, CurvePoint, Spacing};
use recall_search::search::{success_trajectory, LongParams};
use recall_search::ProblemInstance;
use wasm_bindgen::prelude::*;

fn flatten(points: &[CurvePoint]) -> Vec<f64> {
    points.iter().flat_map(|p| [p.x, p.f]).collect()
}

pub fn runs_vs_marked(delta: f64, m_max: usize, stride: usize) -> Result<Vec<f64>, String> {
    f_of_m_curve(delta, 1, m_max, stride.max(1))
        .map(|c| flatten(&c))
        .map_err(|e| e.to_string())
}

pub fn runs_vs_delta(m: usize, delta_min: f64, delta_max: f64, points: usize, log: bool) -> Result<Vec<f64>, String> {
    let spacing = if log { Spacing::Log } else { Spacing::Linear };
    f_of_delta_curve(m, delta_min, delta_max, points, spacing)
        .map(|c| flatten(&c))
        .map_err(|e| e.to_string())
}

/// Success probability per iteration for the matched phase and for `phi = pi`.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Amplification {
    exact: Vec<f64>,
    grover: Vec<f64>,
    iterations: u32,
    phi: f64,
}

#[wasm_bindgen]
impl Amplification {
    /// Matched-phase probabilities after 0..=iterations iterations.
    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.exact.clone()
    }

    /// Standard Grover probabilities over twice as many iterations.
    #[wasm_bindgen(getter)]
    pub fn grover(&self) -> Vec<f64> {
        self.grover.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> u32 {
        self.iterations
    }

    #[wasm_bindgen(getter)]
    pub fn phi(&self) -> f64 {
        self.phi
    }
}

pub fn amplification_for(n: usize, m: usize) -> Result<Amplification, String> {
    let problem = ProblemInstance::with_marked_count(n, m, 0.5).map_err(|e| e.to_string())?;
    let params = LongParams::for_counts(n, m).map_err(|e| e.to_string())?;
    Ok(Amplification {
        exact: success_trajectory(&problem, params.phi, params.iterations),
        grover: success_trajectory(&problem, PI, 2 * params.iterations.max(1)),
        iterations: params.iterations as u32,
        phi: params.phi,
    })
}

#[wasm_bindgen(js_name = runsVsMarked)]
pub fn runs_vs_marked_js(delta: f64, m_max: usize, stride: usize) -> Result<Vec<f64>, JsError> {
    runs_vs_marked(delta, m_max, stride).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runsVsDelta)]
pub fn runs_vs_delta_js(
    m: usize,
    delta_min: f64,
    delta_max: f64,
    points: usize,
    log: bool,
) -> Result<Vec<f64>, JsError> {
    runs_vs_delta(m, delta_min, delta_max, points, log).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn amplification(n: usize, m: usize) -> Result<Amplification, JsError> {
    amplification_for(n, m).map_err(|e| JsError::new(&e))
}

/// Complexity report for `(m, N, delta)` as a JSON string.
#[wasm_bindgen]
pub fn report(m: usize, n: usize, delta: f64) -> Result<String, JsError> {
    compare_models(m, n, delta)
        .map_err(|e| e.to_string())
        .and_then(|r| serde_json::to_string(&r).map_err(|e| e.to_string()))
        .map_err(|e| JsError::new(&e))
}

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{CommandKind, OutputFormat, Preset, RunConfig, SamplerKind, StrategyKind};
use super::emit;
use super::{EXIT_CHECK_FAILED, EXIT_OK, EXIT_RUNTIME};
use crate::analytics::{
    compare_models, f_of_delta_curve, f_of_m_curve, total_runs_closed_form, ComplexityReport,
    CurvePoint, Spacing,
};
use crate::driver::{build_plan, step_delta, Sampler, Strategy};
use crate::montecarlo::{run_trials, TrialStats};
use crate::search::{derive_long_params, exactness_survey, ExactnessCase};

/// Largest tolerated `|1 - p_success|` in `quantum-check`.
pub const EXACTNESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    CheckFailed,
}

pub fn run_command(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::CheckFailed) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Runs the configured command, on a dedicated pool when `threads` is set.
pub fn execute(config: &RunConfig) -> Result<Outcome, CommandError> {
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| dispatch(config)),
        None => dispatch(config),
    }
}

fn dispatch(config: &RunConfig) -> Result<Outcome, CommandError> {
    match config.command {
        CommandKind::Analyze => analyze(config),
        CommandKind::Curves => curves(config),
        CommandKind::Simulate => simulate(config),
        CommandKind::QuantumCheck => quantum_check(config),
        CommandKind::Compare => compare(config),
    }
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CommandError> {
    match path {
        Some(path) => {
            let io = |source| CommandError::Io {
                path: path.to_path_buf(),
                source,
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(io)?;
            }
            std::fs::write(path, contents).map_err(io)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CommandError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn report_for(config: &RunConfig, m: usize) -> Result<ComplexityReport, CommandError> {
    let delta = step_delta(config.delta, m, config.delta_mode)?;
    Ok(compare_models(m, config.n_states, delta)?)
}

fn analyze(config: &RunConfig) -> Result<Outcome, CommandError> {
    let report = report_for(config, config.n_marked)?;
    let text = match config.output_format {
        OutputFormat::Json => emit::json_document(config, &report)?,
        OutputFormat::Csv => emit::compare_csv(config, std::slice::from_ref(&report)),
    };
    write_output(config.output_path.as_deref(), &text)?;
    Ok(Outcome::Done)
}

fn compare(config: &RunConfig) -> Result<Outcome, CommandError> {
    let (lo, hi) = config.m_range;
    let rows = (lo..=hi)
        .into_par_iter()
        .map(|m| report_for(config, m))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match config.output_format {
        OutputFormat::Csv => emit::compare_csv(config, &rows),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Rows<'a> {
                rows: &'a [ComplexityReport],
            }
            emit::json_document(config, &Rows { rows: &rows })?
        }
    };
    write_output(config.output_path.as_deref(), &text)?;
    Ok(Outcome::Done)
}

/// Curve data for one figure preset.
pub fn preset_curve(config: &RunConfig, preset: Preset) -> crate::Result<Vec<CurvePoint>> {
    match preset {
        Preset::Fig1 => f_of_m_curve(0.01, 1, 100_000, config.stride.unwrap_or(100)),
        Preset::Fig2 => f_of_m_curve(0.01, 1, 200, config.stride.unwrap_or(1)),
        Preset::Fig3 => f_of_delta_curve(1000, 1e-5, 0.5, config.points, Spacing::Log),
        Preset::Fig4 => f_of_delta_curve(1000, 0.01, 0.5, config.points, Spacing::Linear),
        Preset::All => unreachable!("expanded by the caller"),
    }
}

fn curves(config: &RunConfig) -> Result<Outcome, CommandError> {
    let render = |preset: Preset| -> Result<String, CommandError> {
        let points = preset_curve(config, preset)?;
        Ok(match config.output_format {
            OutputFormat::Csv => emit::curve_csv(config, &points),
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Curve<'a> {
                    preset: &'a str,
                    points: &'a [CurvePoint],
                }
                emit::json_document(
                    config,
                    &Curve {
                        preset: preset.name(),
                        points: &points,
                    },
                )?
            }
        })
    };
    match config.preset {
        Preset::All => {
            // `--output` names a directory here.
            let dir = config.output_path.clone().unwrap_or_else(|| PathBuf::from("."));
            let ext = match config.output_format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            };
            for preset in Preset::FIGURES {
                let path = dir.join(format!("{}.{ext}", preset.name()));
                write_output(Some(&path), &render(preset)?)?;
            }
        }
        preset => write_output(config.output_path.as_deref(), &render(preset)?)?,
    }
    Ok(Outcome::Done)
}

#[derive(Debug, Serialize)]
struct SimulationReport {
    #[serde(flatten)]
    stats: TrialStats,
    delta_step: f64,
    /// Closed-form total runs for the same `(m, delta_step)`.
    r_real: f64,
    /// Per-step budgets; absent for the unbounded strategy.
    budgets: Option<Vec<u64>>,
}

fn simulate(config: &RunConfig) -> Result<Outcome, CommandError> {
    if config.output_format != OutputFormat::Json {
        return Err(CommandError::Unsupported(
            "simulate emits JSON only; use --format json".into(),
        ));
    }
    let delta = step_delta(config.delta, config.n_marked, config.delta_mode)?;
    let problem = config.problem(delta)?;
    let params = derive_long_params(&problem);
    let sampler = match config.sampler {
        SamplerKind::Ideal => Sampler::ideal(&problem),
        SamplerKind::Quantum => Sampler::quantum(&problem, config.representation),
    };
    let (strategy, budgets) = match config.strategy {
        StrategyKind::Budgeted => {
            let plan = build_plan(&problem, &params)?;
            let budgets = plan.budgets.clone();
            (Strategy::Budgeted(plan), Some(budgets))
        }
        StrategyKind::Unbounded => (Strategy::Unbounded, None),
    };
    let stats = run_trials(&problem, &strategy, &sampler, config.trials, config.master_seed)?;
    let report = SimulationReport {
        stats,
        delta_step: delta,
        r_real: total_runs_closed_form(problem.n_marked(), delta)?,
        budgets,
    };
    write_output(
        config.output_path.as_deref(),
        &emit::json_document(config, &report)?,
    )?;
    Ok(Outcome::Done)
}

#[derive(Debug, Serialize)]
struct QuantumCheckReport {
    max_n: usize,
    cases: usize,
    tolerance: f64,
    max_deviation: f64,
    max_representation_gap: f64,
    max_symmetry_spread: f64,
    max_norm_drift: f64,
    worst_case: Option<ExactnessCase>,
    pass: bool,
}

fn quantum_check(config: &RunConfig) -> Result<Outcome, CommandError> {
    if config.output_format != OutputFormat::Json {
        return Err(CommandError::Unsupported(
            "quantum-check emits JSON only; use --format json".into(),
        ));
    }
    let survey = exactness_survey(config.max_n)?;
    let fold = |f: fn(&ExactnessCase) -> f64| survey.iter().map(f).fold(0.0, f64::max);
    let max_deviation = fold(ExactnessCase::deviation);
    let worst_case = survey
        .iter()
        .copied()
        .max_by(|a, b| a.deviation().total_cmp(&b.deviation()));
    let report = QuantumCheckReport {
        max_n: config.max_n,
        cases: survey.len(),
        tolerance: EXACTNESS_TOLERANCE,
        max_deviation,
        max_representation_gap: fold(|c| (c.success_full - c.success_subspace).abs()),
        max_symmetry_spread: fold(|c| c.symmetry_spread),
        max_norm_drift: fold(|c| c.norm_drift),
        worst_case,
        pass: !survey.is_empty() && max_deviation <= EXACTNESS_TOLERANCE,
    };
    write_output(
        config.output_path.as_deref(),
        &emit::json_document(config, &report)?,
    )?;
    Ok(if report.pass {
        Outcome::Done
    } else {
        Outcome::CheckFailed
    })
}

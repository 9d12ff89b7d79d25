use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),

    #[error("step index {step} out of range 1..={marked}")]
    StepOutOfRange { step: usize, marked: usize },

    #[error(
        "parameters were derived for N={params_states}, m={params_marked} \
         but the problem has N={states}, m={marked}"
    )]
    ParamsMismatch {
        params_states: usize,
        params_marked: usize,
        states: usize,
        marked: usize,
    },

    #[error("sampler does not match the problem: {0}")]
    SamplerMismatch(String),

    #[error("chi-square input rejected: {0}")]
    ChiSquareInput(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),
}

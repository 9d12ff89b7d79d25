//! Command-line surface: configuration, command dispatch and the CSV/JSON
//! emitters.
//!
//! Exit codes: 0 success, 1 runtime or I/O failure, 2 invalid configuration,
//! 3 acceptance-check failure (`quantum-check`).

mod commands;
mod config;
pub mod emit;

pub use commands::{execute, run_command, CommandError, Outcome};
pub use config::{
    parse_config, parse_config_text, parse_config_with_env, read_config_file, CommandKind,
    ConfigError, OutputFormat, Preset, RunConfig, SamplerKind, StrategyKind,
    FULL_STATEVECTOR_LIMIT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_config(argv) {
        Ok(config) => run_command(&config),
        Err(ConfigError::Args(e)) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};

use crate::driver::DeltaMode;
use crate::problem::ProblemInstance;
use crate::search::Representation;

/// Largest `N` for which the full statevector is the default representation.
pub const FULL_STATEVECTOR_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Analyze,
    Curves,
    Simulate,
    QuantumCheck,
    Compare,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Analyze => "analyze",
            CommandKind::Curves => "curves",
            CommandKind::Simulate => "simulate",
            CommandKind::QuantumCheck => "quantum-check",
            CommandKind::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Budgeted,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Ideal,
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    All,
}

impl Preset {
    pub const FIGURES: [Preset; 4] = [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::All => "all",
        }
    }
}

#[derive(Debug)]
pub enum ConfigError {
    /// Usage errors and `--help` / `--version` from the argument parser.
    Args(clap::Error),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Args(e) => write!(f, "{e}"),
            ConfigError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

/// Full-recall quantum search simulator and query-complexity calculator.
#[derive(Debug, Parser)]
#[command(name = "recall", version)]
struct Args {
    #[arg(value_enum)]
    command: CommandKind,
    /// Flat key=value file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Database size N.
    #[arg(long)]
    n: Option<String>,
    /// Number of marked states m.
    #[arg(long)]
    m: Option<String>,
    /// Explicit comma-separated marked indices (overrides --m).
    #[arg(long)]
    marked: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    /// per-step | overall
    #[arg(long)]
    delta_mode: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Master seed; defaults to $RECALL_SEED, then 0.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    output: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// budgeted | unbounded
    #[arg(long)]
    strategy: Option<String>,
    /// ideal | quantum
    #[arg(long)]
    sampler: Option<String>,
    /// full | subspace | auto
    #[arg(long)]
    representation: Option<String>,
    /// fig1 | fig2 | fig3 | fig4 | all
    #[arg(long)]
    preset: Option<String>,
    /// Sampling stride in m for the f(m) presets.
    #[arg(long)]
    stride: Option<String>,
    /// Number of delta values for the f(delta) presets.
    #[arg(long)]
    points: Option<String>,
    /// Inclusive m range for compare, as LO:HI.
    #[arg(long)]
    m_range: Option<String>,
    /// Largest N surveyed by quantum-check.
    #[arg(long)]
    max_n: Option<String>,
    /// Worker threads (default: all cores). Does not affect output.
    #[arg(long)]
    threads: Option<String>,
}

const KEYS: [&str; 18] = [
    "n",
    "m",
    "marked",
    "delta",
    "delta_mode",
    "trials",
    "seed",
    "output",
    "format",
    "strategy",
    "sampler",
    "representation",
    "preset",
    "stride",
    "points",
    "m_range",
    "max_n",
    "threads",
];

impl Args {
    fn flag_values(&self) -> [(&'static str, &Option<String>); 18] {
        [
            ("n", &self.n),
            ("m", &self.m),
            ("marked", &self.marked),
            ("delta", &self.delta),
            ("delta_mode", &self.delta_mode),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("output", &self.output),
            ("format", &self.format),
            ("strategy", &self.strategy),
            ("sampler", &self.sampler),
            ("representation", &self.representation),
            ("preset", &self.preset),
            ("stride", &self.stride),
            ("points", &self.points),
            ("m_range", &self.m_range),
            ("max_n", &self.max_n),
            ("threads", &self.threads),
        ]
    }
}

/// Resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n_states: usize,
    pub n_marked: usize,
    pub marked: Option<Vec<usize>>,
    pub delta: f64,
    pub delta_mode: DeltaMode,
    pub trials: u64,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub strategy: StrategyKind,
    pub sampler: SamplerKind,
    pub representation: Representation,
    pub preset: Preset,
    /// `None` means the preset's own stride.
    pub stride: Option<usize>,
    pub points: usize,
    pub m_range: (usize, usize),
    pub max_n: usize,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// The configured problem; explicit marked indices win over `n_marked`.
    pub fn problem(&self, delta: f64) -> crate::Result<ProblemInstance> {
        match &self.marked {
            Some(list) => ProblemInstance::new(self.n_states, list.clone(), delta),
            None => ProblemInstance::with_marked_count(self.n_states, self.n_marked, delta),
        }
    }

    /// One-line description of every setting that can influence output.
    /// Output path and thread count are left out so that runs differing only
    /// in those produce identical bytes.
    pub fn describe(&self) -> String {
        let marked = match &self.marked {
            Some(list) => list.iter().map(usize::to_string).collect::<Vec<_>>().join(";"),
            None => "spread".into(),
        };
        let stride = self
            .stride
            .map_or_else(|| "preset".to_string(), |s| s.to_string());
        format!(
            "command={} n={} m={} marked={} delta={} delta_mode={} trials={} seed={} \
             format={} strategy={} sampler={} representation={} preset={} stride={} \
             points={} m_range={}:{} max_n={}",
            self.command.name(),
            self.n_states,
            self.n_marked,
            marked,
            self.delta,
            match self.delta_mode {
                DeltaMode::PerStep => "per-step",
                DeltaMode::Overall => "overall",
            },
            self.trials,
            self.master_seed,
            match self.output_format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            },
            match self.strategy {
                StrategyKind::Budgeted => "budgeted",
                StrategyKind::Unbounded => "unbounded",
            },
            match self.sampler {
                SamplerKind::Ideal => "ideal",
                SamplerKind::Quantum => "quantum",
            },
            match self.representation {
                Representation::Full => "full",
                Representation::Subspace => "subspace",
            },
            self.preset.name(),
            stride,
            self.points,
            self.m_range.0,
            self.m_range.1,
            self.max_n,
        )
    }
}

/// Parses `argv` (including the program name), reading `$RECALL_SEED` as the
/// fallback seed.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_config_with_env(argv, std::env::var("RECALL_SEED").ok())
}

pub fn parse_config_with_env<I, T>(argv: I, env_seed: Option<String>) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(ConfigError::Args)?;
    let mut values = match &args.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    for (key, value) in args.flag_values() {
        if let Some(v) = value {
            values.insert(key.to_string(), v.clone());
        }
    }
    if !values.contains_key("seed") {
        if let Some(s) = env_seed {
            values.insert("seed".into(), s);
        }
    }
    resolve(args.command, &values)
}

/// Reads a flat `key=value` file. Blank lines and `#` comments are skipped;
/// keys may use `-` or `_`.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(invalid(format!("config line {}: unknown key `{key}`", lineno + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

fn flag(key: &str) -> String {
    format!("--{}", key.replace('_', "-"))
}

fn get<T: FromStr>(values: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    match values.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|e| invalid(format!("invalid value `{raw}` for {} ({key}): {e}", flag(key)))),
    }
}

fn get_choice<T: Copy>(
    values: &BTreeMap<String, String>,
    key: &str,
    default: T,
    choices: &[(&str, T)],
) -> Result<T, ConfigError> {
    let Some(raw) = values.get(key) else {
        return Ok(default);
    };
    choices
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(raw))
        .map(|&(_, v)| v)
        .ok_or_else(|| {
            let names: Vec<&str> = choices.iter().map(|(n, _)| *n).collect();
            invalid(format!(
                "invalid value `{raw}` for {} ({key}): expected one of {}",
                flag(key),
                names.join(", ")
            ))
        })
}

fn resolve(command: CommandKind, values: &BTreeMap<String, String>) -> Result<RunConfig, ConfigError> {
    let n_states: usize = get(values, "n", 1024)?;
    if n_states == 0 {
        return Err(invalid("--n (n) must be at least 1"));
    }
    let marked = match values.get("marked") {
        None => None,
        Some(raw) => Some(
            raw.split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| invalid(format!("invalid value `{raw}` for --marked (marked): {e}")))?,
        ),
    };
    let n_marked = match &marked {
        Some(list) => list.len(),
        None => get(values, "m", 1)?,
    };
    if n_marked == 0 || n_marked > n_states {
        return Err(invalid(format!(
            "--m (m) must satisfy 1 <= m <= N, got m={n_marked}, N={n_states}"
        )));
    }
    let delta: f64 = get(values, "delta", 0.01)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!(
            "--delta (delta) must lie in the open interval (0, 1), got {delta}"
        )));
    }
    let default_format = match command {
        CommandKind::Curves | CommandKind::Compare => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    let output_format = get_choice(
        values,
        "format",
        default_format,
        &[("csv", OutputFormat::Csv), ("json", OutputFormat::Json)],
    )?;
    let representation = match values.get("representation").map(|s| s.to_ascii_lowercase()) {
        None => None,
        Some(s) if s == "auto" => None,
        Some(_) => Some(get_choice(
            values,
            "representation",
            Representation::Full,
            &[("full", Representation::Full), ("subspace", Representation::Subspace)],
        )?),
    }
    .unwrap_or(if n_states <= FULL_STATEVECTOR_LIMIT {
        Representation::Full
    } else {
        Representation::Subspace
    });

    let m_range = match values.get("m_range") {
        None => (1, n_states.min(1024)),
        Some(raw) => {
            let bad = || invalid(format!("invalid value `{raw}` for --m-range (m_range): expected LO:HI"));
            let (lo, hi) = raw.split_once(':').ok_or_else(bad)?;
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            (lo, hi)
        }
    };
    if m_range.0 == 0 || m_range.0 > m_range.1 || m_range.1 > n_states {
        return Err(invalid(format!(
            "--m-range (m_range) must satisfy 1 <= LO <= HI <= N, got {}:{} with N={n_states}",
            m_range.0, m_range.1
        )));
    }

    let trials: u64 = get(values, "trials", 10_000)?;
    if trials == 0 {
        return Err(invalid("--trials (trials) must be at least 1"));
    }
    let stride = match values.get("stride") {
        None => None,
        Some(_) => Some(get::<usize>(values, "stride", 1)?),
    };
    if stride == Some(0) {
        return Err(invalid("--stride (stride) must be at least 1"));
    }
    let points: usize = get(values, "points", 200)?;
    if points < 2 {
        return Err(invalid("--points (points) must be at least 2"));
    }
    let threads = match values.get("threads") {
        None => None,
        Some(_) => Some(get::<usize>(values, "threads", 1)?),
    };
    if threads == Some(0) {
        return Err(invalid("--threads (threads) must be at least 1"));
    }

    Ok(RunConfig {
        command,
        n_states,
        n_marked,
        marked,
        delta,
        delta_mode: get_choice(
            values,
            "delta_mode",
            DeltaMode::PerStep,
            &[("per-step", DeltaMode::PerStep), ("overall", DeltaMode::Overall)],
        )?,
        trials,
        master_seed: get(values, "seed", 0)?,
        output_path: values.get("output").map(PathBuf::from),
        output_format,
        strategy: get_choice(
            values,
            "strategy",
            StrategyKind::Budgeted,
            &[("budgeted", StrategyKind::Budgeted), ("unbounded", StrategyKind::Unbounded)],
        )?,
        sampler: get_choice(
            values,
            "sampler",
            SamplerKind::Ideal,
            &[("ideal", SamplerKind::Ideal), ("quantum", SamplerKind::Quantum)],
        )?,
        representation,
        preset: get_choice(
            values,
            "preset",
            Preset::All,
            &[
                ("fig1", Preset::Fig1),
                ("fig2", Preset::Fig2),
                ("fig3", Preset::Fig3),
                ("fig4", Preset::Fig4),
                ("all", Preset::All),
            ],
        )?,
        stride,
        points,
        m_range,
        max_n: get(values, "max_n", FULL_STATEVECTOR_LIMIT)?,
        threads,
    })
}

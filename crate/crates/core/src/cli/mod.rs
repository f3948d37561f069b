//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O, 2 usage or parse error, 3 decode failure,
//! 4 verification failure.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::instance::Mode;
use crate::learners::LearnerKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DECODE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "bimodal-hs",
    version,
    about = "Bimodal halfspace-intersection instances and learners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a planted dataset and its witness.
    Gen(GenArgs),
    /// Run the multimodal decoder on a dataset.
    Decode(DecodeArgs),
    /// Run a unimodal baseline on the x side of a dataset.
    Baseline(BaselineArgs),
    /// Re-check a dataset against its witness.
    Verify(VerifyArgs),
    /// Run an experiment grid or a runtime scaling study.
    Bench(BenchArgs),
    /// Decoder test risk against the generalization bound over an m grid.
    BoundCurve(BoundCurveArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    mode: Mode,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target fraction of positive labels.
    #[arg(long, default_value_t = 0.25)]
    pos: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    witness: PathBuf,
    /// key=value file supplying further flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    #[arg(long)]
    data: PathBuf,
    /// Compare recovered directions against this witness.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    #[arg(long)]
    learner: LearnerKind,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Number of halfspaces (1 or 2; the perceptron always fits one).
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    #[arg(long, default_value_t = 100)]
    passes: usize,
    /// Seed for local search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Brute-force time limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    witness: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Grid as `n=<list>` and `m=<list>`, where m entries are sizes or
    /// multiples of the ambient dimension such as `10x`.
    #[arg(long, num_args = 1.., value_delimiter = ' ', default_values_t = ["n=2,4,8".to_string(), "m=10x".to_string()])]
    grid: Vec<String>,
    #[arg(long, default_value_t = Mode::Proper)]
    mode: Mode,
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    #[arg(long, value_delimiter = ',', default_value = "decoder")]
    learners: Vec<LearnerKind>,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    #[arg(long, default_value_t = 10_000)]
    n_test: usize,
    #[arg(long, default_value_t = 0.25)]
    pos: f64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Time the decoder (and brute force) instead of measuring risk.
    #[arg(long)]
    scaling: bool,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Brute-force time limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    /// Include brute force in a scaling study.
    #[arg(long)]
    with_bruteforce: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundCurveArgs {
    #[arg(long, default_value_t = Mode::Proper)]
    mode: Mode,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "50,150,500,1500,5000")]
    m: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    #[arg(long, default_value_t = 10_000)]
    n_test: usize,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0.25)]
    pos: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Io(PathBuf, std::io::Error),
    Usage(String),
    Lib(Error),
    Verify(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Io(..) => EXIT_IO,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verify(_) => EXIT_VERIFY,
            CliError::Lib(e) => match e {
                Error::DecodeFailure { .. } | Error::InsufficientRank { .. } | Error::CorruptedFingerprint { .. } => {
                    EXIT_DECODE
                }
                _ => EXIT_USAGE,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(path, e) => format!("{}: {e}", path.display()),
            CliError::Usage(m) | CliError::Verify(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            return e.code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a, out),
        Command::Decode(a) => commands::decode(a, out),
        Command::Baseline(a) => commands::baseline(a, out),
        Command::Verify(a) => commands::verify(a, out),
        Command::Bench(a) => commands::bench(a, out),
        Command::BoundCurve(a) => commands::bound_curve(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

/// Expands `--config <path>` into ordinary flags. A key also given on the
/// command line is a conflict.
fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    let mut kept = Vec::with_capacity(args.len());
    let mut i = 0;
    while i < args.len() {
        if strs[i] == "--config" {
            let p = strs
                .get(i + 1)
                .ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            if path.replace(PathBuf::from(p)).is_some() {
                return Err(CliError::Usage("--config given more than once".into()));
            }
            i += 2;
            continue;
        }
        if let Some(p) = strs[i].strip_prefix("--config=") {
            if path.replace(PathBuf::from(p)).is_some() {
                return Err(CliError::Usage("--config given more than once".into()));
            }
            i += 1;
            continue;
        }
        kept.push(args[i].clone());
        i += 1;
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(path.clone(), e))?;
    let given: Vec<String> = strs
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key=value", path.display(), no + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!("{}:{}: invalid key", path.display(), no + 1)));
        }
        if given.contains(&key) {
            return Err(CliError::Usage(format!(
                "'{key}' is set both on the command line and in {}",
                path.display()
            )));
        }
        match value {
            "true" => kept.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                kept.push(format!("--{key}").into());
                kept.extend(value.split_whitespace().map(OsString::from));
            }
        }
    }
    Ok(kept)
}

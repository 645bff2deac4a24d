//! Command-line front end: argument parsing, configuration, dispatch and
//! report emission. `main` only prints what [`execute`] returns.

pub mod commands;
pub mod config;
pub mod report;
pub mod sweep;

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Bad input: unparsable flags or files, parameter-domain violations.
pub const EXIT_INPUT: i32 = 2;
/// The two commutant solvers disagree, or a numerical kernel broke down.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<askey_hankel::Error> for CliError {
    fn from(e: askey_hankel::Error) -> Self {
        use askey_hankel::Error::*;
        let code = match e {
            Pivot(_) | DegenerateFit(_) => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "askey-hankel", version, about = "Hankel commutants of Askey-scheme Jacobi matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Scalar type: `f64`, `rational`, or a decimal digit count (default 60).
    #[arg(long, global = true)]
    pub precision: Option<String>,
    /// Truncation order of the commutation system (default 32).
    #[arg(long = "K", global = true)]
    pub k: Option<usize>,
    /// Relative singular-value threshold for the numeric nullspace.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for verify and sweep.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// JSON file with flat keys; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Add wall-clock timings to JSON reports.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    /// Family id: W, CdH, CH, J, MP, M, L, C, H or HilbertJt.
    #[arg(long)]
    pub family: Option<String>,
    /// Parameters as `name=value,...` or positional `v1,v2,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the families with their parameters and domains.
    Families {
        /// Show only this family.
        filter: Option<String>,
    },
    /// Compute the Hankel commutant of one family.
    Commutant {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Compare measured commutants with the dimension theorem on the built-in samples.
    Verify {
        /// Restrict to these clauses, e.g. `ii,vii`.
        #[arg(long, value_delimiter = ',')]
        clauses: Option<Vec<String>>,
    },
    /// Evaluate obstruction determinants, decay laws or large-n expansions.
    Obstruct {
        #[command(flatten)]
        family: FamilyArgs,
        /// delta1, delta2, delta3, D or omega.
        #[arg(long, default_value = "D")]
        quantity: String,
        /// Inclusive range `a..b` (default `0..8`; decay fits default to m = 4..64).
        #[arg(long)]
        m: Option<String>,
        #[arg(long, default_value = "2..60")]
        n: String,
        /// Constant for the omega test, e.g. `1/16`.
        #[arg(long)]
        omega: Option<String>,
        /// Fit `lim_n D(m,n)/n` against the family's decay law over the m range.
        #[arg(long)]
        decay: bool,
        /// Fit the large-n expansions of the Jacobi coefficients.
        #[arg(long, conflicts_with = "decay")]
        expansions: bool,
    },
    /// Commutation of the generalized Hilbert matrix with J_t.
    HilbertDemo {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        t: String,
        /// Order of the residual grid `0 <= m, n <= grid`.
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Evaluate a metric over a parameter grid (CSV).
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        /// `name=start..stop:step`; repeat for a product grid.
        #[arg(long, required = true, allow_hyphen_values = true)]
        vary: Vec<String>,
        #[arg(long, value_enum, default_value = "commutant-dim")]
        metric: sweep::Metric,
    },
    /// Classify the z -> infinity limit of delta(z,w) for two Laurent series.
    LaurentClassify {
        /// JSON file `{"p": [...], "q": [...], "eps": x}`.
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        w: String,
        #[arg(long, default_value_t = askey_hankel::laurent::DEFAULT_TRUNCATION)]
        truncation: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub code: i32,
    /// Lines for standard error (summaries, warnings).
    pub notes: Vec<String>,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK, notes: Vec::new() }
    }
}

/// Merged configuration: file values overridden by flags.
pub fn resolve_config(global: &GlobalArgs, family: Option<&FamilyArgs>) -> Result<RunConfig, CliError> {
    let file = match &global.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        precision: global.precision.clone(),
        k: global.k,
        tol: global.tol,
        family: family.and_then(|f| f.family.clone()),
        params: family.and_then(|f| f.params.clone()),
        out: global.out.clone(),
        format: global.format,
        jobs: global.jobs,
    };
    Ok(file.overridden_by(&flags))
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let start = Instant::now();
    let g = &cli.global;
    let mut out = match &cli.command {
        Command::Families { filter } => commands::families(&resolve_config(g, None)?, filter.as_deref()),
        Command::Commutant { family } => commands::commutant(&resolve_config(g, Some(family))?),
        Command::Verify { clauses } => commands::verify(&resolve_config(g, None)?, clauses.as_deref()),
        Command::Obstruct { family, quantity, m, n, omega, decay, expansions } => {
            let opts = commands::ObstructOptions {
                quantity,
                m: m.as_deref(),
                n,
                omega: omega.as_deref(),
                decay: *decay,
                expansions: *expansions,
            };
            commands::obstruct(&resolve_config(g, Some(family))?, &opts)
        }
        Command::HilbertDemo { t, grid } => commands::hilbert(&resolve_config(g, None)?, t, *grid),
        Command::Sweep { family, vary, metric } => sweep::run(&resolve_config(g, Some(family))?, vary, *metric),
        Command::LaurentClassify { file, eps, w, truncation, radius } => {
            let opts =
                commands::LaurentOptions { file, eps: eps.as_deref(), w, truncation: *truncation, radius: *radius };
            commands::laurent(&resolve_config(g, None)?, &opts)
        }
    }?;
    if g.timings && out.text.starts_with('{') {
        // Re-serialize with the timing block appended.
        let mut v: serde_json::Value = serde_json::from_str(&out.text).expect("commands emit valid JSON");
        v["timings"] = serde_json::json!({ "wall_seconds": start.elapsed().as_secs_f64() });
        out.text = serde_json::to_string_pretty(&v).expect("report serializes") + "\n";
    }
    Ok(out)
}

/// Where the report goes: `--out`, else the config file's `out`, else stdout.
pub fn output_path(global: &GlobalArgs) -> Result<Option<PathBuf>, CliError> {
    Ok(resolve_config(global, None)?.out)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError { code: EXIT_INPUT, message: e.to_string() })?;
    execute(&cli)
}

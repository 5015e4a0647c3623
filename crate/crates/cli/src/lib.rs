//! `rpmgeom`: verifies natural connections on Riemannian almost product
//! manifolds given by a frame algebra, a metric and a product structure.

pub mod commands;
pub mod instance;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::CommandError;
use crate::instance::{lambda_from, parse_list, InstanceError, InstanceFile, Loaded, RationalList};
use crate::report::{Report, EXIT_NOT_CLOSED, EXIT_PARSE, EXIT_STRUCTURE};

#[derive(Debug, Parser)]
#[command(
    name = "rpmgeom",
    version,
    about = "Curvature and natural-connection checks on Riemannian product manifolds"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Print the report as JSON
    #[arg(long, global = true)]
    pub json: bool,

    /// Tolerance for every check (scaled by instance magnitudes where noted)
    #[arg(long, global = true, default_value_t = rpm_geometry::DEFAULT_EPSILON)]
    pub epsilon: f64,

    /// Seed for sampled inputs
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the four-parameter example family against its closed forms and theorems
    VerifyPaper {
        /// λ as four comma-separated rationals, e.g. 1,2,-1/2,0
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        lambda: RationalList,
    },
    /// Full analysis of an instance file
    Analyze {
        #[arg(long)]
        file: PathBuf,
    },
    /// Check conformal invariance under the closed 1-form α
    Conformal {
        #[arg(long, conflicts_with = "lambda", required_unless_present = "lambda")]
        file: Option<PathBuf>,

        /// Use the builtin example with this λ instead of a file
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        lambda: Option<RationalList>,

        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        alpha: RationalList,
    },
}

/// Outcome of one invocation: what to print and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

/// A run that ended before a report existed.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl ToString) -> Self {
        Self {
            code: EXIT_PARSE,
            message: message.to_string(),
        }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        let code = if matches!(e, InstanceError::Metric(_)) {
            EXIT_STRUCTURE
        } else {
            EXIT_PARSE
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CommandError> for Failure {
    fn from(e: CommandError) -> Self {
        let code = match e {
            CommandError::NotClosed { .. } => EXIT_NOT_CLOSED,
            CommandError::Geometry(_) => EXIT_STRUCTURE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn load(path: &std::path::Path) -> Result<Loaded, Failure> {
    Ok(InstanceFile::read(path)?.load()?)
}

fn lambda(values: &RationalList) -> Result<[f64; 4], Failure> {
    Ok(lambda_from(&values.0)?)
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let eps = cli.global.epsilon;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Failure::parse(format!("epsilon must be positive, got {eps}")));
    }
    let report = match &cli.command {
        Command::VerifyPaper { lambda: l } => commands::verify_paper(lambda(l)?, eps, cli.global.seed)?,
        Command::Analyze { file } => commands::analyze(&load(file)?, eps)?,
        Command::Conformal { file, lambda: l, alpha } => {
            let loaded = match (file, l) {
                (Some(f), _) => load(f)?,
                (None, Some(l)) => instance::builtin(lambda(l)?),
                (None, None) => return Err(Failure::parse("give --file or --lambda")),
            };
            let dim = rpm_geometry::FramePoint::dim(&loaded.instance);
            if alpha.0.len() != dim {
                return Err(Failure::parse(format!(
                    "alpha needs {dim} entries, got {}",
                    alpha.0.len()
                )));
            }
            commands::conformal(&loaded, &alpha.0, eps)?
        }
    };
    Ok(report)
}

pub fn execute(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
            report: None,
        },
        Ok(report) => Outcome {
            code: report.exit_code(),
            stdout: if cli.global.json {
                report.to_json() + "\n"
            } else {
                report.render_text()
            },
            stderr: String::new(),
            report: Some(report),
        },
    }
}

/// Parses `args` and runs; clap usage errors map to exit 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                    report: None,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                    report: None,
                }
            }
        }
    }
}

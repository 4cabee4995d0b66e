//! Command-line front end: argument parsing, dispatch to the analyses and
//! report output.
//!
//! Exit codes: 0 success, 1 parse/validation/usage error, 2 findings that
//! `--strict` turns into failures, 3 I/O failure.

mod commands;
mod render;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use reqlattice::corpus_io::to_canonical_json;
use reqlattice::{Error, Level};
use serde::Serialize;

pub use render::Style;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitStatus {
    pub code: i32,
}

impl ExitStatus {
    pub const SUCCESS: ExitStatus = ExitStatus { code: 0 };
    pub const INVALID: ExitStatus = ExitStatus { code: 1 };
    pub const STRICT_FINDINGS: ExitStatus = ExitStatus { code: 2 };
    pub const IO: ExitStatus = ExitStatus { code: 3 };

    pub fn success(self) -> bool {
        self.code == 0
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "reqlattice",
    version,
    about = "Analyze requirements that stem from several jurisdictions",
    propagate_version = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Corpus file (.reqcorpus.json)
    #[arg(long, global = true, value_name = "FILE")]
    corpus: Option<PathBuf>,

    /// Hierarchy level to analyze
    #[arg(long, global = true, value_enum, default_value_t = LevelArg::National)]
    level: LevelArg,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Fail with exit code 2 on specific items without a cross-jurisdiction
    /// contradiction and on any conflict
    #[arg(long, global = true)]
    strict: bool,

    /// Write the report (for `change`: the resulting corpus) to FILE
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    National,
    State,
    #[value(alias = "organisational")]
    Org,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::National => Level::National,
            LevelArg::State => Level::State,
            LevelArg::Org => Level::Organisational,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Min,
    Star,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the corpus and the elaboration discipline
    Validate,
    /// General and specific sets of sources and requirements
    Partition,
    /// Classify each source aspect into one of the three scenario options
    Scenario,
    /// Strongest requirement set and minimal baseline per jurisdiction and overall
    Optimize {
        #[arg(long, value_enum, default_value_t = Emit::Both)]
        emit: Emit,
    },
    /// Contradictions among the analyzed requirements
    Conflicts,
    /// Apply a change set and report its impact
    Change {
        /// Change set file (.reqchange.json)
        #[arg(long, value_name = "FILE")]
        changes: PathBuf,
    },
    /// Jurisdiction tree and effective items at the selected level
    Hierarchy,
    /// Rank candidate conflict resolutions with TOPSIS
    Rank {
        /// Alternatives scored against the conflicting requirements (.reqalts.json)
        #[arg(long, value_name = "FILE", conflicts_with = "matrix", required_unless_present = "matrix")]
        alternatives: Option<PathBuf>,
        /// Explicit decision matrix (.reqmatrix.json); needs no corpus
        #[arg(long, value_name = "FILE")]
        matrix: Option<PathBuf>,
    },
}

/// A rendered report and the exit code it implies.
pub(crate) struct Report {
    report_type: &'static str,
    body: serde_json::Value,
    text: String,
    status: ExitStatus,
}

impl Report {
    pub(crate) fn new<T: Serialize>(report_type: &'static str, body: &T, text: String) -> Self {
        Report {
            report_type,
            body: serde_json::to_value(body).expect("report bodies serialize"),
            text,
            status: ExitStatus::SUCCESS,
        }
    }

    pub(crate) fn with_status(mut self, status: ExitStatus) -> Self {
        self.status = status;
        self
    }

    fn envelope(&self) -> String {
        to_canonical_json(&serde_json::json!({
            "tool": "reqlattice",
            "formatVersion": FORMAT_VERSION,
            "reportType": self.report_type,
            "body": self.body,
        }))
    }
}

/// Failure of a command before a report could be produced.
pub(crate) enum Failure {
    Core(Error),
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub(crate) struct Context {
    pub corpus_path: Option<PathBuf>,
    pub level: Level,
    pub strict: bool,
    pub out: Option<PathBuf>,
    pub style: Style,
}

impl Context {
    pub(crate) fn corpus_path(&self) -> Result<&Path, Failure> {
        self.corpus_path
            .as_deref()
            .ok_or_else(|| Failure::Usage("--corpus <FILE> is required for this command".into()))
    }
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

fn color_from_env() -> bool {
    std::env::var("REQLATTICE_COLOR").is_ok_and(|v| v == "1")
}

/// Runs the tool with `args` (including the program name) and returns the
/// exit status. Reports go to `stdout` unless `--out` says otherwise;
/// diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    ExitStatus::SUCCESS
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    ExitStatus::INVALID
                }
            };
        }
    };

    let g = &cli.global;
    let cx = Context {
        corpus_path: g.corpus.clone(),
        level: g.level.into(),
        strict: g.strict,
        out: g.out.clone(),
        style: Style {
            color: g.format == Format::Text && color_from_env(),
        },
    };
    if let (Some(out), Some(corpus)) = (&cx.out, &cx.corpus_path) {
        if same_file(out, corpus) {
            let _ = writeln!(stderr, "error: --out must not overwrite the input corpus");
            return ExitStatus::INVALID;
        }
    }

    let result = match &cli.command {
        Command::Validate => commands::validate(&cx),
        Command::Partition => commands::partition(&cx),
        Command::Scenario => commands::scenario(&cx),
        Command::Optimize { emit } => commands::optimize(
            &cx,
            matches!(emit, Emit::Star | Emit::Both),
            matches!(emit, Emit::Min | Emit::Both),
        ),
        Command::Conflicts => commands::conflicts(&cx),
        Command::Change { changes } => commands::change(&cx, changes),
        Command::Hierarchy => commands::hierarchy(&cx),
        Command::Rank {
            alternatives,
            matrix,
        } => commands::rank(&cx, alternatives.as_deref(), matrix.as_deref()),
    };

    let report = match result {
        Ok(r) => r,
        Err(f) => return report_failure(f, stderr),
    };
    let rendered = match g.format {
        Format::Json => report.envelope(),
        Format::Text => report.text.clone(),
    };
    // `change --out` writes the corpus itself; its report stays on stdout
    let report_file = match cli.command {
        Command::Change { .. } => None,
        _ => cx.out.as_deref(),
    };
    match report_file {
        Some(path) => {
            if let Err(source) = fs::write(path, rendered) {
                return report_failure(
                    Failure::Io {
                        path: path.to_path_buf(),
                        source,
                    },
                    stderr,
                );
            }
        }
        None => {
            if stdout.write_all(rendered.as_bytes()).is_err() {
                return ExitStatus::IO;
            }
        }
    }
    report.status
}

fn report_failure(f: Failure, stderr: &mut dyn Write) -> ExitStatus {
    let (msg, status) = match f {
        Failure::Usage(msg) => (format!("error: {msg}"), ExitStatus::INVALID),
        Failure::Io { path, source } => (
            format!("error: {}: {source}", path.display()),
            ExitStatus::IO,
        ),
        Failure::Core(Error::Io { path, source }) => (
            format!("error: {}: {source}", path.display()),
            ExitStatus::IO,
        ),
        Failure::Core(Error::Validation(errors)) => {
            let mut msg = format!("error: {} validation issue(s)", errors.0.len());
            for issue in &errors.0 {
                msg.push_str(&format!("\n  {issue}"));
            }
            (msg, ExitStatus::INVALID)
        }
        Failure::Core(e) => (format!("error: {e}"), ExitStatus::INVALID),
    };
    let _ = writeln!(stderr, "{msg}");
    status
}

//! `mpoxdash` operator commands.
//!
//! Exit codes are a stable contract: 0 success, 1 config or usage error,
//! 2 partial data failure. Reports go to stdout, diagnostics to stderr, and
//! every command has a `--json` form carrying the same numbers.

mod check;
mod export;
mod ingest;
mod label;
mod serve;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mpoxdash_core::config::BIND_ENV;
use mpoxdash_core::Config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mpoxdash", version, about = "Mpox tweet corpus: ingest, inspect and serve")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// Path to the TOML config file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ingest dataset files into the corpus (the configured datasets when no paths are given).
    Ingest {
        #[command(flatten)]
        config: ConfigArg,
        paths: Vec<PathBuf>,
    },
    /// Write the corpus, or a date range of it, as canonical NDJSON.
    Export {
        #[command(flatten)]
        config: ConfigArg,
        /// First day, YYYY-MM-DD (open when omitted).
        #[arg(long)]
        from: Option<String>,
        /// Last day, YYYY-MM-DD (open when omitted).
        #[arg(long)]
        to: Option<String>,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Show the topic label and sentiment of a tweet, with the matched lexicon terms.
    Label {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, conflicts_with = "text", required_unless_present = "text")]
        id: Option<String>,
        #[arg(long)]
        text: Option<String>,
    },
    /// Verify the corpus store and the search index built from it.
    Check {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Serve the HTTP API (and dashboard files, when configured).
    Serve {
        #[command(flatten)]
        config: ConfigArg,
    },
}

/// A command failure: exit code plus a diagnostic for stderr.
#[derive(Debug)]
pub(crate) struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    pub(crate) fn usage(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    pub(crate) fn data(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("write failed: {e}"))
    }
}

pub(crate) type CmdResult = Result<i32, Failure>;

/// Output sinks and mode shared by all commands.
pub(crate) struct Ctx<'a> {
    pub json: bool,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Ctx<'_> {
    pub(crate) fn emit_json(&mut self, value: &impl serde::Serialize) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *self.out, value)?;
        writeln!(self.out)
    }
}

pub(crate) fn load_config(path: &Path) -> Result<Config, Failure> {
    Config::load(path).map_err(|e| Failure::usage(format!("error: {e}")))
}

/// True when `path` would live inside `dir` (neither needs to exist).
pub(crate) fn is_inside(path: &Path, dir: &Path) -> bool {
    let norm = |p: &Path| {
        let abs = std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf());
        // Resolve symlinks on the longest existing prefix.
        let mut existing = abs.as_path();
        let mut rest = Vec::new();
        while !existing.exists() {
            match (existing.parent(), existing.file_name()) {
                (Some(parent), Some(name)) => {
                    rest.push(name.to_os_string());
                    existing = parent;
                }
                _ => break,
            }
        }
        let mut resolved = existing.canonicalize().unwrap_or_else(|_| existing.to_path_buf());
        resolved.extend(rest.iter().rev());
        resolved
    };
    norm(path).starts_with(norm(dir))
}

/// Runs the CLI with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if informational {
                let _ = write!(out, "{rendered}");
                return EXIT_OK;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        out,
        err,
    };
    let result = match cli.command {
        Command::Ingest { config, paths } => ingest::run(&mut ctx, &config.config, &paths),
        Command::Export {
            config,
            from,
            to,
            out,
        } => export::run(&mut ctx, &config.config, from.as_deref(), to.as_deref(), &out),
        Command::Label { config, id, text } => {
            label::run(&mut ctx, &config.config, id.as_deref(), text.as_deref())
        }
        Command::Check { config } => check::run(&mut ctx, &config.config),
        Command::Serve { config } => {
            let bind = std::env::var(BIND_ENV).ok();
            serve::run(&mut ctx, &config.config, bind.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.err, "{}", f.message);
            f.code
        }
    }
}

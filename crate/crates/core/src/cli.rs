//! The `lolrun` command line.
//!
//! Exit codes: 0 success, 1 runtime error, 2 lex/parse/usage error,
//! 3 deadlock.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::Parser;

use crate::lexer::tokenize;
use crate::pretty::dump_tree;
use crate::runtime::{spawn_with, Input, Outcome, RunOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_COMPILE: i32 = 2;
pub const EXIT_DEADLOCK: i32 = 3;

fn parse_duration(s: &str) -> Result<Duration, String> {
    let (num, scale) = if let Some(n) = s.strip_suffix("ms") {
        (n, 1e-3)
    } else if let Some(n) = s.strip_suffix('s') {
        (n, 1.0)
    } else {
        (s, 1.0)
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid duration `{s}`"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("duration must be positive, got `{s}`"));
    }
    Ok(Duration::from_secs_f64(v * scale))
}

fn parse_np(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("--np must be a positive integer, got `{s}`")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Dump {
    Tokens,
    Ast,
}

/// Run a LOLCODE program on N parallel processing elements.
#[derive(Debug, Parser)]
#[command(name = "lolrun", version)]
pub struct RunConfig {
    /// Source file
    pub source_path: PathBuf,
    /// Number of processing elements
    #[arg(long = "np", default_value = "1", value_parser = parse_np)]
    pub n_pes: usize,
    /// Seed for WHATEVR / WHATEVAR
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Group output by PE instead of printing it as produced
    #[arg(long)]
    pub per_pe: bool,
    /// Print the token stream and exit
    #[arg(long, conflicts_with = "dump_ast")]
    pub dump_tokens: bool,
    /// Print the syntax tree and exit
    #[arg(long)]
    pub dump_ast: bool,
    /// Quiescence time after which blocked PEs are reported as deadlocked (e.g. 5, 2.5s, 300ms)
    #[arg(long, default_value = "5", value_parser = parse_duration)]
    pub max_barrier_wait: Duration,
}

impl RunConfig {
    pub fn dump(&self) -> Option<Dump> {
        if self.dump_tokens {
            Some(Dump::Tokens)
        } else if self.dump_ast {
            Some(Dump::Ast)
        } else {
            None
        }
    }
}

/// Entry point with injectable streams; returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_COMPILE
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    run(&config, Input::Stdin, out, err)
}

pub fn run(config: &RunConfig, input: Input, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let path = config.source_path.display();
    let source = match std::fs::read_to_string(&config.source_path) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{path}: {e}");
            return EXIT_COMPILE;
        }
    };
    let tokens = match tokenize(&source) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{path}:{}: lex error: {}", e.span, e.message);
            return EXIT_COMPILE;
        }
    };
    if config.dump() == Some(Dump::Tokens) {
        for t in &tokens {
            let _ = writeln!(
                out,
                "{}\t{}\t{}",
                t.kind.label(),
                t.text.escape_default(),
                t.span
            );
        }
        return EXIT_OK;
    }
    let program = match crate::parser::parse_program(&tokens) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(
                err,
                "{path}:{}: parse error in {}: {}",
                e.span, e.construct, e.message
            );
            return EXIT_COMPILE;
        }
    };
    if config.dump() == Some(Dump::Ast) {
        let _ = write!(out, "{}", dump_tree(&program));
        return EXIT_OK;
    }
    let options = RunOptions {
        seed: config.seed,
        watchdog: config.max_barrier_wait,
        delays: None,
        input,
    };
    let result = spawn_with(&program, config.n_pes, &options);
    let text = if config.per_pe {
        result.per_pe_text()
    } else {
        result.interleaved_text()
    };
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
    match result.outcome {
        Outcome::Success => EXIT_OK,
        Outcome::RuntimeError { pe, span, message } => {
            let _ = writeln!(err, "{path}:{span}: runtime error on PE {pe}: {message}");
            EXIT_RUNTIME
        }
        Outcome::Deadlock(report) => {
            let _ = writeln!(err, "{path}: {report}");
            EXIT_DEADLOCK
        }
    }
}

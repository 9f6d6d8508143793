//! `tensordual` command-line front end.
//!
//! Every command reads one JSON document (from `--input` or stdin) and prints
//! one JSON report with sorted keys. Exit codes: 0 affirmative, 1 sound
//! negative backed by a certificate, 2 input or usage error, 3 when
//! `--check-witness` rejects the library's own output.

mod commands;
pub mod json;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::par::Exec;

#[derive(Parser, Debug, Clone)]
#[command(name = "tensordual", version, about = "Exact checks for characters of Z^(N) and finite tensor products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON input file; stdin when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Re-verify the witness or certificate before reporting.
    #[arg(long, global = true)]
    pub check_witness: bool,
    /// Enumeration guard for brute-force group computations.
    #[arg(long, global = true, default_value_t = 64)]
    pub max_order: u64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run batch checks on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Smith normal form of an integer matrix.
    Snf,
    /// Group from generators and relations, its dual, or a Hom group.
    Group,
    /// Tensor product of two finite abelian groups.
    Tensor,
    /// Decide whether a character of Z^(N) is continuous.
    DualCheck,
    /// Tensor decomposition of a continuous character.
    Decompose,
    /// Replace f in f ⊗ t by a continuous function.
    Reduce,
    /// Polars, prepolars and quasi-convex hulls in a finite group.
    Polar,
    /// Brute-force verification suites.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Snf => "snf",
            Command::Group => "group",
            Command::Tensor => "tensor",
            Command::DualCheck => "dual-check",
            Command::Decompose => "decompose",
            Command::Reduce => "reduce",
            Command::Polar => "polar",
            Command::Verify => "verify",
        }
    }
}

/// Options shared by all commands.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub check_witness: bool,
    pub max_order: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for Options {
    fn default() -> Self {
        Self { check_witness: false, max_order: crate::fgab::DEFAULT_GUARD, seed: 0, exec: Exec::default() }
    }
}

/// Schema violation at a JSON path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl InputError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

pub const EXIT_AFFIRMATIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SELF_CHECK: i32 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub body: Value,
    pub exit_code: i32,
}

impl Report {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.body).expect("JSON values serialize");
        s.push('\n');
        s
    }

    fn input_error(command: Command, e: &InputError) -> Self {
        Self {
            body: json!({"command": command.name(), "error": {"path": e.path, "message": e.message}}),
            exit_code: EXIT_INPUT,
        }
    }
}

/// Runs `command` on the JSON text `input`.
pub fn run(command: Command, input: &str, opts: &Options) -> Report {
    let doc: Value = match serde_json::from_str(input) {
        Ok(v) => v,
        Err(e) => {
            let err = InputError::new(format!("line {} column {}", e.line(), e.column()), e.to_string());
            return Report::input_error(command, &err);
        }
    };
    match commands::dispatch(command, &doc, opts) {
        Ok(mut r) => {
            if let Value::Object(m) = &mut r.body {
                m.insert("command".into(), json!(command.name()));
            }
            r
        }
        Err(e) => Report::input_error(command, &e),
    }
}

/// Entry point for the binary: parses arguments, reads input, prints the
/// report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_AFFIRMATIVE };
            let _ = e.print();
            return code;
        }
    };
    let text = match &cli.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::read_to_string(std::io::stdin()).map_err(|e| format!("stdin: {e}")),
    };
    let text = match text {
        Ok(t) => t,
        Err(msg) => {
            let r = Report::input_error(cli.command, &InputError::new("input", msg));
            eprintln!("error: {}", r.body["error"]["message"].as_str().unwrap_or_default());
            print!("{}", r.render());
            return r.exit_code;
        }
    };
    let opts = Options {
        check_witness: cli.check_witness,
        max_order: cli.max_order,
        seed: cli.seed,
        exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel },
    };
    let report = run(cli.command, &text, &opts);
    if report.exit_code == EXIT_INPUT {
        if let Some(err) = report.body.get("error") {
            eprintln!("error at {}: {}", err["path"].as_str().unwrap_or("$"), err["message"].as_str().unwrap_or(""));
        }
    }
    print!("{}", report.render());
    report.exit_code
}

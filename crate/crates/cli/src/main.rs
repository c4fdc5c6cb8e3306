mod doc;
mod literal;
mod render;
mod tasks;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use padyn_core::formal::Certification;
use padyn_core::selftest::run_selftest;
use rayon::prelude::*;
use serde_json::{json, Value};

use doc::{load, Problem, DEFAULT_CAP, DEFAULT_PRECISION};
use tasks::{run_task, Status};

#[derive(Parser)]
#[command(name = "padyn", version, about = "Certified computations with p-adic dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weierstrass degree, stability, Newton polygon and both criteria.
    Analyze(Common),
    /// Lubin logarithm by two algorithms and integrality of its derivative.
    Log(Common),
    /// Formal group law synthesis, integrality and axioms.
    Group(Common),
    /// Endomorphisms `[a]` of a formal group law.
    Endo(Common),
    /// p-adic iterates of a commuter.
    Iterate(Common),
    /// Commutation checks and commuting series with a given derivative.
    Commute(Common),
    /// The m-th root semi-conjugacy construction and its verification.
    Semiconj(Common),
    /// Every task in the document regardless of command.
    Run(Common),
    /// Regression suite over the worked examples.
    Selftest(Output),
}

#[derive(Args)]
struct Common {
    /// Problem document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Relative p-adic precision, overriding the document.
    #[arg(long)]
    precision: Option<u32>,
    /// Truncation degree, overriding the document.
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Suppress the summary on stderr.
    #[arg(long)]
    quiet: bool,
    /// Emit nothing but JSON, including for input errors.
    #[arg(long)]
    json_only: bool,
}

struct TaskReport {
    label: String,
    status: Status,
    value: Value,
}

fn run_document(command: &str, problem: &Problem) -> Result<Vec<TaskReport>> {
    let selected: Vec<(usize, &doc::Task)> = problem
        .tasks
        .iter()
        .enumerate()
        .filter(|(_, t)| command == "run" || t.command() == command)
        .collect();
    if selected.is_empty() {
        anyhow::bail!("the document has no `{command}` tasks");
    }
    // `collect` on an indexed parallel iterator keeps document order.
    Ok(selected
        .par_iter()
        .map(|(index, task)| {
            let (status, result) = run_task(problem, task);
            TaskReport {
                label: format!("task {index} ({})", task.command()),
                status,
                value: json!({
                    "index": index,
                    "command": task.command(),
                    "status": status.as_str(),
                    "result": result,
                }),
            }
        })
        .collect())
}

fn assemble(command: &str, meta: Value, tasks: &[TaskReport]) -> (Status, Value) {
    let worst = tasks
        .iter()
        .map(|t| t.status)
        .max()
        .unwrap_or(Status::Certified);
    let count = |s: Status| tasks.iter().filter(|t| t.status == s).count();
    let report = json!({
        "padyn_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "status": worst.as_str(),
        "exit_code": worst.exit_code(),
        "summary": {
            "certified": count(Status::Certified),
            "certified_negative": count(Status::CertifiedNegative),
            "indeterminate": count(Status::Indeterminate),
            "error": count(Status::Error),
        },
        "meta": meta,
        "tasks": tasks.iter().map(|t| t.value.clone()).collect::<Vec<_>>(),
    });
    (worst, report)
}

fn emit(out: &Output, report: &Value, tasks: &[TaskReport], worst: Status) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match &out.output {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if !out.quiet && !out.json_only {
        let mut err = std::io::stderr().lock();
        for t in tasks {
            writeln!(err, "{}: {}", t.label, t.status.as_str())?;
        }
        writeln!(err, "overall: {} (exit {})", worst.as_str(), worst.exit_code())?;
    }
    Ok(())
}

fn input_error(out: &Output, e: &anyhow::Error) -> ExitCode {
    if out.json_only {
        let v = json!({
            "status": Status::Error.as_str(),
            "exit_code": Status::Error.exit_code(),
            "error": format!("{e:#}"),
        });
        println!("{}", serde_json::to_string_pretty(&v).unwrap_or_default());
    } else {
        eprintln!("error: {e:#}");
    }
    ExitCode::from(Status::Error.exit_code() as u8)
}

fn document_command(name: &str, c: &Common) -> ExitCode {
    let prepared = std::fs::read_to_string(&c.input)
        .with_context(|| format!("cannot read {}", c.input.display()))
        .and_then(|text| {
            let raw: Value = serde_json::from_str(&text).context("input is not JSON")?;
            let problem = load(&text, c.precision, c.cap)?;
            Ok((raw, problem))
        });
    let (raw, problem) = match prepared {
        Ok(p) => p,
        Err(e) => return input_error(&c.output, &e),
    };
    let tasks = match run_document(name, &problem) {
        Ok(t) => t,
        Err(e) => return input_error(&c.output, &e),
    };
    let meta = json!({
        "ring": render::ring(&problem.ring),
        "cap": problem.cap,
        "input": raw,
    });
    let (worst, report) = assemble(name, meta, &tasks);
    match emit(&c.output, &report, &tasks, worst) {
        Ok(()) => ExitCode::from(worst.exit_code() as u8),
        Err(e) => input_error(&c.output, &e),
    }
}

fn selftest(out: &Output) -> ExitCode {
    let checks = run_selftest(DEFAULT_PRECISION, DEFAULT_CAP);
    let tasks: Vec<TaskReport> = checks
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let status = match c.status {
                Certification::Certified => Status::Certified,
                // A failed regression check is an internal fault, not a
                // mathematical verdict.
                Certification::CertifiedNegative => Status::Error,
                Certification::Indeterminate => Status::Indeterminate,
            };
            TaskReport {
                label: c.name.to_string(),
                status,
                value: json!({
                    "index": i,
                    "command": c.name,
                    "status": status.as_str(),
                    "result": { "detail": c.detail },
                }),
            }
        })
        .collect();
    let meta = json!({ "rel_precision": DEFAULT_PRECISION, "cap": DEFAULT_CAP });
    let (worst, report) = assemble("selftest", meta, &tasks);
    match emit(out, &report, &tasks, worst) {
        Ok(()) => ExitCode::from(worst.exit_code() as u8),
        Err(e) => input_error(out, &e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match &cli.command {
        Command::Analyze(c) => document_command("analyze", c),
        Command::Log(c) => document_command("log", c),
        Command::Group(c) => document_command("group", c),
        Command::Endo(c) => document_command("endo", c),
        Command::Iterate(c) => document_command("iterate", c),
        Command::Commute(c) => document_command("commute", c),
        Command::Semiconj(c) => document_command("semiconj", c),
        Command::Run(c) => document_command("run", c),
        Command::Selftest(o) => selftest(o),
    }
}

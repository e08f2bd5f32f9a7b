//! Command-line front end: state files in, reports out.

pub mod args;
pub mod batch;
pub mod commands;
pub mod error;
pub mod report;

use std::io::Write;

use serde::Serialize;

use args::{Cli, Command};
use commands::{run_job, Job, Outcome, Settings, DEFAULT_TOLERANCE};
use error::{CliError, ErrorInfo};
use report::{human_text, machine_line};

#[derive(Serialize)]
struct ErrorRecord {
    command: &'static str,
    error: ErrorInfo,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Measure(_) => "measure",
        Command::Decompose(_) => "decompose",
        Command::Oracle(_) => "oracle",
        Command::Batch(_) => "batch",
        Command::Validate(_) => "validate",
        Command::Gen(_) => "gen",
    }
}

fn job_of(command: Command) -> Job {
    match command {
        Command::Measure(a) => Job::Measure {
            input: a.input,
            method: a.method,
        },
        Command::Decompose(a) => Job::Decompose {
            input: a.input,
            kind: a.kind,
            emit: a.emit,
        },
        Command::Oracle(a) => Job::Oracle {
            input: a.input,
            restarts: a.restarts,
            ensemble_size: a.ensemble_size,
            max_iters: a.max_iters,
            #[cfg(feature = "experimental-gm")]
            gm: a.gm,
            #[cfg(not(feature = "experimental-gm"))]
            gm: false,
        },
        Command::Validate(a) => Job::Validate { input: a.input },
        Command::Gen(a) => Job::Gen(a),
        Command::Batch(_) => unreachable!("batch is not a single job"),
    }
}

fn execute(command: Command, settings: &Settings, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("cannot write output: {e}"));
    if let Command::Batch(args) = &command {
        let lines = batch::run_batch(&args.manifest, args.jobs, settings)?;
        for line in &lines {
            if settings.machine {
                writeln!(out, "{}", machine_line(line)).map_err(io)?;
            } else {
                writeln!(out, "{}", human_text(line)).map_err(io)?;
            }
        }
        return Ok(());
    }
    let report = run_job(&job_of(command), settings)?;
    if let Outcome::Gen(g) = &report.result {
        if g.output.is_none() {
            return write!(out, "{}", g.text).map_err(io);
        }
    }
    if settings.machine {
        writeln!(out, "{}", machine_line(&report)).map_err(io)
    } else {
        write!(out, "{}", human_text(&report)).map_err(io)
    }
}

/// Runs a parsed command line, writing reports to `out` and human-mode
/// errors to `err`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let settings = Settings {
        tolerance: cli.tolerance_override.unwrap_or(DEFAULT_TOLERANCE),
        seed: cli.seed,
        machine: cli.machine,
    };
    let name = command_name(&cli.command);
    if settings.tolerance.is_nan() || settings.tolerance < 0.0 {
        let e = CliError::Usage("--tolerance-override must be a nonnegative number".into());
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    match execute(cli.command, &settings, out) {
        Ok(()) => 0,
        Err(e) => {
            if settings.machine {
                let record = ErrorRecord {
                    command: name,
                    error: e.info(),
                };
                let _ = writeln!(out, "{}", machine_line(&record));
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code()
        }
    }
}

//! Manifest-driven runs.
//!
//! A manifest is `{"entries": [...]}` where each entry names a `command`
//! (`measure`, `decompose`, `oracle` or `validate`), an `input` path relative
//! to the manifest, and that command's options:
//!
//! ```json
//! {"entries": [
//!   {"command": "measure", "input": "werner.json", "method": "auto"},
//!   {"command": "decompose", "input": "werner.json", "kind": "equalized"},
//!   {"command": "oracle", "input": "rho.json", "restarts": 8}
//! ]}
//! ```

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{KindArg, MethodArg};
use crate::commands::{run_job, Job, RunReport, Settings};
use crate::error::{CliError, ErrorInfo};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    entries: Vec<serde_json::Value>,
}

fn default_restarts() -> usize {
    32
}

fn default_max_iters() -> usize {
    2000
}

#[derive(Debug, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase", deny_unknown_fields)]
enum Entry {
    Measure {
        input: PathBuf,
        #[serde(default)]
        method: MethodArg,
    },
    Decompose {
        input: PathBuf,
        kind: KindArg,
        #[serde(default)]
        emit: Option<PathBuf>,
    },
    Oracle {
        input: PathBuf,
        #[serde(default = "default_restarts")]
        restarts: usize,
        #[serde(default)]
        ensemble_size: Option<usize>,
        #[serde(default = "default_max_iters")]
        max_iters: usize,
        #[serde(default)]
        gm: bool,
    },
    Validate {
        input: PathBuf,
    },
}

impl Entry {
    fn into_job(self, base: &Path) -> Job {
        match self {
            Entry::Measure { input, method } => Job::Measure {
                input: base.join(input),
                method,
            },
            Entry::Decompose { input, kind, emit } => Job::Decompose {
                input: base.join(input),
                kind,
                emit: emit.map(|e| base.join(e)),
            },
            Entry::Oracle {
                input,
                restarts,
                ensemble_size,
                max_iters,
                gm,
            } => Job::Oracle {
                input: base.join(input),
                restarts,
                ensemble_size,
                max_iters,
                gm,
            },
            Entry::Validate { input } => Job::Validate {
                input: base.join(input),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryError {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub error: ErrorInfo,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum EntryOutcome {
    Report(RunReport),
    Error(EntryError),
}

/// One output record; `index` is the entry's position in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct BatchLine {
    pub index: usize,
    #[serde(flatten)]
    pub outcome: EntryOutcome,
}

impl BatchLine {
    pub fn is_error(&self) -> bool {
        matches!(self.outcome, EntryOutcome::Error(_))
    }
}

fn run_entry(raw: &serde_json::Value, base: &Path, settings: &Settings) -> EntryOutcome {
    let job = match Entry::deserialize(raw) {
        Ok(entry) => entry.into_job(base),
        Err(e) => {
            return EntryOutcome::Error(EntryError {
                command: None,
                input: None,
                error: CliError::Usage(format!("bad manifest entry: {e}")).info(),
            })
        }
    };
    match run_job(&job, settings) {
        Ok(report) => EntryOutcome::Report(report),
        Err(e) => EntryOutcome::Error(EntryError {
            command: Some(job.name()),
            input: job.input().map(|p| p.display().to_string()),
            error: e.info(),
        }),
    }
}

/// Runs every entry on up to `jobs` threads; results come back in manifest order.
pub fn run_batch(
    manifest: &Path,
    jobs: Option<usize>,
    settings: &Settings,
) -> Result<Vec<BatchLine>, CliError> {
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let text = std::fs::read_to_string(manifest)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", manifest.display())))?;
    let parsed: Manifest = serde_json::from_str(&text).map_err(|e| {
        CliError::Core(evenq_core::Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    })?;
    let base = manifest.parent().unwrap_or(Path::new("")).to_path_buf();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;
    Ok(pool.install(|| {
        parsed
            .entries
            .par_iter()
            .enumerate()
            .map(|(index, raw)| BatchLine {
                index,
                outcome: run_entry(raw, &base, settings),
            })
            .collect()
    }))
}

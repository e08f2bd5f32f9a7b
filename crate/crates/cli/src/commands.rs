use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use evenq_core::decompositions::{
    equalized_optimal_decomposition, optimal_decomposition, zero_polytope_decomposition,
};
use evenq_core::io::{emit_state, parse_state_str, StateValue};
use evenq_core::linalg::{hermitian_deviation, hermitian_eig};
use evenq_core::measures::{
    gm_concurrence_pure, mixed_invariant, mixed_invariant_via_tau, pure_invariant_contraction,
    pure_invariant_overlap, x_state_invariant,
};
use evenq_core::oracle::{minimize, OracleConfig, OracleResult};
use evenq_core::states::{
    random_density, random_pure, random_x_spec, rng_from_seed, standard_state, werner, werner_spec,
    StandardState,
};
use evenq_core::{DensityMatrix, MeasureReport, MemberStats, C64};

use crate::args::{GenArgs, GenState, KindArg, MethodArg};
use crate::error::CliError;

/// Cross-path and reconstruction residuals above this are numerical failures.
pub const RESIDUAL_LIMIT: f64 = 1e-6;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tolerance: f64,
    pub seed: u64,
    /// Machine mode leaves out wall time so reruns are byte-identical.
    pub machine: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            machine: false,
        }
    }
}

/// One unit of work, from the command line or a batch manifest.
#[derive(Debug, Clone)]
pub enum Job {
    Measure {
        input: PathBuf,
        method: MethodArg,
    },
    Decompose {
        input: PathBuf,
        kind: KindArg,
        emit: Option<PathBuf>,
    },
    Oracle {
        input: PathBuf,
        restarts: usize,
        ensemble_size: Option<usize>,
        max_iters: usize,
        /// Average GM concurrence objective; needs the `experimental-gm` feature.
        gm: bool,
    },
    Validate {
        input: PathBuf,
    },
    Gen(GenArgs),
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Measure { .. } => "measure",
            Job::Decompose { .. } => "decompose",
            Job::Oracle { .. } => "oracle",
            Job::Validate { .. } => "validate",
            Job::Gen(_) => "gen",
        }
    }

    pub fn input(&self) -> Option<&Path> {
        match self {
            Job::Measure { input, .. }
            | Job::Decompose { input, .. }
            | Job::Oracle { input, .. }
            | Job::Validate { input } => Some(input),
            Job::Gen(_) => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    pub seed: u64,
    pub result: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Measure(MeasureOutcome),
    Decompose(DecomposeOutcome),
    Oracle(OracleOutcome),
    Validate(ValidateOutcome),
    Gen(GenOutcome),
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureOutcome {
    pub input_kind: &'static str,
    pub n_qubits: usize,
    pub requested: &'static str,
    #[serde(flatten)]
    pub report: MeasureReport,
    /// Disagreement between the two evaluation paths run by `auto`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_path_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeOutcome {
    pub kind: KindArg,
    pub n_qubits: usize,
    pub formula_value: f64,
    pub average_invariant: f64,
    pub signed_sum: C64,
    pub reconstruction_residual: f64,
    pub tau_offdiag: f64,
    pub lambdas: Vec<f64>,
    pub members: Vec<MemberStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emitted: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleOutcome {
    pub n_qubits: usize,
    pub objective: &'static str,
    pub oracle_value: f64,
    /// Closed-form value and `oracle - formula`; absent for the GM objective.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    pub config: OracleConfig,
    pub iterations_used: usize,
    pub ensemble_members: usize,
    pub reconstruction_residual: f64,
    pub restart_values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateOutcome {
    pub kind: &'static str,
    pub n_qubits: usize,
    pub dim: usize,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub hermitian_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenOutcome {
    pub state: String,
    pub kind: &'static str,
    pub n_qubits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub output_sha256: String,
    /// The generated file when no output path was given.
    #[serde(skip)]
    pub text: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load(path: &Path, settings: &Settings) -> Result<(StateValue, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| CliError::Usage(format!("{} is not UTF-8: {e}", path.display())))?;
    let value = parse_state_str(&text, settings.tolerance)?;
    Ok((value, sha256_hex(&bytes)))
}

fn check_residual(what: &'static str, residual: f64) -> Result<(), CliError> {
    if residual.is_nan() || residual > RESIDUAL_LIMIT {
        return Err(CliError::Residual {
            what,
            residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    Ok(())
}

fn mismatch(method: MethodArg, value: &StateValue) -> CliError {
    CliError::MethodMismatch {
        method: method.name().to_string(),
        kind: value.kind().to_string(),
    }
}

fn measure(value: &StateValue, method: MethodArg) -> Result<MeasureOutcome, CliError> {
    let mut cross = None;
    let report = match (method, value) {
        (MethodArg::Auto, StateValue::Pure(psi)) => {
            let report = pure_invariant_contraction(psi);
            if psi.n_qubits() % 2 == 0 {
                let other = pure_invariant_overlap(psi)?;
                cross = Some((report.value - other.value).abs());
            }
            report
        }
        (MethodArg::Auto, StateValue::XSpec(spec)) => {
            let report = x_state_invariant(spec)?;
            let other = mixed_invariant(&value.to_density()?)?;
            cross = Some((report.value - other.value).abs());
            report
        }
        (MethodArg::Auto, _) => {
            let rho = value.to_density()?;
            let report = mixed_invariant(&rho)?;
            let other = mixed_invariant_via_tau(&rho)?;
            cross = Some((report.value - other.value).abs());
            report
        }
        (MethodArg::R, _) => mixed_invariant(&value.to_density()?)?,
        (MethodArg::Tau, _) => mixed_invariant_via_tau(&value.to_density()?)?,
        (MethodArg::XAnalytic, StateValue::XSpec(spec)) => x_state_invariant(spec)?,
        (MethodArg::Contraction, StateValue::Pure(psi)) => pure_invariant_contraction(psi),
        (MethodArg::Overlap, StateValue::Pure(psi)) => pure_invariant_overlap(psi)?,
        (MethodArg::GmPure, StateValue::Pure(psi)) => gm_concurrence_pure(psi)?,
        (m, v) => return Err(mismatch(m, v)),
    };
    if let Some(r) = cross {
        check_residual("cross-path", r)?;
    }
    Ok(MeasureOutcome {
        input_kind: value.kind(),
        n_qubits: value.n_qubits(),
        requested: method.name(),
        report,
        cross_path_residual: cross,
    })
}

fn decompose(
    value: &StateValue,
    kind: KindArg,
    emit: Option<&Path>,
) -> Result<DecomposeOutcome, CliError> {
    let rho = value.to_density()?;
    let formula = mixed_invariant(&rho)?;
    let d = match kind {
        KindArg::Optimal => optimal_decomposition(&rho)?,
        KindArg::Equalized => equalized_optimal_decomposition(&rho)?,
        KindArg::Zero => zero_polytope_decomposition(&rho)?,
    };
    check_residual("reconstruction", d.reconstruction_residual)?;
    let emitted = match emit {
        Some(path) => {
            std::fs::write(path, emit_state(&StateValue::Ensemble(d.ensemble.clone())))
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    Ok(DecomposeOutcome {
        kind,
        n_qubits: rho.n_qubits(),
        formula_value: formula.value,
        average_invariant: d.average_invariant,
        signed_sum: d.signed_sum,
        reconstruction_residual: d.reconstruction_residual,
        tau_offdiag: d.tau_offdiag,
        lambdas: d.lambdas,
        members: d.per_member,
        emitted,
    })
}

#[cfg(feature = "experimental-gm")]
fn gm_oracle(rho: &DensityMatrix, cfg: &OracleConfig) -> Result<OracleResult, CliError> {
    Ok(evenq_core::oracle::minimize_gm(rho, cfg)?)
}

#[cfg(not(feature = "experimental-gm"))]
fn gm_oracle(_: &DensityMatrix, _: &OracleConfig) -> Result<OracleResult, CliError> {
    Err(CliError::Usage(
        "the GM objective needs a build with the experimental-gm feature".into(),
    ))
}

fn oracle(value: &StateValue, cfg: OracleConfig, gm: bool) -> Result<OracleOutcome, CliError> {
    let rho = value.to_density()?;
    let (res, formula) = if gm {
        (gm_oracle(&rho, &cfg)?, None)
    } else {
        let formula = mixed_invariant(&rho)?.value;
        (minimize(&rho, &cfg)?, Some(formula))
    };
    let reconstruction_residual = res.best_ensemble.reconstruction_residual(&rho);
    check_residual("reconstruction", reconstruction_residual)?;
    Ok(OracleOutcome {
        n_qubits: rho.n_qubits(),
        objective: if gm { "gm_average" } else { "invariant" },
        oracle_value: res.value,
        formula_value: formula,
        gap: formula.map(|f| res.value - f),
        config: cfg,
        iterations_used: res.iterations_used,
        ensemble_members: res.best_ensemble.len(),
        reconstruction_residual,
        restart_values: res.restart_values,
    })
}

fn validate(value: &StateValue) -> Result<ValidateOutcome, CliError> {
    let rho = value.to_density()?;
    let eig = hermitian_eig(rho.matrix())?;
    Ok(ValidateOutcome {
        kind: value.kind(),
        n_qubits: rho.n_qubits(),
        dim: rho.dim(),
        trace: rho.matrix().trace().re,
        min_eigenvalue: eig.eigenvalues.last().copied().unwrap_or(0.0),
        hermitian_deviation: hermitian_deviation(rho.matrix()),
    })
}

fn generate(args: &GenArgs, seed: u64) -> Result<GenOutcome, CliError> {
    let n = args.qubits;
    let standard =
        |kind| -> Result<StateValue, CliError> { Ok(StateValue::Pure(standard_state(kind, n)?)) };
    let (name, value) = match args.state {
        GenState::Ghz => ("ghz", standard(StandardState::Ghz)?),
        GenState::W => ("w", standard(StandardState::W)?),
        GenState::Bell => ("bell", standard(StandardState::BellPhiPlus)?),
        GenState::ProductZero => ("product-zero", standard(StandardState::ProductZero)?),
        GenState::Werner => {
            if n != 2 {
                return Err(CliError::Usage("werner states have 2 qubits".into()));
            }
            let p = args
                .p
                .ok_or_else(|| CliError::Usage("werner needs --p".into()))?;
            let value = if args.xspec {
                StateValue::XSpec(werner_spec(p)?)
            } else {
                StateValue::Density(werner(p)?)
            };
            ("werner", value)
        }
        GenState::RandomPure => (
            "random-pure",
            StateValue::Pure(random_pure(n, &mut rng_from_seed(seed))?),
        ),
        GenState::RandomDensity => {
            let rank = args
                .rank
                .unwrap_or(1usize.checked_shl(n as u32).unwrap_or(0));
            (
                "random-density",
                StateValue::Density(random_density(n, rank, seed)?),
            )
        }
        GenState::RandomX => (
            "random-x",
            StateValue::XSpec(random_x_spec(n, &mut rng_from_seed(seed))?),
        ),
    };
    let text = emit_state(&value);
    if let Some(path) = &args.out {
        std::fs::write(path, &text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(GenOutcome {
        state: name.to_string(),
        kind: value.kind(),
        n_qubits: value.n_qubits(),
        output: args.out.as_ref().map(|p| p.display().to_string()),
        output_sha256: sha256_hex(text.as_bytes()),
        text,
    })
}

pub fn run_job(job: &Job, settings: &Settings) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let loaded = match job.input() {
        Some(path) => Some(load(path, settings)?),
        None => None,
    };
    let value = loaded.as_ref().map(|(v, _)| v);
    let result = match (job, value) {
        (Job::Measure { method, .. }, Some(v)) => Outcome::Measure(measure(v, *method)?),
        (Job::Decompose { kind, emit, .. }, Some(v)) => {
            Outcome::Decompose(decompose(v, *kind, emit.as_deref())?)
        }
        (
            Job::Oracle {
                restarts,
                ensemble_size,
                max_iters,
                gm,
                ..
            },
            Some(v),
        ) => {
            let cfg = OracleConfig {
                ensemble_size: *ensemble_size,
                restarts: *restarts,
                max_iters: *max_iters,
                seed: settings.seed,
                ..OracleConfig::default()
            };
            Outcome::Oracle(oracle(v, cfg, *gm)?)
        }
        (Job::Validate { .. }, Some(v)) => Outcome::Validate(validate(v)?),
        (Job::Gen(args), _) => Outcome::Gen(generate(args, settings.seed)?),
        _ => unreachable!("jobs with an input path always load one"),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunReport {
        command: job.name(),
        input: job.input().map(|p| p.display().to_string()),
        input_sha256: loaded.map(|(_, digest)| digest),
        seed: settings.seed,
        result,
        wall_time_ms: (!settings.machine).then_some(elapsed),
    })
}

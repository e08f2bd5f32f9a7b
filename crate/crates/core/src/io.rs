//! Text state files.
//!
//! A state file is a JSON object:
//!
//! ```json
//! {
//!   "schema_version": "evenq-state/1; qubit 1 = most significant bit",
//!   "n_qubits": 2,
//!   "kind": "pure",
//!   "data": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs written in shortest round-trip form.
//! `density` data is a list of rows, `ensemble` data a list of subnormalized
//! member vectors, and `xspec` data a list of
//! `{"index": "0110", "theta", "phi", "p_plus", "p_minus"}` records whose
//! index strings start with `0`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::states::{dim_of, DensityMatrix, Ensemble, PureState, XRow, XStateSpec, MAX_QUBITS};

pub const SCHEMA_VERSION: &str = "evenq-state/1; qubit 1 = most significant bit";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    schema_version: String,
    n_qubits: usize,
    #[serde(flatten)]
    payload: Payload,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
enum Payload {
    Pure(Vec<[f64; 2]>),
    Density(Vec<Vec<[f64; 2]>>),
    Xspec(Vec<XRowRecord>),
    Ensemble(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct XRowRecord {
    index: String,
    theta: f64,
    phi: f64,
    p_plus: f64,
    p_minus: f64,
}

/// Any value a state file can hold.
#[derive(Debug, Clone, PartialEq)]
pub enum StateValue {
    Pure(PureState),
    Density(DensityMatrix),
    XSpec(XStateSpec),
    Ensemble(Ensemble),
}

impl StateValue {
    pub fn kind(&self) -> &'static str {
        match self {
            StateValue::Pure(_) => "pure",
            StateValue::Density(_) => "density",
            StateValue::XSpec(_) => "xspec",
            StateValue::Ensemble(_) => "ensemble",
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            StateValue::Pure(p) => p.n_qubits(),
            StateValue::Density(d) => d.n_qubits(),
            StateValue::XSpec(x) => x.n_qubits(),
            StateValue::Ensemble(e) => e.n_qubits(),
        }
    }

    /// Density matrix described by the value.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        match self {
            StateValue::Pure(p) => p.projector(),
            StateValue::Density(d) => Ok(d.clone()),
            StateValue::XSpec(x) => Ok(crate::states::x_state_density(x)),
            StateValue::Ensemble(e) => crate::states::density_from_ensemble(e),
        }
    }
}

fn from_pair(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

fn index_string(index: usize, n_qubits: usize) -> String {
    format!("{index:0n_qubits$b}")
}

fn parse_index(s: &str, n_qubits: usize, row: usize) -> Result<usize> {
    if s.len() != n_qubits || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Validation(format!(
            "xspec row {row}: index '{s}' is not a {n_qubits}-bit binary string"
        )));
    }
    if !s.starts_with('0') {
        return Err(Error::Validation(format!(
            "xspec row {row}: index '{s}' must have leading bit 0"
        )));
    }
    usize::from_str_radix(s, 2).map_err(|e| Error::Validation(format!("xspec row {row}: {e}")))
}

fn vector_from_pairs(pairs: &[[f64; 2]], dim: usize, what: &str) -> Result<ComplexVector> {
    if pairs.len() != dim {
        return Err(Error::Validation(format!(
            "{what} has {} entries, expected {dim}",
            pairs.len()
        )));
    }
    Ok(ComplexVector::from_iterator(
        dim,
        pairs.iter().map(from_pair),
    ))
}

fn validation(e: Error) -> Error {
    match e {
        Error::Validation(_) | Error::Parse { .. } => e,
        other => Error::Validation(other.to_string()),
    }
}

/// Parse and validate a state file. `tol` is the absolute tolerance used for
/// normalization, Hermiticity, trace and positivity checks.
pub fn parse_state_str(text: &str, tol: f64) -> Result<StateValue> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Validation(format!(
            "unsupported schema_version '{}', expected '{SCHEMA_VERSION}'",
            file.schema_version
        )));
    }
    let n = file.n_qubits;
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Validation(format!(
            "n_qubits must be in 1..={MAX_QUBITS}, got {n}"
        )));
    }
    let dim = dim_of(n);
    match file.payload {
        Payload::Pure(pairs) => {
            let v = vector_from_pairs(&pairs, dim, "pure state")?;
            let psi = PureState::from_vector(n, v).map_err(validation)?;
            let norm = psi.norm_sqr();
            if (norm - 1.0).abs() > tol {
                return Err(Error::Validation(format!(
                    "pure state norm^2 {norm} deviates from 1 by {:e}",
                    1.0 - norm
                )));
            }
            Ok(StateValue::Pure(psi))
        }
        Payload::Density(rows) => {
            if rows.len() != dim {
                return Err(Error::Validation(format!(
                    "density matrix has {} rows, expected {dim}",
                    rows.len()
                )));
            }
            let mut m = ComplexMatrix::zeros(dim, dim);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != dim {
                    return Err(Error::Validation(format!(
                        "density row {i} has {} entries, expected {dim}",
                        row.len()
                    )));
                }
                for (j, p) in row.iter().enumerate() {
                    m[(i, j)] = from_pair(p);
                }
            }
            DensityMatrix::with_tolerance(n, m, tol)
                .map(StateValue::Density)
                .map_err(validation)
        }
        Payload::Xspec(records) => {
            let rows = records
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    Ok(XRow {
                        index: parse_index(&r.index, n, k)?,
                        theta: r.theta,
                        phi: r.phi,
                        p_plus: r.p_plus,
                        p_minus: r.p_minus,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            XStateSpec::new(n, rows)
                .map(StateValue::XSpec)
                .map_err(validation)
        }
        Payload::Ensemble(members) => {
            let vecs = members
                .iter()
                .enumerate()
                .map(|(k, m)| vector_from_pairs(m, dim, &format!("ensemble member {k}")))
                .collect::<Result<Vec<_>>>()?;
            let e = Ensemble::new(n, vecs).map_err(validation)?;
            let total: f64 = e.weights().iter().sum();
            if (total - 1.0).abs() > tol.max(1e-8) {
                return Err(Error::Validation(format!(
                    "ensemble weights sum to {total}, deviating from 1 by {:e}",
                    1.0 - total
                )));
            }
            Ok(StateValue::Ensemble(e))
        }
    }
}

pub fn parse_state_file(path: &Path, tol: f64) -> Result<StateValue> {
    let text = std::fs::read_to_string(path)?;
    parse_state_str(&text, tol)
}

fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite numbers serialize")
}

fn pair(z: &C64) -> String {
    format!("[{}, {}]", num(z.re), num(z.im))
}

fn row<'a>(entries: impl Iterator<Item = &'a C64>) -> String {
    let parts: Vec<String> = entries.map(pair).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical text of a state value; `parse_state_str(emit_state(v))` returns `v`.
///
/// One amplitude, matrix row, member or spec row per line.
pub fn emit_state(value: &StateValue) -> String {
    let lines: Vec<String> = match value {
        StateValue::Pure(p) => p.amplitudes().iter().map(pair).collect(),
        StateValue::Density(d) => d.matrix().row_iter().map(|r| row(r.iter())).collect(),
        StateValue::XSpec(x) => x
            .rows()
            .iter()
            .map(|r| {
                serde_json::to_string(&XRowRecord {
                    index: index_string(r.index, x.n_qubits()),
                    theta: r.theta,
                    phi: r.phi,
                    p_plus: r.p_plus,
                    p_minus: r.p_minus,
                })
                .expect("spec rows serialize")
            })
            .collect(),
        StateValue::Ensemble(e) => e.members().iter().map(|m| row(m.iter())).collect(),
    };
    format!(
        "{{\n  \"schema_version\": {},\n  \"n_qubits\": {},\n  \"kind\": \"{}\",\n  \"data\": [\n    {}\n  ]\n}}\n",
        serde_json::to_string(SCHEMA_VERSION).expect("strings serialize"),
        value.n_qubits(),
        value.kind(),
        lines.join(",\n    ")
    )
}

pub fn write_state_file(path: &Path, value: &StateValue) -> Result<()> {
    std::fs::write(path, emit_state(value))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_density, random_pure, random_x_spec, rng_from_seed, werner_spec};
    use proptest::prelude::*;

    const BELL: &str = r#"{
        "schema_version": "evenq-state/1; qubit 1 = most significant bit",
        "n_qubits": 2,
        "kind": "pure",
        "data": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]]
    }"#;

    #[test]
    fn bell_file() {
        let v = parse_state_str(BELL, 1e-10).unwrap();
        let StateValue::Pure(psi) = v else {
            panic!("expected pure")
        };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(psi.amplitudes()[0], C64::new(h, 0.0));
        assert_eq!(psi.amplitudes()[1], C64::new(0.0, 0.0));
        assert_eq!(psi.amplitudes()[3], C64::new(h, 0.0));
    }

    #[test]
    fn trace_deficit_is_named() {
        let text = r#"{"schema_version": "evenq-state/1; qubit 1 = most significant bit",
            "n_qubits": 1, "kind": "density",
            "data": [[[0.49, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.49, 0.0]]]}"#;
        let err = parse_state_str(text, 1e-10).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Validation(_)));
        assert!(msg.contains("trace 0.98"), "{msg}");
        assert!(
            msg.contains("2e-2") || msg.contains("0.02") || msg.contains("2.0000000000000018e-2"),
            "{msg}"
        );
    }

    #[test]
    fn malformed_reports_position() {
        let err = parse_state_str("{\n  \"schema_version\": 3,", 1e-10).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_state_str(
            r#"{"schema_version": "x", "n_qubits": 1, "kind": "pure", "data": [[1,0],[0,0]]}"#,
            1e-10,
        )
        .unwrap_err();
        assert!(err.to_string().contains("schema_version"));
    }

    #[test]
    fn shape_errors_carry_context() {
        let text = r#"{"schema_version": "evenq-state/1; qubit 1 = most significant bit",
            "n_qubits": 1, "kind": "density",
            "data": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0]]]}"#;
        let msg = parse_state_str(text, 1e-10).unwrap_err().to_string();
        assert!(msg.contains("row 1"), "{msg}");
        let text = r#"{"schema_version": "evenq-state/1; qubit 1 = most significant bit",
            "n_qubits": 2, "kind": "xspec",
            "data": [{"index": "10", "theta": 0, "phi": 0, "p_plus": 1, "p_minus": 0},
                     {"index": "01", "theta": 0, "phi": 0, "p_plus": 0, "p_minus": 0}]}"#;
        let msg = parse_state_str(text, 1e-10).unwrap_err().to_string();
        assert!(
            msg.contains("row 0") && msg.contains("leading bit"),
            "{msg}"
        );
    }

    #[test]
    fn xspec_emit_is_byte_stable() {
        let v = StateValue::XSpec(werner_spec(0.9).unwrap());
        let text = emit_state(&v);
        let back = parse_state_str(&text, 1e-10).unwrap();
        assert_eq!(back, v);
        assert_eq!(emit_state(&back), text);
    }

    #[test]
    fn ensemble_weights_checked() {
        let text = r#"{"schema_version": "evenq-state/1; qubit 1 = most significant bit",
            "n_qubits": 1, "kind": "ensemble",
            "data": [[[0.5, 0.0], [0.0, 0.0]]]}"#;
        assert!(parse_state_str(text, 1e-10)
            .unwrap_err()
            .to_string()
            .contains("weights"));
    }

    proptest! {
        #[test]
        fn parse_emit_roundtrip(seed in 0u64..500, half in 1usize..3, kind in 0usize..4) {
            let n = 2 * half;
            let mut rng = rng_from_seed(seed);
            let v = match kind {
                0 => StateValue::Pure(random_pure(n, &mut rng).unwrap()),
                1 => StateValue::Density(random_density(n, 1 + seed as usize % 3, seed).unwrap()),
                2 => StateValue::XSpec(random_x_spec(n, &mut rng).unwrap()),
                _ => StateValue::Ensemble(
                    crate::decompositions::eigen_ensemble(&random_density(n, 2, seed).unwrap()).unwrap(),
                ),
            };
            let text = emit_state(&v);
            let back = parse_state_str(&text, 1e-9).unwrap();
            prop_assert_eq!(&back, &v);
            prop_assert_eq!(emit_state(&back), text);
        }
    }
}

use std::f64::consts::{PI, TAU};

use super::{check_qubits, complement, dim_of, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix};

/// Parameters of one `(i, ~i)` block of an X state.
///
/// `index` has its most significant bit clear; the block mixes
/// `|psi+> = cos(theta/2)|i> + e^{i phi} sin(theta/2)|~i>` and
/// `|psi-> = -sin(theta/2)|i> + e^{i phi} cos(theta/2)|~i>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XRow {
    pub index: usize,
    pub theta: f64,
    pub phi: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XStateSpec {
    n_qubits: usize,
    rows: Vec<XRow>,
}

impl XStateSpec {
    /// Rows may come in any order; they are stored sorted by index.
    pub fn new(n_qubits: usize, mut rows: Vec<XRow>) -> Result<Self> {
        check_qubits(n_qubits).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        if !n_qubits.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!(
                "X-state specs need an even qubit count, got {n_qubits}"
            )));
        }
        let half = dim_of(n_qubits) / 2;
        if rows.len() != half {
            return Err(Error::InvalidSpec(format!(
                "expected {half} rows, found {}",
                rows.len()
            )));
        }
        rows.sort_by_key(|r| r.index);
        let mut total = 0.0;
        for (k, row) in rows.iter().enumerate() {
            if row.index != k {
                return Err(Error::InvalidSpec(format!(
                    "row indices must cover 0..{half} exactly once (leading bit 0); found {} at position {k}",
                    row.index
                )));
            }
            if !(0.0..=PI).contains(&row.theta) {
                return Err(Error::InvalidSpec(format!(
                    "row {k}: theta {} outside [0, pi]",
                    row.theta
                )));
            }
            if !(0.0..TAU).contains(&row.phi) {
                return Err(Error::InvalidSpec(format!(
                    "row {k}: phi {} outside [0, 2pi)",
                    row.phi
                )));
            }
            if !(row.p_plus >= 0.0 && row.p_minus >= 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "row {k}: negative probability ({}, {})",
                    row.p_plus, row.p_minus
                )));
            }
            total += row.p_plus + row.p_minus;
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidSpec(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { n_qubits, rows })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn rows(&self) -> &[XRow] {
        &self.rows
    }
}

pub fn x_state_density(spec: &XStateSpec) -> DensityMatrix {
    let n = spec.n_qubits;
    let dim = dim_of(n);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for row in &spec.rows {
        let i = row.index;
        let ib = complement(i, n);
        let (s, co) = (row.theta / 2.0).sin_cos();
        let phase = c(row.phi.cos(), row.phi.sin());
        let plus = [c(co, 0.0), phase * s];
        let minus = [c(-s, 0.0), phase * co];
        let idx = [i, ib];
        for a in 0..2 {
            for b in 0..2 {
                m[(idx[a], idx[b])] += plus[a] * plus[b].conj() * row.p_plus
                    + minus[a] * minus[b].conj() * row.p_minus;
            }
        }
    }
    DensityMatrix::from_raw(n, m)
}

/// Two-qubit Werner state as an X spec: `p |Phi+><Phi+| + (1 - p) I/4`.
pub fn werner_spec(p: f64) -> Result<XStateSpec> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidSpec(format!(
            "Werner parameter {p} outside [0, 1]"
        )));
    }
    let half_pi = PI / 2.0;
    XStateSpec::new(
        2,
        vec![
            XRow {
                index: 0,
                theta: half_pi,
                phi: 0.0,
                p_plus: (1.0 + 3.0 * p) / 4.0,
                p_minus: (1.0 - p) / 4.0,
            },
            XRow {
                index: 1,
                theta: half_pi,
                phi: 0.0,
                p_plus: (1.0 - p) / 4.0,
                p_minus: (1.0 - p) / 4.0,
            },
        ],
    )
}

/// Two-qubit Werner state, built by direct mixing.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidDensity(format!(
            "Werner parameter {p} outside [0, 1]"
        )));
    }
    let bell = super::standard_state(super::StandardState::BellPhiPlus, 2)?.projector()?;
    bell.mix(&DensityMatrix::maximally_mixed(2)?, p)
}

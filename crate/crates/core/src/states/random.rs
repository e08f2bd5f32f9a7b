//! Seeded generators for test and benchmark states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use std::f64::consts::{PI, TAU};

use super::{check_qubits, dim_of, DensityMatrix, PureState, XRow, XStateSpec};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, C64};

pub type StateRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_pure<R: Rng>(n_qubits: usize, rng: &mut R) -> Result<PureState> {
    check_qubits(n_qubits)?;
    let v = ginibre(dim_of(n_qubits), 1, rng);
    let norm = v.norm();
    PureState::new(n_qubits, v.iter().map(|z| z / norm).collect())
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase of `R` removed).
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(dim, dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `G G^H / tr` for a `2^n x rank` Ginibre matrix `G`; reproducible per seed.
pub fn random_density(n_qubits: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    check_qubits(n_qubits)?;
    let dim = dim_of(n_qubits);
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let mut rng = rng_from_seed(seed);
    let g = ginibre(dim, rank, &mut rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(DensityMatrix::from_raw(
        n_qubits,
        crate::linalg::hermitian_part(&m.unscale(tr)),
    ))
}

/// Random X spec with one dominant block so that both zero and positive
/// invariants show up.
pub fn random_x_spec<R: Rng>(n_qubits: usize, rng: &mut R) -> Result<XStateSpec> {
    check_qubits(n_qubits).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let half = dim_of(n_qubits) / 2;
    let dominant = rng.random_range(0..half);
    let lead = 0.3 + 0.7 * rng.random::<f64>();
    let raw: Vec<f64> = (0..half).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let rest: f64 = raw
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != dominant)
        .map(|(_, w)| w)
        .sum();
    let mut rows = Vec::with_capacity(half);
    for (k, w) in raw.iter().enumerate() {
        let mass = if k == dominant {
            if half == 1 {
                1.0
            } else {
                lead
            }
        } else if rest > 0.0 {
            (1.0 - lead) * w / rest
        } else {
            0.0
        };
        let split: f64 = rng.random();
        rows.push(XRow {
            index: k,
            theta: PI * rng.random::<f64>(),
            phi: TAU * rng.random::<f64>(),
            p_plus: mass * split,
            p_minus: mass * (1.0 - split),
        });
    }
    // Absorb rounding so the probabilities sum to 1 well inside tolerance.
    let total: f64 = rows.iter().map(|r| r.p_plus + r.p_minus).sum();
    for r in rows.iter_mut() {
        r.p_plus /= total;
        r.p_minus /= total;
    }
    XStateSpec::new(n_qubits, rows)
}

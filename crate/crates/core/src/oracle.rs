//! Direct convex-roof minimization over pure-state decompositions.
//!
//! Every `m`-member decomposition of `rho` is `z_i = sum_j W_ij v_j` for an
//! `m x r` isometry `W` and the eigen-ensemble `{v_j}`. With `U = conj(W)`
//! the self-overlaps are `<z_i|z~_i> = u_i tau u_i^T`, so the objective
//! `sum_i |u_i tau u_i^T|` only needs the small symmetric matrix `tau`.
//! The optimizer applies two-row complex rotations to `U`; for a pair of
//! rows the new overlaps are quadratic in `(cos t, sin t e^{-i phi})` and
//! cost O(1) per trial once the three bilinear forms are known.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::decompositions::{eigen_ensemble, tau_matrix};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::states::{random_unitary, rng_from_seed, DensityMatrix, Ensemble};

/// Largest Hilbert-space dimension the oracle accepts.
pub const MAX_DIM: usize = 16;

const GRID: usize = 8;
const GOLDEN_STEPS: usize = 24;
const REFINE_ROUNDS: usize = 3;
/// Sweeps between full grid searches.
const GLOBAL_EVERY: usize = 16;
const LOCAL_THETA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Fixed ensemble size; `None` sweeps `{r, r+1, r+2, 2r}`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    /// Sweep limit per restart.
    pub max_iters: usize,
    /// A sweep improving the objective by less than this ends a restart.
    pub step_tolerance: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 32,
            max_iters: 2000,
            step_tolerance: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub best_ensemble: Ensemble,
    /// Total sweeps over all sizes and restarts.
    pub iterations_used: usize,
    /// Best value reached by each restart index, minimized over sizes.
    pub restart_values: Vec<f64>,
}

/// `sum_m |<m|m~>|`, i.e. `sum p C(psi)` for subnormalized members.
pub fn average_invariant(e: &Ensemble) -> Result<f64> {
    let tau = tau_matrix(e)?;
    Ok((0..e.len()).map(|i| tau[(i, i)].norm()).sum())
}

fn restart_seed(seed: u64, size: usize, restart: usize) -> u64 {
    seed ^ ((size as u64) << 48) ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct Problem<'a> {
    tau: &'a ComplexMatrix,
}

impl Problem<'_> {
    fn form(&self, a: &ComplexVector, b: &ComplexVector) -> C64 {
        (a.transpose() * self.tau * b)[(0, 0)]
    }

    fn objective(&self, rows: &[ComplexVector]) -> f64 {
        rows.iter().map(|u| self.form(u, u).norm()).sum()
    }
}

/// Overlaps of the rotated pair for rotation `[[c, s e^{i phi}], [-s e^{-i phi}, c]]`
/// applied to the rows of `W` (so `conj` of it acts on `U`).
#[inline]
fn pair_cost(bpp: C64, bpq: C64, bqq: C64, theta: f64, phi: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let e = C64::from_polar(1.0, -phi);
    let e2 = e * e;
    let op = bpp * (c * c) + bpq * (2.0 * c * s) * e + bqq * (s * s) * e2;
    let oq = bpp * (s * s) * e2.conj() - bpq * (2.0 * c * s) * e.conj() + bqq * (c * c);
    op.norm() + oq.norm()
}

fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Best pair rotation `(theta, phi, cost)` for the local two-member problem.
/// With `global` the search starts from a full grid; otherwise it only
/// refines around the identity with a coarse phase scan.
fn best_rotation<F: Fn(f64, f64) -> f64>(cost_at: F, global: bool) -> (f64, f64, f64) {
    let mut best = (0.0, 0.0, cost_at(0.0, 0.0));
    let (thetas, mut dt) = if global {
        (GRID, PI / GRID as f64)
    } else {
        (1, LOCAL_THETA)
    };
    for a in 0..thetas {
        let theta = if global {
            PI * a as f64 / GRID as f64
        } else {
            LOCAL_THETA
        };
        for b in 0..GRID {
            let phi = TAU * b as f64 / GRID as f64;
            let cost = cost_at(theta, phi);
            if cost < best.2 {
                best = (theta, phi, cost);
            }
        }
    }
    let (mut theta, mut phi, mut cost) = best;
    let mut dp = TAU / GRID as f64;
    for _ in 0..REFINE_ROUNDS {
        let (t, ct) = golden(|t| cost_at(t, phi), theta - dt, theta + dt);
        if ct < cost {
            theta = t;
            cost = ct;
        }
        let (p, cp) = golden(|p| cost_at(theta, p), phi - dp, phi + dp);
        if cp < cost {
            phi = p;
            cost = cp;
        }
        dt *= 0.25;
        dp *= 0.25;
    }
    (theta, phi, cost)
}

/// Coordinate descent from the given rows of `U`; returns the sweep count.
fn descend(problem: &Problem, rows: &mut [ComplexVector], cfg: &OracleConfig) -> usize {
    let m = rows.len();
    let mut current = problem.objective(rows);
    for sweep in 0..cfg.max_iters {
        for p in 0..m {
            for q in (p + 1)..m {
                let bpp = problem.form(&rows[p], &rows[p]);
                let bpq = problem.form(&rows[p], &rows[q]);
                let bqq = problem.form(&rows[q], &rows[q]);
                let before = bpp.norm() + bqq.norm();
                let (theta, phi, after) = best_rotation(
                    |t, p| pair_cost(bpp, bpq, bqq, t, p),
                    sweep % GLOBAL_EVERY == 0,
                );
                if after < before {
                    let (s, c) = theta.sin_cos();
                    let e = C64::from_polar(s, -phi);
                    let (up, uq) = (rows[p].clone(), rows[q].clone());
                    rows[p] = &up * C64::new(c, 0.0) + &uq * e;
                    rows[q] = &uq * C64::new(c, 0.0) - &up * e.conj();
                }
            }
        }
        let next = problem.objective(rows);
        let gain = current - next;
        current = next;
        if gain < cfg.step_tolerance {
            return sweep + 1;
        }
    }
    cfg.max_iters
}

fn ensemble_sizes(r: usize, cfg: &OracleConfig) -> Result<Vec<usize>> {
    match cfg.ensemble_size {
        Some(m) if m < r || m > 2 * r + 4 => Err(Error::InvalidConfig(format!(
            "ensemble size {m} outside [{r}, {}]",
            2 * r + 4
        ))),
        Some(m) => Ok(vec![m]),
        None => {
            let mut s = vec![r, r + 1, r + 2, 2 * r];
            s.sort_unstable();
            s.dedup();
            Ok(s)
        }
    }
}

/// Restart 0 starts from the eigen-ensemble itself, the others from Haar isometries.
fn start_isometry(m: usize, r: usize, restart: usize, seed: u64) -> ComplexMatrix {
    if restart == 0 {
        ComplexMatrix::identity(m, r)
    } else {
        let mut rng = rng_from_seed(restart_seed(seed, m, restart));
        random_unitary(m, &mut rng).columns(0, r).into_owned()
    }
}

fn check_input(rho: &DensityMatrix, cfg: &OracleConfig) -> Result<()> {
    if rho.dim() > MAX_DIM {
        return Err(Error::TooLarge {
            dim: rho.dim(),
            limit: MAX_DIM,
        });
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    Ok(())
}

pub fn minimize(rho: &DensityMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    check_input(rho, cfg)?;
    crate::measures::require_even(rho.n_qubits())?;
    let eigen = eigen_ensemble(rho)?;
    let r = eigen.len();
    let sizes = ensemble_sizes(r, cfg)?;
    let tau = tau_matrix(&eigen)?;
    let problem = Problem { tau: &tau };

    let mut iterations = 0;
    let mut restart_values = vec![f64::INFINITY; cfg.restarts];
    let mut best: Option<(f64, Vec<ComplexVector>)> = None;
    for &m in &sizes {
        for (k, slot) in restart_values.iter_mut().enumerate() {
            let w = start_isometry(m, r, k, cfg.seed);
            let mut rows: Vec<ComplexVector> = (0..m)
                .map(|i| w.row(i).transpose().map(|z| z.conj()))
                .collect();
            iterations += descend(&problem, &mut rows, cfg);
            let value = problem.objective(&rows);
            *slot = slot.min(value);
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, rows));
            }
        }
    }
    let (_, rows) = best.expect("at least one restart ran");
    let members: Vec<ComplexVector> = rows
        .iter()
        .map(|u| {
            let mut z = ComplexVector::zeros(rho.dim());
            for (j, v) in eigen.members().iter().enumerate() {
                z += v * u[j].conj();
            }
            z
        })
        .collect();
    let best_ensemble = Ensemble::new(rho.n_qubits(), members)?;
    Ok(OracleResult {
        value: average_invariant(&best_ensemble)?,
        best_ensemble,
        iterations_used: iterations,
        restart_values,
    })
}

/// Average GM concurrence `sum_i p_i C_GM(psi_i)` minimized over decompositions.
///
/// Experimental: no closed form exists to check it against, and every trial
/// rotation recomputes two members' reduced states.
#[cfg(feature = "experimental-gm")]
pub fn minimize_gm(rho: &DensityMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    use crate::measures::gm_concurrence_pure;
    use crate::states::PureState;

    check_input(rho, cfg)?;
    let n = rho.n_qubits();
    let member_cost = |z: &ComplexVector| -> f64 {
        let w = z.norm_squared();
        if w <= f64::MIN_POSITIVE {
            return 0.0;
        }
        let psi =
            PureState::from_vector(n, z.unscale(w.sqrt())).expect("member has the state's size");
        w * gm_concurrence_pure(&psi).map(|r| r.value).unwrap_or(0.0)
    };
    let rotate = |zp: &ComplexVector, zq: &ComplexVector, theta: f64, phi: f64| {
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(s, -phi);
        (
            zp * C64::new(c, 0.0) + zq * e,
            zq * C64::new(c, 0.0) - zp * e.conj(),
        )
    };

    let eigen = eigen_ensemble(rho)?;
    let r = eigen.len();
    let sizes = ensemble_sizes(r, cfg)?;
    let mut iterations = 0;
    let mut restart_values = vec![f64::INFINITY; cfg.restarts];
    let mut best: Option<(f64, Vec<ComplexVector>)> = None;
    for &m in &sizes {
        for (k, slot) in restart_values.iter_mut().enumerate() {
            let w = start_isometry(m, r, k, cfg.seed);
            let mut members: Vec<ComplexVector> = (0..m)
                .map(|i| {
                    let mut z = ComplexVector::zeros(rho.dim());
                    for (j, v) in eigen.members().iter().enumerate() {
                        z += v * w[(i, j)];
                    }
                    z
                })
                .collect();
            let mut costs: Vec<f64> = members.iter().map(member_cost).collect();
            let mut current: f64 = costs.iter().sum();
            for sweep in 0..cfg.max_iters {
                iterations += 1;
                for p in 0..m {
                    for q in (p + 1)..m {
                        let (zp, zq) = (&members[p], &members[q]);
                        let (theta, phi, after) = best_rotation(
                            |t, f| {
                                let (a, b) = rotate(zp, zq, t, f);
                                member_cost(&a) + member_cost(&b)
                            },
                            sweep % GLOBAL_EVERY == 0,
                        );
                        if after < costs[p] + costs[q] {
                            let (a, b) = rotate(zp, zq, theta, phi);
                            costs[p] = member_cost(&a);
                            costs[q] = member_cost(&b);
                            members[p] = a;
                            members[q] = b;
                        }
                    }
                }
                let next: f64 = costs.iter().sum();
                let gain = current - next;
                current = next;
                if gain < cfg.step_tolerance {
                    break;
                }
            }
            *slot = slot.min(current);
            if best.as_ref().is_none_or(|(b, _)| current < *b) {
                best = Some((current, members));
            }
        }
    }
    let (value, members) = best.expect("at least one restart ran");
    Ok(OracleResult {
        value,
        best_ensemble: Ensemble::new(n, members)?,
        iterations_used: iterations,
        restart_values,
    })
}

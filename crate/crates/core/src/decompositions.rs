//! Pure-state decompositions of a density matrix.
//!
//! Starting from the subnormalized eigen-ensemble `{v_i}`, the symmetric
//! matrix `tau_ij = <v_i|v~_j>` is Takagi-diagonalized to give the
//! x-ensemble with `<x_i|x~_j> = l_i delta_ij`. Multiplying every member
//! but the first by `i` flips the sign of its self-overlap (y-ensemble),
//! so the signed overlaps sum to `l0 - sum_{k>=1} lk`. A real rotation of
//! the y-ensemble spreads that sum evenly over all members (equalized
//! ensemble), and when the sum is not positive a phased Hadamard mixing of
//! the x-ensemble yields members with vanishing self-overlap (zero polytope).

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{descending_order, hermitian_eig, takagi, ComplexMatrix, ComplexVector, C64};
use crate::measures::require_even;
use crate::states::{spin_flip_vector, DensityMatrix, Ensemble};

/// Eigenvalues below this are dropped from the eigen-ensemble.
pub const EIGEN_CUTOFF: f64 = 1e-12;
/// Zero-ensemble members lighter than this are pruned.
pub const PRUNE_WEIGHT: f64 = 1e-12;
/// Invariants at or below this are treated as zero by the equalizer.
pub const ZERO_CASE_TOL: f64 = 1e-10;
/// Largest invariant accepted by the zero-polytope construction.
pub const NOT_ZERO_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    Eigen,
    X,
    Y,
    Equalized,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemberStats {
    /// `<m|m>`.
    pub weight: f64,
    /// Pure invariant of the normalized member.
    pub invariant: f64,
    /// `<m|m~>`.
    pub overlap: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub ensemble: Ensemble,
    pub kind: DecompositionKind,
    pub per_member: Vec<MemberStats>,
    pub reconstruction_residual: f64,
    /// `sum_m |<m|m~>|`.
    pub average_invariant: f64,
    /// `sum_m <m|m~>`.
    pub signed_sum: C64,
    /// Largest off-diagonal magnitude of the ensemble's `tau` matrix.
    pub tau_offdiag: f64,
    /// Takagi values of the source `tau`, descending, padded to the dimension.
    pub lambdas: Vec<f64>,
}

impl DecompositionReport {
    fn build(
        rho: &DensityMatrix,
        ensemble: Ensemble,
        kind: DecompositionKind,
        lambdas: Vec<f64>,
    ) -> Result<Self> {
        let tau = tau_matrix(&ensemble)?;
        let mut per_member = Vec::with_capacity(ensemble.len());
        let mut tau_offdiag: f64 = 0.0;
        for (i, m) in ensemble.members().iter().enumerate() {
            let weight = m.norm_squared();
            let overlap = tau[(i, i)];
            let invariant = if weight > 0.0 {
                overlap.norm() / weight
            } else {
                0.0
            };
            per_member.push(MemberStats {
                weight,
                invariant,
                overlap,
            });
            for j in 0..ensemble.len() {
                if j != i {
                    tau_offdiag = tau_offdiag.max(tau[(i, j)].norm());
                }
            }
        }
        Ok(Self {
            reconstruction_residual: ensemble.reconstruction_residual(rho),
            average_invariant: per_member.iter().map(|m| m.overlap.norm()).sum(),
            signed_sum: per_member.iter().map(|m| m.overlap).sum(),
            ensemble,
            kind,
            per_member,
            tau_offdiag,
            lambdas,
        })
    }
}

/// Eigenvectors scaled by the square root of their eigenvalue.
pub fn eigen_ensemble(rho: &DensityMatrix) -> Result<Ensemble> {
    let eig = hermitian_eig(rho.matrix())?;
    let members: Vec<ComplexVector> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| **l >= EIGEN_CUTOFF)
        .map(|(k, l)| eig.eigenvectors.column(k).scale(l.sqrt()))
        .collect();
    Ensemble::new(rho.n_qubits(), members)
}

/// `tau_ij = <v_i|v~_j>`; complex symmetric for even `N`.
pub fn tau_matrix(e: &Ensemble) -> Result<ComplexMatrix> {
    let n = e.n_qubits();
    require_even(n)?;
    let flipped: Vec<ComplexVector> = e.members().iter().map(|v| spin_flip_vector(v, n)).collect();
    let r = e.len();
    Ok(ComplexMatrix::from_fn(r, r, |i, j| {
        e.members()[i].dotc(&flipped[j])
    }))
}

/// x-ensemble and its Takagi values.
fn x_members(rho: &DensityMatrix) -> Result<(Ensemble, Vec<f64>)> {
    require_even(rho.n_qubits())?;
    let eigen = eigen_ensemble(rho)?;
    let tau = tau_matrix(&eigen)?;
    let t = takagi(&tau)?;
    // x_i = sum_j conj(U_ij) v_j gives <x_i|x~_k> = (U tau U^T)_ik.
    let members: Vec<ComplexVector> = (0..eigen.len())
        .map(|i| {
            let mut x = ComplexVector::zeros(rho.dim());
            for (j, v) in eigen.members().iter().enumerate() {
                x += v * t.unitary[(i, j)].conj();
            }
            x
        })
        .collect();
    Ok((Ensemble::new(rho.n_qubits(), members)?, t.values))
}

fn padded(values: &[f64], dim: usize) -> Vec<f64> {
    let mut v = values.to_vec();
    v.resize(dim, 0.0);
    v
}

pub fn x_decomposition(rho: &DensityMatrix) -> Result<DecompositionReport> {
    let (ensemble, values) = x_members(rho)?;
    DecompositionReport::build(
        rho,
        ensemble,
        DecompositionKind::X,
        padded(&values, rho.dim()),
    )
}

fn y_members(x: &Ensemble) -> Result<Ensemble> {
    let i = C64::new(0.0, 1.0);
    let members = x
        .members()
        .iter()
        .enumerate()
        .map(|(k, m)| if k == 0 { m.clone() } else { m * i })
        .collect();
    Ensemble::new(x.n_qubits(), members)
}

/// y-ensemble: signed self-overlaps `(l0, -l1, -l2, ...)`.
pub fn optimal_decomposition(rho: &DensityMatrix) -> Result<DecompositionReport> {
    let (x, values) = x_members(rho)?;
    let y = y_members(&x)?;
    DecompositionReport::build(rho, y, DecompositionKind::Y, padded(&values, rho.dim()))
}

/// Real rotation of the y-ensemble after which every member has signed
/// overlap `C / r`.
///
/// Each step takes the active members with the largest and smallest
/// overlap, rotates them so the larger one lands exactly on the target, and
/// retires it. The active overlaps always average to the target, so a
/// root exists in every step; `r - 1` steps finish the job.
pub fn equalized_optimal_decomposition(rho: &DensityMatrix) -> Result<DecompositionReport> {
    let (x, values) = x_members(rho)?;
    let r = x.len();
    let total = values[0] - values[1..].iter().sum::<f64>();
    if total <= ZERO_CASE_TOL {
        return Err(Error::ZeroCase);
    }
    let target = total / r as f64;
    let mut members: Vec<ComplexVector> = y_members(&x)?.members().to_vec();
    let mut m = DMatrix::<f64>::zeros(r, r);
    for (k, v) in values.iter().enumerate() {
        m[(k, k)] = if k == 0 { *v } else { -*v };
    }
    let mut active: Vec<usize> = (0..r).collect();
    while active.len() > 1 {
        let (mut hi, mut lo) = (active[0], active[0]);
        for &k in &active {
            if m[(k, k)] > m[(hi, hi)] {
                hi = k;
            }
            if m[(k, k)] < m[(lo, lo)] {
                lo = k;
            }
        }
        if hi == lo || m[(hi, hi)] - target <= 1e-15 * total {
            break;
        }
        // new m_hh = mean + A cos(2t) + B sin(2t)
        let mean = 0.5 * (m[(hi, hi)] + m[(lo, lo)]);
        let a = 0.5 * (m[(hi, hi)] - m[(lo, lo)]);
        let b = m[(hi, lo)];
        let radius = a.hypot(b);
        let delta = b.atan2(a);
        let angle = 0.5 * (delta + ((target - mean) / radius).clamp(-1.0, 1.0).acos());
        let (s, c) = angle.sin_cos();
        rotate_rows(&mut m, hi, lo, c, s);
        rotate_cols(&mut m, hi, lo, c, s);
        let (mh, ml) = (members[hi].clone(), members[lo].clone());
        members[hi] = &mh * C64::new(c, 0.0) + &ml * C64::new(s, 0.0);
        members[lo] = &ml * C64::new(c, 0.0) - &mh * C64::new(s, 0.0);
        active.retain(|&k| k != hi);
    }
    let ensemble = Ensemble::new(rho.n_qubits(), members)?;
    DecompositionReport::build(
        rho,
        ensemble,
        DecompositionKind::Equalized,
        padded(&values, rho.dim()),
    )
}

fn rotate_rows(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for j in 0..m.ncols() {
        let (a, b) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = c * a + s * b;
        m[(q, j)] = c * b - s * a;
    }
}

fn rotate_cols(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.nrows() {
        let (a, b) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = c * a + s * b;
        m[(i, q)] = c * b - s * a;
    }
}

/// Phases with `sum_j l_j e^{2 i theta_j} = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseClosure {
    /// `theta_j` in `[0, 2pi)`.
    pub phases: Vec<f64>,
    /// `|sum_j l_j e^{2 i theta_j}|`.
    pub residual: f64,
}

fn closure_sum(lambdas: &[f64], doubled: &[f64]) -> C64 {
    lambdas
        .iter()
        .zip(doubled)
        .map(|(l, a)| C64::from_polar(*l, *a))
        .sum()
}

/// Split the weights greedily into three groups and close the triangle
/// formed by the group sums. Falls back to coordinate descent on the
/// phases if the greedy sums are not triangle-feasible.
pub fn phase_closure(lambdas: &[f64]) -> Result<PhaseClosure> {
    let total: f64 = lambdas.iter().sum();
    let largest = lambdas.iter().copied().fold(0.0, f64::max);
    if largest > total - largest + 1e-12 {
        return Err(Error::Infeasible {
            largest,
            rest: total - largest,
        });
    }
    let order = descending_order(lambdas);
    let mut sums = [0.0f64; 3];
    let mut group = vec![0usize; lambdas.len()];
    for &k in &order {
        let g = (0..3)
            .min_by(|&a, &b| sums[a].total_cmp(&sums[b]))
            .unwrap_or(0);
        group[k] = g;
        sums[g] += lambdas[k];
    }
    let feasible = {
        let max = sums.iter().copied().fold(0.0, f64::max);
        max <= sums.iter().sum::<f64>() - max + 1e-12 * total.max(1.0)
    };

    // Directions (doubled phases) of the three triangle sides.
    let mut dirs = [0.0f64; 3];
    if sums[0] > 0.0 && sums[1] > 0.0 {
        let cos_b =
            (sums[0] * sums[0] + sums[1] * sums[1] - sums[2] * sums[2]) / (2.0 * sums[0] * sums[1]);
        dirs[1] = PI - cos_b.clamp(-1.0, 1.0).acos();
    }
    let partial = C64::from_polar(sums[0], dirs[0]) + C64::from_polar(sums[1], dirs[1]);
    if partial.norm() > 0.0 {
        dirs[2] = (-partial).arg();
    }
    let mut doubled: Vec<f64> = group.iter().map(|&g| dirs[g].rem_euclid(TAU)).collect();

    let tol = 1e-10 * total.max(f64::MIN_POSITIVE);
    if !feasible || closure_sum(lambdas, &doubled).norm() > tol {
        for _ in 0..10_000 {
            for j in 0..lambdas.len() {
                let rest = closure_sum(lambdas, &doubled) - C64::from_polar(lambdas[j], doubled[j]);
                if rest.norm() > 0.0 {
                    doubled[j] = (-rest).arg().rem_euclid(TAU);
                }
            }
            if closure_sum(lambdas, &doubled).norm() < tol {
                break;
            }
        }
    }
    let residual = closure_sum(lambdas, &doubled).norm();
    Ok(PhaseClosure {
        phases: doubled.iter().map(|a| (0.5 * a).rem_euclid(TAU)).collect(),
        residual,
    })
}

/// Ensemble whose members all have zero self-overlap; requires `C(rho) = 0`.
///
/// The x-ensemble is padded with zero vectors to `2^N` members, phased with
/// a closure solution and mixed by the normalized `+-1` Hadamard pattern
/// `(-1)^{i.j}`. Every mixed member then has self-overlap
/// `conj(sum_j l_j e^{2 i theta_j}) / 2^N = 0`.
pub fn zero_polytope_decomposition(rho: &DensityMatrix) -> Result<DecompositionReport> {
    let (x, values) = x_members(rho)?;
    let dim = rho.dim();
    let lambdas = padded(&values, dim);
    let rest: f64 = lambdas[1..].iter().sum();
    let value = (lambdas[0] - rest).max(0.0);
    if value > NOT_ZERO_TOL {
        return Err(Error::NotZeroCase { value });
    }
    // Rounding can leave l0 a hair above the rest; close against the clamped value.
    let mut closable = lambdas.clone();
    closable[0] = closable[0].min(rest);
    let closure = phase_closure(&closable)?;
    let norm = 1.0 / (dim as f64).sqrt();
    let mut members = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut z = ComplexVector::zeros(dim);
        for (j, xj) in x.members().iter().enumerate() {
            let sign = if (i & j).count_ones() % 2 == 1 {
                -norm
            } else {
                norm
            };
            z += xj * C64::from_polar(sign, closure.phases[j]);
        }
        if z.norm_squared() >= PRUNE_WEIGHT {
            members.push(z);
        }
    }
    let ensemble = Ensemble::new(rho.n_qubits(), members)?;
    DecompositionReport::build(rho, ensemble, DecompositionKind::Zero, lambdas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag};
    use crate::measures::{mixed_invariant, pure_invariant_overlap};
    use crate::states::{
        random_density, random_unitary, rng_from_seed, standard_state, werner, PureState,
        StandardState,
    };

    fn bell_diagonal(p: f64) -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(2, vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        let minus =
            PureState::new(2, vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0)]).unwrap();
        plus.projector()
            .unwrap()
            .mix(&minus.projector().unwrap(), p)
            .unwrap()
    }

    #[test]
    fn eigen_ensemble_examples() {
        let ghz = standard_state(StandardState::Ghz, 4)
            .unwrap()
            .projector()
            .unwrap();
        assert_eq!(eigen_ensemble(&ghz).unwrap().len(), 1);

        let rho = DensityMatrix::new(2, diag(&[0.5, 0.5, 0.0, 0.0])).unwrap();
        let e = eigen_ensemble(&rho).unwrap();
        assert_eq!(e.len(), 2);
        for w in e.weights() {
            assert!((w - 0.5).abs() < 1e-15);
        }

        let rho = random_density(2, 3, 5).unwrap();
        let e = eigen_ensemble(&rho).unwrap();
        assert_eq!(e.len(), 3);
        assert!(e.reconstruction_residual(&rho) < 1e-10);
    }

    #[test]
    fn tau_examples() {
        let bell = standard_state(StandardState::BellPhiPlus, 2).unwrap();
        let e = Ensemble::new(2, vec![bell.amplitudes().clone()]).unwrap();
        let tau = tau_matrix(&e).unwrap();
        assert!((tau[(0, 0)].norm() - 1.0).abs() < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut a = ComplexVector::zeros(16);
        a[0] = c(h, 0.0);
        let mut b = ComplexVector::zeros(16);
        b[15] = c(h, 0.0);
        let tau = tau_matrix(&Ensemble::new(4, vec![a, b]).unwrap()).unwrap();
        assert_eq!(tau[(0, 0)], c(0.0, 0.0));
        assert_eq!(tau[(1, 1)], c(0.0, 0.0));
        assert!((tau[(0, 1)].norm() - 0.5).abs() < 1e-15);
        assert!((tau[(1, 0)].norm() - 0.5).abs() < 1e-15);

        let rho = random_density(4, 6, 8).unwrap();
        let tau = tau_matrix(&eigen_ensemble(&rho).unwrap()).unwrap();
        assert!((&tau - tau.transpose()).norm() <= 1e-10);

        let odd = Ensemble::new(3, vec![ComplexVector::zeros(8)]).unwrap();
        assert!(matches!(tau_matrix(&odd), Err(Error::OddN { .. })));
    }

    #[test]
    fn x_ensemble_is_diagonal() {
        for (n, rank) in [(2, 4), (4, 3), (4, 9)] {
            let rho = random_density(n, rank, 60 + rank as u64).unwrap();
            let x = x_decomposition(&rho).unwrap();
            let trace: f64 = x.lambdas.iter().sum();
            assert!(x.tau_offdiag <= 1e-9 * trace);
            assert!(x.reconstruction_residual <= 1e-9);
            for (m, l) in x.per_member.iter().zip(&x.lambdas) {
                assert!((m.overlap - c(*l, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn optimal_examples() {
        let ghz = standard_state(StandardState::Ghz, 4)
            .unwrap()
            .projector()
            .unwrap();
        let d = optimal_decomposition(&ghz).unwrap();
        assert_eq!(d.ensemble.len(), 1);
        assert!((d.average_invariant - 1.0).abs() < 1e-9);

        let d = optimal_decomposition(&werner(0.9).unwrap()).unwrap();
        assert!((d.signed_sum - c(0.85, 0.0)).norm() < 1e-8);

        let d = optimal_decomposition(&bell_diagonal(0.8)).unwrap();
        assert!((d.signed_sum - c(0.6, 0.0)).norm() < 1e-8);
        assert!(d.reconstruction_residual < 1e-9);
    }

    #[test]
    fn y_identity_on_random_states() {
        for (n, rank) in [(2, 2), (2, 4), (4, 2), (4, 7)] {
            let rho = random_density(n, rank, 70 + rank as u64).unwrap();
            let d = optimal_decomposition(&rho).unwrap();
            let l = &d.lambdas;
            let expect = l[0] - l[1..].iter().sum::<f64>();
            assert!((d.signed_sum - c(expect, 0.0)).norm() < 1e-8);
            assert!(d.reconstruction_residual < 1e-9);
        }
    }

    #[test]
    fn equalized_examples() {
        let ghz = standard_state(StandardState::Ghz, 4)
            .unwrap()
            .projector()
            .unwrap();
        let d = equalized_optimal_decomposition(&ghz).unwrap();
        assert_eq!(d.ensemble.len(), 1);

        let d = equalized_optimal_decomposition(&werner(0.9).unwrap()).unwrap();
        assert_eq!(d.ensemble.len(), 4);
        for m in &d.per_member {
            assert!((m.overlap - c(0.2125, 0.0)).norm() < 1e-8);
        }
        assert!((d.average_invariant - 0.85).abs() < 1e-8);

        let d = equalized_optimal_decomposition(&bell_diagonal(0.8)).unwrap();
        assert_eq!(d.ensemble.len(), 2);
        for m in &d.per_member {
            assert!((m.overlap - c(0.3, 0.0)).norm() < 1e-8);
        }
        assert!(matches!(
            equalized_optimal_decomposition(&werner(0.2).unwrap()),
            Err(Error::ZeroCase)
        ));
    }

    #[test]
    fn equalized_random() {
        for seed in 0..20 {
            let rho = random_density(2, 1 + (seed as usize % 4), seed).unwrap();
            let cval = mixed_invariant(&rho).unwrap().value;
            if cval <= 1e-6 {
                continue;
            }
            let d = equalized_optimal_decomposition(&rho).unwrap();
            assert!(d.reconstruction_residual < 1e-9);
            assert!((d.average_invariant - cval).abs() < 1e-7);
            let r = d.ensemble.len() as f64;
            for m in &d.per_member {
                assert!((m.overlap.re - cval / r).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn phase_closure_examples() {
        let p = phase_closure(&[1.0, 1.0]).unwrap();
        assert!(p.residual < 1e-12);
        assert!((2.0 * p.phases[0]).abs() < 1e-12);
        assert!((2.0 * p.phases[1] - PI).abs() < 1e-12);

        let p = phase_closure(&[1.0, 1.0, 1.0]).unwrap();
        assert!(p.residual < 1e-12);
        let doubled: Vec<f64> = p.phases.iter().map(|t| 2.0 * t).collect();
        assert!(doubled[0].abs() < 1e-12);
        assert!((doubled[1] - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((doubled[2] - 4.0 * PI / 3.0).abs() < 1e-12);

        let p = phase_closure(&[0.5, 0.3, 0.2]).unwrap();
        assert!(p.residual < 1e-12);
        assert!((2.0 * p.phases[1] - PI).abs() < 1e-6);
        assert!((2.0 * p.phases[2] - PI).abs() < 1e-6);

        assert!(matches!(
            phase_closure(&[1.0, 0.3, 0.2]),
            Err(Error::Infeasible { .. })
        ));
        assert_eq!(phase_closure(&[0.0, 0.0]).unwrap().residual, 0.0);
    }

    #[test]
    fn phase_closure_random() {
        let mut rng = rng_from_seed(3);
        use rand::Rng;
        for _ in 0..200 {
            let k = rng.random_range(2..20);
            let mut l: Vec<f64> = (0..k).map(|_| rng.random::<f64>().powi(3)).collect();
            l.sort_by(|a, b| b.total_cmp(a));
            let rest: f64 = l[1..].iter().sum();
            l[0] = l[0].min(rest);
            let total: f64 = l.iter().sum();
            let p = phase_closure(&l).unwrap();
            assert!(p.residual <= 1e-9 * total);
            assert!(p.phases.iter().all(|t| (0.0..TAU).contains(t)));
        }
    }

    #[test]
    fn zero_polytope_examples() {
        let mm = DensityMatrix::maximally_mixed(2).unwrap();
        let d = zero_polytope_decomposition(&mm).unwrap();
        assert_eq!(d.ensemble.len(), 4);
        assert!(d.per_member.iter().all(|m| m.overlap.norm() <= 1e-9));
        assert!(d.reconstruction_residual <= 1e-9);

        let d = zero_polytope_decomposition(&bell_diagonal(0.5)).unwrap();
        assert!(d.per_member.iter().all(|m| m.overlap.norm() <= 1e-9));
        assert!(d.reconstruction_residual <= 1e-9);
        assert!(d.average_invariant <= 1e-8);

        // A mixture of the zero ensemble's own members decomposes again.
        let members = d.ensemble.members().to_vec();
        let again =
            crate::states::density_from_ensemble(&Ensemble::new(2, members).unwrap()).unwrap();
        let d2 = zero_polytope_decomposition(&again).unwrap();
        assert!(d2.reconstruction_residual <= 1e-9);
        assert!(d2.per_member.iter().all(|m| m.invariant <= 1e-9));

        assert!(matches!(
            zero_polytope_decomposition(&werner(0.9).unwrap()),
            Err(Error::NotZeroCase { .. })
        ));
    }

    #[test]
    fn zero_polytope_random_mixtures() {
        let mut rng = rng_from_seed(77);
        for seed in 0..10 {
            let base = random_density(4, 2, seed).unwrap();
            let u = random_unitary(16, &mut rng);
            let mut rho = base.mix(&base.conjugated(&u).unwrap(), 0.5).unwrap();
            let mm = DensityMatrix::maximally_mixed(4).unwrap();
            while mixed_invariant(&rho).unwrap().value > 0.0 {
                rho = rho.mix(&mm, 0.8).unwrap();
            }
            let d = zero_polytope_decomposition(&rho).unwrap();
            assert!(d.reconstruction_residual <= 1e-9);
            for (m, v) in d.per_member.iter().zip(d.ensemble.members()) {
                let psi = PureState::from_vector(4, v.clone())
                    .unwrap()
                    .normalized()
                    .unwrap();
                assert!(pure_invariant_overlap(&psi).unwrap().value <= 1e-8);
                assert!(m.invariant <= 1e-8);
            }
        }
    }
}

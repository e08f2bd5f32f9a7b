//! Pure states, density matrices, ensembles and the spin-flip map.
//!
//! Basis index convention: qubit 0 is the most significant bit, so the
//! binary string `i1 i2 ... iN` read left to right is the integer index.
//! The complement of an index is its bitwise NOT on `N` bits.

mod random;
mod xstate;

pub use random::{
    random_density, random_pure, random_unitary, random_x_spec, rng_from_seed, StateRng,
};
pub use xstate::{werner, werner_spec, x_state_density, XRow, XStateSpec};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, ComplexMatrix, ComplexVector, C64};

/// Validation tolerance for Hermiticity, trace and positivity checks.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Largest register accepted by the dense constructors.
pub const MAX_QUBITS: usize = 12;

pub fn dim_of(n_qubits: usize) -> usize {
    1usize << n_qubits
}

pub fn complement(index: usize, n_qubits: usize) -> usize {
    !index & (dim_of(n_qubits) - 1)
}

/// Amplitude picked up by `|i>` under `sigma_y^{(x)N}`: `sigma_y |i> = flip_phase(i) |~i>`.
///
/// Each 0 bit contributes `i` and each 1 bit contributes `-i`.
pub fn flip_phase(index: usize, n_qubits: usize) -> C64 {
    let base = match n_qubits % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    };
    if index.count_ones() % 2 == 1 {
        -base
    } else {
        base
    }
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::BadArity(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: ComplexVector,
}

impl PureState {
    /// Amplitudes need not be normalized.
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        if amplitudes.len() != dim_of(n_qubits) {
            return Err(Error::DimensionMismatch {
                expected: dim_of(n_qubits),
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes: ComplexVector::from_vec(amplitudes),
        })
    }

    pub fn from_vector(n_qubits: usize, amplitudes: ComplexVector) -> Result<Self> {
        Self::new(n_qubits, amplitudes.iter().copied().collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState(
                "zero vector cannot be normalized".into(),
            ));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.unscale(norm),
        })
    }

    /// `|psi><psi|` of the normalized state.
    pub fn projector(&self) -> Result<DensityMatrix> {
        let psi = self.normalized()?;
        let m = &psi.amplitudes * psi.amplitudes.adjoint();
        Ok(DensityMatrix::from_raw(self.n_qubits, m))
    }

    /// Apply a linear map to the amplitudes.
    pub fn transformed(&self, op: &ComplexMatrix) -> Result<Self> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.nrows(),
            });
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: op * &self.amplitudes,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(n_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(n_qubits, matrix, VALIDATION_TOL)
    }

    /// Validate Hermiticity, unit trace and positivity with an absolute tolerance.
    pub fn with_tolerance(n_qubits: usize, matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = dim_of(n_qubits);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        let mut worst = (0.0, 0, 0);
        for i in 0..dim {
            for j in i..dim {
                let d = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        if worst.0 > tol {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian at row {}, column {}: deviation {:e}",
                worst.1, worst.2, worst.0
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(Error::InvalidDensity(format!(
                "trace {} deviates from 1 by {:e}",
                trace.re,
                1.0 - trace.re
            )));
        }
        let eig = hermitian_eig(&crate::linalg::hermitian_part(&matrix))?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { n_qubits, matrix })
    }

    pub(crate) fn from_raw(n_qubits: usize, matrix: ComplexMatrix) -> Self {
        Self { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = dim_of(n_qubits);
        Ok(Self::from_raw(
            n_qubits,
            ComplexMatrix::identity(dim, dim).unscale(dim as f64),
        ))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `t * self + (1 - t) * other`.
    pub fn mix(&self, other: &DensityMatrix, t: f64) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidDensity(format!(
                "mixing weight {t} outside [0, 1]"
            )));
        }
        Ok(Self::from_raw(
            self.n_qubits,
            self.matrix.scale(t) + other.matrix.scale(1.0 - t),
        ))
    }

    /// `U rho U^H`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.nrows(),
            });
        }
        Ok(Self::from_raw(
            self.n_qubits,
            u * &self.matrix * u.adjoint(),
        ))
    }
}

/// Subnormalized decomposition members `|v> = sqrt(p) |psi>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    n_qubits: usize,
    members: Vec<ComplexVector>,
}

impl Ensemble {
    pub fn new(n_qubits: usize, members: Vec<ComplexVector>) -> Result<Self> {
        check_qubits(n_qubits)?;
        if members.is_empty() {
            return Err(Error::InvalidEnsemble("no members".into()));
        }
        let dim = dim_of(n_qubits);
        if let Some((k, m)) = members.iter().enumerate().find(|(_, m)| m.len() != dim) {
            return Err(Error::InvalidEnsemble(format!(
                "member {k} has length {}, expected {dim}",
                m.len()
            )));
        }
        Ok(Self { n_qubits, members })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn members(&self) -> &[ComplexVector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.norm_squared()).collect()
    }

    /// `sum |v><v|`, unvalidated.
    pub fn outer_sum(&self) -> ComplexMatrix {
        let dim = dim_of(self.n_qubits);
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for m in &self.members {
            acc += m * m.adjoint();
        }
        acc
    }

    /// Frobenius distance between `sum |v><v|` and `rho`.
    pub fn reconstruction_residual(&self, rho: &DensityMatrix) -> f64 {
        (self.outer_sum() - rho.matrix()).norm()
    }
}

pub fn density_from_ensemble(e: &Ensemble) -> Result<DensityMatrix> {
    let total: f64 = e.weights().iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidEnsemble(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    Ok(DensityMatrix::from_raw(e.n_qubits, e.outer_sum()))
}

/// `sigma_y^{(x)N} conj(v)` for a raw amplitude vector.
pub fn spin_flip_vector(v: &ComplexVector, n_qubits: usize) -> ComplexVector {
    let mut out = ComplexVector::zeros(v.len());
    for (i, z) in v.iter().enumerate() {
        out[complement(i, n_qubits)] = flip_phase(i, n_qubits) * z.conj();
    }
    out
}

pub fn spin_flip_pure(psi: &PureState) -> PureState {
    PureState {
        n_qubits: psi.n_qubits,
        amplitudes: spin_flip_vector(&psi.amplitudes, psi.n_qubits),
    }
}

/// `sigma_y^{(x)N} X` applied to the rows of `x` (no conjugation).
pub fn sigma_y_rows(x: &ComplexMatrix, n_qubits: usize) -> ComplexMatrix {
    let dim = x.nrows();
    ComplexMatrix::from_fn(dim, x.ncols(), |m, k| {
        let src = complement(m, n_qubits);
        flip_phase(src, n_qubits) * x[(src, k)]
    })
}

/// `sigma_y^{(x)N} conj(rho) sigma_y^{(x)N}`.
pub fn spin_flip_matrix(rho: &ComplexMatrix, n_qubits: usize) -> ComplexMatrix {
    let dim = rho.nrows();
    ComplexMatrix::from_fn(dim, dim, |m, n| {
        let mb = complement(m, n_qubits);
        let nb = complement(n, n_qubits);
        flip_phase(mb, n_qubits) * rho[(mb, nb)].conj() * flip_phase(n, n_qubits)
    })
}

pub fn spin_flip_density(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_raw(rho.n_qubits, spin_flip_matrix(&rho.matrix, rho.n_qubits))
}

/// Reduced density matrix on the `keep` qubits (0-based, qubit 0 most significant).
///
/// The kept qubits index the result in ascending qubit order.
pub fn partial_trace(psi: &PureState, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = psi.n_qubits;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= n || keep.iter().any(|&q| q >= n) {
        return Err(Error::BadPartition { n_qubits: n });
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let gather = |index: usize, qubits: &[usize]| -> usize {
        qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1))
    };
    let rows = 1usize << keep.len();
    let cols = 1usize << traced.len();
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (i, z) in psi.amplitudes.iter().enumerate() {
        m[(gather(i, &keep), gather(i, &traced))] = *z;
    }
    Ok(&m * m.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardState {
    Ghz,
    W,
    BellPhiPlus,
    ProductZero,
}

impl std::str::FromStr for StandardState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ghz" => Ok(Self::Ghz),
            "w" => Ok(Self::W),
            "bell" | "bell_phi_plus" | "bell-phi-plus" => Ok(Self::BellPhiPlus),
            "product_zero" | "product-zero" | "zero" => Ok(Self::ProductZero),
            other => Err(Error::BadArity(format!("unknown standard state '{other}'"))),
        }
    }
}

pub fn standard_state(kind: StandardState, n_qubits: usize) -> Result<PureState> {
    check_qubits(n_qubits)?;
    let dim = dim_of(n_qubits);
    let mut amps = vec![c(0.0, 0.0); dim];
    match kind {
        StandardState::Ghz => {
            let a = std::f64::consts::FRAC_1_SQRT_2;
            amps[0] = c(a, 0.0);
            amps[dim - 1] = c(a, 0.0);
        }
        StandardState::W => {
            let a = 1.0 / (n_qubits as f64).sqrt();
            for q in 0..n_qubits {
                amps[1 << q] = c(a, 0.0);
            }
        }
        StandardState::BellPhiPlus => {
            if n_qubits != 2 {
                return Err(Error::BadArity(format!(
                    "Bell state needs 2 qubits, got {n_qubits}"
                )));
            }
            let a = std::f64::consts::FRAC_1_SQRT_2;
            amps[0] = c(a, 0.0);
            amps[3] = c(a, 0.0);
        }
        StandardState::ProductZero => amps[0] = c(1.0, 0.0),
    }
    PureState::new(n_qubits, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn basis(n: usize, index: usize) -> PureState {
        let mut v = vec![c(0.0, 0.0); dim_of(n)];
        v[index] = c(1.0, 0.0);
        PureState::new(n, v).unwrap()
    }

    #[test]
    fn flip_of_basis_state() {
        let out = spin_flip_pure(&basis(2, 0));
        assert_eq!(out.amplitudes()[3], c(-1.0, 0.0));
        assert_eq!(
            out.amplitudes().iter().filter(|z| z.norm() > 0.0).count(),
            1
        );
    }

    #[test]
    fn flip_of_bell_is_minus_bell() {
        let bell = standard_state(StandardState::BellPhiPlus, 2).unwrap();
        let out = spin_flip_pure(&bell);
        assert!((out.amplitudes() + bell.amplitudes()).norm() < 1e-15);
        let p = bell.projector().unwrap();
        assert!(close(spin_flip_density(&p).matrix(), p.matrix(), 1e-15));
    }

    #[test]
    fn flip_of_maximally_mixed() {
        for n in 1..=4 {
            let m = DensityMatrix::maximally_mixed(n).unwrap();
            assert!(close(spin_flip_density(&m).matrix(), m.matrix(), 0.0));
        }
    }

    #[test]
    fn double_flip_even_n_is_identity() {
        let mut rng = rng_from_seed(1);
        for n in [2, 4, 6] {
            let psi = random_pure(n, &mut rng).unwrap();
            let back = spin_flip_pure(&spin_flip_pure(&psi));
            assert!((back.amplitudes() - psi.amplitudes()).norm() < 1e-15);
        }
        // Odd N picks up a global sign.
        let psi = random_pure(3, &mut rng).unwrap();
        let back = spin_flip_pure(&spin_flip_pure(&psi));
        assert!((back.amplitudes() + psi.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn flip_density_matches_pure_flip_on_rank_one() {
        let mut rng = rng_from_seed(2);
        let psi = random_pure(4, &mut rng).unwrap();
        let lhs = spin_flip_density(&psi.projector().unwrap());
        let flipped = spin_flip_pure(&psi);
        let rhs = flipped.amplitudes() * flipped.amplitudes().adjoint();
        assert!(close(lhs.matrix(), &rhs, 1e-14));
    }

    #[test]
    fn flip_density_preserves_spectrum() {
        for (n, rank) in [(2, 3), (4, 5)] {
            let rho = random_density(n, rank, 17).unwrap();
            let flipped = spin_flip_density(&rho);
            let a = hermitian_eig(rho.matrix()).unwrap().eigenvalues;
            let b = hermitian_eig(flipped.matrix()).unwrap().eigenvalues;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
            assert!((flipped.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_y_rows_matches_flip() {
        let rho = random_density(2, 4, 5).unwrap();
        let n = 2;
        let s = sigma_y_rows(&ComplexMatrix::identity(4, 4), n);
        let explicit = &s * crate::linalg::conj(rho.matrix()) * &s;
        assert!(close(&explicit, spin_flip_density(&rho).matrix(), 1e-15));
    }

    #[test]
    fn ensemble_examples() {
        let bell = standard_state(StandardState::BellPhiPlus, 2).unwrap();
        let e = Ensemble::new(2, vec![bell.amplitudes().clone()]).unwrap();
        let rho = density_from_ensemble(&e).unwrap();
        assert!(close(
            rho.matrix(),
            bell.projector().unwrap().matrix(),
            1e-15
        ));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let e = Ensemble::new(
            2,
            vec![
                basis(2, 0).amplitudes().scale(h),
                basis(2, 3).amplitudes().scale(h),
            ],
        )
        .unwrap();
        let rho = density_from_ensemble(&e).unwrap();
        assert!(close(
            rho.matrix(),
            &crate::linalg::diag(&[0.5, 0.0, 0.0, 0.5]),
            1e-15
        ));

        let mut rng = rng_from_seed(3);
        let members: Vec<ComplexVector> = (0..3)
            .map(|_| {
                random_pure(2, &mut rng)
                    .unwrap()
                    .amplitudes()
                    .scale((1.0f64 / 3.0).sqrt())
            })
            .collect();
        let rho = density_from_ensemble(&Ensemble::new(2, members).unwrap()).unwrap();
        assert!(DensityMatrix::new(2, rho.into_matrix()).is_ok());
    }

    #[test]
    fn ensemble_rejects_bad_weights() {
        let e = Ensemble::new(2, vec![basis(2, 0).amplitudes().scale(0.5)]).unwrap();
        assert!(matches!(
            density_from_ensemble(&e),
            Err(Error::InvalidEnsemble(_))
        ));
        assert!(Ensemble::new(2, vec![]).is_err());
        assert!(Ensemble::new(2, vec![ComplexVector::zeros(3)]).is_err());
    }

    #[test]
    fn density_validation() {
        let mut m = crate::linalg::diag(&[0.5, 0.48, 0.0, 0.0]);
        let err = DensityMatrix::new(2, m.clone()).unwrap_err();
        assert!(err.to_string().contains("trace"));
        m[(1, 1)] = c(0.5, 0.0);
        assert!(DensityMatrix::new(2, m.clone()).is_ok());
        m[(0, 1)] = c(0.1, 0.0);
        assert!(DensityMatrix::new(2, m.clone())
            .unwrap_err()
            .to_string()
            .contains("Hermitian"));
        m[(1, 0)] = c(0.1, 0.0);
        assert!(DensityMatrix::new(2, m).is_ok());
        let neg = crate::linalg::diag(&[1.1, -0.1, 0.0, 0.0]);
        assert!(DensityMatrix::new(2, neg)
            .unwrap_err()
            .to_string()
            .contains("negative"));
        // Noisy input passes with a loosened tolerance.
        let noisy = crate::linalg::diag(&[0.5 + 1e-7, 0.5, 0.0, 0.0]);
        assert!(DensityMatrix::new(2, noisy.clone()).is_err());
        assert!(DensityMatrix::with_tolerance(2, noisy, 1e-6).is_ok());
    }

    #[test]
    fn partial_trace_examples() {
        let bell = standard_state(StandardState::BellPhiPlus, 2).unwrap();
        let r = partial_trace(&bell, &[0]).unwrap();
        assert!(close(&r, &crate::linalg::diag(&[0.5, 0.5]), 1e-15));

        let r = partial_trace(&basis(2, 0b01), &[0]).unwrap();
        assert!(close(&r, &crate::linalg::diag(&[1.0, 0.0]), 0.0));
        let r = partial_trace(&basis(2, 0b01), &[1]).unwrap();
        assert!(close(&r, &crate::linalg::diag(&[0.0, 1.0]), 0.0));

        let ghz = standard_state(StandardState::Ghz, 4).unwrap();
        let r = partial_trace(&ghz, &[0, 1]).unwrap();
        assert!(close(
            &r,
            &crate::linalg::diag(&[0.5, 0.0, 0.0, 0.5]),
            1e-15
        ));
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let ghz = standard_state(StandardState::Ghz, 3).unwrap();
        assert!(partial_trace(&ghz, &[]).is_err());
        assert!(partial_trace(&ghz, &[0, 1, 2]).is_err());
        assert!(partial_trace(&ghz, &[3]).is_err());
    }

    #[test]
    fn standard_states() {
        let ghz = standard_state(StandardState::Ghz, 4).unwrap();
        assert!((ghz.amplitudes()[0].re - 0.5f64.sqrt()).abs() < 1e-16);
        assert!((ghz.amplitudes()[15].re - 0.5f64.sqrt()).abs() < 1e-16);
        let w = standard_state(StandardState::W, 4).unwrap();
        for i in [1, 2, 4, 8] {
            assert_eq!(w.amplitudes()[i], c(0.5, 0.0));
        }
        assert!(w.is_normalized(1e-15));
        let z = standard_state(StandardState::ProductZero, 3).unwrap();
        assert_eq!(z.amplitudes()[0], c(1.0, 0.0));
        assert!(standard_state(StandardState::BellPhiPlus, 3).is_err());
        assert!(standard_state(StandardState::Ghz, 0).is_err());
    }

    proptest! {
        #[test]
        fn schmidt_symmetry(seed in 0u64..1000, n in 2usize..6, mask in 1usize..31) {
            let mut rng = rng_from_seed(seed);
            let psi = random_pure(n, &mut rng).unwrap();
            let keep: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
            prop_assume!(!keep.is_empty() && keep.len() < n);
            let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
            let a = hermitian_eig(&partial_trace(&psi, &keep).unwrap()).unwrap().eigenvalues;
            let b = hermitian_eig(&partial_trace(&psi, &rest).unwrap()).unwrap().eigenvalues;
            let k = a.len().min(b.len());
            for i in 0..k {
                prop_assert!((a[i] - b[i]).abs() < 1e-10);
            }
            for x in a[k..].iter().chain(&b[k..]) {
                prop_assert!(x.abs() < 1e-10);
            }
        }

        #[test]
        fn flip_is_involution_on_even_n(seed in 0u64..1000, half in 1usize..4, rank in 1usize..5) {
            let n = 2 * half;
            let rho = random_density(n, rank, seed).unwrap();
            let twice = spin_flip_density(&spin_flip_density(&rho));
            prop_assert!((twice.matrix() - rho.matrix()).norm() <= 1e-12);
        }
    }
}

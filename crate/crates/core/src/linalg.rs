//! Dense complex matrix kernels.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. The three
//! decompositions used downstream live here: Hermitian eigendecomposition,
//! the PSD square root, and the Takagi factorization of complex symmetric
//! matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Relative tolerance for the Hermitian and symmetric input checks.
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Negative eigenvalues above this are treated as rounding and clamped to zero.
pub const DUST_TOL: f64 = 1e-10;
/// Eigenvalues below this make `psd_sqrt` fail.
pub const NEGATIVE_TOL: f64 = 1e-8;

/// Eigenvalues sorted descending, eigenvectors stored column-wise in the same order.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// `unitary * tau * unitary^T = diag(values)`, values real, nonnegative, descending.
#[derive(Debug, Clone)]
pub struct TakagiResult {
    pub unitary: ComplexMatrix,
    pub values: Vec<f64>,
}

impl TakagiResult {
    /// Frobenius norm of `U tau U^T - diag(values)`.
    pub fn residual(&self, tau: &ComplexMatrix) -> f64 {
        let d = &self.unitary * tau * self.unitary.transpose();
        let mut diff = d;
        for (k, v) in self.values.iter().enumerate() {
            diff[(k, k)] -= C64::new(*v, 0.0);
        }
        diff.norm()
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn conj(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|z| z.conj())
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Frobenius norm of `M - M^H`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// Frobenius norm of `M - M^T`.
pub fn symmetric_deviation(m: &ComplexMatrix) -> f64 {
    (m - m.transpose()).norm()
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Indices that sort `values` descending; ties keep their original order.
pub(crate) fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    idx
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let n = ensure_square(m)?;
    let dev = hermitian_deviation(m);
    if dev > STRUCTURE_TOL * m.norm() {
        return Err(Error::NotHermitian { deviation: dev });
    }
    if n == 0 {
        return Ok(HermitianEig {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = descending_order(&raw);
    let eigenvalues = order.iter().map(|&k| raw[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Hermitian PSD square root via the eigendecomposition.
///
/// Eigenvalues within `n * eps * max` of zero are rounding noise from a
/// rank-deficient input and are set to zero; their square roots would
/// otherwise be of order `1e-8`.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    if let Some(&min) = eig.eigenvalues.last() {
        if min < -NEGATIVE_TOL {
            return Err(Error::NotPsd { eigenvalue: min });
        }
    }
    let n = eig.eigenvalues.len();
    let floor = n as f64 * f64::EPSILON * eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, lam) in eig.eigenvalues.iter().enumerate() {
        let s = if *lam > floor { lam.sqrt() } else { 0.0 };
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    Ok(hermitian_part(&(scaled * v.adjoint())))
}

/// Takagi factorization of a complex symmetric matrix.
///
/// Writing `tau = X + iY`, a Takagi vector `q = u + iw` with
/// `tau conj(q) = sigma q` is exactly an eigenvector `[u; w]` of the real
/// symmetric matrix `[[X, Y], [Y, -X]]` with eigenvalue `sigma`. Eigenvalues of
/// that embedding come in `+-sigma` pairs and the positive half of its
/// eigenbasis gives an orthonormal set of Takagi vectors, including inside
/// degenerate blocks. The null space is completed by Gram-Schmidt.
pub fn takagi(tau: &ComplexMatrix) -> Result<TakagiResult> {
    let n = ensure_square(tau)?;
    let scale = tau.norm();
    let dev = symmetric_deviation(tau);
    if dev > STRUCTURE_TOL * scale {
        return Err(Error::NotSymmetric { deviation: dev });
    }
    if n == 0 {
        return Ok(TakagiResult {
            unitary: ComplexMatrix::zeros(0, 0),
            values: Vec::new(),
        });
    }
    let sym = (tau + tau.transpose()).scale(0.5);
    let mut embed = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = sym[(i, j)];
            embed[(i, j)] = z.re;
            embed[(i, j + n)] = z.im;
            embed[(i + n, j)] = z.im;
            embed[(i + n, j + n)] = -z.re;
        }
    }
    let eig = SymmetricEigen::new(embed);
    let raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = descending_order(&raw);
    let cutoff = 1e-13 * scale.max(f64::MIN_POSITIVE);

    let mut columns: Vec<ComplexVector> = Vec::with_capacity(n);
    let mut values: Vec<f64> = Vec::with_capacity(n);
    for &k in order.iter().take(n) {
        let sigma = raw[k];
        if sigma <= cutoff {
            break;
        }
        let col = eig.eigenvectors.column(k);
        let mut q = ComplexVector::from_fn(n, |i, _| C64::new(col[i], col[i + n]));
        let norm = q.norm();
        q.unscale_mut(norm);
        columns.push(q);
        values.push(sigma);
    }

    // Phase polish: make each diagonal entry of Q^H tau conj(Q) real positive.
    for q in columns.iter_mut() {
        let d = q.dotc(&(&sym * q.map(|z| z.conj())));
        if d.norm() > 0.0 {
            let half = C64::from_polar(1.0, 0.5 * d.arg());
            *q *= half;
        }
        canonical_sign(q);
    }

    complete_orthonormal(&mut columns, n);
    values.resize(n, 0.0);

    let q = ComplexMatrix::from_columns(&columns);
    Ok(TakagiResult {
        unitary: q.adjoint(),
        values,
    })
}

/// Flip the sign so the largest-magnitude component has a nonnegative real part.
fn canonical_sign(q: &mut ComplexVector) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in q.iter().enumerate() {
        let m = z.norm();
        if m > best_mag + 1e-12 {
            best = i;
            best_mag = m;
        }
    }
    if q[best].re < 0.0 {
        q.neg_mut();
    }
}

/// Extend an orthonormal set of columns to a basis of `C^n`.
pub(crate) fn complete_orthonormal(columns: &mut Vec<ComplexVector>, n: usize) {
    let mut candidate = 0;
    while columns.len() < n && candidate < n {
        let mut v = ComplexVector::zeros(n);
        v[candidate] = C64::new(1.0, 0.0);
        candidate += 1;
        for _ in 0..2 {
            for q in columns.iter() {
                let p = q.dotc(&v);
                v -= q * p;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v.unscale_mut(norm);
            columns.push(v);
        }
    }
}

/// Frobenius distance of `U^H U` from the identity.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    (u.adjoint() * u - ComplexMatrix::identity(n, n)).norm()
}

pub fn diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(values[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

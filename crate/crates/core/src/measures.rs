//! Scalar entanglement quantities.
//!
//! The degree-2 invariant of a pure state is `|sum_i (-1)^{|i|} psi_i psi_{~i}|`,
//! the full contraction of two copies of the state against `eps^{(x)N}`
//! with `eps = [[0, 1], [-1, 0]]`. It equals `|<psi|sigma_y^{(x)N}|psi*>|` and
//! vanishes identically for odd `N`. For mixed states the convex roof is
//! `max(0, l0 - l1 - ... )` over the descending eigenvalues of
//! `R = sqrt(sqrt(rho) rho~ sqrt(rho))`.

use serde::Serialize;

use crate::decompositions::{eigen_ensemble, tau_matrix};
use crate::error::{Error, Result};
use crate::linalg::{conj, hermitian_eig, psd_sqrt, takagi, ComplexMatrix, C64};
use crate::states::{
    complement, partial_trace, sigma_y_rows, spin_flip_pure, DensityMatrix, PureState, XStateSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Contraction,
    Overlap,
    REigen,
    TauEigen,
    XAnalytic,
    GmPure,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub value: f64,
    pub method: Method,
    /// Descending spectrum feeding the closed formula, when one is used.
    pub eigenvalues: Option<Vec<f64>>,
    /// Largest internal consistency gap observed while computing `value`.
    pub residual: f64,
    /// Uncorrected X-state value (half of `value`).
    pub raw_value: Option<f64>,
    pub note: Option<String>,
}

impl MeasureReport {
    fn new(value: f64, method: Method) -> Self {
        Self {
            value,
            method,
            eigenvalues: None,
            residual: 0.0,
            raw_value: None,
            note: None,
        }
    }
}

/// `max(0, l0 - sum_{k>=1} lk)` for a descending list.
pub fn invariant_from_lambdas(lambdas: &[f64]) -> f64 {
    match lambdas.split_first() {
        Some((first, rest)) => (first - rest.iter().sum::<f64>()).max(0.0),
        None => 0.0,
    }
}

pub(crate) fn require_even(n_qubits: usize) -> Result<()> {
    if !n_qubits.is_multiple_of(2) {
        return Err(Error::OddN { n_qubits });
    }
    Ok(())
}

/// Signed contraction `sum_i (-1)^{|i|} psi_i psi_{~i}` (zero for odd `N`).
pub fn contraction(psi: &PureState) -> C64 {
    let n = psi.n_qubits();
    if n % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let a = psi.amplitudes();
    a.iter()
        .enumerate()
        .map(|(i, z)| {
            let term = z * a[complement(i, n)];
            if i.count_ones() % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .sum()
}

pub fn pure_invariant_contraction(psi: &PureState) -> MeasureReport {
    let mut report = MeasureReport::new(contraction(psi).norm(), Method::Contraction);
    if psi.n_qubits() % 2 == 1 {
        report.note = Some("odd N: invariant identically zero".into());
    }
    report
}

pub fn pure_invariant_overlap(psi: &PureState) -> Result<MeasureReport> {
    require_even(psi.n_qubits())?;
    let flipped = spin_flip_pure(psi);
    let overlap = psi.amplitudes().dotc(flipped.amplitudes());
    Ok(MeasureReport::new(overlap.norm(), Method::Overlap))
}

/// `R` together with its descending eigenvalues.
#[derive(Debug, Clone)]
pub struct RSpectrum {
    pub r: ComplexMatrix,
    pub lambdas: Vec<f64>,
    /// `|R R - sqrt(rho) rho~ sqrt(rho)|_F`.
    pub residual: f64,
}

/// Builds `R` from the factor `A = sqrt(rho) S conj(sqrt(rho))` with
/// `S = sigma_y^{(x)N}`: `sqrt(rho) rho~ sqrt(rho) = A A^H`, so the
/// eigenvalues of `R` are the singular values of `A`. These are read off the
/// Hermitian matrix `[[0, A], [A^H, 0]]`, whose eigenvalues are `+-sigma`
/// with eigenvectors `[u; v] / sqrt(2)`; the top half of the spectrum gives
/// `R = sum sigma u u^H`. This avoids square roots of rounding-level
/// eigenvalues of `R^2`.
pub fn r_spectrum(rho: &DensityMatrix) -> Result<RSpectrum> {
    require_even(rho.n_qubits())?;
    let n = rho.n_qubits();
    let dim = rho.dim();
    let root = psd_sqrt(rho.matrix())?;
    let a = &root * sigma_y_rows(&conj(&root), n);
    let mut h = ComplexMatrix::zeros(2 * dim, 2 * dim);
    h.view_mut((0, dim), (dim, dim)).copy_from(&a);
    h.view_mut((dim, 0), (dim, dim)).copy_from(&a.adjoint());
    let eig = hermitian_eig(&h)?;
    let lambdas: Vec<f64> = eig.eigenvalues[..dim].iter().map(|x| x.max(0.0)).collect();
    let mut r = ComplexMatrix::zeros(dim, dim);
    for (k, l) in lambdas.iter().enumerate() {
        if *l > 0.0 {
            let u = eig.eigenvectors.view((0, k), (dim, 1));
            r += (u * u.adjoint()) * C64::new(2.0 * l, 0.0);
        }
    }
    let r = crate::linalg::hermitian_part(&r);
    let residual = (&r * &r - &a * a.adjoint()).norm();
    Ok(RSpectrum {
        r,
        lambdas,
        residual,
    })
}

pub fn mixed_invariant(rho: &DensityMatrix) -> Result<MeasureReport> {
    let spec = r_spectrum(rho)?;
    let mut report = MeasureReport::new(invariant_from_lambdas(&spec.lambdas), Method::REigen);
    report.residual = spec.residual;
    report.eigenvalues = Some(spec.lambdas);
    Ok(report)
}

/// Same quantity from the Takagi values of `tau_ij = <v_i|v~_j>` over the
/// subnormalized eigenvectors of `rho`.
pub fn mixed_invariant_via_tau(rho: &DensityMatrix) -> Result<MeasureReport> {
    require_even(rho.n_qubits())?;
    let ensemble = eigen_ensemble(rho)?;
    let tau = tau_matrix(&ensemble)?;
    let t = takagi(&tau)?;
    let mut lambdas = t.values.clone();
    lambdas.resize(rho.dim(), 0.0);
    let mut report = MeasureReport::new(invariant_from_lambdas(&lambdas), Method::TauEigen);
    report.residual = t.residual(&tau);
    report.eigenvalues = Some(lambdas);
    Ok(report)
}

/// Diagonal pairs `(a_j, b_j)` at `(j, j)` and `(~j, ~j)` and the
/// off-diagonal `z_j` at `(j, ~j)`, for each block index `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XCoefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub z: Vec<C64>,
}

pub fn x_coefficients(spec: &XStateSpec) -> XCoefficients {
    let mut out = XCoefficients {
        a: Vec::with_capacity(spec.rows().len()),
        b: Vec::with_capacity(spec.rows().len()),
        z: Vec::with_capacity(spec.rows().len()),
    };
    for row in spec.rows() {
        let (s, c) = (row.theta / 2.0).sin_cos();
        out.a.push(row.p_plus * c * c + row.p_minus * s * s);
        out.b.push(row.p_minus * c * c + row.p_plus * s * s);
        out.z.push(
            C64::from_polar(1.0, -row.phi) * (0.5 * row.theta.sin() * (row.p_plus - row.p_minus)),
        );
    }
    out
}

/// Closed form on the X family.
///
/// `raw_value` is `max_i max(0, |z_i| - sum_{j != i} sqrt(a_j b_j))`; the
/// reported `value` is twice that, which is what the `R`-spectrum formula
/// gives on the same matrices (the spectrum of each block is
/// `sqrt(a b) +- |z|`).
pub fn x_state_invariant(spec: &XStateSpec) -> Result<MeasureReport> {
    require_even(spec.n_qubits())?;
    let coeffs = x_coefficients(spec);
    let geo: Vec<f64> = coeffs
        .a
        .iter()
        .zip(&coeffs.b)
        .map(|(a, b)| (a * b).max(0.0).sqrt())
        .collect();
    let total: f64 = geo.iter().sum();
    let raw = coeffs
        .z
        .iter()
        .zip(&geo)
        .map(|(z, g)| (z.norm() - (total - g)).max(0.0))
        .fold(0.0, f64::max);
    let mut report = MeasureReport::new(2.0 * raw, Method::XAnalytic);
    report.raw_value = Some(raw);
    Ok(report)
}

/// Minimum over bipartitions of `sqrt(2 (1 - Tr rho_A^2))`.
pub fn gm_concurrence_pure(psi: &PureState) -> Result<MeasureReport> {
    let n = psi.n_qubits();
    if n < 2 {
        return Err(Error::BadArity(format!(
            "GM concurrence needs at least 2 qubits, got {n}"
        )));
    }
    let psi = psi.normalized()?;
    let full = (1usize << (n - 1)) - 1;
    let mut best = f64::INFINITY;
    // keep sets always contain qubit 0; `mask` selects the others.
    for mask in 0..full {
        let mut keep = vec![0usize];
        keep.extend((1..n).filter(|q| mask >> (q - 1) & 1 == 1));
        let reduced = partial_trace(&psi, &keep)?;
        let purity = (&reduced * &reduced).trace().re;
        let value = (2.0 * (1.0 - purity)).max(0.0).sqrt();
        best = best.min(value);
    }
    Ok(MeasureReport::new(best, Method::GmPure))
}

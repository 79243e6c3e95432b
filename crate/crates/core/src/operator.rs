use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Eigensystem};

/// Relative tolerance of the Hermiticity check on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Looser tolerance for results of long products (commutator chains).
pub(crate) const COMPUTED_HERMITIAN_TOL: f64 = 1e-10;

/// Dense complex Hermitian matrix (ħ = 1 energy units).
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Wraps `matrix`, rejecting it when
    /// `max |m_ij - conj(m_ji)| > 1e-12 * max |m_ij|`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, HERMITIAN_TOL)
    }

    pub fn with_tolerance(matrix: CMatrix, rel_tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { left: matrix.nrows(), right: matrix.ncols() });
        }
        let scale = linalg::max_abs(&matrix);
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > rel_tol * scale {
            return Err(Error::Invariant(format!("matrix is not Hermitian: defect {defect:e} at scale {scale:e}")));
        }
        Ok(Self { matrix })
    }

    /// Checks at `rel_tol` and then replaces the matrix by `(M + M^†)/2`.
    pub(crate) fn hermitized(matrix: CMatrix, rel_tol: f64) -> Result<Self> {
        let op = Self::with_tolerance(matrix, rel_tol)?;
        let adj = linalg::adjoint(&op.matrix);
        let n = op.dim();
        let sym = CMatrix::from_fn(n, n, |i, j| (op.matrix[(i, j)] + adj[(i, j)]) * 0.5);
        Ok(Self { matrix: sym })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: linalg::zeros(dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: linalg::identity(dim) }
    }

    pub fn from_real_diagonal(entries: &[f64]) -> Self {
        Self { matrix: linalg::real_diagonal(entries) }
    }

    /// Real symmetric tridiagonal matrix; `off` has length `diag.len() - 1`.
    pub fn real_tridiagonal(diag: &[f64], off: &[f64]) -> Self {
        let n = diag.len();
        assert_eq!(off.len(), n.saturating_sub(1));
        let mut m = linalg::real_diagonal(diag);
        for (k, &t) in off.iter().enumerate() {
            m[(k + 1, k)] = t.into();
            m[(k, k + 1)] = t.into();
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { matrix: linalg::scale_real(&self.matrix, k) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: linalg::add(&self.matrix, &other.matrix)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: linalg::sub(&self.matrix, &other.matrix)? })
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn eigensystem(&self) -> Result<Eigensystem> {
        linalg::eigh(&self.matrix)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }
}

/// Serializable dense snapshot, row-major, used for reports and fixtures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseEntries {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&HermitianOperator> for DenseEntries {
    fn from(op: &HermitianOperator) -> Self {
        let n = op.dim();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = op.matrix[(i, j)];
                re.push(z.re);
                im.push(z.im);
            }
        }
        Self { dim: n, re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn rejects_non_hermitian() {
        let mut m = linalg::zeros(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(HermitianOperator::new(m), Err(Error::Invariant(_))));
    }

    #[test]
    fn rejects_rectangular() {
        let m = CMatrix::zeros(2, 3);
        assert!(HermitianOperator::new(m).is_err());
    }

    #[test]
    fn accepts_hermitian_with_complex_offdiagonal() {
        let mut m = linalg::zeros(2);
        m[(0, 1)] = Complex64::new(0.5, 0.25);
        m[(1, 0)] = Complex64::new(0.5, -0.25);
        let op = HermitianOperator::new(m).unwrap();
        let vals = op.eigenvalues().unwrap();
        let r = (0.5f64.powi(2) + 0.25f64.powi(2)).sqrt();
        assert!((vals[0] + r).abs() < 1e-14 && (vals[1] - r).abs() < 1e-14);
    }

    #[test]
    fn hermitized_removes_small_defect() {
        let mut m = linalg::zeros(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        m[(1, 0)] = Complex64::new(1.0 + 1e-13, 0.0);
        let op = HermitianOperator::hermitized(m, 1e-10).unwrap();
        assert_eq!(op.hermiticity_defect(), 0.0);
    }
}

//! Dense complex matrix helpers shared by every module.
//!
//! Matrices are column-major [`faer::Mat`] values over [`Complex64`]. Most of
//! the operators built in this crate are banded in the `J_z` basis, so the
//! product routine switches to an explicit band loop when that is cheaper
//! than a dense GEMM.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Mat<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn zeros(n: usize) -> CMatrix {
    Mat::zeros(n, n)
}

pub fn identity(n: usize) -> CMatrix {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn diagonal(entries: &[Complex64]) -> CMatrix {
    let n = entries.len();
    Mat::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
}

pub fn real_diagonal(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    Mat::from_fn(n, n, |i, j| if i == j { Complex64::new(entries[i], 0.0) } else { ZERO })
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    Mat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

pub fn max_abs(m: &CMatrix) -> f64 {
    let mut out = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}

/// `max_ij |m_ij - conj(m_ji)|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut out = 0.0f64;
    for j in 0..n {
        for i in j..n {
            out = out.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    out
}

/// Largest `|i - j|` carrying a nonzero entry.
pub fn bandwidth(m: &CMatrix) -> usize {
    let mut bw = 0usize;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)] != ZERO {
                bw = bw.max(i.abs_diff(j));
            }
        }
    }
    bw
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.nrows(), b.nrows());
    assert_eq!(a.ncols(), b.ncols());
    let mut out = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            out = out.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    out
}

fn check_square_pair(a: &CMatrix, b: &CMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { left: a.nrows(), right: a.ncols() });
    }
    if b.nrows() != b.ncols() {
        return Err(Error::DimensionMismatch { left: b.nrows(), right: b.ncols() });
    }
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch { left: a.nrows(), right: b.nrows() });
    }
    Ok(a.nrows())
}

pub fn add(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_square_pair(a, b)?;
    Ok(Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + b[(i, j)]))
}

pub fn sub(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_square_pair(a, b)?;
    Ok(Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - b[(i, j)]))
}

pub fn scale(m: &CMatrix, k: Complex64) -> CMatrix {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * k)
}

pub fn scale_real(m: &CMatrix, k: f64) -> CMatrix {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * k)
}

/// `acc += k * m`
pub fn axpy(acc: &mut CMatrix, k: Complex64, m: &CMatrix) {
    assert_eq!(acc.nrows(), m.nrows());
    assert_eq!(acc.ncols(), m.ncols());
    if k == ZERO {
        return;
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != ZERO {
                acc[(i, j)] += k * v;
            }
        }
    }
}

/// Matrix product of two square matrices.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = check_square_pair(a, b)?;
    let (ba, bb) = (bandwidth(a), bandwidth(b));
    // band loop costs n(2ba+1)(2bb+1); dense costs n^3
    if (2 * ba + 1) * (2 * bb + 1) * 8 < n {
        Ok(banded_matmul(a, b, ba, bb))
    } else {
        Ok(a * b)
    }
}

fn banded_matmul(a: &CMatrix, b: &CMatrix, ba: usize, bb: usize) -> CMatrix {
    let n = a.nrows();
    let mut c = zeros(n);
    for k in 0..n {
        let j_lo = k.saturating_sub(bb);
        let j_hi = (k + bb).min(n - 1);
        for j in j_lo..=j_hi {
            let bjk = b[(j, k)];
            if bjk == ZERO {
                continue;
            }
            let i_lo = j.saturating_sub(ba);
            let i_hi = (j + ba).min(n - 1);
            for i in i_lo..=i_hi {
                c[(i, k)] += a[(i, j)] * bjk;
            }
        }
    }
    c
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let ab = matmul(a, b)?;
    let ba = matmul(b, a)?;
    sub(&ab, &ba)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Diagonal phase gauge `D` with `D^† H D` real symmetric, for tridiagonal `H`.
fn tridiagonal_gauge(m: &CMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    let mut phases = vec![ONE; n];
    for k in 0..n.saturating_sub(1) {
        let b = m[(k + 1, k)];
        let r = b.norm();
        phases[k + 1] = if r > 0.0 { phases[k] * (b / r) } else { phases[k] };
    }
    phases
}

fn real_tridiagonal(m: &CMatrix) -> Mat<f64> {
    let n = m.nrows();
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            m[(i, i)].re
        } else if i.abs_diff(j) == 1 {
            m[(i.max(j), i.min(j))].norm()
        } else {
            0.0
        }
    })
}

fn evd_error(e: impl std::fmt::Debug) -> Error {
    Error::Numerical(format!("eigendecomposition failed: {e:?}"))
}

/// Ascending eigenvalues of a Hermitian matrix. Only the lower triangle is read.
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if bandwidth(m) <= 1 {
        let t = real_tridiagonal(m);
        return t.self_adjoint_eigenvalues(Side::Lower).map_err(evd_error);
    }
    m.self_adjoint_eigenvalues(Side::Lower).map_err(evd_error)
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(m: &CMatrix) -> Result<Eigensystem> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Eigensystem { values: Vec::new(), vectors: zeros(0) });
    }
    if bandwidth(m) <= 1 {
        let phases = tridiagonal_gauge(m);
        let t = real_tridiagonal(m);
        let evd = t.self_adjoint_eigen(Side::Lower).map_err(evd_error)?;
        let u = evd.U();
        let values = (0..n).map(|k| evd.S()[k]).collect();
        let vectors = Mat::from_fn(n, n, |i, k| phases[i] * u[(i, k)]);
        return Ok(Eigensystem { values, vectors });
    }
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(evd_error)?;
    let values = (0..n).map(|k| evd.S()[k].re).collect();
    Ok(Eigensystem { values, vectors: evd.U().to_owned() })
}

/// Eigenvalues of a general (non-Hermitian) square matrix.
pub fn eigvals_general(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.eigenvalues().map_err(evd_error)
}

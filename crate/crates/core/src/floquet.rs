//! Exact one-period propagators and their eigenphases.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::effective::{heff_delta_kicked, KickedSystem};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operator::HermitianOperator;
use crate::su2::{self, SpinLabel};

pub const UNITARY_TOL: f64 = 1e-10;
const MODULUS_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct UnitaryOperator {
    matrix: CMatrix,
}

impl UnitaryOperator {
    /// Rejects `matrix` when `max |U^† U - 1| > 1e-10`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { left: matrix.nrows(), right: matrix.ncols() });
        }
        let defect = unitarity_defect(&matrix);
        if defect > UNITARY_TOL {
            return Err(Error::Invariant(format!("matrix is not unitary: defect {defect:e}")));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: linalg::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn compose(&self, right: &UnitaryOperator) -> Result<UnitaryOperator> {
        UnitaryOperator::new(linalg::matmul(&self.matrix, &right.matrix)?)
    }

    pub fn adjoint(&self) -> UnitaryOperator {
        Self { matrix: linalg::adjoint(&self.matrix) }
    }
}

pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let prod = &linalg::adjoint(m) * m;
    linalg::max_abs_diff(&prod, &linalg::identity(m.nrows()))
}

/// `exp(-i s H)` through the eigendecomposition of `H`.
pub fn unitary_from_hermitian(h: &HermitianOperator, s: f64) -> Result<UnitaryOperator> {
    let eig = h.eigensystem()?;
    let n = h.dim();
    let w = &eig.vectors;
    let phases: Vec<Complex64> = eig.values.iter().map(|&l| Complex64::from_polar(1.0, -s * l)).collect();
    let scaled = CMatrix::from_fn(n, n, |i, k| w[(i, k)] * phases[k]);
    UnitaryOperator::new(&scaled * &linalg::adjoint(w))
}

/// Floquet operator of the double kicked top,
/// `exp{-i alpha (J_+ e^{iX} + h.c.)} exp(-i alpha J_x)`.
pub fn dkt_floquet(alpha: f64, eta: f64, spin: SpinLabel) -> Result<UnitaryOperator> {
    let generator = su2::dkt_generator(alpha, eta, spin)?;
    let jx = su2::spin_operators(spin).jx;
    let free = unitary_from_hermitian(&generator, 1.0)?;
    let kick = unitary_from_hermitian(&jx, alpha)?;
    free.compose(&kick)
}

/// `exp(-i H0 T) exp(-i V)` for a delta-kicked system.
pub fn kicked_floquet(sys: &KickedSystem) -> Result<UnitaryOperator> {
    let free = unitary_from_hermitian(sys.h0(), sys.period())?;
    let kick = unitary_from_hermitian(sys.kick(), 1.0)?;
    free.compose(&kick)
}

/// Maps `x` into `(-pi, pi]`.
pub fn fold_phase(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let y = x - two_pi * ((x - PI) / two_pi).ceil();
    // ceil can land on -pi for x = -pi + tiny rounding
    if y <= -PI {
        y + two_pi
    } else {
        y
    }
}

/// Distance between two phases on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    fold_phase(a - b).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasienergySpectrum {
    /// Ascending, each in `(-pi, pi]`. An eigenvalue `e^{-i theta}` of the
    /// propagator has quasienergy phase `theta`, so `exp(-iHT)` yields `E T`.
    pub phases: Vec<f64>,
}

pub fn quasienergy_spectrum(u: &UnitaryOperator) -> Result<QuasienergySpectrum> {
    let eig = linalg::eigvals_general(u.matrix())?;
    let mut phases = Vec::with_capacity(eig.len());
    for z in eig {
        if (z.norm() - 1.0).abs() > MODULUS_TOL {
            return Err(Error::Invariant(format!("eigenvalue modulus {} is off the unit circle", z.norm())));
        }
        phases.push(fold_phase(-z.arg()));
    }
    phases.sort_by(f64::total_cmp);
    Ok(QuasienergySpectrum { phases })
}

/// Folded `E_k T`, sorted ascending.
pub fn folded_energies(energies: &[f64], period: f64) -> Vec<f64> {
    let mut out: Vec<f64> = energies.iter().map(|&e| fold_phase(e * period)).collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Largest circular distance between matched sorted phase lists.
pub fn max_phase_mismatch(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| phase_distance(x, y)).fold(0.0, f64::max))
}

/// Parameters of the double kicked top.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DktParams {
    pub alpha: f64,
    pub eta: f64,
    pub spin: SpinLabel,
    pub period: f64,
}

impl DktParams {
    pub fn new(alpha: f64, eta: f64, spin: SpinLabel) -> Self {
        Self { alpha, eta, spin, period: 1.0 }
    }

    /// Single-kicked system with `H0 = (alpha/T)(J_+ e^{iX} + h.c.)` and `V = alpha J_x`.
    pub fn kicked_system(&self) -> Result<KickedSystem> {
        let h0 = su2::dkt_static_part(self.alpha, self.eta, self.spin, self.period)?;
        let v = su2::spin_operators(self.spin).jx.scaled(self.alpha);
        KickedSystem::new(h0, v, self.period)
    }

    pub fn effective_hamiltonian(&self) -> Result<HermitianOperator> {
        heff_delta_kicked(&self.kicked_system()?)
    }
}

/// Max over sorted pairs of `|fold(E_k T) - theta_k|` between the effective
/// Hamiltonian spectrum and the exact quasienergies.
pub fn effective_vs_floquet_error(p: &DktParams) -> Result<f64> {
    let heff = p.effective_hamiltonian()?;
    let energies = folded_energies(&heff.eigenvalues()?, p.period);
    let exact = quasienergy_spectrum(&dkt_floquet(p.alpha, p.eta, p.spin)?)?;
    max_phase_mismatch(&energies, &exact.phases)
}

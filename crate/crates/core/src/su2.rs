//! Angular-momentum operators and the SU(2) Hamiltonians built from them.
//!
//! Everything is expressed in the `J_z` eigenbasis with index `i = m + j`,
//! so row 0 is `m = -j` and the last row is `m = +j`.
//!
//! `J_+` here is *half* the usual ladder operator: `J_+ = (J_x + i J_y)/2`,
//! hence `J_+ + J_+^† = J_x`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Error, Result};
use crate::linalg::{self, CMatrix, I, ZERO};
use crate::operator::HermitianOperator;

/// Spin quantum number `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinLabel {
    twice_j: u32,
}

impl SpinLabel {
    pub fn from_twice(twice_j: u32) -> Self {
        Self { twice_j }
    }

    pub fn integer(j: u32) -> Self {
        Self { twice_j: 2 * j }
    }

    /// Accepts any non-negative `j` with `2j` integral.
    pub fn new(j: f64) -> Result<Self> {
        let t = 2.0 * j;
        if !(t.is_finite() && t >= 0.0 && (t - t.round()).abs() < 1e-9 && t <= u32::MAX as f64) {
            return Err(domain(format!("spin j = {j} is not a non-negative half-integer")));
        }
        Ok(Self { twice_j: t.round() as u32 })
    }

    pub fn twice_j(self) -> u32 {
        self.twice_j
    }

    pub fn j(self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.twice_j % 2 == 0
    }

    /// `m = -j, -j+1, ..., +j`.
    pub fn m_values(self) -> Vec<f64> {
        let j = self.j();
        (0..self.dim()).map(|i| i as f64 - j).collect()
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub jx: HermitianOperator,
    pub jy: HermitianOperator,
    pub jz: HermitianOperator,
    /// `(J_x + i J_y)/2`, not Hermitian.
    pub jplus: CMatrix,
}

/// Standard raising-operator element `<m+1| J_+^std |m>`.
fn ladder_element(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

pub fn spin_operators(spin: SpinLabel) -> SpinOperators {
    let d = spin.dim();
    let j = spin.j();
    let ms = spin.m_values();

    let mut raise = linalg::zeros(d);
    for i in 0..d.saturating_sub(1) {
        raise[(i + 1, i)] = ladder_element(j, ms[i]).into();
    }
    let lower = linalg::adjoint(&raise);

    let jx = CMatrix::from_fn(d, d, |a, b| (raise[(a, b)] + lower[(a, b)]) * 0.5);
    let jy = CMatrix::from_fn(d, d, |a, b| (raise[(a, b)] - lower[(a, b)]) * (-0.5 * I));
    let jplus = linalg::scale_real(&raise, 0.5);

    SpinOperators {
        jx: HermitianOperator::new(jx).expect("J_x is Hermitian"),
        jy: HermitianOperator::new(jy).expect("J_y is Hermitian"),
        jz: HermitianOperator::from_real_diagonal(&ms),
        jplus,
    }
}

/// Nearest-neighbour hopping `A = sum_m |m><m+1| + h.c.`
pub fn hopping_operator(spin: SpinLabel) -> HermitianOperator {
    let d = spin.dim();
    HermitianOperator::real_tridiagonal(&vec![0.0; d], &vec![1.0; d.saturating_sub(1)])
}

/// Diagonal entries `eta (2m + 1) / (2j)` of the phase operator `X`.
pub fn phase_diagonal(spin: SpinLabel, eta: f64) -> Result<Vec<f64>> {
    if spin.twice_j() == 0 {
        return Err(domain("phase operator X is undefined for j = 0"));
    }
    if !eta.is_finite() {
        return Err(domain("eta must be finite"));
    }
    let j = spin.j();
    Ok(spin.m_values().into_iter().map(|m| eta * (2.0 * m + 1.0) / (2.0 * j)).collect())
}

pub fn phase_operator(spin: SpinLabel, eta: f64) -> Result<HermitianOperator> {
    Ok(HermitianOperator::from_real_diagonal(&phase_diagonal(spin, eta)?))
}

/// Choice of the operator `C` in `a J_x + b A + [C cos(X) + h.c.]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CKind {
    /// `C = (alpha/2)(J_x + i J_y)`
    JplusHalf,
    /// `C = alpha J_x`
    Jx,
    /// `C = 1/2`
    HalfIdentity,
    /// `C = alpha`
    IdentityAlpha,
}

impl FromStr for CKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jplus_half" => Ok(Self::JplusHalf),
            "jx" => Ok(Self::Jx),
            "half_identity" => Ok(Self::HalfIdentity),
            "identity_alpha" => Ok(Self::IdentityAlpha),
            other => Err(config(format!("unknown c_kind `{other}`"))),
        }
    }
}

/// The six rows of the butterfly-family table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableCase {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl TableCase {
    pub const ALL: [TableCase; 6] =
        [TableCase::A, TableCase::B, TableCase::C, TableCase::D, TableCase::E, TableCase::F];

    /// Reference slope of `tau_q` versus `q` for this row.
    pub fn reference_slope(self) -> f64 {
        match self {
            TableCase::A => -0.697,
            TableCase::B => -0.800,
            TableCase::C => -0.756,
            TableCase::D => -0.833,
            TableCase::E => -0.851,
            TableCase::F => -0.579,
        }
    }

    pub fn label(self) -> char {
        match self {
            TableCase::A => 'a',
            TableCase::B => 'b',
            TableCase::C => 'c',
            TableCase::D => 'd',
            TableCase::E => 'e',
            TableCase::F => 'f',
        }
    }

    /// `epsilon` is required for row (e) and ignored elsewhere.
    pub fn params(self, spin: SpinLabel, alpha: f64, eta: f64, epsilon: Option<f64>) -> Result<Su2FamilyParams> {
        let (a, b, c_kind) = match self {
            TableCase::A => (alpha, 0.0, CKind::JplusHalf),
            TableCase::B => (alpha, 0.0, CKind::Jx),
            TableCase::C => (alpha, 0.0, CKind::HalfIdentity),
            TableCase::D => (0.0, alpha, CKind::Jx),
            TableCase::E => {
                let eps =
                    epsilon.ok_or_else(|| config("case (e) requires an explicit epsilon (b = epsilon * alpha)"))?;
                (alpha, eps * alpha, CKind::IdentityAlpha)
            }
            TableCase::F => (0.0, alpha, CKind::IdentityAlpha),
        };
        Ok(Su2FamilyParams { a, b, c_kind, alpha, epsilon, eta, spin })
    }
}

impl FromStr for TableCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            "c" => Ok(Self::C),
            "d" => Ok(Self::D),
            "e" => Ok(Self::E),
            "f" => Ok(Self::F),
            other => Err(config(format!("unknown SU(2) family case `{other}` (expected a-f)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2FamilyParams {
    pub a: f64,
    pub b: f64,
    pub c_kind: CKind,
    pub alpha: f64,
    pub epsilon: Option<f64>,
    pub eta: f64,
    pub spin: SpinLabel,
}

/// `a J_x + b A + C cos(X) + (C cos(X))^†`.
pub fn general_su2_hamiltonian(p: &Su2FamilyParams) -> Result<HermitianOperator> {
    if !(p.alpha.is_finite() && p.alpha != 0.0) {
        return Err(domain("alpha must be finite and nonzero"));
    }
    if !(p.a.is_finite() && p.b.is_finite()) {
        return Err(domain("couplings a, b must be finite"));
    }
    let d = p.spin.dim();
    let ops = spin_operators(p.spin);
    let cos_x: Vec<f64> = phase_diagonal(p.spin, p.eta)?.into_iter().map(f64::cos).collect();

    let c = match p.c_kind {
        CKind::JplusHalf => linalg::scale_real(&ops.jplus, p.alpha),
        CKind::Jx => linalg::scale_real(ops.jx.matrix(), p.alpha),
        CKind::HalfIdentity => linalg::scale_real(&linalg::identity(d), 0.5),
        CKind::IdentityAlpha => linalg::scale_real(&linalg::identity(d), p.alpha),
    };
    // C cos(X): scale column k by cos(X_k)
    let c_cos = CMatrix::from_fn(d, d, |r, k| c[(r, k)] * cos_x[k]);
    let c_cos_adj = linalg::adjoint(&c_cos);

    let jx = ops.jx.matrix();
    let m = CMatrix::from_fn(d, d, |r, k| {
        let hop = if r.abs_diff(k) == 1 { p.b } else { 0.0 };
        jx[(r, k)] * p.a + Complex64::from(hop) + c_cos[(r, k)] + c_cos_adj[(r, k)]
    });
    HermitianOperator::new(m)
}

/// Static part of the single-kicked system equivalent to the double kicked top:
/// `(alpha/T) (J_+ e^{iX} + h.c.)`, so that `T H_0` is the generator of the
/// first factor of the exact Floquet operator.
pub fn dkt_static_part(alpha: f64, eta: f64, spin: SpinLabel, period: f64) -> Result<HermitianOperator> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(domain(format!("kick period T = {period} must be positive")));
    }
    if !alpha.is_finite() {
        return Err(domain("alpha must be finite"));
    }
    let generator = dkt_generator(alpha, eta, spin)?;
    Ok(generator.scaled(1.0 / period))
}

/// `alpha (J_+ e^{iX} + h.c.)`, tridiagonal.
pub(crate) fn dkt_generator(alpha: f64, eta: f64, spin: SpinLabel) -> Result<HermitianOperator> {
    let d = spin.dim();
    let x = phase_diagonal(spin, eta)?;
    let ops = spin_operators(spin);
    let mut m = linalg::zeros(d);
    for i in 0..d.saturating_sub(1) {
        let v = ops.jplus[(i + 1, i)] * Complex64::from_polar(alpha, x[i]);
        m[(i + 1, i)] = v;
        m[(i, i + 1)] = v.conj();
    }
    debug_assert!(m[(0, 0)] == ZERO);
    HermitianOperator::new(m)
}

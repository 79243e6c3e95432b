//! High-frequency expansion of periodically driven Hamiltonians.
//!
//! The one-period propagator is factorized as
//! `U(t_i -> t_i + T) = e^{-iF(t_f)} e^{-i H_eff T} e^{iF(t_i)}`, with `H_eff`
//! static and `F(t)` periodic with zero mean. Both are expanded to second
//! order in `1/omega` in terms of the Fourier harmonics `V_n` of the drive.
//!
//! For a delta-kick train `V sum_n delta(t - nT)` every harmonic equals
//! `V/T`, so [`Harmonics::Uniform`] carries a single matrix and the harmonic
//! sums collapse to scalar weights. That is what makes truncations like
//! `N_max = 10^6` tractable.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::linalg::{self, commutator, CMatrix, I, ZERO};
use crate::operator::{HermitianOperator, COMPUTED_HERMITIAN_TOL};

/// `sum 1/n^2 / (omega T)^2 = (pi^2/6) / (4 pi^2)`.
pub const DELTA_KICK_COEFFICIENT: f64 = 1.0 / 24.0;

/// Default truncation of the harmonic sums.
pub const DEFAULT_N_MAX: usize = 4096;

/// `H(t) = H0 + V sum_n delta(t - nT)`.
#[derive(Debug, Clone)]
pub struct KickedSystem {
    h0: HermitianOperator,
    kick: HermitianOperator,
    period: f64,
}

impl KickedSystem {
    pub fn new(h0: HermitianOperator, kick: HermitianOperator, period: f64) -> Result<Self> {
        if h0.dim() != kick.dim() {
            return Err(Error::DimensionMismatch { left: h0.dim(), right: kick.dim() });
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(domain(format!("kick period T = {period} must be positive")));
        }
        Ok(Self { h0, kick, period })
    }

    pub fn h0(&self) -> &HermitianOperator {
        &self.h0
    }

    pub fn kick(&self) -> &HermitianOperator {
        &self.kick
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }
}

/// Positive-frequency harmonics `V_1 .. V_N`; `V_{-n} = V_n^†`.
#[derive(Debug, Clone)]
pub enum Harmonics {
    Explicit(Vec<CMatrix>),
    /// `V_n = coefficient` for every `1 <= n <= n_max`.
    Uniform {
        coefficient: CMatrix,
        n_max: usize,
    },
}

#[derive(Debug, Clone)]
pub struct FourierSeries {
    pub v0: HermitianOperator,
    pub harmonics: Harmonics,
}

impl FourierSeries {
    pub fn n_max(&self) -> usize {
        match &self.harmonics {
            Harmonics::Explicit(v) => v.len(),
            Harmonics::Uniform { n_max, .. } => *n_max,
        }
    }

    pub fn dim(&self) -> usize {
        self.v0.dim()
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        let check = |m: &CMatrix| {
            if m.nrows() != d || m.ncols() != d {
                Err(Error::DimensionMismatch { left: d, right: m.nrows() })
            } else {
                Ok(())
            }
        };
        match &self.harmonics {
            Harmonics::Explicit(v) => v.iter().try_for_each(check),
            Harmonics::Uniform { coefficient, .. } => check(coefficient),
        }?;
        if self.n_max() == 0 {
            return Err(domain("Fourier series needs at least one harmonic"));
        }
        Ok(())
    }
}

/// Dirac comb: `V0 = V_n = V/T` for `n = 1..n_max`.
pub fn kick_fourier_coefficients(kick: &HermitianOperator, period: f64, n_max: usize) -> Result<FourierSeries> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(domain(format!("kick period T = {period} must be positive")));
    }
    if n_max == 0 {
        return Err(domain("n_max must be at least 1"));
    }
    let v = kick.scaled(1.0 / period);
    Ok(FourierSeries { harmonics: Harmonics::Uniform { coefficient: v.matrix().clone(), n_max }, v0: v })
}

/// Scalar harmonic sums used by the uniform fast path.
#[derive(Debug, Clone, Copy)]
struct HarmonicWeights {
    /// `sum_{n<=N} 1/n`
    h: f64,
    /// `sum_{n<=N} 1/n^2`
    s2: f64,
    /// `sum_{n+m<=N} 1/(nm)`
    pair_sum_bounded: f64,
    /// `sum_{n<m<=N} 1/(nm)`
    pair_ordered: f64,
}

fn harmonic_prefix(n_max: usize) -> Vec<f64> {
    let mut h = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        h[n] = h[n - 1] + 1.0 / n as f64;
    }
    h
}

impl HarmonicWeights {
    fn new(n_max: usize) -> Self {
        let prefix = harmonic_prefix(n_max);
        let h = prefix[n_max];
        // sum smallest terms first
        let s2 = (1..=n_max).rev().map(|n| 1.0 / (n as f64 * n as f64)).sum::<f64>();
        let pair_sum_bounded = (1..n_max).rev().map(|n| prefix[n_max - n] / n as f64).sum::<f64>();
        let pair_ordered = (1..=n_max).rev().map(|m| prefix[m - 1] / m as f64).sum::<f64>();
        Self { h, s2, pair_sum_bounded, pair_ordered }
    }
}

fn plus_adjoint(m: &CMatrix) -> CMatrix {
    let a = linalg::adjoint(m);
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] + a[(i, j)])
}

fn minus_adjoint(m: &CMatrix) -> CMatrix {
    let a = linalg::adjoint(m);
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] - a[(i, j)])
}

/// Second-order effective Hamiltonian from the Fourier harmonics of the drive:
///
/// ```text
/// H0 + V0 + (1/w) sum 1/n [V_n, V_-n]
///    + 1/(2w^2) sum 1/n^2 ([[V_n, H0], V_-n] + h.c.)
///    + 1/(3w^2) sum_{n,m} 1/(nm) ([V_n,[V_m,V_-n-m]] - 2[V_n,[V_-m,V_m-n]] + h.c.)
/// ```
///
/// Harmonics beyond `n_max` are zero.
pub fn heff_general(h0: &HermitianOperator, f: &FourierSeries, omega: f64) -> Result<HermitianOperator> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(domain(format!("omega = {omega} must be positive")));
    }
    if h0.dim() != f.dim() {
        return Err(Error::DimensionMismatch { left: h0.dim(), right: f.dim() });
    }
    f.validate()?;

    let (first, second, third) = match &f.harmonics {
        Harmonics::Explicit(v) => explicit_corrections(h0.matrix(), f.v0.matrix(), v)?,
        Harmonics::Uniform { coefficient, n_max } => {
            uniform_corrections(h0.matrix(), f.v0.matrix(), coefficient, *n_max)?
        }
    };

    let mut out = linalg::add(h0.matrix(), f.v0.matrix())?;
    linalg::axpy(&mut out, (1.0 / omega).into(), &first);
    linalg::axpy(&mut out, (1.0 / (2.0 * omega * omega)).into(), &second);
    linalg::axpy(&mut out, (1.0 / (3.0 * omega * omega)).into(), &third);
    HermitianOperator::hermitized(out, COMPUTED_HERMITIAN_TOL)
}

/// Returns the three bracket sums without their `1/w^k` prefactors.
fn explicit_corrections(h0: &CMatrix, v0: &CMatrix, v: &[CMatrix]) -> Result<(CMatrix, CMatrix, CMatrix)> {
    let d = h0.nrows();
    let n_max = v.len();
    let v_neg: Vec<CMatrix> = v.iter().map(linalg::adjoint).collect();
    // V_k for k in [-n_max, n_max]
    let at = |k: i64| -> Option<&CMatrix> {
        match k {
            0 => Some(v0),
            k if k > 0 && (k as usize) <= n_max => Some(&v[k as usize - 1]),
            k if k < 0 && (k.unsigned_abs() as usize) <= n_max => Some(&v_neg[k.unsigned_abs() as usize - 1]),
            _ => None,
        }
    };

    let mut first = linalg::zeros(d);
    let mut second = linalg::zeros(d);
    let mut third = linalg::zeros(d);
    for n in 1..=n_max {
        let nf = n as f64;
        let (vn, vmn) = (&v[n - 1], &v_neg[n - 1]);
        linalg::axpy(&mut first, (1.0 / nf).into(), &commutator(vn, vmn)?);
        let inner = commutator(&commutator(vn, h0)?, vmn)?;
        linalg::axpy(&mut second, (1.0 / (nf * nf)).into(), &plus_adjoint(&inner));

        let mut inner_sum = linalg::zeros(d);
        for m in 1..=n_max {
            let mf = m as f64;
            let (n_i, m_i) = (n as i64, m as i64);
            if let Some(w) = at(-n_i - m_i) {
                linalg::axpy(&mut inner_sum, (1.0 / mf).into(), &commutator(&v[m - 1], w)?);
            }
            if let Some(w) = at(m_i - n_i) {
                linalg::axpy(&mut inner_sum, (-2.0 / mf).into(), &commutator(&v_neg[m - 1], w)?);
            }
        }
        let outer = commutator(vn, &inner_sum)?;
        linalg::axpy(&mut third, (1.0 / nf).into(), &plus_adjoint(&outer));
    }
    Ok((first, second, third))
}

fn uniform_corrections(h0: &CMatrix, v0: &CMatrix, c: &CMatrix, n_max: usize) -> Result<(CMatrix, CMatrix, CMatrix)> {
    let w = HarmonicWeights::new(n_max);
    let c_adj = linalg::adjoint(c);

    let c_cadj = commutator(c, &c_adj)?;
    let first = linalg::scale_real(&c_cadj, w.h);

    let inner = commutator(&commutator(c, h0)?, &c_adj)?;
    let second = linalg::scale_real(&plus_adjoint(&inner), w.s2);

    // m > n pairs see V_{m-n} = c, m < n pairs see c^† (and [c^†, c^†] = 0),
    // m = n pairs see V0.
    let t_bounded = commutator(c, &c_cadj)?;
    let t_ordered = commutator(c, &commutator(&c_adj, c)?)?;
    let t_diag = commutator(c, &commutator(&c_adj, v0)?)?;
    let mut raw = linalg::scale_real(&t_bounded, w.pair_sum_bounded);
    linalg::axpy(&mut raw, (-2.0 * w.pair_ordered).into(), &t_ordered);
    linalg::axpy(&mut raw, (-2.0 * w.s2).into(), &t_diag);
    Ok((first, second, plus_adjoint(&raw)))
}

/// Closed-form effective Hamiltonian of a delta-kicked system,
/// `H0 + V/T + (1/24) [[V, H0], V]`.
pub fn heff_delta_kicked(sys: &KickedSystem) -> Result<HermitianOperator> {
    let v = sys.kick().matrix();
    let h0 = sys.h0().matrix();
    let dc = commutator(&commutator(v, h0)?, v)?;
    let mut out = linalg::add(h0, &linalg::scale_real(v, 1.0 / sys.period()))?;
    linalg::axpy(&mut out, DELTA_KICK_COEFFICIENT.into(), &dc);
    HermitianOperator::hermitized(out, COMPUTED_HERMITIAN_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MicromotionOrder {
    First,
    Second,
}

impl TryFrom<u32> for MicromotionOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            other => Err(domain(format!("micromotion order {other} not in {{1, 2}}"))),
        }
    }
}

/// Micromotion operator `F(t)` truncated at first or second order in `1/omega`.
///
/// `F` is Hermitian, periodic in `t` with period `T`, and has zero time average.
pub fn micromotion_kick(
    sys: &KickedSystem,
    f: &FourierSeries,
    t: f64,
    order: MicromotionOrder,
) -> Result<HermitianOperator> {
    if sys.dim() != f.dim() {
        return Err(Error::DimensionMismatch { left: sys.dim(), right: f.dim() });
    }
    f.validate()?;
    let omega = sys.omega();
    let phase = omega * t.rem_euclid(sys.period());
    let h_static = linalg::add(sys.h0().matrix(), f.v0.matrix())?;

    let (f1, f2) = match &f.harmonics {
        Harmonics::Explicit(v) => explicit_micromotion(&h_static, v, phase, order)?,
        Harmonics::Uniform { coefficient, n_max } => uniform_micromotion(&h_static, coefficient, *n_max, phase, order)?,
    };

    // 1/(i w) X with X anti-Hermitian
    let mut out = linalg::scale(&f1, -I / omega);
    if let Some(f2) = f2 {
        linalg::axpy(&mut out, -I / (omega * omega), &f2);
    }
    HermitianOperator::hermitized(out, COMPUTED_HERMITIAN_TOL)
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Returns `(X1, X2)` with `F = X1/(i w) + X2/(i w^2)`.
fn explicit_micromotion(
    h_static: &CMatrix,
    v: &[CMatrix],
    phase: f64,
    order: MicromotionOrder,
) -> Result<(CMatrix, Option<CMatrix>)> {
    let d = h_static.nrows();
    let n_max = v.len();
    let mut x1 = linalg::zeros(d);
    for (k, vn) in v.iter().enumerate() {
        let n = (k + 1) as f64;
        linalg::axpy(&mut x1, cis(n * phase) / n, vn);
    }
    let x1 = minus_adjoint(&x1);
    if order == MicromotionOrder::First {
        return Ok((x1, None));
    }

    let v_neg: Vec<CMatrix> = v.iter().map(linalg::adjoint).collect();
    let mut x2 = linalg::zeros(d);
    for (k, vn) in v.iter().enumerate() {
        let n = (k + 1) as f64;
        linalg::axpy(&mut x2, cis(n * phase) / (n * n), &commutator(vn, h_static)?);
    }
    for n in 1..=n_max {
        let nf = n as f64;
        for m in 1..=n_max {
            let mf = m as f64;
            let w = cis((nf + mf) * phase) * (0.5 / (nf * (nf + mf)));
            linalg::axpy(&mut x2, w, &commutator(&v[n - 1], &v[m - 1])?);
            if m != n {
                let w = cis((nf - mf) * phase) * (0.5 / (nf * (nf - mf)));
                linalg::axpy(&mut x2, w, &commutator(&v[n - 1], &v_neg[m - 1])?);
            }
        }
    }
    Ok((x1, Some(minus_adjoint(&x2))))
}

fn uniform_micromotion(
    h_static: &CMatrix,
    c: &CMatrix,
    n_max: usize,
    phase: f64,
    order: MicromotionOrder,
) -> Result<(CMatrix, Option<CMatrix>)> {
    let mut s1 = ZERO;
    let mut s2 = ZERO;
    for n in (1..=n_max).rev() {
        let nf = n as f64;
        let e = cis(nf * phase);
        s1 += e / nf;
        s2 += e / (nf * nf);
    }
    let x1 = minus_adjoint(&linalg::scale(c, s1));
    if order == MicromotionOrder::First {
        return Ok((x1, None));
    }

    // sum_{n != m} e^{i(n-m)phase} / (n(n-m)) grouped by k = n - m
    let prefix = harmonic_prefix(n_max);
    let mut w_cross = ZERO;
    for k in (1..n_max).rev() {
        let kf = k as f64;
        w_cross += cis(kf * phase) * ((prefix[n_max] - prefix[k]) / kf);
        w_cross -= cis(-kf * phase) * (prefix[n_max - k] / kf);
    }

    // [V_n, V_m] = [c, c] = 0 for the uniform series
    let mut x2 = linalg::scale(&commutator(c, h_static)?, s2);
    let c_cadj = commutator(c, &linalg::adjoint(c))?;
    linalg::axpy(&mut x2, w_cross * 0.5, &c_cadj);
    Ok((x1, Some(minus_adjoint(&x2))))
}

/// Expands a uniform series into explicit per-harmonic matrices.
pub fn to_explicit(f: &FourierSeries) -> FourierSeries {
    match &f.harmonics {
        Harmonics::Explicit(_) => f.clone(),
        Harmonics::Uniform { coefficient, n_max } => {
            FourierSeries { v0: f.v0.clone(), harmonics: Harmonics::Explicit(vec![coefficient.clone(); *n_max]) }
        }
    }
}

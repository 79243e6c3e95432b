//! Harper (Aubry-André) chain and its kicked counterpart.
//!
//! Sites are labelled `n = 1..L`; row `n - 1` of every matrix belongs to site `n`.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::effective::{heff_delta_kicked, KickedSystem};
use crate::error::{config, domain, Error, Result};
use crate::operator::HermitianOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Bonds `(n, n+1)` for `n < L` only.
    #[default]
    Open,
    /// Adds the bond `(L, 1)`.
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" => Ok(Self::Open),
            "periodic" => Ok(Self::Periodic),
            other => Err(config(format!("unknown boundary `{other}` (expected open|periodic)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarperParams {
    pub length: usize,
    pub sigma: f64,
    pub alpha: f64,
    pub period: f64,
    pub boundary: Boundary,
}

impl HarperParams {
    pub fn new(length: usize, sigma: f64) -> Self {
        Self { length, sigma, alpha: 1.0, period: 1.0, boundary: Boundary::Open }
    }

    pub fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return Err(domain(format!("chain length L = {} must be at least 2", self.length)));
        }
        if !self.sigma.is_finite() {
            return Err(domain("sigma must be finite"));
        }
        if !(self.alpha.is_finite() && self.alpha != 0.0) {
            return Err(domain("alpha must be finite and nonzero"));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(domain("kick period must be positive"));
        }
        Ok(())
    }

    /// `cos(2 pi n sigma)` for `n = 1..L`.
    pub fn modulation(&self) -> Vec<f64> {
        (1..=self.length).map(|n| (2.0 * PI * n as f64 * self.sigma).cos()).collect()
    }

    /// Zero-based `(a, b)` site pairs of every bond; the bond label is `a + 1`.
    fn bonds(&self) -> Vec<(usize, usize)> {
        let l = self.length;
        let mut out: Vec<(usize, usize)> = (0..l - 1).map(|k| (k, k + 1)).collect();
        if self.boundary == Boundary::Periodic && l > 2 {
            out.push((l - 1, 0));
        }
        out
    }
}

fn chain(diag: &[f64], bonds: &[(usize, usize)], hop: impl Fn(usize) -> f64) -> Result<HermitianOperator> {
    let mut m = crate::linalg::real_diagonal(diag);
    for &(a, b) in bonds {
        let t = hop(a);
        m[(a, b)] += t;
        m[(b, a)] += t;
    }
    HermitianOperator::new(m)
}

/// `sum_n 2 cos(2 pi n sigma) |n><n| + (|n><n+1| + h.c.)`.
pub fn harper_hamiltonian(p: &HarperParams) -> Result<HermitianOperator> {
    p.validate()?;
    let diag: Vec<f64> = p.modulation().into_iter().map(|c| 2.0 * c).collect();
    chain(&diag, &p.bonds(), |_| 1.0)
}

/// Kicked Harper model: `H0 = alpha * hopping`, `V = 2 alpha cos(2 pi n sigma)`.
pub fn kicked_harper_system(p: &HarperParams) -> Result<KickedSystem> {
    p.validate()?;
    let d = p.length;
    let h0 = chain(&vec![0.0; d], &p.bonds(), |_| p.alpha)?;
    let v: Vec<f64> = p.modulation().into_iter().map(|c| 2.0 * p.alpha * c).collect();
    KickedSystem::new(h0, HermitianOperator::from_real_diagonal(&v), p.period)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectiveMode {
    /// Harper chain with hopping `1 - cos^2(2 pi n sigma)/6` on bond `(n, n+1)`.
    ClosedForm,
    /// Delta-kick effective Hamiltonian of [`kicked_harper_system`], divided by `alpha`.
    General,
}

impl FromStr for EffectiveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "closed_form" | "closed-form" => Ok(Self::ClosedForm),
            "general" => Ok(Self::General),
            other => Err(config(format!("unknown effective mode `{other}`"))),
        }
    }
}

pub fn kicked_harper_effective(p: &HarperParams, mode: EffectiveMode) -> Result<HermitianOperator> {
    p.validate()?;
    match mode {
        EffectiveMode::ClosedForm => {
            let modulation = p.modulation();
            let diag: Vec<f64> = modulation.iter().map(|c| 2.0 * c).collect();
            chain(&diag, &p.bonds(), |a| 1.0 - modulation[a].powi(2) / 6.0)
        }
        EffectiveMode::General => {
            let heff = heff_delta_kicked(&kicked_harper_system(p)?)?;
            Ok(heff.scaled(1.0 / p.alpha))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BondDiff {
    /// Site label `n` of the bond `(n, n+1)`; `L` for the wrap-around bond.
    pub site: usize,
    pub closed_form: f64,
    pub general: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub params: HarperParams,
    /// Factor removed from the GENERAL mode to put it on the static Harper scale.
    pub energy_scale: f64,
    pub max_abs_diff: f64,
    pub diagonal_max_diff: f64,
    pub bonds: Vec<BondDiff>,
}

/// Entry-wise comparison of the CLOSED_FORM and GENERAL effective Hamiltonians.
pub fn heff_discrepancy_report(p: &HarperParams) -> Result<DiscrepancyReport> {
    let closed = kicked_harper_effective(p, EffectiveMode::ClosedForm)?;
    let general = kicked_harper_effective(p, EffectiveMode::General)?;
    let (cm, gm) = (closed.matrix(), general.matrix());
    let diagonal_max_diff = (0..p.length).map(|i| (cm[(i, i)] - gm[(i, i)]).norm()).fold(0.0, f64::max);
    let bonds = p
        .bonds()
        .into_iter()
        .map(|(a, b)| BondDiff {
            site: a + 1,
            closed_form: cm[(a, b)].re,
            general: gm[(a, b)].re,
            residual: cm[(a, b)].re - gm[(a, b)].re,
        })
        .collect();
    Ok(DiscrepancyReport {
        params: *p,
        energy_scale: p.alpha,
        max_abs_diff: crate::linalg::max_abs_diff(cm, gm),
        diagonal_max_diff,
        bonds,
    })
}

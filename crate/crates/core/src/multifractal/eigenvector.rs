//! Positional partition scaling of single eigenvectors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scaling::{scaling_from_masses, ScalingConfig, ScalingSpectrum};
use crate::error::{domain, Result};
use crate::linalg::Eigensystem;

pub const NORMALIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvectorProfile {
    /// `|c_m|^2` in ascending-`m` order, normalized to unit sum.
    pub weights: Vec<f64>,
    pub pr: f64,
    /// `tau_bar_q`, `D_bar_q` and `mu_bar` over the partition grid.
    pub scaling: ScalingSpectrum,
}

impl EigenvectorProfile {
    pub fn d2(&self) -> Option<f64> {
        self.scaling.dimension(2.0)
    }

    pub fn d5(&self) -> Option<f64> {
        self.scaling.dimension(5.0)
    }

    pub fn mu(&self) -> Option<f64> {
        self.scaling.mu
    }
}

fn normalized(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(domain("empty weight vector"));
    }
    if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
        return Err(domain("weights must be finite and non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(domain(format!("weights sum to {total}, not 1")));
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// `1 / sum w_m^2` for normalized weights.
pub fn participation_ratio(weights: &[f64]) -> Result<f64> {
    let w = normalized(weights)?;
    Ok(1.0 / w.iter().map(|x| x * x).sum::<f64>())
}

/// Mass in each of `m` contiguous partitions with boundaries `floor(i d / m)`.
pub fn partition_masses(weights: &[f64], m: usize) -> Vec<f64> {
    let d = weights.len();
    (0..m)
        .map(|i| {
            let (a, b) = (i * d / m, (i + 1) * d / m);
            weights[a..b].iter().sum()
        })
        .collect()
}

pub fn eigenvector_tau(weights: &[f64], cfg: &ScalingConfig) -> Result<EigenvectorProfile> {
    let w = normalized(weights)?;
    if cfg.scales.iter().any(|&m| m < 2 || m > w.len()) {
        return Err(domain(format!("partition counts must lie in [2, {}]", w.len())));
    }
    if cfg.scales.len() < super::scaling::MIN_SCALES {
        return Err(domain("need at least four partition counts"));
    }
    if cfg.scales.windows(2).any(|p| p[1] <= p[0]) {
        return Err(domain("partition counts must be strictly increasing"));
    }
    let masses: Vec<Vec<f64>> = cfg.scales.iter().map(|&m| partition_masses(&w, m)).collect();
    let pr = 1.0 / w.iter().map(|x| x * x).sum::<f64>();
    Ok(EigenvectorProfile { scaling: scaling_from_masses(&masses, cfg), weights: w, pr })
}

/// Profiles of every eigenvector (columns) of an eigensystem, in eigenvalue order.
pub fn analyze_eigenvectors(system: &Eigensystem, cfg: &ScalingConfig) -> Result<Vec<EigenvectorProfile>> {
    let v = &system.vectors;
    let (rows, cols) = (v.nrows(), v.ncols());
    (0..cols)
        .into_par_iter()
        .map(|k| {
            let mut w: Vec<f64> = (0..rows).map(|m| v[(m, k)].norm_sqr()).collect();
            let total: f64 = w.iter().sum();
            // numerically normalized eigenvectors; absorb rounding in the sum
            if (total - 1.0).abs() > NORMALIZATION_TOL {
                return Err(domain(format!("eigenvector {k} has norm^2 {total}")));
            }
            w.iter_mut().for_each(|x| *x /= total);
            eigenvector_tau(&w, cfg)
        })
        .collect()
}

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Normalized bin occupation of a point set at one resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxMeasure {
    pub probabilities: Vec<f64>,
    pub n_bins: usize,
    pub bin_width: f64,
}

impl BoxMeasure {
    /// `Z_q = sum_i p_i^q` over occupied bins (`q = 0` counts them).
    pub fn partition_function(&self, q: f64) -> f64 {
        partition_function(&self.probabilities, q)
    }

    pub fn occupied(&self) -> usize {
        self.probabilities.iter().filter(|&&p| p > 0.0).count()
    }
}

pub(crate) fn partition_function(p: &[f64], q: f64) -> f64 {
    if q == 0.0 {
        return p.iter().filter(|&&x| x > 0.0).count() as f64;
    }
    if q == 1.0 {
        return p.iter().sum();
    }
    p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(q)).sum()
}

pub(crate) fn value_range(values: &[f64]) -> Result<(f64, f64)> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(domain("values must be finite"));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(domain("degenerate range: fewer than two distinct values"));
    }
    Ok((lo, hi))
}

#[inline]
pub(crate) fn bin_index(x: f64, lo: f64, hi: f64, n_bins: usize) -> usize {
    let t = (x - lo) / (hi - lo) * n_bins as f64;
    // the last bin is closed on the right
    (t.max(0.0) as usize).min(n_bins - 1)
}

/// Weighted bin masses over `[lo, hi]`; weights need not be normalized.
pub(crate) fn binned_mass(values: &[f64], weights: Option<&[f64]>, lo: f64, hi: f64, n_bins: usize) -> Vec<f64> {
    let mut mass = vec![0.0; n_bins];
    match weights {
        Some(w) => {
            for (&x, &wx) in values.iter().zip(w) {
                mass[bin_index(x, lo, hi, n_bins)] += wx;
            }
        }
        None => {
            for &x in values {
                mass[bin_index(x, lo, hi, n_bins)] += 1.0;
            }
        }
    }
    let total: f64 = mass.iter().sum();
    for m in &mut mass {
        *m /= total;
    }
    mass
}

/// Equal-width bins over `[min, max]` with the last bin closed; counts normalized.
pub fn box_probabilities(values: &[f64], n_bins: usize) -> Result<BoxMeasure> {
    if n_bins < 2 {
        return Err(domain("need at least two bins"));
    }
    let (lo, hi) = value_range(values)?;
    Ok(BoxMeasure {
        probabilities: binned_mass(values, None, lo, hi, n_bins),
        n_bins,
        bin_width: (hi - lo) / n_bins as f64,
    })
}

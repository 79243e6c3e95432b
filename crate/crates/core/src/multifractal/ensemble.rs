//! Distributions over eigenstate ensembles and windowed spectral densities.

use serde::{Deserialize, Serialize};

use super::box_counting::bin_index;
use super::eigenvector::EigenvectorProfile;
use crate::error::{domain, Result};

pub const PR_THRESHOLD: f64 = 20.0;
pub const SMALL_DIMENSION_THRESHOLD: f64 = 0.05;

/// Equal-width histogram normalized as a probability density over `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let w = self.bin_width();
        (0..self.counts.len()).map(|i| self.lo + (i as f64 + 0.5) * w).collect()
    }

    /// A single bin holds every sample.
    pub fn is_delta_peaked(&self) -> bool {
        let total: usize = self.counts.iter().sum();
        total > 0 && self.counts.iter().filter(|&&c| c > 0).count() == 1
    }

    fn build(values: &[f64], n_bins: usize, lo: f64, hi: f64, normalizer: usize) -> Self {
        let mut counts = vec![0usize; n_bins];
        for &v in values.iter().filter(|&&v| v >= lo && v <= hi) {
            counts[bin_index(v, lo, hi, n_bins)] += 1;
        }
        let width = (hi - lo) / n_bins as f64;
        let density = counts.iter().map(|&c| c as f64 / (normalizer as f64 * width)).collect();
        Histogram { lo, hi, counts, density }
    }
}

/// Histogram of `values` over their own range. Identical values get a unit-width
/// window centered on the common value.
pub fn histogram(values: &[f64], n_bins: usize) -> Result<Histogram> {
    if values.is_empty() || n_bins == 0 {
        return Err(domain("histogram needs values and at least one bin"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(domain("histogram values must be finite"));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    Ok(Histogram::build(values, n_bins, lo, hi, values.len()))
}

/// Density of `values` inside `window` (default: full range), normalized by the
/// number of values in the window.
pub fn spectral_histogram(values: &[f64], n_bins: usize, window: Option<(f64, f64)>) -> Result<Histogram> {
    if values.is_empty() {
        return Err(domain("no values"));
    }
    let Some((lo, hi)) = window else {
        return histogram(values, n_bins);
    };
    if n_bins == 0 || !(hi > lo) {
        return Err(domain("window must satisfy lo < hi with at least one bin"));
    }
    let inside = values.iter().filter(|&&v| v >= lo && v <= hi).count();
    if inside == 0 {
        return Err(domain(format!("window [{lo}, {hi}] contains no values")));
    }
    Ok(Histogram::build(values, n_bins, lo, hi, inside))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub threshold: f64,
    pub fraction_below: f64,
    pub histogram: Histogram,
}

fn summarize(values: &[f64], n_bins: usize, threshold: f64) -> Result<MetricSummary> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(MetricSummary {
        count: values.len(),
        mean,
        variance,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        threshold,
        fraction_below: values.iter().filter(|&&v| v < threshold).count() as f64 / n,
        histogram: histogram(values, n_bins)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStatistics {
    pub states: usize,
    pub pr: MetricSummary,
    pub d2: MetricSummary,
    pub d5: MetricSummary,
    pub mu: MetricSummary,
}

pub fn ensemble_statistics(profiles: &[EigenvectorProfile], n_bins: usize) -> Result<EnsembleStatistics> {
    if profiles.is_empty() {
        return Err(domain("empty ensemble"));
    }
    let pick = |name: &str, f: &dyn Fn(&EigenvectorProfile) -> Option<f64>| -> Result<Vec<f64>> {
        profiles.iter().map(|p| f(p).ok_or_else(|| domain(format!("{name} missing from the q grid")))).collect()
    };
    let pr: Vec<f64> = profiles.iter().map(|p| p.pr).collect();
    let d2 = pick("q = 2", &|p| p.d2())?;
    let d5 = pick("q = 5", &|p| p.d5())?;
    let mu = pick("mu", &|p| p.mu())?;
    Ok(EnsembleStatistics {
        states: profiles.len(),
        pr: summarize(&pr, n_bins, PR_THRESHOLD)?,
        d2: summarize(&d2, n_bins, SMALL_DIMENSION_THRESHOLD)?,
        d5: summarize(&d5, n_bins, SMALL_DIMENSION_THRESHOLD)?,
        mu: summarize(&mu, n_bins, f64::NEG_INFINITY)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multifractal::{eigenvector_tau, ScalingConfig};

    #[test]
    fn flat_density_for_uniform_values() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let h = spectral_histogram(&v, 10, None).unwrap();
        for d in &h.density {
            assert!((d - 1.0).abs() < 0.02, "{d}");
        }
    }

    #[test]
    fn gap_has_zero_density_and_empty_window_fails() {
        let v: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).chain((0..100).map(|i| 2.0 + i as f64 / 99.0)).collect();
        let h = spectral_histogram(&v, 12, None).unwrap();
        assert_eq!(h.counts[5], 0);
        assert_eq!(h.counts[6], 0);
        assert!(spectral_histogram(&v, 4, Some((1.2, 1.8))).is_err());
        let zoom = spectral_histogram(&v, 4, Some((0.0, 1.0))).unwrap();
        let mass: f64 = zoom.density.iter().sum::<f64>() * zoom.bin_width();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_profiles_give_delta_peaks() {
        let d = 256;
        let cfg = ScalingConfig::for_eigenvectors(d);
        let p = eigenvector_tau(&vec![1.0 / d as f64; d], &cfg).unwrap();
        let stats = ensemble_statistics(&vec![p; 7], 20).unwrap();
        assert_eq!(stats.states, 7);
        for m in [&stats.pr, &stats.d2, &stats.d5, &stats.mu] {
            assert!(m.histogram.is_delta_peaked());
            assert_eq!(m.variance, 0.0);
        }
        assert_eq!(stats.pr.fraction_below, 0.0);
        assert!(ensemble_statistics(&[], 5).is_err());
    }
}

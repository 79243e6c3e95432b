//! Scaling exponents `tau_q` from partition functions over a grid of resolutions.
//!
//! Convention: with `N` the number of boxes (bins or partitions),
//! `Z_q(N) ~ N^{tau_q}`, so `tau_q = (1 - q) D_q`. A space-filling measure has
//! `tau_q = 1 - q`, `D_2 = -tau_2` and `D_5 = -tau_5 / 4`.

use serde::{Deserialize, Serialize};

use super::box_counting::{binned_mass, partition_function, value_range};
use crate::error::{domain, Error, Result};

pub const MIN_SCALES: usize = 4;
pub const DEFAULT_MIN_WINDOW: usize = 5;
pub const DEFAULT_SLOPE_RANGE: (f64, f64) = (2.0, 8.0);

/// `{0, 0.5, ..., 10}` without `q = 1`.
pub fn default_q_grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 * 0.5).filter(|&q| q != 1.0).collect()
}

/// Bin counts `2^4 .. 2^12`, capped at a quarter of the number of values.
pub fn default_bin_grid(count: usize) -> Vec<usize> {
    (4..=12).map(|k| 1usize << k).filter(|&n| 4 * n <= count).collect()
}

/// Partition counts `2^1 .. 2^k` with at least four components per partition.
pub fn default_partition_grid(dim: usize) -> Vec<usize> {
    (1..usize::BITS).map(|k| 1usize << k).take_while(|&m| 4 * m <= dim).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub q_grid: Vec<f64>,
    /// Number of boxes at each resolution, ascending.
    pub scales: Vec<usize>,
    pub min_window: usize,
    /// Closed `q` interval over which the slope `mu` of `tau_q` is fitted.
    pub slope_range: (f64, f64),
}

impl ScalingConfig {
    pub fn new(q_grid: Vec<f64>, scales: Vec<usize>) -> Self {
        Self { q_grid, scales, min_window: DEFAULT_MIN_WINDOW, slope_range: DEFAULT_SLOPE_RANGE }
    }

    pub fn for_eigenvalues(count: usize) -> Self {
        Self::new(default_q_grid(), default_bin_grid(count))
    }

    pub fn for_eigenvectors(dim: usize) -> Self {
        Self::new(default_q_grid(), default_partition_grid(dim))
    }

    fn validate(&self) -> Result<()> {
        if self.q_grid.is_empty() {
            return Err(domain("empty q grid"));
        }
        if self.q_grid.iter().any(|&q| !(q >= 0.0 && q.is_finite())) {
            return Err(domain("q grid must be finite and non-negative"));
        }
        if self.scales.len() < MIN_SCALES {
            return Err(domain(format!("need at least {MIN_SCALES} scales, got {}", self.scales.len())));
        }
        if self.scales.iter().any(|&n| n == 0) || self.scales.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("scales must be positive and strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares. A constant `y` counts as a perfect fit.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let scale = y.iter().map(|b| b.abs()).fold(1.0, f64::max);
    let r2 = if syy <= 1e-24 * scale * scale { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    LinearFit { slope, intercept, r2 }
}

/// Half-open index range `[start, end)` into the scale grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitWindow {
    pub start: usize,
    pub end: usize,
}

/// Contiguous window of at least `min_window` points (or all of them, if fewer)
/// maximizing R²; ties go to the longer window.
pub fn best_linear_window(x: &[f64], y: &[f64], min_window: usize) -> (FitWindow, LinearFit) {
    let n = x.len();
    let w = min_window.clamp(2, n.max(2)).min(n);
    let mut best: Option<(FitWindow, LinearFit)> = None;
    for start in 0..n {
        for end in (start + w)..=n {
            let fit = linear_fit(&x[start..end], &y[start..end]);
            let better = match &best {
                None => true,
                Some((bw, bf)) => {
                    fit.r2 > bf.r2 + 1e-12 || ((fit.r2 - bf.r2).abs() <= 1e-12 && end - start > bw.end - bw.start)
                }
            };
            if better {
                best = Some((FitWindow { start, end }, fit));
            }
        }
    }
    best.expect("at least one window")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpectrum {
    pub q_grid: Vec<f64>,
    pub tau: Vec<f64>,
    /// `tau_q / (1 - q)`; `None` at `q = 1`.
    pub dq: Vec<Option<f64>>,
    pub fit_r2: Vec<f64>,
    pub fit_windows: Vec<FitWindow>,
    pub scale_grid: Vec<usize>,
    /// Slope of `tau_q` against `q` over `slope_range`.
    pub mu: Option<f64>,
    pub slope_range: (f64, f64),
}

impl ScalingSpectrum {
    fn position(&self, q: f64) -> Option<usize> {
        self.q_grid.iter().position(|&g| (g - q).abs() < 1e-12)
    }

    pub fn tau_at(&self, q: f64) -> Option<f64> {
        self.position(q).map(|i| self.tau[i])
    }

    pub fn dimension(&self, q: f64) -> Option<f64> {
        self.position(q).and_then(|i| self.dq[i])
    }
}

/// Fills `dq[i] = tau[i] / (1 - q[i])`, leaving `None` at `q = 1`.
pub fn generalized_dimensions(mut s: ScalingSpectrum) -> ScalingSpectrum {
    s.dq = s
        .q_grid
        .iter()
        .zip(&s.tau)
        .map(|(&q, &t)| if (q - 1.0).abs() < 1e-12 { None } else { Some(t / (1.0 - q)) })
        .collect();
    s
}

fn slope_over_range(q_grid: &[f64], tau: &[f64], range: (f64, f64)) -> Option<f64> {
    let (q, t): (Vec<f64>, Vec<f64>) = q_grid
        .iter()
        .zip(tau)
        .filter(|(&q, _)| q >= range.0 - 1e-12 && q <= range.1 + 1e-12)
        .map(|(&q, &t)| (q, t))
        .unzip();
    if q.len() < 2 {
        return None;
    }
    Some(linear_fit(&q, &t).slope)
}

/// Fits `ln Z_q` against `ln N` for every `q`. `masses[k]` holds the box
/// probabilities at `cfg.scales[k]`.
pub(crate) fn scaling_from_masses(masses: &[Vec<f64>], cfg: &ScalingConfig) -> ScalingSpectrum {
    let log_n: Vec<f64> = cfg.scales.iter().map(|&n| (n as f64).ln()).collect();
    let mut tau = Vec::with_capacity(cfg.q_grid.len());
    let mut fit_r2 = Vec::with_capacity(cfg.q_grid.len());
    let mut fit_windows = Vec::with_capacity(cfg.q_grid.len());
    for &q in &cfg.q_grid {
        let log_z: Vec<f64> = masses.iter().map(|p| partition_function(p, q).ln()).collect();
        let (window, fit) = best_linear_window(&log_n, &log_z, cfg.min_window);
        tau.push(fit.slope);
        fit_r2.push(fit.r2);
        fit_windows.push(window);
    }
    let mu = slope_over_range(&cfg.q_grid, &tau, cfg.slope_range);
    generalized_dimensions(ScalingSpectrum {
        q_grid: cfg.q_grid.clone(),
        tau,
        dq: Vec::new(),
        fit_r2,
        fit_windows,
        scale_grid: cfg.scales.clone(),
        mu,
        slope_range: cfg.slope_range,
    })
}

/// Box-counting scaling spectrum of a set of values (e.g. eigenvalues).
pub fn tau_spectrum(values: &[f64], cfg: &ScalingConfig) -> Result<ScalingSpectrum> {
    tau_spectrum_weighted(values, None, cfg)
}

/// As [`tau_spectrum`] with a non-negative weight per value.
pub fn tau_spectrum_weighted(values: &[f64], weights: Option<&[f64]>, cfg: &ScalingConfig) -> Result<ScalingSpectrum> {
    cfg.validate()?;
    if let Some(w) = weights {
        if w.len() != values.len() {
            return Err(Error::DimensionMismatch { left: values.len(), right: w.len() });
        }
        if w.iter().any(|&x| !(x >= 0.0 && x.is_finite())) || w.iter().sum::<f64>() <= 0.0 {
            return Err(domain("weights must be non-negative with positive total"));
        }
    }
    let (lo, hi) = value_range(values)?;
    let masses: Vec<Vec<f64>> = cfg.scales.iter().map(|&n| binned_mass(values, weights, lo, hi, n)).collect();
    Ok(scaling_from_masses(&masses, cfg))
}

/// Information dimension: slope of the Shannon entropy of the box measure against `ln N`.
pub fn information_dimension(values: &[f64], scales: &[usize], min_window: usize) -> Result<LinearFit> {
    if scales.len() < MIN_SCALES {
        return Err(domain(format!("need at least {MIN_SCALES} scales")));
    }
    let (lo, hi) = value_range(values)?;
    let x: Vec<f64> = scales.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = scales
        .iter()
        .map(|&n| binned_mass(values, None, lo, hi, n).iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum())
        .collect();
    Ok(best_linear_window(&x, &y, min_window).1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(count: usize) -> Vec<f64> {
        (0..count).map(|i| i as f64 / (count - 1) as f64).collect()
    }

    #[test]
    fn default_grids() {
        let q = default_q_grid();
        assert_eq!(q.len(), 20);
        assert!(!q.contains(&1.0));
        assert_eq!(default_bin_grid(5001), vec![16, 32, 64, 128, 256, 512, 1024]);
        assert_eq!(default_bin_grid(1001), vec![16, 32, 64, 128]);
        assert_eq!(default_partition_grid(2001), vec![2, 4, 8, 16, 32, 64, 128, 256]);
    }

    #[test]
    fn linear_fit_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let f = linear_fit(&x, &y);
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert_eq!(f.r2, 1.0);
        let flat = linear_fit(&x, &[2.0; 4]);
        assert_eq!(flat.slope, 0.0);
        assert_eq!(flat.r2, 1.0);
    }

    #[test]
    fn window_skips_kink() {
        let x: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&a| if a < 3.0 { 0.0 } else { -(a - 3.0) }).collect();
        let (w, f) = best_linear_window(&x, &y, 5);
        assert!(w.start >= 3);
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert_eq!(w.end, 9);
    }

    #[test]
    fn uniform_values_are_space_filling() {
        let v = uniform(1 << 14);
        let s = tau_spectrum(&v, &ScalingConfig::for_eigenvalues(v.len())).unwrap();
        for (q, d) in s.q_grid.iter().zip(&s.dq) {
            assert!((d.unwrap() - 1.0).abs() < 0.01, "q = {q}: {d:?}");
        }
        assert!((s.tau_at(0.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((s.mu.unwrap() + 1.0).abs() < 0.01);
    }

    #[test]
    fn generalized_dimension_anchors() {
        let s = ScalingSpectrum {
            q_grid: vec![0.0, 1.0, 2.0, 5.0],
            tau: vec![0.0, 0.0, -0.913, -4.0],
            dq: Vec::new(),
            fit_r2: vec![1.0; 4],
            fit_windows: vec![FitWindow { start: 0, end: 4 }; 4],
            scale_grid: vec![2, 4, 8, 16],
            mu: None,
            slope_range: DEFAULT_SLOPE_RANGE,
        };
        let s = generalized_dimensions(s);
        assert_eq!(s.dq[0], Some(0.0));
        assert_eq!(s.dq[1], None);
        assert!((s.dq[2].unwrap() - 0.913).abs() < 1e-15);
        assert!((s.dq[3].unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_short_scale_grid() {
        let cfg = ScalingConfig::new(vec![2.0], vec![4, 8, 16]);
        assert!(tau_spectrum(&uniform(100), &cfg).is_err());
        let cfg = ScalingConfig::new(vec![2.0], vec![4, 8, 8, 16]);
        assert!(tau_spectrum(&uniform(100), &cfg).is_err());
    }

    #[test]
    fn information_dimension_of_uniform() {
        let v = uniform(1 << 14);
        let f = information_dimension(&v, &default_bin_grid(v.len()), 5).unwrap();
        assert!((f.slope - 1.0).abs() < 0.01);
    }
}

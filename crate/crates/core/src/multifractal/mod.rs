//! Box-counting multifractal analysis of spectra and eigenvectors.

mod box_counting;
mod eigenvector;
mod ensemble;
mod scaling;

pub use box_counting::{box_probabilities, BoxMeasure};
pub use eigenvector::{
    analyze_eigenvectors, eigenvector_tau, participation_ratio, partition_masses, EigenvectorProfile, NORMALIZATION_TOL,
};
pub use ensemble::{
    ensemble_statistics, histogram, spectral_histogram, EnsembleStatistics, Histogram, MetricSummary, PR_THRESHOLD,
    SMALL_DIMENSION_THRESHOLD,
};
pub use scaling::{
    best_linear_window, default_bin_grid, default_partition_grid, default_q_grid, generalized_dimensions,
    information_dimension, linear_fit, tau_spectrum, tau_spectrum_weighted, FitWindow, LinearFit, ScalingConfig,
    ScalingSpectrum, DEFAULT_MIN_WINDOW, DEFAULT_SLOPE_RANGE, MIN_SCALES,
};

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Control, RunConfig, SystemSpec};
use crate::error::{config, Error, Result};
use crate::floquet::{effective_vs_floquet_error, folded_energies, DktParams};
use crate::harper::{self, HarperParams};
use crate::multifractal::{
    analyze_eigenvectors, default_bin_grid, default_partition_grid, default_q_grid, ensemble_statistics, tau_spectrum,
    EnsembleStatistics, ScalingConfig, ScalingSpectrum, DEFAULT_MIN_WINDOW, MIN_SCALES,
};
use crate::operator::HermitianOperator;
use crate::su2::{self, SpinLabel};

/// Fixed float rendering: 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    fmt_real(x.unwrap_or(f64::NAN))
}

fn write_file(cfg: &RunConfig, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out_dir)?;
    let path = cfg.out_dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

fn write_json<T: Serialize>(cfg: &RunConfig, name: &str, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(e.to_string()))?;
    text.push('\n');
    write_file(cfg, name, &text)
}

fn spin(cfg: &RunConfig) -> Result<SpinLabel> {
    cfg.spin.ok_or_else(|| config("spin `j` not set"))
}

fn chain(cfg: &RunConfig, sigma: f64) -> Result<HarperParams> {
    let length = cfg.length.ok_or_else(|| config("chain `length` not set"))?;
    Ok(HarperParams { length, sigma, alpha: cfg.alpha, period: cfg.period, boundary: cfg.boundary })
}

/// The Hamiltonian analyzed for `system` at control value `x` (`eta` or `sigma`).
pub fn build_hamiltonian(cfg: &RunConfig, x: f64) -> Result<HermitianOperator> {
    match cfg.system {
        SystemSpec::Dkt => {
            let p = DktParams { alpha: cfg.alpha, eta: x, spin: spin(cfg)?, period: cfg.period };
            p.effective_hamiltonian()
        }
        SystemSpec::Su2(case) => {
            let p = case.params(spin(cfg)?, cfg.alpha, x, cfg.epsilon)?;
            su2::general_su2_hamiltonian(&p)
        }
        SystemSpec::HarperStatic => harper::harper_hamiltonian(&chain(cfg, x)?),
        SystemSpec::HarperKicked(mode) => harper::kicked_harper_effective(&chain(cfg, x)?, mode),
        SystemSpec::Uniform { .. } => Err(config("system uniform has no Hamiltonian")),
    }
}

/// Ascending energies at control value `x`; folded (`E T` into the principal
/// interval) for the double kicked top.
pub fn butterfly_column(cfg: &RunConfig, x: f64) -> Result<Vec<f64>> {
    let e = build_hamiltonian(cfg, x)?.eigenvalues()?;
    if cfg.system == SystemSpec::Dkt {
        let mut f = folded_energies(&e, cfg.period);
        f.sort_by(f64::total_cmp);
        Ok(f)
    } else {
        Ok(e)
    }
}

fn with_pool<T: Send>(cfg: &RunConfig, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

pub fn cmd_butterfly(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    if matches!(cfg.system, SystemSpec::Uniform { .. }) {
        return Err(config("butterfly needs a physical system"));
    }
    let (values, scale) = match &cfg.control {
        Some(Control::Sweep { values, scale }) => (values.clone(), *scale),
        Some(Control::Fixed(x)) => (vec![*x], 1.0),
        None => return Err(config("butterfly needs `xi_sweep` or `sigma_sweep`")),
    };
    let columns: Vec<Result<Vec<f64>>> =
        with_pool(cfg, || values.par_iter().map(|v| butterfly_column(cfg, v * scale)).collect())?;
    let mut out = String::from("sweep_value,index,energy\n");
    for (v, col) in values.iter().zip(columns) {
        for (k, e) in col?.iter().enumerate() {
            out.push_str(&format!("{},{k},{}\n", fmt_real(*v), fmt_real(*e)));
        }
    }
    Ok(vec![write_file(cfg, "butterfly.csv", &out)?])
}

fn scaling_config(cfg: &RunConfig, defaults: Vec<usize>) -> ScalingConfig {
    let mut s = ScalingConfig::new(
        cfg.q_grid.clone().unwrap_or_else(default_q_grid),
        cfg.scale_grid.clone().unwrap_or(defaults),
    );
    s.min_window = cfg.min_window.unwrap_or(DEFAULT_MIN_WINDOW);
    s
}

/// Energies analyzed by `spectrum`: raw eigenvalues, or the synthetic grid.
pub fn spectrum_values(cfg: &RunConfig) -> Result<Vec<f64>> {
    if let SystemSpec::Uniform { count } = cfg.system {
        return Ok((0..count).map(|i| i as f64 / (count - 1) as f64).collect());
    }
    with_pool(cfg, || build_hamiltonian(cfg, cfg.fixed_control()?)?.eigenvalues())?
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub command: &'static str,
    pub config: BTreeMap<String, String>,
    pub values: usize,
    pub d2: Option<f64>,
    pub d5: Option<f64>,
    pub mu: Option<f64>,
    pub scaling: ScalingSpectrum,
}

pub fn analyze_spectrum(cfg: &RunConfig) -> Result<SpectrumReport> {
    let values = spectrum_values(cfg)?;
    let scaling = tau_spectrum(&values, &scaling_config(cfg, default_bin_grid(values.len())))?;
    Ok(SpectrumReport {
        command: "spectrum",
        config: cfg.echo.clone(),
        values: values.len(),
        d2: scaling.dimension(2.0),
        d5: scaling.dimension(5.0),
        mu: scaling.mu,
        scaling,
    })
}

pub fn cmd_analyze_spectrum(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let report = analyze_spectrum(cfg)?;
    let s = &report.scaling;
    let mut csv = String::from("q,tau,d_q,r2\n");
    for i in 0..s.q_grid.len() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_real(s.q_grid[i]),
            fmt_real(s.tau[i]),
            fmt_opt(s.dq[i]),
            fmt_real(s.fit_r2[i])
        ));
    }
    Ok(vec![write_file(cfg, "tau.csv", &csv)?, write_json(cfg, "spectrum.json", &report)?])
}

#[derive(Debug, Serialize)]
pub struct EigenstateRow {
    pub index: usize,
    pub pr: f64,
    pub d2: Option<f64>,
    pub d5: Option<f64>,
    pub mu: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct EigenstateReport {
    pub command: &'static str,
    pub config: BTreeMap<String, String>,
    pub states: usize,
    /// Partition counts used; empty when the dimension is too small to fit.
    pub partition_grid: Vec<usize>,
    pub ensemble: Option<EnsembleStatistics>,
    #[serde(skip)]
    pub rows: Vec<EigenstateRow>,
}

pub fn analyze_eigenstates(cfg: &RunConfig) -> Result<EigenstateReport> {
    let h = build_hamiltonian(cfg, cfg.fixed_control()?)?;
    let d = h.dim();
    let scfg = scaling_config(cfg, default_partition_grid(d));
    let (rows, ensemble, partition_grid) = with_pool(cfg, || -> Result<_> {
        let system = h.eigensystem()?;
        if scfg.scales.len() < MIN_SCALES {
            // too few partition levels for a fit: participation ratios only
            let rows = (0..d)
                .map(|k| {
                    let s: f64 = (0..d).map(|m| system.vectors[(m, k)].norm_sqr().powi(2)).sum();
                    EigenstateRow { index: k, pr: 1.0 / s, d2: None, d5: None, mu: None }
                })
                .collect();
            return Ok((rows, None, Vec::new()));
        }
        let profiles = analyze_eigenvectors(&system, &scfg)?;
        let rows = profiles
            .iter()
            .enumerate()
            .map(|(k, p)| EigenstateRow { index: k, pr: p.pr, d2: p.d2(), d5: p.d5(), mu: p.mu() })
            .collect();
        Ok((rows, Some(ensemble_statistics(&profiles, cfg.hist_bins)?), scfg.scales.clone()))
    })??;
    Ok(EigenstateReport { command: "eigenstates", config: cfg.echo.clone(), states: d, partition_grid, ensemble, rows })
}

pub fn cmd_analyze_eigenstates(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let report = analyze_eigenstates(cfg)?;
    let mut csv = String::from("index,pr,d2,d5,mu\n");
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.index,
            fmt_real(r.pr),
            fmt_opt(r.d2),
            fmt_opt(r.d5),
            fmt_opt(r.mu)
        ));
    }
    Ok(vec![write_file(cfg, "eigenstates.csv", &csv)?, write_json(cfg, "eigenstates.json", &report)?])
}

#[derive(Debug, Serialize)]
pub struct FloquetRow {
    pub alpha: f64,
    pub error: f64,
}

#[derive(Debug, Serialize)]
pub struct FloquetReport {
    pub command: &'static str,
    pub config: BTreeMap<String, String>,
    pub rows: Vec<FloquetRow>,
    /// `error(alpha_k) / error(alpha_{k+1})` for consecutive ladder entries.
    pub decay_ratios: Vec<f64>,
    pub strictly_decreasing: bool,
}

pub fn floquet_compare(cfg: &RunConfig) -> Result<FloquetReport> {
    if cfg.system != SystemSpec::Dkt {
        return Err(config("floquet-compare runs on system dkt"));
    }
    if cfg.alpha_ladder.len() < 3 {
        return Err(config("`alpha_ladder` needs at least three values"));
    }
    let eta = cfg.fixed_control()?;
    let s = spin(cfg)?;
    let errors: Vec<Result<f64>> = with_pool(cfg, || {
        cfg.alpha_ladder
            .par_iter()
            .map(|&alpha| effective_vs_floquet_error(&DktParams { alpha, eta, spin: s, period: cfg.period }))
            .collect()
    })?;
    let rows = cfg
        .alpha_ladder
        .iter()
        .zip(errors)
        .map(|(&alpha, e)| Ok(FloquetRow { alpha, error: e? }))
        .collect::<Result<Vec<_>>>()?;
    let decay_ratios = rows.windows(2).map(|w| w[0].error / w[1].error).collect();
    let strictly_decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
    Ok(FloquetReport { command: "floquet-compare", config: cfg.echo.clone(), rows, decay_ratios, strictly_decreasing })
}

pub fn cmd_floquet_compare(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    Ok(vec![write_json(cfg, "floquet_compare.json", &floquet_compare(cfg)?)?])
}

#[derive(Debug, Serialize)]
struct HarperDiffOutput {
    command: &'static str,
    config: BTreeMap<String, String>,
    report: harper::DiscrepancyReport,
}

pub fn cmd_harper_diff(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    if !matches!(cfg.system, SystemSpec::HarperStatic | SystemSpec::HarperKicked(_)) {
        return Err(config("harper-diff runs on a Harper system"));
    }
    let report = harper::heff_discrepancy_report(&chain(cfg, cfg.fixed_control()?)?)?;
    let out = HarperDiffOutput { command: "harper-diff", config: cfg.echo.clone(), report };
    Ok(vec![write_json(cfg, "harper_diff.json", &out)?])
}

//! Flat `key = value` run configuration, merged from a file and command-line flags.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{config, Result};
use crate::harper::{Boundary, EffectiveMode};
use crate::su2::{SpinLabel, TableCase};
use crate::GOLDEN_RATIO;

/// Every key accepted in a config file; flags use the same names with dashes.
pub const KEYS: &[&str] = &[
    "system",
    "j",
    "case",
    "alpha",
    "alpha_over",
    "eta_over_j",
    "xi",
    "xi_sweep",
    "sigma",
    "sigma_sweep",
    "length",
    "period",
    "epsilon",
    "mode",
    "boundary",
    "count",
    "q_grid",
    "scale_grid",
    "min_window",
    "hist_bins",
    "alpha_ladder",
    "workers",
    "out_dir",
    "full_scale",
];

/// Largest dimension allowed without `full_scale = true`.
pub const DESK_SCALE_DIM: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemSpec {
    Dkt,
    Su2(TableCase),
    HarperStatic,
    HarperKicked(EffectiveMode),
    /// Evenly spaced synthetic spectrum; a hook for testing the analysis path.
    Uniform {
        count: usize,
    },
}

/// The swept or fixed control parameter: `eta` for spin systems, `sigma` for chains.
#[derive(Debug, Clone, PartialEq)]
pub enum Control {
    Fixed(f64),
    /// Reported `values` map to the model parameter as `value * scale`.
    Sweep {
        values: Vec<f64>,
        scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemSpec,
    pub spin: Option<SpinLabel>,
    pub length: Option<usize>,
    pub alpha: f64,
    pub period: f64,
    pub epsilon: Option<f64>,
    pub control: Option<Control>,
    pub boundary: Boundary,
    pub q_grid: Option<Vec<f64>>,
    pub scale_grid: Option<Vec<usize>>,
    pub min_window: Option<usize>,
    pub hist_bins: usize,
    pub alpha_ladder: Vec<f64>,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub full_scale: bool,
    /// Input key-value pairs except `out_dir`, echoed into reports.
    pub echo: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn dim(&self) -> usize {
        match self.system {
            SystemSpec::Dkt | SystemSpec::Su2(_) => self.spin.map_or(0, SpinLabel::dim),
            SystemSpec::HarperStatic | SystemSpec::HarperKicked(_) => self.length.unwrap_or(0),
            SystemSpec::Uniform { count } => count,
        }
    }

    pub fn fixed_control(&self) -> Result<f64> {
        match &self.control {
            Some(Control::Fixed(v)) => Ok(*v),
            Some(Control::Sweep { .. }) => Err(config("this command needs a fixed parameter, not a sweep")),
            None => Err(config("missing control parameter (eta_over_j / xi or sigma)")),
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| config(format!("line {}: expected `key = value`", no + 1)))?;
        let key = k.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(config(format!("line {}: unknown key `{key}`", no + 1)));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(config(format!("line {}: duplicate key `{key}`", no + 1)));
        }
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text =
        fs::read_to_string(path).map_err(|e| config(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Tracks which keys a system consumed so that leftovers can be rejected.
struct Raw {
    map: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl Raw {
    fn take(&mut self, key: &str) -> Option<String> {
        let v = self.map.get(key).cloned();
        if v.is_some() {
            self.used.insert(key.to_string());
        }
        v
    }

    fn parsed<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some(s) => s.parse().map(Some).map_err(|_| config(format!("invalid value `{s}` for `{key}`"))),
        }
    }

    fn real(&mut self, key: &str) -> Result<Option<f64>> {
        let v: Option<f64> = self.parsed(key)?;
        match v {
            Some(x) if !x.is_finite() => Err(config(format!("`{key}` must be finite"))),
            other => Ok(other),
        }
    }

    /// Real value accepting the token `golden`.
    fn golden_real(&mut self, key: &str) -> Result<Option<f64>> {
        match self.map.get(key).map(|s| s.trim().eq_ignore_ascii_case("golden")) {
            Some(true) => {
                self.take(key);
                Ok(Some(GOLDEN_RATIO))
            }
            _ => self.real(key),
        }
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(s) = self.take(key) else { return Ok(None) };
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| config(format!("invalid entry `{}` in `{key}`", t.trim()))))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    fn leftovers(&self) -> Vec<String> {
        self.map.keys().filter(|k| !self.used.contains(*k)).cloned().collect()
    }
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err(config(format!("sweep `{s}` must have the form start:stop:step")));
    };
    let num = |t: &str| -> Result<f64> {
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| config(format!("invalid number `{t}` in sweep `{s}`")))
    };
    let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
    if step <= 0.0 {
        return Err(config(format!("sweep step must be positive, got {step}")));
    }
    if stop < start {
        return Err(config(format!("sweep stop {stop} is below start {start}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| start + k as f64 * step).collect())
}

fn parse_system(raw: &mut Raw) -> Result<SystemSpec> {
    let name = raw.take("system").ok_or_else(|| config("missing required key `system`"))?;
    match name.trim() {
        "dkt" => Ok(SystemSpec::Dkt),
        "su2" => {
            let case: TableCase =
                raw.take("case").ok_or_else(|| config("system su2 requires `case` (a-f)"))?.parse()?;
            Ok(SystemSpec::Su2(case))
        }
        "harper_static" => Ok(SystemSpec::HarperStatic),
        "harper_kicked" => {
            let mode = match raw.take("mode") {
                Some(m) => m.parse()?,
                None => EffectiveMode::ClosedForm,
            };
            Ok(SystemSpec::HarperKicked(mode))
        }
        "uniform" => {
            let count = raw.parsed("count")?.ok_or_else(|| config("system uniform requires `count`"))?;
            if count < 2 {
                return Err(config("`count` must be at least 2"));
            }
            Ok(SystemSpec::Uniform { count })
        }
        other => {
            Err(config(format!("unknown system `{other}` (expected dkt|su2|harper_static|harper_kicked|uniform)")))
        }
    }
}

fn spin_control(raw: &mut Raw, spin: SpinLabel) -> Result<Option<Control>> {
    let j = spin.j();
    let eta_over_j = raw.golden_real("eta_over_j")?;
    let xi = raw.real("xi")?;
    let sweep = raw.take("xi_sweep");
    match (eta_over_j, xi, sweep) {
        (None, None, None) => Ok(None),
        (Some(e), None, None) => Ok(Some(Control::Fixed(e * j))),
        (None, Some(x), None) => Ok(Some(Control::Fixed(x * PI * j))),
        (None, None, Some(s)) => Ok(Some(Control::Sweep { values: parse_sweep(&s)?, scale: PI * j })),
        _ => Err(config("give exactly one of `eta_over_j`, `xi`, `xi_sweep`")),
    }
}

fn chain_control(raw: &mut Raw) -> Result<Option<Control>> {
    let sigma = raw.golden_real("sigma")?;
    let sweep = raw.take("sigma_sweep");
    match (sigma, sweep) {
        (None, None) => Ok(None),
        (Some(s), None) => Ok(Some(Control::Fixed(s))),
        (None, Some(s)) => Ok(Some(Control::Sweep { values: parse_sweep(&s)?, scale: 1.0 })),
        _ => Err(config("give either `sigma` or `sigma_sweep`, not both")),
    }
}

/// Validates a merged key-value map into a [`RunConfig`].
pub fn resolve(map: BTreeMap<String, String>) -> Result<RunConfig> {
    if let Some(bad) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(config(format!("unknown key `{bad}`")));
    }
    // where files land does not affect any number, so it stays out of the echo
    let mut echo = map.clone();
    echo.remove("out_dir");
    let mut raw = Raw { map, used: BTreeSet::new() };
    let system = parse_system(&mut raw)?;

    let mut spin = None;
    let mut length = None;
    let mut epsilon = None;
    let mut control = None;
    let mut boundary = Boundary::Open;
    let alpha;
    let period = raw.real("period")?.unwrap_or(1.0);
    if period <= 0.0 {
        return Err(config("`period` must be positive"));
    }

    match system {
        SystemSpec::Dkt | SystemSpec::Su2(_) => {
            let j: f64 = raw.real("j")?.ok_or_else(|| config("spin systems require `j`"))?;
            let s = SpinLabel::new(j).map_err(|e| config(e.to_string()))?;
            alpha = match (raw.real("alpha")?, raw.real("alpha_over")?) {
                (Some(_), Some(_)) => return Err(config("give either `alpha` or `alpha_over`, not both")),
                (Some(a), None) => a,
                (None, Some(k)) => k / s.j(),
                (None, None) => 1.0 / s.j(),
            };
            if let SystemSpec::Su2(case) = system {
                epsilon = raw.real("epsilon")?;
                if case == TableCase::E && epsilon.is_none() {
                    return Err(config("case (e) requires an explicit `epsilon` (b = epsilon * alpha)"));
                }
            }
            control = spin_control(&mut raw, s)?;
            spin = Some(s);
        }
        SystemSpec::HarperStatic | SystemSpec::HarperKicked(_) => {
            let l: usize = raw.parsed("length")?.ok_or_else(|| config("chain systems require `length`"))?;
            if l < 2 {
                return Err(config("`length` must be at least 2"));
            }
            length = Some(l);
            alpha = raw.real("alpha")?.unwrap_or(1.0);
            if let Some(b) = raw.take("boundary") {
                boundary = b.parse()?;
            }
            control = chain_control(&mut raw)?;
        }
        SystemSpec::Uniform { .. } => alpha = 1.0,
    }

    let q_grid: Option<Vec<f64>> = raw.list("q_grid")?;
    if let Some(q) = &q_grid {
        if q.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(config("`q_grid` entries must be finite and non-negative"));
        }
    }
    let scale_grid = raw.list("scale_grid")?;
    let min_window = raw.parsed("min_window")?;
    let hist_bins = raw.parsed("hist_bins")?.unwrap_or(40);
    if hist_bins == 0 {
        return Err(config("`hist_bins` must be positive"));
    }
    let alpha_ladder = raw.list("alpha_ladder")?.unwrap_or_default();
    let workers = raw.parsed("workers")?.unwrap_or(0);
    let out_dir = raw.take("out_dir").map_or_else(|| PathBuf::from("."), PathBuf::from);
    let full_scale = raw.parsed("full_scale")?.unwrap_or(false);

    let leftovers = raw.leftovers();
    if !leftovers.is_empty() {
        return Err(config(format!("key(s) not applicable to this system: {}", leftovers.join(", "))));
    }

    let cfg = RunConfig {
        system,
        spin,
        length,
        alpha,
        period,
        epsilon,
        control,
        boundary,
        q_grid,
        scale_grid,
        min_window,
        hist_bins,
        alpha_ladder,
        workers,
        out_dir,
        full_scale,
        echo,
    };
    let solves = !matches!(cfg.system, SystemSpec::Uniform { .. });
    if solves && cfg.dim() > DESK_SCALE_DIM && !cfg.full_scale {
        return Err(config(format!("dimension {} exceeds {DESK_SCALE_DIM}; pass --full-scale to run it", cfg.dim())));
    }
    Ok(cfg)
}

//! Command-line front end: config merging, subcommand dispatch and exit codes.

pub mod commands;
pub mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
pub use config::{resolve, Control, RunConfig, SystemSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kicked-spectra", version, about = "Spectra and multifractal analysis of delta-kicked systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies over a parameter sweep (sweep_value,index,energy).
    Butterfly(RunArgs),
    /// Box-counting tau_q / D_q of a spectrum.
    Spectrum(RunArgs),
    /// Participation ratio and partition dimensions of every eigenstate.
    Eigenstates(RunArgs),
    /// Effective Hamiltonian versus exact Floquet quasienergies along an alpha ladder.
    FloquetCompare(RunArgs),
    /// Closed-form versus general kicked-Harper effective Hamiltonian.
    HarperDiff(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::Butterfly(a)
            | Command::Spectrum(a)
            | Command::Eigenstates(a)
            | Command::FloquetCompare(a)
            | Command::HarperDiff(a) => a,
        }
    }
}

/// Flags mirror config-file keys (`--alpha-over` is `alpha_over`) and override them.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// dkt | su2 | harper_static | harper_kicked | uniform
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<String>,
    /// SU(2) family case a-f.
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// alpha = alpha_over / j.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_over: Option<String>,
    /// eta / j; accepts `golden`.
    #[arg(long, allow_hyphen_values = true)]
    pub eta_over_j: Option<String>,
    /// eta / (pi j).
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    /// start:stop:step over xi.
    #[arg(long, allow_hyphen_values = true)]
    pub xi_sweep: Option<String>,
    /// Harper modulation frequency; accepts `golden`.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// start:stop:step over sigma.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma_sweep: Option<String>,
    /// Chain length L.
    #[arg(long)]
    pub length: Option<String>,
    #[arg(long)]
    pub period: Option<String>,
    /// Case (e) coupling ratio.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    /// closed_form | general (harper_kicked).
    #[arg(long)]
    pub mode: Option<String>,
    /// open | periodic.
    #[arg(long)]
    pub boundary: Option<String>,
    /// Number of synthetic values (uniform).
    #[arg(long)]
    pub count: Option<String>,
    /// Comma-separated q values.
    #[arg(long)]
    pub q_grid: Option<String>,
    /// Comma-separated bin or partition counts.
    #[arg(long)]
    pub scale_grid: Option<String>,
    #[arg(long)]
    pub min_window: Option<String>,
    #[arg(long)]
    pub hist_bins: Option<String>,
    /// Comma-separated alpha values (floquet-compare).
    #[arg(long)]
    pub alpha_ladder: Option<String>,
    /// Worker threads; 0 picks the core count.
    #[arg(long)]
    pub workers: Option<String>,
    #[arg(long)]
    pub out_dir: Option<String>,
    /// Allow dimensions above 2001.
    #[arg(long)]
    pub full_scale: bool,
}

impl RunArgs {
    fn flag_pairs(&self) -> Vec<(&'static str, Option<&String>)> {
        vec![
            ("system", self.system.as_ref()),
            ("j", self.j.as_ref()),
            ("case", self.case.as_ref()),
            ("alpha", self.alpha.as_ref()),
            ("alpha_over", self.alpha_over.as_ref()),
            ("eta_over_j", self.eta_over_j.as_ref()),
            ("xi", self.xi.as_ref()),
            ("xi_sweep", self.xi_sweep.as_ref()),
            ("sigma", self.sigma.as_ref()),
            ("sigma_sweep", self.sigma_sweep.as_ref()),
            ("length", self.length.as_ref()),
            ("period", self.period.as_ref()),
            ("epsilon", self.epsilon.as_ref()),
            ("mode", self.mode.as_ref()),
            ("boundary", self.boundary.as_ref()),
            ("count", self.count.as_ref()),
            ("q_grid", self.q_grid.as_ref()),
            ("scale_grid", self.scale_grid.as_ref()),
            ("min_window", self.min_window.as_ref()),
            ("hist_bins", self.hist_bins.as_ref()),
            ("alpha_ladder", self.alpha_ladder.as_ref()),
            ("workers", self.workers.as_ref()),
            ("out_dir", self.out_dir.as_ref()),
        ]
    }

    /// File values first, then flags on top.
    pub fn merged(&self) -> Result<BTreeMap<String, String>> {
        let mut map = match &self.config {
            Some(path) => config::read_config_file(path)?,
            None => BTreeMap::new(),
        };
        for (key, value) in self.flag_pairs() {
            if let Some(v) = value {
                map.insert(key.to_string(), v.clone());
            }
        }
        if self.full_scale {
            map.insert("full_scale".to_string(), "true".to_string());
        }
        Ok(map)
    }

    pub fn parse_config(&self) -> Result<RunConfig> {
        resolve(self.merged()?)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_NUMERICAL,
    }
}

pub fn execute(command: &Command) -> Result<Vec<PathBuf>> {
    let cfg = command.args().parse_config()?;
    match command {
        Command::Butterfly(_) => commands::cmd_butterfly(&cfg),
        Command::Spectrum(_) => commands::cmd_analyze_spectrum(&cfg),
        Command::Eigenstates(_) => commands::cmd_analyze_eigenstates(&cfg),
        Command::FloquetCompare(_) => commands::cmd_floquet_compare(&cfg),
        Command::HarperDiff(_) => commands::cmd_harper_diff(&cfg),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

//! Flat JSON run configurations, one scenario per file.
//!
//! Parsing is strict: unknown keys are rejected, and each scenario has its
//! own struct listing exactly the fields it accepts.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use vibron::Tolerances;

use crate::error::{CliError, CliResult};

/// Optional parameter sweep: rerun the scenario once per value of a named
/// scalar field, each run writing its own files.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default)]
    pub tau_herm: Option<f64>,
    #[serde(default)]
    pub tau_tr: Option<f64>,
    #[serde(default)]
    pub tau_psd: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            herm: self.tau_herm.unwrap_or(base.herm),
            tr: self.tau_tr.unwrap_or(base.tr),
            psd: self.tau_psd.unwrap_or(base.psd),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzianTermConfig {
    pub g: f64,
    pub gamma: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceConfig {
    pub scenario: String,
    pub g: f64,
    pub gamma0: f64,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub rho11: Option<f64>,
    #[serde(default)]
    pub rho10_re: Option<f64>,
    #[serde(default)]
    pub rho10_im: Option<f64>,
    #[serde(default)]
    pub elements: Option<Vec<String>>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub tau_herm: Option<f64>,
    #[serde(default)]
    pub tau_tr: Option<f64>,
    #[serde(default)]
    pub tau_psd: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixConfig {
    pub fn to_matrix(&self) -> CliResult<vibron::CMatrix> {
        vibron::linalg::MatrixJson { dim: self.dim, entries: self.entries.clone() }
            .to_matrix()
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonHermitianConfig {
    pub scenario: String,
    pub h_eff: MatrixConfig,
    pub r0: MatrixConfig,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub elements: Option<Vec<String>>,
    #[serde(default)]
    pub tau_herm: Option<f64>,
    #[serde(default)]
    pub tau_tr: Option<f64>,
    #[serde(default)]
    pub tau_psd: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GkslEquivalenceConfig {
    pub scenario: String,
    pub h_eff: MatrixConfig,
    pub r0: MatrixConfig,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub elements: Option<Vec<String>>,
    #[serde(default)]
    pub tau_herm: Option<f64>,
    #[serde(default)]
    pub tau_tr: Option<f64>,
    #[serde(default)]
    pub tau_psd: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudomodeConfig {
    pub scenario: String,
    pub omega1: f64,
    pub terms: Vec<LorentzianTermConfig>,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub psi1_re: Option<f64>,
    #[serde(default)]
    pub psi1_im: Option<f64>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub tau_herm: Option<f64>,
    #[serde(default)]
    pub tau_tr: Option<f64>,
    #[serde(default)]
    pub tau_psd: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FriedrichsConvergenceConfig {
    pub scenario: String,
    pub omega1: f64,
    pub terms: Vec<LorentzianTermConfig>,
    pub t_max: f64,
    pub points: usize,
    pub mode_counts: Vec<usize>,
    #[serde(default = "default_window")]
    pub window: f64,
    #[serde(default)]
    pub tau_herm: Option<f64>,
    #[serde(default)]
    pub tau_tr: Option<f64>,
    #[serde(default)]
    pub tau_psd: Option<f64>,
}

fn default_window() -> f64 {
    40.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VanHoveSweepConfig {
    pub scenario: String,
    pub g: f64,
    pub gamma0: f64,
    pub lambdas: Vec<f64>,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub rho11: Option<f64>,
    #[serde(default)]
    pub rho10_re: Option<f64>,
    #[serde(default)]
    pub rho10_im: Option<f64>,
    #[serde(default)]
    pub tau_herm: Option<f64>,
    #[serde(default)]
    pub tau_tr: Option<f64>,
    #[serde(default)]
    pub tau_psd: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteTempConfig {
    pub scenario: String,
    pub g: f64,
    pub gamma0: f64,
    pub n_mean: f64,
    #[serde(default)]
    pub lambdas: Option<Vec<f64>>,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub rho11: Option<f64>,
    #[serde(default)]
    pub rho10_re: Option<f64>,
    #[serde(default)]
    pub rho10_im: Option<f64>,
    #[serde(default)]
    pub tau_herm: Option<f64>,
    #[serde(default)]
    pub tau_tr: Option<f64>,
    #[serde(default)]
    pub tau_psd: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FmoConfig {
    pub scenario: String,
    pub omega0_cm: f64,
    pub beta_inv_cm: f64,
    pub huang_rhys: f64,
    pub gamma0_half_cm: f64,
}

/// A parsed and structurally validated run configuration.
#[derive(Debug, Clone)]
pub enum RunConfig {
    Resonance(ResonanceConfig),
    NonHermitian(NonHermitianConfig),
    GkslEquivalence(GkslEquivalenceConfig),
    Pseudomode(PseudomodeConfig),
    FriedrichsConvergence(FriedrichsConvergenceConfig),
    VanHoveSweep(VanHoveSweepConfig),
    FiniteTemp(FiniteTempConfig),
    Fmo(FmoConfig),
}

impl RunConfig {
    pub fn scenario_name(&self) -> &'static str {
        match self {
            RunConfig::Resonance(_) => "resonance",
            RunConfig::NonHermitian(_) => "nonhermitian",
            RunConfig::GkslEquivalence(_) => "gksl-equivalence",
            RunConfig::Pseudomode(_) => "pseudomode",
            RunConfig::FriedrichsConvergence(_) => "friedrichs-convergence",
            RunConfig::VanHoveSweep(_) => "van-hove-sweep",
            RunConfig::FiniteTemp(_) => "finite-temp",
            RunConfig::Fmo(_) => "fmo",
        }
    }

    pub fn tolerances(&self, base: Tolerances) -> Tolerances {
        let (h, t, p) = match self {
            RunConfig::Resonance(c) => (c.tau_herm, c.tau_tr, c.tau_psd),
            RunConfig::NonHermitian(c) => (c.tau_herm, c.tau_tr, c.tau_psd),
            RunConfig::GkslEquivalence(c) => (c.tau_herm, c.tau_tr, c.tau_psd),
            RunConfig::Pseudomode(c) => (c.tau_herm, c.tau_tr, c.tau_psd),
            RunConfig::FriedrichsConvergence(c) => (c.tau_herm, c.tau_tr, c.tau_psd),
            RunConfig::VanHoveSweep(c) => (c.tau_herm, c.tau_tr, c.tau_psd),
            RunConfig::FiniteTemp(c) => (c.tau_herm, c.tau_tr, c.tau_psd),
            RunConfig::Fmo(_) => (None, None, None),
        };
        ToleranceOverrides { tau_herm: h, tau_tr: t, tau_psd: p }.apply(base)
    }
}

#[derive(Debug, Deserialize)]
struct ScenarioProbe {
    scenario: String,
}

/// Load and validate a config file. Syntax errors carry line/column info
/// from the JSON parser; unknown keys are named in the error.
pub fn load_config(path: &Path) -> CliResult<(RunConfig, String)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let config = parse_config(&text)?;
    Ok((config, text))
}

pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let probe: ScenarioProbe = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("cannot read scenario field: {e}")))?;
    let config = match probe.scenario.as_str() {
        "resonance" => RunConfig::Resonance(parse(text)?),
        "nonhermitian" => RunConfig::NonHermitian(parse(text)?),
        "gksl-equivalence" => RunConfig::GkslEquivalence(parse(text)?),
        "pseudomode" => RunConfig::Pseudomode(parse(text)?),
        "friedrichs-convergence" => RunConfig::FriedrichsConvergence(parse(text)?),
        "van-hove-sweep" => RunConfig::VanHoveSweep(parse(text)?),
        "finite-temp" => RunConfig::FiniteTemp(parse(text)?),
        "fmo" => RunConfig::Fmo(parse(text)?),
        other => {
            return Err(CliError::Config(format!(
                "unknown scenario \"{other}\" (expected one of: nonhermitian, \
                 gksl-equivalence, pseudomode, friedrichs-convergence, resonance, \
                 van-hove-sweep, finite-temp, fmo)"
            )))
        }
    };
    validate(&config)?;
    Ok(config)
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

fn check_grid(t_max: f64, points: usize) -> CliResult<()> {
    if points < 2 {
        return Err(CliError::Config(format!(
            "points must be at least 2, got {points}"
        )));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CliError::Config(format!("t_max must be positive, got {t_max}")));
    }
    Ok(())
}

fn check_sweep(sweep: &Option<SweepSpec>, allowed: &[&str]) -> CliResult<()> {
    if let Some(s) = sweep {
        if !allowed.contains(&s.parameter.as_str()) {
            return Err(CliError::Config(format!(
                "sweep parameter \"{}\" not supported here (allowed: {})",
                s.parameter,
                allowed.join(", ")
            )));
        }
        if s.values.is_empty() {
            return Err(CliError::Config("sweep values must be non-empty".into()));
        }
    }
    Ok(())
}

fn validate(config: &RunConfig) -> CliResult<()> {
    match config {
        RunConfig::Resonance(c) => {
            check_grid(c.t_max, c.points)?;
            check_sweep(&c.sweep, &["g", "gamma0"])?;
        }
        RunConfig::NonHermitian(c) => check_grid(c.t_max, c.points)?,
        RunConfig::GkslEquivalence(c) => check_grid(c.t_max, c.points)?,
        RunConfig::Pseudomode(c) => {
            check_grid(c.t_max, c.points)?;
            check_sweep(&c.sweep, &["omega1"])?;
            if c.terms.is_empty() {
                return Err(CliError::Config("terms must be non-empty".into()));
            }
        }
        RunConfig::FriedrichsConvergence(c) => {
            check_grid(c.t_max, c.points)?;
            if c.terms.is_empty() {
                return Err(CliError::Config("terms must be non-empty".into()));
            }
            if c.mode_counts.is_empty() {
                return Err(CliError::Config("mode_counts must be non-empty".into()));
            }
        }
        RunConfig::VanHoveSweep(c) => {
            check_grid(c.t_max, c.points)?;
            if c.lambdas.is_empty() {
                return Err(CliError::Config("lambdas must be non-empty".into()));
            }
        }
        RunConfig::FiniteTemp(c) => check_grid(c.t_max, c.points)?,
        RunConfig::Fmo(_) => {}
    }
    Ok(())
}

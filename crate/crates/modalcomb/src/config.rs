//! TOML run configuration. Unknown keys are rejected; command-line flags
//! override file values.

use crate::error::{AppError, AppResult};
use modalcomb_core::mcmc::ChainConfig;
use modalcomb_core::model::{DiscountNormalization, Family, ModelPriors};
use modalcomb_core::priors::PriorSpec;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub panel: Option<PathBuf>,
    pub ticker: Option<String>,
    pub family: Option<String>,
    pub families: Option<Vec<String>>,
    pub priors: Option<PriorsChoice>,
    pub lambda: Option<f64>,
    pub normalization: Option<String>,
    pub chains: Option<ChainsConfig>,
    pub simulate: Option<SimulateConfig>,
    pub evaluate: Option<EvaluateConfig>,
}

/// A named prior set or an inline custom table.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PriorsChoice {
    Named(String),
    Custom(CustomPriors),
}

/// Overrides applied on top of a named base set.
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomPriors {
    pub base: Option<String>,
    pub w0: Option<PriorTable>,
    pub omega_alpha: Option<Vec<f64>>,
    pub scale: Option<PriorTable>,
    pub asymmetry: Option<PriorTable>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "dist", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PriorTable {
    Normal { mean: f64, var: f64 },
    HalfCauchy { scale: f64 },
    InvGamma { shape: f64, scale: f64 },
    Gamma { shape: f64, rate: f64 },
    Beta { a: f64, b: f64 },
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
}

impl From<&PriorTable> for PriorSpec {
    fn from(t: &PriorTable) -> Self {
        match *t {
            PriorTable::Normal { mean, var } => PriorSpec::Normal { mean, var },
            PriorTable::HalfCauchy { scale } => PriorSpec::HalfCauchy { loc: 0.0, scale },
            PriorTable::InvGamma { shape, scale } => PriorSpec::InvGamma { shape, scale },
            PriorTable::Gamma { shape, rate } => PriorSpec::Gamma { shape, rate },
            PriorTable::Beta { a, b } => PriorSpec::Beta { a, b },
            PriorTable::Uniform { lo, hi } => PriorSpec::Uniform { lo, hi },
            PriorTable::Exponential { rate } => PriorSpec::Exponential { rate },
        }
    }
}

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainsConfig {
    pub preset: Option<String>,
    pub chains: Option<usize>,
    pub burn_in: Option<usize>,
    pub draws: Option<usize>,
}

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub tau: Option<Vec<f64>>,
    pub beta: Option<Vec<f64>>,
    pub kappa: Option<Vec<f64>>,
    pub n_reps: Option<usize>,
    pub n_obs: Option<usize>,
    pub full: Option<bool>,
}

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateConfig {
    pub window: Option<usize>,
    pub folds: Option<usize>,
    pub imputation: Option<String>,
    pub ppd_draws: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::config("config", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> AppResult<Self> {
        toml::from_str(text).map_err(|e| AppError::config("config", e.message().to_string()))
    }
}

pub fn parse_family(s: &str) -> AppResult<Family> {
    Family::parse(s).ok_or_else(|| AppError::config("family", format!("unknown family '{s}' (expected ald, an, rg or ald_latent)")))
}

pub fn parse_normalization(s: &str) -> AppResult<DiscountNormalization> {
    match s {
        "sample-size" => Ok(DiscountNormalization::SampleSize),
        "raw" => Ok(DiscountNormalization::Raw),
        _ => Err(AppError::config("normalization", format!("unknown normalization '{s}' (expected sample-size or raw)"))),
    }
}

fn named_priors(name: &str, family: Family, m: usize) -> AppResult<ModelPriors> {
    match name {
        "sim-defaults" => Ok(ModelPriors::sim_defaults(family, m)),
        "data-defaults" => Ok(ModelPriors::data_defaults(family, m)),
        _ => Err(AppError::config("priors", format!("unknown prior set '{name}'"))),
    }
}

fn apply_custom(c: &CustomPriors, default_set: &str, family: Family, m: usize) -> AppResult<ModelPriors> {
    let mut p = named_priors(c.base.as_deref().unwrap_or(default_set), family, m)?;
    if let Some(t) = &c.w0 {
        p.w0 = t.into();
    }
    if let Some(a) = &c.omega_alpha {
        p.omega = PriorSpec::Dirichlet { alpha: a.clone() };
    }
    if let Some(t) = &c.scale {
        p.scale = t.into();
    }
    if let Some(t) = &c.asymmetry {
        p.asymmetry = Some(t.into());
    }
    Ok(p)
}

/// Priors from a flag (set name or TOML file), the config file, or the
/// command's default set, in that order.
pub fn resolve_priors(
    flag: Option<&str>,
    file: Option<&PriorsChoice>,
    default_set: &str,
    family: Family,
    m: usize,
) -> AppResult<ModelPriors> {
    let p = match (flag, file) {
        (Some(name @ ("sim-defaults" | "data-defaults")), _) => named_priors(name, family, m)?,
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| AppError::config("priors", format!("{path}: {e}")))?;
            let c: CustomPriors = toml::from_str(&text).map_err(|e| AppError::config("priors", e.message().to_string()))?;
            apply_custom(&c, default_set, family, m)?
        }
        (None, Some(PriorsChoice::Named(name))) => named_priors(name, family, m)?,
        (None, Some(PriorsChoice::Custom(c))) => apply_custom(c, default_set, family, m)?,
        (None, None) => named_priors(default_set, family, m)?,
    };
    p.validate(family, m)?;
    Ok(p)
}

/// Chain settings: preset, then file values, then flags.
pub fn resolve_chains(
    file: Option<&ChainsConfig>,
    default_preset: &str,
    flags: (Option<usize>, Option<usize>, Option<usize>),
    seed: u64,
) -> AppResult<ChainConfig> {
    let preset = file.and_then(|c| c.preset.as_deref()).unwrap_or(default_preset);
    let mut cfg = match preset {
        "desk" => ChainConfig::desk(seed),
        "data" => ChainConfig::data(seed),
        "simulation" => ChainConfig::simulation(seed),
        _ => return Err(AppError::config("chains.preset", format!("unknown preset '{preset}'"))),
    };
    let pick = |flag: Option<usize>, f: Option<usize>| flag.or(f);
    let (c, b, d) = flags;
    let n_chains = pick(c, file.and_then(|x| x.chains)).unwrap_or(cfg.n_chains);
    let burn_in = pick(b, file.and_then(|x| x.burn_in)).unwrap_or(cfg.burn_in);
    let draws = pick(d, file.and_then(|x| x.draws)).unwrap_or(cfg.draws);
    if (n_chains, burn_in, draws) != (cfg.n_chains, cfg.burn_in, cfg.draws) {
        cfg = ChainConfig::new(n_chains, burn_in, draws, seed);
    }
    if n_chains == 0 {
        return Err(AppError::config("chains", "need at least one chain"));
    }
    if draws == 0 {
        return Err(AppError::config("draws", "need at least one kept draw"));
    }
    cfg.validate()?;
    Ok(cfg)
}

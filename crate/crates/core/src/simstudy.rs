//! Monte Carlo studies of the combination models on simulated data.
//!
//! Each replicate draws `X` (`n × 4`, standard normal), simulates `y` from the
//! family at mode `w0 + ω'x`, fits the model and keeps the posterior summary.
//! Replicates are scored by bias, average posterior standard deviation,
//! Monte Carlo standard error of the posterior mean and 95% interval
//! coverage.

use crate::error::{Error, Result};
use crate::exec::{derive_seed, rng_from_seed, Executor, Sequential, SimRng};
use crate::mcmc::{ChainConfig, ParamSummary};
use crate::model::{fit, layout_for, sample_error_law, Family, ModelPriors, ModelSpec, TrainingWindow};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Asymmetry grid of the asymmetric Laplace and normal studies.
pub const TAU_GRID: [f64; 3] = [0.25, 0.5, 0.75];
/// Scale grid of the reverse Gumbel study.
pub const BETA_GRID: [f64; 3] = [1.0, 5.0, 10.0];
/// Asymmetry grid of the latent-form study.
pub const KAPPA_GRID: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub family: Family,
    /// `τ` (asymmetric Laplace/normal), `β` (reverse Gumbel) or `κ` (latent).
    pub grid_value: f64,
    pub n_reps: usize,
    pub n_obs: usize,
    pub w0: f64,
    pub omega: Vec<f64>,
    /// `σ` of the asymmetric Laplace/normal and `β` of the latent form.
    pub scale: f64,
    pub priors: ModelPriors,
    pub chains: ChainConfig,
    pub seed: u64,
}

impl SimConfig {
    /// Desk scale: 100 replicates, 2 chains of 1000 burn-in and 2000 kept draws.
    pub fn desk(family: Family, grid_value: f64, seed: u64) -> Self {
        Self {
            family,
            grid_value,
            n_reps: 100,
            n_obs: 100,
            w0: 0.0,
            omega: vec![0.25; 4],
            scale: 1.0,
            priors: ModelPriors::sim_defaults(family, 4),
            chains: ChainConfig::desk(seed),
            seed,
        }
    }

    /// Full scale: 500 replicates, 2 chains of 5000 burn-in and 10000 kept draws.
    pub fn full(family: Family, grid_value: f64, seed: u64) -> Self {
        Self {
            n_reps: 500,
            chains: ChainConfig::simulation(seed),
            ..Self::desk(family, grid_value, seed)
        }
    }

    pub fn m(&self) -> usize {
        self.omega.len()
    }

    /// Name of the grid parameter.
    pub fn grid_name(&self) -> &'static str {
        match self.family {
            Family::Ald | Family::An => "tau",
            Family::Rg => "beta",
            Family::AldLatent => "kappa",
        }
    }

    /// Scale and asymmetry of the data-generating law.
    fn law(&self) -> (f64, Option<f64>) {
        match self.family {
            Family::Ald | Family::An | Family::AldLatent => (self.scale, Some(self.grid_value)),
            Family::Rg => (self.grid_value, None),
        }
    }

    /// True parameter vector in the model's layout order.
    pub fn truth(&self) -> Vec<f64> {
        let (scale, asym) = self.law();
        let mut t = vec![self.w0];
        t.extend_from_slice(&self.omega);
        t.push(scale);
        t.extend(asym);
        t
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_reps < 2 {
            return Err(Error::Config(format!("n_reps must be at least 2, got {}", self.n_reps)));
        }
        if self.n_obs < self.m() + 2 {
            return Err(Error::Config(format!("n_obs must be at least {}", self.m() + 2)));
        }
        let (scale, asym) = self.law();
        crate::model::CombinationParams {
            w0: self.w0,
            omega: self.omega.clone(),
            scale,
            asymmetry: asym,
        }
        .validate(self.family)?;
        self.priors.validate(self.family, self.m())?;
        self.chains.validate()
    }
}

/// Simulated data for replicate `rep`; the same `(cfg.seed, rep)` always
/// gives the same window.
pub fn generate_dataset(cfg: &SimConfig, rep: usize) -> Result<TrainingWindow> {
    let mut rng = rng_from_seed(derive_seed(cfg.seed, (rep as u64) << 1));
    generate_with(cfg, rep, &mut rng)
}

fn generate_with(cfg: &SimConfig, rep: usize, rng: &mut SimRng) -> Result<TrainingWindow> {
    let m = cfg.m();
    let (scale, asym) = cfg.law();
    let mut x = Vec::with_capacity(cfg.n_obs * m);
    let mut y = Vec::with_capacity(cfg.n_obs);
    for _ in 0..cfg.n_obs {
        let row: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut *rng)).collect();
        let mode = cfg.w0 + row.iter().zip(&cfg.omega).map(|(a, b)| a * b).sum::<f64>();
        let value = match cfg.family {
            Family::AldLatent => {
                let kappa = cfg.grid_value;
                let v = -(1.0 - rng.random::<f64>()).ln();
                let z: f64 = StandardNormal.sample(&mut *rng);
                mode + scale * (1.0 / kappa - kappa) * v + (2.0 * scale * scale * v).sqrt() * z
            }
            _ => sample_error_law(cfg.family, mode, scale, asym, rng)?,
        };
        y.push(value);
        x.extend(row);
    }
    TrainingWindow::from_flat(y, x, m, rep)
}

/// One row of a study report.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub param: String,
    pub truth: f64,
    pub bias: f64,
    pub avg_se: f64,
    pub mcse: f64,
    pub cov: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimStudyReport {
    pub family: Family,
    pub grid_name: String,
    pub grid_value: f64,
    pub n_reps: usize,
    pub rows: Vec<SimRow>,
}

impl SimStudyReport {
    pub fn row(&self, param: &str) -> Option<&SimRow> {
        self.rows.iter().find(|r| r.param == param)
    }
}

/// Scores per-replicate posterior summaries against `truth`.
///
/// With `θ̄_j` the posterior mean of replicate `j` and `θ̄` their average:
/// `BIAS = θ̄ − θ`, `MCSE = √(Σ(θ̄_j − θ̄)² / (N(N−1)))`, `AVG.SE` is the
/// average posterior standard deviation and `COV` the fraction of
/// replicates whose 2.5%–97.5% interval contains `θ`.
pub fn evaluate_replicates(summaries: &[Vec<ParamSummary>], truth: &[f64]) -> Result<Vec<SimRow>> {
    let n = summaries.len();
    if n < 2 {
        return Err(Error::Dimension { expected: 2, got: n });
    }
    let p = truth.len();
    if let Some(bad) = summaries.iter().find(|s| s.len() != p) {
        return Err(Error::Dimension {
            expected: p,
            got: bad.len(),
        });
    }
    let nf = n as f64;
    Ok((0..p)
        .map(|j| {
            let means: Vec<f64> = summaries.iter().map(|s| s[j].mean).collect();
            let grand = means.iter().sum::<f64>() / nf;
            let ss: f64 = means.iter().map(|m| (m - grand) * (m - grand)).sum();
            let covered = summaries
                .iter()
                .filter(|s| s[j].q025 <= truth[j] && truth[j] <= s[j].q975)
                .count();
            SimRow {
                param: summaries[0][j].name.clone(),
                truth: truth[j],
                bias: grand - truth[j],
                avg_se: summaries.iter().map(|s| s[j].sd).sum::<f64>() / nf,
                mcse: (ss / (nf * (nf - 1.0))).sqrt(),
                cov: covered as f64 / nf,
            }
        })
        .collect())
}

/// Posterior summary of one replicate.
pub fn run_replicate(cfg: &SimConfig, rep: usize) -> Result<Vec<ParamSummary>> {
    let window = generate_dataset(cfg, rep)?;
    let spec = ModelSpec::new(cfg.family, cfg.priors.clone());
    let chains = ChainConfig {
        seed: derive_seed(cfg.seed, ((rep as u64) << 1) | 1),
        ..cfg.chains.clone()
    };
    Ok(fit(&spec, &window, &chains, &Sequential)?.summary().to_vec())
}

/// Runs every replicate through `exec` and scores them.
pub fn run_study<E: Executor>(cfg: &SimConfig, exec: &E) -> Result<SimStudyReport> {
    cfg.validate()?;
    let summaries = exec
        .map(cfg.n_reps, |rep| {
            run_replicate(cfg, rep).map_err(|e| Error::Replicate {
                index: rep,
                source: Box::new(e),
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let rows = evaluate_replicates(&summaries, &cfg.truth())?;
    Ok(SimStudyReport {
        family: cfg.family,
        grid_name: cfg.grid_name().into(),
        grid_value: cfg.grid_value,
        n_reps: cfg.n_reps,
        rows,
    })
}

/// Parameter names of a study, in report order.
pub fn param_names(cfg: &SimConfig) -> Vec<String> {
    layout_for(cfg.family, &cfg.priors, cfg.m()).names()
}

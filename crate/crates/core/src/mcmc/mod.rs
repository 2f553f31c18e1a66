//! Adaptive random-walk Metropolis on the unconstrained scale, a
//! data-augmentation Gibbs sampler for the latent asymmetric Laplace model,
//! and chain diagnostics.
//!
//! Each chain runs three phases:
//!
//! 1. the first `adapt_window` burn-in iterations update one parameter block
//!    at a time, tuning a per-block step size by Robbins–Monro toward
//!    `target_acceptance`;
//! 2. the remaining burn-in iterations use joint Gaussian proposals shaped by
//!    the empirical covariance of the chain so far, tuning a global scale;
//! 3. after burn-in the kernel is frozen and draws are kept.

mod diagnostics;
mod gibbs;
mod slice;

pub use diagnostics::{ess, mcse, rhat, summarize, ParamSummary};
pub use gibbs::{gibbs_ald, sample_latent_v, GibbsPriors};
pub use slice::slice_sample;

use crate::error::{Error, Result};
use crate::exec::{derive_seed, rng_from_seed, Executor, SimRng};
use crate::transforms::ParamLayout;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Attempts at drawing a finite starting point.
pub const INIT_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub n_chains: usize,
    pub burn_in: usize,
    pub draws: usize,
    pub seed: u64,
    /// Burn-in iterations using block-wise proposals before the joint phase.
    pub adapt_window: usize,
    pub target_acceptance: f64,
    /// NaN log-densities tolerated per chain before giving up.
    pub nan_budget: usize,
    /// Order in which parameter blocks are visited during block-wise updates;
    /// `None` means layout order.
    pub block_order: Option<Vec<usize>>,
}

impl ChainConfig {
    /// Two chains, 5000 burn-in, 10000 kept.
    pub fn simulation(seed: u64) -> Self {
        Self::new(2, 5000, 10_000, seed)
    }

    /// Four chains, 5000 burn-in, 10000 kept.
    pub fn data(seed: u64) -> Self {
        Self::new(4, 5000, 10_000, seed)
    }

    /// Two chains, 1000 burn-in, 2000 kept.
    pub fn desk(seed: u64) -> Self {
        Self::new(2, 1000, 2000, seed)
    }

    pub fn new(n_chains: usize, burn_in: usize, draws: usize, seed: u64) -> Self {
        Self {
            n_chains,
            burn_in,
            draws,
            seed,
            adapt_window: burn_in / 2,
            target_acceptance: 0.3,
            nan_budget: 1000,
            block_order: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_chains == 0 {
            return Err(Error::Config("n_chains must be at least 1".into()));
        }
        if self.draws == 0 {
            return Err(Error::Config("draws must be at least 1".into()));
        }
        if self.adapt_window > self.burn_in {
            return Err(Error::Config("adapt_window must not exceed burn_in".into()));
        }
        crate::error::check_unit_open("target_acceptance", self.target_acceptance)
    }
}

/// Log density on the constrained scale, up to a constant.
pub trait LogTarget: Sync {
    fn layout(&self) -> &ParamLayout;

    /// `-∞` marks points outside the support; NaN counts as a sampler fault.
    fn log_density(&self, x: &[f64]) -> f64;

    /// Random starting point on the constrained scale.
    fn initial_point(&self, rng: &mut SimRng) -> Vec<f64>;
}

/// Kept draws on the constrained scale, stored row-major chain by chain.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraws {
    names: Vec<String>,
    n_chains: usize,
    draws_per_chain: usize,
    values: Vec<f64>,
    acceptance: Vec<f64>,
    summary: Vec<ParamSummary>,
}

impl PosteriorDraws {
    /// `values` holds `n_chains · draws_per_chain` rows of `names.len()` values.
    pub fn new(
        names: Vec<String>,
        n_chains: usize,
        draws_per_chain: usize,
        values: Vec<f64>,
        acceptance: Vec<f64>,
    ) -> Result<Self> {
        let expected = names.len() * n_chains * draws_per_chain;
        if values.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: values.len(),
            });
        }
        let mut d = Self {
            names,
            n_chains,
            draws_per_chain,
            values,
            acceptance,
            summary: Vec::new(),
        };
        d.summary = summarize(&d);
        Ok(d)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_params(&self) -> usize {
        self.names.len()
    }

    pub fn n_chains(&self) -> usize {
        self.n_chains
    }

    pub fn draws_per_chain(&self) -> usize {
        self.draws_per_chain
    }

    pub fn n_draws(&self) -> usize {
        self.n_chains * self.draws_per_chain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row `i` of the pooled draws.
    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.n_params();
        &self.values[i * p..(i + 1) * p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_params().max(1))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All pooled draws of parameter `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    /// Draws of parameter `j` in chain `c`.
    pub fn chain_column(&self, c: usize, j: usize) -> Vec<f64> {
        let p = self.n_params();
        let start = c * self.draws_per_chain;
        (start..start + self.draws_per_chain)
            .map(|i| self.values[i * p + j])
            .collect()
    }

    /// Acceptance rate of the frozen kernel, per chain.
    pub fn acceptance(&self) -> &[f64] {
        &self.acceptance
    }

    pub fn summary(&self) -> &[ParamSummary] {
        &self.summary
    }

    pub fn param(&self, name: &str) -> Option<&ParamSummary> {
        self.summary.iter().find(|s| s.name == name)
    }
}

/// Runs `cfg.n_chains` independent chains through `exec`.
pub fn run_chains<T: LogTarget, E: Executor>(
    target: &T,
    cfg: &ChainConfig,
    init: Option<&[f64]>,
    exec: &E,
) -> Result<PosteriorDraws> {
    cfg.validate()?;
    let layout = target.layout();
    let n_blocks = layout.blocks().len();
    if let Some(order) = &cfg.block_order {
        let mut seen = vec![false; n_blocks];
        for &b in order {
            if b >= n_blocks || seen[b] {
                return Err(Error::Config(format!("block_order is not a permutation of 0..{n_blocks}")));
            }
            seen[b] = true;
        }
        if order.len() != n_blocks {
            return Err(Error::Config(format!("block_order is not a permutation of 0..{n_blocks}")));
        }
    }
    let results = exec.map(cfg.n_chains, |c| run_one_chain(target, cfg, init, c));
    let mut values = Vec::with_capacity(cfg.n_chains * cfg.draws * layout.constrained_dim());
    let mut acceptance = Vec::with_capacity(cfg.n_chains);
    for r in results {
        let (v, a) = r?;
        values.extend(v);
        acceptance.push(a);
    }
    PosteriorDraws::new(layout.names(), cfg.n_chains, cfg.draws, values, acceptance)
}

struct State {
    z: Vec<f64>,
    x: Vec<f64>,
    lp: f64,
}

struct Evaluator<'a, T: LogTarget> {
    target: &'a T,
    layout: &'a ParamLayout,
    nan_left: usize,
    chain: usize,
}

impl<T: LogTarget> Evaluator<'_, T> {
    /// Log density on the unconstrained scale; writes the constrained point.
    fn eval(&mut self, z: &[f64], x: &mut [f64]) -> Result<f64> {
        if z.iter().any(|v| !v.is_finite()) {
            return Ok(f64::NEG_INFINITY);
        }
        let lj = self.layout.constrain_into(z, x);
        let lp = self.target.log_density(x) + lj;
        if lp.is_nan() {
            if self.nan_left == 0 {
                return Err(Error::Sampler {
                    chain: self.chain,
                    reason: "log density returned NaN too often".into(),
                });
            }
            self.nan_left -= 1;
            return Ok(f64::NEG_INFINITY);
        }
        Ok(lp)
    }
}

fn initialize<T: LogTarget>(
    ev: &mut Evaluator<'_, T>,
    init: Option<&[f64]>,
    rng: &mut SimRng,
) -> Result<State> {
    let dz = ev.layout.unconstrained_dim();
    let dx = ev.layout.constrained_dim();
    let mut x = vec![0.0; dx];
    if let Some(x0) = init {
        let z = ev.layout.to_unconstrained(x0)?;
        let lp = ev.eval(&z, &mut x)?;
        if lp.is_finite() {
            return Ok(State { z, x, lp });
        }
        return Err(Error::Initialization { attempts: 1 });
    }
    for _ in 0..INIT_ATTEMPTS {
        let x0 = ev.target.initial_point(rng);
        let Ok(z) = ev.layout.to_unconstrained(&x0) else {
            continue;
        };
        debug_assert_eq!(z.len(), dz);
        let lp = ev.eval(&z, &mut x)?;
        if lp.is_finite() {
            return Ok(State { z, x, lp });
        }
    }
    Err(Error::Initialization {
        attempts: INIT_ATTEMPTS,
    })
}

fn normal(rng: &mut SimRng) -> f64 {
    StandardNormal.sample(rng)
}

fn accept(rng: &mut SimRng, log_ratio: f64) -> bool {
    if log_ratio >= 0.0 {
        return true;
    }
    let u: f64 = rng.random();
    u.ln() < log_ratio
}

fn rm_gain(k: usize) -> f64 {
    ((k + 1) as f64).powf(-0.6)
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
fn cholesky(a: &[f64], d: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = a[i * d + j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * d + i] = s.sqrt();
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    Some(l)
}

/// Running mean and scatter matrix (Welford).
struct Moments {
    n: usize,
    mean: Vec<f64>,
    scatter: Vec<f64>,
}

impl Moments {
    fn new(d: usize) -> Self {
        Self {
            n: 0,
            mean: vec![0.0; d],
            scatter: vec![0.0; d * d],
        }
    }

    fn push(&mut self, z: &[f64]) {
        let d = z.len();
        self.n += 1;
        let n = self.n as f64;
        let delta: Vec<f64> = z.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        for i in 0..d {
            self.mean[i] += delta[i] / n;
        }
        for i in 0..d {
            for j in 0..d {
                self.scatter[i * d + j] += delta[i] * (z[j] - self.mean[j]);
            }
        }
    }

    /// Cholesky factor of the regularized sample covariance, falling back to
    /// its diagonal and then to the identity.
    fn proposal_factor(&self, d: usize) -> Vec<f64> {
        let denom = (self.n.max(2) - 1) as f64;
        let mut cov: Vec<f64> = self.scatter.iter().map(|s| s / denom).collect();
        for i in 0..d {
            cov[i * d + i] += 1e-8 + 1e-6 * cov[i * d + i].abs();
        }
        if self.n > d + 1 {
            if let Some(l) = cholesky(&cov, d) {
                return l;
            }
        }
        let mut l = vec![0.0; d * d];
        for i in 0..d {
            let v = cov[i * d + i];
            l[i * d + i] = if v.is_finite() && v > 0.0 && self.n > 2 { v.sqrt() } else { 1.0 };
        }
        l
    }
}

fn block_step<T: LogTarget>(
    ev: &mut Evaluator<'_, T>,
    st: &mut State,
    range: core::ops::Range<usize>,
    scale: f64,
    prop_z: &mut Vec<f64>,
    prop_x: &mut [f64],
    rng: &mut SimRng,
) -> Result<bool> {
    prop_z.clone_from(&st.z);
    for i in range {
        prop_z[i] += scale * normal(rng);
    }
    let lp = ev.eval(prop_z, prop_x)?;
    if lp > f64::NEG_INFINITY && accept(rng, lp - st.lp) {
        core::mem::swap(&mut st.z, prop_z);
        st.x.copy_from_slice(prop_x);
        st.lp = lp;
        Ok(true)
    } else {
        Ok(false)
    }
}

fn joint_step<T: LogTarget>(
    ev: &mut Evaluator<'_, T>,
    st: &mut State,
    chol: &[f64],
    scale: f64,
    prop_z: &mut Vec<f64>,
    prop_x: &mut [f64],
    rng: &mut SimRng,
) -> Result<bool> {
    let d = st.z.len();
    let eps: Vec<f64> = (0..d).map(|_| normal(rng)).collect();
    prop_z.clone_from(&st.z);
    for i in 0..d {
        let mut s = 0.0;
        for k in 0..=i {
            s += chol[i * d + k] * eps[k];
        }
        prop_z[i] += scale * s;
    }
    let lp = ev.eval(prop_z, prop_x)?;
    if lp > f64::NEG_INFINITY && accept(rng, lp - st.lp) {
        core::mem::swap(&mut st.z, prop_z);
        st.x.copy_from_slice(prop_x);
        st.lp = lp;
        Ok(true)
    } else {
        Ok(false)
    }
}

const COV_REFRESH: usize = 100;

fn run_one_chain<T: LogTarget>(
    target: &T,
    cfg: &ChainConfig,
    init: Option<&[f64]>,
    chain: usize,
) -> Result<(Vec<f64>, f64)> {
    let layout = target.layout();
    let mut rng = rng_from_seed(derive_seed(cfg.seed, chain as u64));
    let mut ev = Evaluator {
        target,
        layout,
        nan_left: cfg.nan_budget,
        chain,
    };
    let mut st = initialize(&mut ev, init, &mut rng)?;
    let d = layout.unconstrained_dim();
    let ranges = layout.unconstrained_ranges();
    let order: Vec<usize> = match &cfg.block_order {
        Some(o) => o.clone(),
        None => (0..ranges.len()).collect(),
    };
    let mut block_log_scale: Vec<f64> = ranges
        .iter()
        .map(|r| (1.0 / (r.len().max(1) as f64).sqrt()).ln())
        .collect();
    let mut prop_z = st.z.clone();
    let mut prop_x = st.x.clone();
    let mut moments = Moments::new(d);
    let collect_from = cfg.adapt_window / 2;

    for it in 0..cfg.adapt_window {
        for &b in &order {
            if ranges[b].is_empty() {
                continue;
            }
            let scale = block_log_scale[b].exp();
            let acc = block_step(&mut ev, &mut st, ranges[b].clone(), scale, &mut prop_z, &mut prop_x, &mut rng)?;
            let a = if acc { 1.0 } else { 0.0 };
            block_log_scale[b] += rm_gain(it) * (a - cfg.target_acceptance);
        }
        if it >= collect_from {
            moments.push(&st.z);
        }
    }

    let joint_phase = cfg.burn_in > cfg.adapt_window;
    let mut chol = moments.proposal_factor(d);
    let mut log_scale = (2.38 / (d.max(1) as f64).sqrt()).ln();
    for (j, _) in (cfg.adapt_window..cfg.burn_in).enumerate() {
        let acc = joint_step(&mut ev, &mut st, &chol, log_scale.exp(), &mut prop_z, &mut prop_x, &mut rng)?;
        let a = if acc { 1.0 } else { 0.0 };
        log_scale += rm_gain(j) * (a - cfg.target_acceptance);
        moments.push(&st.z);
        if (j + 1) % COV_REFRESH == 0 {
            chol = moments.proposal_factor(d);
        }
    }

    let mut out = Vec::with_capacity(cfg.draws * st.x.len());
    let mut accepted = 0usize;
    let mut proposed = 0usize;
    for _ in 0..cfg.draws {
        if joint_phase {
            accepted += usize::from(joint_step(
                &mut ev,
                &mut st,
                &chol,
                log_scale.exp(),
                &mut prop_z,
                &mut prop_x,
                &mut rng,
            )?);
            proposed += 1;
        } else {
            for &b in &order {
                if ranges[b].is_empty() {
                    continue;
                }
                let scale = block_log_scale[b].exp();
                accepted += usize::from(block_step(
                    &mut ev,
                    &mut st,
                    ranges[b].clone(),
                    scale,
                    &mut prop_z,
                    &mut prop_x,
                    &mut rng,
                )?);
                proposed += 1;
            }
        }
        out.extend_from_slice(&st.x);
    }
    let rate = if proposed == 0 { 0.0 } else { accepted as f64 / proposed as f64 };
    Ok((out, rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::priors::PriorSpec;
    use crate::transforms::{Block, ParamTransform};
    use alloc::string::ToString;

    struct StdNormal3 {
        layout: ParamLayout,
    }

    impl StdNormal3 {
        fn new() -> Self {
            let blocks = (0..3)
                .map(|i| Block {
                    name: format!("x{i}"),
                    transform: ParamTransform::Identity,
                })
                .collect();
            Self {
                layout: ParamLayout::new(blocks),
            }
        }
    }

    impl LogTarget for StdNormal3 {
        fn layout(&self) -> &ParamLayout {
            &self.layout
        }
        fn log_density(&self, x: &[f64]) -> f64 {
            -0.5 * x.iter().map(|v| v * v).sum::<f64>()
        }
        fn initial_point(&self, rng: &mut SimRng) -> Vec<f64> {
            (0..3).map(|_| 3.0 * normal(rng)).collect()
        }
    }

    struct BetaTarget {
        layout: ParamLayout,
    }

    impl LogTarget for BetaTarget {
        fn layout(&self) -> &ParamLayout {
            &self.layout
        }
        fn log_density(&self, x: &[f64]) -> f64 {
            PriorSpec::Beta { a: 2.0, b: 2.0 }.ln_pdf_scalar(x[0])
        }
        fn initial_point(&self, rng: &mut SimRng) -> Vec<f64> {
            PriorSpec::Beta { a: 2.0, b: 2.0 }.sample(rng)
        }
    }

    #[test]
    fn standard_normal_target() {
        let cfg = ChainConfig::new(4, 1000, 3000, 11);
        let d = run_chains(&StdNormal3::new(), &cfg, None, &Sequential).unwrap();
        for s in d.summary() {
            assert!(s.mean.abs() < 3.0 * s.mcse, "{s:?}");
            assert!(s.rhat.unwrap() < 1.05, "{s:?}");
            assert!((s.sd - 1.0).abs() < 0.1, "{s:?}");
        }
        assert!(d.acceptance().iter().all(|&a| a > 0.1 && a < 0.6));
    }

    #[test]
    fn beta_through_logit() {
        let t = BetaTarget {
            layout: ParamLayout::new(vec![Block {
                name: "p".to_string(),
                transform: ParamTransform::Logit,
            }]),
        };
        let d = run_chains(&t, &ChainConfig::new(2, 1000, 4000, 5), None, &Sequential).unwrap();
        let s = d.param("p").unwrap();
        assert!((s.mean - 0.5).abs() < 3.0 * s.mcse, "{s:?}");
        assert!(d.values().iter().all(|&p| p > 0.0 && p < 1.0));
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = ChainConfig::new(2, 200, 300, 3);
        let a = run_chains(&StdNormal3::new(), &cfg, None, &Sequential).unwrap();
        let b = run_chains(&StdNormal3::new(), &cfg, None, &Sequential).unwrap();
        assert_eq!(a.values(), b.values());
        let c = run_chains(&StdNormal3::new(), &ChainConfig { seed: 4, ..cfg }, None, &Sequential).unwrap();
        assert_ne!(a.values(), c.values());
    }

    fn scalar_layout() -> ParamLayout {
        ParamLayout::new(vec![Block {
            name: "x".to_string(),
            transform: ParamTransform::Identity,
        }])
    }

    struct Hopeless(ParamLayout);

    impl LogTarget for Hopeless {
        fn layout(&self) -> &ParamLayout {
            &self.0
        }
        fn log_density(&self, _: &[f64]) -> f64 {
            f64::NEG_INFINITY
        }
        fn initial_point(&self, _: &mut SimRng) -> Vec<f64> {
            vec![0.0]
        }
    }

    struct Flaky(ParamLayout);

    impl LogTarget for Flaky {
        fn layout(&self) -> &ParamLayout {
            &self.0
        }
        fn log_density(&self, x: &[f64]) -> f64 {
            if x[0] == 0.0 {
                0.0
            } else {
                f64::NAN
            }
        }
        fn initial_point(&self, _: &mut SimRng) -> Vec<f64> {
            vec![0.0]
        }
    }

    #[test]
    fn failures_are_reported() {
        let cfg = ChainConfig::new(1, 10, 10, 0);
        assert!(matches!(
            run_chains(&Hopeless(scalar_layout()), &cfg, None, &Sequential),
            Err(Error::Initialization { attempts: INIT_ATTEMPTS })
        ));
        let cfg = ChainConfig { nan_budget: 5, ..ChainConfig::new(1, 100, 10, 0) };
        assert!(matches!(run_chains(&Flaky(scalar_layout()), &cfg, None, &Sequential), Err(Error::Sampler { .. })));
        let bad = ChainConfig { block_order: Some(vec![1]), ..ChainConfig::new(1, 10, 10, 0) };
        assert!(matches!(run_chains(&StdNormal3::new(), &bad, None, &Sequential), Err(Error::Config(_))));
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = [4.0, 2.0, 0.4, 2.0, 5.0, 1.0, 0.4, 1.0, 3.0];
        let l = cholesky(&a, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| l[i * 3 + k] * l[j * 3 + k]).sum();
                assert!((s - a[i * 3 + j]).abs() < 1e-12);
            }
        }
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }
}

//! Convex-weight combination models with asymmetric error laws.
//!
//! The conditional mode of `y_t` is `w0 + ω'x_t` with `ω` on the simplex.
//! Around it the error follows an asymmetric Laplace (`σ`, `τ`), asymmetric
//! normal (`σ`, `τ`) or reverse Gumbel (`β`) law. [`Family::AldLatent`] is
//! the asymmetric Laplace written with `(β, κ)`, `τ = κ²/(1+κ²)` and
//! `σ = βκ/(1+κ²)`, which the Gibbs sampler works in.
//!
//! Constrained parameter vectors are laid out as `[w0, ω_1..ω_m, scale,
//! asymmetry]` (no asymmetry for the reverse Gumbel).

use crate::error::{Error, Result};
use crate::exec::{Executor, SimRng};
use crate::mcmc::{gibbs_ald, run_chains, ChainConfig, GibbsPriors, LogTarget, PosteriorDraws};
use crate::priors::PriorSpec;
use crate::special::{mean, quantile_sorted, sort_floats};
use crate::splitdist::{AsymmetricLaplace, AsymmetricNormal, ReverseGumbel, Univariate, RG_EXP_LIMIT};
use crate::transforms::{Block, ParamLayout, ParamTransform};
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance on `Σω = 1` for parameter vectors handed to the model.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Ald,
    An,
    Rg,
    AldLatent,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Ald => "ald",
            Family::An => "an",
            Family::Rg => "rg",
            Family::AldLatent => "ald_latent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ald" => Some(Family::Ald),
            "an" => Some(Family::An),
            "rg" => Some(Family::Rg),
            "ald_latent" => Some(Family::AldLatent),
            _ => None,
        }
    }

    pub fn scale_name(&self) -> &'static str {
        match self {
            Family::Ald | Family::An => "sigma",
            Family::Rg | Family::AldLatent => "beta",
        }
    }

    pub fn asymmetry_name(&self) -> Option<&'static str> {
        match self {
            Family::Ald | Family::An => Some("tau"),
            Family::Rg => None,
            Family::AldLatent => Some("kappa"),
        }
    }

    /// Length of the constrained parameter vector for `m` forecasters.
    pub fn n_params(&self, m: usize) -> usize {
        m + 2 + usize::from(self.asymmetry_name().is_some())
    }
}

/// Full parameter state of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationParams {
    pub w0: f64,
    pub omega: Vec<f64>,
    /// `σ` for the asymmetric Laplace/normal, `β` for the reverse Gumbel and
    /// the latent form.
    pub scale: f64,
    /// `τ`, or `κ` for the latent form; `None` for the reverse Gumbel.
    pub asymmetry: Option<f64>,
}

impl CombinationParams {
    pub fn from_slice(family: Family, m: usize, x: &[f64]) -> Result<Self> {
        let p = family.n_params(m);
        if x.len() != p {
            return Err(Error::Dimension {
                expected: p,
                got: x.len(),
            });
        }
        Ok(Self {
            w0: x[0],
            omega: x[1..=m].to_vec(),
            scale: x[m + 1],
            asymmetry: family.asymmetry_name().map(|_| x[m + 2]),
        })
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.omega.len() + 3);
        v.push(self.w0);
        v.extend_from_slice(&self.omega);
        v.push(self.scale);
        v.extend(self.asymmetry);
        v
    }

    /// Checks the simplex, positivity and interval constraints.
    pub fn validate(&self, family: Family) -> Result<()> {
        crate::error::check_finite("w0", self.w0)?;
        if let Some(&bad) = self.omega.iter().find(|&&w| !(w >= 0.0)) {
            return Err(Error::domain("omega", bad, "weights must be non-negative"));
        }
        let s: f64 = self.omega.iter().sum();
        if (s - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::domain("omega", s, "weights must sum to one"));
        }
        crate::error::check_positive(family.scale_name(), self.scale)?;
        match (family, self.asymmetry) {
            (Family::Ald | Family::An, Some(t)) => crate::error::check_unit_open("tau", t),
            (Family::AldLatent, Some(k)) => crate::error::check_positive("kappa", k),
            (Family::Rg, None) => Ok(()),
            (Family::Rg, Some(_)) => Err(Error::Config("reverse Gumbel has no asymmetry parameter".into())),
            (_, None) => Err(Error::Config("missing asymmetry parameter".into())),
        }
    }
}

/// Prior for every parameter block.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPriors {
    pub w0: PriorSpec,
    pub omega: PriorSpec,
    pub scale: PriorSpec,
    pub asymmetry: Option<PriorSpec>,
}

/// Support of the default uniform prior on `κ`.
pub const KAPPA_RANGE: (f64, f64) = (0.001, 4.0);

impl ModelPriors {
    /// Simulation-study priors: `w0 ~ N(0, 1000)`, `ω ~ Dir(1,…,1)`, scale
    /// `~ InvGamma(2, 2)` (`β ~ Gamma(2, rate 2)` for the latent form),
    /// `τ ~ Beta(1, 1)`, `κ ~ U(0.001, 4)`.
    pub fn sim_defaults(family: Family, m: usize) -> Self {
        Self {
            w0: PriorSpec::Normal { mean: 0.0, var: 1000.0 },
            omega: PriorSpec::Dirichlet { alpha: vec![1.0; m] },
            scale: match family {
                Family::AldLatent => PriorSpec::Gamma { shape: 2.0, rate: 2.0 },
                _ => PriorSpec::InvGamma { shape: 2.0, scale: 2.0 },
            },
            asymmetry: match family {
                Family::Ald | Family::An => Some(PriorSpec::Beta { a: 1.0, b: 1.0 }),
                Family::Rg => None,
                Family::AldLatent => Some(PriorSpec::Uniform {
                    lo: KAPPA_RANGE.0,
                    hi: KAPPA_RANGE.1,
                }),
            },
        }
    }

    /// Data-analysis priors: `w0 ~ N(0, 1)`, `ω ~ Dir(1,…,1)`, scale
    /// `~ Half-Cauchy(0, 1)`, `τ ~ Beta(2, 2)`, `κ ~ U(0.001, 4)`.
    pub fn data_defaults(family: Family, m: usize) -> Self {
        Self {
            w0: PriorSpec::Normal { mean: 0.0, var: 1.0 },
            omega: PriorSpec::Dirichlet { alpha: vec![1.0; m] },
            scale: PriorSpec::HalfCauchy { loc: 0.0, scale: 1.0 },
            asymmetry: match family {
                Family::Ald | Family::An => Some(PriorSpec::Beta { a: 2.0, b: 2.0 }),
                Family::Rg => None,
                Family::AldLatent => Some(PriorSpec::Uniform {
                    lo: KAPPA_RANGE.0,
                    hi: KAPPA_RANGE.1,
                }),
            },
        }
    }

    pub fn validate(&self, family: Family, m: usize) -> Result<()> {
        for p in [&self.w0, &self.omega, &self.scale].into_iter().chain(self.asymmetry.as_ref()) {
            p.validate()?;
        }
        if !matches!(self.w0, PriorSpec::Normal { .. }) {
            return Err(Error::Config("w0 prior must be normal".into()));
        }
        match &self.omega {
            PriorSpec::Dirichlet { alpha } if alpha.len() == m => {}
            PriorSpec::Dirichlet { alpha } => {
                return Err(Error::Dimension {
                    expected: m,
                    got: alpha.len(),
                })
            }
            _ => return Err(Error::Config("omega prior must be Dirichlet".into())),
        }
        if !matches!(
            self.scale,
            PriorSpec::HalfCauchy { loc: 0.0, .. }
                | PriorSpec::InvGamma { .. }
                | PriorSpec::Gamma { .. }
                | PriorSpec::Exponential { .. }
        ) {
            return Err(Error::Config("scale prior must live on (0, inf)".into()));
        }
        match (family, &self.asymmetry) {
            (Family::Rg, None) => Ok(()),
            (Family::Rg, Some(_)) => Err(Error::Config("reverse Gumbel takes no asymmetry prior".into())),
            (Family::Ald | Family::An, Some(PriorSpec::Beta { .. })) => Ok(()),
            (Family::Ald | Family::An, Some(PriorSpec::Uniform { lo, hi })) if *lo >= 0.0 && *hi <= 1.0 => Ok(()),
            (Family::AldLatent, Some(PriorSpec::Uniform { lo, .. })) if *lo >= 0.0 => Ok(()),
            _ => Err(Error::Config("asymmetry prior does not match the family".into())),
        }
    }

    /// Sum of log prior densities; `-∞` off-support.
    pub fn ln_density(&self, theta: &CombinationParams) -> f64 {
        let mut lp = self.w0.ln_pdf_scalar(theta.w0) + self.omega.ln_pdf(&theta.omega).unwrap_or(f64::NEG_INFINITY);
        lp += self.scale.ln_pdf_scalar(theta.scale);
        if let (Some(p), Some(a)) = (&self.asymmetry, theta.asymmetry) {
            lp += p.ln_pdf_scalar(a);
        }
        lp
    }

    /// Starting point drawn from the priors; heavy-tailed scale priors are
    /// truncated at their 0.99 quantile.
    pub fn initial_point(&self, rng: &mut SimRng) -> Vec<f64> {
        let mut x = self.w0.sample(rng);
        x.extend(self.omega.sample(rng));
        x.extend(self.scale.sample_truncated(rng, 0.99));
        if let Some(p) = &self.asymmetry {
            x.extend(p.sample(rng));
        }
        x
    }
}

/// How discount weights enter the power likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscountNormalization {
    /// Exponents `n·p_t(λ)`, so `λ → 0` gives unit weights.
    SampleSize,
    /// Exponents `p_t(λ)` as they stand (they sum to one).
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub family: Family,
    pub priors: ModelPriors,
    /// Exponential discount rate; `0` disables discounting.
    pub lambda: f64,
    pub normalization: DiscountNormalization,
}

impl ModelSpec {
    pub fn new(family: Family, priors: ModelPriors) -> Self {
        Self {
            family,
            priors,
            lambda: 0.0,
            normalization: DiscountNormalization::SampleSize,
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::domain("lambda", self.lambda, "must be non-negative"));
        }
        self.priors.validate(self.family, m)
    }

    /// Exponent applied to each log-likelihood term of a window of length `n`.
    pub fn likelihood_weights(&self, n: usize) -> Result<Vec<f64>> {
        if self.lambda == 0.0 {
            return Ok(vec![1.0; n]);
        }
        let p = discount_weights(self.lambda, n)?;
        Ok(match self.normalization {
            DiscountNormalization::SampleSize => p.into_iter().map(|v| v * n as f64).collect(),
            DiscountNormalization::Raw => p,
        })
    }
}

/// Complete training data: `y` of length `L` and an `L × m` design.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingWindow {
    y: Vec<f64>,
    x: Vec<f64>,
    m: usize,
    fold: usize,
}

impl TrainingWindow {
    /// `rows[t]` holds the `m` forecasts for `y[t]`.
    pub fn new(y: Vec<f64>, rows: &[Vec<f64>], fold: usize) -> Result<Self> {
        if rows.len() != y.len() {
            return Err(Error::Dimension {
                expected: y.len(),
                got: rows.len(),
            });
        }
        let m = rows.first().map_or(0, Vec::len);
        let mut x = Vec::with_capacity(m * rows.len());
        for r in rows {
            if r.len() != m {
                return Err(Error::Dimension { expected: m, got: r.len() });
            }
            x.extend_from_slice(r);
        }
        Self::from_flat(y, x, m, fold)
    }

    /// `x` is row-major with `m` columns.
    pub fn from_flat(y: Vec<f64>, x: Vec<f64>, m: usize, fold: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Dimension { expected: 2, got: m });
        }
        if x.len() != y.len() * m {
            return Err(Error::Dimension {
                expected: y.len() * m,
                got: x.len(),
            });
        }
        if y.len() < m + 2 {
            return Err(Error::Dimension {
                expected: m + 2,
                got: y.len(),
            });
        }
        for (t, &v) in y.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { t });
            }
        }
        for (i, &v) in x.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { t: i / m });
            }
        }
        Ok(Self { y, x, m, fold })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn fold(&self) -> usize {
        self.fold
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.x[t * self.m..(t + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks_exact(self.m)
    }
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// `w0 + ω'x`.
pub fn predict_mode(theta: &CombinationParams, x_row: &[f64]) -> Result<f64> {
    if x_row.len() != theta.omega.len() {
        return Err(Error::Dimension {
            expected: theta.omega.len(),
            got: x_row.len(),
        });
    }
    Ok(theta.w0 + dot(&theta.omega, x_row))
}

/// `p_t(λ) = e^{-λ(L-t)} / Σ_s e^{-λ(L-s)}` for `t = 1..L`.
pub fn discount_weights(lambda: f64, len: usize) -> Result<Vec<f64>> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::domain("lambda", lambda, "must be non-negative"));
    }
    if len == 0 {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    let raw: Vec<f64> = (1..=len).map(|t| (-lambda * (len - t) as f64).exp()).collect();
    let s: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|v| v / s).collect())
}

/// `(σ, τ)` of the asymmetric Laplace law behind the latent-form `(β, κ)`.
pub fn kappa_to_tau(beta: f64, kappa: f64) -> (f64, f64) {
    let k2 = kappa * kappa;
    (beta * kappa / (1.0 + k2), k2 / (1.0 + k2))
}

/// Per-observation log density of the residual `e = y - mode`.
#[derive(Debug, Clone, Copy)]
enum ErrorLaw {
    Ald { c: f64, inv_sigma: f64, tau: f64 },
    An { c: f64, inv_s2: f64, tau: f64 },
    Rg { ln_beta: f64, beta: f64 },
}

impl ErrorLaw {
    fn new(family: Family, scale: f64, asym: Option<f64>) -> Self {
        match family {
            Family::Ald | Family::AldLatent => {
                let (sigma, tau) = match family {
                    Family::Ald => (scale, asym.unwrap_or(0.5)),
                    _ => kappa_to_tau(scale, asym.unwrap_or(1.0)),
                };
                ErrorLaw::Ald {
                    c: (tau * (1.0 - tau) / sigma).ln(),
                    inv_sigma: 1.0 / sigma,
                    tau,
                }
            }
            Family::An => {
                let tau = asym.unwrap_or(0.5);
                ErrorLaw::An {
                    c: AsymmetricNormal::ln_normalizer(scale, tau),
                    inv_s2: 1.0 / (scale * scale),
                    tau,
                }
            }
            Family::Rg => ErrorLaw::Rg {
                ln_beta: scale.ln(),
                beta: scale,
            },
        }
    }

    /// `None` flags an exponent overflow.
    #[inline]
    fn ln_pdf(&self, e: f64) -> Option<f64> {
        Some(match *self {
            ErrorLaw::Ald { c, inv_sigma, tau } => {
                let slope = if e <= 0.0 { tau - 1.0 } else { tau };
                c - slope * e * inv_sigma
            }
            ErrorLaw::An { c, inv_s2, tau } => {
                let w = if e <= 0.0 { 1.0 - tau } else { tau };
                c - w * e * e * inv_s2
            }
            ErrorLaw::Rg { ln_beta, beta } => {
                let z = e / beta;
                if z > RG_EXP_LIMIT {
                    return None;
                }
                -ln_beta + z - z.exp()
            }
        })
    }
}

fn weighted_ll(
    family: Family,
    theta: &CombinationParams,
    window: &TrainingWindow,
    weights: &[f64],
) -> Result<f64> {
    let law = ErrorLaw::new(family, theta.scale, theta.asymmetry);
    let mut total = 0.0;
    for (t, (row, &y)) in window.rows().zip(window.y()).enumerate() {
        let e = y - theta.w0 - dot(&theta.omega, row);
        let l = law.ln_pdf(e).ok_or(Error::Overflow { t })?;
        if !l.is_finite() {
            return Err(Error::NonFinite { t });
        }
        total += weights[t] * l;
    }
    Ok(total)
}

/// `Σ_t weight_t · ln f(y_t − ŷ_t)`.
pub fn log_likelihood(spec: &ModelSpec, theta: &CombinationParams, window: &TrainingWindow) -> Result<f64> {
    theta.validate(spec.family)?;
    if theta.omega.len() != window.m() {
        return Err(Error::Dimension {
            expected: window.m(),
            got: theta.omega.len(),
        });
    }
    let w = spec.likelihood_weights(window.len())?;
    weighted_ll(spec.family, theta, window, &w)
}

/// Log likelihood plus log priors; `-∞` off-support or where the likelihood
/// cannot be evaluated.
pub fn log_posterior(spec: &ModelSpec, theta: &CombinationParams, window: &TrainingWindow) -> f64 {
    let lp = spec.priors.ln_density(theta);
    if lp == f64::NEG_INFINITY {
        return lp;
    }
    match log_likelihood(spec, theta, window) {
        Ok(ll) => ll + lp,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Parameter blocks of a family with `m` forecasters.
pub fn layout_for(family: Family, priors: &ModelPriors, m: usize) -> ParamLayout {
    let mut blocks = vec![
        Block {
            name: "w0".into(),
            transform: ParamTransform::Identity,
        },
        Block {
            name: "w".into(),
            transform: ParamTransform::StickBreaking { dim: m },
        },
        Block {
            name: family.scale_name().into(),
            transform: ParamTransform::Log,
        },
    ];
    if let Some(name) = family.asymmetry_name() {
        let transform = match (family, &priors.asymmetry) {
            (Family::AldLatent, Some(PriorSpec::Uniform { lo, hi })) => ParamTransform::ScaledLogit { lo: *lo, hi: *hi },
            (Family::AldLatent, _) => ParamTransform::Log,
            (_, Some(PriorSpec::Uniform { lo, hi })) => ParamTransform::ScaledLogit { lo: *lo, hi: *hi },
            _ => ParamTransform::Logit,
        };
        blocks.push(Block { name: name.into(), transform });
    }
    ParamLayout::new(blocks)
}

/// Posterior of one model on one window, as a sampler target.
#[derive(Debug, Clone)]
pub struct PosteriorTarget<'a> {
    spec: &'a ModelSpec,
    window: &'a TrainingWindow,
    layout: ParamLayout,
    weights: Vec<f64>,
}

impl<'a> PosteriorTarget<'a> {
    pub fn new(spec: &'a ModelSpec, window: &'a TrainingWindow) -> Result<Self> {
        spec.validate(window.m())?;
        Ok(Self {
            spec,
            window,
            layout: layout_for(spec.family, &spec.priors, window.m()),
            weights: spec.likelihood_weights(window.len())?,
        })
    }
}

impl LogTarget for PosteriorTarget<'_> {
    fn layout(&self) -> &ParamLayout {
        &self.layout
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        let m = self.window.m();
        let Ok(theta) = CombinationParams::from_slice(self.spec.family, m, x) else {
            return f64::NAN;
        };
        let lp = self.spec.priors.ln_density(&theta);
        if lp == f64::NEG_INFINITY || !(theta.scale > 0.0) {
            return f64::NEG_INFINITY;
        }
        match weighted_ll(self.spec.family, &theta, self.window, &self.weights) {
            Ok(ll) => ll + lp,
            Err(_) => f64::NEG_INFINITY,
        }
    }

    fn initial_point(&self, rng: &mut SimRng) -> Vec<f64> {
        self.spec.priors.initial_point(rng)
    }
}

/// Fits one window: the latent form by data-augmentation Gibbs sampling,
/// everything else by adaptive Metropolis.
pub fn fit<E: Executor>(
    spec: &ModelSpec,
    window: &TrainingWindow,
    cfg: &ChainConfig,
    exec: &E,
) -> Result<PosteriorDraws> {
    match spec.family {
        Family::AldLatent => {
            spec.validate(window.m())?;
            if spec.lambda != 0.0 {
                return Err(Error::Config("discounting is not available for the latent sampler".into()));
            }
            gibbs_ald(window, &GibbsPriors::from_model(&spec.priors)?, cfg, exec)
        }
        _ => run_chains(&PosteriorTarget::new(spec, window)?, cfg, None, exec),
    }
}

/// Draws from the posterior predictive at `x_next`, one per posterior draw.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictive {
    pub samples: Vec<f64>,
    /// Posterior mean of the conditional mode.
    pub point: f64,
    /// Posterior median of the conditional mode.
    pub point_median: f64,
}

impl Predictive {
    /// Predictive draws minus the point forecast.
    pub fn centered(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s - self.point).collect()
    }
}

/// Conditional modes `w0 + ω'x_next` for every posterior draw.
pub fn posterior_modes(family: Family, draws: &PosteriorDraws, x_next: &[f64]) -> Result<Vec<f64>> {
    let m = x_next.len();
    if draws.n_params() != family.n_params(m) {
        return Err(Error::Dimension {
            expected: family.n_params(m),
            got: draws.n_params(),
        });
    }
    Ok(draws.rows().map(|r| r[0] + dot(&r[1..=m], x_next)).collect())
}

pub fn posterior_predictive(
    spec: &ModelSpec,
    draws: &PosteriorDraws,
    x_next: &[f64],
    rng: &mut SimRng,
) -> Result<Predictive> {
    if draws.n_draws() == 0 {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    let m = x_next.len();
    let modes = posterior_modes(spec.family, draws, x_next)?;
    let mut samples = Vec::with_capacity(modes.len());
    for (row, &mode) in draws.rows().zip(&modes) {
        let theta = CombinationParams::from_slice(spec.family, m, row)?;
        samples.push(sample_error_law(spec.family, mode, theta.scale, theta.asymmetry, rng)?);
    }
    let mut sorted = modes.clone();
    sort_floats(&mut sorted);
    Ok(Predictive {
        samples,
        point: mean(&modes),
        point_median: quantile_sorted(&sorted, 0.5),
    })
}

/// `y − point` for every predictive draw.
pub fn centered_residual_ppd(
    spec: &ModelSpec,
    draws: &PosteriorDraws,
    x_next: &[f64],
    rng: &mut SimRng,
) -> Result<Vec<f64>> {
    Ok(posterior_predictive(spec, draws, x_next, rng)?.centered())
}

/// One draw of `y` with mode `mode` from a family.
pub fn sample_error_law(
    family: Family,
    mode: f64,
    scale: f64,
    asymmetry: Option<f64>,
    rng: &mut SimRng,
) -> Result<f64> {
    Ok(match family {
        Family::Ald => AsymmetricLaplace::new(mode, scale, asymmetry.unwrap_or(0.5))?.sample(rng),
        Family::An => AsymmetricNormal::new(mode, scale, asymmetry.unwrap_or(0.5))?.sample(rng),
        Family::Rg => ReverseGumbel::new(mode, scale)?.sample(rng),
        Family::AldLatent => AsymmetricLaplace::from_kappa_form(mode, scale, asymmetry.unwrap_or(1.0))?.sample(rng),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::{rng_from_seed, Sequential};
    use crate::losses::{LossKind, LossSpec};
    use modalcomb_oracles::{grid_argmax, ks_statistic};
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn theta(family: Family, w0: f64, omega: &[f64], scale: f64, asym: Option<f64>) -> CombinationParams {
        let t = CombinationParams {
            w0,
            omega: omega.to_vec(),
            scale,
            asymmetry: asym,
        };
        t.validate(family).unwrap();
        t
    }

    fn window(n: usize, m: usize, seed: u64) -> TrainingWindow {
        let mut r = rng_from_seed(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| StandardNormal.sample(&mut r)).collect())
            .collect();
        let y = rows
            .iter()
            .map(|row| {
                let s: f64 = row.iter().sum::<f64>() / m as f64;
                let e: f64 = StandardNormal.sample(&mut r);
                s + 0.5 * e
            })
            .collect();
        TrainingWindow::new(y, &rows, 0).unwrap()
    }

    #[test]
    fn mode_prediction() {
        let t = theta(Family::Ald, 0.0, &[1.0, 0.0, 0.0], 1.0, Some(0.5));
        assert_eq!(predict_mode(&t, &[3.0, 5.0, 7.0]).unwrap(), 3.0);
        let t = theta(Family::Ald, 0.0, &[0.25; 4], 1.0, Some(0.5));
        assert_eq!(predict_mode(&t, &[1.0, 2.0, 3.0, 4.0]).unwrap(), 2.5);
        assert!(predict_mode(&t, &[1.0]).is_err());
    }

    #[test]
    fn mode_is_density_argmax() {
        let mut r = rng_from_seed(21);
        for family in [Family::Ald, Family::An, Family::Rg] {
            for _ in 0..100 {
                let w: Vec<f64> = PriorSpec::Dirichlet { alpha: vec![1.0; 3] }.sample(&mut r);
                let scale = 0.2 + 3.0 * r.random::<f64>();
                let asym = (family != Family::Rg).then(|| 0.05 + 0.9 * r.random::<f64>());
                let t = theta(family, r.random::<f64>() - 0.5, &w, scale, asym);
                let x = [r.random::<f64>(), 2.0 * r.random::<f64>(), -r.random::<f64>()];
                let mode = predict_mode(&t, &x).unwrap();
                let law = ErrorLaw::new(family, scale, asym);
                let width = 10.0 * scale;
                let (arg, step) = grid_argmax(|y| law.ln_pdf(y - mode).unwrap(), mode - width, mode + width, 10_001);
                assert!((arg - mode).abs() <= step, "{family:?}: {arg} vs {mode}");
            }
        }
    }

    #[test]
    fn discounting() {
        assert_eq!(discount_weights(0.0, 5).unwrap(), [0.2; 5]);
        let p = discount_weights(2f64.ln(), 2).unwrap();
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-15 && (p[1] - 2.0 / 3.0).abs() < 1e-15);
        for &(lam, len) in &[(0.1, 12usize), (0.7, 5), (2.0, 30)] {
            let p = discount_weights(lam, len).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (i, &v) in p.iter().enumerate() {
                let t = (i + 1) as f64;
                let closed = (-lam * (len as f64 - t)).exp() * (1.0 - (-lam).exp()) / (1.0 - (-lam * len as f64).exp());
                assert!((v - closed).abs() < 1e-12);
                if i > 0 {
                    assert!(v >= p[i - 1]);
                }
            }
        }
        assert!(discount_weights(-0.1, 3).is_err());
    }

    #[test]
    fn ald_single_observation_at_mode() {
        let rows = vec![vec![1.0, 1.0]; 4];
        let w = TrainingWindow::new(vec![1.0; 4], &rows, 0).unwrap();
        let spec = ModelSpec::new(Family::Ald, ModelPriors::sim_defaults(Family::Ald, 2));
        let t = theta(Family::Ald, 0.0, &[0.5, 0.5], 2.0, Some(0.3));
        let ll = log_likelihood(&spec, &t, &w).unwrap();
        assert!((ll - 4.0 * (0.3f64 * 0.7 / 2.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn loss_gaps_through_likelihood() {
        let w = window(40, 3, 22);
        let mut r = rng_from_seed(23);
        let draw = |r: &mut SimRng| {
            let om = PriorSpec::Dirichlet { alpha: vec![1.0; 3] }.sample(r);
            (r.random::<f64>() * 2.0 - 1.0, om)
        };
        let residuals = |w0: f64, om: &[f64]| -> Vec<f64> {
            w.rows().zip(w.y()).map(|(row, y)| y - w0 - dot(om, row)).collect()
        };
        for (family, scale, asym) in [(Family::Ald, 1.3, Some(0.3)), (Family::An, 0.8, Some(0.6)), (Family::Rg, 2.0, None)] {
            let spec = ModelSpec::new(family, ModelPriors::sim_defaults(family, 3));
            let (kind, tau, factor, gap) = match family {
                Family::Ald => (LossKind::LinLin, 0.3, 1.0 / 1.3, -40.0 * (0.3f64 * 0.7 / 1.3).ln()),
                Family::An => (LossKind::AsymmetricQuadratic, 0.6, 1.0 / 0.64, -40.0 * AsymmetricNormal::ln_normalizer(0.8, 0.6)),
                _ => (LossKind::Linex, 0.5, 1.0, 40.0 * 2f64.ln() + 40.0),
            };
            let loss = LossSpec::new(kind, tau).unwrap();
            for _ in 0..100 {
                let (w0, om) = draw(&mut r);
                let t = theta(family, w0, &om, scale, asym);
                let nll = -log_likelihood(&spec, &t, &w).unwrap();
                let l = factor * loss.sum(&residuals(w0, &om));
                assert!((nll - l - gap).abs() < 1e-9, "{family:?}");
            }
        }
    }

    #[test]
    fn zero_discount_reproduces_plain_likelihood() {
        let w = window(20, 2, 24);
        let t = theta(Family::An, 0.1, &[0.3, 0.7], 0.9, Some(0.4));
        let plain = ModelSpec::new(Family::An, ModelPriors::sim_defaults(Family::An, 2));
        let a = log_likelihood(&plain, &t, &w).unwrap();
        let manual: f64 = w
            .rows()
            .zip(w.y())
            .map(|(row, &y)| AsymmetricNormal::ln_pdf_raw(predict_mode(&t, row).unwrap(), 0.9, 0.4, y))
            .sum();
        assert!((a - manual).abs() < 1e-10);
        let disc = ModelSpec { lambda: 0.3, ..plain.clone() };
        let b = log_likelihood(&disc, &t, &w).unwrap();
        assert!((a - b).abs() > 1e-6);
        let tiny = ModelSpec { lambda: 1e-12, ..plain };
        assert!((log_likelihood(&tiny, &t, &w).unwrap() - a).abs() < 1e-6);
    }

    #[test]
    fn rg_overflow_reports_observation() {
        let rows = vec![vec![0.0, 0.0]; 5];
        let mut y = vec![0.0; 5];
        y[3] = 800.0;
        let w = TrainingWindow::new(y, &rows, 0).unwrap();
        let spec = ModelSpec::new(Family::Rg, ModelPriors::sim_defaults(Family::Rg, 2));
        let t = theta(Family::Rg, 0.0, &[0.5, 0.5], 1.0, None);
        assert_eq!(log_likelihood(&spec, &t, &w), Err(Error::Overflow { t: 3 }));
        assert_eq!(log_posterior(&spec, &t, &w), f64::NEG_INFINITY);
    }

    #[test]
    fn posterior_support_and_parts() {
        let w = window(30, 2, 25);
        let spec = ModelSpec::new(Family::Ald, ModelPriors::data_defaults(Family::Ald, 2));
        let off = CombinationParams {
            w0: 0.0,
            omega: vec![0.7, 0.7],
            scale: 1.0,
            asymmetry: Some(0.5),
        };
        assert_eq!(log_posterior(&spec, &off, &w), f64::NEG_INFINITY);
        let t = theta(Family::Ald, 0.2, &[0.4, 0.6], 1.5, Some(0.35));
        let parts = log_likelihood(&spec, &t, &w).unwrap()
            + (-0.5 * (crate::special::LN_2PI) - 0.5 * 0.04)
            + 0.0
            + ((2.0 / core::f64::consts::PI).ln() - (1.0f64 + 2.25).ln())
            + (6f64.ln() + (0.35f64 * 0.65).ln());
        assert!((log_posterior(&spec, &t, &w) - parts).abs() < 1e-12);
    }

    #[test]
    fn flat_priors_rank_like_likelihood() {
        let w = window(30, 3, 26);
        let mut priors = ModelPriors::sim_defaults(Family::Ald, 3);
        priors.w0 = PriorSpec::Normal { mean: 0.0, var: 1e12 };
        priors.scale = PriorSpec::HalfCauchy { loc: 0.0, scale: 1e9 };
        let spec = ModelSpec::new(Family::Ald, priors);
        let mut r = rng_from_seed(27);
        let mut pairs = Vec::new();
        for _ in 0..200 {
            let om = PriorSpec::Dirichlet { alpha: vec![1.0; 3] }.sample(&mut r);
            let t = theta(Family::Ald, r.random::<f64>() - 0.5, &om, 1.0, Some(0.4));
            pairs.push((log_likelihood(&spec, &t, &w).unwrap(), log_posterior(&spec, &t, &w)));
        }
        for a in &pairs {
            for b in &pairs {
                if (a.0 - b.0).abs() > 1e-9 {
                    assert_eq!(a.0 < b.0, a.1 < b.1);
                }
            }
        }
    }

    #[test]
    fn layouts_and_names() {
        let l = layout_for(Family::Ald, &ModelPriors::sim_defaults(Family::Ald, 3), 3);
        assert_eq!(l.names(), ["w0", "w1", "w2", "w3", "sigma", "tau"]);
        let l = layout_for(Family::Rg, &ModelPriors::sim_defaults(Family::Rg, 2), 2);
        assert_eq!(l.names(), ["w0", "w1", "w2", "beta"]);
        let l = layout_for(Family::AldLatent, &ModelPriors::sim_defaults(Family::AldLatent, 2), 2);
        assert_eq!(l.names(), ["w0", "w1", "w2", "beta", "kappa"]);
    }

    #[test]
    fn predictive_concentrates_for_degenerate_draws() {
        let row = [0.1, 0.5, 0.4, 0.02, 0.3];
        let mut values = Vec::new();
        for _ in 0..500 {
            values.extend_from_slice(&row);
        }
        let names = ["w0", "w1", "w2", "w3", "sigma", "tau"].map(Into::into).to_vec();
        let mut v2 = Vec::new();
        for _ in 0..500 {
            v2.extend_from_slice(&[0.1, 0.5, 0.4, 0.1, 1e-6, 0.3]);
        }
        let _ = values;
        let d = PosteriorDraws::new(names, 1, 500, v2, vec![1.0]).unwrap();
        let spec = ModelSpec::new(Family::Ald, ModelPriors::sim_defaults(Family::Ald, 3));
        let x = [1.0, 2.0, 3.0];
        let p = posterior_predictive(&spec, &d, &x, &mut rng_from_seed(1)).unwrap();
        let mode = 0.1 + 0.5 + 0.8 + 0.3;
        assert!((p.point - mode).abs() < 1e-12);
        assert!(p.samples.iter().all(|s| (s - mode).abs() < 6.0 * 1e-6 / 0.3 * 10.0));
    }

    #[test]
    fn predictive_matches_mixture_cdf() {
        let mut r = rng_from_seed(30);
        let n = 20_000;
        let mut values = Vec::with_capacity(n * 5);
        for _ in 0..n {
            let u: f64 = r.random();
            values.extend_from_slice(&[0.2 * u, 0.5, 0.5, 0.5 + u, 0.2 + 0.5 * u]);
        }
        let names = ["w0", "w1", "w2", "sigma", "tau"].map(Into::into).to_vec();
        let d = PosteriorDraws::new(names, 1, n, values, vec![1.0]).unwrap();
        let spec = ModelSpec::new(Family::Ald, ModelPriors::sim_defaults(Family::Ald, 2));
        let x = [1.0, -1.0];
        let p = posterior_predictive(&spec, &d, &x, &mut r).unwrap();
        let laws: Vec<AsymmetricLaplace> = d
            .rows()
            .map(|row| AsymmetricLaplace::new(row[0] + row[1] - row[2], row[3], row[4]).unwrap())
            .collect();
        let cdf = |y: f64| laws.iter().map(|l| l.cdf(y)).sum::<f64>() / laws.len() as f64;
        let mut sub: Vec<f64> = p.samples.clone();
        sub.truncate(n);
        let ks = ks_statistic(&sub, cdf);
        assert!(ks < 0.02, "{ks}");
    }

    #[test]
    fn metropolis_recovers_equal_weights() {
        // ALD data with τ = 0.5 and weights ¼ each
        let mut r = rng_from_seed(31);
        let n = 100;
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..4).map(|_| StandardNormal.sample(&mut r)).collect()).collect();
        let law = AsymmetricLaplace::new(0.0, 1.0, 0.5).unwrap();
        let y: Vec<f64> = rows.iter().map(|row| 0.25 * row.iter().sum::<f64>() + law.sample(&mut r)).collect();
        let w = TrainingWindow::new(y, &rows, 0).unwrap();
        let spec = ModelSpec::new(Family::Ald, ModelPriors::sim_defaults(Family::Ald, 4));
        let d = fit(&spec, &w, &ChainConfig::desk(32), &Sequential).unwrap();
        for k in 1..=4 {
            let s = d.param(&alloc::format!("w{k}")).unwrap();
            assert!((s.mean - 0.25).abs() < 3.0 * s.sd, "{s:?}");
            assert!(s.rhat.unwrap() < 1.1, "{s:?}");
        }
        for row in d.rows() {
            assert!((row[1..5].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(row[1..5].iter().all(|&v| v >= 0.0));
            assert!(row[5] > 0.0 && row[6] > 0.0 && row[6] < 1.0);
        }
    }
}

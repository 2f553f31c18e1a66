//! Data-augmentation Gibbs sampler for the asymmetric Laplace combination in
//! its `(β, κ)` form.
//!
//! With `v_t ~ Exp(1)` and `a = 1/κ − κ`,
//! `y_t = w0 + ω'x_t + β a v_t + √(2β² v_t) z_t`, `z_t ~ N(0, 1)`, which
//! marginalises to the asymmetric Laplace law. Given `v`, `w0` is
//! conjugate normal; `v_t` is generalised inverse Gaussian; `ω`, `β` and `κ`
//! are updated by adaptive Metropolis (stick-breaking scale) and slice
//! sampling.

use super::{slice_sample, ChainConfig, PosteriorDraws};
use crate::error::{Error, Result};
use crate::exec::{derive_seed, rng_from_seed, Executor, SimRng};
use crate::model::{layout_for, Family, ModelPriors, TrainingWindow};
use crate::priors::PriorSpec;
use crate::transforms::ParamTransform;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

const INIT_ATTEMPTS: usize = 100;
const LOG_BETA_WIDTH: f64 = 0.5;
const KAPPA_WIDTH: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct GibbsPriors {
    pub w0_mean: f64,
    pub w0_var: f64,
    pub alpha: Vec<f64>,
    pub beta: PriorSpec,
    pub kappa: PriorSpec,
}

impl GibbsPriors {
    pub fn from_model(p: &ModelPriors) -> Result<Self> {
        let (w0_mean, w0_var) = match p.w0 {
            PriorSpec::Normal { mean, var } => (mean, var),
            _ => return Err(Error::Config("w0 prior must be normal".into())),
        };
        let alpha = match &p.omega {
            PriorSpec::Dirichlet { alpha } => alpha.clone(),
            _ => return Err(Error::Config("omega prior must be Dirichlet".into())),
        };
        let kappa = p
            .asymmetry
            .clone()
            .ok_or_else(|| Error::Config("latent sampler needs a kappa prior".into()))?;
        Ok(Self {
            w0_mean,
            w0_var,
            alpha,
            beta: p.scale.clone(),
            kappa,
        })
    }

    fn kappa_bounds(&self) -> (f64, f64) {
        match self.kappa {
            PriorSpec::Uniform { lo, hi } => (lo.max(0.0), hi),
            _ => (0.0, f64::INFINITY),
        }
    }
}

/// Draw from `GIG(½, χ, ψ)`, density `∝ v^{-1/2} exp(-(χ/v + ψv)/2)`, as the
/// reciprocal of an inverse Gaussian `IG(√(ψ/χ), ψ)` variate.
///
/// The inverse Gaussian transformation is evaluated in a cancellation-free
/// form so that tiny `χ` (residuals near zero) stays exact; in the limit
/// `χψ → 0` the law is `Gamma(½, rate ψ/2)`.
pub fn sample_gig_half(chi: f64, psi: f64, rng: &mut SimRng) -> f64 {
    let n: f64 = StandardNormal.sample(rng);
    let n2 = n * n;
    if chi * psi < 1e-30 {
        return n2 / psi;
    }
    let mu = (psi / chi).sqrt();
    let lambda = psi;
    let y = mu * n2;
    let d = y + (y * y + 4.0 * lambda * y).sqrt();
    // smaller root of the inverse Gaussian quadratic
    let x = if d > 0.0 { 4.0 * lambda * mu * mu * n2 / (d * d) } else { mu };
    let u: f64 = rng.random();
    if u <= mu / (mu + x) {
        1.0 / x
    } else {
        x / (mu * mu)
    }
}

/// Full conditional draw of the latent `v_t` given the residual
/// `r = y − w0 − ω'x`, `β` and `κ`.
pub fn sample_latent_v(r: f64, beta: f64, kappa: f64, rng: &mut SimRng) -> f64 {
    let a = 1.0 / kappa - kappa;
    let chi = r * r / (2.0 * beta * beta);
    let psi = 2.0 + 0.5 * a * a;
    sample_gig_half(chi, psi, rng).max(f64::MIN_POSITIVE)
}

struct ChainState {
    w0: f64,
    omega: Vec<f64>,
    z: Vec<f64>,
    beta: f64,
    kappa: f64,
    v: Vec<f64>,
}

struct Latent<'a> {
    window: &'a TrainingWindow,
    priors: &'a GibbsPriors,
    stick: ParamTransform,
}

impl Latent<'_> {
    /// `Σ_t (r_t − β a v_t)² / (4β² v_t)` with `r_t = y_t − w0 − ω'x_t`.
    fn quad(&self, w0: f64, omega: &[f64], beta: f64, kappa: f64, v: &[f64]) -> f64 {
        let a = 1.0 / kappa - kappa;
        let mut s = 0.0;
        for ((row, &y), &vt) in self.window.rows().zip(self.window.y()).zip(v) {
            let r = y - w0 - row.iter().zip(omega).map(|(x, w)| x * w).sum::<f64>();
            let e = r - beta * a * vt;
            s += e * e / vt;
        }
        s / (4.0 * beta * beta)
    }

    fn residuals(&self, w0: f64, omega: &[f64]) -> impl Iterator<Item = f64> + '_ {
        let omega = omega.to_vec();
        self.window
            .rows()
            .zip(self.window.y())
            .map(move |(row, &y)| y - w0 - row.iter().zip(&omega).map(|(x, w)| x * w).sum::<f64>())
    }

    fn init(&self, rng: &mut SimRng) -> Result<ChainState> {
        let (klo, khi) = self.priors.kappa_bounds();
        for _ in 0..INIT_ATTEMPTS {
            let e: f64 = StandardNormal.sample(rng);
            let w0 = self.priors.w0_mean + self.priors.w0_var.sqrt() * e;
            let omega = PriorSpec::Dirichlet {
                alpha: self.priors.alpha.clone(),
            }
            .sample(rng);
            let beta = self.priors.beta.sample_truncated(rng, 0.99)[0];
            let kappa = self.priors.kappa.sample_truncated(rng, 0.99)[0];
            let Ok(z) = self.stick.to_unconstrained(&omega) else {
                continue;
            };
            if beta > 0.0 && beta.is_finite() && kappa > klo && kappa < khi && w0.is_finite() {
                return Ok(ChainState {
                    w0,
                    omega,
                    z,
                    beta,
                    kappa,
                    v: vec![1.0; self.window.len()],
                });
            }
        }
        Err(Error::Initialization {
            attempts: INIT_ATTEMPTS,
        })
    }

    fn omega_log_density(&self, s: &ChainState, z: &[f64], omega: &mut [f64]) -> f64 {
        let lj = self.stick.constrain_into(z, omega);
        let lp = crate::priors::dirichlet_ln_pdf(&self.priors.alpha, omega);
        if !lp.is_finite() || !lj.is_finite() {
            return f64::NEG_INFINITY;
        }
        lp + lj - self.quad(s.w0, omega, s.beta, s.kappa, &s.v)
    }

    /// One sweep; `scale` is the random-walk scale of the `ω` update.
    /// Returns whether the `ω` proposal was accepted.
    fn sweep(&self, s: &mut ChainState, scale: f64, rng: &mut SimRng) -> bool {
        let n = self.window.len() as f64;
        // v | rest
        let res: Vec<f64> = self.residuals(s.w0, &s.omega).collect();
        for (vt, r) in s.v.iter_mut().zip(&res) {
            *vt = sample_latent_v(*r, s.beta, s.kappa, rng);
        }
        // w0 | rest
        let a = 1.0 / s.kappa - s.kappa;
        let two_b2 = 2.0 * s.beta * s.beta;
        let mut prec = 1.0 / self.priors.w0_var;
        let mut num = self.priors.w0_mean / self.priors.w0_var;
        for (r, &vt) in res.iter().zip(&s.v) {
            let e = r + s.w0 - s.beta * a * vt;
            prec += 1.0 / (two_b2 * vt);
            num += e / (two_b2 * vt);
        }
        let z0: f64 = StandardNormal.sample(rng);
        s.w0 = num / prec + z0 / prec.sqrt();
        // ω | rest
        let mut accepted = false;
        if !s.z.is_empty() {
            let mut cur = s.omega.clone();
            let lp0 = self.omega_log_density(s, &s.z, &mut cur);
            let zp: Vec<f64> = s
                .z
                .iter()
                .map(|&zi| {
                    let e: f64 = StandardNormal.sample(rng);
                    zi + scale * e
                })
                .collect();
            let mut prop = vec![0.0; s.omega.len()];
            let lp1 = self.omega_log_density(s, &zp, &mut prop);
            let u: f64 = rng.random();
            if lp1.is_finite() && u.ln() < lp1 - lp0 {
                s.z = zp;
                s.omega = prop;
                accepted = true;
            }
        }
        // β | rest, on log β
        let ln_beta = {
            let f = |lb: f64| {
                let b = lb.exp();
                -n * lb - self.quad(s.w0, &s.omega, b, s.kappa, &s.v) + self.priors.beta.ln_pdf_scalar(b) + lb
            };
            slice_sample(f, s.beta.ln(), LOG_BETA_WIDTH, f64::NEG_INFINITY, f64::INFINITY, rng)
        };
        s.beta = ln_beta.exp();
        // κ | rest
        let (klo, khi) = self.priors.kappa_bounds();
        let f = |k: f64| -self.quad(s.w0, &s.omega, s.beta, k, &s.v) + self.priors.kappa.ln_pdf_scalar(k);
        s.kappa = slice_sample(f, s.kappa, KAPPA_WIDTH, klo, khi, rng);
        accepted
    }
}

fn run_chain(latent: &Latent<'_>, cfg: &ChainConfig, chain: usize) -> Result<(Vec<f64>, f64)> {
    let mut rng = rng_from_seed(derive_seed(cfg.seed, chain as u64));
    let mut s = latent.init(&mut rng)?;
    let m = latent.window.m();
    let width = m + 3;
    let mut ln_scale = (2.38 / ((m.max(2) - 1) as f64).sqrt()).ln() - 1.0;
    let mut out = Vec::with_capacity(cfg.draws * width);
    let mut accepted = 0usize;
    for it in 0..cfg.burn_in + cfg.draws {
        let acc = latent.sweep(&mut s, ln_scale.exp(), &mut rng);
        if it < cfg.burn_in {
            let gain = (it as f64 + 1.0).powf(-0.6);
            ln_scale += gain * (f64::from(u8::from(acc)) - cfg.target_acceptance);
            continue;
        }
        accepted += usize::from(acc);
        let finite = s.w0.is_finite() && s.beta.is_finite() && s.kappa.is_finite() && s.beta > 0.0;
        if !finite {
            return Err(Error::Sampler {
                chain,
                reason: "non-finite Gibbs state".into(),
            });
        }
        out.push(s.w0);
        out.extend_from_slice(&s.omega);
        out.push(s.beta);
        out.push(s.kappa);
    }
    Ok((out, accepted as f64 / cfg.draws.max(1) as f64))
}

/// Runs `cfg.n_chains` Gibbs chains; draws are named `w0, w1..wm, beta,
/// kappa` and the reported acceptance is that of the `ω` update.
pub fn gibbs_ald<E: Executor>(
    window: &TrainingWindow,
    priors: &GibbsPriors,
    cfg: &ChainConfig,
    exec: &E,
) -> Result<PosteriorDraws> {
    cfg.validate()?;
    let m = window.m();
    if priors.alpha.len() != m {
        return Err(Error::Dimension {
            expected: m,
            got: priors.alpha.len(),
        });
    }
    if !(priors.w0_var > 0.0) {
        return Err(Error::domain("w0_var", priors.w0_var, "must be positive"));
    }
    let latent = Latent {
        window,
        priors,
        stick: ParamTransform::StickBreaking { dim: m },
    };
    let results = exec.map(cfg.n_chains, |c| run_chain(&latent, cfg, c));
    let mut values = Vec::with_capacity(cfg.n_chains * cfg.draws * (m + 3));
    let mut acceptance = Vec::with_capacity(cfg.n_chains);
    for r in results {
        let (v, a) = r?;
        values.extend(v);
        acceptance.push(a);
    }
    let names = layout_for(
        Family::AldLatent,
        &ModelPriors::sim_defaults(Family::AldLatent, m),
        m,
    )
    .names();
    PosteriorDraws::new(names, cfg.n_chains, cfg.draws, values, acceptance)
}

//! Split distributions and the three error laws used by the models.
//!
//! Two parametrizations live side by side:
//!
//! * [`SplitDistribution`] glues two rescaled halves of a [`SymmetricKernel`]
//!   at the mode, with normalizing factor `2τ(1-τ)/σ` and `F(μ) = τ`.
//! * [`AsymmetricLaplace`], [`AsymmetricNormal`] and [`ReverseGumbel`] carry
//!   the constants the regression models use. The asymmetric Laplace
//!   coincides with the Laplace-kernel split distribution; the asymmetric
//!   normal maps onto the Gaussian-kernel split distribution only after a
//!   change of `(σ, τ)` (see [`AsymmetricNormal::to_split`]).

mod ald;
mod an;
pub mod kernel;
mod rg;
mod split;

pub use ald::AsymmetricLaplace;
pub use an::AsymmetricNormal;
pub use kernel::{GaussianKernel, LaplaceKernel, LogisticKernel, SymmetricKernel};
pub use rg::{ReverseGumbel, RG_EXP_LIMIT};
pub use split::SplitDistribution;

use crate::error::{Error, Result};
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::distr::Open01;
use rand::Rng;

/// Common surface of every univariate law in this module.
pub trait Univariate {
    fn ln_pdf(&self, x: f64) -> f64;

    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> f64;

    /// Inverse CDF; `q` must lie in (0, 1).
    fn quantile(&self, q: f64) -> Result<f64>;

    fn mode(&self) -> f64;

    /// Width of the bulk of the density, used to size numerical grids.
    fn tail_scale(&self) -> f64;

    /// One inverse-CDF draw.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64
    where
        Self: Sized,
    {
        let u: f64 = rng.sample(Open01);
        // quantile only fails outside (0, 1), which Open01 excludes
        self.quantile(u).unwrap_or(f64::NAN)
    }

    fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64>
    where
        Self: Sized,
    {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

pub(crate) fn check_prob(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("q", q, "probability must lie in (0, 1)"))
    }
}

/// Density of the split distribution at `y`.
pub fn split_pdf<K: SymmetricKernel>(d: &SplitDistribution<K>, y: f64) -> f64 {
    d.pdf(y)
}

pub fn split_cdf<K: SymmetricKernel>(d: &SplitDistribution<K>, y: f64) -> f64 {
    d.cdf(y)
}

pub fn split_quantile<K: SymmetricKernel>(d: &SplitDistribution<K>, q: f64) -> Result<f64> {
    d.quantile(q)
}

/// Raw moment of order `k ∈ {1, 2, 3}` of `Y - μ`.
pub fn split_moment<K: SymmetricKernel>(d: &SplitDistribution<K>, k: u32) -> Result<f64> {
    if !(1..=3).contains(&k) {
        return Err(Error::domain("k", f64::from(k), "moment order must be 1, 2 or 3"));
    }
    d.moment(k)
}

pub fn split_sample<K: SymmetricKernel, R: Rng + ?Sized>(
    d: &SplitDistribution<K>,
    n: usize,
    rng: &mut R,
) -> Vec<f64> {
    d.sample_n(n, rng)
}

pub fn ald_pdf(mu: f64, sigma: f64, tau: f64, y: f64) -> Result<f64> {
    Ok(AsymmetricLaplace::new(mu, sigma, tau)?.pdf(y))
}

pub fn ald_cdf(mu: f64, sigma: f64, tau: f64, y: f64) -> Result<f64> {
    Ok(AsymmetricLaplace::new(mu, sigma, tau)?.cdf(y))
}

pub fn ald_quantile(mu: f64, sigma: f64, tau: f64, q: f64) -> Result<f64> {
    AsymmetricLaplace::new(mu, sigma, tau)?.quantile(q)
}

pub fn ald_sample<R: Rng + ?Sized>(
    mu: f64,
    sigma: f64,
    tau: f64,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    Ok(AsymmetricLaplace::new(mu, sigma, tau)?.sample_n(n, rng))
}

pub fn rg_pdf(mu: f64, beta: f64, y: f64) -> Result<f64> {
    Ok(ReverseGumbel::new(mu, beta)?.pdf(y))
}

pub fn rg_cdf(mu: f64, beta: f64, y: f64) -> Result<f64> {
    Ok(ReverseGumbel::new(mu, beta)?.cdf(y))
}

pub fn rg_quantile(mu: f64, beta: f64, q: f64) -> Result<f64> {
    ReverseGumbel::new(mu, beta)?.quantile(q)
}

pub fn rg_sample<R: Rng + ?Sized>(mu: f64, beta: f64, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    Ok(ReverseGumbel::new(mu, beta)?.sample_n(n, rng))
}

use super::{check_prob, LaplaceKernel, SplitDistribution, Univariate};
use crate::error::{check_finite, check_positive, check_unit_open, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Asymmetric Laplace law with mode `μ`, scale `σ` and asymmetry `τ`:
/// `f(y) = τ(1-τ)/σ · exp((1-τ)(y-μ)/σ)` left of the mode and
/// `τ(1-τ)/σ · exp(-τ(y-μ)/σ)` right of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricLaplace {
    mu: f64,
    sigma: f64,
    tau: f64,
}

impl AsymmetricLaplace {
    pub fn new(mu: f64, sigma: f64, tau: f64) -> Result<Self> {
        check_finite("mu", mu)?;
        check_positive("sigma", sigma)?;
        check_unit_open("tau", tau)?;
        Ok(Self { mu, sigma, tau })
    }

    /// Log-density without parameter validation (hot path of the likelihood).
    #[inline]
    pub fn ln_pdf_raw(mu: f64, sigma: f64, tau: f64, y: f64) -> f64 {
        let e = y - mu;
        let slope = if e <= 0.0 { tau - 1.0 } else { tau };
        (tau * (1.0 - tau) / sigma).ln() - slope * e / sigma
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The same law written as a Laplace-kernel split distribution.
    pub fn to_split(&self) -> SplitDistribution<LaplaceKernel> {
        SplitDistribution::new(self.mu, self.sigma, self.tau, LaplaceKernel)
            .expect("parameters validated on construction")
    }

    /// `(β, κ)` of the latent-exponential parametrization with the same mode.
    /// Tail rates match when `κ² = τ/(1-τ)` and `β = σκ/τ`.
    pub fn to_kappa_form(&self) -> (f64, f64) {
        let kappa = (self.tau / (1.0 - self.tau)).sqrt();
        (self.sigma * kappa / self.tau, kappa)
    }

    /// Inverse of [`Self::to_kappa_form`]: `τ = κ²/(1+κ²)`, `σ = βκ/(1+κ²)`.
    pub fn from_kappa_form(mu: f64, beta: f64, kappa: f64) -> Result<Self> {
        let k2 = kappa * kappa;
        Self::new(mu, beta * kappa / (1.0 + k2), k2 / (1.0 + k2))
    }
}

impl Univariate for AsymmetricLaplace {
    fn ln_pdf(&self, y: f64) -> f64 {
        Self::ln_pdf_raw(self.mu, self.sigma, self.tau, y)
    }

    fn cdf(&self, y: f64) -> f64 {
        let e = (y - self.mu) / self.sigma;
        if e <= 0.0 {
            self.tau * ((1.0 - self.tau) * e).exp()
        } else {
            1.0 - (1.0 - self.tau) * (-self.tau * e).exp()
        }
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_prob(q)?;
        let (t, s) = (self.tau, self.sigma);
        Ok(if q <= t {
            self.mu + s / (1.0 - t) * (q / t).ln()
        } else {
            self.mu - s / t * ((1.0 - q) / (1.0 - t)).ln()
        })
    }

    fn mode(&self) -> f64 {
        self.mu
    }

    fn tail_scale(&self) -> f64 {
        self.sigma / self.tau.min(1.0 - self.tau)
    }
}

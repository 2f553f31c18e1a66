use super::{check_prob, GaussianKernel, SplitDistribution, Univariate};
use crate::error::{check_finite, check_positive, check_unit_open, Result};
use crate::special::{norm_cdf, norm_quantile, SQRT_PI};
#[allow(unused_imports)]
use num_traits::Float;

/// Asymmetric normal law: `C(τ)·exp(-(1-τ)(y-μ)²/σ²)` left of the mode and
/// `C(τ)·exp(-τ(y-μ)²/σ²)` right of it, with
/// `C(τ) = 2√(τ(1-τ)) / (σ√π (√τ + √(1-τ)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricNormal {
    mu: f64,
    sigma: f64,
    tau: f64,
}

impl AsymmetricNormal {
    pub fn new(mu: f64, sigma: f64, tau: f64) -> Result<Self> {
        check_finite("mu", mu)?;
        check_positive("sigma", sigma)?;
        check_unit_open("tau", tau)?;
        Ok(Self { mu, sigma, tau })
    }

    /// `ln C(τ)` for scale `σ`.
    #[inline]
    pub fn ln_normalizer(sigma: f64, tau: f64) -> f64 {
        core::f64::consts::LN_2 + 0.5 * (tau * (1.0 - tau)).ln()
            - sigma.ln()
            - SQRT_PI.ln()
            - (tau.sqrt() + (1.0 - tau).sqrt()).ln()
    }

    #[inline]
    pub fn ln_pdf_raw(mu: f64, sigma: f64, tau: f64, y: f64) -> f64 {
        let e = y - mu;
        let w = if e <= 0.0 { 1.0 - tau } else { tau };
        Self::ln_normalizer(sigma, tau) - w * e * e / (sigma * sigma)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Probability mass left of the mode, `√τ / (√τ + √(1-τ))`.
    pub fn left_mass(&self) -> f64 {
        let (a, b) = (self.tau.sqrt(), (1.0 - self.tau).sqrt());
        a / (a + b)
    }

    /// Standard deviations of the two Gaussian halves.
    fn half_sds(&self) -> (f64, f64) {
        let left = self.sigma / (2.0 * (1.0 - self.tau)).sqrt();
        let right = self.sigma / (2.0 * self.tau).sqrt();
        (left, right)
    }

    /// The same law as a Gaussian-kernel split distribution. The split
    /// asymmetry is the left mass and the split scale is `τ' · sd_right`.
    pub fn to_split(&self) -> SplitDistribution<GaussianKernel> {
        let t = self.left_mass();
        let (_, right) = self.half_sds();
        SplitDistribution::new(self.mu, t * right, t, GaussianKernel)
            .expect("parameters validated on construction")
    }
}

impl Univariate for AsymmetricNormal {
    fn ln_pdf(&self, y: f64) -> f64 {
        Self::ln_pdf_raw(self.mu, self.sigma, self.tau, y)
    }

    fn cdf(&self, y: f64) -> f64 {
        let (left, right) = self.half_sds();
        let p = self.left_mass();
        let e = y - self.mu;
        if e <= 0.0 {
            2.0 * p * norm_cdf(e / left)
        } else {
            1.0 - 2.0 * (1.0 - p) * norm_cdf(-e / right)
        }
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_prob(q)?;
        let (left, right) = self.half_sds();
        let p = self.left_mass();
        Ok(if q <= p {
            self.mu + left * norm_quantile(q / (2.0 * p))
        } else {
            self.mu - right * norm_quantile((1.0 - q) / (2.0 * (1.0 - p)))
        })
    }

    fn mode(&self) -> f64 {
        self.mu
    }

    fn tail_scale(&self) -> f64 {
        let (l, r) = self.half_sds();
        l.max(r)
    }
}

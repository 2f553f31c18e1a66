use super::{check_prob, Univariate};
use crate::error::{check_finite, check_positive, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest standardized residual `z = (y-μ)/β` for which `exp(z)` is evaluated.
pub const RG_EXP_LIMIT: f64 = 700.0;

/// Reverse Gumbel (minimum extreme value) law:
/// `f(y) = (1/β) exp(z) exp(-exp(z))`, `z = (y-μ)/β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReverseGumbel {
    mu: f64,
    beta: f64,
}

impl ReverseGumbel {
    pub fn new(mu: f64, beta: f64) -> Result<Self> {
        check_finite("mu", mu)?;
        check_positive("beta", beta)?;
        Ok(Self { mu, beta })
    }

    /// Log-density; `None` when `z` exceeds [`RG_EXP_LIMIT`].
    #[inline]
    pub fn ln_pdf_checked(mu: f64, beta: f64, y: f64) -> Option<f64> {
        let z = (y - mu) / beta;
        if z > RG_EXP_LIMIT {
            None
        } else {
            Some(-beta.ln() + z - z.exp())
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        self.mu - EULER_GAMMA * self.beta
    }
}

impl Univariate for ReverseGumbel {
    fn ln_pdf(&self, y: f64) -> f64 {
        Self::ln_pdf_checked(self.mu, self.beta, y).unwrap_or(f64::NEG_INFINITY)
    }

    fn cdf(&self, y: f64) -> f64 {
        let z = (y - self.mu) / self.beta;
        -(-z.exp()).exp_m1()
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_prob(q)?;
        Ok(self.mu + self.beta * (-(-q).ln_1p()).ln())
    }

    fn mode(&self) -> f64 {
        self.mu
    }

    fn tail_scale(&self) -> f64 {
        self.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitdist::{rg_cdf, rg_pdf, rg_quantile};
    use modalcomb_oracles::integrate_real;

    #[test]
    fn mode_values() {
        let b = 2.5;
        assert!((rg_pdf(1.0, b, 1.0).unwrap() - (-1.0f64).exp() / b).abs() < 1e-15);
        assert!((rg_cdf(1.0, b, 1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!(rg_pdf(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn quantile_inverts_cdf_on_grid() {
        for i in 0..60 {
            let y = -12.0 + 0.25 * i as f64;
            let q = rg_cdf(0.0, 1.0, y).unwrap();
            if q > 0.0 && q < 1.0 {
                let back = rg_quantile(0.0, 1.0, q).unwrap();
                assert!((back - y).abs() < 1e-12 * (1.0 + y.abs()), "y={y} back={back}");
            }
        }
    }

    #[test]
    fn left_tail_is_exponential() {
        let d = ReverseGumbel::new(0.0, 2.0).unwrap();
        let slope = d.ln_pdf(-40.0) - d.ln_pdf(-42.0);
        assert!((slope - 1.0).abs() < 1e-6);
        let total = integrate_real(|y| d.pdf(y), 0.0, 2.0, 1e-12);
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn overflow_is_flagged() {
        assert!(ReverseGumbel::ln_pdf_checked(0.0, 1.0, 701.0).is_none());
        assert!(ReverseGumbel::ln_pdf_checked(0.0, 1.0, 699.0).is_some());
    }
}

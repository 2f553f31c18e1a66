use super::{check_prob, SymmetricKernel, Univariate};
use crate::error::{check_finite, check_positive, check_unit_open, Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Kernel `g` split at the mode `μ` into a left half compressed by `1-τ` and
/// a right half compressed by `τ`:
///
/// `f(y) = 2τ(1-τ)/σ · g((1-τ)(y-μ)/σ)` for `y ≤ μ`,
/// `f(y) = 2τ(1-τ)/σ · g(τ(y-μ)/σ)` for `y > μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitDistribution<K> {
    mode: f64,
    scale: f64,
    asymmetry: f64,
    kernel: K,
}

impl<K: SymmetricKernel> SplitDistribution<K> {
    pub fn new(mode: f64, scale: f64, asymmetry: f64, kernel: K) -> Result<Self> {
        check_finite("mu", mode)?;
        check_positive("sigma", scale)?;
        check_unit_open("tau", asymmetry)?;
        Ok(Self {
            mode,
            scale,
            asymmetry,
            kernel,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn kernel(&self) -> K {
        self.kernel
    }

    fn ln_norm(&self) -> f64 {
        let t = self.asymmetry;
        (2.0 * t * (1.0 - t) / self.scale).ln()
    }

    /// `E[(Y-μ)^k]` from the kernel's half-line moment `c_k`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        let c = self
            .kernel
            .partial_moment(k)
            .ok_or(Error::domain("k", f64::from(k), "kernel moment unavailable"))?;
        let t = self.asymmetry;
        let ki = k as i32;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        Ok(2.0 * c * self.scale.powi(ki) / (t.powi(ki) * (1.0 - t).powi(ki))
            * ((1.0 - t).powi(ki + 1) + sign * t.powi(ki + 1)))
    }

    /// Median from the two-branch closed form.
    pub fn median(&self) -> f64 {
        self.quantile(0.5).unwrap_or(f64::NAN)
    }
}

impl<K: SymmetricKernel> Univariate for SplitDistribution<K> {
    fn ln_pdf(&self, y: f64) -> f64 {
        let d = (y - self.mode) / self.scale;
        let u = if d <= 0.0 {
            (1.0 - self.asymmetry) * d
        } else {
            self.asymmetry * d
        };
        self.ln_norm() + self.kernel.ln_density(u)
    }

    fn cdf(&self, y: f64) -> f64 {
        let t = self.asymmetry;
        let d = (y - self.mode) / self.scale;
        if d <= 0.0 {
            2.0 * t * self.kernel.cdf((1.0 - t) * d)
        } else {
            // τ + 2(1-τ)[G(τd) - ½] = 1 - 2(1-τ) G(-τd)
            1.0 - 2.0 * (1.0 - t) * self.kernel.cdf(-t * d)
        }
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_prob(q)?;
        let t = self.asymmetry;
        let s = self.scale;
        Ok(if q <= t {
            self.mode + s / (1.0 - t) * self.kernel.quantile(q / (2.0 * t))
        } else {
            // G^{-1}((1+q-2τ)/(2-2τ)) = -G^{-1}((1-q)/(2-2τ))
            self.mode - s / t * self.kernel.quantile((1.0 - q) / (2.0 - 2.0 * t))
        })
    }

    fn mode(&self) -> f64 {
        self.mode
    }

    fn tail_scale(&self) -> f64 {
        self.scale / self.asymmetry.min(1.0 - self.asymmetry)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitdist::{split_moment, split_pdf, GaussianKernel, LaplaceKernel, LogisticKernel};
    use modalcomb_oracles::{bisect, integrate_lower, integrate_real, mean_se};
    use rand::SeedableRng;

    #[test]
    fn pdf_at_mode_laplace() {
        let d = SplitDistribution::new(0.0, 1.0, 0.5, LaplaceKernel).unwrap();
        assert!((split_pdf(&d, 0.0) - 0.25).abs() < 1e-15);
        // τ = 0.2: 2·0.2·0.8·½ = 0.16
        let d = SplitDistribution::new(0.0, 1.0, 0.2, LaplaceKernel).unwrap();
        assert!((split_pdf(&d, 0.0) - 0.16).abs() < 1e-15);
    }

    #[test]
    fn symmetric_at_half() {
        let d = SplitDistribution::new(1.5, 2.0, 0.5, GaussianKernel).unwrap();
        for i in 0..50 {
            let h = 0.13 * i as f64;
            assert!((d.pdf(1.5 + h) - d.pdf(1.5 - h)).abs() < 1e-15);
        }
    }

    #[test]
    fn cdf_limits_and_mode() {
        let d = SplitDistribution::new(-0.4, 0.7, 0.3, LogisticKernel).unwrap();
        assert_eq!(d.cdf(-0.4), 0.3);
        assert!(d.cdf(-1e6) < 1e-300);
        assert_eq!(d.cdf(1e6), 1.0);
    }

    #[test]
    fn cdf_matches_quadrature() {
        let d = SplitDistribution::new(0.0, 1.0, 0.3, LaplaceKernel).unwrap();
        let num = integrate_lower(|y| d.pdf(y), 1.0, 3.0, 1e-12);
        assert!((d.cdf(1.0) - num).abs() < 1e-8, "{} vs {num}", d.cdf(1.0));
    }

    #[test]
    fn quantile_roundtrip_and_median_formula() {
        let d = SplitDistribution::new(1.0, 2.0, 0.7, LaplaceKernel).unwrap();
        assert_eq!(d.quantile(0.7).unwrap(), 1.0);
        for &q in &[0.01, 0.25, 0.5, 0.75, 0.99] {
            assert!((d.cdf(d.quantile(q).unwrap()) - q).abs() < 1e-10);
        }
        // μ + σ/(1-τ) G^{-1}(1/(4τ)) for τ ≥ ½
        let formula = 1.0 + 2.0 / 0.3 * LaplaceKernel.quantile(1.0 / 2.8);
        let by_bisection = bisect(|y| d.cdf(y) - 0.5, -50.0, 50.0, 1e-13);
        assert!((d.median() - formula).abs() < 1e-12);
        assert!((d.median() - by_bisection).abs() < 1e-9);
        assert!(d.quantile(0.0).is_err());
        assert!(d.quantile(1.0).is_err());
    }

    #[test]
    fn first_moment_laplace_example() {
        let d = SplitDistribution::new(0.0, 1.0, 0.25, LaplaceKernel).unwrap();
        let m1 = split_moment(&d, 1).unwrap();
        assert!((m1 - 8.0 / 3.0).abs() < 1e-12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let xs = d.sample_n(1_000_000, &mut rng);
        let (m, se) = mean_se(&xs);
        assert!((m - m1).abs() < 3.0 * se, "{m} vs {m1} (se {se})");
        assert!(split_moment(&d, 4).is_err());
    }

    #[test]
    fn moments_match_quadrature() {
        for &t in &[0.1, 0.35, 0.5, 0.8] {
            let d = SplitDistribution::new(0.0, 1.3, t, GaussianKernel).unwrap();
            for k in 1..=3 {
                let num = integrate_real(|e| e.powi(k as i32) * d.pdf(e), 0.0, d.tail_scale(), 1e-11);
                let closed = d.moment(k).unwrap();
                assert!((num - closed).abs() < 1e-6 * (1.0 + closed.abs()), "τ={t} k={k}");
            }
            assert_eq!(d.moment(1).unwrap() == 0.0, t == 0.5);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(SplitDistribution::new(0.0, 0.0, 0.5, LaplaceKernel).is_err());
        assert!(SplitDistribution::new(0.0, 1.0, 1.0, LaplaceKernel).is_err());
        assert!(SplitDistribution::new(0.0, -1.0, 0.5, LaplaceKernel).is_err());
    }
}

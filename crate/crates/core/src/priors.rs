//! Prior densities and samplers.
//!
//! Parametrizations:
//!
//! * `Normal { mean, var }`: variance, not standard deviation.
//! * `HalfCauchy { loc, scale }`: `2/(πγ) · 1/(1 + (x-x₀)²/γ²)` on `x ≥ x₀`.
//! * `InvGamma { shape, scale }`: `β^α/Γ(α) x^{-α-1} e^{-β/x}`.
//! * `Gamma { shape, rate }`: `β^α/Γ(α) x^{α-1} e^{-βx}`.
//! * `Exponential { rate }`.

use crate::error::{Error, Result};
use crate::special::{ln_gamma, LN_2PI};
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Beta as BetaDist, Distribution, Gamma as GammaDist, StandardNormal};

#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    Normal { mean: f64, var: f64 },
    Dirichlet { alpha: Vec<f64> },
    HalfCauchy { loc: f64, scale: f64 },
    Beta { a: f64, b: f64 },
    InvGamma { shape: f64, scale: f64 },
    Gamma { shape: f64, rate: f64 },
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    crate::error::check_positive(name, v)
}

impl PriorSpec {
    /// Validates the hyper-parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            PriorSpec::Normal { mean, var } => {
                crate::error::check_finite("mean", *mean)?;
                positive("var", *var)
            }
            PriorSpec::Dirichlet { alpha } => {
                if alpha.len() < 2 {
                    return Err(Error::Dimension {
                        expected: 2,
                        got: alpha.len(),
                    });
                }
                alpha.iter().try_for_each(|&a| positive("alpha", a))
            }
            PriorSpec::HalfCauchy { loc, scale } => {
                crate::error::check_finite("loc", *loc)?;
                positive("scale", *scale)
            }
            PriorSpec::Beta { a, b } => positive("a", *a).and(positive("b", *b)),
            PriorSpec::InvGamma { shape, scale } => {
                positive("shape", *shape).and(positive("scale", *scale))
            }
            PriorSpec::Gamma { shape, rate } => positive("shape", *shape).and(positive("rate", *rate)),
            PriorSpec::Uniform { lo, hi } => {
                crate::error::check_finite("lo", *lo)?;
                crate::error::check_finite("hi", *hi)?;
                if lo < hi {
                    Ok(())
                } else {
                    Err(Error::domain("hi", *hi, "uniform upper bound must exceed lower"))
                }
            }
            PriorSpec::Exponential { rate } => positive("rate", *rate),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PriorSpec::Dirichlet { alpha } => alpha.len(),
            _ => 1,
        }
    }

    /// Log-density at a scalar point (dimension-1 priors only).
    pub fn ln_pdf_scalar(&self, x: f64) -> f64 {
        let ninf = f64::NEG_INFINITY;
        if x.is_nan() {
            return ninf;
        }
        match *self {
            PriorSpec::Normal { mean, var } => -0.5 * (LN_2PI + var.ln()) - 0.5 * (x - mean).powi(2) / var,
            PriorSpec::Dirichlet { .. } => ninf,
            PriorSpec::HalfCauchy { loc, scale } => {
                if x < loc {
                    ninf
                } else {
                    let r = (x - loc) / scale;
                    (2.0 / (core::f64::consts::PI * scale)).ln() - r.mul_add(r, 1.0).ln()
                }
            }
            PriorSpec::Beta { a, b } => {
                if !(0.0..=1.0).contains(&x) {
                    ninf
                } else {
                    ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + xlogy(a - 1.0, x) + xlogy(b - 1.0, 1.0 - x)
                }
            }
            PriorSpec::InvGamma { shape, scale } => {
                if x <= 0.0 {
                    ninf
                } else {
                    shape * scale.ln() - ln_gamma(shape) - (shape + 1.0) * x.ln() - scale / x
                }
            }
            PriorSpec::Gamma { shape, rate } => {
                if x < 0.0 || (x == 0.0 && shape != 1.0) {
                    if x == 0.0 && shape < 1.0 {
                        f64::INFINITY
                    } else {
                        ninf
                    }
                } else {
                    shape * rate.ln() - ln_gamma(shape) + xlogy(shape - 1.0, x) - rate * x
                }
            }
            PriorSpec::Uniform { lo, hi } => {
                if x < lo || x > hi {
                    ninf
                } else {
                    -(hi - lo).ln()
                }
            }
            PriorSpec::Exponential { rate } => {
                if x < 0.0 {
                    ninf
                } else {
                    rate.ln() - rate * x
                }
            }
        }
    }

    /// Log-density; `-∞` outside the support, an error only on dimension mismatch.
    pub fn ln_pdf(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(match self {
            PriorSpec::Dirichlet { alpha } => dirichlet_ln_pdf(alpha, x),
            _ => self.ln_pdf_scalar(x[0]),
        })
    }

    /// One draw from the prior.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.sample_truncated(rng, 1.0)
    }

    /// Draw from the prior; scalar heavy-tailed laws (Half-Cauchy, inverse
    /// gamma) are restricted to their lower `upper_q` quantile range.
    pub fn sample_truncated<R: Rng + ?Sized>(&self, rng: &mut R, upper_q: f64) -> Vec<f64> {
        match *self {
            PriorSpec::Normal { mean, var } => {
                let z: f64 = StandardNormal.sample(rng);
                vec![mean + var.sqrt() * z]
            }
            PriorSpec::Dirichlet { ref alpha } => {
                let g: Vec<f64> = alpha
                    .iter()
                    .map(|&a| GammaDist::new(a, 1.0).expect("validated").sample(rng))
                    .collect();
                let s: f64 = g.iter().sum();
                g.into_iter().map(|v| v / s).collect()
            }
            PriorSpec::HalfCauchy { loc, scale } => {
                let u: f64 = rng.sample::<f64, _>(Open01) * upper_q.min(1.0);
                vec![loc + scale * (0.5 * core::f64::consts::PI * u).tan()]
            }
            PriorSpec::Beta { a, b } => vec![BetaDist::new(a, b).expect("validated").sample(rng)],
            PriorSpec::InvGamma { shape, scale } => {
                let g = GammaDist::new(shape, 1.0 / scale).expect("validated");
                // 1/Gamma draws below the lower (1 - upper_q) gamma quantile are rejected
                loop {
                    let v: f64 = g.sample(rng);
                    let x = 1.0 / v;
                    if upper_q >= 1.0 || x < 1e3 * scale / shape.max(1.0) {
                        break vec![x];
                    }
                }
            }
            PriorSpec::Gamma { shape, rate } => {
                vec![GammaDist::new(shape, 1.0 / rate).expect("validated").sample(rng)]
            }
            PriorSpec::Uniform { lo, hi } => {
                let u: f64 = rng.sample(Open01);
                vec![lo + (hi - lo) * u]
            }
            PriorSpec::Exponential { rate } => {
                let u: f64 = rng.sample(Open01);
                vec![-u.ln() / rate]
            }
        }
    }

    /// Analytic mean and variance where they exist.
    pub fn moments(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some(match *self {
            PriorSpec::Normal { mean, var } => (vec![mean], vec![var]),
            PriorSpec::Dirichlet { ref alpha } => {
                let a0: f64 = alpha.iter().sum();
                let m: Vec<f64> = alpha.iter().map(|a| a / a0).collect();
                let v = m.iter().map(|mi| mi * (1.0 - mi) / (a0 + 1.0)).collect();
                (m, v)
            }
            PriorSpec::HalfCauchy { .. } => return None,
            PriorSpec::Beta { a, b } => {
                let s = a + b;
                (vec![a / s], vec![a * b / (s * s * (s + 1.0))])
            }
            PriorSpec::InvGamma { shape, scale } => {
                if shape <= 2.0 {
                    return None;
                }
                let m = scale / (shape - 1.0);
                (vec![m], vec![m * m / (shape - 2.0)])
            }
            PriorSpec::Gamma { shape, rate } => (vec![shape / rate], vec![shape / (rate * rate)]),
            PriorSpec::Uniform { lo, hi } => (vec![0.5 * (lo + hi)], vec![(hi - lo).powi(2) / 12.0]),
            PriorSpec::Exponential { rate } => (vec![1.0 / rate], vec![1.0 / (rate * rate)]),
        })
    }
}

/// `a · ln(x)` with the convention `0 · ln 0 = 0`.
fn xlogy(a: f64, x: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * x.ln()
    }
}

const SIMPLEX_TOL: f64 = 1e-9;

pub fn dirichlet_ln_pdf(alpha: &[f64], x: &[f64]) -> f64 {
    let sum: f64 = x.iter().sum();
    if x.iter().any(|&v| !(0.0..=1.0).contains(&v)) || (sum - 1.0).abs() > SIMPLEX_TOL {
        return f64::NEG_INFINITY;
    }
    let a0: f64 = alpha.iter().sum();
    let norm = ln_gamma(a0) - alpha.iter().map(|&a| ln_gamma(a)).sum::<f64>();
    norm + alpha.iter().zip(x).map(|(&a, &v)| xlogy(a - 1.0, v)).sum::<f64>()
}

pub fn log_prior(spec: &PriorSpec, x: &[f64]) -> Result<f64> {
    spec.ln_pdf(x)
}

pub fn sample_prior<R: Rng + ?Sized>(spec: &PriorSpec, rng: &mut R) -> Vec<f64> {
    spec.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use modalcomb_oracles::{integrate, integrate_upper, mean_se};
    use rand::SeedableRng;

    fn rng() -> crate::SimRng {
        crate::SimRng::seed_from_u64(99)
    }

    #[test]
    fn reference_density_values() {
        let hc = PriorSpec::HalfCauchy { loc: 0.0, scale: 1.0 };
        assert!((hc.ln_pdf(&[0.0]).unwrap() - (2.0 / core::f64::consts::PI).ln()).abs() < 1e-15);
        let d = PriorSpec::Dirichlet { alpha: vec![1.0; 4] };
        assert!((d.ln_pdf(&[0.1, 0.2, 0.3, 0.4]).unwrap() - 6f64.ln()).abs() < 1e-12);
        let b = PriorSpec::Beta { a: 2.0, b: 2.0 };
        assert!((b.ln_pdf(&[0.5]).unwrap() - 1.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn out_of_support_is_neg_infinity() {
        let cases = [
            (PriorSpec::HalfCauchy { loc: 0.0, scale: 1.0 }, -0.1),
            (PriorSpec::Beta { a: 2.0, b: 3.0 }, 1.2),
            (PriorSpec::InvGamma { shape: 2.0, scale: 2.0 }, -1.0),
            (PriorSpec::Gamma { shape: 2.0, rate: 2.0 }, -1.0),
            (PriorSpec::Uniform { lo: 0.001, hi: 4.0 }, 4.5),
            (PriorSpec::Exponential { rate: 1.0 }, -3.0),
        ];
        for (spec, x) in cases {
            assert_eq!(spec.ln_pdf(&[x]).unwrap(), f64::NEG_INFINITY, "{spec:?}");
        }
        let d = PriorSpec::Dirichlet { alpha: vec![1.0; 3] };
        assert_eq!(d.ln_pdf(&[0.5, 0.6, -0.1]).unwrap(), f64::NEG_INFINITY);
        assert_eq!(d.ln_pdf(&[0.5, 0.6, 0.1]).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(d.ln_pdf(&[0.5, 0.5]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn scalar_priors_normalize() {
        let specs = [
            (PriorSpec::Normal { mean: 0.3, var: 2.0 }, -60.0, 60.0),
            (PriorSpec::Beta { a: 2.0, b: 2.0 }, 0.0, 1.0),
            (PriorSpec::Beta { a: 1.5, b: 4.0 }, 0.0, 1.0),
            (PriorSpec::Uniform { lo: 0.001, hi: 4.0 }, 0.001, 4.0),
        ];
        for (s, lo, hi) in specs {
            let v = integrate(|x| s.ln_pdf_scalar(x).exp(), lo, hi, 1e-12);
            assert!((v - 1.0).abs() < 1e-8, "{s:?}: {v}");
        }
        let tails = [
            PriorSpec::HalfCauchy { loc: 0.0, scale: 1.0 },
            PriorSpec::InvGamma { shape: 2.0, scale: 2.0 },
            PriorSpec::Gamma { shape: 2.0, rate: 2.0 },
            PriorSpec::Exponential { rate: 1.0 },
        ];
        for s in tails {
            let v = integrate_upper(|x| s.ln_pdf_scalar(x).exp(), 0.0, 1.0, 1e-12);
            assert!((v - 1.0).abs() < 1e-8, "{s:?}: {v}");
        }
    }

    #[test]
    fn sample_moments() {
        let mut r = rng();
        let n = 100_000;
        let d = PriorSpec::Dirichlet { alpha: vec![1.0; 4] };
        let draws: Vec<Vec<f64>> = (0..n).map(|_| d.sample(&mut r)).collect();
        for k in 0..4 {
            let col: Vec<f64> = draws.iter().map(|v| v[k]).collect();
            let (m, se) = mean_se(&col);
            assert!((m - 0.25).abs() < 3.0 * se);
        }
        let e = PriorSpec::Exponential { rate: 1.0 };
        let xs: Vec<f64> = (0..n).map(|_| e.sample(&mut r)[0]).collect();
        let (m, se) = mean_se(&xs);
        assert!((m - 1.0).abs() < 3.0 * se);

        // Beta(2,2) variance 0.05; SE of the sample variance from the 4th moment
        let b = PriorSpec::Beta { a: 2.0, b: 2.0 };
        let xs: Vec<f64> = (0..n).map(|_| b.sample(&mut r)[0]).collect();
        let sq: Vec<f64> = xs.iter().map(|x| (x - 0.5) * (x - 0.5)).collect();
        let (v, se) = mean_se(&sq);
        assert!((v - 0.05).abs() < 3.0 * se, "{v} ± {se}");
    }

    #[test]
    fn half_cauchy_quantiles() {
        let mut r = rng();
        let hc = PriorSpec::HalfCauchy { loc: 0.0, scale: 2.0 };
        let n = 100_000;
        let below = (0..n).filter(|_| hc.sample(&mut r)[0] <= 2.0).count() as f64 / n as f64;
        // median of Half-Cauchy(0, γ) is γ
        assert!((below - 0.5).abs() < 3.0 * (0.25 / n as f64).sqrt());
        let max_trunc = (0..10_000)
            .map(|_| hc.sample_truncated(&mut r, 0.99)[0])
            .fold(0.0f64, f64::max);
        assert!(max_trunc <= 2.0 * (0.5 * core::f64::consts::PI * 0.99).tan());
    }

    #[test]
    fn validation() {
        assert!(PriorSpec::Dirichlet { alpha: vec![1.0] }.validate().is_err());
        assert!(PriorSpec::Uniform { lo: 1.0, hi: 1.0 }.validate().is_err());
        assert!(PriorSpec::Beta { a: 0.0, b: 1.0 }.validate().is_err());
        assert!(PriorSpec::InvGamma { shape: 2.0, scale: 2.0 }.validate().is_ok());
    }
}

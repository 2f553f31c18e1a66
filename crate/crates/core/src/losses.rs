//! Asymmetric loss functions and their likelihood counterparts.
//!
//! For a fixed asymmetry parameter, the negative log-likelihood of each error
//! law differs from a positive multiple of the matching loss sum by a term
//! that does not depend on the combination weights:
//!
//! | law                 | loss                 | gap                      |
//! |---------------------|----------------------|--------------------------|
//! | asymmetric Laplace  | lin-lin / σ          | `-n ln(τ(1-τ)/σ)`        |
//! | asymmetric normal   | asym. quadratic / σ² | `-n ln C(τ)`             |
//! | reverse Gumbel      | linex (τ = 1/β)      | `n ln β + n`             |

use crate::error::{check_positive, check_unit_open, Result};
use crate::splitdist::{AsymmetricLaplace, AsymmetricNormal, ReverseGumbel};
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    LinLin,
    AsymmetricQuadratic,
    Linex,
}

/// A loss function with its asymmetry parameter. The threshold separating
/// the two branches is fixed at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSpec {
    kind: LossKind,
    tau: f64,
}

impl LossSpec {
    pub fn new(kind: LossKind, tau: f64) -> Result<Self> {
        match kind {
            LossKind::LinLin | LossKind::AsymmetricQuadratic => check_unit_open("tau", tau)?,
            LossKind::Linex => check_positive("tau", tau)?,
        }
        Ok(Self { kind, tau })
    }

    pub fn kind(&self) -> LossKind {
        self.kind
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Loss of residual `e`; `e = 0` takes the `e ≥ 0` branch.
    pub fn eval(&self, e: f64) -> f64 {
        let t = self.tau;
        match self.kind {
            LossKind::LinLin => {
                if e >= 0.0 {
                    t * e.abs()
                } else {
                    (1.0 - t) * e.abs()
                }
            }
            LossKind::AsymmetricQuadratic => {
                if e >= 0.0 {
                    t * e * e
                } else {
                    (1.0 - t) * e * e
                }
            }
            LossKind::Linex => (t * e).exp_m1() - t * e,
        }
    }

    pub fn sum(&self, residuals: &[f64]) -> f64 {
        residuals.iter().map(|&e| self.eval(e)).sum()
    }
}

pub fn loss(spec: &LossSpec, e: f64) -> f64 {
    spec.eval(e)
}

/// Error law paired with a loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedLaw {
    /// Asymmetric Laplace with fixed `σ`, `τ`.
    Ald { sigma: f64, tau: f64 },
    /// Asymmetric normal with fixed `σ`, `τ`.
    An { sigma: f64, tau: f64 },
    /// Reverse Gumbel with fixed `β`.
    Rg { beta: f64 },
}

impl FixedLaw {
    /// Negative log-likelihood of residuals `e_t = y_t - ŷ_t` (mode at zero).
    pub fn nll(&self, residuals: &[f64]) -> f64 {
        match *self {
            FixedLaw::Ald { sigma, tau } => -residuals
                .iter()
                .map(|&e| AsymmetricLaplace::ln_pdf_raw(0.0, sigma, tau, e))
                .sum::<f64>(),
            FixedLaw::An { sigma, tau } => -residuals
                .iter()
                .map(|&e| AsymmetricNormal::ln_pdf_raw(0.0, sigma, tau, e))
                .sum::<f64>(),
            FixedLaw::Rg { beta } => -residuals
                .iter()
                .map(|&e| ReverseGumbel::ln_pdf_checked(0.0, beta, e).unwrap_or(f64::NEG_INFINITY))
                .sum::<f64>(),
        }
    }

    /// Matching loss and the positive factor multiplying its sum in the NLL.
    pub fn loss(&self) -> Result<(LossSpec, f64)> {
        Ok(match *self {
            FixedLaw::Ald { sigma, tau } => (LossSpec::new(LossKind::LinLin, tau)?, 1.0 / sigma),
            FixedLaw::An { sigma, tau } => (
                LossSpec::new(LossKind::AsymmetricQuadratic, tau)?,
                1.0 / (sigma * sigma),
            ),
            FixedLaw::Rg { beta } => (LossSpec::new(LossKind::Linex, 1.0 / beta)?, 1.0),
        })
    }

    /// Closed form of the θ-free gap for `n` observations.
    pub fn expected_gap(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            FixedLaw::Ald { sigma, tau } => -n * (tau * (1.0 - tau) / sigma).ln(),
            FixedLaw::An { sigma, tau } => -n * AsymmetricNormal::ln_normalizer(sigma, tau),
            FixedLaw::Rg { beta } => n * beta.ln() + n,
        }
    }
}

/// `NLL(residuals) - factor · Σ loss(residuals)`.
pub fn nll_loss_gap(law: &FixedLaw, residuals: &[f64]) -> Result<f64> {
    let (spec, factor) = law.loss()?;
    Ok(law.nll(residuals) - factor * spec.sum(residuals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loss_examples() {
        let ll = LossSpec::new(LossKind::LinLin, 0.5).unwrap();
        assert_eq!(ll.eval(-2.0), 1.0);
        let lx = LossSpec::new(LossKind::Linex, 0.7).unwrap();
        assert_eq!(lx.eval(0.0), 0.0);
        let aq = LossSpec::new(LossKind::AsymmetricQuadratic, 0.25).unwrap();
        assert_eq!(aq.eval(2.0), 1.0);
        assert_eq!(aq.eval(-2.0), 3.0);
    }

    #[test]
    fn domain_checks() {
        assert!(LossSpec::new(LossKind::LinLin, 1.0).is_err());
        assert!(LossSpec::new(LossKind::AsymmetricQuadratic, 0.0).is_err());
        assert!(LossSpec::new(LossKind::Linex, 3.0).is_ok());
        assert!(LossSpec::new(LossKind::Linex, 0.0).is_err());
    }

    #[test]
    fn ald_gap_example() {
        let law = FixedLaw::Ald { sigma: 1.0, tau: 0.5 };
        let a = [0.3, -1.2, 2.0, 0.0, -0.1, 0.5, 0.7, -3.0, 1.1, 0.2];
        let b: [f64; 10] = core::array::from_fn(|i| a[i] * 1.7 - 0.4);
        let ga = nll_loss_gap(&law, &a).unwrap();
        let gb = nll_loss_gap(&law, &b).unwrap();
        assert!((ga - gb).abs() < 1e-12);
        assert!((ga - 10.0 * 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rg_gap_example() {
        let law = FixedLaw::Rg { beta: 1.0 };
        let g = nll_loss_gap(&law, &[0.1, -0.5, 1.0, 2.0, -3.0]).unwrap();
        assert!((g - 5.0).abs() < 1e-12);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn zero_at_zero(t in 0.01f64..0.99) {
                for kind in [LossKind::LinLin, LossKind::AsymmetricQuadratic, LossKind::Linex] {
                    prop_assert_eq!(LossSpec::new(kind, t).unwrap().eval(0.0), 0.0);
                }
            }

            #[test]
            fn losses_nonnegative(e in -50.0f64..50.0, t in 0.01f64..0.99) {
                for kind in [LossKind::LinLin, LossKind::AsymmetricQuadratic, LossKind::Linex] {
                    let spec = LossSpec::new(kind, t).unwrap();
                    let v = spec.eval(e);
                    prop_assert!(v >= 0.0);
                    if e.abs() > 1e-6 {
                        prop_assert!(v > 0.0);
                    }
                }
            }
        }
    }
}

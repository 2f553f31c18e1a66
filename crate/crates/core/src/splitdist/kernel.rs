//! Symmetric unimodal kernels `g` with mode 0.

use crate::special::{norm_cdf, norm_quantile, LN_2PI};
#[allow(unused_imports)]
use num_traits::Float;

/// A symmetric density `g` on the real line with its mode at zero.
pub trait SymmetricKernel: Copy + core::fmt::Debug {
    fn ln_density(&self, u: f64) -> f64;

    fn density(&self, u: f64) -> f64 {
        self.ln_density(u).exp()
    }

    fn cdf(&self, u: f64) -> f64;

    /// `G^{-1}(q)` for `q` in (0, 1).
    fn quantile(&self, q: f64) -> f64;

    /// `c_k = ∫_0^∞ u^k g(u) du`, when finite and known in closed form.
    fn partial_moment(&self, k: u32) -> Option<f64>;
}

/// `g(u) = ½ e^{-|u|}`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LaplaceKernel;

impl SymmetricKernel for LaplaceKernel {
    fn ln_density(&self, u: f64) -> f64 {
        -core::f64::consts::LN_2 - u.abs()
    }

    fn cdf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.5 * u.exp()
        } else {
            1.0 - 0.5 * (-u).exp()
        }
    }

    fn quantile(&self, q: f64) -> f64 {
        if q <= 0.5 {
            (2.0 * q).ln()
        } else {
            -(2.0 * (1.0 - q)).ln()
        }
    }

    fn partial_moment(&self, k: u32) -> Option<f64> {
        // ½ Γ(k + 1)
        Some(0.5 * (1..=k).map(f64::from).product::<f64>())
    }
}

/// Standard normal kernel.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GaussianKernel;

impl SymmetricKernel for GaussianKernel {
    fn ln_density(&self, u: f64) -> f64 {
        -0.5 * (LN_2PI + u * u)
    }

    fn cdf(&self, u: f64) -> f64 {
        norm_cdf(u)
    }

    fn quantile(&self, q: f64) -> f64 {
        norm_quantile(q)
    }

    fn partial_moment(&self, k: u32) -> Option<f64> {
        // 2^{k/2} Γ((k+1)/2) / (2 √π)
        let k = f64::from(k);
        Some(
            (0.5 * k * core::f64::consts::LN_2 + crate::special::ln_gamma(0.5 * (k + 1.0))).exp()
                / (2.0 * crate::special::SQRT_PI),
        )
    }
}

/// Standard logistic kernel `g(u) = e^{-u} / (1 + e^{-u})²`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LogisticKernel;

impl SymmetricKernel for LogisticKernel {
    fn ln_density(&self, u: f64) -> f64 {
        let a = u.abs();
        -a - 2.0 * (-a).exp().ln_1p()
    }

    fn cdf(&self, u: f64) -> f64 {
        crate::special::sigmoid(u)
    }

    fn quantile(&self, q: f64) -> f64 {
        crate::special::logit(q)
    }

    fn partial_moment(&self, k: u32) -> Option<f64> {
        // ∫_0^∞ u^k g(u) du = k! η(k) for k ≥ 1, η the Dirichlet eta function;
        // η(1) = ln 2, η(2) = π²/12, η(3) = 3ζ(3)/4.
        const ZETA3: f64 = 1.202_056_903_159_594_2;
        let pi2 = core::f64::consts::PI * core::f64::consts::PI;
        match k {
            0 => Some(0.5),
            1 => Some(core::f64::consts::LN_2),
            2 => Some(2.0 * pi2 / 12.0),
            3 => Some(6.0 * 0.75 * ZETA3),
            _ => None,
        }
    }
}

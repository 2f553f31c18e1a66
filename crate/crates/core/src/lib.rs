//! Bayesian modal regression for forecast combinations.
//!
//! The crate fits convex-weight combinations of expert forecasts whose errors
//! follow asymmetric, heavy-tailed distributions (asymmetric Laplace,
//! asymmetric normal, reverse Gumbel). The conditional *mode* of the response
//! is `w0 + ω'x` with `ω` on the probability simplex; scale and asymmetry are
//! sampled alongside it.
//!
//! Layout:
//!
//! * [`splitdist`] – split-distribution family and the three error laws.
//! * [`losses`] – lin-lin, asymmetric quadratic and linex losses, and their
//!   negative log-likelihood counterparts.
//! * [`priors`] – prior densities and samplers.
//! * [`transforms`] – constrained ↔ unconstrained parameter maps.
//! * [`mcmc`] – adaptive random-walk Metropolis, the latent-variable Gibbs
//!   sampler for the asymmetric Laplace model, and chain diagnostics.
//! * [`model`] – log-posterior assembly and posterior prediction.
//! * [`forecast`] – panels, imputation, rolling-window evaluation, hit/win rates.
//! * [`simstudy`] – Monte Carlo recovery studies.
//!
//! The crate is `no_std` (it needs `alloc`). Parallelism is injected through
//! the [`exec::Executor`] trait so results never depend on thread count.
#![no_std]

extern crate alloc;

pub mod error;
pub mod exec;
pub mod forecast;
pub mod losses;
pub mod mcmc;
pub mod model;
pub mod priors;
pub mod simstudy;
pub mod special;
pub mod splitdist;
pub mod transforms;

pub use error::{Error, Result};
pub use exec::{derive_seed, rng_from_seed, Executor, Sequential, SimRng};

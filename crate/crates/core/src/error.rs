use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside its admissible domain.
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite log-likelihood contribution at observation {t}")]
    NonFinite { t: usize },

    #[error("reverse Gumbel exponent overflow at observation {t}")]
    Overflow { t: usize },

    #[error("sampler initialization failed after {attempts} attempts")]
    Initialization { attempts: usize },

    #[error("sampler failure in chain {chain}: {reason}")]
    Sampler { chain: usize, reason: String },

    #[error("missing data: no observed forecast at time {t}")]
    AllMissing { t: usize },

    /// A fold tried to read ground truth it is not allowed to see.
    #[error("leakage: fold {fold} read actual at t = {t} (limit {limit})")]
    Leakage { fold: usize, t: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("replicate {index} failed: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    #[error("fold {fold} failed: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, value, "must be positive and finite"))
    }
}

pub(crate) fn check_unit_open(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(name, value, "must lie in (0, 1)"))
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, value, "must be finite"))
    }
}

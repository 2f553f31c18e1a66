//! File formats, configuration, threaded execution and the command-line
//! runner for `modalcomb-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod exec;
pub mod io;

pub use error::{AppError, AppResult};

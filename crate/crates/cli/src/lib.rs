//! Front end for spin-resolved (e,2e) calculations: configuration, angle
//! grids, CSV and PGM output, point reports, validation suites and simulated
//! Bell tests.

pub mod config;
pub mod output;
pub mod report;
pub mod scan;
pub mod simulate;
pub mod validate;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(#[from] e2e_core::Error),
    #[error("numeric error at thetaA = {theta_a} deg, thetaB = {theta_b} deg: {source}")]
    Point { theta_a: f64, theta_b: f64, source: e2e_core::Error },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Point { .. } => 3,
            CliError::Validation(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

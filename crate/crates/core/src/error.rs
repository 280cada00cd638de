use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("log-gamma pole at z = {0}")]
    GammaPole(f64),

    #[error("1F1 lower parameter b = {0} is a nonpositive integer")]
    HypergeometricPole(f64),

    #[error("1F1 did not converge at |z| = {abs_z} within {terms} terms (estimated error {estimate:e})")]
    NonConvergence { abs_z: f64, terms: usize, estimate: f64 },

    #[error("non-finite argument to {0}")]
    NonFinite(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("degenerate final spin state (vanishing norm)")]
    DegenerateState,

    #[error("closed channel: outgoing energy {e_a} hartree is not positive")]
    ClosedChannel { e_a: f64 },

    #[error("singular kinematics: {0}")]
    SingularKinematics(String),

    #[error("Monte Carlo: {0}")]
    MonteCarlo(String),
}

pub type Result<T> = std::result::Result<T, Error>;

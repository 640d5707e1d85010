use thiserror::Error;

/// Errors raised by evaluators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: result exceeds the floating range (natural log = {log_value})")]
    Overflow { log_value: f64 },
    #[error("argument |x| = {x} exceeds the series cancellation guard {max}")]
    ArgumentRange { x: f64, max: f64 },
    #[error("series did not converge in {terms} terms (partial sum {partial})")]
    Convergence { partial: f64, terms: usize },
    #[error("non-integrable endpoint singularity (alpha = {alpha}, beta = {beta})")]
    NonIntegrable { alpha: f64, beta: f64 },
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error("pole of {factor} at argument {arg}")]
    Pole { factor: String, arg: f64 },
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

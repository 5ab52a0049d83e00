use thiserror::Error;

/// Errors produced by the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{field}` must be finite")]
    NonFinite { field: &'static str },

    #[error("parameter `{field}` is out of range: {reason}")]
    OutOfRange { field: &'static str, reason: String },

    #[error("non-confining channel: varpi^2 = omega^2/4 + Omega*omega = {varpi_squared} is not positive")]
    NonConfining { varpi_squared: f64 },

    #[error("coefficient a_{index} overflowed")]
    CoefficientOverflow { index: usize },

    #[error("series not converged at r = {r}: tail bound {tail_bound} after {terms} terms")]
    NotConverged { r: f64, tail_bound: f64, terms: usize },

    #[error("no admissible root for (n = {n}, l = {l})")]
    NoAdmissibleRoot { n: u32, l: i64 },

    #[error("series is not terminated at degree {n}")]
    NotTerminated { n: u32 },

    #[error("integral not converged: estimates {coarse} and {fine} differ by {discrepancy} (relative)")]
    IntegralNotConverged { coarse: f64, fine: f64, discrepancy: f64 },

    #[error("eigenvalue bracket failure at index {index}: {reason}")]
    BracketFailure { index: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

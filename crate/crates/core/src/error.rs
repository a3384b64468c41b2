use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The reference point is too close: the instance needs `rho > sqrt(2)`.
    #[error("degenerate instance: rho = {rho} must exceed sqrt(2)")]
    DegenerateInstance { rho: f64 },

    /// Half arc distance outside `(0, pi/4)`.
    #[error("degenerate instance: alpha = {alpha} must lie in (0, pi/4)")]
    InvalidAlpha { alpha: f64 },

    #[error("invalid strategy: {angle} = {value} outside [0, {bound}] (pi/2 - alpha)")]
    InvalidStrategy {
        angle: &'static str,
        value: f64,
        bound: f64,
    },

    #[error("invalid step count: {0} (must be at least 1)")]
    InvalidSteps(u64),

    #[error("numeric domain error in {context}: {detail}")]
    NumericDomain {
        context: &'static str,
        detail: String,
    },

    #[error("alpha = {alpha} outside the validated range {range}")]
    OutOfValidatedRange { alpha: f64, range: &'static str },

    #[error("exact enumeration supports at most {max} finite steps, got {requested}")]
    EnumerationTooDeep { requested: u64, max: u64 },

    #[error("trial did not meet within {rounds} rounds")]
    RoundCapExceeded { rounds: u64, elapsed: f64 },

    #[error("{0}")]
    Domain(String),
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    QuadratureDiverged { a: f64, b: f64 },

    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate index {index} out of range for a {dim}-dimensional object")]
    CoordinateOutOfRange { index: usize, dim: usize },

    #[error("term {index} is not integrable over the requested coordinates")]
    NonIntegrable { index: usize },

    #[error("expected a real result, found {re} + {im}i")]
    NotReal { re: f64, im: f64 },

    #[error("value underflows the linear range (ln|value| = {log_value})")]
    Underflow { log_value: f64 },

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("linear map is singular")]
    SingularMap,

    #[error("target is not a pure state (purity {purity})")]
    NotPure { purity: f64 },

    #[error("operation needs a finite homodyne window")]
    NeedsWindow,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}

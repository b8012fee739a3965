//! Special functions, quadrature, scalar optimization and log-scaled
//! complex arithmetic.

mod erf;
mod logcomplex;
mod optimize;
mod quadrature;

pub use erf::{erf_complex, erfc_complex, erfc_log, erfcx_complex, faddeeva};
pub use logcomplex::LogComplex;
pub use optimize::{maximize_scalar, maximize_scalar_with_grid, DEFAULT_GRID_POINTS};
pub use quadrature::integrate_1d;

/// Natural log of the gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

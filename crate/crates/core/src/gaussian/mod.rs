//! Algebra of finite sums of complex Gaussians over N-mode quadrature
//! space: tensor products, linear maps, products, closed-form partial
//! integration and phase-space overlaps.

mod symplectic;
mod term;
mod wigner;

pub use symplectic::SymplecticMap;
pub use term::GaussianTerm;
pub use wigner::{Kind, WignerObject, MIN_TRACE, PRUNE_LOG_GAP};


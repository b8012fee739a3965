//! Phase-space simulation of heralded Schrödinger-cat preparation and
//! homodyne-heralded cat amplification.
//!
//! States and measurement operators are finite sums of complex Gaussians in
//! the Wigner picture ([`WignerObject`]). Linear optics act as linear maps on
//! the quadratures, measurements as closed-form Gaussian integrals, and the
//! one non-Gaussian element, a finite homodyne acceptance window, is applied
//! last through the complex error function.
//!
//! The [`iterate`] module follows recursive amplification in the pure-state
//! wavefunction picture.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuits;
pub mod error;
pub mod gaussian;
pub mod iterate;
pub mod numerics;
pub mod states;

pub use error::{Error, Result};
pub use gaussian::{GaussianTerm, Kind, SymplecticMap, WignerObject};
pub use iterate::PolyGaussWavefunction;
pub use numerics::LogComplex;
pub use states::{CatSpec, HomodyneWindow, Parity, Projection, SqueezingSpec};

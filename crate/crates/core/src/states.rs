//! Constructors for the states, measurement operators and wavefunctions
//! used by the circuits.
//!
//! Conventions: the coherent state `|γ⟩` (real γ) is centred at `x = √2 γ`;
//! one shot-noise unit (SNU) is `1/√2` in absolute quadrature units.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::gaussian::{GaussianTerm, Kind, WignerObject};
use crate::iterate::PolyGaussWavefunction;
use crate::numerics::LogComplex;

/// Absolute quadrature length of one shot-noise unit.
pub const SNU: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn snu_to_abs(snu: f64) -> f64 {
    snu * SNU
}

/// Squeezing `ξ_p ≤ 0` dB in p with impurity `ε ≥ 1`; the anti-squeezing
/// in x is `ξ_x = -ε ξ_p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezingSpec {
    xi_p: f64,
    epsilon: f64,
}

impl SqueezingSpec {
    pub fn new(xi_p: f64, epsilon: f64) -> Result<Self> {
        if !xi_p.is_finite() || xi_p > 0.0 {
            return Err(invalid("xi_p", xi_p, "squeezing proper must be ≤ 0 dB"));
        }
        if !epsilon.is_finite() || epsilon < 1.0 {
            return Err(invalid("epsilon", epsilon, "impurity must be ≥ 1"));
        }
        Ok(SqueezingSpec { xi_p, epsilon })
    }

    /// Pure squeezing of `xi_db` dB (sign ignored).
    pub fn pure(xi_db: f64) -> Result<Self> {
        SqueezingSpec::new(-xi_db.abs(), 1.0)
    }

    /// Squeezing `xi_db` dB (sign ignored) with impurity `epsilon`.
    pub fn impure(xi_db: f64, epsilon: f64) -> Result<Self> {
        SqueezingSpec::new(-xi_db.abs(), epsilon)
    }

    /// The impurity giving the requested purity at fixed `xi_p`.
    pub fn with_purity(xi_p: f64, purity: f64) -> Result<Self> {
        if !(purity > 0.0 && purity <= 1.0) {
            return Err(invalid("purity", purity, "must lie in (0, 1]"));
        }
        if xi_p == 0.0 {
            return SqueezingSpec::new(0.0, 1.0);
        }
        SqueezingSpec::new(xi_p, 1.0 + 20.0 * purity.log10() / xi_p)
    }

    pub fn xi_p(&self) -> f64 {
        self.xi_p
    }

    pub fn xi_x(&self) -> f64 {
        -self.epsilon * self.xi_p
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn scale_x(&self) -> f64 {
        10f64.powf(self.xi_x() / 20.0)
    }

    pub fn scale_p(&self) -> f64 {
        10f64.powf(self.xi_p / 20.0)
    }

    /// `10^{-(1-ε) ξ_p / 20}`.
    pub fn purity_closed_form(&self) -> f64 {
        10f64.powf(-(1.0 - self.epsilon) * self.xi_p / 20.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// `|κ±(γ)⟩ ∝ |γ⟩ ± |−γ⟩` with real amplitude `γ ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatSpec {
    gamma: f64,
    parity: Parity,
}

impl CatSpec {
    pub fn new(gamma: f64, parity: Parity) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(invalid("gamma", gamma, "cat amplitude must be ≥ 0"));
        }
        if gamma == 0.0 && parity == Parity::Odd {
            return Err(invalid("gamma", gamma, "odd cat needs a positive amplitude"));
        }
        Ok(CatSpec { gamma, parity })
    }

    pub fn even(gamma: f64) -> Result<Self> {
        CatSpec::new(gamma, Parity::Even)
    }

    pub fn odd(gamma: f64) -> Result<Self> {
        CatSpec::new(gamma, Parity::Odd)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// `2 ± 2 e^{-2γ²}`, evaluated without cancellation for small odd cats.
    pub fn norm_sq_denominator(&self) -> f64 {
        let x = -2.0 * self.gamma * self.gamma;
        match self.parity {
            Parity::Even => 2.0 + 2.0 * x.exp(),
            Parity::Odd => -2.0 * x.exp_m1(),
        }
    }
}

fn single_mode(kind: Kind, terms: Vec<GaussianTerm>) -> WignerObject {
    WignerObject::new(2, kind, terms).expect("single-mode terms")
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn vacuum() -> WignerObject {
    single_mode(
        Kind::State,
        vec![GaussianTerm::diagonal(1.0 / PI, &[-1.0, -1.0], &[re(0.0), re(0.0)])],
    )
}

/// Coherent state `|γ⟩` for real γ: a unit Gaussian centred at `(√2γ, 0)`.
pub fn coherent(gamma: f64) -> WignerObject {
    let amp = LogComplex::new(-PI.ln() - 2.0 * gamma * gamma, 0.0);
    let mut term =
        GaussianTerm::diagonal(1.0, &[-1.0, -1.0], &[re(2.0 * SQRT_2 * gamma), re(0.0)]);
    term.amplitude = amp;
    single_mode(Kind::State, vec![term])
}

/// `(1/π s_x s_p) exp(-(x/s_x)² - (p/s_p)²)`.
pub fn squeezed_vacuum(spec: &SqueezingSpec) -> WignerObject {
    let (sx, sp) = (spec.scale_x(), spec.scale_p());
    single_mode(
        Kind::State,
        vec![GaussianTerm::diagonal(
            1.0 / (PI * sx * sp),
            &[-1.0 / (sx * sx), -1.0 / (sp * sp)],
            &[re(0.0), re(0.0)],
        )],
    )
}

fn cat_terms(c: &CatSpec) -> Vec<GaussianTerm> {
    let g = c.gamma();
    let log_norm = -(PI * c.norm_sq_denominator()).ln();
    let shift = 2.0 * SQRT_2 * g;
    let lobe = |sign: f64| {
        let mut t = GaussianTerm::diagonal(1.0, &[-1.0, -1.0], &[re(sign * shift), re(0.0)]);
        t.amplitude = LogComplex::new(log_norm - 2.0 * g * g, 0.0);
        t
    };
    let fringe = |sign: f64| {
        let mut t = GaussianTerm::diagonal(
            1.0,
            &[-1.0, -1.0],
            &[re(0.0), Complex64::new(0.0, sign * shift)],
        );
        t.amplitude = LogComplex::new(log_norm, 0.0).scale_real(c.parity().sign());
        t
    };
    vec![lobe(1.0), lobe(-1.0), fringe(1.0), fringe(-1.0)]
}

/// Four-Gaussian Wigner function of `|κ±(γ)⟩`: two lobes at `x = ±√2γ` and
/// two fringe terms with imaginary linear coefficients in p.
///
/// Small odd cats are ill-conditioned in this form: the terms are of order
/// `1/γ²` and cancel to O(1), so closed-form overlaps lose about
/// `4·log10(1/γ)` digits (purity is off by ~1e-8 at γ = 0.01). Pointwise
/// values stay accurate.
pub fn cat(c: &CatSpec) -> WignerObject {
    single_mode(Kind::State, cat_terms(c))
}

/// `|κ⟩⟨κ|` as a measurement operator; same terms as [`cat`].
pub fn op_cat_projector(c: &CatSpec) -> WignerObject {
    single_mode(Kind::Operator, cat_terms(c))
}

/// On-off detector `𝕀 − |0⟩⟨0|`: `1/2π − (1/π) exp(-x² - p²)`.
pub fn op_apd() -> WignerObject {
    let identity = GaussianTerm::constant(LogComplex::new(-(2.0 * PI).ln(), 0.0), 2);
    let no_click = GaussianTerm::diagonal(-1.0 / PI, &[-1.0, -1.0], &[re(0.0), re(0.0)]);
    single_mode(Kind::Operator, vec![identity, no_click])
}

/// Homodyne acceptance window `[q0 - w/2, q0 + w/2]` (SNU) on the
/// quadrature at `angle`. Its Wigner function is `1/2π` inside the window
/// and flat in the conjugate quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomodyneWindow {
    pub center_snu: f64,
    pub width_snu: f64,
    pub angle: f64,
}

impl HomodyneWindow {
    pub fn lower_abs(&self) -> f64 {
        snu_to_abs(self.center_snu - 0.5 * self.width_snu)
    }

    pub fn upper_abs(&self) -> f64 {
        snu_to_abs(self.center_snu + 0.5 * self.width_snu)
    }
}

pub fn op_homodyne_window(q0: f64, width: f64, angle: f64) -> Result<HomodyneWindow> {
    if !(width > 0.0) {
        return Err(invalid("window width", width, "must be positive"));
    }
    if !q0.is_finite() {
        return Err(invalid("window centre", q0, "must be finite"));
    }
    Ok(HomodyneWindow {
        center_snu: q0,
        width_snu: width,
        angle,
    })
}

/// How the herald mode is measured.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Projection {
    /// Finite acceptance window; yields a probability.
    Window(HomodyneWindow),
    /// Ideal homodyne `|q0⟩⟨q0|`; yields a probability density (per
    /// absolute quadrature unit).
    Slice { center_snu: f64, angle: f64 },
}

impl Projection {
    /// x-quadrature window of `width_snu` centred on 0.
    pub fn window(width_snu: f64) -> Result<Self> {
        Ok(Projection::Window(op_homodyne_window(0.0, width_snu, 0.0)?))
    }

    /// Ideal x-quadrature projection at 0.
    pub fn slice() -> Self {
        Projection::Slice {
            center_snu: 0.0,
            angle: 0.0,
        }
    }

    pub fn angle(&self) -> f64 {
        match self {
            Projection::Window(w) => w.angle,
            Projection::Slice { angle, .. } => *angle,
        }
    }
}

/// `φ₀(x) = √2 / (π^{1/4} s^{3/2}) · x · exp(-x² / 2s²)`.
pub fn wf_squeezed_fock1(scale: f64) -> Result<PolyGaussWavefunction> {
    PolyGaussWavefunction::squeezed_fock1(scale)
}

pub fn wf_cat(c: &CatSpec) -> PolyGaussWavefunction {
    PolyGaussWavefunction::cat(c)
}

pub fn wf_vacuum() -> PolyGaussWavefunction {
    PolyGaussWavefunction::vacuum()
}

//! Heralded circuits: photon-subtracted squeezed vacuum (PSSV) generation,
//! homodyne-heralded amplification on a balanced beam splitter, and the
//! figures of merit built on them.

mod analytic;
mod optimize;

use std::f64::consts::PI;

pub use analytic::{analytic_amplified_fidelity, perr};
pub use optimize::{
    optimize_input_for_target, optimize_target_size, FidelityTarget, InputFamily,
    OptimizationResult, ALPHA_BRACKET, BETA_BRACKET, XI_BRACKET,
};

use crate::error::{Error, Result};
use crate::gaussian::{Kind, SymplecticMap, WignerObject, MIN_TRACE};
use crate::numerics::LogComplex;
use crate::states::{self, snu_to_abs, CatSpec, Projection, SqueezingSpec};

/// Two-mode beam splitter of transmissivity `t` acting on `modes` modes.
pub fn beamsplitter(t: f64, i: usize, j: usize, modes: usize) -> Result<SymplecticMap> {
    SymplecticMap::beamsplitter(t, i, j, modes)
}

/// Normalized PSSV and the probability that the detector clicked.
#[derive(Clone, Debug)]
pub struct PssvOutput {
    pub state: WignerObject,
    pub success: f64,
}

/// Squeezed vacuum and vacuum on a beam splitter of transmissivity `t`, with
/// an on/off detector on the reflected port.
pub fn generate_pssv(spec: &SqueezingSpec, t: f64) -> Result<PssvOutput> {
    if !(t > 0.0 && t < 1.0) {
        return Err(crate::error::invalid("transmissivity", t, "must lie in (0, 1)"));
    }
    let input = states::squeezed_vacuum(spec).tensor(&states::vacuum());
    let mixed = input.apply_linear(&SymplecticMap::beamsplitter(t, 0, 1, 2)?)?;
    let heralded = mixed.measure_mode(&states::op_apd(), 1)?;
    let trace = heralded.integrate_all_log()?;
    // The click probability is `1 - P(no click)`; below this level the two
    // terms cancel to rounding noise.
    let scale = heralded
        .integrate_subset(&[0, 1])?
        .terms()
        .iter()
        .map(|t| t.amplitude.log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    let value = trace.to_complex().re;
    if !(value > 1e-12 * scale.exp()) || trace.log_magnitude < MIN_TRACE.ln() {
        return Err(Error::Underflow {
            log_value: trace.log_magnitude,
        });
    }
    let (state, success) = heralded.normalize()?;
    Ok(PssvOutput { state, success })
}

/// `⟨ψ|ρ|ψ⟩ = Tr(ρ σ)` for a pure target `σ`, clamped to `[0, 1]`.
pub fn fidelity_with_pure(state: &WignerObject, target: &WignerObject) -> Result<f64> {
    let purity = target.purity()?;
    if (purity - 1.0).abs() > 1e-9 {
        return Err(Error::NotPure { purity });
    }
    Ok(state.overlap(target)?.clamp(0.0, 1.0))
}

/// A multimode state awaiting a homodyne measurement on `herald_mode`.
#[derive(Clone, Debug)]
pub struct HeraldedState {
    pub pre_measurement: WignerObject,
    pub herald_mode: usize,
    pub projection: Projection,
}

/// Whether a heralding value is a probability or a density per absolute
/// quadrature unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuccessKind {
    Probability,
    Density,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeraldSuccess {
    pub ln_value: f64,
    pub kind: SuccessKind,
}

impl HeraldSuccess {
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }
}

/// Mixes two single-mode inputs on a balanced beam splitter; mode 1 is
/// heralded by `projection`, mode 0 carries the output.
pub fn amplify(in1: &WignerObject, in2: &WignerObject, projection: Projection) -> Result<HeraldedState> {
    for w in [in1, in2] {
        if w.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: w.dim(),
            });
        }
    }
    let joint = in1.tensor(in2);
    let pre_measurement = joint.apply_linear(&SymplecticMap::beamsplitter(0.5, 0, 1, 2)?)?;
    Ok(HeraldedState {
        pre_measurement,
        herald_mode: 1,
        projection,
    })
}

impl HeraldedState {
    /// A single-mode state measured directly.
    pub fn direct(state: WignerObject, projection: Projection) -> Result<Self> {
        if state.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: state.dim(),
            });
        }
        Ok(HeraldedState {
            pre_measurement: state,
            herald_mode: 0,
            projection,
        })
    }

    fn output_mode(&self) -> Result<usize> {
        if self.pre_measurement.modes() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: self.pre_measurement.dim(),
            });
        }
        Ok(1 - self.herald_mode)
    }

    /// The pre-measurement state with the measured quadrature rotated onto x.
    fn rotated(&self, obj: &WignerObject) -> Result<WignerObject> {
        let angle = self.projection.angle();
        if angle == 0.0 {
            return Ok(obj.clone());
        }
        let map = SymplecticMap::rotation(angle, self.herald_mode, obj.modes())?;
        obj.apply_linear(&map)
    }
}

/// Integrates everything but the herald x in closed form, then applies the
/// projection. `obj` must already be rotated. Returns the value and the log
/// of the largest contribution (for judging cancellation).
fn reduce_herald(obj: &WignerObject, herald: usize, projection: &Projection) -> Result<(LogComplex, f64)> {
    let keep = 2 * herald;
    let others: Vec<usize> = (0..obj.dim()).filter(|&i| i != keep).collect();
    let marginal = obj.integrate_subset(&others)?;
    let parts: Vec<LogComplex> = match projection {
        Projection::Window(w) if !w.width_snu.is_finite() => marginal
            .integrate_subset(&[0])?
            .terms()
            .iter()
            .map(|t| t.amplitude)
            .collect(),
        Projection::Window(w) => {
            let (lo, hi) = (w.lower_abs(), w.upper_abs());
            marginal
                .terms()
                .iter()
                .map(|t| t.boxcar_integral(lo, hi))
                .collect::<Result<_>>()?
        }
        Projection::Slice { center_snu, .. } => {
            let x0 = [snu_to_abs(*center_snu)];
            marginal.terms().iter().map(|t| t.log_eval(&x0)).collect()
        }
    };
    let scale = parts
        .iter()
        .map(|p| p.log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((LogComplex::sum(parts), scale))
}

fn check_real(value: LogComplex, ln_scale: f64) -> Result<()> {
    let z = value.to_complex();
    let scale = (ln_scale - value.log_magnitude).exp();
    // Compare in units of |value| so tiny values do not underflow.
    let (re, im) = if value.is_zero() { (0.0, 0.0) } else { (z.re / z.norm(), z.im / z.norm()) };
    if !value.is_zero() && im.abs() > 1e-9 * re.abs() + 1e-12 * scale {
        return Err(Error::NotReal { re: z.re, im: z.im });
    }
    Ok(())
}

fn kind_of(projection: &Projection) -> SuccessKind {
    match projection {
        Projection::Window(_) => SuccessKind::Probability,
        Projection::Slice { .. } => SuccessKind::Density,
    }
}

fn success_log(h: &HeraldedState) -> Result<LogComplex> {
    let rotated = h.rotated(&h.pre_measurement)?;
    let (value, scale) = reduce_herald(&rotated, h.herald_mode, &h.projection)?;
    check_real(value, scale)?;
    if value.is_zero() || value.re() <= 0.0 || value.log_magnitude < MIN_TRACE.ln() {
        return Err(Error::Underflow {
            log_value: value.log_magnitude,
        });
    }
    Ok(value)
}

/// Probability of the heralding event (or its density for an ideal slice).
pub fn heralded_success(h: &HeraldedState) -> Result<HeraldSuccess> {
    let value = success_log(h)?;
    Ok(HeraldSuccess {
        ln_value: value.log_magnitude,
        kind: kind_of(&h.projection),
    })
}

fn fidelity_numerator(h: &HeraldedState, target: &CatSpec) -> Result<LogComplex> {
    let out = h.output_mode()?;
    let projector = WignerObject::embed(&states::op_cat_projector(target), out, 2)?;
    let weighted = h.pre_measurement.multiply(&projector)?.with_kind(Kind::State);
    let rotated = h.rotated(&weighted)?;
    let (value, scale) = reduce_herald(&rotated, h.herald_mode, &h.projection)?;
    check_real(value, scale)?;
    Ok(value.scale_real(2.0 * PI))
}

fn fidelity_given(h: &HeraldedState, target: &CatSpec, success: LogComplex) -> Result<f64> {
    let numerator = fidelity_numerator(h, target)?;
    Ok((numerator / success).re().clamp(0.0, 1.0))
}

/// Fidelity of the heralded output with `|κ(target)⟩`.
pub fn heralded_fidelity(h: &HeraldedState, target: &CatSpec) -> Result<f64> {
    let success = success_log(h)?;
    fidelity_given(h, target, success)
}

/// Wigner function of the normalized heralded output at `(x, p)`.
pub fn heralded_wigner_at(h: &HeraldedState, x: f64, p: f64) -> Result<f64> {
    let out = h.output_mode()?;
    let success = success_log(h)?;
    let rotated = h.rotated(&h.pre_measurement)?;
    let fixed = rotated.fix_coords(&[2 * out, 2 * out + 1], &[x, p])?;
    let (value, scale) = reduce_herald(&fixed, 0, &h.projection)?;
    check_real(value, scale)?;
    Ok((value / success).re())
}

use std::cell::RefCell;

use crate::error::{invalid, Error, Result};
use crate::gaussian::WignerObject;
use crate::numerics::maximize_scalar;
use crate::states::{self, CatSpec, Parity, Projection, SqueezingSpec};

use super::{amplify, fidelity_given, generate_pssv, success_log, HeraldedState, PssvOutput};

/// Target cat amplitudes searched by [`optimize_target_size`].
pub const BETA_BRACKET: (f64, f64) = (0.05, 6.0);
/// Input cat amplitudes searched by [`optimize_input_for_target`].
pub const ALPHA_BRACKET: (f64, f64) = (0.05, 4.0);
/// Input squeezing (dB) searched by [`optimize_input_for_target`].
pub const XI_BRACKET: (f64, f64) = (0.2, 15.0);

const TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizationResult {
    pub argument: f64,
    pub fidelity: f64,
    /// Heralding success at the optimum, when the state was heralded.
    pub success_probability: Option<f64>,
    /// The optimum sits on the search bracket boundary.
    pub at_edge: bool,
}

impl OptimizationResult {
    pub fn new(argument: f64, fidelity: f64, success: Option<f64>, lo: f64, hi: f64) -> Self {
        let margin = 1e-3 * (hi - lo);
        OptimizationResult {
            argument,
            fidelity,
            success_probability: success,
            at_edge: argument - lo < margin || hi - argument < margin,
        }
    }
}

type Evaluator<'a> = Box<dyn Fn(&CatSpec) -> Result<f64> + 'a>;

/// Anything whose fidelity with a cat state can be scanned.
pub trait FidelityTarget {
    /// A fidelity evaluator, plus the heralding success if the state was
    /// heralded.
    fn fidelity_evaluator(&self) -> Result<(Evaluator<'_>, Option<f64>)>;
}

impl FidelityTarget for WignerObject {
    fn fidelity_evaluator(&self) -> Result<(Evaluator<'_>, Option<f64>)> {
        let eval = move |c: &CatSpec| Ok(self.overlap(&states::cat(c))?.clamp(0.0, 1.0));
        Ok((Box::new(eval), None))
    }
}

impl FidelityTarget for PssvOutput {
    fn fidelity_evaluator(&self) -> Result<(Evaluator<'_>, Option<f64>)> {
        let (eval, _) = self.state.fidelity_evaluator()?;
        Ok((eval, Some(self.success)))
    }
}

impl FidelityTarget for HeraldedState {
    fn fidelity_evaluator(&self) -> Result<(Evaluator<'_>, Option<f64>)> {
        let success = success_log(self)?;
        let eval = move |c: &CatSpec| fidelity_given(self, c, success);
        Ok((Box::new(eval), Some(success.re())))
    }
}

/// Maximizes `f` while remembering the first error, which is returned if no
/// point could be evaluated.
fn maximize_fallible<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let first_error = RefCell::new(None);
    let (arg, best) = maximize_scalar(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                first_error.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        TOL,
    );
    if !best.is_finite() {
        return Err(first_error.into_inner().unwrap_or(Error::QuadratureDiverged { a: lo, b: hi }));
    }
    Ok((arg, best))
}

/// Cat amplitude β (of the given parity) best matching `state`.
pub fn optimize_target_size<S: FidelityTarget + ?Sized>(
    state: &S,
    parity: Parity,
) -> Result<OptimizationResult> {
    let (eval, success) = state.fidelity_evaluator()?;
    let (lo, hi) = BETA_BRACKET;
    let (arg, best) = maximize_fallible(|beta| eval(&CatSpec::new(beta, parity)?), lo, hi)?;
    Ok(OptimizationResult::new(arg, best, success, lo, hi))
}

/// Input family scanned by [`optimize_input_for_target`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputFamily {
    /// Two ideal odd cats of amplitude α.
    IdealCat,
    /// Two PSSVs from ξ dB of squeezing with impurity `epsilon`, tapped at
    /// transmissivity `t`.
    Pssv { t: f64, epsilon: f64 },
}

impl InputFamily {
    fn bracket(&self) -> (f64, f64) {
        match self {
            InputFamily::IdealCat => ALPHA_BRACKET,
            InputFamily::Pssv { .. } => XI_BRACKET,
        }
    }

    /// The heralded state for input parameter `x` (α or ξ).
    pub fn heralded(&self, x: f64, projection: Projection) -> Result<HeraldedState> {
        let input = match *self {
            InputFamily::IdealCat => states::cat(&CatSpec::odd(x)?),
            InputFamily::Pssv { t, epsilon } => {
                generate_pssv(&SqueezingSpec::impure(x, epsilon)?, t)?.state
            }
        };
        amplify(&input, &input, projection)
    }
}

/// Input parameter maximizing the amplified output's fidelity with
/// `|κ₊(β)⟩`.
pub fn optimize_input_for_target(
    beta: f64,
    family: InputFamily,
    projection: Projection,
) -> Result<OptimizationResult> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid("beta", beta, "must be positive"));
    }
    let target = CatSpec::even(beta)?;
    let (lo, hi) = family.bracket();
    let fidelity = |x: f64| {
        let h = family.heralded(x, projection)?;
        fidelity_given(&h, &target, success_log(&h)?)
    };
    let (arg, best) = maximize_fallible(fidelity, lo, hi)?;
    let success = success_log(&family.heralded(arg, projection)?)?.re();
    Ok(OptimizationResult::new(arg, best, Some(success), lo, hi))
}

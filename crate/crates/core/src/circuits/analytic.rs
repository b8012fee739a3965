use crate::error::{invalid, Result};
use crate::states::{self, CatSpec, Parity, Projection};

use super::{heralded_success, HeraldedState};

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln sinh y` for `y > 0`.
fn ln_sinh(y: f64) -> f64 {
    if y < 1.0 {
        y.sinh().ln()
    } else {
        y + (-(-2.0 * y).exp_m1()).ln() - std::f64::consts::LN_2
    }
}

/// `ln cosh y`.
fn ln_cosh(y: f64) -> f64 {
    let y = y.abs();
    y + (-2.0 * y).exp().ln_1p() - std::f64::consts::LN_2
}

/// Fidelity with `|κ₊(β)⟩` of the output from two ideal cats `|κ±(α)⟩`
/// after a balanced beam splitter and an ideal homodyne outcome `x = 0`:
///
/// `F = sech(β²) |cosh(√2αβ) ± e^{-α²}|² / (cosh 2α² + e^{-2α²} ± 2e^{-α²})`,
///
/// where the sign follows the input parity.
pub fn analytic_amplified_fidelity(alpha: f64, beta: f64, parity: Parity) -> f64 {
    let (alpha, beta) = (alpha.abs(), beta.abs());
    let b2 = beta * beta;
    let ln_sech = -ln_cosh(b2);
    let u = std::f64::consts::SQRT_2 * alpha * beta;
    let a2 = alpha * alpha;
    match parity {
        Parity::Even => {
            let ln_num = log_add(ln_cosh(u), -a2);
            let ln_den = log_add(log_add(ln_cosh(2.0 * a2), -2.0 * a2), std::f64::consts::LN_2 - a2);
            (ln_sech + 2.0 * ln_num - ln_den).exp()
        }
        Parity::Odd => {
            if alpha < 1e-7 {
                return ln_sech.exp() * (1.0 + b2).powi(2) / 3.0;
            }
            // cosh u - e^{-α²} = 2 sinh²(u/2) + (1 - e^{-α²});
            // the denominator is 2 sinh²α² + (1 - e^{-α²})².
            let gap = (-(-a2).exp_m1()).ln();
            let sinh_term = |y: f64| {
                if y == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    std::f64::consts::LN_2 + 2.0 * ln_sinh(y)
                }
            };
            let ln_num = log_add(sinh_term(0.5 * u), gap);
            let ln_den = log_add(sinh_term(a2), 2.0 * gap);
            (ln_sech + 2.0 * ln_num - ln_den).exp()
        }
    }
}

/// Probability of mistaking `|κ₊(β)⟩` for vacuum with an x-window of width
/// `window_snu` about 0: `P(κ₊) / (P(κ₊) + P(0))`.
pub fn perr(beta: f64, window_snu: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(invalid("beta", beta, "must be non-negative"));
    }
    let projection = Projection::window(window_snu)?;
    let p = |state| -> Result<f64> {
        Ok(heralded_success(&HeraldedState::direct(state, projection)?)?.value())
    };
    let p_cat = p(states::cat(&CatSpec::even(beta)?))?;
    let p_vac = p(states::vacuum())?;
    // Vacuum is never less likely than κ₊ in a centred window; the clamp
    // only removes rounding once both probabilities reach 1.
    Ok((p_cat / (p_cat + p_vac)).min(0.5))
}

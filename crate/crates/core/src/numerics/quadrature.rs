use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;
const MAX_EVALUATIONS: usize = 20_000_000;
const INITIAL_PANELS: usize = 16;

struct Simpson<'a, F> {
    f: &'a F,
    evaluations: usize,
}

impl<F: Fn(f64) -> f64> Simpson<'_, F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evaluations += 1;
        if self.evaluations > MAX_EVALUATIONS {
            return Err(Error::QuadratureDiverged { a: x, b: x });
        }
        let y = (self.f)(x);
        if !y.is_finite() {
            return Err(Error::QuadratureDiverged { a: x, b: x });
        }
        Ok(y)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::QuadratureDiverged { a, b });
        }
        Ok(self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?
            + self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute error `tol`.
///
/// The interval is first cut into 16 equal panels so narrow features away
/// from the midpoint are not skipped.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::QuadratureDiverged { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    let mut engine = Simpson {
        f: &f,
        evaluations: 0,
    };
    let width = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut x0 = a;
    let mut f0 = engine.eval(x0)?;
    for i in 0..INITIAL_PANELS {
        let x1 = if i + 1 == INITIAL_PANELS {
            b
        } else {
            a + width * (i + 1) as f64
        };
        let xm = 0.5 * (x0 + x1);
        let fm = engine.eval(xm)?;
        let f1 = engine.eval(x1)?;
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += engine
            .refine(x0, x1, f0, fm, f1, whole, panel_tol, 0)
            .map_err(|_| Error::QuadratureDiverged { a, b })?;
        x0 = x1;
        f0 = f1;
    }
    Ok(total)
}

//! Recursive amplification in the pure-state wavefunction picture.
//!
//! Each stage mixes two copies of `φ_k` on a balanced beam splitter and keeps
//! the outcome `x = 0` on one port, giving `φ_{k+1}(x) ∝ φ_k(x/√2)²`.

mod wavefunction;

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

pub use wavefunction::PolyGaussWavefunction;

use crate::circuits::OptimizationResult;
use crate::error::{invalid, Error, Result};
use crate::numerics::{integrate_1d, maximize_scalar_with_grid};
use crate::states::{snu_to_abs, CatSpec, Parity};

/// Largest supported number of iterations (polynomial degree `2¹²`).
pub const MAX_ITERATIONS: usize = 12;

/// One iteration: `φ'(x) = φ(x/√2)² / 𝒩`. Returns the normalized output and
/// `ln 𝒩² = ln ∫ φ(x/√2)⁴ dx`, the heralding density at `x = 0`.
pub fn iterate_step_with_density(phi: &PolyGaussWavefunction) -> (PolyGaussWavefunction, f64) {
    phi.squared().rescaled(FRAC_1_SQRT_2).normalized()
}

pub fn iterate_step(phi: &PolyGaussWavefunction) -> PolyGaussWavefunction {
    iterate_step_with_density(phi).0
}

/// `φ_k ∝ φ₀^{2^k}(2^{-k/2} x)`, normalized.
pub fn iterate_closed_form(phi0: &PolyGaussWavefunction, k: usize) -> Result<PolyGaussWavefunction> {
    if k > MAX_ITERATIONS {
        return Err(invalid("iterations", k as f64, "at most 12 are supported"));
    }
    let mut power = phi0.clone();
    for _ in 0..k {
        power = power.squared();
    }
    let lambda = 2f64.powf(-0.5 * k as f64);
    Ok(power.rescaled(lambda).normalized().0)
}

/// `φ₀^{2k}(2^{-k/2} x)`, normalized: the closed form with a linear instead
/// of a doubling exponent. It agrees with the recursion only for `k ≤ 2`
/// and is kept for comparison.
pub fn linear_exponent_form(phi0: &PolyGaussWavefunction, k: usize) -> Result<PolyGaussWavefunction> {
    if k > MAX_ITERATIONS {
        return Err(invalid("iterations", k as f64, "at most 12 are supported"));
    }
    if k == 0 {
        return Ok(phi0.normalized().0);
    }
    let lambda = 2f64.powf(-0.5 * k as f64);
    Ok(phi0.powi(2 * k as u32).rescaled(lambda).normalized().0)
}

/// Applies `iterate_step` `k` times, returning every stage `φ₀ … φ_k`.
pub fn iterate_chain(phi0: &PolyGaussWavefunction, k: usize) -> Result<Vec<PolyGaussWavefunction>> {
    if k > MAX_ITERATIONS {
        return Err(invalid("iterations", k as f64, "at most 12 are supported"));
    }
    let mut out = Vec::with_capacity(k + 1);
    out.push(phi0.normalized().0);
    for _ in 0..k {
        let next = iterate_step(out.last().expect("chain is non-empty"));
        out.push(next);
    }
    Ok(out)
}

/// Cat amplitude β maximizing `|⟨κ(β)|φ⟩|²`, from closed-form overlaps.
/// The cat's parity follows φ (odd seeds, even iterates).
pub fn effective_size(phi: &PolyGaussWavefunction) -> OptimizationResult {
    let ln_norm_sq = phi.ln_norm_sq();
    size_search(phi.second_moment(), parity_of(phi), |c| {
        phi.fidelity_given_norm(&PolyGaussWavefunction::cat(c), ln_norm_sq)
    })
}

/// Dominant parity of φ, judged from a few mirrored samples.
fn parity_of(phi: &PolyGaussWavefunction) -> Parity {
    let (mut even, mut odd) = (0.0, 0.0);
    for x in [0.37, 0.91, 1.73, 2.6, 3.9] {
        let (a, b) = (phi.evaluate(x), phi.evaluate(-x));
        even += (a + b).abs();
        odd += (a - b).abs();
    }
    if odd > even {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn size_search<F: Fn(&CatSpec) -> f64>(second_moment: f64, parity: Parity, fidelity: F) -> OptimizationResult {
    // ⟨x²⟩ of κ₊(β) is about 2β² + ½ for β ≳ 1.
    let estimate = ((second_moment - 0.5).max(0.0) / 2.0).sqrt();
    let lo = 0.05;
    let hi = (1.5 * estimate + 1.0).max(6.0);
    let f = |beta: f64| match CatSpec::new(beta, parity) {
        Ok(c) => fidelity(&c),
        Err(_) => f64::NEG_INFINITY,
    };
    let grid = (((hi - lo) / 0.05).ceil() as usize).max(64);
    let (argument, best) = maximize_scalar_with_grid(f, lo, hi, 1e-6, grid);
    OptimizationResult::new(argument, best.clamp(0.0, 1.0), None, lo, hi)
}

/// Largest cancellation `ln(Σ|terms| / |norm|)` accepted in a stage's
/// closed-form norm (about six lost digits). Past it the stage is evaluated
/// from the seed power instead.
pub const MAX_LN_CANCELLATION: f64 = 13.8;

/// How a stage's integrals are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluation {
    /// Closed-form moments of the polynomial-Gaussian expansion.
    ClosedForm,
    /// Quadrature of `φ₀(2^{-k/2}x)^{2^k}` in log form. Used once the
    /// expansion cancels too strongly, as it does for multi-component
    /// seeds after several iterations.
    SeedPower,
}

/// Stage `k` of the iteration, `φ_k ∝ φ₀(2^{-k/2}x)^{2^k}`, normalized.
#[derive(Clone, Debug)]
pub struct Stage {
    index: usize,
    seed: PolyGaussWavefunction,
    closed: Option<PolyGaussWavefunction>,
    ln_power_norm: f64,
    ln_density: Option<f64>,
}

/// `ln ∫ e^{f(x)} dx` over `[-radius, radius]` for an integrand given in log
/// form. Panels of width about `step` whose samples all sit far below the
/// peak are skipped.
fn log_integral<F: Fn(f64) -> f64>(f: F, radius: f64, step: f64) -> Result<f64> {
    let panels = ((2.0 * radius / step).ceil() as usize).max(1);
    let h = 2.0 * radius / panels as f64;
    let at = |i: usize| -radius + i as f64 * h / 4.0;
    let samples: Vec<f64> = (0..=4 * panels).map(|i| f(at(i))).collect();
    let peak = samples.iter().copied().filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    if !peak.is_finite() {
        return Err(Error::QuadratureDiverged { a: -radius, b: radius });
    }
    let mut total = 0.0;
    for p in 0..panels {
        let local = samples[4 * p..=4 * p + 4].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if local < peak - 80.0 {
            continue;
        }
        let a = at(4 * p);
        total += integrate_1d(|x| (f(x) - peak).exp(), a, a + h, 1e-13 * h)?;
    }
    Ok(peak + total.ln())
}

impl Stage {
    /// Stage 0: the normalized seed.
    pub fn seed(phi0: &PolyGaussWavefunction) -> Stage {
        let seed = phi0.normalized().0;
        Stage {
            index: 0,
            closed: Some(seed.clone()),
            seed,
            ln_power_norm: 0.0,
            ln_density: None,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn evaluation(&self) -> Evaluation {
        if self.closed.is_some() {
            Evaluation::ClosedForm
        } else {
            Evaluation::SeedPower
        }
    }

    /// The closed-form expansion, while it is well conditioned.
    pub fn closed_form(&self) -> Option<&PolyGaussWavefunction> {
        self.closed.as_ref()
    }

    /// `ln 𝒩²` of the step that produced this stage (none for the seed).
    pub fn ln_density(&self) -> Option<f64> {
        self.ln_density
    }

    fn lambda(&self) -> f64 {
        2f64.powf(-0.5 * self.index as f64)
    }

    /// `2^k ln|φ₀(2^{-k/2}x)|`.
    fn raw_ln(&self, x: f64) -> f64 {
        2f64.powi(self.index as i32) * self.seed.log_evaluate(self.lambda() * x).log_magnitude
    }

    /// `ln|φ_k(x)|`.
    pub fn ln_abs(&self, x: f64) -> f64 {
        match &self.closed {
            Some(c) => c.log_evaluate(x).log_magnitude,
            None => self.raw_ln(x) - 0.5 * self.ln_power_norm,
        }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        match &self.closed {
            Some(c) => c.evaluate(x),
            // An even power, so never negative.
            None => self.ln_abs(x).exp(),
        }
    }

    fn power_radius(&self) -> f64 {
        support_radius(&self.seed) / self.lambda()
    }

    fn radius(&self) -> f64 {
        match &self.closed {
            Some(c) => support_radius(c),
            None => self.power_radius(),
        }
    }

    fn step(&self) -> f64 {
        0.5 / self.seed.inv_var().sqrt()
    }

    /// The next stage and its `ln 𝒩² = ln ∫ φ_k(x/√2)⁴ dx`.
    pub fn next(&self) -> Result<Stage> {
        let index = self.index + 1;
        if index > MAX_ITERATIONS {
            return Err(invalid("iterations", index as f64, "at most 12 are supported"));
        }
        if let Some(c) = &self.closed {
            let raw = c.squared().rescaled(FRAC_1_SQRT_2);
            if raw.ln_cancellation() <= MAX_LN_CANCELLATION {
                let (next, ln_density) = raw.normalized();
                return Ok(Stage {
                    index,
                    seed: self.seed.clone(),
                    closed: Some(next),
                    ln_power_norm: 0.0,
                    ln_density: Some(ln_density),
                });
            }
        }
        // The seed power obeys raw_{k+1}(x) = 2 raw_k(x/√2), so
        // ln 𝒩² = ln ∫ e^{2 raw_{k+1}} − 2 ln ∫ e^{2 raw_k}.
        let ln_norm_here = match self.closed {
            Some(_) => log_integral(|x| 2.0 * self.raw_ln(x), self.power_radius(), self.step())?,
            None => self.ln_power_norm,
        };
        let mut next = Stage {
            index,
            seed: self.seed.clone(),
            closed: None,
            ln_power_norm: 0.0,
            ln_density: None,
        };
        next.ln_power_norm = log_integral(|x| 2.0 * next.raw_ln(x), next.power_radius(), self.step())?;
        next.ln_density = Some(next.ln_power_norm - 2.0 * ln_norm_here);
        Ok(next)
    }

    /// Cat amplitude β maximizing `|⟨κ(β)|φ_k⟩|²`; even past the seed.
    pub fn effective_size(&self) -> Result<OptimizationResult> {
        if let Some(c) = &self.closed {
            return Ok(effective_size(c));
        }
        let (radius, step) = (self.radius(), self.step());
        let ln_moment = log_integral(|x| 2.0 * (x.abs().ln() + self.ln_abs(x)), radius, step)?;
        let fidelity = |c: &CatSpec| {
            let cat = PolyGaussWavefunction::cat(c);
            // φ_k ≥ 0 and κ₊ > 0, so the overlap integrand is positive.
            // Outside the cat's support the integrand is negligible.
            let range = support_radius(&cat);
            match log_integral(|x| self.ln_abs(x) + cat.log_evaluate(x).log_magnitude, range, step) {
                Ok(ln) => (2.0 * ln).exp(),
                Err(_) => f64::NAN,
            }
        };
        // Seed-power stages are even powers, so always even.
        Ok(size_search(ln_moment.exp(), Parity::Even, fidelity))
    }

    /// Probability that the homodyne outcome after mixing two copies lands in
    /// a window of width `width_snu` about 0.
    pub fn window_probability(&self, width_snu: f64) -> Result<f64> {
        window_probability(|x| self.evaluate(x), self.radius(), width_snu)
    }
}

/// Stages `φ₀ … φ_k`, switching from closed form to seed-power quadrature
/// where the expansion loses precision.
pub fn stages(phi0: &PolyGaussWavefunction, k: usize) -> Result<Vec<Stage>> {
    if k > MAX_ITERATIONS {
        return Err(invalid("iterations", k as f64, "at most 12 are supported"));
    }
    let mut out = vec![Stage::seed(phi0)];
    for _ in 0..k {
        let next = out.last().expect("non-empty").next()?;
        out.push(next);
    }
    Ok(out)
}

/// How each stage's heralding probability is measured.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HeraldMode {
    /// Probability density of the ideal outcome `x = 0`.
    Density,
    /// Probability of landing in a window of the given width (SNU) about 0.
    Window(f64),
}

/// Stage `j` heralding value and the compound value for a full binary tree
/// of depth `j`, both as natural logs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageSuccess {
    pub stage: usize,
    pub ln_stage: f64,
    pub ln_compound: f64,
}

impl StageSuccess {
    pub fn stage_value(&self) -> f64 {
        self.ln_stage.exp()
    }

    pub fn compound_value(&self) -> f64 {
        self.ln_compound.exp()
    }
}

fn support_radius(phi: &PolyGaussWavefunction) -> f64 {
    let width = 1.0 / phi.inv_var().sqrt();
    phi.max_centre() + (phi.degree() as f64).sqrt() * width + 12.0 * width
}

/// `∫_{|v|≤h} dv ∫ du |φ((u+v)/√2) φ((v−u)/√2)|²` for normalized φ.
fn window_probability<F: Fn(f64) -> f64>(phi: F, support: f64, width_snu: f64) -> Result<f64> {
    let half = 0.5 * snu_to_abs(width_snu);
    let radius = SQRT_2 * support + half;
    let h = FRAC_1_SQRT_2;
    let inner = |v: f64| {
        integrate_1d(
            |u| {
                let a = phi(h * (u + v));
                let b = phi(h * (v - u));
                (a * b) * (a * b)
            },
            -radius,
            radius,
            1e-13,
        )
    };
    let err = std::cell::Cell::new(None);
    let total = integrate_1d(
        |v| match inner(v) {
            Ok(x) => x,
            Err(e) => {
                err.set(Some(e));
                0.0
            }
        },
        -half,
        half,
        1e-11,
    )?;
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Per-stage and compound heralding success for `k` iterations of `phi0`.
///
/// The compound value is `∏_{j≤k} p_j^{2^{k-j}}`: stage `j` runs `2^{k-j}`
/// times in the tree. Values are logs so deep trees never underflow to 0.
pub fn success_scaling(
    phi0: &PolyGaussWavefunction,
    k: usize,
    mode: HeraldMode,
) -> Result<Vec<StageSuccess>> {
    if let HeraldMode::Window(w) = mode {
        if !(w > 0.0) {
            return Err(invalid("window width", w, "must be positive"));
        }
    }
    let chain = stages(phi0, k)?;
    let mut out: Vec<StageSuccess> = Vec::with_capacity(k);
    for pair in chain.windows(2) {
        let ln_stage = match mode {
            HeraldMode::Density => pair[1].ln_density().expect("later stages carry a density"),
            HeraldMode::Window(w) => pair[0].window_probability(w)?.ln(),
        };
        let ln_compound = out.last().map_or(0.0, |prev| 2.0 * prev.ln_compound) + ln_stage;
        out.push(StageSuccess {
            stage: pair[1].index(),
            ln_stage,
            ln_compound,
        });
    }
    Ok(out)
}

use std::f64::consts::PI;

use num_complex::Complex64;

use super::term::GaussianTerm;
use super::SymplecticMap;
use crate::error::{Error, Result};
use crate::numerics::LogComplex;

/// Terms this many natural-log units below the strongest term are dropped
/// after products and integrations.
pub const PRUNE_LOG_GAP: f64 = 300.0;

/// Traces below this (linear scale) are refused by [`WignerObject::normalize`].
pub const MIN_TRACE: f64 = 1e-280;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    State,
    Operator,
}

/// Finite sum of Gaussian terms over a shared coordinate vector.
///
/// Coordinates are ordered `(x₁, p₁, …, x_N, p_N)`. Units are ħ = 1 with the
/// vacuum at `(1/π) exp(-x² - p²)`. Operators use the same phase-space map
/// as states, so `Tr(ÂB̂) = (2π)^N ∫ W_A W_B`.
#[derive(Clone, Debug)]
pub struct WignerObject {
    dim: usize,
    kind: Kind,
    terms: Vec<GaussianTerm>,
}

fn complement(dim: usize, coords: &[usize]) -> Vec<usize> {
    (0..dim).filter(|i| !coords.contains(i)).collect()
}

impl WignerObject {
    pub fn new(dim: usize, kind: Kind, terms: Vec<GaussianTerm>) -> Result<Self> {
        if let Some(bad) = terms.iter().find(|t| t.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(WignerObject { dim, kind, terms })
    }

    /// Constant 1 over `dim` coordinates; the neutral element of
    /// [`multiply`](Self::multiply).
    pub fn unit(dim: usize) -> Self {
        WignerObject {
            dim,
            kind: Kind::Operator,
            terms: vec![GaussianTerm::constant(LogComplex::ONE, dim)],
        }
    }

    /// Wigner function of the identity on `modes` modes: `(1/2π)^modes`.
    pub fn identity_operator(modes: usize) -> Self {
        let amp = LogComplex::new(-(modes as f64) * (2.0 * PI).ln(), 0.0);
        WignerObject {
            dim: 2 * modes,
            kind: Kind::Operator,
            terms: vec![GaussianTerm::constant(amp, 2 * modes)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Mode count; half the coordinate count.
    pub fn modes(&self) -> usize {
        self.dim / 2
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn terms(&self) -> &[GaussianTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    pub fn scaled(&self, factor: LogComplex) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.amplitude = t.amplitude * factor;
        }
        out
    }

    /// Term-wise sum, e.g. for building mixtures.
    pub fn add(&self, other: &WignerObject) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(WignerObject {
            dim: self.dim,
            kind: self.kind,
            terms,
        })
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        for (i, &c) in coords.iter().enumerate() {
            if c >= self.dim {
                return Err(Error::CoordinateOutOfRange {
                    index: c,
                    dim: self.dim,
                });
            }
            if coords[..i].contains(&c) {
                return Err(Error::CoordinateOutOfRange {
                    index: c,
                    dim: self.dim,
                });
            }
        }
        Ok(())
    }

    fn pruned(mut self) -> Self {
        let peaks: Vec<Option<f64>> = self.terms.iter().map(|t| t.peak_log_magnitude()).collect();
        let Some(top) = peaks
            .iter()
            .flatten()
            .copied()
            .filter(|p| p.is_finite())
            .reduce(f64::max)
        else {
            return self;
        };
        let mut kept = Vec::with_capacity(self.terms.len());
        for (term, peak) in self.terms.into_iter().zip(peaks) {
            match peak {
                Some(p) if p < top - PRUNE_LOG_GAP => {}
                _ => kept.push(term),
            }
        }
        self.terms = kept;
        self
    }

    /// Product over disjoint coordinates: `a` first, then `b`.
    pub fn tensor(&self, other: &WignerObject) -> WignerObject {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.tensor(b));
            }
        }
        let kind = if self.kind == Kind::State && other.kind == Kind::State {
            Kind::State
        } else {
            Kind::Operator
        };
        WignerObject {
            dim: self.dim + other.dim,
            kind,
            terms,
        }
    }

    /// Transforms the quadratures by `q → M q`, i.e. `W(q) → W(M⁻¹ q)`.
    pub fn apply_linear(&self, map: &SymplecticMap) -> Result<WignerObject> {
        self.check_dim(map.dim())?;
        let terms = self.terms.iter().map(|t| t.pull_back(map.inverse())).collect();
        Ok(WignerObject {
            dim: self.dim,
            kind: self.kind,
            terms,
        })
    }

    /// Pointwise product over the same coordinates.
    pub fn multiply(&self, other: &WignerObject) -> Result<WignerObject> {
        self.check_dim(other.dim)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.product(b));
            }
        }
        let kind = if self.kind == Kind::State || other.kind == Kind::State {
            Kind::State
        } else {
            Kind::Operator
        };
        Ok(WignerObject {
            dim: self.dim,
            kind,
            terms,
        }
        .pruned())
    }

    /// Integrates the listed coordinates over ℝ in closed form; the result
    /// lives on the remaining coordinates in their original order.
    pub fn integrate_subset(&self, coords: &[usize]) -> Result<WignerObject> {
        self.check_coords(coords)?;
        let rest = complement(self.dim, coords);
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(index, t)| {
                t.integrate(coords, &rest)
                    .ok_or(Error::NonIntegrable { index })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WignerObject {
            dim: rest.len(),
            kind: self.kind,
            terms,
        }
        .pruned())
    }

    /// Fixes `coords` to `values`; the result lives on the other coordinates.
    pub fn fix_coords(&self, coords: &[usize], values: &[f64]) -> Result<WignerObject> {
        self.check_coords(coords)?;
        if coords.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: coords.len(),
                found: values.len(),
            });
        }
        let rest = complement(self.dim, coords);
        let terms = self
            .terms
            .iter()
            .map(|t| t.fix(coords, values, &rest))
            .collect();
        Ok(WignerObject {
            dim: rest.len(),
            kind: self.kind,
            terms,
        })
    }

    /// Sum of the amplitudes of a 0-coordinate object.
    pub fn scalar(&self) -> LogComplex {
        debug_assert_eq!(self.dim, 0);
        LogComplex::sum(self.terms.iter().map(|t| t.amplitude))
    }

    /// Integral over every coordinate, in log form.
    pub fn integrate_all_log(&self) -> Result<LogComplex> {
        let all: Vec<usize> = (0..self.dim).collect();
        Ok(self.integrate_subset(&all)?.scalar())
    }

    /// Integral over every coordinate together with the sum of the
    /// per-term moduli (the scale against which cancellation is judged).
    fn integrate_all_with_scale(&self) -> Result<(Complex64, f64)> {
        let all: Vec<usize> = (0..self.dim).collect();
        let reduced = self.integrate_subset(&all)?;
        let value = reduced.scalar().to_complex();
        let scale = reduced.terms.iter().map(|t| t.amplitude.abs()).sum();
        Ok((value, scale))
    }

    pub fn log_evaluate(&self, q: &[f64]) -> LogComplex {
        LogComplex::sum(self.terms.iter().map(|t| t.log_eval(q)))
    }

    pub fn evaluate(&self, q: &[f64]) -> Complex64 {
        assert_eq!(q.len(), self.dim, "evaluation point has wrong dimension");
        self.log_evaluate(q).to_complex()
    }

    /// `Tr(ÂB̂) = (2π)^N ∫ W_A W_B`; the imaginary part must vanish.
    pub fn overlap(&self, other: &WignerObject) -> Result<f64> {
        let product = self.multiply(other)?;
        let (value, scale) = product.integrate_all_with_scale()?;
        let factor = (2.0 * PI).powi(self.modes() as i32);
        if value.im.abs() > 1e-9 * value.re.abs() + 1e-12 * scale {
            return Err(Error::NotReal {
                re: factor * value.re,
                im: factor * value.im,
            });
        }
        Ok(factor * value.re)
    }

    pub fn purity(&self) -> Result<f64> {
        self.overlap(self)
    }

    /// Trace (integral over all coordinates), real part.
    pub fn trace(&self) -> Result<f64> {
        let (value, scale) = self.integrate_all_with_scale()?;
        if value.im.abs() > 1e-9 * value.re.abs() + 1e-12 * scale {
            return Err(Error::NotReal {
                re: value.re,
                im: value.im,
            });
        }
        Ok(value.re)
    }

    /// Rescales to unit trace and returns the original trace.
    pub fn normalize(&self) -> Result<(WignerObject, f64)> {
        let log_trace = self.integrate_all_log()?;
        if log_trace.is_zero() || log_trace.log_magnitude < MIN_TRACE.ln() {
            return Err(Error::Underflow {
                log_value: log_trace.log_magnitude,
            });
        }
        let trace = log_trace.to_complex();
        if trace.im.abs() > 1e-9 * trace.re.abs() || trace.re <= 0.0 {
            return Err(Error::NotReal {
                re: trace.re,
                im: trace.im,
            });
        }
        let inv = LogComplex::new(-log_trace.log_magnitude, 0.0);
        Ok((self.scaled(inv), trace.re))
    }

    /// `op` placed on `mode` (of `modes`) with the constant 1 elsewhere.
    pub fn embed(op: &WignerObject, mode: usize, modes: usize) -> Result<WignerObject> {
        if op.dim != 2 || mode >= modes {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: op.dim,
            });
        }
        let before = WignerObject::unit(2 * mode);
        let after = WignerObject::unit(2 * (modes - mode - 1));
        Ok(before.tensor(op).tensor(&after).with_kind(op.kind))
    }

    /// Applies a measurement operator on `mode` and integrates that mode
    /// out: `(2π) ∫ W(q) W_Π(q_mode) dq_mode`.
    pub fn measure_mode(&self, op: &WignerObject, mode: usize) -> Result<WignerObject> {
        let modes = self.modes();
        let embedded = WignerObject::embed(op, mode, modes)?;
        let product = self.multiply(&embedded)?;
        let reduced = product.integrate_subset(&[2 * mode, 2 * mode + 1])?;
        Ok(reduced.scaled(LogComplex::from_real(2.0 * PI)).with_kind(Kind::State))
    }
}

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{invalid, Result};
use crate::gaussian::PRUNE_LOG_GAP;
use crate::numerics::{ln_gamma, LogComplex};
use crate::states::CatSpec;

type Poly = Vec<LogComplex>;

/// Real wavefunction
/// `φ(x) = e^{log_norm} Σ_m Σ_n c_{m,n} xⁿ exp(-a (x - m·u)² / 2)`
/// with a shared Gaussian exponent `a` (`inv_var`) and component centres on
/// the lattice `m·u`.
///
/// Coefficients are held in log form, so high-degree iterates (degree 2¹²)
/// and far-displaced components stay representable.
#[derive(Clone, Debug)]
pub struct PolyGaussWavefunction {
    inv_var: f64,
    shift_unit: f64,
    components: BTreeMap<i64, Poly>,
    log_norm: f64,
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `∫ xⁿ exp(-A (x - D)²) dx = Σ_{j even} C(n,j) D^{n-j} Γ((j+1)/2) A^{-(j+1)/2}`.
fn shifted_moment(n: usize, width: f64, centre: f64) -> LogComplex {
    let ln_a = width.ln();
    let gaussian = |j: usize| ln_gamma(0.5 * (j as f64 + 1.0)) - 0.5 * (j as f64 + 1.0) * ln_a;
    if centre == 0.0 {
        if n % 2 == 1 {
            return LogComplex::ZERO;
        }
        return LogComplex::new(gaussian(n), 0.0);
    }
    let ln_d = centre.abs().ln();
    let negative = centre < 0.0;
    LogComplex::sum((0..=n).step_by(2).map(|j| {
        let power = n - j;
        let phase = if negative && power % 2 == 1 { PI } else { 0.0 };
        LogComplex::new(ln_binomial(n, j) + power as f64 * ln_d + gaussian(j), phase)
    }))
}

fn trim(mut poly: Poly) -> Poly {
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    poly
}

fn convolve(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut buckets: Vec<Vec<LogComplex>> = vec![Vec::new(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, cb) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            buckets[i + j].push(*ca * *cb);
        }
    }
    buckets.into_iter().map(LogComplex::sum).collect()
}

fn merge(buckets: BTreeMap<i64, Vec<Poly>>) -> BTreeMap<i64, Poly> {
    buckets
        .into_iter()
        .map(|(m, polys)| {
            let len = polys.iter().map(Vec::len).max().unwrap_or(0);
            let summed: Poly = (0..len)
                .map(|n| LogComplex::sum(polys.iter().filter_map(|p| p.get(n).copied())))
                .collect();
            (m, trim(summed))
        })
        .filter(|(_, p)| !p.is_empty())
        .collect()
}

impl PolyGaussWavefunction {
    /// Builds a wavefunction from explicit parts; `components` maps the
    /// lattice index `m` to ascending polynomial coefficients.
    pub fn from_parts(
        inv_var: f64,
        shift_unit: f64,
        components: BTreeMap<i64, Vec<f64>>,
    ) -> Result<Self> {
        if !(inv_var > 0.0) || !inv_var.is_finite() {
            return Err(invalid("inv_var", inv_var, "must be positive"));
        }
        let components = components
            .into_iter()
            .map(|(m, p)| (m, trim(p.into_iter().map(LogComplex::from_real).collect())))
            .filter(|(_, p)| !p.is_empty())
            .collect();
        Ok(PolyGaussWavefunction {
            inv_var,
            shift_unit,
            components,
            log_norm: 0.0,
        })
    }

    /// `π^{-1/4} exp(-x²/2)`.
    pub fn vacuum() -> Self {
        let mut components = BTreeMap::new();
        components.insert(0, vec![LogComplex::new(-0.25 * PI.ln(), 0.0)]);
        PolyGaussWavefunction {
            inv_var: 1.0,
            shift_unit: 0.0,
            components,
            log_norm: 0.0,
        }
    }

    /// Squeezed single photon `√2 / (π^{1/4} s^{3/2}) x exp(-x²/2s²)`.
    pub fn squeezed_fock1(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(invalid("squeezing scale", scale, "must be positive"));
        }
        let lead = 0.5 * 2f64.ln() - 0.25 * PI.ln() - 1.5 * scale.ln();
        let mut components = BTreeMap::new();
        components.insert(0, vec![LogComplex::ZERO, LogComplex::new(lead, 0.0)]);
        Ok(PolyGaussWavefunction {
            inv_var: 1.0 / (scale * scale),
            shift_unit: 0.0,
            components,
            log_norm: 0.0,
        })
    }

    /// Cat wavefunction `N (π^{-1/4} e^{-(x-√2γ)²/2} ± π^{-1/4} e^{-(x+√2γ)²/2})`.
    pub fn cat(c: &CatSpec) -> Self {
        let lead = -0.25 * PI.ln() - 0.5 * c.norm_sq_denominator().ln();
        let mut components = BTreeMap::new();
        let plus = LogComplex::new(lead, 0.0);
        let minus = plus.scale_real(c.parity().sign());
        if c.gamma() == 0.0 {
            components.insert(0, vec![plus.add(minus)]);
        } else {
            components.insert(1, vec![plus]);
            components.insert(-1, vec![minus]);
        }
        PolyGaussWavefunction {
            inv_var: 1.0,
            shift_unit: SQRT_2 * c.gamma(),
            components,
            log_norm: 0.0,
        }
    }

    pub fn inv_var(&self) -> f64 {
        self.inv_var
    }

    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    pub fn shift_unit(&self) -> f64 {
        self.shift_unit
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> usize {
        self.components
            .values()
            .map(|p| p.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Ascending polynomial coefficients of the component at lattice index
    /// `m`, linear scale (including the carried normalization).
    pub fn poly_coeffs(&self, m: i64) -> Vec<f64> {
        self.components
            .get(&m)
            .map(|p| {
                p.iter()
                    .map(|c| c.mul_exp(self.log_norm.into()).re())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Largest |centre| over all components.
    pub fn max_centre(&self) -> f64 {
        self.components
            .keys()
            .map(|&m| (m as f64 * self.shift_unit).abs())
            .fold(0.0, f64::max)
    }

    pub fn log_evaluate(&self, x: f64) -> LogComplex {
        let ln_x = x.abs().ln();
        let x_negative = x < 0.0;
        let a = self.inv_var;
        let mut parts = Vec::new();
        for (&m, poly) in &self.components {
            let d = m as f64 * self.shift_unit;
            let gauss = -0.5 * a * (x - d) * (x - d);
            for (n, c) in poly.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let power = if n == 0 {
                    LogComplex::ONE
                } else if x == 0.0 {
                    LogComplex::ZERO
                } else {
                    let phase = if x_negative && n % 2 == 1 { PI } else { 0.0 };
                    LogComplex::new(n as f64 * ln_x, phase)
                };
                parts.push((*c * power).mul_exp((gauss + self.log_norm).into()));
            }
        }
        LogComplex::sum(parts)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.log_evaluate(x).re()
    }

    /// Terms of `∫ x^extra φ(x) χ(x) dx`, one per component pair and power,
    /// without the carried normalizations.
    fn pair_terms(&self, other: &PolyGaussWavefunction, extra: usize) -> Vec<LogComplex> {
        let (a, b) = (self.inv_var, other.inv_var);
        let width = 0.5 * (a + b);
        let mut parts = Vec::new();
        for (&m1, p1) in &self.components {
            let d1 = m1 as f64 * self.shift_unit;
            for (&m2, p2) in &other.components {
                let d2 = m2 as f64 * other.shift_unit;
                let centre = (a * d1 + b * d2) / (a + b);
                let offset = a * b * (d1 - d2) * (d1 - d2) / (2.0 * (a + b));
                let product = convolve(p1, p2);
                for (n, c) in product.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let moment = shifted_moment(n + extra, width, centre);
                    parts.push((*c * moment).mul_exp((-offset).into()));
                }
            }
        }
        parts
    }

    /// `∫ x^extra φ(x) χ(x) dx` in log form.
    fn pair_integral(&self, other: &PolyGaussWavefunction, extra: usize) -> LogComplex {
        LogComplex::sum(self.pair_terms(other, extra)).mul_exp((self.log_norm + other.log_norm).into())
    }

    /// `ln(Σ|terms| / |∫ φ²|)` for the closed-form norm, i.e. how many e-folds
    /// of precision cancel between components. Closely spaced components
    /// with alternating signs drive this up quickly.
    pub fn ln_cancellation(&self) -> f64 {
        let parts = self.pair_terms(self, 0);
        let top = parts.iter().map(|p| p.log_magnitude).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return 0.0;
        }
        let ln_abs_sum = top + parts.iter().map(|p| (p.log_magnitude - top).exp()).sum::<f64>().ln();
        ln_abs_sum - LogComplex::sum(parts).log_magnitude
    }

    /// `⟨φ|χ⟩` for real wavefunctions, in log form.
    pub fn inner_log(&self, other: &PolyGaussWavefunction) -> LogComplex {
        self.pair_integral(other, 0)
    }

    pub fn inner(&self, other: &PolyGaussWavefunction) -> f64 {
        self.inner_log(other).re()
    }

    /// `ln ∫ φ² dx`.
    pub fn ln_norm_sq(&self) -> f64 {
        self.pair_integral(self, 0).log_magnitude
    }

    /// `∫ x² φ² dx / ∫ φ² dx`.
    pub fn second_moment(&self) -> f64 {
        let num = self.pair_integral(self, 2);
        let den = self.pair_integral(self, 0);
        (num / den).re()
    }

    /// Unit-norm copy together with `ln ∫ φ² dx` of the input.
    pub fn normalized(&self) -> (Self, f64) {
        let ln_norm_sq = self.ln_norm_sq();
        let mut out = self.clone();
        out.log_norm -= 0.5 * ln_norm_sq;
        (out, ln_norm_sq)
    }

    /// `|⟨φ|χ⟩|² / (‖φ‖² ‖χ‖²)`.
    pub fn fidelity_with(&self, other: &PolyGaussWavefunction) -> f64 {
        self.fidelity_given_norm(other, self.ln_norm_sq())
    }

    /// As [`fidelity_with`](Self::fidelity_with) with `ln ‖φ‖²` supplied.
    pub fn fidelity_given_norm(&self, other: &PolyGaussWavefunction, ln_norm_sq: f64) -> f64 {
        let inner = self.inner_log(other);
        (2.0 * inner.log_magnitude - ln_norm_sq - other.ln_norm_sq()).exp()
    }

    /// Drops components whose largest contribution anywhere is more than
    /// `PRUNE_LOG_GAP` below the strongest one.
    fn pruned(mut self) -> Self {
        let a = self.inv_var;
        let u = self.shift_unit;
        let peak = |m: i64, poly: &Poly| {
            let d = (m as f64 * u).abs();
            poly.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(n, c)| {
                    let reach = d + (n as f64 / a).sqrt();
                    c.log_magnitude + if n == 0 { 0.0 } else { n as f64 * reach.ln() }
                })
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let peaks: Vec<(i64, f64)> = self.components.iter().map(|(&m, p)| (m, peak(m, p))).collect();
        let top = peaks.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        for (m, value) in peaks {
            if value < top - PRUNE_LOG_GAP {
                self.components.remove(&m);
            }
        }
        self
    }

    /// `φ(x)²` (no rescaling): exponent doubles, lattice unit halves.
    pub fn squared(&self) -> Self {
        let a = self.inv_var;
        let mut buckets: BTreeMap<i64, Vec<Poly>> = BTreeMap::new();
        for (&m1, p1) in &self.components {
            for (&m2, p2) in &self.components {
                let dd = (m1 - m2) as f64 * self.shift_unit;
                let weight = LogComplex::new(-0.25 * a * dd * dd, 0.0);
                let product: Poly = convolve(p1, p2).into_iter().map(|c| c * weight).collect();
                buckets.entry(m1 + m2).or_default().push(product);
            }
        }
        let components = merge(buckets);
        PolyGaussWavefunction {
            inv_var: 2.0 * a,
            shift_unit: 0.5 * self.shift_unit,
            components,
            log_norm: 2.0 * self.log_norm,
        }
        .pruned()
    }

    /// `φ(x)ⁿ` for `n ≥ 1`, by repeated multiplication with `φ`. The power
    /// `φʲ` has exponent `j·a` and lattice unit `u/j`.
    pub fn powi(&self, n: u32) -> Self {
        assert!(n >= 1, "power must be at least 1");
        let mut acc = self.clone();
        for j in 1..n {
            acc = acc.times_base(self, j as f64);
        }
        acc
    }

    /// `self · base` where `self = baseʲ`.
    fn times_base(&self, base: &PolyGaussWavefunction, j: f64) -> Self {
        let (a1, a2) = (self.inv_var, base.inv_var);
        let unit = base.shift_unit / (j + 1.0);
        let mut buckets: BTreeMap<i64, Vec<Poly>> = BTreeMap::new();
        for (&m1, p1) in &self.components {
            let d1 = m1 as f64 * self.shift_unit;
            for (&m2, p2) in &base.components {
                let d2 = m2 as f64 * base.shift_unit;
                let offset = a1 * a2 * (d1 - d2) * (d1 - d2) / (2.0 * (a1 + a2));
                let weight = LogComplex::new(-offset, 0.0);
                let product: Poly = convolve(p1, p2).into_iter().map(|c| c * weight).collect();
                buckets.entry(m1 + m2).or_default().push(product);
            }
        }
        PolyGaussWavefunction {
            inv_var: a1 + a2,
            shift_unit: unit,
            components: merge(buckets),
            log_norm: self.log_norm + base.log_norm,
        }
        .pruned()
    }

    /// `φ(λx)` for `λ > 0`.
    pub fn rescaled(&self, lambda: f64) -> Self {
        assert!(lambda > 0.0, "rescale factor must be positive");
        let ln_l = lambda.ln();
        let components = self
            .components
            .iter()
            .map(|(&m, p)| {
                let scaled = p
                    .iter()
                    .enumerate()
                    .map(|(n, c)| c.mul_exp((n as f64 * ln_l).into()))
                    .collect();
                (m, scaled)
            })
            .collect();
        PolyGaussWavefunction {
            inv_var: self.inv_var * lambda * lambda,
            shift_unit: self.shift_unit / lambda,
            components,
            log_norm: self.log_norm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_1d;

    fn quad_norm(phi: &PolyGaussWavefunction, r: f64) -> f64 {
        integrate_1d(|x| phi.evaluate(x).powi(2), -r, r, 1e-13).unwrap()
    }

    #[test]
    fn shifted_moment_against_quadrature() {
        for (n, a, d) in [(0, 1.0, 0.0), (3, 0.7, 1.2), (4, 2.0, -0.8), (7, 1.3, 0.4)] {
            let got = shifted_moment(n, a, d).re();
            let want = integrate_1d(|x| x.powi(n as i32) * (-a * (x - d) * (x - d)).exp(), -20.0, 20.0, 1e-13)
                .unwrap();
            assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn constructors_are_normalized() {
        let cases = [
            PolyGaussWavefunction::vacuum(),
            PolyGaussWavefunction::squeezed_fock1(1.0).unwrap(),
            PolyGaussWavefunction::squeezed_fock1(1.6).unwrap(),
            PolyGaussWavefunction::cat(&CatSpec::even(2.0).unwrap()),
            PolyGaussWavefunction::cat(&CatSpec::odd(0.7).unwrap()),
            PolyGaussWavefunction::cat(&CatSpec::even(0.0).unwrap()),
        ];
        for phi in &cases {
            assert!(phi.ln_norm_sq().abs() < 1e-12);
            assert!((quad_norm(phi, 15.0) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn squeezed_photon_second_moment() {
        // ⟨x²⟩ = (3/2) s²; quadrature oracle below.
        for s in [0.8, 1.0, 1.41] {
            let phi = PolyGaussWavefunction::squeezed_fock1(s).unwrap();
            let quad = integrate_1d(|x| x * x * phi.evaluate(x).powi(2), -20.0, 20.0, 1e-13).unwrap();
            assert!((quad - 1.5 * s * s).abs() < 1e-10);
            assert!((phi.second_moment() - 1.5 * s * s).abs() < 1e-12);
            assert_eq!(phi.evaluate(0.0), 0.0);
        }
    }

    #[test]
    fn square_and_rescale_are_pointwise() {
        let phi = PolyGaussWavefunction::cat(&CatSpec::odd(1.1).unwrap());
        let sq = phi.squared().rescaled(0.7);
        for &x in &[-2.0, -0.3, 0.0, 0.9, 2.5] {
            let want = phi.evaluate(0.7 * x).powi(2);
            assert!((sq.evaluate(x) - want).abs() < 1e-13 * want.abs().max(1e-3));
        }
    }

    #[test]
    fn powers_are_pointwise() {
        let phi = PolyGaussWavefunction::cat(&CatSpec::odd(0.8).unwrap());
        for n in [1, 3, 6] {
            let p = phi.powi(n);
            for &x in &[-1.7, -0.2, 0.5, 2.1] {
                let want = phi.evaluate(x).powi(n as i32);
                assert!((p.evaluate(x) - want).abs() < 1e-12 * want.abs() + 1e-15);
            }
        }
        let sq = phi.squared();
        let p2 = phi.powi(2);
        assert!((sq.evaluate(0.9) - p2.evaluate(0.9)).abs() < 1e-15);
    }

    #[test]
    fn odd_cat_vanishes_at_origin() {
        let phi = PolyGaussWavefunction::cat(&CatSpec::odd(1.0).unwrap());
        assert!(phi.evaluate(0.0).abs() < 1e-15);
        assert!((phi.evaluate(1.3) + phi.evaluate(-1.3)).abs() < 1e-15);
    }
}

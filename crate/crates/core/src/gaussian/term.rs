use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::LogComplex;

pub(crate) type CMatrix = DMatrix<Complex64>;
pub(crate) type CVector = DVector<Complex64>;

/// One Gaussian `amplitude · exp(qᵀ A q + bᵀ q)` over a real coordinate
/// vector `q`. Any constant offset in the exponent lives in `amplitude`.
#[derive(Clone, Debug)]
pub struct GaussianTerm {
    pub amplitude: LogComplex,
    pub quad: CMatrix,
    pub lin: CVector,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn select_matrix(m: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

fn select_vector(v: &CVector, idx: &[usize]) -> CVector {
    CVector::from_fn(idx.len(), |i, _| v[idx[i]])
}

/// Bilinear (not sesquilinear) product `uᵀ v`.
fn dot(u: &CVector, v: &CVector) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

impl GaussianTerm {
    pub fn new(amplitude: LogComplex, quad: CMatrix, lin: CVector) -> Self {
        assert_eq!(quad.nrows(), quad.ncols());
        assert_eq!(quad.nrows(), lin.len());
        let sym = (&quad + quad.transpose()) * c(0.5);
        GaussianTerm {
            amplitude,
            quad: sym,
            lin,
        }
    }

    /// Real diagonal quadratic form with real linear coefficients.
    pub fn diagonal(amplitude: f64, diag: &[f64], lin: &[Complex64]) -> Self {
        let n = diag.len();
        let quad = CMatrix::from_fn(n, n, |i, j| if i == j { c(diag[i]) } else { c(0.0) });
        GaussianTerm::new(
            LogComplex::from_real(amplitude),
            quad,
            CVector::from_column_slice(lin),
        )
    }

    /// Constant `amplitude` over `dim` coordinates.
    pub fn constant(amplitude: LogComplex, dim: usize) -> Self {
        GaussianTerm {
            amplitude,
            quad: CMatrix::zeros(dim, dim),
            lin: CVector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.lin.len()
    }

    pub fn exponent_at(&self, q: &[f64]) -> Complex64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &qi) in q.iter().enumerate().take(n) {
            let row: Complex64 = q.iter().enumerate().take(n).map(|(j, &qj)| self.quad[(i, j)] * qj).sum();
            acc += (row + self.lin[i]) * qi;
        }
        acc
    }

    pub fn log_eval(&self, q: &[f64]) -> LogComplex {
        self.amplitude.mul_exp(self.exponent_at(q))
    }

    /// Log of the largest modulus the term reaches on real coordinates,
    /// or `None` when the real part of the quadratic form is not negative
    /// definite (the term does not decay in every direction).
    pub fn peak_log_magnitude(&self) -> Option<f64> {
        if self.amplitude.is_zero() {
            return Some(f64::NEG_INFINITY);
        }
        if self.dim() == 0 {
            return Some(self.amplitude.log_magnitude);
        }
        let neg_re = self.quad.map(|z| -z.re);
        let chol = neg_re.cholesky()?;
        let b_re = self.lin.map(|z| z.re);
        let solved = chol.solve(&b_re);
        Some(self.amplitude.log_magnitude + 0.25 * b_re.dot(&solved))
    }

    pub(crate) fn product(&self, other: &GaussianTerm) -> GaussianTerm {
        GaussianTerm {
            amplitude: self.amplitude * other.amplitude,
            quad: &self.quad + &other.quad,
            lin: &self.lin + &other.lin,
        }
    }

    pub(crate) fn tensor(&self, other: &GaussianTerm) -> GaussianTerm {
        let (n, m) = (self.dim(), other.dim());
        let mut quad = CMatrix::zeros(n + m, n + m);
        quad.view_mut((0, 0), (n, n)).copy_from(&self.quad);
        quad.view_mut((n, n), (m, m)).copy_from(&other.quad);
        let mut lin = CVector::zeros(n + m);
        lin.rows_mut(0, n).copy_from(&self.lin);
        lin.rows_mut(n, m).copy_from(&other.lin);
        GaussianTerm {
            amplitude: self.amplitude * other.amplitude,
            quad,
            lin,
        }
    }

    /// `q ↦ term(M⁻¹ q)` given `M⁻¹`.
    pub(crate) fn pull_back(&self, inverse: &DMatrix<f64>) -> GaussianTerm {
        let inv = inverse.map(c);
        let inv_t = inv.transpose();
        GaussianTerm::new(self.amplitude, &inv_t * &self.quad * &inv, &inv_t * &self.lin)
    }

    /// Substitutes fixed values for `coords`; the result lives on the
    /// remaining coordinates in their original order.
    pub(crate) fn fix(&self, coords: &[usize], values: &[f64], rest: &[usize]) -> GaussianTerm {
        let v = CVector::from_iterator(values.len(), values.iter().map(|&x| c(x)));
        let a_rr = select_matrix(&self.quad, rest, rest);
        let a_rf = select_matrix(&self.quad, rest, coords);
        let a_ff = select_matrix(&self.quad, coords, coords);
        let b_r = select_vector(&self.lin, rest);
        let b_f = select_vector(&self.lin, coords);
        let a_ff_v = &a_ff * &v;
        let constant = dot(&v, &a_ff_v) + dot(&b_f, &v);
        let lin = b_r + (&a_rf * &v) * c(2.0);
        GaussianTerm {
            amplitude: self.amplitude.mul_exp(constant),
            quad: a_rr,
            lin,
        }
    }

    /// Closed-form Gaussian integral over `coords` (each over ℝ).
    ///
    /// With `K = -A_ss`, the integral is `π^{n/2} det(K)^{-1/2}
    /// exp(¼ b_sᵀK⁻¹b_s)` times the Schur-complement Gaussian on the rest.
    /// The square root follows the branch continuous from the real part of
    /// `K`: writing `K = L (I + iS) Lᵀ` with `Re K = L Lᵀ`, every factor
    /// `1 + i s_j` lies in the right half plane and takes its principal root.
    pub(crate) fn integrate(&self, coords: &[usize], rest: &[usize]) -> Option<GaussianTerm> {
        let n = coords.len();
        if n == 0 {
            return Some(self.clone());
        }
        let k = select_matrix(&self.quad, coords, coords).map(|z| -z);
        let k_re = k.map(|z| z.re);
        let k_im = k.map(|z| z.im);
        let chol = k_re.cholesky()?;
        let l = chol.l();
        let l_inv = l.clone().try_inverse()?;
        let s = &l_inv * &k_im * l_inv.transpose();
        let s = (&s + s.transpose()) * 0.5;
        let eig = SymmetricEigen::new(s);

        let mut log_sqrt_det = LogComplex::ONE;
        for i in 0..n {
            log_sqrt_det = log_sqrt_det * LogComplex::from_real(l[(i, i)]);
        }
        for &sj in eig.eigenvalues.iter() {
            log_sqrt_det = log_sqrt_det * LogComplex::from_complex(Complex64::new(1.0, sj).sqrt());
        }

        let k_inv = k.clone().try_inverse()?;
        let b_s = select_vector(&self.lin, coords);
        let k_inv_b = &k_inv * &b_s;
        let exponent = dot(&b_s, &k_inv_b) * c(0.25);
        let prefactor = LogComplex::new(0.5 * n as f64 * PI.ln(), 0.0) / log_sqrt_det;
        let amplitude = (self.amplitude * prefactor).mul_exp(exponent);

        let a_rr = select_matrix(&self.quad, rest, rest);
        let a_rs = select_matrix(&self.quad, rest, coords);
        let b_r = select_vector(&self.lin, rest);
        let quad = a_rr + &a_rs * &k_inv * a_rs.transpose();
        let lin = b_r + &a_rs * k_inv_b;
        Some(GaussianTerm::new(amplitude, quad, lin))
    }

    /// `∫_lo^hi amplitude·exp(A x² + b x) dx` for a one-coordinate term.
    pub(crate) fn boxcar_integral(&self, lo: f64, hi: f64) -> Result<LogComplex> {
        debug_assert_eq!(self.dim(), 1);
        let k = -self.quad[(0, 0)];
        let b = self.lin[0];
        if k.re <= 0.0 {
            if k.norm() == 0.0 && b.norm() == 0.0 {
                return Ok(self.amplitude.scale_real(hi - lo));
            }
            return Err(Error::NonIntegrable { index: 0 });
        }
        Ok(self.amplitude * gaussian_interval_log(k, b, lo, hi))
    }
}

/// `∫_lo^hi exp(-k x² + b x) dx` in log form, for `Re k > 0`.
///
/// With `c = b/2k` and `z = √k (x - c)` the integral is
/// `√π/(2√k) exp(k c²) [erf z_hi - erf z_lo]`. When both limits sit on the
/// same side of the centre the difference is taken between complementary
/// error functions, scaled by the integrand at the nearer limit, so far
/// tails keep full relative accuracy.
pub(crate) fn gaussian_interval_log(k: Complex64, b: Complex64, lo: f64, hi: f64) -> LogComplex {
    use crate::numerics::{erf_complex, erfcx_complex};

    let sqrt_k = k.sqrt();
    let centre = b / (k * 2.0);
    let z_lo = sqrt_k * (c(lo) - centre);
    let z_hi = sqrt_k * (c(hi) - centre);
    let half_sqrt_pi = LogComplex::from_complex(c(0.5 * PI.sqrt()) / sqrt_k);
    let integrand_log = |x: f64| -k * x * x + b * x;

    if z_lo.re >= 0.0 {
        // erfc(z_lo) - erfc(z_hi), factored at the lower limit.
        let ratio = (integrand_log(hi) - integrand_log(lo)).exp();
        let diff = erfcx_complex(z_lo) - ratio * erfcx_complex(z_hi);
        (half_sqrt_pi * LogComplex::from_complex(diff)).mul_exp(integrand_log(lo))
    } else if z_hi.re <= 0.0 {
        // erfc(-z_hi) - erfc(-z_lo), factored at the upper limit.
        let ratio = (integrand_log(lo) - integrand_log(hi)).exp();
        let diff = erfcx_complex(-z_hi) - ratio * erfcx_complex(-z_lo);
        (half_sqrt_pi * LogComplex::from_complex(diff)).mul_exp(integrand_log(hi))
    } else {
        let diff = erf_complex(z_hi) - erf_complex(z_lo);
        (half_sqrt_pi * LogComplex::from_complex(diff)).mul_exp(k * centre * centre)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_1d;

    #[test]
    fn interval_integral_matches_quadrature() {
        let cases = [
            (1.0, 0.0, -0.5, 0.5),
            (0.7, 1.3, -2.0, 0.1),
            (2.0, -3.0, 1.0, 4.0),
            (0.3, 0.9, -6.0, -1.5),
            (1.0, 0.0, 3.0, 3.0001),
        ];
        for (k, b, lo, hi) in cases {
            let got = gaussian_interval_log(c(k), c(b), lo, hi).re();
            let want = integrate_1d(|x| (-k * x * x + b * x).exp(), lo, hi, 1e-14).unwrap();
            assert!(
                (got - want).abs() <= 1e-11 * want.abs().max(1e-300),
                "k={k} b={b} [{lo},{hi}]: {got} vs {want}"
            );
        }
    }

    #[test]
    fn interval_integral_far_tail_is_log_accurate() {
        // ∫_{14}^{15} e^{-x²} dx ≈ e^{-196}/28 for a narrow tail window.
        let v = gaussian_interval_log(c(1.0), c(0.0), 14.0, 15.0);
        let approx = -196.0 - 28.0f64.ln();
        assert!((v.log_magnitude - approx).abs() < 0.01);
        assert!(v.phase.abs() < 1e-12);
    }

    #[test]
    fn complex_interval_integral() {
        let k = Complex64::new(1.0, 0.4);
        let b = Complex64::new(0.2, 1.5);
        let got = gaussian_interval_log(k, b, -0.7, 1.2).to_complex();
        let re = integrate_1d(|x| (-k * x * x + b * x).exp().re, -0.7, 1.2, 1e-14).unwrap();
        let im = integrate_1d(|x| (-k * x * x + b * x).exp().im, -0.7, 1.2, 1e-14).unwrap();
        assert!((got - Complex64::new(re, im)).norm() < 1e-12);
    }

    #[test]
    fn complex_quadratic_branch() {
        // ∫ exp(-(1 + 3i) x²) dx = √(π/(1+3i)) with the principal root.
        let t = GaussianTerm::new(
            LogComplex::ONE,
            CMatrix::from_element(1, 1, Complex64::new(-1.0, -3.0)),
            CVector::zeros(1),
        );
        let out = t.integrate(&[0], &[]).unwrap();
        let want = (Complex64::new(PI, 0.0) / Complex64::new(1.0, 3.0)).sqrt();
        assert!((out.amplitude.to_complex() - want).norm() < 1e-14);
    }
}

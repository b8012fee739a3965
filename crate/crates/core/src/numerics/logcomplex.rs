use std::f64::consts::PI;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex64;

/// A complex number stored as `exp(log_magnitude + i·phase)`.
///
/// Products and quotients never leave log space, so amplitudes far outside
/// the `f64` range (e^±700 and well beyond) stay representable. Zero is
/// `log_magnitude == -inf`.
#[derive(Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_magnitude: f64,
    pub phase: f64,
}

fn wrap_phase(phase: f64) -> f64 {
    if phase > -PI && phase <= PI {
        return phase;
    }
    let wrapped = (phase + PI).rem_euclid(2.0 * PI) - PI;
    if wrapped == -PI {
        PI
    } else {
        wrapped
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_magnitude: 0.0,
        phase: 0.0,
    };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        LogComplex {
            log_magnitude,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x < 0.0 {
            LogComplex::new((-x).ln(), PI)
        } else {
            LogComplex::new(x.ln(), 0.0)
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(z.norm().ln(), z.arg())
    }

    /// `exp(z)` without ever forming the linear value.
    pub fn exp(z: Complex64) -> Self {
        LogComplex::new(z.re, z.im)
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn is_finite(&self) -> bool {
        self.log_magnitude.is_finite() && self.phase.is_finite()
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    pub fn re(self) -> f64 {
        self.to_complex().re
    }

    pub fn abs(self) -> f64 {
        self.log_magnitude.exp()
    }

    pub fn conj(self) -> Self {
        LogComplex::new(self.log_magnitude, -self.phase)
    }

    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return self;
        }
        LogComplex::new(0.5 * self.log_magnitude, 0.5 * self.phase)
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return LogComplex::ONE;
        }
        if self.is_zero() {
            return self;
        }
        LogComplex::new(n as f64 * self.log_magnitude, n as f64 * self.phase)
    }

    /// Multiplies by `exp(z)`.
    pub fn mul_exp(self, z: Complex64) -> Self {
        if self.is_zero() {
            return self;
        }
        LogComplex::new(self.log_magnitude + z.re, self.phase + z.im)
    }

    pub fn scale_real(self, factor: f64) -> Self {
        self * LogComplex::from_real(factor)
    }

    /// Sum computed relative to the larger operand.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: LogComplex) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.log_magnitude >= other.log_magnitude {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = Complex64::from_polar(
            (small.log_magnitude - big.log_magnitude).exp(),
            small.phase - big.phase,
        );
        let rel = Complex64::new(1.0, 0.0) + ratio;
        if rel.re == 0.0 && rel.im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(big.log_magnitude + rel.norm().ln(), big.phase + rel.arg())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: LogComplex) -> Self {
        self.add(-other)
    }

    /// Sum of many values, pivoting on the largest magnitude.
    pub fn sum<I: IntoIterator<Item = LogComplex>>(values: I) -> Self {
        let values: Vec<LogComplex> = values.into_iter().filter(|v| !v.is_zero()).collect();
        let Some(pivot) = values
            .iter()
            .map(|v| v.log_magnitude)
            .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.max(m))))
        else {
            return LogComplex::ZERO;
        };
        if !pivot.is_finite() {
            return values.into_iter().fold(LogComplex::ZERO, |a, b| a.add(b));
        }
        let total: Complex64 = values
            .iter()
            .map(|v| Complex64::from_polar((v.log_magnitude - pivot).exp(), v.phase))
            .sum();
        if total.re == 0.0 && total.im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(pivot + total.norm().ln(), total.arg())
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(
            self.log_magnitude + rhs.log_magnitude,
            self.phase + rhs.phase,
        )
    }
}

impl Div for LogComplex {
    type Output = LogComplex;

    fn div(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(
            self.log_magnitude - rhs.log_magnitude,
            self.phase - rhs.phase,
        )
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;

    fn neg(self) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        LogComplex::new(self.log_magnitude, self.phase + PI)
    }
}

impl Default for LogComplex {
    fn default() -> Self {
        LogComplex::ZERO
    }
}

impl fmt::Debug for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({} + {}i)", self.log_magnitude, self.phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_magnitudes_survive_multiplication() {
        let a = LogComplex::new(600.0, 0.3);
        let b = LogComplex::new(650.0, -0.1);
        let p = a * b;
        assert_eq!(p.log_magnitude, 1250.0);
        assert!((p.phase - 0.2).abs() < 1e-15);
        let q = LogComplex::new(-600.0, 0.0) * LogComplex::new(-650.0, 0.0);
        assert_eq!(q.log_magnitude, -1250.0);
        assert!(!q.is_zero());
    }

    #[test]
    fn addition_matches_linear_arithmetic() {
        let a = Complex64::new(1.5, -2.0);
        let b = Complex64::new(-0.25, 0.75);
        let s = LogComplex::from_complex(a).add(LogComplex::from_complex(b));
        assert!((s.to_complex() - (a + b)).norm() < 1e-14);
        let d = LogComplex::from_complex(a).sub(LogComplex::from_complex(a));
        assert!(d.is_zero() || d.abs() < 1e-15);
    }

    #[test]
    fn sum_of_far_apart_values() {
        let big = LogComplex::new(800.0, 0.0);
        let small = LogComplex::new(790.0, PI);
        let s = LogComplex::sum([big, small]);
        let expected = 800.0 + (1.0 - (-10.0f64).exp()).ln();
        assert!((s.log_magnitude - expected).abs() < 1e-12);
        assert!(s.phase.abs() < 1e-12);
        assert!(LogComplex::sum(std::iter::empty()).is_zero());
    }

    #[test]
    fn negative_reals_round_trip() {
        let v = LogComplex::from_real(-3.0);
        assert!((v.re() + 3.0).abs() < 1e-14);
        assert!((v.powi(2).re() - 9.0).abs() < 1e-13);
        assert!(((-v).re() - 3.0).abs() < 1e-14);
    }
}

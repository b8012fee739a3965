use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};

/// Real linear quadrature transform `q → M q` with its inverse cached.
#[derive(Clone, Debug)]
pub struct SymplecticMap {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl SymplecticMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let inverse = matrix.clone().try_inverse().ok_or(Error::SingularMap)?;
        Ok(SymplecticMap { matrix, inverse })
    }

    pub fn identity(dim: usize) -> Self {
        SymplecticMap {
            matrix: DMatrix::identity(dim, dim),
            inverse: DMatrix::identity(dim, dim),
        }
    }

    /// Beam splitter of transmissivity `t` between modes `i` and `j` out of
    /// `modes`, acting identically on x and p:
    /// `(q_i, q_j) → (√T q_i − √(1−T) q_j, √(1−T) q_i + √T q_j)`.
    pub fn beamsplitter(t: f64, i: usize, j: usize, modes: usize) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(invalid("transmissivity", t, "must lie in (0, 1]"));
        }
        if i >= modes || j >= modes || i == j {
            return Err(Error::CoordinateOutOfRange {
                index: i.max(j),
                dim: modes,
            });
        }
        let (ct, st) = (t.sqrt(), (1.0 - t).sqrt());
        let mut m = DMatrix::identity(2 * modes, 2 * modes);
        for offset in 0..2 {
            let (a, b) = (2 * i + offset, 2 * j + offset);
            m[(a, a)] = ct;
            m[(a, b)] = -st;
            m[(b, a)] = st;
            m[(b, b)] = ct;
        }
        // Orthogonal: the inverse is the transpose.
        let inverse = m.transpose();
        Ok(SymplecticMap { matrix: m, inverse })
    }

    /// Single-mode squeezer rescaling `x → s x`, `p → p / s` on `mode`.
    pub fn squeezer(scale: f64, mode: usize, modes: usize) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(invalid("squeezing scale", scale, "must be positive"));
        }
        if mode >= modes {
            return Err(Error::CoordinateOutOfRange {
                index: mode,
                dim: modes,
            });
        }
        let mut m = DMatrix::identity(2 * modes, 2 * modes);
        let mut inv = DMatrix::identity(2 * modes, 2 * modes);
        m[(2 * mode, 2 * mode)] = scale;
        m[(2 * mode + 1, 2 * mode + 1)] = 1.0 / scale;
        inv[(2 * mode, 2 * mode)] = 1.0 / scale;
        inv[(2 * mode + 1, 2 * mode + 1)] = scale;
        Ok(SymplecticMap {
            matrix: m,
            inverse: inv,
        })
    }

    /// Phase rotation on `mode` taking the quadrature at `angle` onto x:
    /// `x' = x cos θ + p sin θ`, `p' = -x sin θ + p cos θ`.
    pub fn rotation(angle: f64, mode: usize, modes: usize) -> Result<Self> {
        if mode >= modes {
            return Err(Error::CoordinateOutOfRange {
                index: mode,
                dim: modes,
            });
        }
        let (s, c) = angle.sin_cos();
        let mut m = DMatrix::identity(2 * modes, 2 * modes);
        let (x, p) = (2 * mode, 2 * mode + 1);
        m[(x, x)] = c;
        m[(x, p)] = s;
        m[(p, x)] = -s;
        m[(p, p)] = c;
        let inverse = m.transpose();
        Ok(SymplecticMap { matrix: m, inverse })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn inverted(&self) -> SymplecticMap {
        SymplecticMap {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &SymplecticMap) -> Result<SymplecticMap> {
        if self.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: first.dim(),
            });
        }
        Ok(SymplecticMap {
            matrix: &self.matrix * &first.matrix,
            inverse: &first.inverse * &self.inverse,
        })
    }
}

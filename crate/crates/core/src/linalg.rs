//! Small dense square matrices over any [`Scalar`], with an LDLᵀ-based SPD
//! inverse that fails on non-positive pivots.

use std::ops::{Index, IndexMut};

use crate::error::{GeometryError, Result};
use crate::scalar::Scalar;
use crate::tensor::FrameTensor;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S = f64> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == S::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                let mut acc = S::zero();
                for (j, &vj) in v.iter().enumerate() {
                    acc += self[(i, j)] * vj;
                }
                acc
            })
            .collect()
    }

    /// Bilinear form `xᵀ M y`.
    pub fn bilinear(&self, x: &[S], y: &[S]) -> S {
        let my = self.mul_vec(y);
        x.iter().zip(&my).fold(S::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)] + rhs[(i, j)])
    }

    pub fn scale(&self, s: S) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)] * s)
    }

    pub fn values(&self) -> Mat<f64> {
        Mat::from_fn(self.n, |i, j| self[(i, j)].value())
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.value().abs())
            .fold(0.0, |m, v| if v.is_nan() || v > m { v } else { m })
    }

    /// Extract the `len × len` block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, len: usize) -> Self {
        Self::from_fn(len, |i, j| self[(row + i, col + j)])
    }

    /// LDLᵀ factorisation of a symmetric matrix; errors on a non-positive pivot.
    fn ldl(&self) -> Result<(Mat<S>, Vec<S>)> {
        let n = self.n;
        let mut l = Mat::identity(n);
        let mut d = vec![S::zero(); n];
        for j in 0..n {
            let mut dj = self[(j, j)];
            for k in 0..j {
                dj -= l[(j, k)] * l[(j, k)] * d[k];
            }
            let pv = dj.value();
            if !(pv > 0.0) || !pv.is_finite() {
                return Err(GeometryError::NotPositiveDefinite { pivot: j, value: pv });
            }
            d[j] = dj;
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)] * d[k];
                }
                l[(i, j)] = s / dj;
            }
        }
        Ok((l, d))
    }

    /// Inverse of a symmetric positive definite matrix.
    pub fn inverse_spd(&self) -> Result<Self> {
        let n = self.n;
        let (l, d) = self.ldl()?;
        // Solve L D Lᵀ X = I column by column.
        let mut inv = Mat::zeros(n);
        for col in 0..n {
            let mut y = vec![S::zero(); n];
            for i in 0..n {
                let mut s = if i == col { S::one() } else { S::zero() };
                for k in 0..i {
                    s -= l[(i, k)] * y[k];
                }
                y[i] = s;
            }
            for (yi, &di) in y.iter_mut().zip(&d) {
                *yi = *yi / di;
            }
            let mut x = vec![S::zero(); n];
            for i in (0..n).rev() {
                let mut s = y[i];
                for k in (i + 1)..n {
                    s -= l[(k, i)] * x[k];
                }
                x[i] = s;
            }
            // Keep the lower triangle and mirror it so the result is exactly symmetric.
            for i in col..n {
                inv[(i, col)] = x[i];
                inv[(col, i)] = x[i];
            }
        }
        Ok(inv)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.ldl().is_ok()
    }
}

impl Mat<f64> {
    /// Eigenvalues of the symmetric part, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        let m = nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]));
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n + j]
    }
}

impl<S: Scalar> Mat<S> {
    pub fn from_tensor(t: &FrameTensor<S>) -> Result<Self> {
        let (u, l) = t.rank();
        if u + l != 2 {
            return Err(GeometryError::ShapeMismatch(format!(
                "expected a rank-2 tensor, got ({u},{l})"
            )));
        }
        let n = t.dims();
        Ok(Self::from_fn(n, |i, j| t.get(&[i, j])))
    }
}

/// Inverse of a symmetric positive definite `(0,2)` tensor, returned as `(2,0)`.
pub fn invert_spd<S: Scalar>(m: &FrameTensor<S>) -> Result<FrameTensor<S>> {
    if m.rank() != (0, 2) {
        return Err(GeometryError::ShapeMismatch(format!(
            "invert_spd expects a (0,2) tensor, got {:?}",
            m.rank()
        )));
    }
    let inv = Mat::from_tensor(m)?.inverse_spd()?;
    Ok(FrameTensor::from_fn(2, 0, m.dims(), m.frame(), |i| inv[(i[0], i[1])]))
}

pub fn check_positive_definite(m: &FrameTensor<f64>) -> bool {
    Mat::from_tensor(m).map(|m| m.is_positive_definite()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::FrameKind;

    fn diag(v: &[f64]) -> FrameTensor<f64> {
        FrameTensor::from_fn(0, 2, v.len(), FrameKind::Coordinate, |i| {
            if i[0] == i[1] {
                v[i[0]]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn inverse_of_diagonal() {
        let inv = invert_spd(&diag(&[2.0, 1.0])).unwrap();
        assert_eq!(inv.rank(), (2, 0));
        assert_eq!(inv.get(&[0, 0]), 0.5);
        assert_eq!(inv.get(&[1, 1]), 1.0);
        assert_eq!(inv.get(&[0, 1]), 0.0);
    }

    #[test]
    fn identity_inverse() {
        let inv = invert_spd(&diag(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(
            inv,
            FrameTensor::from_fn(2, 0, 3, FrameKind::Coordinate, |i| if i[0] == i[1] { 1.0 } else { 0.0 })
        );
    }

    #[test]
    fn positive_definiteness() {
        assert!(check_positive_definite(&diag(&[1.0, 1.0])));
        assert!(!check_positive_definite(&diag(&[1.0, -1.0])));
        assert!(matches!(
            invert_spd(&diag(&[1.0, -1.0])),
            Err(GeometryError::NotPositiveDefinite { pivot: 1, .. })
        ));
    }

    #[test]
    fn eigenvalues_sorted() {
        let m = Mat::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let ev = m.symmetric_eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }
}

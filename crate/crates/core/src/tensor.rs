//! Dense multi-index component arrays tagged with variance and frame.

use crate::error::{GeometryError, Result};
use crate::scalar::Scalar;

/// Which local frame the components are expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    /// Coordinate frame `∂/∂q^i, ∂/∂p_i` (or `∂/∂x^i` on the base).
    Coordinate,
    /// Adapted frame `δ/δq^i, ∂/∂p_i`.
    Adapted,
}

/// Component array of a tensor of type `(upper, lower)` over `dims` values
/// per index. Components are stored row-major with the upper indices first.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTensor<S = f64> {
    upper: usize,
    lower: usize,
    dims: usize,
    frame: FrameKind,
    data: Vec<S>,
}

impl<S: Scalar> FrameTensor<S> {
    pub fn zeros(upper: usize, lower: usize, dims: usize, frame: FrameKind) -> Self {
        assert!(dims > 0, "tensor dimension must be positive");
        let len = dims.pow((upper + lower) as u32);
        Self {
            upper,
            lower,
            dims,
            frame,
            data: vec![S::zero(); len],
        }
    }

    pub fn from_vec(upper: usize, lower: usize, dims: usize, frame: FrameKind, data: Vec<S>) -> Result<Self> {
        let len = dims.pow((upper + lower) as u32);
        if dims == 0 || data.len() != len {
            return Err(GeometryError::ShapeMismatch(format!(
                "expected {len} components for rank ({upper},{lower}) over {dims} dims, got {}",
                data.len()
            )));
        }
        Ok(Self {
            upper,
            lower,
            dims,
            frame,
            data,
        })
    }

    /// Build by evaluating `f` on every multi-index.
    pub fn from_fn(
        upper: usize,
        lower: usize,
        dims: usize,
        frame: FrameKind,
        mut f: impl FnMut(&[usize]) -> S,
    ) -> Self {
        let mut t = Self::zeros(upper, lower, dims, frame);
        let rank = upper + lower;
        let mut idx = vec![0usize; rank];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            for k in (0..rank).rev() {
                idx[k] += 1;
                if idx[k] < dims {
                    break;
                }
                idx[k] = 0;
            }
        }
        t
    }

    pub fn rank(&self) -> (usize, usize) {
        (self.upper, self.lower)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn frame(&self) -> FrameKind {
        self.frame
    }

    pub fn components(&self) -> &[S] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.upper + self.lower);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dims);
            acc * self.dims + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> S {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: S) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn add_to(&mut self, idx: &[usize], value: S) {
        let o = self.offset(idx);
        self.data[o] += value;
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(GeometryError::FrameMismatch(format!(
                "{:?} vs {:?}",
                self.frame, other.frame
            )));
        }
        if self.rank() != other.rank() || self.dims != other.dims {
            return Err(GeometryError::ShapeMismatch(format!(
                "rank {:?}/{} vs {:?}/{}",
                self.rank(),
                self.dims,
                other.rank(),
                other.dims
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: S) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Primal values of every component.
    pub fn values(&self) -> FrameTensor<f64> {
        FrameTensor {
            upper: self.upper,
            lower: self.lower,
            dims: self.dims,
            frame: self.frame,
            data: self.data.iter().map(Scalar::value).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.value().abs())
            .fold(0.0, |m, v| if v.is_nan() || v > m { v } else { m })
    }

    /// Max-norm of the difference; frames and shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }
}

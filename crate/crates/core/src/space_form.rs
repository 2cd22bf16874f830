//! Constant-curvature base manifolds in the conformal chart
//! `g_ij = δ_ij / (1 + (c/4)|x|²)²`.
//!
//! The same formula covers the sphere (stereographic chart, missing one
//! point), flat space, and the Poincaré ball. Christoffel symbols and the
//! Riemann tensor are derived from the metric by exact differentiation, not
//! from the space-form identity, so the identity can be checked against them.
//!
//! Curvature convention: `R(∂_i, ∂_j)∂_k = R^h_kij ∂_h` with
//! `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`, i.e.
//! `R^h_kij = ∂_iΓ^h_jk − ∂_jΓ^h_ik + Γ^h_il Γ^l_jk − Γ^h_jl Γ^l_ik`.
//! This is the convention under which `[δ/δq^i, δ/δq^j] = p_h R^h_kij ∂/∂p_k`.

use crate::error::{GeometryError, Result};
use crate::jet::ScalarField;
use crate::linalg::Mat;
use crate::scalar::{seed_axis, Scalar};
use crate::tensor::{FrameKind, FrameTensor};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SpaceFormModel {
    n: usize,
    c: f64,
}

impl SpaceFormModel {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(GeometryError::InvalidModel(format!(
                "dimension must be in {MIN_DIM}..={MAX_DIM}, got {n}"
            )));
        }
        if !c.is_finite() {
            return Err(GeometryError::InvalidModel(format!(
                "curvature must be finite, got {c}"
            )));
        }
        Ok(Self { n, c })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn curvature(&self) -> f64 {
        self.c
    }

    /// Bound on the chart radius `|x|`: `2/√|c|` for `c < 0`, `None` otherwise.
    pub fn chart_radius(&self) -> Option<f64> {
        (self.c < 0.0).then(|| 2.0 / (-self.c).sqrt())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.n
            && x.iter().all(|v| v.is_finite())
            && match self.chart_radius() {
                Some(r) => x.iter().map(|v| v * v).sum::<f64>() < r * r,
                None => true,
            }
    }

    fn check_point<S: Scalar>(&self, x: &[S]) -> Result<()> {
        if x.len() != self.n {
            return Err(GeometryError::ShapeMismatch(format!(
                "base point has {} coordinates, model dimension is {}",
                x.len(),
                self.n
            )));
        }
        let primal: Vec<f64> = x.iter().map(Scalar::value).collect();
        if !self.contains(&primal) {
            return Err(GeometryError::DomainViolation(format!(
                "base point {primal:?} lies outside the chart domain for c = {}",
                self.c
            )));
        }
        Ok(())
    }

    /// `1 + (c/4)|x|²`.
    fn lambda<S: Scalar>(&self, x: &[S]) -> S {
        let r2 = x.iter().fold(S::zero(), |acc, &v| acc + v * v);
        r2 * (0.25 * self.c) + 1.0
    }

    /// Conformal factor `λ⁻²` so that `g_ij = λ⁻² δ_ij`.
    pub fn conformal_factor<S: Scalar>(&self, x: &[S]) -> Result<S> {
        self.check_point(x)?;
        S::one().checked_div(self.lambda(x).square())
    }

    pub fn metric<S: Scalar>(&self, x: &[S]) -> Result<FrameTensor<S>> {
        let f = self.conformal_factor(x)?;
        Ok(FrameTensor::from_fn(0, 2, self.n, FrameKind::Coordinate, |i| {
            if i[0] == i[1] {
                f
            } else {
                S::zero()
            }
        }))
    }

    /// `g^kl`, obtained by factorising `g_ij` (not from the closed form).
    pub fn inverse_metric<S: Scalar>(&self, x: &[S]) -> Result<FrameTensor<S>> {
        crate::linalg::invert_spd(&self.metric(x)?)
    }

    /// `Γ^k_ij`, stored as index `[k, i, j]`.
    pub fn christoffel<S: Scalar>(&self, x: &[S]) -> Result<FrameTensor<S>> {
        let n = self.n;
        let g_inv = Mat::from_tensor(&self.inverse_metric(x)?)?;
        // dg[l][(i, j)] = ∂_l g_ij
        let mut dg = Vec::with_capacity(n);
        for l in 0..n {
            let gl = self.metric(&seed_axis(x, l))?;
            dg.push(Mat::from_fn(n, |i, j| gl.get(&[i, j]).eps));
        }
        Ok(FrameTensor::from_fn(1, 2, n, FrameKind::Coordinate, |idx| {
            let (k, i, j) = (idx[0], idx[1], idx[2]);
            let mut acc = S::zero();
            for l in 0..n {
                let gkl = g_inv[(k, l)];
                if gkl == S::zero() {
                    continue;
                }
                acc += gkl * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
            }
            acc * 0.5
        }))
    }

    /// `R^h_kij`, stored as index `[h, k, i, j]`, from Christoffel derivatives.
    pub fn riemann<S: Scalar>(&self, x: &[S]) -> Result<FrameTensor<S>> {
        let n = self.n;
        let gamma = self.christoffel(x)?;
        let mut dgamma = Vec::with_capacity(n);
        for l in 0..n {
            let gl = self.christoffel(&seed_axis(x, l))?;
            dgamma.push(FrameTensor::from_fn(1, 2, n, FrameKind::Coordinate, |i| gl.get(i).eps));
        }
        Ok(FrameTensor::from_fn(1, 3, n, FrameKind::Coordinate, |idx| {
            let (h, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
            let mut acc = dgamma[i].get(&[h, j, k]) - dgamma[j].get(&[h, i, k]);
            for l in 0..n {
                acc += gamma.get(&[h, i, l]) * gamma.get(&[l, j, k]) - gamma.get(&[h, j, l]) * gamma.get(&[l, i, k]);
            }
            acc
        }))
    }

    /// `c(δ^h_i g_jk − δ^h_j g_ik)`, the curvature every space form must have.
    pub fn space_form_riemann<S: Scalar>(&self, x: &[S]) -> Result<FrameTensor<S>> {
        let g = self.metric(x)?;
        let c = self.c;
        Ok(FrameTensor::from_fn(1, 3, self.n, FrameKind::Coordinate, |idx| {
            let (h, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
            let mut v = S::zero();
            if h == i {
                v += g.get(&[j, k]);
            }
            if h == j {
                v -= g.get(&[i, k]);
            }
            v * c
        }))
    }

    pub fn geometry(&self, x: &[f64]) -> Result<BaseGeometry> {
        Ok(BaseGeometry {
            metric: self.metric(x)?,
            inverse_metric: self.inverse_metric(x)?,
            christoffel: self.christoffel(x)?,
            riemann: self.riemann(x)?,
        })
    }
}

/// Base metric data evaluated at one chart point.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseGeometry {
    pub metric: FrameTensor,
    pub inverse_metric: FrameTensor,
    pub christoffel: FrameTensor,
    pub riemann: FrameTensor,
}

/// The chart's conformal factor `λ⁻²` as a scalar field on the base.
pub struct ConformalFactor(pub SpaceFormModel);

impl ScalarField for ConformalFactor {
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<S> {
        self.0.conformal_factor(x)
    }
}

/// Metric-compatibility residual `max |∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il|`.
pub fn metric_compatibility_residual(model: &SpaceFormModel, x: &[f64]) -> Result<f64> {
    let n = model.dim();
    let g = model.metric(x)?;
    let gamma = model.christoffel(x)?;
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let dg = model.metric(&seed_axis(x, k))?;
        for i in 0..n {
            for j in 0..n {
                let mut r = dg.get(&[i, j]).eps;
                for l in 0..n {
                    r -= gamma.get(&[l, k, i]) * g.get(&[l, j]) + gamma.get(&[l, k, j]) * g.get(&[i, l]);
                }
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(worst)
}

/// First Bianchi residual `max |R^h_kij + R^h_ijk + R^h_jki|`.
pub fn bianchi_residual(riemann: &FrameTensor) -> f64 {
    let n = riemann.dims();
    let mut worst: f64 = 0.0;
    for h in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let s = riemann.get(&[h, k, i, j]) + riemann.get(&[h, i, j, k]) + riemann.get(&[h, j, k, i]);
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

//! Points of `T*M`, the energy density, and the adapted frame
//! `E_i = δ/δq^i = ∂/∂q^i + Γ⁰_ih ∂/∂p_h`, `E_{n+i} = ∂/∂p_i`.
//!
//! Total-space coordinates are ordered `z = (q^1..q^n, p_1..p_n)`. Frame
//! indices `0..n` are horizontal and `n..2n` vertical throughout the crate.

use crate::error::{GeometryError, Result};
use crate::jet::ScalarField;
use crate::linalg::Mat;
use crate::scalar::{seed_axis, seed_direction, Dual, Scalar};
use crate::space_form::SpaceFormModel;
use crate::tensor::{FrameKind, FrameTensor};

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CotangentPoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl CotangentPoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Self {
        Self { q, p }
    }

    /// Flattened coordinates `(q, p)`.
    pub fn coords(&self) -> Vec<f64> {
        self.q.iter().chain(&self.p).copied().collect()
    }

    pub fn validate(&self, model: &SpaceFormModel) -> Result<()> {
        if self.q.len() != model.dim() || self.p.len() != model.dim() {
            return Err(GeometryError::ShapeMismatch(format!(
                "point has |q| = {}, |p| = {}, model dimension {}",
                self.q.len(),
                self.p.len(),
                model.dim()
            )));
        }
        if self.p.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::DomainViolation("non-finite momentum".into()));
        }
        if !model.contains(&self.q) {
            return Err(GeometryError::DomainViolation(format!(
                "base point {:?} outside chart domain",
                self.q
            )));
        }
        Ok(())
    }
}

pub(crate) fn split<'a, S: Scalar>(model: &SpaceFormModel, z: &'a [S]) -> Result<(&'a [S], &'a [S])> {
    let n = model.dim();
    if z.len() != 2 * n {
        return Err(GeometryError::ShapeMismatch(format!(
            "total-space point has {} coordinates, expected {}",
            z.len(),
            2 * n
        )));
    }
    Ok(z.split_at(n))
}

/// `t = ½ g^ik(q) p_i p_k`.
pub fn energy_density_at<S: Scalar>(model: &SpaceFormModel, z: &[S]) -> Result<S> {
    let (q, p) = split(model, z)?;
    let g_inv = model.inverse_metric(q)?;
    let n = model.dim();
    let mut t = S::zero();
    for i in 0..n {
        for k in 0..n {
            t += g_inv.get(&[i, k]) * p[i] * p[k];
        }
    }
    Ok(t * 0.5)
}

pub fn energy_density(model: &SpaceFormModel, pt: &CotangentPoint) -> Result<f64> {
    pt.validate(model)?;
    energy_density_at(model, &pt.coords())
}

/// `g^{0k} = p_h g^hk`.
pub fn raised_momentum<S: Scalar>(g_inv: &FrameTensor<S>, p: &[S]) -> Vec<S> {
    let n = p.len();
    (0..n)
        .map(|k| (0..n).fold(S::zero(), |acc, h| acc + p[h] * g_inv.get(&[h, k])))
        .collect()
}

/// `Γ⁰_ih = p_k Γ^k_ih` as an `n × n` matrix.
pub fn momentum_christoffel<S: Scalar>(model: &SpaceFormModel, z: &[S]) -> Result<Mat<S>> {
    let (q, p) = split(model, z)?;
    let gamma = model.christoffel(q)?;
    let n = model.dim();
    Ok(Mat::from_fn(n, |i, h| {
        (0..n).fold(S::zero(), |acc, k| acc + p[k] * gamma.get(&[k, i, h]))
    }))
}

/// Coordinate components of the adapted frame: column `a` is `E_a`.
pub fn frame_matrix<S: Scalar>(model: &SpaceFormModel, z: &[S]) -> Result<Mat<S>> {
    let n = model.dim();
    let g0 = momentum_christoffel(model, z)?;
    let mut f = Mat::identity(2 * n);
    for i in 0..n {
        for h in 0..n {
            f[(n + h, i)] = g0[(i, h)];
        }
    }
    Ok(f)
}

/// The dual coframe `(dq^i, Dp_i = dp_i − Γ⁰_ij dq^j)`: row `a` is the
/// coordinate expression of the `a`-th 1-form. Inverse of [`frame_matrix`].
pub fn coframe_matrix<S: Scalar>(model: &SpaceFormModel, z: &[S]) -> Result<Mat<S>> {
    let n = model.dim();
    let g0 = momentum_christoffel(model, z)?;
    let mut f = Mat::identity(2 * n);
    for i in 0..n {
        for j in 0..n {
            f[(n + i, j)] = -g0[(i, j)];
        }
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedFrame {
    pub frame: Mat<f64>,
    pub coframe: Mat<f64>,
    /// `Γ⁰_ih` as a `(0,2)` tensor on the base.
    pub momentum_christoffel: FrameTensor,
}

pub fn adapted_frame(model: &SpaceFormModel, pt: &CotangentPoint) -> Result<AdaptedFrame> {
    pt.validate(model)?;
    let z = pt.coords();
    let g0 = momentum_christoffel(model, &z)?;
    Ok(AdaptedFrame {
        frame: frame_matrix(model, &z)?,
        coframe: coframe_matrix(model, &z)?,
        momentum_christoffel: FrameTensor::from_fn(0, 2, model.dim(), FrameKind::Coordinate, |i| g0[(i[0], i[1])]),
    })
}

/// `E_a(f)` at `z` for any scalar field on the total space.
pub fn frame_derivative<S: Scalar, F: ScalarField>(
    model: &SpaceFormModel,
    z: &[S],
    field: &F,
    frame_index: usize,
) -> Result<S> {
    let n = model.dim();
    if frame_index >= 2 * n {
        return Err(GeometryError::Precondition(format!(
            "frame index {frame_index} out of range 0..{}",
            2 * n
        )));
    }
    let f = frame_matrix(model, z)?;
    let dir: Vec<S> = (0..2 * n).map(|r| f[(r, frame_index)]).collect();
    Ok(field.eval(&seed_direction(z, &dir))?.eps)
}

/// Evaluate `f` at the dual point `z + ε E_a(z)`; the `eps` parts of the
/// result are the frame derivatives `E_a(·)`.
pub fn along_frame<S: Scalar, T>(
    model: &SpaceFormModel,
    z: &[S],
    frame_index: usize,
    f: impl FnOnce(&[Dual<S>]) -> Result<T>,
) -> Result<T> {
    let n = model.dim();
    if frame_index >= 2 * n {
        return Err(GeometryError::Precondition(format!(
            "frame index {frame_index} out of range 0..{}",
            2 * n
        )));
    }
    let fm = frame_matrix(model, z)?;
    let dir: Vec<S> = (0..2 * n).map(|r| fm[(r, frame_index)]).collect();
    f(&seed_direction(z, &dir))
}

pub fn frame_directional_derivative<F: ScalarField>(
    model: &SpaceFormModel,
    pt: &CotangentPoint,
    field: &F,
    frame_index: usize,
) -> Result<f64> {
    pt.validate(model)?;
    frame_derivative(model, &pt.coords(), field, frame_index)
}

/// A vector field in coordinates together with its coordinate partials
/// `partials[β][α] = ∂_β X^α` at a point.
#[derive(Clone, Debug)]
pub struct VectorFieldJet<S> {
    pub value: Vec<S>,
    pub partials: Vec<Vec<S>>,
}

impl<S: Scalar> VectorFieldJet<S> {
    /// `D_X Y = X^β ∂_β Y`.
    fn derivative_along(&self, x: &[S]) -> Vec<S> {
        let m = self.value.len();
        let mut out = vec![S::zero(); m];
        for (beta, &xb) in x.iter().enumerate() {
            if xb == S::zero() {
                continue;
            }
            for (o, &d) in out.iter_mut().zip(&self.partials[beta]) {
                *o += xb * d;
            }
        }
        out
    }
}

/// `[X, Y]^α = X^β ∂_β Y^α − Y^β ∂_β X^α`.
pub fn lie_bracket<S: Scalar>(x: &VectorFieldJet<S>, y: &VectorFieldJet<S>) -> Vec<S> {
    let a = y.derivative_along(&x.value);
    let b = x.derivative_along(&y.value);
    a.into_iter().zip(b).map(|(u, v)| u - v).collect()
}

/// Split the columns of a matrix-valued field and its coordinate partials into
/// per-column vector-field jets.
pub fn column_jets<S: Scalar>(value: &Mat<S>, partials: &[Mat<Dual<S>>]) -> Vec<VectorFieldJet<S>> {
    let m = value.size();
    (0..m)
        .map(|col| VectorFieldJet {
            value: (0..m).map(|r| value[(r, col)]).collect(),
            partials: partials
                .iter()
                .map(|dm| (0..m).map(|r| dm[(r, col)].eps).collect())
                .collect(),
        })
        .collect()
}

/// The adapted frame fields with their first coordinate partials.
pub fn frame_field_jets<S: Scalar>(model: &SpaceFormModel, z: &[S]) -> Result<Vec<VectorFieldJet<S>>> {
    let f = frame_matrix(model, z)?;
    let partials = (0..z.len())
        .map(|b| frame_matrix(model, &seed_axis(z, b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(column_jets(&f, &partials))
}

/// Express a coordinate vector in the adapted frame.
pub fn to_adapted<S: Scalar>(coframe: &Mat<S>, v: &[S]) -> Vec<S> {
    coframe.mul_vec(v)
}

/// Structure coefficients `[E_a, E_b] = s^c_ab E_c`, computed by differentiating
/// the frame's coordinate components. Stored as `[c, a, b]`.
pub fn structure_coefficients<S: Scalar>(model: &SpaceFormModel, z: &[S]) -> Result<FrameTensor<S>> {
    let m = 2 * model.dim();
    let jets = frame_field_jets(model, z)?;
    let cof = coframe_matrix(model, z)?;
    let mut s = FrameTensor::zeros(1, 2, m, FrameKind::Adapted);
    for a in 0..m {
        for b in (a + 1)..m {
            let br = to_adapted(&cof, &lie_bracket(&jets[a], &jets[b]));
            for (c, &v) in br.iter().enumerate() {
                s.set(&[c, a, b], v);
                s.set(&[c, b, a], -v);
            }
        }
    }
    Ok(s)
}

/// `R⁰_kij = p_h R^h_kij`, stored as `[k, i, j]`.
pub fn momentum_riemann<S: Scalar>(model: &SpaceFormModel, z: &[S]) -> Result<FrameTensor<S>> {
    let (q, p) = split(model, z)?;
    let r = model.riemann(q)?;
    let n = model.dim();
    Ok(FrameTensor::from_fn(0, 3, n, FrameKind::Coordinate, |idx| {
        (0..n).fold(S::zero(), |acc, h| acc + p[h] * r.get(&[h, idx[0], idx[1], idx[2]]))
    }))
}

/// The closed-form brackets of the adapted frame:
/// `[∂p_i, ∂p_j] = 0`, `[∂p_i, δq^j] = Γ^i_jk ∂p_k`, `[δq^i, δq^j] = R⁰_kij ∂p_k`.
pub fn bracket_closed_form<S: Scalar>(model: &SpaceFormModel, z: &[S]) -> Result<FrameTensor<S>> {
    let n = model.dim();
    let (q, _) = split(model, z)?;
    let gamma = model.christoffel(q)?;
    let r0 = momentum_riemann(model, z)?;
    let mut s = FrameTensor::zeros(1, 2, 2 * n, FrameKind::Adapted);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = gamma.get(&[i, j, k]);
                s.set(&[n + k, n + i, j], v);
                s.set(&[n + k, j, n + i], -v);
                s.set(&[n + k, i, j], r0.get(&[k, i, j]));
            }
        }
    }
    Ok(s)
}

/// Max component difference between numerically computed frame brackets and
/// their closed forms.
pub fn bracket_residual(model: &SpaceFormModel, pt: &CotangentPoint) -> Result<f64> {
    pt.validate(model)?;
    let z = pt.coords();
    structure_coefficients(model, &z)?.max_abs_diff(&bracket_closed_form(model, &z)?)
}

/// `max |coframe · frame − I|`.
pub fn coframe_residual(model: &SpaceFormModel, pt: &CotangentPoint) -> Result<f64> {
    let af = adapted_frame(model, pt)?;
    Ok(af.coframe.mul(&af.frame).sub(&Mat::identity(2 * model.dim())).max_abs())
}

/// The energy density as a scalar field on `T*M`.
pub struct EnergyDensity(pub SpaceFormModel);

impl ScalarField for EnergyDensity {
    fn eval<S: Scalar>(&self, z: &[S]) -> Result<S> {
        energy_density_at(&self.0, z)
    }
}

/// The `k`-th total-space coordinate function.
pub struct CoordinateFunction(pub usize);

impl ScalarField for CoordinateFunction {
    fn eval<S: Scalar>(&self, z: &[S]) -> Result<S> {
        z.get(self.0)
            .copied()
            .ok_or_else(|| GeometryError::ShapeMismatch(format!("no coordinate {}", self.0)))
    }
}

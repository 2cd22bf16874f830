//! The diagonal-type lift `(G, J)` to `T*M`:
//!
//! * `G_ij = A g_ij + v p_i p_j`, `H^kl = g^kl / A + w g^{0k} g^{0l}`,
//!   `w = −v / (A(A + 2tv))`;
//! * `G = G_ij dq^i dq^j + H^ij Dp_i Dp_j` (block diagonal in the adapted frame);
//! * `J δ/δq^i = G_ik ∂/∂p_k`, `J ∂/∂p_i = −H^ik δ/δq^k`;
//! * `φ(X, Y) = G(X, JY)`.
//!
//! `v` is a constant. With `v = −c/A` the structure is integrable.

use crate::cotangent::{
    along_frame, coframe_matrix, column_jets, energy_density_at, frame_field_jets, frame_matrix, lie_bracket,
    momentum_riemann, raised_momentum, split, to_adapted, CotangentPoint,
};
use crate::error::{GeometryError, Result};
use crate::linalg::Mat;
use crate::scalar::{seed_axis, Scalar};
use crate::space_form::SpaceFormModel;
use crate::tensor::{FrameKind, FrameTensor};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "v")]
pub enum VMode {
    /// `v = −c/A`, the integrable choice.
    Integrable,
    /// A fixed constant `v`, used to exercise non-integrable structures.
    Override(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LiftParameters {
    a: f64,
    v_mode: VMode,
}

impl LiftParameters {
    pub fn new(a: f64, v_mode: VMode) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(GeometryError::InvalidModel(format!(
                "A must be positive and finite, got {a}"
            )));
        }
        if let VMode::Override(v) = v_mode {
            if !v.is_finite() {
                return Err(GeometryError::InvalidModel(format!("v must be finite, got {v}")));
            }
        }
        Ok(Self { a, v_mode })
    }

    pub fn integrable(a: f64) -> Result<Self> {
        Self::new(a, VMode::Integrable)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn v_mode(&self) -> VMode {
        self.v_mode
    }

    pub fn v(&self, model: &SpaceFormModel) -> f64 {
        match self.v_mode {
            VMode::Integrable => -model.curvature() / self.a,
            VMode::Override(v) => v,
        }
    }

    /// `true` when `A v + c = 0`, i.e. `J` is integrable on this base.
    pub fn is_integrable_for(&self, model: &SpaceFormModel) -> bool {
        match self.v_mode {
            VMode::Integrable => true,
            VMode::Override(v) => self.a * v + model.curvature() == 0.0,
        }
    }

    pub(crate) fn require_integrable(&self, model: &SpaceFormModel) -> Result<()> {
        if self.is_integrable_for(model) {
            Ok(())
        } else {
            Err(GeometryError::Precondition(format!(
                "closed-form curvature requires v = -c/A; got v = {}, c = {}, A = {}",
                self.v(model),
                model.curvature(),
                self.a
            )))
        }
    }
}

/// The blocks of the lifted metric at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedMetric<S = f64> {
    /// `G_ij` (horizontal block).
    pub horizontal: Mat<S>,
    /// `H^kl` (vertical block).
    pub vertical: Mat<S>,
    pub w: S,
    pub t: S,
}

pub fn lifted_metric_at<S: Scalar>(
    model: &SpaceFormModel,
    params: &LiftParameters,
    z: &[S],
) -> Result<LiftedMetric<S>> {
    let (q, p) = split(model, z)?;
    let n = model.dim();
    let a = params.a;
    let v = params.v(model);
    let t = energy_density_at(model, z)?;
    let denom = t * (2.0 * v) + a;
    if !(denom.value() > 0.0) {
        return Err(GeometryError::DomainViolation(format!(
            "A + 2tv = {:e} is not positive (t = {:e}); the lifted metric degenerates",
            denom.value(),
            t.value()
        )));
    }
    let g = model.metric(q)?;
    let g_inv = model.inverse_metric(q)?;
    let g0 = raised_momentum(&g_inv, p);
    let w = -(denom * a).recip() * v;
    let horizontal = Mat::from_fn(n, |i, j| g.get(&[i, j]) * a + p[i] * p[j] * v);
    let vertical = Mat::from_fn(n, |k, l| g_inv.get(&[k, l]) / a + w * (g0[k] * g0[l]));
    Ok(LiftedMetric {
        horizontal,
        vertical,
        w,
        t,
    })
}

pub fn lifted_metric_components(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
) -> Result<LiftedMetric> {
    pt.validate(model)?;
    lifted_metric_at(model, params, &pt.coords())
}

/// `H^ij = g^ij / A + c / (A(A² − 2ct)) g^{0i} g^{0j}`, the integrable-mode
/// inverse written directly in terms of `c`.
pub fn integrable_vertical_block(model: &SpaceFormModel, a: f64, pt: &CotangentPoint) -> Result<Mat<f64>> {
    pt.validate(model)?;
    let z = pt.coords();
    let t = energy_density_at(model, &z)?;
    let c = model.curvature();
    let g_inv = model.inverse_metric(&pt.q)?;
    let g0 = raised_momentum(&g_inv, &pt.p);
    let coeff = c / (a * (a * a - 2.0 * c * t));
    Ok(Mat::from_fn(model.dim(), |i, j| {
        g_inv.get(&[i, j]) / a + coeff * (g0[i] * g0[j])
    }))
}

fn block_diag<S: Scalar>(top: &Mat<S>, bottom: &Mat<S>) -> Mat<S> {
    let n = top.size();
    let mut m = Mat::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = top[(i, j)];
            m[(n + i, n + j)] = bottom[(i, j)];
        }
    }
    m
}

/// `G(E_a, E_b)` in the adapted frame.
pub fn metric_matrix_at<S: Scalar>(model: &SpaceFormModel, params: &LiftParameters, z: &[S]) -> Result<Mat<S>> {
    let lm = lifted_metric_at(model, params, z)?;
    Ok(block_diag(&lm.horizontal, &lm.vertical))
}

pub fn metric_g(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<Mat<f64>> {
    pt.validate(model)?;
    metric_matrix_at(model, params, &pt.coords())
}

/// `J` in the adapted frame: column `a` holds the adapted components of `J E_a`.
pub fn complex_structure_at<S: Scalar>(model: &SpaceFormModel, params: &LiftParameters, z: &[S]) -> Result<Mat<S>> {
    let lm = lifted_metric_at(model, params, z)?;
    let n = model.dim();
    let mut j = Mat::zeros(2 * n);
    for i in 0..n {
        for k in 0..n {
            j[(n + k, i)] = lm.horizontal[(i, k)];
            j[(k, n + i)] = -lm.vertical[(i, k)];
        }
    }
    Ok(j)
}

pub fn almost_complex_j(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<Mat<f64>> {
    pt.validate(model)?;
    complex_structure_at(model, params, &pt.coords())
}

/// `max |J² + I|`.
pub fn j_squared_residual(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<f64> {
    let j = almost_complex_j(model, params, pt)?;
    Ok(j.mul(&j).add(&Mat::identity(j.size())).max_abs())
}

/// `max |G(JX, JY) − G(X, Y)|` over frame pairs, i.e. `max |JᵀGJ − G|`.
pub fn hermitian_residual(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<f64> {
    let g = metric_g(model, params, pt)?;
    let j = almost_complex_j(model, params, pt)?;
    Ok(j.transpose().mul(&g).mul(&j).sub(&g).max_abs())
}

/// `max |G_ij H^jk − δ^k_i|`.
pub fn inverse_block_residual(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<f64> {
    let lm = lifted_metric_components(model, params, pt)?;
    Ok(lm
        .horizontal
        .mul(&lm.vertical)
        .sub(&Mat::identity(model.dim()))
        .max_abs())
}

/// `|w A (A + 2tv) + v|`.
pub fn w_identity_residual(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<f64> {
    let lm = lifted_metric_components(model, params, pt)?;
    let v = params.v(model);
    let a = params.a;
    Ok((lm.w * a * (a + 2.0 * lm.t * v) + v).abs())
}

/// `φ(E_a, E_b) = G(E_a, J E_b)` in the adapted frame.
pub fn fundamental_form_at<S: Scalar>(model: &SpaceFormModel, params: &LiftParameters, z: &[S]) -> Result<Mat<S>> {
    let g = metric_matrix_at(model, params, z)?;
    let j = complex_structure_at(model, params, z)?;
    Ok(g.mul(&j))
}

pub fn fundamental_form(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<Mat<f64>> {
    pt.validate(model)?;
    fundamental_form_at(model, params, &pt.coords())
}

/// `φ` in the coordinate coframe `(dq, dp)`: `θᵀ Φ θ` with `θ` the coframe.
pub fn fundamental_form_coordinates_at<S: Scalar>(
    model: &SpaceFormModel,
    params: &LiftParameters,
    z: &[S],
) -> Result<Mat<S>> {
    let phi = fundamental_form_at(model, params, z)?;
    let cof = coframe_matrix(model, z)?;
    Ok(cof.transpose().mul(&phi).mul(&cof))
}

/// The canonical form `dp_i ∧ dq^i` in coordinates `(q, p)`.
pub fn canonical_symplectic(n: usize) -> Mat<f64> {
    let mut m = Mat::zeros(2 * n);
    for i in 0..n {
        m[(n + i, i)] = 1.0;
        m[(i, n + i)] = -1.0;
    }
    m
}

/// Diagnostics for the fundamental form at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormResiduals {
    /// `max |φ + φᵀ|`.
    pub antisymmetry: f64,
    /// `max |φ_coord − dp ∧ dq|`.
    pub canonical: f64,
    /// `max |∂_γ φ_αβ|` over coordinates.
    pub coefficient_variation: f64,
    /// `max |(dφ)_αβγ|`.
    pub exterior_derivative: f64,
}

pub fn form_residuals(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<FormResiduals> {
    pt.validate(model)?;
    let z = pt.coords();
    let m = 2 * model.dim();
    let phi = fundamental_form_coordinates_at(model, params, &z)?;
    let antisymmetry = phi.add(&phi.transpose()).max_abs();
    let canonical = phi.sub(&canonical_symplectic(model.dim())).max_abs();
    let dphi: Vec<Mat<f64>> = (0..m)
        .map(|g| {
            fundamental_form_coordinates_at(model, params, &seed_axis(&z, g))
                .map(|d| Mat::from_fn(m, |a, b| d[(a, b)].eps))
        })
        .collect::<Result<_>>()?;
    let coefficient_variation = dphi.iter().map(Mat::max_abs).fold(0.0, f64::max);
    let mut exterior_derivative: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let v = dphi[a][(b, c)] + dphi[b][(c, a)] + dphi[c][(a, b)];
                exterior_derivative = exterior_derivative.max(v.abs());
            }
        }
    }
    Ok(FormResiduals {
        antisymmetry,
        canonical,
        coefficient_variation,
        exterior_derivative,
    })
}

pub fn dphi_residual(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<f64> {
    Ok(form_residuals(model, params, pt)?.exterior_derivative)
}

/// The Nijenhuis tensor from its closed form, stored as `[c, a, b]` with
/// `N(E_a, E_b) = N^c_ab E_c` in the adapted frame:
///
/// * `N(δ_i, δ_j) = −{Av(δ^h_i g_jk − δ^h_j g_ik) + R^h_kij} p_h ∂p_k`
/// * `N(δ_i, ∂p_j) = −H^kl H^jr {Av(δ^h_i g_rl − δ^h_r g_il) + R^h_lir} p_h δ_k`
/// * `N(∂p_i, ∂p_j) = −H^ir H^jl {Av(δ^h_l g_rk − δ^h_r g_lk) + R^h_klr} p_h ∂p_k`
pub fn nijenhuis_closed_form_at<S: Scalar>(
    model: &SpaceFormModel,
    params: &LiftParameters,
    z: &[S],
) -> Result<FrameTensor<S>> {
    let (q, p) = split(model, z)?;
    let n = model.dim();
    let av = params.a * params.v(model);
    let g = model.metric(q)?;
    let r0 = momentum_riemann(model, z)?;
    let lm = lifted_metric_at(model, params, z)?;
    let h = &lm.vertical;
    // B_kij = Av(p_i g_jk − p_j g_ik) + R⁰_kij
    let bracket =
        |k: usize, i: usize, j: usize| (p[i] * g.get(&[j, k]) - p[j] * g.get(&[i, k])) * av + r0.get(&[k, i, j]);

    let mut out = FrameTensor::zeros(1, 2, 2 * n, FrameKind::Adapted);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.set(&[n + k, i, j], -bracket(k, i, j));

                let mut hv = S::zero();
                let mut vv = S::zero();
                for l in 0..n {
                    for r in 0..n {
                        hv += h[(k, l)] * h[(j, r)] * bracket(l, i, r);
                        vv += h[(i, r)] * h[(j, l)] * bracket(k, l, r);
                    }
                }
                out.set(&[k, i, n + j], -hv);
                out.set(&[k, n + j, i], hv);
                out.set(&[n + k, n + i, n + j], -vv);
            }
        }
    }
    Ok(out)
}

pub fn nijenhuis_closed_form(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
) -> Result<FrameTensor> {
    pt.validate(model)?;
    nijenhuis_closed_form_at(model, params, &pt.coords())
}

/// The Nijenhuis tensor `N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]`,
/// evaluated on frame pairs from real commutators of coordinate vector fields.
pub fn nijenhuis_definition_at<S: Scalar>(
    model: &SpaceFormModel,
    params: &LiftParameters,
    z: &[S],
) -> Result<FrameTensor<S>> {
    let m = 2 * model.dim();
    let frame_jets = frame_field_jets(model, z)?;
    // Coordinate components of J E_a are the columns of F·J.
    let fj = frame_matrix(model, z)?.mul(&complex_structure_at(model, params, z)?);
    let fj_partials = (0..m)
        .map(|b| {
            let zb = seed_axis(z, b);
            Ok(frame_matrix(model, &zb)?.mul(&complex_structure_at(model, params, &zb)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let j_jets = column_jets(&fj, &fj_partials);

    let cof = coframe_matrix(model, z)?;
    let j = complex_structure_at(model, params, z)?;
    // J acting on an adapted-frame vector.
    let apply_j = |v: &[S]| j.mul_vec(v);

    let mut out = FrameTensor::zeros(1, 2, m, FrameKind::Adapted);
    for a in 0..m {
        for b in 0..m {
            let t1 = to_adapted(&cof, &lie_bracket(&j_jets[a], &j_jets[b]));
            let t2 = apply_j(&to_adapted(&cof, &lie_bracket(&j_jets[a], &frame_jets[b])));
            let t3 = apply_j(&to_adapted(&cof, &lie_bracket(&frame_jets[a], &j_jets[b])));
            let t4 = to_adapted(&cof, &lie_bracket(&frame_jets[a], &frame_jets[b]));
            for c in 0..m {
                out.set(&[c, a, b], t1[c] - t2[c] - t3[c] - t4[c]);
            }
        }
    }
    Ok(out)
}

pub fn nijenhuis_definition(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
) -> Result<FrameTensor> {
    pt.validate(model)?;
    nijenhuis_definition_at(model, params, &pt.coords())
}

/// The three component families of a Nijenhuis tensor, each stored as
/// `[i, j, k]` over base indices.
#[derive(Clone, Debug, PartialEq)]
pub struct NijenhuisFamilies {
    /// Coefficient of `∂p_k` in `N(δ_i, δ_j)`.
    pub horizontal_horizontal: FrameTensor,
    /// Coefficient of `δ_k` in `N(δ_i, ∂p_j)`.
    pub horizontal_vertical: FrameTensor,
    /// Coefficient of `∂p_k` in `N(∂p_i, ∂p_j)`.
    pub vertical_vertical: FrameTensor,
}

impl NijenhuisFamilies {
    pub fn from_tensor(full: &FrameTensor) -> Self {
        let n = full.dims() / 2;
        let fam = |f: &dyn Fn(usize, usize, usize) -> f64| {
            FrameTensor::from_fn(0, 3, n, FrameKind::Adapted, |i| f(i[0], i[1], i[2]))
        };
        Self {
            horizontal_horizontal: fam(&|i, j, k| full.get(&[n + k, i, j])),
            horizontal_vertical: fam(&|i, j, k| full.get(&[k, i, n + j])),
            vertical_vertical: fam(&|i, j, k| full.get(&[n + k, n + i, n + j])),
        }
    }
}

/// `max |∇̇_i G_jk|` and `max |∇̇_i H^jk|` where
/// `∇̇_i G_jk = δ_i G_jk − Γ^l_ij G_lk − Γ^l_ik G_lj` and
/// `∇̇_i H^jk = δ_i H^jk + Γ^j_il H^lk + Γ^k_il H^lj`.
pub fn horizontal_parallelism_residual(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
) -> Result<f64> {
    pt.validate(model)?;
    let z = pt.coords();
    let n = model.dim();
    let gamma = model.christoffel(&pt.q)?;
    let lm = lifted_metric_at(model, params, &z)?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let d = along_frame(model, &z, i, |zd| lifted_metric_at(model, params, zd))?;
        for j in 0..n {
            for k in 0..n {
                let mut rg = d.horizontal[(j, k)].eps;
                let mut rh = d.vertical[(j, k)].eps;
                for l in 0..n {
                    rg -= gamma.get(&[l, i, j]) * lm.horizontal[(l, k)] + gamma.get(&[l, i, k]) * lm.horizontal[(l, j)];
                    rh += gamma.get(&[j, i, l]) * lm.vertical[(l, k)] + gamma.get(&[k, i, l]) * lm.vertical[(l, j)];
                }
                worst = worst.max(rg.abs()).max(rh.abs());
            }
        }
    }
    Ok(worst)
}

/// `true` iff `c ≤ 0`, or `c > 0` and `‖p‖² < A²/c` (strict).
pub fn tube_check(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> bool {
    if pt.validate(model).is_err() {
        return false;
    }
    let c = model.curvature();
    if c <= 0.0 {
        return true;
    }
    match energy_density_at(model, &pt.coords()) {
        Ok(t) => 2.0 * t < params.a * params.a / c,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize, c: f64) -> SpaceFormModel {
        SpaceFormModel::new(n, c).unwrap()
    }

    fn at_center(n: usize, p: Vec<f64>) -> CotangentPoint {
        CotangentPoint::new(vec![0.0; n], p)
    }

    #[test]
    fn zero_momentum_reduces_to_scaled_base_metric() {
        let m = model(3, -1.0);
        let params = LiftParameters::integrable(2.0).unwrap();
        let pt = CotangentPoint::new(vec![0.3, 0.1, -0.5], vec![0.0; 3]);
        let lm = lifted_metric_components(&m, &params, &pt).unwrap();
        let g = m.metric(&pt.q).unwrap();
        let gi = m.inverse_metric(&pt.q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(lm.horizontal[(i, j)], 2.0 * g.get(&[i, j]));
                assert_eq!(lm.vertical[(i, j)], gi.get(&[i, j]) / 2.0);
            }
        }
    }

    #[test]
    fn hyperbolic_unit_momentum_example() {
        let m = model(2, -1.0);
        let params = LiftParameters::integrable(1.0).unwrap();
        let pt = at_center(2, vec![1.0, 0.0]);
        assert_eq!(params.v(&m), 1.0);
        let lm = lifted_metric_components(&m, &params, &pt).unwrap();
        assert_eq!(lm.t, 0.5);
        // w = -v/(A(A+2tv)) = -1/2; this is what makes H^11 = 1 + w = 1/2.
        assert_eq!(lm.w, -0.5);
        assert_eq!(lm.horizontal, Mat::from_fn(2, |i, j| [[2.0, 0.0], [0.0, 1.0]][i][j]));
        let expected_h = Mat::from_fn(2, |i, j| [[0.5, 0.0], [0.0, 1.0]][i][j]);
        assert!(lm.vertical.sub(&expected_h).max_abs() < 1e-15);
        // Oracle: factorised inverse of G_ij.
        let inv = lm.horizontal.inverse_spd().unwrap();
        assert!(inv.sub(&lm.vertical).max_abs() < 1e-15);
        let closed = integrable_vertical_block(&m, 1.0, &pt).unwrap();
        assert!(closed.sub(&lm.vertical).max_abs() < 1e-15);

        let g = metric_g(&m, &params, &pt).unwrap();
        for (k, d) in [2.0, 1.0, 0.5, 1.0].iter().enumerate() {
            assert!((g[(k, k)] - d).abs() < 1e-15);
        }
    }

    #[test]
    fn tube_boundary_is_domain_violation() {
        let m = model(2, 1.0);
        let params = LiftParameters::integrable(1.0).unwrap();
        // t just inside and at the boundary A²/(2c) = 0.5
        let inside = at_center(2, vec![(2.0f64 * 0.499).sqrt(), 0.0]);
        assert!(lifted_metric_components(&m, &params, &inside).is_ok());
        let boundary = at_center(2, vec![1.0, 0.0]);
        assert!(matches!(
            lifted_metric_components(&m, &params, &boundary),
            Err(GeometryError::DomainViolation(_))
        ));
    }

    #[test]
    fn flat_metric_and_standard_rotation() {
        let m = model(2, 0.0);
        let params = LiftParameters::integrable(1.5).unwrap();
        let pt = CotangentPoint::new(vec![0.7, -3.0], vec![2.0, 1.0]);
        let g = metric_g(&m, &params, &pt).unwrap();
        let expect = [1.5, 1.5, 1.0 / 1.5, 1.0 / 1.5];
        for a in 0..4 {
            for b in 0..4 {
                let e = if a == b { expect[a] } else { 0.0 };
                assert!((g[(a, b)] - e).abs() < 1e-15);
            }
        }
        let unit = LiftParameters::integrable(1.0).unwrap();
        let j = almost_complex_j(&m, &unit, &pt).unwrap();
        assert_eq!(
            j,
            Mat::from_fn(4, |r, c| {
                if r >= 2 && c == r - 2 {
                    1.0
                } else if r < 2 && c == r + 2 {
                    -1.0
                } else {
                    0.0
                }
            })
        );
    }

    #[test]
    fn fundamental_form_pairings() {
        let m = model(3, -1.0);
        let params = LiftParameters::integrable(1.3).unwrap();
        let pt = CotangentPoint::new(vec![0.3, -0.4, 0.2], vec![1.5, 0.5, -2.0]);
        let phi = fundamental_form(&m, &params, &pt).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((phi[(3 + i, j)] - d).abs() < 1e-12);
                assert!(phi[(i, j)].abs() < 1e-12);
                assert!(phi[(3 + i, 3 + j)].abs() < 1e-12);
            }
        }
        let r = form_residuals(&m, &params, &pt).unwrap();
        assert!(r.antisymmetry < 1e-12);
        assert!(r.canonical < 1e-12);
        assert!(r.coefficient_variation < 1e-10);
        assert!(r.exterior_derivative < 1e-10);
    }

    #[test]
    fn override_flat_nijenhuis_example() {
        let m = model(2, 0.0);
        let a = 1.7;
        let params = LiftParameters::new(a, VMode::Override(1.0)).unwrap();
        let pt = at_center(2, vec![1.0, 0.0]);
        let n = nijenhuis_closed_form(&m, &params, &pt).unwrap();
        // N(δq^1, δq^2) along ∂p_2
        assert!((n.get(&[3, 0, 1]) + a).abs() < 1e-14);
        let d = nijenhuis_definition(&m, &params, &pt).unwrap();
        assert!(n.max_abs_diff(&d).unwrap() < 1e-12);
    }

    #[test]
    fn nijenhuis_vanishes_on_zero_section() {
        let m = model(2, 1.0);
        let params = LiftParameters::new(1.0, VMode::Override(3.0)).unwrap();
        let pt = CotangentPoint::new(vec![0.5, 0.2], vec![0.0, 0.0]);
        assert_eq!(nijenhuis_closed_form(&m, &params, &pt).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn flat_integrable_nijenhuis_exactly_zero() {
        let m = model(3, 0.0);
        let params = LiftParameters::integrable(1.0).unwrap();
        let pt = CotangentPoint::new(vec![0.5, 0.2, 1.0], vec![1.0, -2.0, 0.5]);
        assert_eq!(nijenhuis_definition(&m, &params, &pt).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn integrable_definition_vanishes_on_curved_base() {
        for c in [-1.0, 1.0] {
            let m = model(3, c);
            let params = LiftParameters::integrable(1.0).unwrap();
            let pt = CotangentPoint::new(vec![0.5, 0.2, -0.3], vec![0.3, -0.2, 0.25]);
            assert!(nijenhuis_definition(&m, &params, &pt).unwrap().max_abs() < 1e-10);
            assert!(nijenhuis_closed_form(&m, &params, &pt).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn base_connection_preserves_lift_blocks() {
        let m = model(3, -1.0);
        let params = LiftParameters::integrable(1.0).unwrap();
        let pt = CotangentPoint::new(vec![0.5, 0.2, -0.3], vec![1.3, -0.2, 0.25]);
        assert!(horizontal_parallelism_residual(&m, &params, &pt).unwrap() < 1e-10);
    }

    #[test]
    fn tube_membership() {
        let hyp = model(2, -1.0);
        let p1 = LiftParameters::integrable(1.0).unwrap();
        assert!(tube_check(&hyp, &p1, &at_center(2, vec![100.0, 50.0])));
        let sph = model(2, 1.0);
        assert!(tube_check(&sph, &p1, &at_center(2, vec![0.5f64.sqrt(), 0.0])));
        assert!(!tube_check(&sph, &p1, &at_center(2, vec![1.5f64.sqrt(), 0.0])));
        assert!(!tube_check(&sph, &p1, &at_center(2, vec![1.0, 0.0])));
        assert!(tube_check(
            &sph,
            &p1,
            &CotangentPoint::new(vec![4.0, -1.0], vec![0.0, 0.0])
        ));
    }

    #[test]
    fn parameter_validation() {
        assert!(LiftParameters::integrable(0.0).is_err());
        assert!(LiftParameters::integrable(-1.0).is_err());
        assert!(LiftParameters::new(1.0, VMode::Override(f64::INFINITY)).is_err());
    }
}

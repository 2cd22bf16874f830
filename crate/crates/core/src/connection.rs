//! Levi-Civita connection and curvature of the lifted metric `G`.
//!
//! Two routes are kept strictly apart:
//!
//! * the *definition* route ([`koszul_connection_at`], [`curvature_numeric_at`])
//!   uses only `G`'s component functions, frame derivatives, and numerically
//!   differentiated frame brackets;
//! * the *closed-form* route ([`connection_closed_form_at`],
//!   [`curvature_closed_form_at`]) evaluates the `Q`, `P`, `S` tensors and the
//!   six curvature families directly.
//!
//! Layouts (all in the adapted frame, horizontal indices first):
//! `C[c, a, b]`: `∇_{E_a} E_b = C^c_ab E_c`;
//! `K[d, a, b, c]`: `K(E_a, E_b) E_c = K^d_abc E_d`.

use crate::cotangent::{along_frame, momentum_riemann, split, structure_coefficients, CotangentPoint};
use crate::error::{GeometryError, Result};
use crate::kaehler::{complex_structure_at, lifted_metric_at, metric_matrix_at, LiftParameters};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::space_form::SpaceFormModel;
use crate::tensor::{FrameKind, FrameTensor};

/// Connection coefficients in the adapted frame.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedConnection<S = f64> {
    pub coefficients: FrameTensor<S>,
}

impl<S: Scalar> AdaptedConnection<S> {
    pub fn dims(&self) -> usize {
        self.coefficients.dims()
    }

    /// `C^c_ab`.
    pub fn coeff(&self, c: usize, a: usize, b: usize) -> S {
        self.coefficients.get(&[c, a, b])
    }
}

/// Koszul formula on the adapted frame:
/// `2G(∇_a E_b, E_c) = E_a G_bc + E_b G_ac − E_c G_ab + G([E_a,E_b],E_c) − G([E_a,E_c],E_b) − G([E_b,E_c],E_a)`.
pub fn koszul_connection_at<S: Scalar>(
    model: &SpaceFormModel,
    params: &LiftParameters,
    z: &[S],
) -> Result<AdaptedConnection<S>> {
    let m = 2 * model.dim();
    let g = metric_matrix_at(model, params, z)?;
    let g_inv = g.inverse_spd()?;
    let dg: Vec<Mat<S>> = (0..m)
        .map(|a| {
            along_frame(model, z, a, |zd| metric_matrix_at(model, params, zd))
                .map(|d| Mat::from_fn(m, |b, c| d[(b, c)].eps))
        })
        .collect::<Result<_>>()?;
    let s = structure_coefficients(model, z)?;
    // G([E_a, E_b], E_c)
    let gs = |a: usize, b: usize, c: usize| (0..m).fold(S::zero(), |acc, d| acc + s.get(&[d, a, b]) * g[(d, c)]);

    let mut koszul = FrameTensor::zeros(0, 3, m, FrameKind::Adapted);
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let v = dg[a][(b, c)] + dg[b][(a, c)] - dg[c][(a, b)] + gs(a, b, c) - gs(a, c, b) - gs(b, c, a);
                koszul.set(&[a, b, c], v);
            }
        }
    }
    let coefficients = FrameTensor::from_fn(1, 2, m, FrameKind::Adapted, |i| {
        let (d, a, b) = (i[0], i[1], i[2]);
        (0..m).fold(S::zero(), |acc, c| acc + g_inv[(d, c)] * koszul.get(&[a, b, c])) * 0.5
    });
    Ok(AdaptedConnection { coefficients })
}

pub fn koszul_connection(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
) -> Result<AdaptedConnection> {
    pt.validate(model)?;
    koszul_connection_at(model, params, &pt.coords())
}

/// The momentum-dependent connection tensors, over base indices:
/// `q[i, j, h] = Q^{ij}_h`, `p[h, i, j] = P^{hi}_j`, `s[h, i, j] = S_hij`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionBlocks<S = f64> {
    pub q: FrameTensor<S>,
    pub p: FrameTensor<S>,
    pub s: FrameTensor<S>,
}

/// `Q^{ij}_h = ½ G_hk(∂^i H^jk + ∂^j H^ik − ∂^k H^ij)`,
/// `P^{hi}_j = ½ H^hk(∂^i G_jk − H^il R⁰_ljk)`,
/// `S_hij = −½ G_hk ∂^k G_ij + ½ R⁰_hij`, with `∂^i = ∂/∂p_i`.
pub fn connection_blocks_at<S: Scalar>(
    model: &SpaceFormModel,
    params: &LiftParameters,
    z: &[S],
) -> Result<ConnectionBlocks<S>> {
    let n = model.dim();
    let lm = lifted_metric_at(model, params, z)?;
    let (gl, hu) = (&lm.horizontal, &lm.vertical);
    let r0 = momentum_riemann(model, z)?;
    let mut dg = Vec::with_capacity(n);
    let mut dh = Vec::with_capacity(n);
    for i in 0..n {
        let d = along_frame(model, z, n + i, |zd| lifted_metric_at(model, params, zd))?;
        dg.push(Mat::from_fn(n, |j, k| d.horizontal[(j, k)].eps));
        dh.push(Mat::from_fn(n, |j, k| d.vertical[(j, k)].eps));
    }
    let q = FrameTensor::from_fn(0, 3, n, FrameKind::Coordinate, |idx| {
        let (i, j, h) = (idx[0], idx[1], idx[2]);
        (0..n).fold(S::zero(), |acc, k| {
            acc + gl[(h, k)] * (dh[i][(j, k)] + dh[j][(i, k)] - dh[k][(i, j)])
        }) * 0.5
    });
    let p = FrameTensor::from_fn(0, 3, n, FrameKind::Coordinate, |idx| {
        let (h, i, j) = (idx[0], idx[1], idx[2]);
        (0..n).fold(S::zero(), |acc, k| {
            let hr = (0..n).fold(S::zero(), |a2, l| a2 + hu[(i, l)] * r0.get(&[l, j, k]));
            acc + hu[(h, k)] * (dg[i][(j, k)] - hr)
        }) * 0.5
    });
    let s = FrameTensor::from_fn(0, 3, n, FrameKind::Coordinate, |idx| {
        let (h, i, j) = (idx[0], idx[1], idx[2]);
        let gd = (0..n).fold(S::zero(), |acc, k| acc + gl[(h, k)] * dg[k][(i, j)]);
        (r0.get(&[h, i, j]) - gd) * 0.5
    });
    Ok(ConnectionBlocks { q, p, s })
}

/// Assemble the full connection from the base Christoffel symbols and the
/// `Q`, `P`, `S` blocks:
/// `∇_{∂p_i}∂p_j = Q^{ij}_h ∂p_h`, `∇_{δ_i}∂p_j = −Γ^j_ih ∂p_h + P^{hj}_i δ_h`,
/// `∇_{∂p_i}δ_j = P^{hi}_j δ_h`, `∇_{δ_i}δ_j = Γ^h_ij δ_h + S_hij ∂p_h`.
pub fn connection_closed_form_at<S: Scalar>(
    model: &SpaceFormModel,
    params: &LiftParameters,
    z: &[S],
) -> Result<AdaptedConnection<S>> {
    let n = model.dim();
    let (q, _) = split(model, z)?;
    let gamma = model.christoffel(q)?;
    let blocks = connection_blocks_at(model, params, z)?;
    let mut c = FrameTensor::zeros(1, 2, 2 * n, FrameKind::Adapted);
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                c.set(&[n + h, n + i, n + j], blocks.q.get(&[i, j, h]));
                c.set(&[n + h, i, n + j], -gamma.get(&[j, i, h]));
                c.set(&[h, i, n + j], blocks.p.get(&[h, j, i]));
                c.set(&[h, n + i, j], blocks.p.get(&[h, i, j]));
                c.set(&[h, i, j], gamma.get(&[h, i, j]));
                c.set(&[n + h, i, j], blocks.s.get(&[h, i, j]));
            }
        }
    }
    Ok(AdaptedConnection { coefficients: c })
}

pub fn connection_closed_form(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
) -> Result<AdaptedConnection> {
    pt.validate(model)?;
    connection_closed_form_at(model, params, &pt.coords())
}

/// Residuals of the two Levi-Civita axioms for a connection on the frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionAxioms {
    /// `max |C^c_ab − C^c_ba − s^c_ab|`.
    pub torsion: f64,
    /// `max |E_a G_bc − C^d_ab G_dc − C^d_ac G_bd|`.
    pub metricity: f64,
}

pub fn connection_axioms(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
    conn: &AdaptedConnection,
) -> Result<ConnectionAxioms> {
    pt.validate(model)?;
    let z = pt.coords();
    let m = 2 * model.dim();
    let s = structure_coefficients(model, &z)?;
    let g = metric_matrix_at(model, params, &z)?;
    let mut torsion: f64 = 0.0;
    let mut metricity: f64 = 0.0;
    for a in 0..m {
        let dg = along_frame(model, &z, a, |zd| metric_matrix_at(model, params, zd))?;
        for b in 0..m {
            for c in 0..m {
                let t = conn.coeff(c, a, b) - conn.coeff(c, b, a) - s.get(&[c, a, b]);
                torsion = torsion.max(t.abs());
                let mut r = dg[(b, c)].eps;
                for d in 0..m {
                    r -= conn.coeff(d, a, b) * g[(d, c)] + conn.coeff(d, a, c) * g[(b, d)];
                }
                metricity = metricity.max(r.abs());
            }
        }
    }
    Ok(ConnectionAxioms { torsion, metricity })
}

/// Which reading of a simplified connection tensor matches the general form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    /// The simplified form without a momentum factor on the free index.
    Printed,
    /// The simplified form with the free index carried by a momentum factor.
    MomentumCorrected,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FamilyConsistency {
    pub printed_residual: f64,
    pub corrected_residual: f64,
    pub matched: Reading,
}

impl FamilyConsistency {
    fn new(printed_residual: f64, corrected_residual: f64, tol: f64) -> Self {
        let matched = match (printed_residual < tol, corrected_residual < tol) {
            (true, _) if printed_residual <= corrected_residual => Reading::Printed,
            (_, true) => Reading::MomentumCorrected,
            (true, false) => Reading::Printed,
            (false, false) => Reading::Neither,
        };
        Self {
            printed_residual,
            corrected_residual,
            matched,
        }
    }
}

/// Agreement of the simplified integrable-mode tensors with the general forms.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SimplifiedConsistency {
    /// `max |S_hij − (c/A) G_hj p_i|`.
    pub s_residual: f64,
    /// `Q^{ij}_h` against `(c/A) H^ij` and `(c/A) H^ij p_h`.
    pub q: FamilyConsistency,
    /// `P^{hi}_j` against `−(c/A) H^hi` and `−(c/A) H^hi p_j`.
    pub p: FamilyConsistency,
}

pub fn simplified_consistency(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
    tol: f64,
) -> Result<SimplifiedConsistency> {
    params.require_integrable(model)?;
    pt.validate(model)?;
    let z = pt.coords();
    let n = model.dim();
    let k = model.curvature() / params.a();
    let lm = lifted_metric_at(model, params, &z)?;
    let blocks = connection_blocks_at(model, params, &z)?;
    let p = &pt.p;
    let (mut s_res, mut q_pr, mut q_co, mut p_pr, mut p_co) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // S_hij with (h, i, j) = (a, b, c)
                s_res = s_res.max((blocks.s.get(&[a, b, c]) - k * lm.horizontal[(a, c)] * p[b]).abs());
                // Q^{ij}_h with (i, j, h) = (a, b, c)
                let qv = blocks.q.get(&[a, b, c]);
                q_pr = q_pr.max((qv - k * lm.vertical[(a, b)]).abs());
                q_co = q_co.max((qv - k * lm.vertical[(a, b)] * p[c]).abs());
                // P^{hi}_j with (h, i, j) = (a, b, c)
                let pv = blocks.p.get(&[a, b, c]);
                p_pr = p_pr.max((pv + k * lm.vertical[(a, b)]).abs());
                p_co = p_co.max((pv + k * lm.vertical[(a, b)] * p[c]).abs());
            }
        }
    }
    Ok(SimplifiedConsistency {
        s_residual: s_res,
        q: FamilyConsistency::new(q_pr, q_co, tol),
        p: FamilyConsistency::new(p_pr, p_co, tol),
    })
}

/// The six closed-form curvature families (requires `v = −c/A`), with
/// `κ = c/A`:
///
/// * `K(δ_i,δ_j)δ_k = κ(δ^h_i G_jk − δ^h_j G_ik) δ_h`
/// * `K(δ_i,δ_j)∂p_k = κ(δ^k_j G_hi − δ^k_i G_hj) ∂p_h`
/// * `K(∂p_i,∂p_j)δ_k = κ(δ^j_k H^hi − δ^i_k H^hj) δ_h`
/// * `K(∂p_i,∂p_j)∂p_k = κ(δ^i_h H^jk − δ^j_h H^ik) ∂p_h`
/// * `K(∂p_i,δ_j)δ_k = κ δ^i_j G_hk ∂p_h`
/// * `K(∂p_i,δ_j)∂p_k = −κ δ^i_j H^hk δ_h`
pub fn curvature_closed_form_at<S: Scalar>(
    model: &SpaceFormModel,
    params: &LiftParameters,
    z: &[S],
) -> Result<FrameTensor<S>> {
    params.require_integrable(model)?;
    let n = model.dim();
    let kappa = model.curvature() / params.a();
    let lm = lifted_metric_at(model, params, z)?;
    let (gl, hu) = (&lm.horizontal, &lm.vertical);
    let d = |a: usize, b: usize| if a == b { S::one() } else { S::zero() };
    let mut k = FrameTensor::zeros(1, 3, 2 * n, FrameKind::Adapted);
    for h in 0..n {
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    k.set(&[h, i, j, l], (d(h, i) * gl[(j, l)] - d(h, j) * gl[(i, l)]) * kappa);
                    k.set(
                        &[n + h, i, j, n + l],
                        (d(l, j) * gl[(h, i)] - d(l, i) * gl[(h, j)]) * kappa,
                    );
                    k.set(
                        &[h, n + i, n + j, l],
                        (d(j, l) * hu[(h, i)] - d(i, l) * hu[(h, j)]) * kappa,
                    );
                    k.set(
                        &[n + h, n + i, n + j, n + l],
                        (d(i, h) * hu[(j, l)] - d(j, h) * hu[(i, l)]) * kappa,
                    );
                    let mixed_h = d(i, j) * gl[(h, l)] * kappa;
                    k.set(&[n + h, n + i, j, l], mixed_h);
                    k.set(&[n + h, j, n + i, l], -mixed_h);
                    let mixed_v = -(d(i, j) * hu[(h, l)] * kappa);
                    k.set(&[h, n + i, j, n + l], mixed_v);
                    k.set(&[h, j, n + i, n + l], -mixed_v);
                }
            }
        }
    }
    Ok(k)
}

/// Curvature from `K(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z` applied to the
/// Koszul connection, differentiated along the frame.
pub fn curvature_numeric_at(model: &SpaceFormModel, params: &LiftParameters, z: &[f64]) -> Result<FrameTensor> {
    let m = 2 * model.dim();
    let conn = koszul_connection_at(model, params, z)?;
    let s = structure_coefficients(model, z)?;
    let dconn: Vec<FrameTensor> = (0..m)
        .map(|a| {
            along_frame(model, z, a, |zd| koszul_connection_at(model, params, zd))
                .map(|c| FrameTensor::from_fn(1, 2, m, FrameKind::Adapted, |i| c.coefficients.get(i).eps))
        })
        .collect::<Result<_>>()?;
    let c = |x: usize, y: usize, w: usize| conn.coeff(x, y, w);
    Ok(FrameTensor::from_fn(1, 3, m, FrameKind::Adapted, |idx| {
        let (d, a, b, cc) = (idx[0], idx[1], idx[2], idx[3]);
        let mut v = dconn[a].get(&[d, b, cc]) - dconn[b].get(&[d, a, cc]);
        for e in 0..m {
            v += c(e, b, cc) * c(d, a, e) - c(e, a, cc) * c(d, b, e) - s.get(&[e, a, b]) * c(d, e, cc);
        }
        v
    }))
}

pub fn curvature_numeric(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<FrameTensor> {
    pt.validate(model)?;
    curvature_numeric_at(model, params, &pt.coords())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData {
    pub curvature: FrameTensor,
    pub ricci: Mat<f64>,
    /// `tr_G Ric / 2n`; equals the Einstein constant when `Ric ∝ G`.
    pub einstein_factor: f64,
    /// `max |Ric − (cn/A) G|`.
    pub einstein_residual: f64,
}

/// `Ric(Y, Z) = trace(X ↦ K(X, Y)Z)`, i.e. `Ric_bc = K^a_abc`.
pub fn ricci_from(curvature: &FrameTensor) -> Mat<f64> {
    let m = curvature.dims();
    Mat::from_fn(m, |b, c| (0..m).map(|a| curvature.get(&[a, a, b, c])).sum())
}

pub fn curvature_closed_form(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
) -> Result<CurvatureData> {
    pt.validate(model)?;
    let z = pt.coords();
    let curvature = curvature_closed_form_at(model, params, &z)?;
    let g = metric_matrix_at(model, params, &z)?;
    Ok(curvature_data(model, params, curvature, &g))
}

fn curvature_data(
    model: &SpaceFormModel,
    params: &LiftParameters,
    curvature: FrameTensor,
    g: &Mat<f64>,
) -> CurvatureData {
    let m = g.size();
    let ricci = ricci_from(&curvature);
    let expected = model.curvature() * model.dim() as f64 / params.a();
    let einstein_residual = ricci.sub(&g.scale(expected)).max_abs();
    let g_inv = g.inverse_spd().expect("lifted metric is positive definite in-domain");
    let trace: f64 = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .map(|(a, b)| g_inv[(a, b)] * ricci[(a, b)])
        .sum();
    CurvatureData {
        curvature,
        ricci,
        einstein_factor: trace / m as f64,
        einstein_residual,
    }
}

/// Closed-form curvature, Ricci tensor, and the Einstein residual.
pub fn ricci_and_einstein(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
) -> Result<CurvatureData> {
    curvature_closed_form(model, params, pt)
}

/// `max |(∇_a K)^e_bcd|` over all frame slots, using the closed-form
/// curvature and connection.
pub fn covariant_derivative_k(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<f64> {
    params.require_integrable(model)?;
    pt.validate(model)?;
    let z = pt.coords();
    let m = 2 * model.dim();
    let conn = connection_closed_form_at(model, params, &z)?;
    let k = curvature_closed_form_at(model, params, &z)?;
    let c = |x: usize, y: usize, w: usize| conn.coeff(x, y, w);
    let mut worst: f64 = 0.0;
    for a in 0..m {
        let dk = along_frame(model, &z, a, |zd| curvature_closed_form_at(model, params, zd))?;
        for e in 0..m {
            for b in 0..m {
                for cc in 0..m {
                    for d in 0..m {
                        let mut v = dk.get(&[e, b, cc, d]).eps;
                        for f in 0..m {
                            v += k.get(&[f, b, cc, d]) * c(e, a, f)
                                - c(f, a, b) * k.get(&[e, f, cc, d])
                                - c(f, a, cc) * k.get(&[e, b, f, d])
                                - c(f, a, d) * k.get(&[e, b, cc, f]);
                        }
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// `max |(∇_a J)^e_b|` with the Koszul connection.
pub fn covariant_derivative_j(model: &SpaceFormModel, params: &LiftParameters, pt: &CotangentPoint) -> Result<f64> {
    pt.validate(model)?;
    let z = pt.coords();
    let m = 2 * model.dim();
    let conn = koszul_connection_at(model, params, &z)?;
    let j = complex_structure_at(model, params, &z)?;
    let mut worst: f64 = 0.0;
    for a in 0..m {
        let dj = along_frame(model, &z, a, |zd| complex_structure_at(model, params, zd))?;
        for e in 0..m {
            for b in 0..m {
                let mut v = dj[(e, b)].eps;
                for f in 0..m {
                    v += j[(f, b)] * conn.coeff(e, a, f) - conn.coeff(f, a, b) * j[(e, f)];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

/// `H(X) = G(K(X, JX)JX, X) / G(X, X)²` for an adapted-frame vector `X`.
pub fn holomorphic_sectional_curvature(
    model: &SpaceFormModel,
    params: &LiftParameters,
    pt: &CotangentPoint,
    x: &[f64],
) -> Result<f64> {
    pt.validate(model)?;
    let m = 2 * model.dim();
    if x.len() != m {
        return Err(GeometryError::ShapeMismatch(format!(
            "direction has {} components, expected {m}",
            x.len()
        )));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(GeometryError::ZeroVector);
    }
    let z = pt.coords();
    let g = metric_matrix_at(model, params, &z)?;
    let j = complex_structure_at(model, params, &z)?;
    let k = curvature_closed_form_at(model, params, &z)?;
    let jx = j.mul_vec(x);
    let mut kx = vec![0.0; m];
    for (d, slot) in kx.iter_mut().enumerate() {
        for a in 0..m {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..m {
                for c in 0..m {
                    *slot += k.get(&[d, a, b, c]) * x[a] * jx[b] * jx[c];
                }
            }
        }
    }
    let norm2 = g.bilinear(x, x);
    Ok(g.bilinear(&kx, x) / (norm2 * norm2))
}

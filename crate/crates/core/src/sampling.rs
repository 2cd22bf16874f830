//! Deterministic sampling of in-domain points of `T*M`.
//!
//! Point `i` draws from its own ChaCha8 stream (`seed`, stream `i`), so any
//! subset of points can be regenerated or evaluated in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cotangent::CotangentPoint;
use crate::kaehler::LiftParameters;
use crate::space_form::SpaceFormModel;

/// Radius used for `q` when the chart has no bound.
pub const UNBOUNDED_Q_RADIUS: f64 = 2.0;
/// Fraction of the chart radius used for `q` when the chart is bounded.
pub const CHART_FRACTION: f64 = 0.8;
/// Upper bound on `2t` in units of `A²` when the lift has no degeneracy.
pub const UNBOUNDED_MOMENTUM: f64 = 10.0;
/// Fraction of the degeneracy bound `2t < A/(−v)` sampled when `v < 0`.
pub const TUBE_FRACTION: f64 = 0.9;

pub fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform unit vector in `R^n`.
pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn q_radius(model: &SpaceFormModel) -> f64 {
    model.chart_radius().map_or(UNBOUNDED_Q_RADIUS, |r| CHART_FRACTION * r)
}

/// Upper bound on `‖p‖² = 2t` for sampling.
pub fn momentum_bound(model: &SpaceFormModel, params: &LiftParameters) -> f64 {
    let a = params.a();
    let v = params.v(model);
    if v < 0.0 {
        TUBE_FRACTION * a / (-v)
    } else {
        UNBOUNDED_MOMENTUM * a * a
    }
}

/// One point from an already-positioned stream.
pub fn sample_point(rng: &mut impl Rng, model: &SpaceFormModel, params: &LiftParameters) -> CotangentPoint {
    let n = model.dim();
    let dir = unit_vector(rng, n);
    let r = q_radius(model) * rng.random::<f64>().powf(1.0 / n as f64);
    let q: Vec<f64> = dir.iter().map(|d| d * r).collect();

    // g^{ij} = λ² δ^{ij}, so ‖p‖²_g = λ²|p|².
    let lambda = 1.0 + 0.25 * model.curvature() * r * r;
    let norm2 = momentum_bound(model, params) * rng.random::<f64>();
    let pdir = unit_vector(rng, n);
    let p: Vec<f64> = pdir.iter().map(|d| d * norm2.sqrt() / lambda).collect();
    CotangentPoint::new(q, p)
}

pub fn sample_points(model: &SpaceFormModel, params: &LiftParameters, count: usize, seed: u64) -> Vec<CotangentPoint> {
    (0..count)
        .map(|i| sample_point(&mut point_rng(seed, i as u64), model, params))
        .collect()
}

/// A point and a random adapted-frame direction drawn from the same stream.
pub fn sample_point_and_direction(
    model: &SpaceFormModel,
    params: &LiftParameters,
    seed: u64,
    index: u64,
) -> (CotangentPoint, Vec<f64>) {
    let mut rng = point_rng(seed, index);
    let pt = sample_point(&mut rng, model, params);
    let x = unit_vector(&mut rng, 2 * model.dim());
    (pt, x)
}

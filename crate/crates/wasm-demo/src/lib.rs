//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Each export returns a JSON string; the `*_json` functions are the same
//! operations with plain Rust errors so they can be exercised natively.

use kaehler_core::report::{holomorphic_samples, run_verification, to_sci_json, tube_sweep, ModelKind, RunConfig};
use kaehler_core::{LiftParameters, SpaceFormModel};
use wasm_bindgen::prelude::*;

fn model_for(c: f64) -> ModelKind {
    if c > 0.0 {
        ModelKind::Sphere
    } else if c < 0.0 {
        ModelKind::Hyperbolic
    } else {
        ModelKind::Flat
    }
}

pub fn tube_sweep_json(c: f64, a: f64, dim: usize, steps: usize, max_fraction: f64) -> Result<String, String> {
    let model = SpaceFormModel::new(dim, c).map_err(|e| e.to_string())?;
    let lift = LiftParameters::integrable(a).map_err(|e| e.to_string())?;
    let rows = tube_sweep(&model, &lift, steps, max_fraction).map_err(|e| e.to_string())?;
    Ok(to_sci_json(&rows))
}

pub fn holomorphic_json(c: f64, a: f64, dim: usize, samples: usize, seed: u64) -> Result<String, String> {
    let mut cfg = RunConfig::new(model_for(c), c, a, dim);
    cfg.samples = samples;
    cfg.seed = seed;
    let s = holomorphic_samples(&cfg).map_err(|e| e.to_string())?;
    Ok(to_sci_json(&s))
}

/// `v_override` is ignored when NaN, so the page can pass an empty field.
pub fn verify_json(c: f64, a: f64, dim: usize, samples: usize, seed: u64, v_override: f64) -> Result<String, String> {
    let mut cfg = RunConfig::new(model_for(c), c, a, dim);
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.v_override = Some(v_override).filter(|v| !v.is_nan());
    let report = run_verification(&cfg).map_err(|e| e.to_string())?;
    Ok(report.to_json())
}

#[wasm_bindgen]
pub fn sweep_tube(c: f64, a: f64, dim: usize, steps: usize, max_fraction: f64) -> Result<String, JsValue> {
    tube_sweep_json(c, a, dim, steps, max_fraction).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn holcurv(c: f64, a: f64, dim: usize, samples: usize, seed: u32) -> Result<String, JsValue> {
    holomorphic_json(c, a, dim, samples, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verify(c: f64, a: f64, dim: usize, samples: usize, seed: u32, v_override: f64) -> Result<String, JsValue> {
    verify_json(c, a, dim, samples, seed as u64, v_override).map_err(|e| JsValue::from_str(&e))
}

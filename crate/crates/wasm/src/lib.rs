//! Browser bindings for the interactive demo page. Every export returns a
//! JSON string so the page needs no generated TypeScript types.

use pipg_core::demo::run_geometric_demo;
use pipg_core::problem::kkt_condition_bound_from;
use pipg_core::SetDescriptor;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_js<T: Serialize>(v: &T) -> Result<String, JsError> {
    serde_json::to_string(v).map_err(|e| JsError::new(&e.to_string()))
}

fn core_err(e: pipg_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[derive(Serialize)]
struct DemoTrace {
    iterations: usize,
    converged: bool,
    iterates: Vec<[f64; 2]>,
    z_final: [f64; 2],
}

/// Runs the two-constraint demo with fixed steps and returns
/// `{iterations, converged, iterates: [[x, y], ...], z_final}`.
/// At most `max_points` iterates are kept, evenly strided.
#[wasm_bindgen]
pub fn geometric_demo(
    angle_deg: f64,
    precondition: bool,
    max_points: usize,
) -> Result<String, JsError> {
    // A cheap first pass finds the iteration count so the stride keeps the
    // trace within `max_points`.
    let probe = run_geometric_demo(angle_deg, precondition, usize::MAX).map_err(core_err)?;
    let stride = probe.iterations.div_ceil(max_points.max(2)).max(1);
    let r = run_geometric_demo(angle_deg, precondition, stride).map_err(core_err)?;
    to_js(&DemoTrace {
        iterations: r.iterations,
        converged: r.status == pipg_core::solver::Status::Converged,
        iterates: r.iterates.iter().map(|z| [z[0], z[1]]).collect(),
        z_final: [r.z_final[0], r.z_final[1]],
    })
}

/// Projects `point` (JSON array) onto the set described by `set` (JSON
/// descriptor, as in problem files) and returns the projection.
#[wasm_bindgen]
pub fn project(set: &str, point: &str) -> Result<String, JsError> {
    let set: SetDescriptor = serde_json::from_str(set).map_err(|e| JsError::new(&e.to_string()))?;
    let point: Vec<f64> = serde_json::from_str(point).map_err(|e| JsError::new(&e.to_string()))?;
    set.validate().map_err(core_err)?;
    set.check_block_len(point.len()).map_err(core_err)?;
    to_js(&set.project(&point))
}

#[derive(Serialize)]
struct BoundPoint {
    sigma_min: f64,
    original: f64,
    preconditioned: f64,
}

/// KKT condition-number bound against the smallest singular value of `H`,
/// sampled log-uniformly on `[lo, sigma_max]`. The preconditioned column
/// uses singular values all equal to `η = √(λmax·λmin + λmin²)`.
#[wasm_bindgen]
pub fn condition_bound_curve(
    lambda_max: f64,
    lambda_min: f64,
    sigma_max: f64,
    lo: f64,
    samples: usize,
) -> Result<String, JsError> {
    if !(lambda_min > 0.0 && lambda_max >= lambda_min && lo > 0.0 && sigma_max >= lo) {
        return Err(JsError::new(
            "need 0 < λmin ≤ λmax and 0 < lower end ≤ σmax",
        ));
    }
    let eta = (lambda_max * lambda_min + lambda_min * lambda_min).sqrt();
    let pre = kkt_condition_bound_from(lambda_max, lambda_min, eta, eta);
    let n = samples.max(2);
    let ratio = (sigma_max / lo).ln();
    let pts: Vec<BoundPoint> = (0..n)
        .map(|i| {
            let s = lo * (ratio * i as f64 / (n - 1) as f64).exp();
            BoundPoint {
                sigma_min: s,
                original: kkt_condition_bound_from(lambda_max, lambda_min, sigma_max, s),
                preconditioned: pre,
            }
        })
        .collect();
    to_js(&pts)
}

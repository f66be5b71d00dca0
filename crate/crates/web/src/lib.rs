//! Browser bindings. Every export takes and returns JSON text so the page stays framework free.

use num_complex::Complex64;
use rslocal::cusps::enumerate_cusps;
use rslocal::rankin_selberg::{bounds_report, rh_roots};
use rslocal::report::to_json;
use rslocal::rep::RepDescriptor;
use rslocal::{Error, Result};
use wasm_bindgen::prelude::*;

fn descriptor(text: &str) -> Result<RepDescriptor> {
    let rep: RepDescriptor =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("descriptor: {e}")))?;
    rep.validate()?;
    Ok(rep)
}

fn respond(r: Result<String>) -> String {
    r.unwrap_or_else(|e| {
        serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string()
    })
}

/// Zeros of the normalized J* in `t`, with their distance from `|t| = p^{-1/2}`.
#[wasm_bindgen]
pub fn roots(descriptor_json: &str) -> String {
    respond(descriptor(descriptor_json).and_then(|rep| rh_roots(&rep)).map(|r| to_json(&r)))
}

/// `|I*(1/2 + iy)|` against the Lindelof budget for `0 <= y <= y_max`.
#[wasm_bindgen]
pub fn istar_curve(descriptor_json: &str, y_max: f64, points: u32) -> String {
    respond(descriptor(descriptor_json).and_then(|rep| {
        let points = points.clamp(2, 2000);
        let grid: Vec<Complex64> =
            (0..points).map(|j| Complex64::new(0.5, y_max * j as f64 / (points - 1) as f64)).collect();
        bounds_report(&rep, &grid).map(|r| to_json(&r))
    }))
}

/// Cusps of Gamma0(q) with widths.
#[wasm_bindgen]
pub fn cusps(q: u32) -> String {
    respond(if q == 0 || q > 100_000 {
        Err(Error::InvalidInput("q must lie in 1..=100000".into()))
    } else {
        enumerate_cusps(q as u64).map(|c| to_json(&c))
    })
}

//! Browser demo for `lipbound`: bound envelopes in 1-D, enclosure tiles in 2-D and
//! a branch-and-bound trace.
//!
//! The functions in [`views`] are plain Rust returning JSON values and are tested
//! natively; the `#[wasm_bindgen]` exports below only serialize them.

pub mod views;

use wasm_bindgen::prelude::*;

fn to_js(r: Result<serde_json::Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn catalog() -> String {
    views::catalog().to_string()
}

/// Bound curves `f(anchor) + bound(anchor -> x)` across a 1-D interval.
#[wasm_bindgen]
pub fn envelope(function: &str, bx: &str, anchor: f64, samples: usize) -> Result<String, JsValue> {
    to_js(views::envelope(function, bx, anchor, samples))
}

/// Linear and quadratic enclosures on a `2^depth` tiling of a 2-D box.
#[wasm_bindgen]
pub fn tiles(function: &str, bx: &str, depth: usize) -> Result<String, JsValue> {
    to_js(views::tiles(function, bx, depth))
}

#[wasm_bindgen]
pub fn heatmap(function: &str, bx: &str, resolution: usize) -> Result<String, JsValue> {
    to_js(views::heatmap(function, bx, resolution))
}

#[wasm_bindgen]
pub fn minimize_trace(function: &str, bx: &str, tol: f64, budget: usize) -> Result<String, JsValue> {
    to_js(views::minimize_trace(function, bx, tol, budget))
}

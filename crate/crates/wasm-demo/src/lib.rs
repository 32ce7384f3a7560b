//! WebAssembly bindings for the demo page in `www/`. Each export returns a
//! JSON document; errors surface as JavaScript exceptions.

pub mod demo;

use fastsketch::EnsembleKind;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn kind(name: &str) -> Result<EnsembleKind, JsError> {
    name.parse().map_err(|e: fastsketch::Error| JsError::new(&e.to_string()))
}

fn json<T: Serialize>(r: fastsketch::Result<T>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

/// RIP constant against `m`; `ms` lists the row counts to evaluate.
#[wasm_bindgen]
pub fn rip_curve(kind_name: &str, d: usize, k: usize, bucket: usize, ms: Vec<u32>, seed: u64) -> Result<String, JsError> {
    let ms: Vec<usize> = ms.into_iter().map(|m| m as usize).collect();
    json(demo::rip_curve(kind(kind_name)?, d, k, bucket, &ms, seed))
}

#[wasm_bindgen]
pub fn recovery_demo(kind_name: &str, d: usize, m: usize, bucket: usize, k: usize, seed: u64) -> Result<String, JsError> {
    json(demo::recovery_demo(kind(kind_name)?, d, m, bucket, k, seed))
}

#[wasm_bindgen]
pub fn jl_histogram(
    kind_name: &str,
    d: usize,
    m: usize,
    bucket: usize,
    points: usize,
    bins: usize,
    seed: u64,
) -> Result<String, JsError> {
    json(demo::jl_histogram(kind(kind_name)?, d, m, bucket, points, bins, seed))
}

#[wasm_bindgen]
pub fn library_version() -> String {
    fastsketch::VERSION.to_string()
}

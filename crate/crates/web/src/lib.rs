//! Three operations for the static demo page. Each takes and returns JSON
//! strings so the page needs no bindings beyond `wasm-bindgen`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use cdcurv::curvature::{curvature, MetricField};
use cdcurv::diagnostics::similarity::{ray_products, shift_similarity, SimilarityOptions};
use cdcurv::geometry::GridSpec;
use cdcurv::kernels::DiagonalKernel;
use cdcurv::shifts::ShiftTuple;
use cdcurv::wirtinger::WirtingerStencil;

fn kernel(descriptor: &str) -> Result<DiagonalKernel, String> {
    DiagonalKernel::from_json(descriptor).map_err(|e| e.to_string())
}

/// `K^{axis,axis}` of the kernel's line bundle at `count` radii in
/// `[0, r_max]` along `e_axis`.
pub fn curvature_ray(descriptor: &str, axis: usize, r_max: f64, count: usize) -> Result<Value, String> {
    let k = kernel(descriptor)?;
    if axis >= k.m() {
        return Err(format!("axis {axis} out of range for m = {}", k.m()));
    }
    let h = MetricField::kernel_line(&k);
    let stencil = WirtingerStencil::default();
    let grid = GridSpec::radial_linspace(k.m(), axis, r_max, count);
    let points = grid.points().map_err(|e| e.to_string())?;
    let mut radii = Vec::with_capacity(points.len());
    let mut values = Vec::with_capacity(points.len());
    for w in &points {
        let t = curvature(&h, w, &stencil).map_err(|e| e.to_string())?;
        radii.push(w.norm());
        values.push(t.block(axis, axis)[(0, 0)].re);
    }
    Ok(json!({ "kernel": k.descriptor(), "radii": radii, "values": values }))
}

/// Ray products from the origin along `e_1` and the resulting verdict.
pub fn similarity_rays(first: &str, second: &str, max_l: usize) -> Result<Value, String> {
    let (k1, k2) = (kernel(first)?, kernel(second)?);
    let opts = SimilarityOptions { max_l, ..SimilarityOptions::default() };
    let verdict = shift_similarity(&k1, &k2, &opts).map_err(|e| e.to_string())?;
    let products = ray_products(&k1, &k2, 0, max_l).map_err(|e| e.to_string())?;
    Ok(json!({ "products": products, "verdict": verdict }))
}

/// Sorted eigenvalues of the hypercontraction defect of order `level` for
/// the degree-`n` truncation.
pub fn hypercontraction_spectrum(descriptor: &str, n: usize, level: usize) -> Result<Value, String> {
    let k = kernel(descriptor)?;
    let shift = ShiftTuple::build(&k, n).map_err(|e| e.to_string())?;
    let report = shift.hypercontraction_defect(level).map_err(|e| e.to_string())?;
    serde_json::to_value(report).map_err(|e| e.to_string())
}

fn export(result: Result<Value, String>) -> Result<String, JsValue> {
    result.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = curvatureRay)]
pub fn curvature_ray_js(descriptor: &str, axis: usize, r_max: f64, count: usize) -> Result<String, JsValue> {
    export(curvature_ray(descriptor, axis, r_max, count))
}

#[wasm_bindgen(js_name = similarityRays)]
pub fn similarity_rays_js(first: &str, second: &str, max_l: usize) -> Result<String, JsValue> {
    export(similarity_rays(first, second, max_l))
}

#[wasm_bindgen(js_name = hypercontractionSpectrum)]
pub fn hypercontraction_spectrum_js(descriptor: &str, n: usize, level: usize) -> Result<String, JsValue> {
    export(hypercontraction_spectrum(descriptor, n, level))
}

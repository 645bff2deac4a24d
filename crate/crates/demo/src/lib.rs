//! WebAssembly bindings for the static page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string,
//! so the page needs no bindings beyond the generated glue. The `*_json`
//! functions hold the logic and are what the native tests call.

use askey_hankel::commutation::{commutant_report, hilbert_demo};
use askey_hankel::families::{FamilyId, FamilySpec, Param};
use askey_hankel::laurent::{classify_limit, ClassifyOptions, LaurentSeries, DEFAULT_TRUNCATION};
use askey_hankel::numerics::{MpContext, MpFloat, PrecisionContext};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Browsers are slower than native code; 40 digits keeps K = 32 interactive.
const DIGITS: u32 = 40;
const MAX_ORDER: usize = 64;

fn precision() -> PrecisionContext {
    PrecisionContext::software(DIGITS).expect("positive digit count")
}

fn split(text: &str) -> Vec<String> {
    text.split([',', ' ', ';']).map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

/// Commutant of one family at order `k`: the measured dimension, the
/// theorem's prediction and the first entries of each basis sequence.
pub fn commutant_json(family: &str, params: &str, k: usize) -> Result<String, String> {
    if !(2..=MAX_ORDER).contains(&k) {
        return Err(format!("K must lie in 2..={MAX_ORDER}"));
    }
    let id: FamilyId = family.trim().parse().map_err(|e: askey_hankel::Error| e.to_string())?;
    let fam = FamilySpec::parse(id, params).and_then(|s| s.validate()).map_err(|e| e.to_string())?;
    let r = commutant_report(&fam, k, None, &precision()).map_err(|e| e.to_string())?;
    let basis: Vec<Vec<f64>> = r.basis.iter().map(|b| b.values.iter().take(16).copied().collect()).collect();
    Ok(json!({
        "family": fam.spec().to_string(),
        "K": k,
        "measured_dim": r.measured_dim,
        "nullspace_dim": r.nullspace.dim,
        "predicted_dim": r.prediction.dim,
        "clause": r.prediction.clause.label(),
        "agreement": r.agreement,
        "note": r.prediction.note,
        "subspace_angle": r.subspace_angle,
        "smallest_sigma": r.nullspace.smallest_sigma,
        "basis_head": basis,
    })
    .to_string())
}

/// Largest relative residual of the generalized Hilbert sequence against `J_t`.
pub fn hilbert_json(t: &str, grid: usize) -> Result<String, String> {
    if !(4..=MAX_ORDER).contains(&grid) {
        return Err(format!("grid order must lie in 4..={MAX_ORDER}"));
    }
    let d = hilbert_demo(t, grid, grid, &precision()).map_err(|e| e.to_string())?;
    serde_json::to_string(&d).map_err(|e| e.to_string())
}

/// Classifies `z -> infinity` of `delta(z,w)` for `z^2 + p_{-1} z + p_0 + p_1/z + ...`.
pub fn classify_json(p: &str, q: &str, eps: &str, w: &str) -> Result<String, String> {
    let ctx = MpContext::with_decimal_digits(DIGITS);
    let series = |s: &str| LaurentSeries::<MpFloat>::parse(&ctx, &split(s), DEFAULT_TRUNCATION, 1.0);
    let real = |s: &str| s.trim().parse::<Param>().and_then(|v| v.to_real::<MpFloat>(&ctx));
    let run = || -> askey_hankel::Result<_> {
        classify_limit(&series(p)?, &series(q)?, &real(eps)?, &real(w)?, &ClassifyOptions::default())
    };
    let c = run().map_err(|e| e.to_string())?;
    Ok(json!({
        "case": c.case.label(),
        "limit_value": c.limit_value,
        "limit_error": c.limit_error,
        "w_used": c.w_used,
        "decisive_index": c.decisive_index,
        "reliable": c.reliable,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn commutant(family: &str, params: &str, k: usize) -> Result<String, JsValue> {
    commutant_json(family, params, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hilbert(t: &str, grid: usize) -> Result<String, JsValue> {
    hilbert_json(t, grid).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify(p: &str, q: &str, eps: &str, w: &str) -> Result<String, JsValue> {
    classify_json(p, q, eps, w).map_err(|e| JsValue::from_str(&e))
}

/// Family ids with their parameter names, for the page's selector.
#[wasm_bindgen]
pub fn families() -> String {
    let list: Vec<_> = FamilyId::ALL
        .iter()
        .filter(|id| **id != FamilyId::HilbertJt)
        .map(|id| json!({ "id": id.code(), "name": id.name(), "params": id.param_names(), "domain": id.constraint_text() }))
        .collect();
    serde_json::Value::from(list).to_string()
}

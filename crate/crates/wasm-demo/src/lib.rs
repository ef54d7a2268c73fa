//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a JSON string; the `*_json` functions behind them are
//! plain Rust so they can be tested natively.

use haarql::catalog::get_case;
use haarql::haar::{haar_eval, p1_eval, p2_eval};
use haarql::report::converge_study;
use haarql::{solve, SolverConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest level the demo accepts; keeps each call interactive.
pub const MAX_DEMO_LEVEL: u32 = 9;
const CURVE_POINTS: usize = 257;

fn check_level(level: u32) -> Result<(), String> {
    if level > MAX_DEMO_LEVEL {
        Err(format!("level {level} exceeds the demo limit {MAX_DEMO_LEVEL}"))
    } else {
        Ok(())
    }
}

fn samples() -> impl Iterator<Item = f64> {
    (0..CURVE_POINTS).map(|k| k as f64 / (CURVE_POINTS - 1) as f64)
}

pub fn solve_case_json(id: u32, level: u32, iters: usize) -> Result<Value, String> {
    check_level(level)?;
    let case = get_case(id).map_err(|e| e.to_string())?;
    let cfg = SolverConfig::new(level).max_iters(iters.max(1)).tol_outer(1e-13);
    let sol = solve(&case.spec, &cfg).map_err(|e| e.to_string())?;
    let curve =
        samples().map(|x| sol.evaluate(x).map(|y| [x, y])).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let grid: Vec<[f64; 2]> = sol.grid().iter().zip(&sol.y_grid).map(|(&x, &y)| [x, y]).collect();
    let exact = case.exact.as_ref().map(|y| samples().map(|x| [x, y(x)]).collect::<Vec<_>>());
    let published: Vec<[f64; 2]> = case.table.iter().map(|r| [r.x, r.y_h]).collect();
    Ok(json!({
        "id": case.id,
        "name": case.name,
        "formulas": case.formulas,
        "bc": case.spec.bc.to_string(),
        "level": level,
        "published_level": case.published_level,
        "published_iters": case.published_iters,
        "iters_used": sol.iters_used,
        "converged": sol.converged,
        "history": sol.history,
        "curve": curve,
        "grid": grid,
        "exact": exact,
        "published": published,
    }))
}

pub fn convergence_json(id: u32, j_min: u32, j_max: u32) -> Result<Value, String> {
    check_level(j_max)?;
    if j_min > j_max {
        return Err(format!("empty level range {j_min}..{j_max}"));
    }
    let case = get_case(id).map_err(|e| e.to_string())?;
    let exact = case.exact.clone();
    let exact_ref = exact.as_ref().map(|f| f.as_ref() as &(dyn Fn(f64) -> f64 + Sync));
    let rows = converge_study(&case.spec, exact_ref, j_min..=j_max, 30, 1e-13).map_err(|e| e.to_string())?;
    Ok(json!({
        "id": case.id,
        "reference": if case.has_exact() { "closed form" } else { "finer solve" },
        "rows": rows,
    }))
}

pub fn haar_family_json(level: u32, index: usize) -> Result<Value, String> {
    check_level(level)?;
    let size = 1usize << (level + 1);
    if index == 0 || index > size {
        return Err(format!("index {index} outside 1..={size}"));
    }
    // sample h just inside [0, 1) so the last jump is drawn
    let n = 4 * size.max(64);
    let mut h = Vec::with_capacity(n + 1);
    let mut p1 = Vec::with_capacity(n + 1);
    let mut p2 = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let x = k as f64 / n as f64;
        let xh = x.min(1.0 - 1e-12);
        h.push([x, haar_eval(index, xh).map_err(|e| e.to_string())?]);
        p1.push([x, p1_eval(index, x).map_err(|e| e.to_string())?]);
        p2.push([x, p2_eval(index, x).map_err(|e| e.to_string())?]);
    }
    Ok(json!({ "level": level, "index": index, "size": size, "h": h, "p1": p1, "p2": p2 }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

/// Solves catalogue case `id` and returns curves for plotting.
#[wasm_bindgen]
pub fn solve_case(id: u32, level: u32, iters: usize) -> Result<String, JsValue> {
    to_js(solve_case_json(id, level, iters))
}

/// Max grid error per level for catalogue case `id`.
#[wasm_bindgen]
pub fn convergence_study(id: u32, j_min: u32, j_max: u32) -> Result<String, JsValue> {
    to_js(convergence_json(id, j_min, j_max))
}

/// Samples of `h_i`, its first and second primitives.
#[wasm_bindgen]
pub fn haar_family(level: u32, index: usize) -> Result<String, JsValue> {
    to_js(haar_family_json(level, index))
}

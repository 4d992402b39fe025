//! Browser bindings for the demo page.
//!
//! Each exported function takes plain values and returns a JSON string, so the
//! page needs no generated TypeScript types. The `*_json` functions hold the
//! logic and run natively in tests; the `#[wasm_bindgen]` wrappers only convert
//! errors.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use robust_knapsack::bounds::{bound_table, kawase_deterministic, parse_grid, MODULAR_OPTIMUM};
use robust_knapsack::exact::{brute_force_opt, robustness_sweep};
use robust_knapsack::generate::{generate, GeneratorKind, GeneratorSpec};
use robust_knapsack::greedy::{agreedy, mgreedy, Solution};
use robust_knapsack::policy::{execute_policy, make_fit_oracle, start_item_list};
use robust_knapsack::Instance;

/// Largest instance the page will sweep; every subset is enumerated.
pub const MAX_DEMO_ITEMS: usize = 14;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn solution(inst: &Instance, sol: &Solution) -> Value {
    json!({ "items": sol.ids(inst), "value": sol.value, "total_size": sol.total_size })
}

/// The robustness factor on a uniform curvature grid.
pub fn alpha_curve_json(step: f64) -> Result<String, String> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(format!("step {step} must lie in (0, 1]"));
    }
    let table = bound_table(&parse_grid(&format!("0:1:{step}")).map_err(err)?).map_err(err)?;
    Ok(json!({
        "points": table.rows,
        "kawase_deterministic": kawase_deterministic(),
        "modular_optimum": MODULAR_OPTIMUM,
    })
    .to_string())
}

/// Generates an instance and evaluates every algorithm at every breakpoint.
pub fn generate_and_sweep_json(
    kind: &str,
    n: usize,
    size_max: u64,
    seed: u64,
) -> Result<String, String> {
    if n > MAX_DEMO_ITEMS {
        return Err(format!("the demo handles at most {MAX_DEMO_ITEMS} items"));
    }
    let kind: GeneratorKind = kind.parse().map_err(err)?;
    let inst = generate(&GeneratorSpec::new(kind, n, size_max, seed)).map_err(err)?;
    let sweep = robustness_sweep(&inst).map_err(err)?;
    let start: Vec<Value> = start_item_list(&inst)
        .entries
        .iter()
        .map(|e| json!({ "item": inst.id(e.item), "size": inst.size(e.item), "reason": e.reason }))
        .collect();
    let items: Vec<Value> = inst
        .items()
        .iter()
        .enumerate()
        .map(|(i, it)| json!({ "id": it.id, "size": it.size, "value": inst.singleton_value(i) }))
        .collect();
    Ok(json!({
        "instance": inst.to_json(),
        "items": items,
        "start_list": start,
        "rows": sweep.rows,
        "curvature": sweep.curvature,
        "alpha_bound": sweep.alpha_bound,
        "empirical_robustness": sweep.empirical_robustness,
    })
    .to_string())
}

/// Runs the policy against a hidden capacity and reports its attempts next to
/// the known-capacity baselines.
pub fn policy_trace_json(instance_json: &str, gamma: u64) -> Result<String, String> {
    if gamma == 0 {
        return Err("capacity must be at least 1".into());
    }
    let inst = Instance::from_json(instance_json).map_err(err)?;
    if inst.n() > MAX_DEMO_ITEMS {
        return Err(format!("the demo handles at most {MAX_DEMO_ITEMS} items"));
    }
    let trace = execute_policy(&inst, &mut make_fit_oracle(gamma));
    Ok(json!({
        "gamma": gamma,
        "trace": trace.to_json(&inst),
        "opt": solution(&inst, &brute_force_opt(&inst, gamma).map_err(err)?),
        "mgreedy": solution(&inst, &mgreedy(&inst, gamma)),
        "agreedy": solution(&inst, &agreedy(&inst, gamma)),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn alpha_curve(step: f64) -> Result<String, JsValue> {
    alpha_curve_json(step).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn generate_and_sweep(
    kind: &str,
    n: usize,
    size_max: u64,
    seed: u64,
) -> Result<String, JsValue> {
    generate_and_sweep_json(kind, n, size_max, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn policy_trace(instance_json: &str, gamma: u64) -> Result<String, JsValue> {
    policy_trace_json(instance_json, gamma).map_err(|e| JsValue::from_str(&e))
}

//! Browser bindings: generate an arena, solve it with a per-iteration
//! trace, and compare the solver variants against value iteration.
//!
//! Every export returns a JSON string. The plain `*_json` functions do the
//! work and are what the native tests call; the `#[wasm_bindgen]` wrappers
//! only turn errors into JS exceptions.

use esl_core::arena::{self, dualize, Arena};
use esl_core::esl::{self, AlternatingOutcome, SolveOptions};
use esl_core::oracle::value_iteration_en;
use esl_core::potential::{apply, compose, Potential};
use esl_core::{PotentialMode, Weight};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest arena the demo accepts; value iteration and the drawing get
/// slow beyond this.
pub const MAX_VERTICES: usize = 64;

fn parse(text: &str) -> Result<Arena, String> {
    let a = arena::parse(text).map_err(|e| e.to_string())?;
    if a.n() > MAX_VERTICES {
        return Err(format!("at most {MAX_VERTICES} vertices, got {}", a.n()));
    }
    Ok(a)
}

fn weights(xs: &[Weight]) -> Value {
    xs.iter()
        .map(|w| match w.finite() {
            Some(x) => json!(x),
            None => json!(w.to_string()),
        })
        .collect()
}

pub fn generate_json(n: usize, m: usize, w: i64, seed: u64) -> Result<String, String> {
    if n > MAX_VERTICES {
        return Err(format!("at most {MAX_VERTICES} vertices"));
    }
    let a = arena::generate_random(n, m, w, seed).map_err(|e| e.to_string())?;
    Ok(arena::serialize(&a))
}

/// The arena plus, for every iteration `j`, the edge weights of the game
/// `G_j`, the potential `phi_j` and the accumulated potential.
pub fn solve_json(text: &str) -> Result<String, String> {
    let a = parse(text)?;
    let options = SolveOptions { record_potentials: true, ..SolveOptions::default() };
    let report = esl::solve(&a, options).map_err(|e| e.to_string())?;

    let mut total = Potential::zero(a.n(), PotentialMode::Natural);
    let mut iterations = Vec::new();
    for it in &report.per_iteration {
        let game = apply(&a, &total).map_err(|e| e.to_string())?;
        let phi = it.phi.clone().expect("potentials are recorded");
        total = compose(&total, &Potential::sound(phi.clone()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        iterations.push(json!({
            "weights": weights(&game.weights()),
            "phi": weights(&phi),
            "total": weights(total.values()),
            "seeds": it.seeds,
            "newly_infinite": it.newly_infinite,
        }));
    }
    let owners: Vec<String> = a.owners().iter().map(|p| p.to_string()).collect();
    let edges: Vec<Value> = a.edges().iter().map(|e| json!([e.src, e.dst])).collect();
    let strategy_edges: Vec<usize> =
        report.min_strategy.iter().chain(report.max_strategy.iter()).map(|(_, e)| e).collect();
    Ok(json!({
        "owners": owners,
        "edges": edges,
        "weights": weights(&a.weights()),
        "values": weights(report.en_values.as_deref().unwrap_or_default()),
        "iterations": iterations,
        "strategy_edges": strategy_edges,
    })
    .to_string())
}

/// Iteration counts and oracle agreement for the three solver variants.
pub fn compare_json(text: &str) -> Result<String, String> {
    let a = parse(text)?;
    let options = SolveOptions::default();
    let oracle = value_iteration_en(&a);
    let primal = esl::solve(&a, options).map_err(|e| e.to_string())?;
    let values = primal.en_values.clone().expect("exact values without lifting");

    let dual = if a.has_infinite_weight() {
        json!(null)
    } else {
        let d = esl::solve_dual(&dualize(&a), options).map_err(|e| e.to_string())?;
        let negated: Option<Vec<Weight>> = values.iter().map(|v| v.checked_neg().ok()).collect();
        json!({ "iterations": d.iterations, "agrees": d.values == negated })
    };

    let n = a.n();
    let cap = (10 * n * n * a.max_abs_weight() as usize).max(1);
    let alternating = match esl::solve_alternating(&a, cap, options) {
        Ok(AlternatingOutcome::Terminated(r)) => {
            json!({ "terminated": true, "steps": r.steps, "agrees": r.en_values.as_ref() == Some(&values) })
        }
        Ok(AlternatingOutcome::NonTermination { trace }) => json!({ "terminated": false, "steps": trace.len() }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json!({
        "oracle_agrees": values == oracle,
        "esl": { "iterations": primal.iterations },
        "dual": dual,
        "alternating": alternating,
    })
    .to_string())
}

/// `seed` is 32-bit so that JS can pass a plain number.
#[wasm_bindgen]
pub fn generate(n: usize, m: usize, w: i32, seed: u32) -> Result<String, JsValue> {
    generate_json(n, m, w.into(), seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve(text: &str) -> Result<String, JsValue> {
    solve_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn compare(text: &str) -> Result<String, JsValue> {
    compare_json(text).map_err(|e| JsValue::from_str(&e))
}

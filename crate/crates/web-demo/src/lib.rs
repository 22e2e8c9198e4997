//! Browser bindings for the anytime-forest demo page. Three operations,
//! each returning a JSON payload the page renders: accuracy-versus-steps
//! curves over a synthetic dataset, the full order lattice of the built-in
//! example forest, and a single inference traced step by step.
//!
//! The payload builders are plain Rust returning `Result<String, String>`
//! so they run and test on any target; the `wasm_bindgen` exports wrap
//! them for the browser.

use serde::Serialize;

use anyforest::order::OrderKind;
use anyforest::{
    accuracy_curve, nma, precompute_routing, split, state_accuracy, train_forest, Executor,
    LatticeState, TrainConfig,
};

const DEMO_LATTICE_CAP: u64 = 1 << 22;

fn encode<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CurvePayload {
    steps: usize,
    n_classes: usize,
    orders: Vec<OrderCurve>,
}

#[derive(Serialize)]
struct OrderCurve {
    name: String,
    refused: Option<String>,
    curve: Vec<f64>,
    nma: Option<f64>,
}

/// Trains a forest on seeded synthetic blobs (50/25/25 split), generates
/// every order kind on the ordering split and evaluates the accuracy
/// curves on the test split.
pub fn accuracy_curves_json(
    n_samples: usize,
    n_classes: usize,
    n_trees: usize,
    max_depth: usize,
    spread: f64,
    seed: u64,
) -> Result<String, String> {
    if !(2..=6).contains(&n_classes) || !(40..=4000).contains(&n_samples) {
        return Err("need 40..=4000 samples and 2..=6 classes".into());
    }
    let data = anyforest::synth::gaussian_blobs(n_samples, 3, n_classes, spread, seed);
    let splits = split(&data, seed).map_err(|e| e.to_string())?;
    let forest = train_forest(
        &splits.train,
        &TrainConfig::new(n_trees.clamp(1, 12), max_depth.clamp(1, 8), seed),
    )
    .map_err(|e| e.to_string())?;

    let mut orders = Vec::new();
    for kind in OrderKind::ALL {
        match kind.generate(&forest, &splits.ordering, DEMO_LATTICE_CAP, seed) {
            Ok(order) => {
                let curve =
                    accuracy_curve(&forest, &order, &splits.test).map_err(|e| e.to_string())?;
                orders.push(OrderCurve {
                    name: kind.name().to_string(),
                    refused: None,
                    nma: nma(&curve).ok(),
                    curve,
                });
            }
            Err(reason) => orders.push(OrderCurve {
                name: kind.name().to_string(),
                refused: Some(reason.to_string()),
                curve: Vec::new(),
                nma: None,
            }),
        }
    }
    encode(&CurvePayload {
        steps: forest.total_steps(),
        n_classes,
        orders,
    })
}

#[derive(Serialize)]
struct LatticePayload {
    budgets: Vec<usize>,
    states: Vec<LatticeNode>,
    /// step sequences; the page resolves them to state chains
    paths: Vec<LatticePath>,
}

#[derive(Serialize)]
struct LatticeNode {
    counters: Vec<usize>,
    layer: usize,
    correct: usize,
    total: usize,
}

#[derive(Serialize)]
struct LatticePath {
    name: String,
    steps: Vec<usize>,
    mean_accuracy: f64,
}

/// The complete lattice of the built-in example forest: every state with
/// its correct count, plus the exact best order and both greedy walks.
pub fn example_lattice_json() -> Result<String, String> {
    let forest = anyforest::fixture::example_forest();
    let ordering = anyforest::fixture::example_ordering();
    let routing = precompute_routing(&forest, &ordering).map_err(|e| e.to_string())?;
    let labels = ordering.labels();
    let budgets = forest.budgets();
    let total = ordering.len();

    let mut states = Vec::new();
    for a in 0..=budgets[0] {
        for b in 0..=budgets[1] {
            for c in 0..=budgets[2] {
                let counters = vec![a, b, c];
                let accuracy =
                    state_accuracy(&routing, labels, &LatticeState::new(counters.clone()));
                states.push(LatticeNode {
                    layer: a + b + c,
                    correct: (accuracy * total as f64).round() as usize,
                    total,
                    counters,
                });
            }
        }
    }

    let named: [(&str, anyforest::StepOrder); 3] = [
        (
            "optimal",
            anyforest::optimal_order(&forest, &ordering, DEMO_LATTICE_CAP)
                .map_err(|e| e.to_string())?,
        ),
        (
            "forward squirrel",
            anyforest::forward_squirrel(&forest, &ordering).map_err(|e| e.to_string())?,
        ),
        (
            "backward squirrel",
            anyforest::backward_squirrel(&forest, &ordering).map_err(|e| e.to_string())?,
        ),
    ];
    let paths = named
        .into_iter()
        .map(|(name, order)| LatticePath {
            name: name.to_string(),
            mean_accuracy: anyforest::mean_accuracy(&routing, labels, &order),
            steps: order.steps().to_vec(),
        })
        .collect();
    encode(&LatticePayload {
        budgets,
        states,
        paths,
    })
}

#[derive(Serialize)]
struct TracePayload {
    n_classes: usize,
    true_class: usize,
    order_name: String,
    steps: Vec<usize>,
    /// summed probability vector after 0..=K steps
    probabilities: Vec<Vec<f64>>,
    predictions: Vec<usize>,
}

/// Traces one inference step by step: trains a small forest on synthetic
/// blobs, picks a test sample, and records the running probability sums at
/// every abort point.
pub fn trace_inference_json(
    n_trees: usize,
    max_depth: usize,
    seed: u64,
    order_name: &str,
    sample_index: usize,
) -> Result<String, String> {
    let kind = OrderKind::parse(order_name).map_err(|e| e.to_string())?;
    let n_classes = 3;
    let data = anyforest::synth::gaussian_blobs(240, 3, n_classes, 0.8, seed);
    let splits = split(&data, seed).map_err(|e| e.to_string())?;
    let forest = train_forest(
        &splits.train,
        &TrainConfig::new(n_trees.clamp(1, 10), max_depth.clamp(1, 6), seed),
    )
    .map_err(|e| e.to_string())?;
    let order = kind
        .generate(&forest, &splits.ordering, DEMO_LATTICE_CAP, seed)
        .map_err(|e| e.to_string())?;

    let index = sample_index % splits.test.len();
    let sample = splits.test.row(index).to_vec();
    let true_class = splits.test.labels()[index];

    let mut executor = Executor::new(&forest, &order, &sample).map_err(|e| e.to_string())?;
    let mut probabilities = vec![executor.probabilities().to_vec()];
    let mut predictions = vec![executor.prediction()];
    while executor.step() {
        probabilities.push(executor.probabilities().to_vec());
        predictions.push(executor.prediction());
    }
    encode(&TracePayload {
        n_classes,
        true_class,
        order_name: kind.name().to_string(),
        steps: order.steps().to_vec(),
        probabilities,
        predictions,
    })
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::wasm_bindgen;
    use wasm_bindgen::JsValue;

    fn lift(result: Result<String, String>) -> Result<String, JsValue> {
        result.map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn accuracy_curves(
        n_samples: usize,
        n_classes: usize,
        n_trees: usize,
        max_depth: usize,
        spread: f64,
        seed: u64,
    ) -> Result<String, JsValue> {
        lift(super::accuracy_curves_json(
            n_samples, n_classes, n_trees, max_depth, spread, seed,
        ))
    }

    #[wasm_bindgen]
    pub fn example_lattice() -> Result<String, JsValue> {
        lift(super::example_lattice_json())
    }

    #[wasm_bindgen]
    pub fn trace_inference(
        n_trees: usize,
        max_depth: usize,
        seed: u64,
        order_name: &str,
        sample_index: usize,
    ) -> Result<String, JsValue> {
        lift(super::trace_inference_json(
            n_trees,
            max_depth,
            seed,
            order_name,
            sample_index,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_payload_shape() {
        let payload = accuracy_curves_json(200, 3, 5, 4, 0.8, 7).unwrap();
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        let steps = value["steps"].as_u64().unwrap() as usize;
        let orders = value["orders"].as_array().unwrap();
        assert_eq!(orders.len(), 15);
        for order in orders {
            if order["refused"].is_null() {
                assert_eq!(order["curve"].as_array().unwrap().len(), steps + 1);
            } else {
                // qwyc refuses on the 3-class demo data
                assert!(order["name"].as_str().unwrap().contains("qwyc"));
            }
        }
    }

    #[test]
    fn lattice_payload_matches_fixture() {
        let payload = example_lattice_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert_eq!(value["states"].as_array().unwrap().len(), 27);
        let optimal = &value["paths"][0];
        assert_eq!(optimal["name"], "optimal");
        assert!((optimal["mean_accuracy"].as_f64().unwrap() - 6.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn trace_walks_every_step() {
        let payload = trace_inference_json(4, 3, 11, "bsquirrel", 2).unwrap();
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        let steps = value["steps"].as_array().unwrap().len();
        assert_eq!(value["probabilities"].as_array().unwrap().len(), steps + 1);
        assert_eq!(value["predictions"].as_array().unwrap().len(), steps + 1);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(accuracy_curves_json(10, 3, 5, 4, 0.8, 7).is_err());
        assert!(trace_inference_json(4, 3, 11, "no-such-order", 0).is_err());
    }
}

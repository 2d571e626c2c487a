//! Browser bindings for the demo page under `www/`.
//!
//! Three interactive operations: abstract a pasted ARFF dataset into its
//! feature vector, judge a component chain with both the surrogate and real
//! execution (with the full firing trace), and roll seeded random
//! pipelines. The knowledge base is induced in the page on first use.
//!
//! Build with `wasm-pack build --target web crates/wasm-demo`.

use std::cell::OnceCell;

use wasm_bindgen::prelude::*;

use pipecheck_core::dataset::{extract_features, load_arff_str, write_arff, Dataset};
use pipecheck_core::kb::{generate_default, generate_synthetic_suite, KnowledgeBase};
use pipecheck_core::pipeline::{random_pipeline, PipelineSpec, Step, DEFAULT_MAX_STEPS};
use pipecheck_core::surrogate::{evaluate_with_trace, map_to_surrogate};
use pipecheck_core::tmethod::execute_pipeline;
use serde_json::json;

thread_local! {
    static KB: OnceCell<KnowledgeBase> = const { OnceCell::new() };
}

fn with_kb<T>(f: impl FnOnce(&KnowledgeBase) -> T) -> T {
    KB.with(|cell| f(cell.get_or_init(|| generate_default().kb)))
}

fn js_err(message: impl std::fmt::Display) -> JsError {
    JsError::new(&message.to_string())
}

fn parse_data(arff: &str) -> Result<Dataset, JsError> {
    load_arff_str(arff, "pasted").map_err(js_err)
}

/// Component palette: id, kind and category of every registry entry, plus
/// its capabilities/effects from the induced knowledge base.
#[wasm_bindgen]
pub fn registry_json() -> String {
    with_kb(|kb| {
        let components: Vec<serde_json::Value> = pipecheck_core::components::registry()
            .iter()
            .map(|c| {
                let entry = kb.entry(&c.id);
                json!({
                    "id": c.id,
                    "kind": format!("{:?}", c.kind),
                    "category": format!("{:?}", c.category),
                    "capabilities": entry.map(|e| e.capabilities),
                    "effects": entry.map(|e| e.effects),
                })
            })
            .collect();
        serde_json::to_string(&components).unwrap()
    })
}

#[wasm_bindgen]
pub fn sample_names() -> String {
    serde_json::to_string(&[
        "gcredit-small",
        "numeric-regression",
        "missing-values",
        "empty-column",
    ])
    .unwrap()
}

/// ARFF text for one of the built-in sample datasets.
#[wasm_bindgen]
pub fn sample_arff(name: &str) -> Result<String, JsError> {
    let from_suite = |suite_name: &str| {
        generate_synthetic_suite()
            .into_iter()
            .map(|(d, _)| d)
            .find(|d| d.name() == suite_name)
            .expect("suite dataset exists")
    };
    let dataset = match name {
        "gcredit-small" => pipecheck_core::fixtures::gcredit_shaped("gcredit_small", 40, 7),
        "numeric-regression" => from_suite("suite_numeric_numeric_class"),
        "missing-values" => from_suite("suite_missing_both"),
        "empty-column" => from_suite("suite_empty_nominal"),
        other => return Err(js_err(format!("unknown sample `{other}`"))),
    };
    Ok(write_arff(&dataset))
}

/// Transformed-feature vector of a pasted ARFF dataset, with a small
/// summary of what was parsed.
#[wasm_bindgen]
pub fn extract_features_json(arff: &str) -> Result<String, JsError> {
    let dataset = parse_data(arff)?;
    let vector = extract_features(&dataset);
    Ok(json!({
        "dataset": {
            "name": dataset.name(),
            "rows": dataset.n_rows(),
            "attributes": dataset.attributes().len(),
            "class": dataset.class_attribute().name,
        },
        "features": vector,
    })
    .to_string())
}

fn spec_from_ids(ids_json: &str) -> Result<PipelineSpec, JsError> {
    let ids: Vec<String> = serde_json::from_str(ids_json).map_err(js_err)?;
    if ids.is_empty() {
        return Err(js_err("pipeline has no steps"));
    }
    if ids.len() > DEFAULT_MAX_STEPS {
        return Err(js_err(format!("pipeline limited to {DEFAULT_MAX_STEPS} steps")));
    }
    for id in &ids {
        pipecheck_core::components::lookup(id).map_err(js_err)?;
    }
    Ok(PipelineSpec::new(
        "demo",
        ids.into_iter().map(Step::bare).collect(),
    ))
}

/// Judges a component chain against a pasted dataset with both methods.
/// Returns the surrogate verdict with its firing trace, the execution
/// verdict with its artifact, and whether they agree.
#[wasm_bindgen]
pub fn evaluate_json(arff: &str, component_ids_json: &str) -> Result<String, JsError> {
    let dataset = parse_data(arff)?;
    let spec = spec_from_ids(component_ids_json)?;
    let features = extract_features(&dataset);

    with_kb(|kb| {
        let (net, token) = map_to_surrogate(&spec, features, kb).map_err(js_err)?;
        let (surrogate_verdict, trace) = evaluate_with_trace(&net, token);
        let outcome = execute_pipeline(&spec, &dataset, 10_000_000);

        Ok(json!({
            "features": features,
            "places": net.places.iter().map(|p| p.name.clone()).collect::<Vec<_>>(),
            "surrogate": {
                "verdict": surrogate_verdict,
                "trace": trace,
            },
            "execution": {
                "verdict": outcome.verdict,
                "artifact": outcome.artifact,
            },
            "agree": surrogate_verdict.valid == outcome.verdict.valid,
        })
        .to_string())
    })
}

/// A seeded random pipeline as a list of component ids.
#[wasm_bindgen]
pub fn random_pipeline_json(seed: u64, max_len: usize) -> String {
    let spec = random_pipeline(seed, max_len.clamp(1, DEFAULT_MAX_STEPS));
    let ids: Vec<&str> = spec.steps.iter().map(|s| s.component.as_str()).collect();
    json!({ "id": spec.id, "steps": ids }).to_string()
}

/// The five-step case-study pipeline that wastes the most execution time on
/// the gcredit shape.
#[wasm_bindgen]
pub fn worst_case_steps() -> String {
    serde_json::to_string(&[
        "ReplaceMissingValues",
        "PeriodicSampling",
        "NumericToNominal",
        "PrincipalComponents",
        "LinearRegressor",
    ])
    .unwrap()
}

//! The knowledge base: per-component capabilities and effects, induced by
//! probing, persisted as JSON, compared with a structural diff.
//!
//! A capability slot of 1 means "the component can work with a dataset that
//! has this transformed-feature"; 0 means it cannot. An effect slot of 1
//! means the component transforms something *to* that feature, -1 that it
//! removes the feature, 0 that it leaves it alone.

mod generate;
mod suite;

pub use generate::{
    generate_default, generate_knowledge_base, suite_hash, EffectConflict, GenerationReport,
};
pub use suite::generate_synthetic_suite;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::features::{Binary, FeatureVector, Signed, TransformedFeature};

pub type Capabilities = FeatureVector<Binary>;
pub type Effects = FeatureVector<Signed>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KbEntry {
    pub capabilities: Capabilities,
    pub effects: Effects,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator_version: String,
    pub suite_hash: String,
}

/// Every registry component has exactly one entry; all vectors carry all 16
/// slots. Serialized keys are sorted by component id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub components: BTreeMap<String, KbEntry>,
    pub provenance: Provenance,
}

impl KnowledgeBase {
    pub fn entry(&self, component_id: &str) -> Option<&KbEntry> {
        self.components.get(component_id)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("kb serialization is infallible")
    }

    pub fn from_json_str(text: &str) -> Result<KnowledgeBase, KbReadError> {
        read_kb(text)
    }
}

/// A KB file was rejected; `path` points at the offending JSON node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("knowledge base at {path}: {message}")]
pub struct KbReadError {
    pub path: String,
    pub message: String,
}

fn err(path: impl Into<String>, message: impl Into<String>) -> KbReadError {
    KbReadError {
        path: path.into(),
        message: message.into(),
    }
}

/// Hand-walked deserialization so errors carry a JSON path like
/// `components.LinearRegressor.effects`.
fn read_kb(text: &str) -> Result<KnowledgeBase, KbReadError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| err("$", format!("not valid JSON: {e}")))?;
    let object = root.as_object().ok_or_else(|| err("$", "expected an object"))?;

    let components_value = object
        .get("components")
        .ok_or_else(|| err("$", "missing `components`"))?;
    let component_map = components_value
        .as_object()
        .ok_or_else(|| err("components", "expected an object"))?;

    let mut components = BTreeMap::new();
    for (id, entry_value) in component_map {
        let entry = entry_value
            .as_object()
            .ok_or_else(|| err(format!("components.{id}"), "expected an object"))?;
        let capabilities = read_vector::<Binary>(entry, id, "capabilities")?;
        let effects = read_vector::<Signed>(entry, id, "effects")?;
        components.insert(
            id.clone(),
            KbEntry {
                capabilities,
                effects,
            },
        );
    }

    let provenance_value = object
        .get("provenance")
        .ok_or_else(|| err("$", "missing `provenance`"))?;
    let provenance: Provenance = serde_json::from_value(provenance_value.clone())
        .map_err(|e| err("provenance", e.to_string()))?;

    Ok(KnowledgeBase {
        components,
        provenance,
    })
}

fn read_vector<D: crate::features::Domain>(
    entry: &serde_json::Map<String, Value>,
    id: &str,
    field: &str,
) -> Result<FeatureVector<D>, KbReadError> {
    let path = format!("components.{id}.{field}");
    let value = entry
        .get(field)
        .ok_or_else(|| err(path.clone(), format!("missing `{field}`")))?;
    serde_json::from_value(value.clone()).map_err(|e| err(path, e.to_string()))
}

/// Which half of an entry a diff row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Slot {
    Capability,
    Effect,
}

/// One disagreement between two knowledge bases. `None` means the component
/// is absent on that side entirely.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KbDiffRow {
    pub component: String,
    pub slot: Slot,
    pub feature: TransformedFeature,
    pub left: Option<i8>,
    pub right: Option<i8>,
}

/// Structural comparison of the entries of two knowledge bases; provenance
/// is not compared. Empty result means the entries are identical.
pub fn kb_diff(left: &KnowledgeBase, right: &KnowledgeBase) -> Vec<KbDiffRow> {
    let mut rows = Vec::new();
    let ids: std::collections::BTreeSet<&String> = left
        .components
        .keys()
        .chain(right.components.keys())
        .collect();
    for id in ids {
        let l = left.components.get(id);
        let r = right.components.get(id);
        for feature in TransformedFeature::ALL {
            let (lc, rc) = (
                l.map(|e| e.capabilities.get(feature)),
                r.map(|e| e.capabilities.get(feature)),
            );
            if lc != rc {
                rows.push(KbDiffRow {
                    component: id.clone(),
                    slot: Slot::Capability,
                    feature,
                    left: lc,
                    right: rc,
                });
            }
            let (le, re) = (
                l.map(|e| e.effects.get(feature)),
                r.map(|e| e.effects.get(feature)),
            );
            if le != re {
                rows.push(KbDiffRow {
                    component: id.clone(),
                    slot: Slot::Effect,
                    feature,
                    left: le,
                    right: re,
                });
            }
        }
    }
    rows
}

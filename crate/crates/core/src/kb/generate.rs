//! Knowledge-base induction by probing components on the synthetic suite.
//!
//! Four stages per component: start from all-zero capabilities and effects;
//! run the component on every suite dataset; on each success mark the input
//! dataset's active features as capabilities; then derive effects — a
//! predictor gets PREDICTIVE_MODEL, a filter gets each feature's
//! output-minus-input difference, written only while the slot still holds
//! its default 0. The write-once rule plus the suite's simplest-first order
//! makes the result deterministic.

use crate::components::{execute_component, ComponentDescriptor, ComponentKind, Output};
use crate::dataset::{extract_features, Dataset};
use crate::features::{Binary, FeatureVector, TransformedFeature};

use super::{Capabilities, Effects, KbEntry, KnowledgeBase, Provenance};

/// A later probe disagreed with an already-written effect. The first-written
/// value stands; the disagreement is only reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectConflict {
    pub component: String,
    pub feature: TransformedFeature,
    pub kept: i8,
    pub observed: i8,
    pub dataset: String,
}

#[derive(Debug)]
pub struct GenerationReport {
    pub kb: KnowledgeBase,
    /// One warning per component that failed on every probe dataset; its
    /// entry is emitted anyway with all-zero capabilities.
    pub warnings: Vec<String>,
    pub conflicts: Vec<EffectConflict>,
}

/// Per-component accumulator; separated from the driver loop so the
/// write-once and monotonicity rules can be exercised directly in tests.
#[derive(Debug, Clone)]
pub(crate) struct EntryAccumulator {
    kind: ComponentKind,
    capabilities: Capabilities,
    effects: Effects,
    succeeded: bool,
    conflicts: Vec<RawConflict>,
}

/// (feature, kept value, observed diff, dataset name)
pub(crate) type RawConflict = (TransformedFeature, i8, i8, String);

impl EntryAccumulator {
    pub(crate) fn new(kind: ComponentKind) -> Self {
        EntryAccumulator {
            kind,
            capabilities: Capabilities::zeros(),
            effects: Effects::zeros(),
            succeeded: false,
            conflicts: Vec::new(),
        }
    }

    /// Folds one successful probe into the entry.
    pub(crate) fn observe_success(
        &mut self,
        input: &FeatureVector<Binary>,
        output: &Output,
        dataset_name: &str,
    ) {
        self.succeeded = true;
        for feature in input.active() {
            self.capabilities.set(feature, 1);
        }
        match (self.kind, output) {
            (ComponentKind::Predictor, _) => {
                self.effects.set(TransformedFeature::PredictiveModel, 1);
            }
            (ComponentKind::Filter, Output::Dataset(out)) => {
                let out_vector = extract_features(out);
                for feature in TransformedFeature::ALL {
                    let diff = (out_vector.get(feature) - input.get(feature)).clamp(-1, 1);
                    if diff == 0 {
                        continue;
                    }
                    let current = self.effects.get(feature);
                    if current == 0 {
                        self.effects.set(feature, diff);
                    } else if current != diff {
                        self.conflicts
                            .push((feature, current, diff, dataset_name.to_string()));
                    }
                }
            }
            (ComponentKind::Filter, Output::Model(_)) => {
                unreachable!("a filter cannot produce a model")
            }
        }
    }

    pub(crate) fn finish(self) -> (KbEntry, bool, Vec<RawConflict>) {
        (
            KbEntry {
                capabilities: self.capabilities,
                effects: self.effects,
            },
            self.succeeded,
            self.conflicts,
        )
    }
}

/// Probes every component against the suite and assembles the knowledge
/// base. Probing uses each component's default hyperparameters.
pub fn generate_knowledge_base(
    components: &[ComponentDescriptor],
    suite: &[(Dataset, FeatureVector<Binary>)],
) -> GenerationReport {
    let mut kb = KnowledgeBase {
        components: Default::default(),
        provenance: Provenance {
            generator_version: env!("CARGO_PKG_VERSION").to_string(),
            suite_hash: suite_hash(suite),
        },
    };
    let mut warnings = Vec::new();
    let mut conflicts = Vec::new();

    for component in components {
        let mut acc = EntryAccumulator::new(component.kind);
        for (dataset, vector) in suite {
            if let Ok(output) = execute_component(component, dataset) {
                acc.observe_success(vector, &output, dataset.name());
            }
        }
        let (entry, succeeded, component_conflicts) = acc.finish();
        if !succeeded {
            warnings.push(format!(
                "component `{}` failed on every probe dataset; emitting an all-zero entry",
                component.id
            ));
        }
        conflicts.extend(component_conflicts.into_iter().map(
            |(feature, kept, observed, dataset)| EffectConflict {
                component: component.id.clone(),
                feature,
                kept,
                observed,
                dataset,
            },
        ));
        kb.components.insert(component.id.clone(), entry);
    }

    GenerationReport {
        kb,
        warnings,
        conflicts,
    }
}

/// FNV-1a over the canonical textual form of the suite; recorded in the
/// provenance so a stale KB is distinguishable from a stale generator.
pub fn suite_hash(suite: &[(Dataset, FeatureVector<Binary>)]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for b in bytes {
            hash ^= u64::from(*b);
            hash = hash.wrapping_mul(0x100000001b3);
        }
    };
    for (dataset, _) in suite {
        eat(dataset.name().as_bytes());
        eat(crate::dataset::write_arff(dataset).as_bytes());
    }
    format!("{hash:016x}")
}

/// Convenience wrapper: built-in registry, built-in suite, effects at
/// default hyperparameters.
pub fn generate_default() -> GenerationReport {
    generate_knowledge_base(crate::components::registry(), &super::generate_synthetic_suite())
}

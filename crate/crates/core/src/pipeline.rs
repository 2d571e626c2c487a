//! Sequential pipeline specifications, their JSON wire form, and the seeded
//! random generator the benchmark uses.
//!
//! Pipelines are single-path: a start event, an ordered list of component
//! steps, an end event. Parsing validates structure only — that ids resolve
//! in the registry and the length bound holds. Whether the pipeline is
//! *semantically* valid is exactly the question the surrogate and the
//! execution oracle answer later.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::components::{registry, ComponentDescriptor, ComponentKind, ParamValue};
use crate::features::TransformedFeature;

pub const DEFAULT_MAX_STEPS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub component: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, ParamValue>,
}

impl Step {
    pub fn bare(component: impl Into<String>) -> Self {
        Step {
            component: component.into(),
            params: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSpec {
    pub id: String,
    pub steps: Vec<Step>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("pipeline parse error: {0}")]
    Parse(String),
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("pipeline has {len} steps, limit is {max}")]
    LengthExceeded { len: usize, max: usize },
}

/// On-disk form, BPMN-flavored: explicit start and end events around the
/// step list.
#[derive(Serialize, Deserialize)]
struct PipelineFile {
    id: String,
    start: Value,
    steps: Vec<Step>,
    end: Value,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, String>,
}

impl PipelineSpec {
    pub fn new(id: impl Into<String>, steps: Vec<Step>) -> Self {
        PipelineSpec {
            id: id.into(),
            steps,
            metadata: BTreeMap::new(),
        }
    }

    /// Resolved descriptor of step `i` with its parameter overrides applied.
    pub fn resolved_step(
        &self,
        index: usize,
    ) -> Result<ComponentDescriptor, crate::components::ExecutionError> {
        let step = &self.steps[index];
        let base = crate::components::lookup(&step.component).map_err(|e| {
            crate::components::ExecutionError::UnknownComponent(e.0)
        })?;
        base.with_params(&step.params)
    }

    pub fn to_json_string(&self) -> String {
        let file = PipelineFile {
            id: self.id.clone(),
            start: Value::Object(Default::default()),
            steps: self.steps.clone(),
            end: Value::Object(Default::default()),
            metadata: self.metadata.clone(),
        };
        serde_json::to_string_pretty(&file).expect("pipeline serialization is infallible")
    }
}

/// Parses and structurally validates a pipeline file against the registry.
pub fn parse_pipeline(text: &str, max_steps: usize) -> Result<PipelineSpec, PipelineError> {
    let file: PipelineFile =
        serde_json::from_str(text).map_err(|e| PipelineError::Parse(e.to_string()))?;
    if !file.start.is_object() || !file.end.is_object() {
        return Err(PipelineError::Parse(
            "`start` and `end` must be objects".into(),
        ));
    }
    if file.steps.is_empty() {
        return Err(PipelineError::Parse("pipeline has no steps".into()));
    }
    if file.steps.len() > max_steps {
        return Err(PipelineError::LengthExceeded {
            len: file.steps.len(),
            max: max_steps,
        });
    }
    for step in &file.steps {
        if crate::components::lookup(&step.component).is_err() {
            return Err(PipelineError::UnknownComponent(step.component.clone()));
        }
    }
    Ok(PipelineSpec {
        id: file.id,
        steps: file.steps,
        metadata: file.metadata,
    })
}

/// Generates a random pipeline: length uniform in `1..=max_steps`, a
/// uniformly chosen predictor last, uniformly chosen filters (repeats
/// allowed) before it. Deterministic for a given seed.
pub fn random_pipeline(seed: u64, max_steps: usize) -> PipelineSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filters: Vec<&ComponentDescriptor> = registry()
        .iter()
        .filter(|c| c.kind == ComponentKind::Filter)
        .collect();
    let predictors: Vec<&ComponentDescriptor> = registry()
        .iter()
        .filter(|c| c.kind == ComponentKind::Predictor)
        .collect();
    assert!(!filters.is_empty() && !predictors.is_empty());

    let len = rng.gen_range(1..=max_steps.max(1));
    let mut steps = Vec::with_capacity(len);
    for _ in 0..len - 1 {
        steps.push(Step::bare(filters[rng.gen_range(0..filters.len())].id.clone()));
    }
    steps.push(Step::bare(
        predictors[rng.gen_range(0..predictors.len())].id.clone(),
    ));
    PipelineSpec::new(format!("rand-{seed:016x}"), steps)
}

/// Outcome of evaluating a pipeline, by either method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    /// Present exactly when `valid` is false.
    pub failure: Option<Failure>,
    pub duration_micros: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// 0-based index into the pipeline's steps.
    pub step: usize,
    pub component: String,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum FailureReason {
    /// The surrogate found token features the component cannot work with.
    CapabilityViolation(Vec<TransformedFeature>),
    /// Real execution failed; the component's error text.
    ExecutionFailed(String),
    /// Every step ran but nothing produced a predictive model.
    NoPredictiveModel,
    /// Execution exceeded its time budget.
    Timeout,
}

impl Verdict {
    pub fn pass(duration_micros: u64) -> Self {
        Verdict {
            valid: true,
            failure: None,
            duration_micros,
        }
    }

    pub fn fail(failure: Failure, duration_micros: u64) -> Self {
        Verdict {
            valid: false,
            failure: Some(failure),
            duration_micros,
        }
    }

    pub fn is_timeout(&self) -> bool {
        matches!(
            self.failure,
            Some(Failure {
                reason: FailureReason::Timeout,
                ..
            })
        )
    }

    pub fn violated_features(&self) -> &[TransformedFeature] {
        match &self.failure {
            Some(Failure {
                reason: FailureReason::CapabilityViolation(features),
                ..
            }) => features,
            _ => &[],
        }
    }
}

//! The Petri-net surrogate: pipeline structure with feature vectors in
//! place of datasets.
//!
//! A pipeline maps to a linear net — start place, one transition per step
//! with an empty place after each, the final place being the end — and a
//! single token circulates through it. Firing a transition does two things:
//! checks the token against the component's capabilities, then adds the
//! component's effects into the token. Evaluation is a few hundred integer
//! operations regardless of how large the original dataset is; it never
//! touches dataset rows at all.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::Stopwatch;
use crate::features::{Binary, FeatureVector, TransformedFeature};
use crate::kb::KnowledgeBase;
use crate::pipeline::{Failure, FailureReason, PipelineSpec, Verdict};

/// The token is a dataset abstraction and stays in the binary domain
/// through every firing.
pub type Token = FeatureVector<Binary>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Place {
    pub name: String,
}

/// A transition holds the one piece of knowledge the net needs about its
/// component: the resolved capabilities/effects entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurrogateTransition {
    pub component: String,
    pub capabilities: FeatureVector<Binary>,
    pub effects: crate::kb::Effects,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Node {
    Place(usize),
    Transition(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub from: Node,
    pub to: Node,
}

/// A linear place→transition→place chain: `places[0]` is the start place,
/// the last place is the end, and transition `i` corresponds to step `i` of
/// the source pipeline. Always `places.len() == transitions.len() + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurrogateNet {
    pub pipeline_id: String,
    pub places: Vec<Place>,
    pub transitions: Vec<SurrogateTransition>,
    pub arcs: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no knowledge-base entry for component `{0}`")]
pub struct MissingKnowledge(pub String);

/// Builds the surrogate net for a pipeline and places the dataset's feature
/// vector as the token in the start place.
pub fn map_to_surrogate(
    spec: &PipelineSpec,
    dataset_features: FeatureVector<Binary>,
    kb: &KnowledgeBase,
) -> Result<(SurrogateNet, Token), MissingKnowledge> {
    let mut places = vec![Place {
        name: "start".to_string(),
    }];
    let mut transitions = Vec::with_capacity(spec.steps.len());
    let mut arcs = Vec::with_capacity(spec.steps.len() * 2);

    for (i, step) in spec.steps.iter().enumerate() {
        let entry = kb
            .entry(&step.component)
            .ok_or_else(|| MissingKnowledge(step.component.clone()))?;
        transitions.push(SurrogateTransition {
            component: step.component.clone(),
            capabilities: entry.capabilities,
            effects: entry.effects,
        });
        arcs.push(Arc {
            from: Node::Place(i),
            to: Node::Transition(i),
        });
        let place_name = if i + 1 == spec.steps.len() {
            "end".to_string()
        } else {
            format!("p{}", i + 1)
        };
        places.push(Place { name: place_name });
        arcs.push(Arc {
            from: Node::Transition(i),
            to: Node::Place(i + 1),
        });
    }

    let net = SurrogateNet {
        pipeline_id: spec.id.clone(),
        places,
        transitions,
        arcs,
    };
    debug_assert_eq!(net.places.len(), net.transitions.len() + 1);
    Ok((net, dataset_features))
}

/// The firing failed its capability check; all offending features are
/// listed, not just the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvalidFiring {
    pub violated: Vec<TransformedFeature>,
}

/// Fires one transition.
///
/// Task 1, the capability check: any feature that is 1 in the token but 0
/// in the capabilities invalidates the component. Task 2, the token update:
/// each output slot is the input slot plus the effect slot, clamped back
/// into {0, 1} — an effect of -1 on an absent feature must not drive the
/// token out of its domain.
pub fn fire_transition(
    transition: &SurrogateTransition,
    token: &Token,
) -> Result<Token, InvalidFiring> {
    let violated: Vec<TransformedFeature> = TransformedFeature::ALL
        .iter()
        .copied()
        .filter(|f| token.get(*f) == 1 && transition.capabilities.get(*f) == 0)
        .collect();
    if !violated.is_empty() {
        return Err(InvalidFiring { violated });
    }

    let mut out = Token::zeros();
    for feature in TransformedFeature::ALL {
        let value = (token.get(feature) + transition.effects.get(feature)).clamp(0, 1);
        out.set(feature, value);
    }
    Ok(out)
}

/// One row of a firing trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiringRecord {
    pub step: usize,
    pub component: String,
    pub token_before: Token,
    /// Token after a successful firing; `None` when the firing was invalid.
    pub token_after: Option<Token>,
    pub violated: Vec<TransformedFeature>,
}

/// Evaluates the net: fires transitions in chain order, short-circuiting on
/// the first invalid firing. If every transition fires, the pipeline is
/// valid exactly when the final token carries PREDICTIVE_MODEL — a pipeline
/// that never fits a predictor produced no model.
pub fn evaluate_surrogate(net: &SurrogateNet, token: Token) -> Verdict {
    evaluate_with_trace(net, token).0
}

/// Like [`evaluate_surrogate`], also returning the full firing trace. The
/// trace is what divergence logs and the demo page show.
pub fn evaluate_with_trace(net: &SurrogateNet, token: Token) -> (Verdict, Vec<FiringRecord>) {
    let watch = Stopwatch::start();
    let mut trace = Vec::with_capacity(net.transitions.len());
    let mut current = token;

    for (i, transition) in net.transitions.iter().enumerate() {
        match fire_transition(transition, &current) {
            Ok(next) => {
                trace.push(FiringRecord {
                    step: i,
                    component: transition.component.clone(),
                    token_before: current,
                    token_after: Some(next),
                    violated: Vec::new(),
                });
                current = next;
            }
            Err(invalid) => {
                trace.push(FiringRecord {
                    step: i,
                    component: transition.component.clone(),
                    token_before: current,
                    token_after: None,
                    violated: invalid.violated.clone(),
                });
                let verdict = Verdict::fail(
                    Failure {
                        step: i,
                        component: transition.component.clone(),
                        reason: FailureReason::CapabilityViolation(invalid.violated),
                    },
                    watch.elapsed_micros(),
                );
                return (verdict, trace);
            }
        }
    }

    let verdict = if current.get(TransformedFeature::PredictiveModel) == 1 {
        Verdict::pass(watch.elapsed_micros())
    } else {
        let last = net.transitions.len() - 1;
        Verdict::fail(
            Failure {
                step: last,
                component: net.transitions[last].component.clone(),
                reason: FailureReason::NoPredictiveModel,
            },
            watch.elapsed_micros(),
        )
    };
    (verdict, trace)
}

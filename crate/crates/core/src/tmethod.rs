//! The execution oracle: run the pipeline for real and call it valid
//! exactly when a predictive model comes out the other end.
//!
//! Every execution failure — incompatible data, degenerate input, a model
//! produced mid-pipeline where the next step expects a dataset — becomes an
//! invalid verdict rather than an error; that is the whole decision rule.
//! The time budget is checked between steps, so a timeout verdict names the
//! step that was about to run.

use serde::Serialize;

use crate::clock::Stopwatch;
use crate::components::{execute_component, Output};
use crate::dataset::Dataset;
use crate::pipeline::{Failure, FailureReason, PipelineSpec, Verdict};

/// What the pipeline left behind when execution stopped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ArtifactSummary {
    /// A fitted model from the named predictor: the valid case.
    Model { component: String },
    /// Execution ended (or failed) while the data was still a dataset.
    Dataset { attributes: usize, rows: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExecutionOutcome {
    pub verdict: Verdict,
    pub artifact: ArtifactSummary,
}

fn summarize(dataset: &Dataset) -> ArtifactSummary {
    ArtifactSummary::Dataset {
        attributes: dataset.attributes().len(),
        rows: dataset.n_rows(),
    }
}

/// Threads the dataset through every step. Valid iff the final output is a
/// predictive model; any step error or an exceeded `timeout_micros` budget
/// yields an invalid verdict carrying the step index.
pub fn execute_pipeline(
    spec: &PipelineSpec,
    dataset: &Dataset,
    timeout_micros: u64,
) -> ExecutionOutcome {
    let watch = Stopwatch::start();
    let mut current = dataset.clone();
    let mut artifact = summarize(&current);

    for (i, step) in spec.steps.iter().enumerate() {
        if watch.elapsed_micros() > timeout_micros {
            return ExecutionOutcome {
                verdict: Verdict::fail(
                    Failure {
                        step: i,
                        component: step.component.clone(),
                        reason: FailureReason::Timeout,
                    },
                    watch.elapsed_micros(),
                ),
                artifact,
            };
        }

        let resolved = match spec.resolved_step(i) {
            Ok(descriptor) => descriptor,
            Err(error) => {
                return ExecutionOutcome {
                    verdict: Verdict::fail(
                        Failure {
                            step: i,
                            component: step.component.clone(),
                            reason: FailureReason::ExecutionFailed(error.to_string()),
                        },
                        watch.elapsed_micros(),
                    ),
                    artifact,
                };
            }
        };

        match execute_component(&resolved, &current) {
            Ok(Output::Dataset(next)) => {
                artifact = summarize(&next);
                current = next;
            }
            Ok(Output::Model(model)) => {
                artifact = ArtifactSummary::Model {
                    component: model.component.clone(),
                };
                if i + 1 == spec.steps.len() {
                    return ExecutionOutcome {
                        verdict: Verdict::pass(watch.elapsed_micros()),
                        artifact,
                    };
                }
                // A model mid-pipeline: the next component needs a dataset.
                return ExecutionOutcome {
                    verdict: Verdict::fail(
                        Failure {
                            step: i + 1,
                            component: spec.steps[i + 1].component.clone(),
                            reason: FailureReason::ExecutionFailed(format!(
                                "step {} produced a predictive model; `{}` requires a dataset",
                                i,
                                spec.steps[i + 1].component
                            )),
                        },
                        watch.elapsed_micros(),
                    ),
                    artifact,
                };
            }
            Err(error) => {
                return ExecutionOutcome {
                    verdict: Verdict::fail(
                        Failure {
                            step: i,
                            component: step.component.clone(),
                            reason: FailureReason::ExecutionFailed(error.to_string()),
                        },
                        watch.elapsed_micros(),
                    ),
                    artifact,
                };
            }
        }
    }

    // Every step ran and the final artifact is still a dataset.
    let last = spec.steps.len() - 1;
    ExecutionOutcome {
        verdict: Verdict::fail(
            Failure {
                step: last,
                component: spec.steps[last].component.clone(),
                reason: FailureReason::NoPredictiveModel,
            },
            watch.elapsed_micros(),
        ),
        artifact,
    }
}

pub const NO_TIMEOUT: u64 = u64::MAX;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pipeline::{PipelineSpec, Step};

    fn spec_of(components: &[&str]) -> PipelineSpec {
        PipelineSpec::new("test", components.iter().map(|c| Step::bare(*c)).collect())
    }

    #[test]
    fn majority_classifier_fits_gcredit() {
        let outcome = execute_pipeline(
            &spec_of(&["MajorityClassifier"]),
            &fixtures::gcredit_toy(),
            NO_TIMEOUT,
        );
        assert!(outcome.verdict.valid);
        assert_eq!(
            outcome.artifact,
            ArtifactSummary::Model {
                component: "MajorityClassifier".into()
            }
        );
    }

    #[test]
    fn filter_only_pipeline_is_invalid_with_dataset_artifact() {
        let outcome = execute_pipeline(
            &spec_of(&["ReplaceMissingValues"]),
            &fixtures::gcredit_toy(),
            NO_TIMEOUT,
        );
        assert!(!outcome.verdict.valid);
        assert!(matches!(outcome.artifact, ArtifactSummary::Dataset { .. }));
        assert_eq!(
            outcome.verdict.failure.unwrap().reason,
            FailureReason::NoPredictiveModel
        );
    }

    #[test]
    fn worst_case_pipeline_fails_with_incompatible_data() {
        let spec = spec_of(&[
            "ReplaceMissingValues",
            "PeriodicSampling",
            "NumericToNominal",
            "PrincipalComponents",
            "LinearRegressor",
        ]);
        let outcome = execute_pipeline(&spec, &fixtures::gcredit_toy(), NO_TIMEOUT);
        assert!(!outcome.verdict.valid);
        let failure = outcome.verdict.failure.unwrap();
        match &failure.reason {
            FailureReason::ExecutionFailed(text) => {
                assert!(text.contains("incompatible data"), "{text}");
            }
            other => panic!("expected an execution failure, got {other:?}"),
        }
    }

    #[test]
    fn execution_is_deterministic() {
        let spec = spec_of(&["NumericToNominal", "NaiveBayesNominal"]);
        let d = fixtures::gcredit_toy();
        let a = execute_pipeline(&spec, &d, NO_TIMEOUT);
        let b = execute_pipeline(&spec, &d, NO_TIMEOUT);
        assert_eq!(a.verdict.valid, b.verdict.valid);
        assert_eq!(a.verdict.failure, b.verdict.failure);
        assert_eq!(a.artifact, b.artifact);
    }

    #[test]
    fn prefix_of_a_failed_pipeline_succeeds_as_filter_chain() {
        let spec = spec_of(&[
            "ReplaceMissingValues",
            "PeriodicSampling",
            "NumericToNominal",
            "PrincipalComponents",
            "LinearRegressor",
        ]);
        let d = fixtures::gcredit_toy();
        let outcome = execute_pipeline(&spec, &d, NO_TIMEOUT);
        let failed_at = outcome.verdict.failure.unwrap().step;
        assert!(failed_at > 0);

        // Executing the prefix up to the failing step must succeed at every step.
        let mut current = d;
        for i in 0..failed_at {
            let resolved = spec.resolved_step(i).unwrap();
            match crate::components::execute_component(&resolved, &current) {
                Ok(Output::Dataset(next)) => current = next,
                other => panic!("prefix step {i} did not yield a dataset: {other:?}"),
            }
        }
    }

    #[test]
    fn zero_budget_times_out_before_the_first_step() {
        let outcome = execute_pipeline(
            &spec_of(&["MajorityClassifier"]),
            &fixtures::gcredit_toy(),
            0,
        );
        assert!(!outcome.verdict.valid);
        assert!(outcome.verdict.is_timeout());
    }

    #[test]
    fn predictor_mid_pipeline_fails_at_the_following_step() {
        let spec = spec_of(&["MajorityClassifier", "ReplaceMissingValues"]);
        let outcome = execute_pipeline(&spec, &fixtures::gcredit_toy(), NO_TIMEOUT);
        assert!(!outcome.verdict.valid);
        let failure = outcome.verdict.failure.unwrap();
        assert_eq!(failure.step, 1);
        assert!(matches!(failure.reason, FailureReason::ExecutionFailed(_)));
    }
}

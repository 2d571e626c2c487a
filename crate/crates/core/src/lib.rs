//! Static validity checking for sequential ML pipelines.
//!
//! A pipeline is mapped to a Petri-net surrogate whose token is a 16-slot
//! transformed-feature vector and evaluated in microseconds, without ever
//! executing a component; the execution oracle in [`tmethod`] runs the same
//! pipeline for real so the two verdicts can be compared. The per-component
//! capabilities and effects driving the surrogate live in a knowledge base
//! induced by probing the registry against tiny synthetic datasets.
//!
//! Typical flow:
//!
//! ```
//! use pipecheck_core::{bench, dataset, kb, pipeline, surrogate, tmethod};
//!
//! let report = kb::generate_default();
//! let data = pipecheck_core::fixtures::gcredit_toy();
//! let features = dataset::extract_features(&data);
//!
//! let spec = pipeline::random_pipeline(7, pipeline::DEFAULT_MAX_STEPS);
//! let (net, token) = surrogate::map_to_surrogate(&spec, features, &report.kb).unwrap();
//! let fast = surrogate::evaluate_surrogate(&net, token);
//! let slow = tmethod::execute_pipeline(&spec, &data, tmethod::NO_TIMEOUT);
//! assert_eq!(fast.valid, slow.verdict.valid);
//! ```

pub mod bench;
mod clock;
pub mod components;
pub mod dataset;
pub mod features;
pub mod fixtures;
pub mod kb;
pub mod pipeline;
pub mod surrogate;
pub mod tmethod;

pub use dataset::{extract_features, Dataset};
pub use features::{FeatureVector, TransformedFeature};
pub use kb::KnowledgeBase;
pub use pipeline::{PipelineSpec, Verdict};

//! The executable component registry: real filters and predictors with
//! deliberately heterogeneous capabilities.
//!
//! These components serve two roles. They are the probe targets when the
//! knowledge base is induced, and they are the execution substrate for the
//! run-it-for-real validity oracle. Every component is deterministic given
//! its hyperparameters and input; none of them use randomness.
//!
//! Ground-truth acceptance behavior, per component, is documented on
//! [`registry`]. Date and string data are accepted only by
//! `MajorityClassifier` (attributes only), `PeriodicSampling` and
//! `ReplaceMissingValues`; every other built-in rejects them, which gives
//! the knowledge-base generator nontrivial negative cases.

mod filters;
mod predictors;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{AttributeKind, Dataset};
use crate::features::{Binary, FeatureVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    Filter,
    Predictor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    MissingValueHandling,
    DimensionalityReduction,
    OutlierRemoval,
    DataTransformation,
    DataSampling,
    Predictor,
}

/// Hyperparameter value. Pipeline files carry these as plain JSON numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDescriptor {
    pub id: String,
    pub kind: ComponentKind,
    pub category: Category,
    /// Hyperparameters with their default values.
    pub hyperparameters: BTreeMap<String, ParamValue>,
}

impl ComponentDescriptor {
    fn new(
        id: &str,
        kind: ComponentKind,
        category: Category,
        hyperparameters: &[(&str, ParamValue)],
    ) -> Self {
        ComponentDescriptor {
            id: id.to_string(),
            kind,
            category,
            hyperparameters: hyperparameters
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }

    /// Copy of this descriptor with `overrides` applied on top of the
    /// defaults. Unknown names are rejected.
    pub fn with_params(
        &self,
        overrides: &BTreeMap<String, ParamValue>,
    ) -> Result<ComponentDescriptor, ExecutionError> {
        let mut merged = self.clone();
        for (name, value) in overrides {
            if !merged.hyperparameters.contains_key(name) {
                return Err(ExecutionError::InvalidParam(format!(
                    "`{}` has no hyperparameter `{name}`",
                    self.id
                )));
            }
            merged.hyperparameters.insert(name.clone(), value.clone());
        }
        Ok(merged)
    }

    pub(crate) fn int_param(&self, name: &str) -> Result<i64, ExecutionError> {
        match self.hyperparameters.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(other) => Err(ExecutionError::InvalidParam(format!(
                "`{name}` must be an integer, got {other}"
            ))),
            None => Err(ExecutionError::InvalidParam(format!("missing hyperparameter `{name}`"))),
        }
    }

    pub(crate) fn float_param(&self, name: &str) -> Result<f64, ExecutionError> {
        match self.hyperparameters.get(name) {
            Some(ParamValue::Float(v)) => Ok(*v),
            Some(ParamValue::Int(v)) => Ok(*v as f64),
            None => Err(ExecutionError::InvalidParam(format!("missing hyperparameter `{name}`"))),
        }
    }
}

/// A fitted model: the only artifact a valid pipeline can end in.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictiveModel {
    /// Id of the predictor that produced the model.
    pub component: String,
    /// Fitted parameters; opaque to everything but the producing predictor.
    pub params: ModelParams,
    /// Feature vector of the training dataset at fit time.
    pub trained_on: FeatureVector<Binary>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    /// Ordinary least squares: intercept followed by one weight per attribute.
    Linear { weights: Vec<f64> },
    /// Laplace-smoothed class priors and per-attribute conditional tables.
    NaiveBayes {
        class_values: Vec<String>,
        priors: Vec<f64>,
        tables: Vec<Vec<Vec<f64>>>,
    },
    /// The majority class label.
    Majority { label: String },
    /// One-level decision tree.
    Stump {
        attribute: String,
        split: StumpSplit,
        left_label: String,
        right_label: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StumpSplit {
    /// Numeric: left side is `value <= threshold`.
    Threshold(f64),
    /// Nominal: left side is `value == label`.
    Equals(String),
}

/// Result of running one component on a dataset.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Dataset(Dataset),
    Model(PredictiveModel),
}

impl Output {
    pub fn as_dataset(&self) -> Option<&Dataset> {
        match self {
            Output::Dataset(d) => Some(d),
            Output::Model(_) => None,
        }
    }

    pub fn is_model(&self) -> bool {
        matches!(self, Output::Model(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecutionError {
    /// The component cannot work with this data (the violating condition is
    /// named in the message).
    #[error("incompatible data: {0}")]
    IncompatibleData(String),
    /// Structurally acceptable data the algorithm still cannot fit, e.g.
    /// least squares on rank-deficient zero-row input.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid hyperparameter: {0}")]
    InvalidParam(String),
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("component `{0}` is not in the registry")]
pub struct NotFound(pub String);

/// The built-in component registry.
///
/// Ground-truth behavior (induced capabilities must agree with this):
///
/// | id | accepts | rejects | feature effects |
/// |----|---------|---------|-----------------|
/// | ReplaceMissingValues | everything (total over the probe suite) | — | clears MISSING_VALUES where imputation is possible |
/// | PeriodicSampling | everything with at least one row | zero-row input | none |
/// | NumericToNominal | any class/attrs except date/string | date/string data | NUMERIC_ATTRIBUTES -> NOMINAL_ATTRIBUTES |
/// | NominalToNumeric | any class/attrs except date/string | date/string data, empty nominal attributes | NOMINAL/BINARY/UNARY_ATTRIBUTES -> NUMERIC_ATTRIBUTES |
/// | PrincipalComponents | numeric attributes, any non-date/string class, missing class values | non-numeric attributes, missing attribute values, date/string class | none |
/// | RemoveUseless | any class/attrs except date/string | date/string data | drops UNARY and EMPTY_NOMINAL attributes |
/// | IQROutlierRemoval | non-missing data, any class/attrs except date/string | missing attribute values, date/string data | none |
/// | LinearRegressor | numeric class + numeric attributes, no missing | everything else | fits a model |
/// | NaiveBayesNominal | binary/nominal class + nominal-kind attributes, missing attribute values | numeric/date/string data, unary class, missing class values | fits a model |
/// | MajorityClassifier | unary/binary/nominal class, any attributes, any missing | numeric/date/string class | fits a model |
/// | DecisionStump | binary/nominal class, numeric/nominal attributes, no missing | unary class, date/string data, missing values | fits a model |
pub fn registry() -> &'static [ComponentDescriptor] {
    static REGISTRY: OnceLock<Vec<ComponentDescriptor>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        use Category::*;
        use ComponentKind::{Filter, Predictor as PredictorKind};
        vec![
            ComponentDescriptor::new("ReplaceMissingValues", Filter, MissingValueHandling, &[]),
            ComponentDescriptor::new(
                "PeriodicSampling",
                Filter,
                DataSampling,
                &[("k", ParamValue::Int(2))],
            ),
            ComponentDescriptor::new(
                "NumericToNominal",
                Filter,
                DataTransformation,
                &[("bins", ParamValue::Int(10))],
            ),
            ComponentDescriptor::new("NominalToNumeric", Filter, DataTransformation, &[]),
            ComponentDescriptor::new(
                "PrincipalComponents",
                Filter,
                DimensionalityReduction,
                &[("variance_covered", ParamValue::Float(0.95))],
            ),
            ComponentDescriptor::new("RemoveUseless", Filter, DataTransformation, &[]),
            ComponentDescriptor::new(
                "IQROutlierRemoval",
                Filter,
                OutlierRemoval,
                &[("factor", ParamValue::Float(1.5))],
            ),
            ComponentDescriptor::new("LinearRegressor", PredictorKind, Category::Predictor, &[]),
            ComponentDescriptor::new("NaiveBayesNominal", PredictorKind, Category::Predictor, &[]),
            ComponentDescriptor::new("MajorityClassifier", PredictorKind, Category::Predictor, &[]),
            ComponentDescriptor::new("DecisionStump", PredictorKind, Category::Predictor, &[]),
        ]
    })
}

pub fn lookup(id: &str) -> Result<&'static ComponentDescriptor, NotFound> {
    registry()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| NotFound(id.to_string()))
}

/// Runs one component. Filters yield a transformed [`Dataset`], predictors a
/// [`PredictiveModel`]; a capability violation comes back as
/// [`ExecutionError::IncompatibleData`] naming the condition.
pub fn execute_component(
    component: &ComponentDescriptor,
    dataset: &Dataset,
) -> Result<Output, ExecutionError> {
    match component.id.as_str() {
        "ReplaceMissingValues" => filters::replace_missing_values(dataset).map(Output::Dataset),
        "PeriodicSampling" => {
            filters::periodic_sampling(dataset, component.int_param("k")?).map(Output::Dataset)
        }
        "NumericToNominal" => {
            filters::numeric_to_nominal(dataset, component.int_param("bins")?).map(Output::Dataset)
        }
        "NominalToNumeric" => filters::nominal_to_numeric(dataset).map(Output::Dataset),
        "PrincipalComponents" => {
            filters::principal_components(dataset, component.float_param("variance_covered")?)
                .map(Output::Dataset)
        }
        "RemoveUseless" => filters::remove_useless(dataset).map(Output::Dataset),
        "IQROutlierRemoval" => {
            filters::iqr_outlier_removal(dataset, component.float_param("factor")?)
                .map(Output::Dataset)
        }
        "LinearRegressor" => predictors::linear_regressor(dataset).map(Output::Model),
        "NaiveBayesNominal" => predictors::naive_bayes_nominal(dataset).map(Output::Model),
        "MajorityClassifier" => predictors::majority_classifier(dataset).map(Output::Model),
        "DecisionStump" => predictors::decision_stump(dataset).map(Output::Model),
        other => Err(ExecutionError::UnknownComponent(other.to_string())),
    }
}

/// Rejection shared by most built-ins: date or string data anywhere.
fn reject_date_string(dataset: &Dataset) -> Result<(), ExecutionError> {
    match dataset.class_attribute().kind {
        AttributeKind::Date => {
            return Err(ExecutionError::IncompatibleData("date class".into()));
        }
        AttributeKind::String => {
            return Err(ExecutionError::IncompatibleData("string class".into()));
        }
        _ => {}
    }
    for i in dataset.attribute_indices() {
        match dataset.attributes()[i].kind {
            AttributeKind::Date | AttributeKind::String => {
                return Err(ExecutionError::IncompatibleData(format!(
                    "{} attribute `{}`",
                    dataset.attributes()[i].kind.label(),
                    dataset.attributes()[i].name
                )));
            }
            _ => {}
        }
    }
    Ok(())
}

fn has_missing_attribute_values(dataset: &Dataset) -> bool {
    dataset
        .attribute_indices()
        .any(|i| dataset.column(i).any(|c| c.is_missing()))
}

fn has_missing_class_values(dataset: &Dataset) -> bool {
    dataset
        .column(dataset.class_index())
        .any(|c| c.is_missing())
}

#[cfg(test)]
mod tests;

//! The four built-in predictors. Fitting success alone defines validity;
//! none of them score their own accuracy.

use nalgebra::{DMatrix, DVector};

use super::{
    has_missing_attribute_values, has_missing_class_values, ExecutionError, ModelParams,
    PredictiveModel, StumpSplit,
};
use crate::dataset::{AttributeKind, Cell, Dataset};
use crate::dataset::extract_features;

type PredictorResult = Result<PredictiveModel, ExecutionError>;

fn model(component: &str, dataset: &Dataset, params: ModelParams) -> PredictiveModel {
    PredictiveModel {
        component: component.to_string(),
        params,
        trained_on: extract_features(dataset),
    }
}

/// Distinct declared class values, or an error when the class is not nominal.
fn nominal_class_values<'a>(dataset: &'a Dataset, who: &str) -> Result<&'a [String], ExecutionError> {
    match &dataset.class_attribute().kind {
        AttributeKind::Nominal(values) => Ok(values),
        other => Err(ExecutionError::IncompatibleData(format!(
            "{who} requires a nominal class, got {}",
            other.label()
        ))),
    }
}

/// Ordinary least squares against a numeric class. Requires all-numeric
/// attributes and a dataset with no missing cells anywhere.
pub fn linear_regressor(dataset: &Dataset) -> PredictorResult {
    if dataset.class_attribute().kind != AttributeKind::Numeric {
        return Err(ExecutionError::IncompatibleData("class not numeric".into()));
    }
    for i in dataset.attribute_indices() {
        if dataset.attributes()[i].kind != AttributeKind::Numeric {
            return Err(ExecutionError::IncompatibleData(format!(
                "{} attribute `{}`",
                dataset.attributes()[i].kind.label(),
                dataset.attributes()[i].name
            )));
        }
    }
    if has_missing_attribute_values(dataset) || has_missing_class_values(dataset) {
        return Err(ExecutionError::IncompatibleData("missing values".into()));
    }
    let n = dataset.n_rows();
    if n == 0 {
        return Err(ExecutionError::Degenerate("no rows".into()));
    }

    let attrs: Vec<usize> = dataset.attribute_indices().collect();
    let p = attrs.len() + 1; // intercept column first
    let mut x = DMatrix::<f64>::zeros(n, p);
    let mut y = DVector::<f64>::zeros(n);
    for r in 0..n {
        x[(r, 0)] = 1.0;
        for (c, &i) in attrs.iter().enumerate() {
            if let Cell::Numeric(v) = dataset.rows()[r][i] {
                x[(r, c + 1)] = v;
            }
        }
        if let Cell::Numeric(v) = dataset.rows()[r][dataset.class_index()] {
            y[r] = v;
        }
    }
    let normal = x.transpose() * &x;
    let rhs = x.transpose() * y;
    let weights = normal
        .cholesky()
        .map(|chol| chol.solve(&rhs))
        .ok_or_else(|| ExecutionError::Degenerate("rank-deficient design matrix".into()))?;

    Ok(model(
        "LinearRegressor",
        dataset,
        ModelParams::Linear {
            weights: weights.iter().copied().collect(),
        },
    ))
}

/// Laplace-smoothed naive Bayes over nominal-kind attributes. Requires a
/// binary or wider nominal class with no missing labels; missing attribute
/// values are simply skipped when counting.
pub fn naive_bayes_nominal(dataset: &Dataset) -> PredictorResult {
    let class_values = nominal_class_values(dataset, "NaiveBayesNominal")?.to_vec();
    if class_values.len() < 2 {
        return Err(ExecutionError::IncompatibleData("unary class".into()));
    }
    for i in dataset.attribute_indices() {
        if !dataset.attributes()[i].kind.is_nominal() {
            return Err(ExecutionError::IncompatibleData(format!(
                "{} attribute `{}`",
                dataset.attributes()[i].kind.label(),
                dataset.attributes()[i].name
            )));
        }
    }
    if has_missing_class_values(dataset) {
        return Err(ExecutionError::IncompatibleData("missing class values".into()));
    }
    if dataset.n_rows() == 0 {
        return Err(ExecutionError::Degenerate("no rows".into()));
    }

    let class_of = |row: &[Cell]| -> usize {
        match &row[dataset.class_index()] {
            Cell::Nominal(v) => class_values.iter().position(|x| x == v).expect("validated"),
            _ => unreachable!("missing class values rejected above"),
        }
    };

    let mut class_counts = vec![0usize; class_values.len()];
    for row in dataset.rows() {
        class_counts[class_of(row)] += 1;
    }
    let total = dataset.n_rows() as f64;
    let k = class_values.len() as f64;
    let priors: Vec<f64> = class_counts
        .iter()
        .map(|c| (*c as f64 + 1.0) / (total + k))
        .collect();

    let attrs: Vec<usize> = dataset.attribute_indices().collect();
    let mut tables = Vec::with_capacity(attrs.len());
    for &i in &attrs {
        let declared = match &dataset.attributes()[i].kind {
            AttributeKind::Nominal(v) => v,
            _ => unreachable!("non-nominal attributes rejected above"),
        };
        let mut counts = vec![vec![0usize; declared.len()]; class_values.len()];
        for row in dataset.rows() {
            if let Cell::Nominal(v) = &row[i] {
                let vi = declared.iter().position(|x| x == v).expect("validated");
                counts[class_of(row)][vi] += 1;
            }
        }
        let table: Vec<Vec<f64>> = counts
            .iter()
            .map(|per_value| {
                let seen: usize = per_value.iter().sum();
                per_value
                    .iter()
                    .map(|c| (*c as f64 + 1.0) / (seen as f64 + declared.len() as f64))
                    .collect()
            })
            .collect();
        tables.push(table);
    }

    Ok(model(
        "NaiveBayesNominal",
        dataset,
        ModelParams::NaiveBayes {
            class_values,
            priors,
            tables,
        },
    ))
}

/// Predicts the most frequent class label. Ignores the attributes entirely,
/// which makes it the most permissive predictor in the registry.
pub fn majority_classifier(dataset: &Dataset) -> PredictorResult {
    let class_values = nominal_class_values(dataset, "MajorityClassifier")?;
    let mut best: Option<(&String, usize)> = None;
    for v in class_values {
        let count = dataset
            .column(dataset.class_index())
            .filter(|c| matches!(c, Cell::Nominal(x) if x == v))
            .count();
        if count > 0 && best.is_none_or(|(_, b)| count > b) {
            best = Some((v, count));
        }
    }
    let (label, _) = best.ok_or_else(|| ExecutionError::Degenerate("no class values".into()))?;
    let label = label.clone();
    Ok(model("MajorityClassifier", dataset, ModelParams::Majority { label }))
}

/// One-level decision tree minimizing training error. Numeric attributes
/// split on a threshold, nominal ones on value equality; ties go to the
/// earliest attribute and split considered.
pub fn decision_stump(dataset: &Dataset) -> PredictorResult {
    let class_values = nominal_class_values(dataset, "DecisionStump")?.to_vec();
    if class_values.len() < 2 {
        return Err(ExecutionError::IncompatibleData("unary class".into()));
    }
    for i in dataset.attribute_indices() {
        match dataset.attributes()[i].kind {
            AttributeKind::Numeric | AttributeKind::Nominal(_) => {}
            AttributeKind::Date | AttributeKind::String => {
                return Err(ExecutionError::IncompatibleData(format!(
                    "{} attribute `{}`",
                    dataset.attributes()[i].kind.label(),
                    dataset.attributes()[i].name
                )));
            }
        }
    }
    if has_missing_attribute_values(dataset) || has_missing_class_values(dataset) {
        return Err(ExecutionError::IncompatibleData("missing values".into()));
    }
    if dataset.n_rows() == 0 {
        return Err(ExecutionError::Degenerate("no rows".into()));
    }
    let attrs: Vec<usize> = dataset.attribute_indices().collect();
    if attrs.is_empty() {
        return Err(ExecutionError::Degenerate("no attributes to split on".into()));
    }

    let class_idx: Vec<usize> = dataset
        .rows()
        .iter()
        .map(|row| match &row[dataset.class_index()] {
            Cell::Nominal(v) => class_values.iter().position(|x| x == v).expect("validated"),
            _ => unreachable!(),
        })
        .collect();
    let majority = |counts: &[usize]| -> (usize, usize) {
        // (label index, count); ties resolve to the earliest declared value.
        let mut best = (0, 0);
        for (i, c) in counts.iter().enumerate() {
            if *c > best.1 {
                best = (i, *c);
            }
        }
        best
    };

    let n = dataset.n_rows();
    let mut total_counts = vec![0usize; class_values.len()];
    for &ci in &class_idx {
        total_counts[ci] += 1;
    }

    let mut best: Option<(usize, StumpSplit, usize, usize, usize)> = None; // (attr, split, error, left leaf, right leaf)
    let mut consider = |attr: usize, split: StumpSplit, error: usize, left: usize, right: usize| {
        if best.as_ref().is_none_or(|b| error < b.2) {
            best = Some((attr, split, error, left, right));
        }
    };

    for &i in &attrs {
        match &dataset.attributes()[i].kind {
            AttributeKind::Numeric => {
                // Sweep sorted rows once, moving class counts left to right.
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|a, b| {
                    let va = match dataset.rows()[*a][i] {
                        Cell::Numeric(v) => v,
                        _ => unreachable!(),
                    };
                    let vb = match dataset.rows()[*b][i] {
                        Cell::Numeric(v) => v,
                        _ => unreachable!(),
                    };
                    va.total_cmp(&vb).then(a.cmp(b))
                });
                let value_at = |r: usize| match dataset.rows()[order[r]][i] {
                    Cell::Numeric(v) => v,
                    _ => unreachable!(),
                };
                let mut left_counts = vec![0usize; class_values.len()];
                let mut right_counts = total_counts.clone();
                for r in 0..n.saturating_sub(1) {
                    let ci = class_idx[order[r]];
                    left_counts[ci] += 1;
                    right_counts[ci] -= 1;
                    if value_at(r) == value_at(r + 1) {
                        continue; // not a boundary between distinct values
                    }
                    let threshold = (value_at(r) + value_at(r + 1)) / 2.0;
                    let (l_leaf, l_hits) = majority(&left_counts);
                    let (r_leaf, r_hits) = majority(&right_counts);
                    let error = n - l_hits - r_hits;
                    consider(i, StumpSplit::Threshold(threshold), error, l_leaf, r_leaf);
                }
            }
            AttributeKind::Nominal(declared) => {
                let mut per_value = vec![vec![0usize; class_values.len()]; declared.len()];
                for (r, row) in dataset.rows().iter().enumerate() {
                    if let Cell::Nominal(v) = &row[i] {
                        let vi = declared.iter().position(|x| x == v).expect("validated");
                        per_value[vi][class_idx[r]] += 1;
                    }
                }
                for (vi, value) in declared.iter().enumerate() {
                    let left_counts = &per_value[vi];
                    let right_counts: Vec<usize> = total_counts
                        .iter()
                        .zip(left_counts)
                        .map(|(t, l)| t - l)
                        .collect();
                    let (l_leaf, l_hits) = majority(left_counts);
                    let (r_leaf, r_hits) = majority(&right_counts);
                    let error = n - l_hits - r_hits;
                    consider(i, StumpSplit::Equals(value.clone()), error, l_leaf, r_leaf);
                }
            }
            _ => unreachable!("date/string rejected above"),
        }
    }

    // A single-attribute dataset with one distinct numeric value yields no
    // candidate threshold; fall back to an always-right split.
    let (attr, split, _, left, right) = best.unwrap_or_else(|| {
        let (leaf, _) = majority(&total_counts);
        (attrs[0], StumpSplit::Threshold(f64::NEG_INFINITY), 0, leaf, leaf)
    });

    Ok(model(
        "DecisionStump",
        dataset,
        ModelParams::Stump {
            attribute: dataset.attributes()[attr].name.clone(),
            split,
            left_label: class_values[left].clone(),
            right_label: class_values[right].clone(),
        },
    ))
}

//! The seven built-in filters. Every filter preserves the class attribute
//! and never invents rows; determinism is part of the contract.

use nalgebra::{DMatrix, DVector};

use super::{
    has_missing_attribute_values, reject_date_string, ExecutionError,
};
use crate::dataset::{Attribute, AttributeKind, Cell, Dataset};

type FilterResult = Result<Dataset, ExecutionError>;

fn rebuild(source: &Dataset, attributes: Vec<Attribute>, class_index: usize, rows: Vec<Vec<Cell>>) -> FilterResult {
    Dataset::new(source.name(), attributes, class_index, rows)
        .map_err(|e| ExecutionError::Degenerate(format!("filter produced invalid dataset: {e}")))
}

/// Mean-imputes numeric attributes and mode-imputes nominal ones. The class
/// column and date/string columns pass through untouched, as do columns with
/// no observed values at all.
pub fn replace_missing_values(dataset: &Dataset) -> FilterResult {
    let mut replacements: Vec<Option<Cell>> = vec![None; dataset.attributes().len()];
    for i in dataset.attribute_indices() {
        if !dataset.column(i).any(|c| c.is_missing()) {
            continue;
        }
        match &dataset.attributes()[i].kind {
            AttributeKind::Numeric => {
                let values: Vec<f64> = dataset
                    .column(i)
                    .filter_map(|c| match c {
                        Cell::Numeric(v) => Some(*v),
                        _ => None,
                    })
                    .collect();
                if !values.is_empty() {
                    let mean = values.iter().sum::<f64>() / values.len() as f64;
                    replacements[i] = Some(Cell::Numeric(mean));
                }
            }
            AttributeKind::Nominal(declared) => {
                // Mode; ties resolve to the earliest declared value.
                let mut mode: Option<(&String, usize)> = None;
                for v in declared {
                    let count = dataset
                        .column(i)
                        .filter(|c| matches!(c, Cell::Nominal(x) if x == v))
                        .count();
                    if count > 0 && mode.is_none_or(|(_, best)| count > best) {
                        mode = Some((v, count));
                    }
                }
                replacements[i] = mode.map(|(v, _)| Cell::Nominal(v.clone()));
            }
            AttributeKind::Date | AttributeKind::String => {}
        }
    }

    let rows = dataset
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(i, cell)| match (cell, &replacements[i]) {
                    (Cell::Missing, Some(replacement)) => replacement.clone(),
                    _ => cell.clone(),
                })
                .collect()
        })
        .collect();
    rebuild(dataset, dataset.attributes().to_vec(), dataset.class_index(), rows)
}

/// Keeps every k-th row, starting with row 0.
pub fn periodic_sampling(dataset: &Dataset, k: i64) -> FilterResult {
    if k < 1 {
        return Err(ExecutionError::InvalidParam(format!("k must be >= 1, got {k}")));
    }
    if dataset.n_rows() == 0 {
        return Err(ExecutionError::Degenerate("no rows to sample".into()));
    }
    let rows = dataset
        .rows()
        .iter()
        .step_by(k as usize)
        .cloned()
        .collect();
    rebuild(dataset, dataset.attributes().to_vec(), dataset.class_index(), rows)
}

/// Equal-width binning of every non-class numeric attribute into a nominal
/// attribute with `bins` declared labels `b0..b{bins-1}`. Missing cells stay
/// missing; the class attribute is untouched even when numeric.
pub fn numeric_to_nominal(dataset: &Dataset, bins: i64) -> FilterResult {
    if bins < 1 {
        return Err(ExecutionError::InvalidParam(format!("bins must be >= 1, got {bins}")));
    }
    reject_date_string(dataset)?;
    let bins = bins as usize;
    let labels: Vec<String> = (0..bins).map(|b| format!("b{b}")).collect();

    let mut attributes = dataset.attributes().to_vec();
    let mut bounds: Vec<Option<(f64, f64)>> = vec![None; attributes.len()];
    for i in dataset.attribute_indices() {
        if attributes[i].kind == AttributeKind::Numeric {
            let values: Vec<f64> = dataset
                .column(i)
                .filter_map(|c| match c {
                    Cell::Numeric(v) => Some(*v),
                    _ => None,
                })
                .collect();
            bounds[i] = values
                .iter()
                .fold(None, |acc: Option<(f64, f64)>, v| match acc {
                    None => Some((*v, *v)),
                    Some((lo, hi)) => Some((lo.min(*v), hi.max(*v))),
                });
            if bounds[i].is_none() {
                // No observed values, no bin edges; binning an all-missing
                // column would fabricate an empty nominal attribute.
                return Err(ExecutionError::Degenerate(format!(
                    "no values to bin for `{}`",
                    attributes[i].name
                )));
            }
            attributes[i].kind = AttributeKind::Nominal(labels.clone());
        }
    }

    let rows = dataset
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(i, cell)| match (cell, &bounds[i]) {
                    (Cell::Numeric(v), Some((lo, hi))) => {
                        let idx = if hi > lo {
                            (((v - lo) / (hi - lo)) * bins as f64).floor() as usize
                        } else {
                            0
                        };
                        Cell::Nominal(labels[idx.min(bins - 1)].clone())
                    }
                    _ => cell.clone(),
                })
                .collect()
        })
        .collect();
    rebuild(dataset, attributes, dataset.class_index(), rows)
}

/// Index-encodes every non-class nominal attribute: a value becomes its
/// position in the declared value set. An empty nominal attribute has no
/// values to encode and is rejected.
pub fn nominal_to_numeric(dataset: &Dataset) -> FilterResult {
    reject_date_string(dataset)?;
    for i in dataset.attribute_indices() {
        if dataset.attributes()[i].kind.is_nominal() && dataset.column_all_missing(i) {
            return Err(ExecutionError::IncompatibleData(format!(
                "empty nominal attribute `{}`",
                dataset.attributes()[i].name
            )));
        }
    }

    let mut attributes = dataset.attributes().to_vec();
    let mut encodings: Vec<Option<Vec<String>>> = vec![None; attributes.len()];
    for i in dataset.attribute_indices() {
        if let AttributeKind::Nominal(declared) = &dataset.attributes()[i].kind {
            encodings[i] = Some(declared.clone());
            attributes[i].kind = AttributeKind::Numeric;
        }
    }

    let rows = dataset
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(i, cell)| match (cell, &encodings[i]) {
                    (Cell::Nominal(v), Some(declared)) => {
                        let idx = declared.iter().position(|x| x == v).expect("validated cell");
                        Cell::Numeric(idx as f64)
                    }
                    _ => cell.clone(),
                })
                .collect()
        })
        .collect();
    rebuild(dataset, attributes, dataset.class_index(), rows)
}

/// Projects the numeric attributes onto the leading eigenvectors of their
/// covariance matrix, keeping as many components as needed to cover
/// `variance_covered` of the total variance. Rejects anything non-numeric
/// among the attributes and any missing attribute values.
pub fn principal_components(dataset: &Dataset, variance_covered: f64) -> FilterResult {
    if variance_covered.is_nan() || variance_covered <= 0.0 || variance_covered > 1.0 {
        return Err(ExecutionError::InvalidParam(format!(
            "variance_covered must be in (0, 1], got {variance_covered}"
        )));
    }
    reject_date_string(dataset)?;
    for i in dataset.attribute_indices() {
        if dataset.attributes()[i].kind != AttributeKind::Numeric {
            return Err(ExecutionError::IncompatibleData(format!(
                "{} attribute `{}`",
                dataset.attributes()[i].kind.label(),
                dataset.attributes()[i].name
            )));
        }
    }
    if has_missing_attribute_values(dataset) {
        return Err(ExecutionError::IncompatibleData("missing values".into()));
    }
    let attr_indices: Vec<usize> = dataset.attribute_indices().collect();
    if attr_indices.is_empty() {
        return Err(ExecutionError::Degenerate("no numeric attributes".into()));
    }
    let n = dataset.n_rows();
    if n < 2 {
        return Err(ExecutionError::Degenerate(format!(
            "covariance needs at least 2 rows, got {n}"
        )));
    }

    let p = attr_indices.len();
    let mut data = DMatrix::<f64>::zeros(n, p);
    for (col, &i) in attr_indices.iter().enumerate() {
        for (row, cell) in dataset.column(i).enumerate() {
            if let Cell::Numeric(v) = cell {
                data[(row, col)] = *v;
            }
        }
    }
    // Center columns.
    for col in 0..p {
        let mean = data.column(col).sum() / n as f64;
        for row in 0..n {
            data[(row, col)] -= mean;
        }
    }
    let covariance = (data.transpose() * &data) / (n as f64 - 1.0);
    let eigen = covariance.symmetric_eigen();

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|a, b| {
        eigen.eigenvalues[*b]
            .total_cmp(&eigen.eigenvalues[*a])
            .then(a.cmp(b))
    });
    let total: f64 = eigen.eigenvalues.iter().map(|v| v.max(0.0)).sum();
    if total <= f64::EPSILON {
        return Err(ExecutionError::Degenerate("zero variance".into()));
    }
    let mut kept = 0usize;
    let mut cumulative = 0.0;
    for &idx in &order {
        kept += 1;
        cumulative += eigen.eigenvalues[idx].max(0.0);
        if cumulative / total >= variance_covered {
            break;
        }
    }

    let mut projection = DMatrix::<f64>::zeros(p, kept);
    for (out_col, &idx) in order[..kept].iter().enumerate() {
        let mut v: DVector<f64> = eigen.eigenvectors.column(idx).into();
        // Canonical sign: largest-magnitude entry is positive.
        let dominant = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        if v[dominant] < 0.0 {
            v.neg_mut();
        }
        projection.set_column(out_col, &v);
    }
    let projected = data * projection;

    let mut attributes: Vec<Attribute> = (0..kept)
        .map(|c| Attribute::numeric(format!("pc{}", c + 1)))
        .collect();
    attributes.push(dataset.class_attribute().clone());
    let class_index = kept;
    let rows: Vec<Vec<Cell>> = (0..n)
        .map(|r| {
            let mut row: Vec<Cell> = (0..kept).map(|c| Cell::Numeric(projected[(r, c)])).collect();
            row.push(dataset.rows()[r][dataset.class_index()].clone());
            row
        })
        .collect();
    rebuild(dataset, attributes, class_index, rows)
}

/// Drops unary nominal attributes (one declared value) and empty nominal
/// attributes (no observed values). The class attribute is always kept.
pub fn remove_useless(dataset: &Dataset) -> FilterResult {
    reject_date_string(dataset)?;
    let keep: Vec<usize> = (0..dataset.attributes().len())
        .filter(|&i| {
            if i == dataset.class_index() {
                return true;
            }
            match &dataset.attributes()[i].kind {
                AttributeKind::Nominal(declared) => {
                    let distinct: std::collections::BTreeSet<_> = declared.iter().collect();
                    distinct.len() > 1 && !dataset.column_all_missing(i)
                }
                _ => true,
            }
        })
        .collect();

    let attributes: Vec<Attribute> = keep.iter().map(|&i| dataset.attributes()[i].clone()).collect();
    let class_index = keep.iter().position(|&i| i == dataset.class_index()).expect("class kept");
    let rows = dataset
        .rows()
        .iter()
        .map(|row| keep.iter().map(|&i| row[i].clone()).collect())
        .collect();
    rebuild(dataset, attributes, class_index, rows)
}

/// Drops every row holding a numeric attribute value outside
/// `[q1 - factor*iqr, q3 + factor*iqr]` for that attribute. Quartiles use
/// linear interpolation over the sorted values. Missing attribute values are
/// rejected up front; missing class values pass through.
pub fn iqr_outlier_removal(dataset: &Dataset, factor: f64) -> FilterResult {
    if factor.is_nan() || factor <= 0.0 {
        return Err(ExecutionError::InvalidParam(format!("factor must be > 0, got {factor}")));
    }
    reject_date_string(dataset)?;
    if has_missing_attribute_values(dataset) {
        return Err(ExecutionError::IncompatibleData("missing values".into()));
    }

    let mut fences: Vec<Option<(f64, f64)>> = vec![None; dataset.attributes().len()];
    for i in dataset.attribute_indices() {
        if dataset.attributes()[i].kind != AttributeKind::Numeric {
            continue;
        }
        let mut values: Vec<f64> = dataset
            .column(i)
            .filter_map(|c| match c {
                Cell::Numeric(v) => Some(*v),
                _ => None,
            })
            .collect();
        if values.is_empty() {
            continue;
        }
        values.sort_by(|a, b| a.total_cmp(b));
        let q1 = interpolated_quantile(&values, 0.25);
        let q3 = interpolated_quantile(&values, 0.75);
        let iqr = q3 - q1;
        fences[i] = Some((q1 - factor * iqr, q3 + factor * iqr));
    }

    let rows: Vec<Vec<Cell>> = dataset
        .rows()
        .iter()
        .filter(|row| {
            row.iter().enumerate().all(|(i, cell)| match (cell, &fences[i]) {
                (Cell::Numeric(v), Some((lo, hi))) => v >= lo && v <= hi,
                _ => true,
            })
        })
        .cloned()
        .collect();
    rebuild(dataset, dataset.attributes().to_vec(), dataset.class_index(), rows)
}

fn interpolated_quantile(sorted: &[f64], q: f64) -> f64 {
    let position = (sorted.len() - 1) as f64 * q;
    let lower = position.floor() as usize;
    let upper = position.ceil() as usize;
    let weight = position - lower as f64;
    sorted[lower] * (1.0 - weight) + sorted[upper] * weight
}

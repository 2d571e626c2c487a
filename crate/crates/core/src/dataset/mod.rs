//! Concrete tabular datasets and the abstraction function that maps a
//! dataset to its transformed-feature vector.
//!
//! A [`Dataset`] is the real thing components execute on: typed attributes,
//! a designated class attribute, rows of cells where any cell may be
//! missing. [`extract_features`] collapses all of that into a 16-slot
//! binary vector; the surrogate never looks at anything else.

mod arff;
mod csv_schema;

pub use arff::{load_arff_str, write_arff};
pub use csv_schema::load_csv_with_schema;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Binary, FeatureVector, TransformedFeature};

/// Kind of a dataset attribute. Nominal attributes carry their declared
/// value set; an empty set is legal only when every cell of the column is
/// missing (the "empty column" case).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttributeKind {
    Numeric,
    Nominal(Vec<String>),
    Date,
    String,
}

impl AttributeKind {
    pub fn is_nominal(&self) -> bool {
        matches!(self, AttributeKind::Nominal(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            AttributeKind::Numeric => "numeric",
            AttributeKind::Nominal(_) => "nominal",
            AttributeKind::Date => "date",
            AttributeKind::String => "string",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn new(name: impl Into<String>, kind: AttributeKind) -> Self {
        Attribute {
            name: name.into(),
            kind,
        }
    }

    pub fn nominal<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Attribute::new(name, AttributeKind::Nominal(values.into_iter().map(Into::into).collect()))
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute::new(name, AttributeKind::Numeric)
    }
}

/// One cell of a row. `Missing` is what `?` parses to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Numeric(f64),
    Nominal(String),
    Date(String),
    Str(String),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    fn conforms_to(&self, kind: &AttributeKind) -> bool {
        match (self, kind) {
            (Cell::Missing, _) => true,
            // Non-finite values would poison every downstream comparison.
            (Cell::Numeric(v), AttributeKind::Numeric) => v.is_finite(),
            (Cell::Nominal(v), AttributeKind::Nominal(values)) => values.iter().any(|x| x == v),
            (Cell::Date(_), AttributeKind::Date) => true,
            (Cell::Str(_), AttributeKind::String) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Numeric(v) => write!(f, "{v}"),
            Cell::Nominal(v) | Cell::Date(v) | Cell::Str(v) => f.write_str(v),
            Cell::Missing => f.write_str("?"),
        }
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("row {row}, column `{column}`: {message}")]
    Schema {
        row: usize,
        column: String,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Immutable tabular dataset. Construction validates every invariant:
/// row widths, cell/kind conformance, class index range, and that a
/// nominal class declares at least one value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    attributes: Vec<Attribute>,
    class_index: usize,
    rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        attributes: Vec<Attribute>,
        class_index: usize,
        rows: Vec<Vec<Cell>>,
    ) -> Result<Self, DatasetError> {
        let name = name.into();
        if attributes.is_empty() {
            return Err(DatasetError::Invalid(format!(
                "dataset `{name}` declares no attributes"
            )));
        }
        if class_index >= attributes.len() {
            return Err(DatasetError::Invalid(format!(
                "class index {class_index} out of range for {} attributes",
                attributes.len()
            )));
        }
        if let AttributeKind::Nominal(values) = &attributes[class_index].kind {
            if values.is_empty() {
                return Err(DatasetError::Invalid(
                    "nominal class attribute must declare at least one value".into(),
                ));
            }
        }
        for (i, attr) in attributes.iter().enumerate() {
            if attributes[..i].iter().any(|a| a.name == attr.name) {
                return Err(DatasetError::Invalid(format!(
                    "duplicate attribute name `{}`",
                    attr.name
                )));
            }
        }
        let dataset = Dataset {
            name,
            attributes,
            class_index,
            rows,
        };
        dataset.check_rows()?;
        Ok(dataset)
    }

    fn check_rows(&self) -> Result<(), DatasetError> {
        for (r, row) in self.rows.iter().enumerate() {
            if row.len() != self.attributes.len() {
                return Err(DatasetError::Invalid(format!(
                    "row {r} has {} cells, expected {}",
                    row.len(),
                    self.attributes.len()
                )));
            }
            for (c, cell) in row.iter().enumerate() {
                if !cell.conforms_to(&self.attributes[c].kind) {
                    return Err(DatasetError::Schema {
                        row: r,
                        column: self.attributes[c].name.clone(),
                        message: format!(
                            "cell `{cell}` does not conform to {} attribute",
                            self.attributes[c].kind.label()
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    pub fn class_attribute(&self) -> &Attribute {
        &self.attributes[self.class_index]
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Indices of the non-class attributes, in declaration order.
    pub fn attribute_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.attributes.len()).filter(move |i| *i != self.class_index)
    }

    pub fn column(&self, index: usize) -> impl Iterator<Item = &Cell> + '_ {
        self.rows.iter().map(move |row| &row[index])
    }

    /// True when every cell of the column is missing. Vacuously true on a
    /// dataset with no rows.
    pub fn column_all_missing(&self, index: usize) -> bool {
        self.column(index).all(Cell::is_missing)
    }
}

/// Input format for [`load_dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Minimal ARFF subset: `@relation`, `@attribute`, `@data`, `?` for
    /// missing, last attribute is the class unless a `%class:` comment says
    /// otherwise.
    ArffSubset,
    /// CSV file accompanied by a `<file>.schema.json` sidecar declaring
    /// attribute kinds and the class attribute.
    CsvWithSchema,
}

pub fn load_dataset(path: impl AsRef<Path>, format: Format) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    match format {
        Format::ArffSubset => {
            let text = std::fs::read_to_string(path)?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".to_string());
            load_arff_str(&text, &name)
        }
        Format::CsvWithSchema => load_csv_with_schema(path),
    }
}

/// Distinct-value bucketing shared by class-kind and attribute-kind slots:
/// a nominal column with exactly 1 declared value is unary, 2 is binary,
/// 3 or more is plain nominal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NominalArity {
    Unary,
    Binary,
    Wider,
}

fn nominal_arity(values: &[String]) -> Option<NominalArity> {
    let distinct: BTreeSet<&String> = values.iter().collect();
    match distinct.len() {
        0 => None,
        1 => Some(NominalArity::Unary),
        2 => Some(NominalArity::Binary),
        _ => Some(NominalArity::Wider),
    }
}

/// Computes the dataset's transformed-feature vector.
///
/// Class-kind slots are mutually exclusive: the class attribute sets exactly
/// one of UNARY/BINARY/NOMINAL/NUMERIC/DATE/STRING_CLASS. SYMBOLIC_CLASS is
/// reserved for schemas that declare it explicitly, which the bundled
/// loaders never produce. PREDICTIVE_MODEL is always 0 for a dataset.
/// The result depends only on the schema and the multiset of cells, never
/// on row order.
pub fn extract_features(dataset: &Dataset) -> FeatureVector<Binary> {
    use TransformedFeature::*;

    let mut v = FeatureVector::<Binary>::zeros();

    match &dataset.class_attribute().kind {
        AttributeKind::Numeric => v.set(NumericClass, 1),
        AttributeKind::Date => v.set(DateClass, 1),
        AttributeKind::String => v.set(StringClass, 1),
        AttributeKind::Nominal(values) => {
            // Construction guarantees a non-empty declared set.
            match nominal_arity(values).expect("nominal class declares values") {
                NominalArity::Unary => v.set(UnaryClass, 1),
                NominalArity::Binary => v.set(BinaryClass, 1),
                NominalArity::Wider => v.set(NominalClass, 1),
            }
        }
    }
    if dataset.column(dataset.class_index()).any(Cell::is_missing) {
        v.set(MissingClassValues, 1);
    }

    for i in dataset.attribute_indices() {
        let attr = &dataset.attributes()[i];
        match &attr.kind {
            AttributeKind::Numeric => v.set(NumericAttributes, 1),
            AttributeKind::Date => v.set(DateAttributes, 1),
            AttributeKind::String => {} // no STRING_ATTRIBUTES slot exists
            AttributeKind::Nominal(values) => {
                match nominal_arity(values) {
                    Some(NominalArity::Unary) => v.set(UnaryAttributes, 1),
                    Some(NominalArity::Binary) => v.set(BinaryAttributes, 1),
                    Some(NominalArity::Wider) => v.set(NominalAttributes, 1),
                    None => {} // declared empty; the column itself is empty
                }
                if dataset.column_all_missing(i) {
                    v.set(EmptyNominalAttributes, 1);
                }
            }
        }
        if dataset.column(i).any(Cell::is_missing) {
            v.set(MissingValues, 1);
        }
    }

    v
}

#[cfg(test)]
mod tests;

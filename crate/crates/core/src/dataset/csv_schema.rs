//! CSV ingestion driven by a JSON schema sidecar.
//!
//! `data.csv` is read together with `data.csv.schema.json`:
//!
//! ```json
//! {
//!   "name": "mydata",
//!   "class": "label",
//!   "attributes": [
//!     {"name": "x", "kind": "numeric"},
//!     {"name": "label", "kind": {"nominal": ["yes", "no"]}}
//!   ]
//! }
//! ```
//!
//! `class` defaults to the last attribute. Cells equal to `?` are missing.

use std::path::Path;

use serde::Deserialize;

use super::{Attribute, AttributeKind, Cell, Dataset, DatasetError};

#[derive(Deserialize)]
struct SchemaFile {
    name: Option<String>,
    class: Option<String>,
    attributes: Vec<SchemaAttribute>,
    #[serde(default)]
    has_header: bool,
}

#[derive(Deserialize)]
struct SchemaAttribute {
    name: String,
    kind: SchemaKind,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum SchemaKind {
    Numeric,
    Date,
    String,
    #[serde(untagged)]
    Tagged {
        nominal: Vec<String>,
    },
}

impl SchemaKind {
    fn into_kind(self) -> AttributeKind {
        match self {
            SchemaKind::Numeric => AttributeKind::Numeric,
            SchemaKind::Date => AttributeKind::Date,
            SchemaKind::String => AttributeKind::String,
            SchemaKind::Tagged { nominal } => AttributeKind::Nominal(nominal),
        }
    }
}

pub fn load_csv_with_schema(path: &Path) -> Result<Dataset, DatasetError> {
    let schema_path = {
        let mut p = path.as_os_str().to_owned();
        p.push(".schema.json");
        std::path::PathBuf::from(p)
    };
    let schema_text = std::fs::read_to_string(&schema_path).map_err(|e| {
        DatasetError::Invalid(format!(
            "cannot read schema sidecar {}: {e}",
            schema_path.display()
        ))
    })?;
    let schema: SchemaFile = serde_json::from_str(&schema_text)
        .map_err(|e| DatasetError::Invalid(format!("schema sidecar: {e}")))?;

    let attributes: Vec<Attribute> = schema
        .attributes
        .into_iter()
        .map(|a| Attribute::new(a.name, a.kind.into_kind()))
        .collect();
    if attributes.is_empty() {
        return Err(DatasetError::Invalid("schema declares no attributes".into()));
    }
    let class_index = match &schema.class {
        Some(class_name) => attributes
            .iter()
            .position(|a| &a.name == class_name)
            .ok_or_else(|| {
                DatasetError::Invalid(format!("schema class `{class_name}` is not an attribute"))
            })?,
        None => attributes.len() - 1,
    };

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(schema.has_header)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| DatasetError::Invalid(format!("cannot open {}: {e}", path.display())))?;

    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DatasetError::Parse {
            line: r + 1,
            message: e.to_string(),
        })?;
        if record.len() != attributes.len() {
            return Err(DatasetError::Parse {
                line: r + 1,
                message: format!(
                    "row has {} fields, expected {}",
                    record.len(),
                    attributes.len()
                ),
            });
        }
        let mut row = Vec::with_capacity(attributes.len());
        for (attr, field) in attributes.iter().zip(record.iter()) {
            row.push(parse_cell(field, attr, r)?);
        }
        rows.push(row);
    }

    let name = schema.name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into())
    });
    Dataset::new(name, attributes, class_index, rows)
}

fn parse_cell(field: &str, attr: &Attribute, row: usize) -> Result<Cell, DatasetError> {
    if field == "?" {
        return Ok(Cell::Missing);
    }
    match &attr.kind {
        AttributeKind::Numeric => {
            field
                .parse::<f64>()
                .map(Cell::Numeric)
                .map_err(|_| DatasetError::Schema {
                    row,
                    column: attr.name.clone(),
                    message: format!("`{field}` is not numeric"),
                })
        }
        AttributeKind::Nominal(values) => {
            if values.iter().any(|v| v == field) {
                Ok(Cell::Nominal(field.to_string()))
            } else {
                Err(DatasetError::Schema {
                    row,
                    column: attr.name.clone(),
                    message: format!("`{field}` is not among the declared nominal values"),
                })
            }
        }
        AttributeKind::Date => Ok(Cell::Date(field.to_string())),
        AttributeKind::String => Ok(Cell::Str(field.to_string())),
    }
}

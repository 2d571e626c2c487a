//! Minimal ARFF reader and writer.
//!
//! Supported subset: `@relation`, `@attribute <name> numeric|date|string|{v1,v2,...}`,
//! `@data`, `?` for missing cells, `%` comments. The class attribute is the
//! last one declared unless a `%class: <name>` comment appears before
//! `@data`. Sparse rows, relational attributes and weights are out of scope.

use super::{Attribute, AttributeKind, Cell, Dataset, DatasetError};

fn parse_err(line: usize, message: impl Into<String>) -> DatasetError {
    DatasetError::Parse {
        line,
        message: message.into(),
    }
}

fn unquote(token: &str) -> &str {
    let t = token.trim();
    if t.len() >= 2
        && ((t.starts_with('\'') && t.ends_with('\'')) || (t.starts_with('"') && t.ends_with('"')))
    {
        &t[1..t.len() - 1]
    } else {
        t
    }
}

/// Splits a data row or nominal value list on commas, honoring single and
/// double quotes.
fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut quote: Option<char> = None;
    for ch in line.chars() {
        match quote {
            Some(q) => {
                if ch == q {
                    quote = None;
                }
                current.push(ch);
            }
            None => match ch {
                '\'' | '"' => {
                    quote = Some(ch);
                    current.push(ch);
                }
                ',' => {
                    fields.push(current.clone());
                    current.clear();
                }
                _ => current.push(ch),
            },
        }
    }
    fields.push(current);
    fields
}

pub fn load_arff_str(text: &str, default_name: &str) -> Result<Dataset, DatasetError> {
    let mut name = default_name.to_string();
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut class_override: Option<String> = None;
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut in_data = false;
    let mut data_row = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('%') {
            let comment = comment.trim();
            if let Some(class_name) = comment
                .strip_prefix("class:")
                .or_else(|| comment.strip_prefix("class :"))
            {
                class_override = Some(unquote(class_name).to_string());
            }
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                name = unquote(line[9..].trim()).to_string();
            } else if lower.starts_with("@attribute") {
                attributes.push(parse_attribute(line[10..].trim(), lineno)?);
            } else if lower.starts_with("@data") {
                if attributes.is_empty() {
                    return Err(parse_err(lineno, "@data before any @attribute"));
                }
                in_data = true;
            } else {
                return Err(parse_err(lineno, format!("unrecognized declaration `{line}`")));
            }
        } else {
            let fields = split_csv_line(line);
            if fields.len() != attributes.len() {
                return Err(parse_err(
                    lineno,
                    format!(
                        "row has {} fields, expected {}",
                        fields.len(),
                        attributes.len()
                    ),
                ));
            }
            let mut row = Vec::with_capacity(fields.len());
            for (attr, field) in attributes.iter().zip(&fields) {
                row.push(parse_cell(field, attr, data_row)?);
            }
            rows.push(row);
            data_row += 1;
        }
    }

    if !in_data {
        return Err(parse_err(text.lines().count(), "missing @data section"));
    }

    let class_index = match class_override {
        Some(class_name) => attributes
            .iter()
            .position(|a| a.name == class_name)
            .ok_or_else(|| {
                DatasetError::Invalid(format!("%class names unknown attribute `{class_name}`"))
            })?,
        None => attributes.len() - 1,
    };

    Dataset::new(name, attributes, class_index, rows)
}

fn parse_attribute(rest: &str, lineno: usize) -> Result<Attribute, DatasetError> {
    let rest = rest.trim();
    if rest.is_empty() {
        return Err(parse_err(lineno, "@attribute without a name"));
    }
    // Name is either quoted or runs to the first whitespace / `{`.
    let (name, spec) = if rest.starts_with('\'') || rest.starts_with('"') {
        let q = rest.chars().next().unwrap();
        let end = rest[1..]
            .find(q)
            .ok_or_else(|| parse_err(lineno, "unterminated quoted attribute name"))?;
        (rest[1..=end].to_string(), rest[end + 2..].trim())
    } else {
        match rest.find(|c: char| c.is_whitespace() || c == '{') {
            Some(pos) => {
                let (n, s) = rest.split_at(pos);
                (n.to_string(), s.trim())
            }
            None => return Err(parse_err(lineno, format!("@attribute `{rest}` lacks a type"))),
        }
    };

    let kind = if let Some(body) = spec.strip_prefix('{') {
        let body = body
            .strip_suffix('}')
            .ok_or_else(|| parse_err(lineno, "unterminated nominal value set"))?;
        let values: Vec<String> = if body.trim().is_empty() {
            Vec::new()
        } else {
            split_csv_line(body)
                .iter()
                .map(|v| unquote(v).to_string())
                .collect()
        };
        AttributeKind::Nominal(values)
    } else {
        let type_word = spec.split_whitespace().next().unwrap_or("");
        match type_word.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => AttributeKind::Numeric,
            // An optional format string after `date` is accepted and ignored.
            "date" => AttributeKind::Date,
            "string" => AttributeKind::String,
            other => {
                return Err(parse_err(
                    lineno,
                    format!("unsupported attribute type `{other}`"),
                ))
            }
        }
    };

    Ok(Attribute { name, kind })
}

fn parse_cell(field: &str, attr: &Attribute, row: usize) -> Result<Cell, DatasetError> {
    let token = unquote(field);
    if token == "?" {
        return Ok(Cell::Missing);
    }
    match &attr.kind {
        AttributeKind::Numeric => token.parse::<f64>().map(Cell::Numeric).map_err(|_| {
            DatasetError::Schema {
                row,
                column: attr.name.clone(),
                message: format!("`{token}` is not numeric"),
            }
        }),
        AttributeKind::Nominal(values) => {
            if values.iter().any(|v| v == token) {
                Ok(Cell::Nominal(token.to_string()))
            } else {
                Err(DatasetError::Schema {
                    row,
                    column: attr.name.clone(),
                    message: format!("`{token}` is not among the declared nominal values"),
                })
            }
        }
        AttributeKind::Date => Ok(Cell::Date(token.to_string())),
        AttributeKind::String => Ok(Cell::Str(token.to_string())),
    }
}

/// Renders a dataset back to the ARFF subset accepted by [`load_arff_str`].
/// Numeric cells keep their shortest round-trippable form.
pub fn write_arff(dataset: &Dataset) -> String {
    let mut out = String::new();
    out.push_str(&format!("@relation {}\n", dataset.name()));
    if dataset.class_index() != dataset.attributes().len() - 1 {
        out.push_str(&format!(
            "%class: {}\n",
            dataset.attributes()[dataset.class_index()].name
        ));
    }
    for attr in dataset.attributes() {
        match &attr.kind {
            AttributeKind::Numeric => out.push_str(&format!("@attribute {} numeric\n", attr.name)),
            AttributeKind::Date => out.push_str(&format!("@attribute {} date\n", attr.name)),
            AttributeKind::String => out.push_str(&format!("@attribute {} string\n", attr.name)),
            AttributeKind::Nominal(values) => {
                out.push_str(&format!("@attribute {} {{{}}}\n", attr.name, values.join(",")));
            }
        }
    }
    out.push_str("@data\n");
    for row in dataset.rows() {
        let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

//! Tabular data: schemas, raw datasets, CSV ingestion and the encoded
//! numeric form every learner in this crate consumes.
//!
//! The pipeline is `load_csv` → [`split_domains`] → [`encode`] →
//! [`partition_label_rate`] / [`kfold`] / [`bootstrap`]. Labels are always
//! binary and stored as `0`/`1`.

mod encode;
mod sampling;
mod split;

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use encode::{encode, DomainPair, EncodedDataset, FeatureMatrix, UnlabeledSet};
pub use sampling::{
    bootstrap, bootstrap_indices, bootstrap_with, kfold, kfold_indices, partition_label_rate,
    BOOTSTRAP_RETRIES,
};
pub use split::{split_domains, Comparator, SplitRule};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AttributeKind {
    Numeric,
    Categorical { values: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    #[serde(flatten)]
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Numeric,
        }
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = S>,
    ) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Categorical {
                values: values.into_iter().map(Into::into).collect(),
            },
        }
    }

    /// Number of encoded columns this attribute expands to.
    pub fn width(&self) -> usize {
        match &self.kind {
            AttributeKind::Numeric => 1,
            AttributeKind::Categorical { values } => values.len(),
        }
    }
}

/// Attribute list plus the binary label column.
///
/// `label_values[0]` maps to class `0`, `label_values[1]` to class `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Schema {
    attributes: Vec<Attribute>,
    label: String,
    label_values: [String; 2],
}

impl Schema {
    pub fn new(
        attributes: Vec<Attribute>,
        label: impl Into<String>,
        label_values: [String; 2],
    ) -> Result<Self> {
        let label = label.into();
        let mut seen = HashMap::new();
        for (i, attr) in attributes.iter().enumerate() {
            if attr.name == label {
                return Err(Error::Schema(format!(
                    "attribute `{}` collides with the label column",
                    attr.name
                )));
            }
            if seen.insert(attr.name.as_str(), i).is_some() {
                return Err(Error::Schema(format!("duplicate attribute `{}`", attr.name)));
            }
            if let AttributeKind::Categorical { values } = &attr.kind {
                if values.is_empty() {
                    return Err(Error::Schema(format!(
                        "categorical attribute `{}` has an empty vocabulary",
                        attr.name
                    )));
                }
                let mut sorted: Vec<_> = values.iter().collect();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != values.len() {
                    return Err(Error::Schema(format!(
                        "categorical attribute `{}` repeats a vocabulary value",
                        attr.name
                    )));
                }
            }
        }
        if label_values[0] == label_values[1] {
            return Err(Error::Schema("label values must be distinct".into()));
        }
        Ok(Schema {
            attributes,
            label,
            label_values,
        })
    }

    /// Schema whose label column holds the literal values `0` and `1`.
    pub fn binary(attributes: Vec<Attribute>, label: impl Into<String>) -> Result<Self> {
        Schema::new(attributes, label, ["0".to_string(), "1".to_string()])
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn label_values(&self) -> &[String; 2] {
        &self.label_values
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// Column count after one-hot expansion.
    pub fn encoded_width(&self) -> usize {
        self.attributes.iter().map(Attribute::width).sum()
    }

    pub fn parse_label(&self, raw: &str) -> Option<u8> {
        let raw = raw.trim();
        self.label_values
            .iter()
            .position(|v| v == raw)
            .map(|p| p as u8)
    }

    pub(crate) fn without_attribute(&self, index: usize) -> Schema {
        let mut attributes = self.attributes.clone();
        attributes.remove(index);
        Schema {
            attributes,
            label: self.label.clone(),
            label_values: self.label_values.clone(),
        }
    }
}

/// One attribute value. Categorical values hold their vocabulary index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Cat(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub values: Vec<Value>,
    pub label: Option<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    schema: Arc<Schema>,
    rows: Vec<Row>,
}

impl Dataset {
    pub fn new(schema: Arc<Schema>, rows: Vec<Row>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            check_row(&schema, r, row)?;
        }
        Ok(Dataset { schema, rows })
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn check_row(schema: &Schema, r: usize, row: &Row) -> Result<()> {
    if row.values.len() != schema.attributes.len() {
        return Err(Error::Parse {
            row: r,
            column: "*".into(),
            message: format!(
                "expected {} values, found {}",
                schema.attributes.len(),
                row.values.len()
            ),
        });
    }
    for (attr, value) in schema.attributes.iter().zip(&row.values) {
        let ok = match (&attr.kind, value) {
            (AttributeKind::Numeric, Value::Num(v)) => v.is_finite(),
            (AttributeKind::Categorical { values }, Value::Cat(c)) => *c < values.len(),
            _ => false,
        };
        if !ok {
            return Err(Error::Parse {
                row: r,
                column: attr.name.clone(),
                message: format!("value {value:?} does not conform to the schema"),
            });
        }
    }
    if let Some(label) = row.label {
        if label > 1 {
            return Err(Error::Parse {
                row: r,
                column: schema.label.clone(),
                message: format!("label {label} is not binary"),
            });
        }
    }
    Ok(())
}

/// Reads a headed, comma-separated file. Every header column must be either
/// a schema attribute or the label column; empty fields are rejected.
/// Row numbers in errors are 1-based data rows (the header is row 0).
pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema)
}

pub fn read_csv<R: std::io::Read>(reader: R, schema: &Schema) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();

    let mut label_col = None;
    // attribute index -> csv column
    let mut columns = vec![None; schema.attributes.len()];
    for (c, name) in headers.iter().enumerate() {
        if name == schema.label {
            label_col = Some(c);
        } else if let Some(a) = schema.attribute_index(name) {
            columns[a] = Some(c);
        } else {
            return Err(Error::Schema(format!(
                "column `{name}` is not declared in the schema"
            )));
        }
    }
    let label_col = label_col
        .ok_or_else(|| Error::Schema(format!("label column `{}` not found", schema.label)))?;
    let columns: Vec<usize> = columns
        .into_iter()
        .zip(&schema.attributes)
        .map(|(c, a)| c.ok_or_else(|| Error::Schema(format!("attribute `{}` missing", a.name))))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let row_no = r + 1;
        let mut values = Vec::with_capacity(columns.len());
        for (attr, &c) in schema.attributes.iter().zip(&columns) {
            let raw = record.get(c).unwrap_or("");
            let err = |message: String| Error::Parse {
                row: row_no,
                column: attr.name.clone(),
                message,
            };
            if raw.is_empty() {
                return Err(err("missing value".into()));
            }
            let value = match &attr.kind {
                AttributeKind::Numeric => {
                    let v: f64 = raw
                        .parse()
                        .map_err(|_| err(format!("`{raw}` is not a number")))?;
                    if !v.is_finite() {
                        return Err(err(format!("`{raw}` is not finite")));
                    }
                    Value::Num(v)
                }
                AttributeKind::Categorical { values } => Value::Cat(
                    values
                        .iter()
                        .position(|v| v == raw)
                        .ok_or_else(|| err(format!("unknown categorical value `{raw}`")))?,
                ),
            };
            values.push(value);
        }
        let raw_label = record.get(label_col).unwrap_or("");
        let label = schema.parse_label(raw_label).ok_or_else(|| Error::Parse {
            row: row_no,
            column: schema.label.clone(),
            message: format!(
                "label `{raw_label}` is not one of {:?}",
                schema.label_values
            ),
        })?;
        rows.push(Row {
            values,
            label: Some(label),
        });
    }
    Dataset::new(Arc::new(schema.clone()), rows)
}

/// Distinct values of one CSV column, sorted. Used to fill in categorical
/// vocabularies that a config leaves implicit.
pub fn column_vocabulary(path: impl AsRef<Path>, column: &str) -> Result<Vec<String>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let c = rdr
        .headers()?
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| Error::Schema(format!("column `{column}` not found")))?;
    let mut values = std::collections::BTreeSet::new();
    for record in rdr.records() {
        let record = record?;
        if let Some(v) = record.get(c) {
            if !v.is_empty() {
                values.insert(v.to_string());
            }
        }
    }
    Ok(values.into_iter().collect())
}

/// Writes `d` with a header row; the inverse of [`load_csv`].
pub fn write_csv(path: impl AsRef<Path>, d: &Dataset) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(file, d)
}

pub fn write_csv_to<W: std::io::Write>(writer: W, d: &Dataset) -> Result<()> {
    let schema = d.schema();
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = schema.attributes().iter().map(|a| a.name.as_str()).collect();
    header.push(schema.label());
    w.write_record(&header)?;
    for row in d.rows() {
        let mut fields: Vec<String> = schema
            .attributes()
            .iter()
            .zip(&row.values)
            .map(|(a, v)| match (v, &a.kind) {
                (Value::Num(x), _) => x.to_string(),
                (Value::Cat(c), AttributeKind::Categorical { values }) => values[*c].clone(),
                (Value::Cat(c), AttributeKind::Numeric) => c.to_string(),
            })
            .collect();
        fields.push(row.label.map_or(String::new(), |l| schema.label_values()[l as usize].clone()));
        w.write_record(&fields)?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// Header names of a CSV file, in order.
pub fn csv_headers(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    Ok(rdr.headers()?.iter().map(|h| h.trim().to_string()).collect())
}

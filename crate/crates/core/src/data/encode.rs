use std::sync::Arc;

use super::{AttributeKind, Dataset, Value};
use crate::error::{Error, Result};

/// Dense row-major matrix of encoded features.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    n_cols: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn with_width(n_cols: usize) -> Self {
        FeatureMatrix {
            n_cols,
            data: Vec::new(),
        }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = FeatureMatrix::with_width(n_cols);
        for r in rows {
            m.push_row(r.as_ref())?;
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.data.len().checked_div(self.n_cols).unwrap_or(0)
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n_cols + col]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.n_cols.max(1))
    }

    pub fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.n_cols {
            return Err(Error::WidthMismatch {
                expected: self.n_cols,
                actual: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        Ok(())
    }

    pub fn select(&self, indices: &[usize]) -> FeatureMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.n_cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        FeatureMatrix {
            n_cols: self.n_cols,
            data,
        }
    }
}

/// Fully labeled, numerically encoded data.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedDataset {
    feature_names: Arc<Vec<String>>,
    x: FeatureMatrix,
    y: Vec<u8>,
}

impl EncodedDataset {
    pub fn new(feature_names: Arc<Vec<String>>, x: FeatureMatrix, y: Vec<u8>) -> Result<Self> {
        if x.n_cols() != feature_names.len() {
            return Err(Error::WidthMismatch {
                expected: feature_names.len(),
                actual: x.n_cols(),
            });
        }
        if x.n_rows() != y.len() {
            return Err(Error::InvalidArgument(format!(
                "{} feature rows but {} labels",
                x.n_rows(),
                y.len()
            )));
        }
        if let Some(bad) = y.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidArgument(format!("label {bad} is not binary")));
        }
        Ok(EncodedDataset {
            feature_names,
            x,
            y,
        })
    }

    /// Convenience constructor with generated feature names `f0, f1, ...`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], labels: Vec<u8>) -> Result<Self> {
        let x = FeatureMatrix::from_rows(rows)?;
        let names = (0..x.n_cols()).map(|i| format!("f{i}")).collect();
        EncodedDataset::new(Arc::new(names), x, labels)
    }

    pub fn empty_like(&self) -> EncodedDataset {
        EncodedDataset {
            feature_names: self.feature_names.clone(),
            x: FeatureMatrix::with_width(self.x.n_cols()),
            y: Vec::new(),
        }
    }

    pub fn feature_names(&self) -> &Arc<Vec<String>> {
        &self.feature_names
    }

    pub fn features(&self) -> &FeatureMatrix {
        &self.x
    }

    pub fn labels(&self) -> &[u8] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn width(&self) -> usize {
        self.x.n_cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.x.row(i)
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.y.iter().filter(|&&l| l == 1).count();
        [self.y.len() - ones, ones]
    }

    pub fn has_both_classes(&self) -> bool {
        let [a, b] = self.class_counts();
        a > 0 && b > 0
    }

    pub fn select(&self, indices: &[usize]) -> EncodedDataset {
        EncodedDataset {
            feature_names: self.feature_names.clone(),
            x: self.x.select(indices),
            y: indices.iter().map(|&i| self.y[i]).collect(),
        }
    }

    /// Appends rows with the given labels.
    pub fn extend_rows<'a>(
        &mut self,
        rows: impl IntoIterator<Item = (&'a [f64], u8)>,
    ) -> Result<()> {
        for (row, label) in rows {
            if label > 1 {
                return Err(Error::InvalidArgument(format!("label {label} is not binary")));
            }
            self.x.push_row(row)?;
            self.y.push(label);
        }
        Ok(())
    }

    pub fn concat(&self, other: &EncodedDataset) -> Result<EncodedDataset> {
        if self.feature_names != other.feature_names {
            return Err(Error::Schema(
                "cannot concatenate datasets with different encodings".into(),
            ));
        }
        let mut out = self.clone();
        out.extend_rows(other.x.rows().zip(other.y.iter().copied()))?;
        Ok(out)
    }

    /// Splits off the labels, sealing them inside an [`UnlabeledSet`].
    pub fn into_unlabeled(self) -> UnlabeledSet {
        UnlabeledSet {
            feature_names: self.feature_names,
            x: self.x,
            sealed: Some(self.y),
        }
    }
}

/// Unlabeled pool. Ground-truth labels, when known, are sealed: learners only
/// ever see [`UnlabeledSet::features`]; evaluation code and the fully
/// supervised reference baseline call [`UnlabeledSet::unseal`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnlabeledSet {
    feature_names: Arc<Vec<String>>,
    x: FeatureMatrix,
    sealed: Option<Vec<u8>>,
}

impl UnlabeledSet {
    pub fn new(feature_names: Arc<Vec<String>>, x: FeatureMatrix) -> Result<Self> {
        if x.n_cols() != feature_names.len() {
            return Err(Error::WidthMismatch {
                expected: feature_names.len(),
                actual: x.n_cols(),
            });
        }
        Ok(UnlabeledSet {
            feature_names,
            x,
            sealed: None,
        })
    }

    pub fn empty(feature_names: Arc<Vec<String>>) -> Self {
        let width = feature_names.len();
        UnlabeledSet {
            feature_names,
            x: FeatureMatrix::with_width(width),
            sealed: Some(Vec::new()),
        }
    }

    pub fn feature_names(&self) -> &Arc<Vec<String>> {
        &self.feature_names
    }

    pub fn features(&self) -> &FeatureMatrix {
        &self.x
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.x.row(i)
    }

    pub fn len(&self) -> usize {
        self.x.n_rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self) -> usize {
        self.x.n_cols()
    }

    pub fn has_sealed_labels(&self) -> bool {
        self.sealed.is_some()
    }

    /// Reveals the ground truth. Returns `None` for genuinely unlabeled pools.
    pub fn unseal(&self) -> Option<EncodedDataset> {
        self.sealed.as_ref().map(|y| EncodedDataset {
            feature_names: self.feature_names.clone(),
            x: self.x.clone(),
            y: y.clone(),
        })
    }

    /// Replaces the sealed labels. Data-hygiene tests use this to poison the
    /// hidden ground truth and check that no learner depends on it.
    pub fn with_sealed_labels(mut self, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "{} sealed labels for {} rows",
                labels.len(),
                self.len()
            )));
        }
        self.sealed = Some(labels);
        Ok(self)
    }
}

/// Labeled and unlabeled pools for both domains; index 0 is the source,
/// index 1 the target.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPair {
    pub labeled: [EncodedDataset; 2],
    pub unlabeled: [UnlabeledSet; 2],
}

impl DomainPair {
    pub const SOURCE: usize = 0;
    pub const TARGET: usize = 1;

    pub fn new(labeled: [EncodedDataset; 2], unlabeled: [UnlabeledSet; 2]) -> Result<Self> {
        let names = labeled[0].feature_names();
        let same = labeled[1].feature_names() == names
            && unlabeled.iter().all(|u| u.feature_names() == names);
        if !same {
            return Err(Error::Schema(
                "all four pools must share one encoded schema".into(),
            ));
        }
        Ok(DomainPair { labeled, unlabeled })
    }

    pub fn width(&self) -> usize {
        self.labeled[0].width()
    }
}

/// One-hot expands categorical attributes; numeric attributes pass through.
/// Every row must carry a label.
pub fn encode(d: &Dataset) -> Result<EncodedDataset> {
    let schema = d.schema();
    let mut names = Vec::with_capacity(schema.encoded_width());
    for attr in schema.attributes() {
        match &attr.kind {
            AttributeKind::Numeric => names.push(attr.name.clone()),
            AttributeKind::Categorical { values } => {
                names.extend(values.iter().map(|v| format!("{}={}", attr.name, v)))
            }
        }
    }
    let width = names.len();
    let mut x = FeatureMatrix::with_width(width);
    let mut y = Vec::with_capacity(d.len());
    let mut buf = vec![0.0; width];
    for (r, row) in d.rows().iter().enumerate() {
        buf.iter_mut().for_each(|v| *v = 0.0);
        let mut offset = 0;
        for (attr, value) in schema.attributes().iter().zip(&row.values) {
            match value {
                Value::Num(v) => buf[offset] = *v,
                Value::Cat(c) => buf[offset + c] = 1.0,
            }
            offset += attr.width();
        }
        x.push_row(&buf)?;
        y.push(row.label.ok_or_else(|| Error::Parse {
            row: r + 1,
            column: schema.label().to_string(),
            message: "row has no label".into(),
        })?);
    }
    EncodedDataset::new(Arc::new(names), x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Attribute, Row, Schema};

    #[test]
    fn one_hot_of_middle_value() {
        let schema = Arc::new(
            Schema::binary(vec![Attribute::categorical("c", ["a", "b", "c"])], "y").unwrap(),
        );
        let d = Dataset::new(
            schema,
            vec![Row {
                values: vec![Value::Cat(1)],
                label: Some(0),
            }],
        )
        .unwrap();
        let e = encode(&d).unwrap();
        assert_eq!(e.row(0), &[0.0, 1.0, 0.0]);
        assert_eq!(e.feature_names().as_slice(), ["c=a", "c=b", "c=c"]);
    }

    #[test]
    fn numeric_passthrough() {
        let schema = Arc::new(
            Schema::binary(vec![Attribute::numeric("a"), Attribute::numeric("b")], "y").unwrap(),
        );
        let raw = [[1.5, -2.0], [0.0, 7.25]];
        let rows = raw
            .iter()
            .map(|r| Row {
                values: r.iter().map(|&v| Value::Num(v)).collect(),
                label: Some(1),
            })
            .collect();
        let e = encode(&Dataset::new(schema, rows).unwrap()).unwrap();
        for (i, r) in raw.iter().enumerate() {
            assert_eq!(e.row(i), r);
        }
        assert_eq!(e.labels(), &[1, 1]);
    }

    #[test]
    fn unseal_round_trip_and_poison() {
        let d = EncodedDataset::from_rows(&[[0.0], [1.0]], vec![0, 1]).unwrap();
        let u = d.clone().into_unlabeled();
        assert_eq!(u.unseal().unwrap(), d);
        let poisoned = u.with_sealed_labels(vec![1, 0]).unwrap();
        assert_eq!(poisoned.unseal().unwrap().labels(), &[1, 0]);
        assert_eq!(poisoned.features(), d.features());
    }

    #[test]
    fn domain_pair_requires_shared_encoding() {
        let a = EncodedDataset::from_rows(&[[0.0]], vec![0]).unwrap();
        let b = EncodedDataset::from_rows(&[[0.0, 1.0]], vec![0]).unwrap();
        let ua = a.clone().into_unlabeled();
        let ub = b.clone().into_unlabeled();
        assert!(DomainPair::new([a.clone(), a.clone()], [ua.clone(), ua.clone()]).is_ok());
        assert!(DomainPair::new([a.clone(), b], [ua.clone(), ub]).is_err());
    }
}

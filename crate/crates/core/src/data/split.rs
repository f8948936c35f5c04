use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{AttributeKind, Dataset, Row, Value};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// Declarative domain-split predicate. Rows satisfying it form the target
/// domain; all others the source domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitRule {
    pub attribute: String,
    #[serde(rename = "op")]
    pub comparator: Comparator,
    pub value: String,
    #[serde(default = "default_drop")]
    pub drop_attribute: bool,
}

fn default_drop() -> bool {
    true
}

impl SplitRule {
    pub fn new(attribute: impl Into<String>, comparator: Comparator, value: impl Into<String>) -> Self {
        SplitRule {
            attribute: attribute.into(),
            comparator,
            value: value.into(),
            drop_attribute: true,
        }
    }
}

enum Predicate {
    Numeric(Comparator, f64),
    Categorical { equal: bool, index: usize },
}

impl Predicate {
    fn matches(&self, v: Value) -> bool {
        match (self, v) {
            (Predicate::Numeric(op, rhs), Value::Num(lhs)) => match op {
                Comparator::Eq => lhs == *rhs,
                Comparator::Ne => lhs != *rhs,
                Comparator::Lt => lhs < *rhs,
                Comparator::Le => lhs <= *rhs,
                Comparator::Gt => lhs > *rhs,
                Comparator::Ge => lhs >= *rhs,
            },
            (Predicate::Categorical { equal, index }, Value::Cat(c)) => (c == *index) == *equal,
            _ => false,
        }
    }
}

/// Partitions `d` into `(source, target)` by `rule`.
pub fn split_domains(d: &Dataset, rule: &SplitRule) -> Result<(Dataset, Dataset)> {
    let schema = d.schema();
    let col = schema.attribute_index(&rule.attribute).ok_or_else(|| {
        Error::Schema(format!("split attribute `{}` does not exist", rule.attribute))
    })?;
    let predicate = match &schema.attributes()[col].kind {
        AttributeKind::Numeric => {
            let v: f64 = rule.value.trim().parse().map_err(|_| {
                Error::Config(format!(
                    "split value `{}` is not numeric for attribute `{}`",
                    rule.value, rule.attribute
                ))
            })?;
            Predicate::Numeric(rule.comparator, v)
        }
        AttributeKind::Categorical { values } => {
            let equal = match rule.comparator {
                Comparator::Eq => true,
                Comparator::Ne => false,
                other => {
                    return Err(Error::Config(format!(
                        "comparator {other:?} is not defined for categorical attribute `{}`",
                        rule.attribute
                    )))
                }
            };
            let index = values.iter().position(|v| *v == rule.value).ok_or_else(|| {
                Error::Config(format!(
                    "`{}` is not in the vocabulary of `{}`",
                    rule.value, rule.attribute
                ))
            })?;
            Predicate::Categorical { equal, index }
        }
    };

    let out_schema = if rule.drop_attribute {
        Arc::new(schema.without_attribute(col))
    } else {
        schema.clone()
    };
    let strip = |row: &Row| -> Row {
        let mut row = row.clone();
        if rule.drop_attribute {
            row.values.remove(col);
        }
        row
    };

    let (mut source, mut target) = (Vec::new(), Vec::new());
    for row in d.rows() {
        if predicate.matches(row.values[col]) {
            target.push(strip(row));
        } else {
            source.push(strip(row));
        }
    }
    if source.is_empty() {
        return Err(Error::EmptyDomain { side: "source" });
    }
    if target.is_empty() {
        return Err(Error::EmptyDomain { side: "target" });
    }
    Ok((
        Dataset::new(out_schema.clone(), source)?,
        Dataset::new(out_schema, target)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{read_csv, Attribute, Schema};

    fn data() -> Dataset {
        let schema = Schema::binary(
            vec![Attribute::categorical("c", ["n", "y"]), Attribute::numeric("v")],
            "label",
        )
        .unwrap();
        read_csv(
            "c,v,label\nn,1,0\ny,2,1\ny,3,0\nn,4,1\ny,5,1\n".as_bytes(),
            &schema,
        )
        .unwrap()
    }

    #[test]
    fn categorical_split_drops_attribute() {
        let (s, t) = split_domains(&data(), &SplitRule::new("c", Comparator::Eq, "y")).unwrap();
        assert_eq!((s.len(), t.len()), (2, 3));
        assert_eq!(s.schema().attributes().len(), 1);
        assert_eq!(t.schema().attributes()[0].name, "v");
        assert_eq!(t.rows()[0].values, vec![Value::Num(2.0)]);
    }

    #[test]
    fn numeric_split_keeps_attribute_on_request() {
        let mut rule = SplitRule::new("v", Comparator::Le, "2");
        rule.drop_attribute = false;
        let (s, t) = split_domains(&data(), &rule).unwrap();
        assert_eq!((s.len(), t.len()), (3, 2));
        assert_eq!(t.schema().attributes().len(), 2);
    }

    #[test]
    fn empty_side_is_an_error() {
        let err = split_domains(&data(), &SplitRule::new("v", Comparator::Gt, "100")).unwrap_err();
        assert!(matches!(err, Error::EmptyDomain { side: "target" }));
        let err = split_domains(&data(), &SplitRule::new("v", Comparator::Gt, "0")).unwrap_err();
        assert!(matches!(err, Error::EmptyDomain { side: "source" }));
    }

    #[test]
    fn unknown_attribute_or_value() {
        assert!(split_domains(&data(), &SplitRule::new("zz", Comparator::Eq, "y")).is_err());
        assert!(split_domains(&data(), &SplitRule::new("c", Comparator::Eq, "maybe")).is_err());
        assert!(split_domains(&data(), &SplitRule::new("c", Comparator::Lt, "y")).is_err());
    }
}

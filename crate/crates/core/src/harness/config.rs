//! Experiment configuration, read from TOML.
//!
//! ```toml
//! name = "vote"
//! methods = ["DT", "TrAdaBoost", "TriTraining", "CoTransfer", "TrAdaBoostA"]
//!
//! [data]
//! path = "../data/vote.csv"        # relative to the config file
//! label = "party"
//! label_values = ["democrat", "republican"]
//!
//! [split]
//! attribute = "el-salvador-aid"
//! op = "eq"
//! value = "y"
//!
//! [model]
//! rounds = 5
//! max_depth = 50
//! ```
//!
//! Attributes not listed under `[[data.attributes]]` are inferred from the
//! file: numeric when every value parses as a number, categorical otherwise.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Method;
use crate::data::{
    column_vocabulary, csv_headers, encode, load_csv, split_domains, Attribute, Dataset,
    EncodedDataset, Schema, SplitRule,
};
use crate::error::{Error, Result};
use crate::tradaboost::BoostParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub data: DataConfig,
    pub split: SplitRule,
    #[serde(default)]
    pub protocol: Protocol,
    pub model: ModelConfig,
    #[serde(default = "Method::all")]
    pub methods: Vec<Method>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub path: PathBuf,
    pub label: String,
    /// Class-0 and class-1 spellings; inferred (sorted) when omitted.
    #[serde(default)]
    pub label_values: Option<[String; 2]>,
    #[serde(default)]
    pub attributes: Vec<Attribute>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Protocol {
    pub rates: Vec<f64>,
    pub folds: usize,
    pub source_repeats: usize,
    pub target_repeats: usize,
    pub seed: u64,
}

impl Default for Protocol {
    fn default() -> Self {
        Protocol {
            rates: vec![0.1, 0.2, 0.4, 0.5],
            folds: 5,
            source_repeats: 2,
            target_repeats: 3,
            seed: 0,
        }
    }
}

impl Protocol {
    pub fn runs_per_cell(&self) -> usize {
        self.folds * self.source_repeats * self.target_repeats
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// Boosting rounds `N`.
    pub rounds: usize,
    /// Base-tree depth `D`.
    pub max_depth: usize,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: usize,
}

fn default_max_rounds() -> usize {
    crate::cotransfer::DEFAULT_MAX_ROUNDS
}

impl ModelConfig {
    pub fn boost(&self) -> BoostParams {
        BoostParams::new(self.rounds, self.max_depth)
    }
}

/// Encoded source and target domains of one dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct Domains {
    pub source: EncodedDataset,
    pub target: EncodedDataset,
}

impl ExperimentConfig {
    /// Parses `path`; a relative `data.path` is resolved against the
    /// config file's directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn from_toml_str(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.data.path.is_relative() {
            cfg.data.path = base.join(&cfg.data.path);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.protocol;
        if p.rates.is_empty() || p.rates.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(Error::Config(format!(
                "label rates must lie in (0, 1), got {:?}",
                p.rates
            )));
        }
        if p.folds < 2 || p.source_repeats == 0 || p.target_repeats == 0 {
            return Err(Error::Config(
                "need at least 2 folds and one repeat per domain".into(),
            ));
        }
        if self.model.rounds == 0 || self.model.max_depth == 0 || self.model.max_rounds == 0 {
            return Err(Error::Config("rounds, max_depth and max_rounds must be positive".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        Ok(())
    }

    /// Declared attributes plus inferred ones, in file column order.
    pub fn schema(&self) -> Result<Schema> {
        let path = &self.data.path;
        let headers = csv_headers(path)?;
        if !headers.contains(&self.data.label) {
            return Err(Error::Schema(format!(
                "label column `{}` not in {}",
                self.data.label,
                path.display()
            )));
        }
        let mut attributes = Vec::new();
        for h in headers.iter().filter(|h| **h != self.data.label) {
            match self.data.attributes.iter().find(|a| a.name == *h) {
                Some(a) => attributes.push(a.clone()),
                None => attributes.push(infer_attribute(path, h)?),
            }
        }
        if let Some(a) = self.data.attributes.iter().find(|a| !headers.contains(&a.name)) {
            return Err(Error::Schema(format!("declared attribute `{}` not in file", a.name)));
        }
        let label_values = match &self.data.label_values {
            Some(v) => v.clone(),
            None => {
                let vocab = column_vocabulary(path, &self.data.label)?;
                <[String; 2]>::try_from(vocab).map_err(|v| {
                    Error::Schema(format!("label column has {} distinct values, need 2", v.len()))
                })?
            }
        };
        Schema::new(attributes, self.data.label.clone(), label_values)
    }

    pub fn load(&self) -> Result<Dataset> {
        load_csv(&self.data.path, &self.schema()?)
    }

    pub fn domains(&self) -> Result<Domains> {
        let (source, target) = split_domains(&self.load()?, &self.split)?;
        Ok(Domains {
            source: encode(&source)?,
            target: encode(&target)?,
        })
    }
}

fn infer_attribute(path: &Path, column: &str) -> Result<Attribute> {
    let vocab = column_vocabulary(path, column)?;
    if !vocab.is_empty() && vocab.iter().all(|v| v.parse::<f64>().is_ok()) {
        Ok(Attribute::numeric(column))
    } else {
        Ok(Attribute::categorical(column, vocab))
    }
}

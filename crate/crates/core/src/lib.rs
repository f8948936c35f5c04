//! Bidirectional instance transfer with pseudo-label exchange (Co-Transfer),
//! plus the TrAdaBoost, tri-training and decision-tree baselines and an
//! experiment harness that compares them.
//!
//! Start with [`data`] to load and split a dataset, then fit with
//! [`cotransfer::fit_cotransfer`]; [`harness`] runs whole benchmarks.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod agreement;
pub mod cotransfer;
pub mod data;
pub mod error;
pub mod harness;
pub mod noise_bound;
pub mod seed;
pub mod synthetic;
pub mod tradaboost;
pub mod tree;
pub mod tritraining;

pub use agreement::Classifier;
pub use cotransfer::{fit_cotransfer, predict_co, CoTransferParams, CoTransferState};
pub use data::{DomainPair, EncodedDataset, UnlabeledSet};
pub use error::{Error, Result};
pub use tradaboost::{fit_tradaboost, BoostParams, TrAdaBoostModel};
pub use tree::{fit_tree, TreeModel};
pub use tritraining::{fit_tritraining, TriModel};

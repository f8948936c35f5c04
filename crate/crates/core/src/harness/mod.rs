//! Benchmark harness: the cross-validated comparison protocol, paired
//! significance tests, summary tables, per-iteration traces, (N, D) grids
//! and the domain transferability probe.

mod config;
mod report;
mod run;
mod stats;
mod sweep;
mod trace;
mod transferability;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use config::{DataConfig, Domains, ExperimentConfig, ModelConfig, Protocol};
pub use report::{render_summary, summarize, SummaryRow};
pub use run::{
    read_records, run_experiment, run_experiment_on, write_records, write_traces, ExperimentResults,
    RunRecord, TraceRecord, STATUS_OK,
};
pub use stats::{paired_t_test, t_test, Marker, TTest};
pub use sweep::{sweep, write_grid, SweepGrid};
pub use trace::{mean_trace, read_traces, trace_export, TraceSeries};
pub use transferability::transferability;

/// Methods the harness can run, with the data each one sees:
///
/// | method | trains on |
/// |---|---|
/// | `DT` | labeled target |
/// | `TrAdaBoost` | labeled source + labeled target |
/// | `TriTraining` | labeled + unlabeled target |
/// | `CoTransfer` | labeled + unlabeled, both domains |
/// | `TrAdaBoostA` | every training row of both domains, with true labels |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "DT")]
    Dt,
    TrAdaBoost,
    TriTraining,
    CoTransfer,
    TrAdaBoostA,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Dt,
        Method::TrAdaBoost,
        Method::TriTraining,
        Method::CoTransfer,
        Method::TrAdaBoostA,
    ];

    pub fn all() -> Vec<Method> {
        Self::ALL.to_vec()
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Dt => "DT",
            Method::TrAdaBoost => "TrAdaBoost",
            Method::TriTraining => "TriTraining",
            Method::CoTransfer => "CoTransfer",
            Method::TrAdaBoostA => "TrAdaBoostA",
        }
    }

    /// Whether the method iterates and so reports initial error and Iter.
    pub fn is_iterative(self) -> bool {
        matches!(self, Method::TriTraining | Method::CoTransfer)
    }

    fn id(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::Error::Config(format!("unknown method `{s}`")))
    }
}

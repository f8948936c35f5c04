//! Mean held-out error per iteration across runs.

use std::collections::BTreeMap;
use std::path::Path;

use super::run::{read_serialized, TraceRecord};
use super::Method;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceSeries {
    pub dataset: String,
    pub rate: f64,
    pub method: Method,
    pub runs: usize,
    /// `means[k]`: mean error after `k` rounds.
    pub means: Vec<f64>,
}

/// Pointwise mean of `runs`, each extended to the longest run by repeating
/// its last value.
pub fn mean_trace(runs: &[Vec<f64>]) -> Vec<f64> {
    let len = runs.iter().map(Vec::len).max().unwrap_or(0);
    let live: Vec<&Vec<f64>> = runs.iter().filter(|r| !r.is_empty()).collect();
    (0..len)
        .map(|k| {
            let sum: f64 = live.iter().map(|r| r[k.min(r.len() - 1)]).sum();
            sum / live.len() as f64
        })
        .collect()
}

/// Groups trace rows by `(dataset, rate, method)` and averages over runs.
pub fn trace_export(traces: &[TraceRecord]) -> Vec<TraceSeries> {
    type RunKey = (usize, usize, usize);
    type Runs = BTreeMap<RunKey, Vec<(usize, f64)>>;
    let mut groups: BTreeMap<(String, u64, Method), Runs> = BTreeMap::new();
    for t in traces {
        groups
            .entry((t.dataset.clone(), t.rate.to_bits(), t.method))
            .or_default()
            .entry((t.fold, t.source_repeat, t.target_repeat))
            .or_default()
            .push((t.iteration, t.error));
    }
    groups
        .into_iter()
        .map(|((dataset, rate, method), runs)| {
            let series: Vec<Vec<f64>> = runs
                .into_values()
                .map(|mut points| {
                    points.sort_by_key(|p| p.0);
                    points.into_iter().map(|p| p.1).collect()
                })
                .collect();
            TraceSeries {
                dataset,
                rate: f64::from_bits(rate),
                method,
                runs: series.len(),
                means: mean_trace(&series),
            }
        })
        .collect()
}

pub fn read_traces(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>> {
    read_serialized(path.as_ref())
}

//! The cross-validated protocol. For every label rate, target fold, source
//! partition and target partition, each configured method is trained on
//! its share of the data and scored on the held-out target fold.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Domains, ExperimentConfig, ModelConfig};
use super::Method;
use crate::agreement::error_rate;
use crate::cotransfer::{fit_cotransfer, CoTransferParams};
use crate::data::{kfold, partition_label_rate, DomainPair, EncodedDataset};
use crate::error::{Error, Result};
use crate::seed::derive;
use crate::tradaboost::fit_tradaboost;
use crate::tree::fit_tree;
use crate::tritraining::{fit_tritraining_traced, TriParams};

pub const STATUS_OK: &str = "ok";

/// One method on one (rate, fold, source partition, target partition).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub rate: f64,
    pub method: Method,
    pub fold: usize,
    pub source_repeat: usize,
    pub target_repeat: usize,
    /// Held-out error before the first refinement round (iterative methods).
    pub initial_error: Option<f64>,
    pub final_error: Option<f64>,
    /// Rounds executed, counting the last round that changed nothing.
    pub iterations: Option<usize>,
    pub wall_time_ms: f64,
    /// `ok`, or the error that aborted the run.
    pub status: String,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }

    /// `(fold, source_repeat, target_repeat)`; pairs runs across methods.
    pub fn key(&self) -> (usize, usize, usize) {
        (self.fold, self.source_repeat, self.target_repeat)
    }
}

/// Held-out error after `iteration` rounds (0 = after initialisation).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub dataset: String,
    pub rate: f64,
    pub method: Method,
    pub fold: usize,
    pub source_repeat: usize,
    pub target_repeat: usize,
    pub iteration: usize,
    pub error: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentResults {
    pub records: Vec<RunRecord>,
    pub traces: Vec<TraceRecord>,
}

impl ExperimentResults {
    pub fn failures(&self) -> impl Iterator<Item = &RunRecord> {
        self.records.iter().filter(|r| !r.is_ok())
    }

    /// Records of one `(rate, method)` cell.
    pub fn cell(&self, rate: f64, method: Method) -> Vec<&RunRecord> {
        self.records
            .iter()
            .filter(|r| r.method == method && r.rate == rate)
            .collect()
    }
}

pub(crate) struct Outcome {
    pub initial: Option<f64>,
    pub final_error: f64,
    pub iterations: Option<usize>,
    /// Held-out error after initialisation and after each round.
    pub trace: Vec<f64>,
}

/// Trains `method` on its part of `pair` and scores it on `test`.
pub(crate) fn evaluate(
    method: Method,
    pair: &DomainPair,
    test: &EncodedDataset,
    model: ModelConfig,
    seed: u64,
) -> Result<Outcome> {
    let [sl, tl] = &pair.labeled;
    let plain = |final_error| Outcome {
        initial: None,
        final_error,
        iterations: None,
        trace: Vec::new(),
    };
    match method {
        Method::Dt => {
            let tree = fit_tree(tl.features(), tl.labels(), &vec![1.0; tl.len()], None)?;
            Ok(plain(error_rate(&tree, test)))
        }
        Method::TrAdaBoost => {
            let m = fit_tradaboost(sl, tl, model.boost())?;
            Ok(plain(error_rate(&m, test)))
        }
        Method::TrAdaBoostA => {
            let reveal = |d: usize| {
                pair.unlabeled[d].unseal().ok_or_else(|| {
                    Error::InvalidArgument("TrAdaBoostA needs the unlabeled pools' true labels".into())
                })
            };
            let source = sl.concat(&reveal(0)?)?;
            let target = tl.concat(&reveal(1)?)?;
            let m = fit_tradaboost(&source, &target, model.boost())?;
            Ok(plain(error_rate(&m, test)))
        }
        Method::TriTraining => {
            let params = TriParams {
                max_depth: None,
                max_rounds: model.max_rounds,
            };
            let (m, trace) = fit_tritraining_traced(tl, &pair.unlabeled[1], seed, params, Some(test))?;
            let mut series = vec![trace.initial_heldout_error.unwrap_or(f64::NAN)];
            series.extend(trace.rounds.iter().map(|r| r.heldout_error.unwrap_or(f64::NAN)));
            Ok(Outcome {
                initial: trace.initial_heldout_error,
                final_error: error_rate(&m, test),
                iterations: Some(m.rounds()),
                trace: series,
            })
        }
        Method::CoTransfer => {
            let params = CoTransferParams {
                boost: model.boost(),
                max_rounds: model.max_rounds,
            };
            let (state, trace) = fit_cotransfer(pair, params, seed, Some(test))?;
            let target_err = |e: Option<[f64; 2]>| e.map_or(f64::NAN, |e| e[1]);
            let mut series = vec![target_err(trace.initial_heldout_errors)];
            series.extend(trace.rounds.iter().map(|r| target_err(r.heldout_errors)));
            Ok(Outcome {
                initial: trace.initial_heldout_errors.map(|e| e[1]),
                final_error: error_rate(&state, test),
                iterations: Some(state.rounds()),
                trace: series,
            })
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResults> {
    run_experiment_on(cfg, &cfg.domains()?)
}

/// Runs the protocol on already loaded domains. A failing fit is recorded
/// with its error and does not stop the other runs; only data preparation
/// errors abort.
pub fn run_experiment_on(cfg: &ExperimentConfig, domains: &Domains) -> Result<ExperimentResults> {
    let p = &cfg.protocol;
    let folds = kfold(&domains.target, p.folds, derive(p.seed, &[0]))?;
    let mut jobs = Vec::new();
    for &rate in &p.rates {
        for fold in 0..p.folds {
            for rs in 0..p.source_repeats {
                for rt in 0..p.target_repeats {
                    jobs.push((rate, fold, rs, rt));
                }
            }
        }
    }

    let per_job = jobs
        .par_iter()
        .map(|&(rate, fold, rs, rt)| {
            let rate_key = rate.to_bits();
            let (train, test) = &folds[fold];
            let (sl, su) = partition_label_rate(
                &domains.source,
                rate,
                derive(p.seed, &[1, rate_key, fold as u64, rs as u64]),
            )?;
            let (tl, tu) = partition_label_rate(
                train,
                rate,
                derive(p.seed, &[2, rate_key, fold as u64, rt as u64]),
            )?;
            let pair = DomainPair::new([sl, tl], [su, tu])?;
            let mut records = Vec::new();
            let mut traces = Vec::new();
            for &method in &cfg.methods {
                let seed = derive(
                    p.seed,
                    &[3, rate_key, fold as u64, rs as u64, rt as u64, method.id()],
                );
                let start = Instant::now();
                let outcome = evaluate(method, &pair, test, cfg.model, seed);
                let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
                let mut record = RunRecord {
                    dataset: cfg.name.clone(),
                    rate,
                    method,
                    fold,
                    source_repeat: rs,
                    target_repeat: rt,
                    initial_error: None,
                    final_error: None,
                    iterations: None,
                    wall_time_ms,
                    status: STATUS_OK.into(),
                };
                match outcome {
                    Ok(o) => {
                        record.initial_error = o.initial;
                        record.final_error = Some(o.final_error);
                        record.iterations = o.iterations;
                        traces.extend(o.trace.iter().enumerate().map(|(iteration, &error)| {
                            TraceRecord {
                                dataset: cfg.name.clone(),
                                rate,
                                method,
                                fold,
                                source_repeat: rs,
                                target_repeat: rt,
                                iteration,
                                error,
                            }
                        }));
                    }
                    Err(e) => record.status = format!("failed: {e}"),
                }
                records.push(record);
            }
            Ok((records, traces))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = ExperimentResults::default();
    for (records, traces) in per_job {
        out.records.extend(records);
        out.traces.extend(traces);
    }
    Ok(out)
}

fn write_serialized<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub(crate) fn read_serialized<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    csv::Reader::from_reader(file)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

pub fn write_records(path: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    write_serialized(path.as_ref(), records)
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    read_serialized(path.as_ref())
}

pub fn write_traces(path: impl AsRef<Path>, traces: &[TraceRecord]) -> Result<()> {
    write_serialized(path.as_ref(), traces)
}

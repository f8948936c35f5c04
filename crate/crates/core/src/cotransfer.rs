//! Co-Transfer: two ensembles of three TrAdaBoost learners that transfer
//! in opposite directions and feed each other screened pseudo-labels.
//!
//! Domain index `0` is the source and `1` the target. Ensemble `H[d]` boosts
//! with `L[d]` as its target data and `L[(d+1)%2]` as auxiliary data, so
//! `H[1]` is the source-to-target learner whose vote is the final output.

use rand::Rng;
use rayon::prelude::*;

use crate::agreement::{
    ensemble_error_from_predictions, error_rate, majority, pair_error_from_predictions,
    pseudo_label_from_predictions, screen_from_predictions, subsample, Classifier,
    PseudoLabeledSet,
};
use crate::data::{bootstrap_indices, DomainPair, EncodedDataset};
use crate::error::{Error, Result};
use crate::noise_bound::{decide, Decision, ErrorBound};
use crate::seed;
use crate::tradaboost::{fit_tradaboost, BoostParams, TrAdaBoostModel};

pub const DEFAULT_MAX_ROUNDS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoTransferParams {
    pub boost: BoostParams,
    pub max_rounds: usize,
}

impl CoTransferParams {
    pub fn new(rounds: usize, max_depth: usize) -> Self {
        CoTransferParams {
            boost: BoostParams::new(rounds, max_depth),
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }
}

/// Row indices drawn for one member: into the auxiliary set `L[(d+1)%2]`
/// and into its own target set `L[d]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberDraw {
    pub auxiliary: Vec<usize>,
    pub target: Vec<usize>,
}

/// The six bootstrap draws, indexed `[d][i]`.
pub type BootstrapPlan = [[MemberDraw; 3]; 2];

#[derive(Clone, Debug)]
pub struct CoTransferState {
    ensembles: [[TrAdaBoostModel; 3]; 2],
    member_bounds: [[ErrorBound; 3]; 2],
    ensemble_bounds: [ErrorBound; 2],
    params: CoTransferParams,
    rounds: usize,
    rng: seed::Rng,
}

/// Kind of accepted update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Member(usize),
    Ensemble,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Acceptance {
    pub domain: usize,
    pub level: Level,
    pub error: f64,
    pub size: usize,
    pub prev_error: f64,
    /// `l'` compared against, after first-round unblocking.
    pub prev_count: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RoundRecord {
    /// One-based round index.
    pub round: usize,
    pub ensemble_errors: [f64; 2],
    pub member_errors: [[f64; 3]; 2],
    /// `|L_i^d|` after acceptance; 0 when no pseudo-labeling happened.
    pub member_sizes: [[usize; 3]; 2],
    /// `|L^d|` after acceptance; 0 when no screening happened.
    pub ensemble_sizes: [usize; 2],
    pub member_updates: [[bool; 3]; 2],
    pub ensemble_updates: [bool; 2],
    pub refit: [[bool; 3]; 2],
    pub accepted: Vec<Acceptance>,
    /// Held-out error of `H[0]` and `H[1]` after the round, when monitored.
    pub heldout_errors: Option<[f64; 2]>,
}

impl RoundRecord {
    pub fn changed(&self) -> bool {
        self.refit.iter().flatten().any(|&r| r)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoTransferTrace {
    pub initial_heldout_errors: Option<[f64; 2]>,
    pub rounds: Vec<RoundRecord>,
}

/// Index draws for the six members. Uses its own seed stream so the plan
/// can be inspected without fitting anything.
pub fn bootstrap_plan(labeled: &[EncodedDataset; 2], seed: u64) -> Result<BootstrapPlan> {
    let mut rng = seed::rng(seed::derive(seed, &[0]));
    let mut draw = |d: usize| -> Result<MemberDraw> {
        let o = (d + 1) % 2;
        Ok(MemberDraw {
            auxiliary: bootstrap_indices(labeled[o].labels(), &mut rng)?,
            target: bootstrap_indices(labeled[d].labels(), &mut rng)?,
        })
    };
    Ok([
        [draw(0)?, draw(0)?, draw(0)?],
        [draw(1)?, draw(1)?, draw(1)?],
    ])
}

pub fn init_ensembles(
    pair: &DomainPair,
    params: CoTransferParams,
    seed: u64,
) -> Result<CoTransferState> {
    for (d, l) in pair.labeled.iter().enumerate() {
        if !l.has_both_classes() {
            return Err(Error::SingleClass(format!(
                "labeled set of domain {d} has {} rows and a single class",
                l.len()
            )));
        }
    }
    let plan = bootstrap_plan(&pair.labeled, seed)?;
    let jobs: Vec<(usize, &MemberDraw)> = plan
        .iter()
        .enumerate()
        .flat_map(|(d, draws)| draws.iter().map(move |m| (d, m)))
        .collect();
    let fitted = jobs
        .par_iter()
        .map(|&(d, m)| {
            let o = (d + 1) % 2;
            fit_tradaboost(
                &pair.labeled[o].select(&m.auxiliary),
                &pair.labeled[d].select(&m.target),
                params.boost,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut it = fitted.into_iter();
    let mut three = || -> [TrAdaBoostModel; 3] {
        [(); 3].map(|_| it.next().expect("six fitted members"))
    };
    let ensembles = [three(), three()];
    Ok(CoTransferState {
        ensembles,
        member_bounds: [[ErrorBound::default(); 3]; 2],
        ensemble_bounds: [ErrorBound::default(); 2],
        params,
        rounds: 0,
        rng: seed::rng(seed::derive(seed, &[1])),
    })
}

/// Per-domain outcome of the labeling half of a round.
struct DomainStep {
    member_sets: [Option<PseudoLabeledSet>; 3],
    ensemble_set: Option<PseudoLabeledSet>,
}

impl CoTransferState {
    pub fn ensembles(&self) -> &[[TrAdaBoostModel; 3]; 2] {
        &self.ensembles
    }

    pub fn member_bounds(&self) -> &[[ErrorBound; 3]; 2] {
        &self.member_bounds
    }

    pub fn ensemble_bounds(&self) -> &[ErrorBound; 2] {
        &self.ensemble_bounds
    }

    pub fn params(&self) -> CoTransferParams {
        self.params
    }

    /// Rounds executed, including the final round that changed nothing.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Majority vote of ensemble `d`.
    pub fn vote(&self, d: usize, x: &[f64]) -> u8 {
        majority([0, 1, 2].map(|i| self.ensembles[d][i].classify(x)))
    }

    /// Final hypothesis: majority of the source-to-target ensemble.
    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        let width = self.ensembles[1][0].width();
        if x.len() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                actual: x.len(),
            });
        }
        Ok(self.vote(1, x))
    }

    /// View of ensemble `d` as one classifier.
    pub fn ensemble(&self, d: usize) -> EnsembleView<'_> {
        EnsembleView { state: self, d }
    }

    fn heldout(&self, t: &EncodedDataset) -> [f64; 2] {
        [0, 1].map(|d| error_rate(&self.ensemble(d), t))
    }
}

impl Classifier for CoTransferState {
    fn classify(&self, x: &[f64]) -> u8 {
        self.vote(1, x)
    }
}

pub struct EnsembleView<'a> {
    state: &'a CoTransferState,
    d: usize,
}

impl Classifier for EnsembleView<'_> {
    fn classify(&self, x: &[f64]) -> u8 {
        self.state.vote(self.d, x)
    }
}

/// One pass of the repeat body. All error estimates and pseudo-labels use
/// the ensembles as they were when the round started; refits happen last.
pub fn cotransfer_round(state: &mut CoTransferState, pair: &DomainPair) -> Result<RoundRecord> {
    if state.rounds >= state.params.max_rounds {
        return Err(Error::RoundCap(state.params.max_rounds));
    }
    state.rounds += 1;
    let mut record = RoundRecord {
        round: state.rounds,
        ..RoundRecord::default()
    };

    let mut steps = Vec::with_capacity(2);
    for d in 0..2 {
        steps.push(label_domain(state, pair, d, &mut record)?);
    }
    for d in 0..2 {
        record.member_updates[d] = steps[d].member_sets.each_ref().map(|s| s.is_some());
        record.ensemble_updates[d] = steps[d].ensemble_set.is_some();
    }

    let mut jobs = Vec::new();
    for d in 0..2 {
        let o = (d + 1) % 2;
        let Some(other) = &steps[o].ensemble_set else {
            continue;
        };
        let auxiliary = pair.labeled[o].concat(&other.materialize(&pair.unlabeled[o])?)?;
        for i in 0..3 {
            if let Some(own) = &steps[d].member_sets[i] {
                let target = pair.labeled[d].concat(&own.materialize(&pair.unlabeled[d])?)?;
                jobs.push((d, i, auxiliary.clone(), target));
            }
        }
    }
    let boost = state.params.boost;
    let refits = jobs
        .par_iter()
        .map(|(_, _, s, t)| fit_tradaboost(s, t, boost))
        .collect::<Result<Vec<_>>>()?;
    for ((d, i, _, _), model) in jobs.into_iter().zip(refits) {
        state.ensembles[d][i] = model;
        state.member_bounds[d][i] = ErrorBound {
            error: record.member_errors[d][i],
            count: record.member_sizes[d][i],
        };
        record.refit[d][i] = true;
    }
    for d in 0..2 {
        if record.ensemble_updates[d] {
            state.ensemble_bounds[d] = ErrorBound {
                error: record.ensemble_errors[d],
                count: record.ensemble_sizes[d],
            };
        }
    }
    Ok(record)
}

fn label_domain(
    state: &mut CoTransferState,
    pair: &DomainPair,
    d: usize,
    record: &mut RoundRecord,
) -> Result<DomainStep> {
    let (l, u) = (&pair.labeled[d], &pair.unlabeled[d]);
    let h = &state.ensembles[d];
    let on_l = [0, 1, 2].map(|i| h[i].classify_all(l.features()));
    let on_u = [0, 1, 2].map(|i| h[i].classify_all(u.features()));

    let e = ensemble_error_from_predictions([&on_l[0], &on_l[1], &on_l[2]], l.labels());
    record.ensemble_errors[d] = e;

    let mut member_sets: [Option<PseudoLabeledSet>; 3] = Default::default();
    let mut labeled: [PseudoLabeledSet; 3] = Default::default();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let ei = pair_error_from_predictions(&on_l[j], &on_l[k], l.labels());
        record.member_errors[d][i] = ei;
        let prev = state.member_bounds[d][i];
        if !(ei < prev.error) {
            continue;
        }
        let set = pseudo_label_from_predictions(&on_u[j], &on_u[k], i);
        let (set, accepted) = accept(ei, prev, set, &mut state.rng)?;
        record.member_sizes[d][i] = set.len();
        if let Some(count) = accepted {
            record.accepted.push(Acceptance {
                domain: d,
                level: Level::Member(i),
                error: ei,
                size: set.len(),
                prev_error: prev.error,
                prev_count: count,
            });
            member_sets[i] = Some(set.clone());
        }
        labeled[i] = set;
    }

    let mut ensemble_set = None;
    let prev = state.ensemble_bounds[d];
    if e < prev.error {
        let screened = screen_from_predictions(
            [&on_u[0], &on_u[1], &on_u[2]],
            [&labeled[0], &labeled[1], &labeled[2]],
            u,
        );
        let (set, accepted) = accept(e, prev, screened, &mut state.rng)?;
        record.ensemble_sizes[d] = set.len();
        if let Some(count) = accepted {
            record.accepted.push(Acceptance {
                domain: d,
                level: Level::Ensemble,
                error: e,
                size: set.len(),
                prev_error: prev.error,
                prev_count: count,
            });
            ensemble_set = Some(set);
        }
    }
    Ok(DomainStep {
        member_sets,
        ensemble_set,
    })
}

/// Applies the acceptance test; returns the (possibly cut) set and, when
/// accepted, the `l'` it was compared against.
fn accept<R: Rng>(
    e: f64,
    prev: ErrorBound,
    set: PseudoLabeledSet,
    rng: &mut R,
) -> Result<(PseudoLabeledSet, Option<usize>)> {
    let verdict = decide(e, prev, set.len());
    let out = match verdict.decision {
        Decision::Reject => (set, None),
        Decision::Accept => (set, Some(verdict.effective_count)),
        Decision::Subsample { keep } => (
            subsample(&set, keep, rng)?,
            Some(verdict.effective_count),
        ),
    };
    if let (s, Some(count)) = (&out.0, out.1) {
        debug_assert!(e * (s.len() as f64) < prev.error * count as f64);
    }
    Ok(out)
}

/// Initialises and iterates until a round refits nothing. `monitor` is a
/// held-out target set evaluated for the trace only.
pub fn fit_cotransfer(
    pair: &DomainPair,
    params: CoTransferParams,
    seed: u64,
    monitor: Option<&EncodedDataset>,
) -> Result<(CoTransferState, CoTransferTrace)> {
    let mut state = init_ensembles(pair, params, seed)?;
    let mut trace = CoTransferTrace {
        initial_heldout_errors: monitor.map(|t| state.heldout(t)),
        rounds: Vec::new(),
    };
    loop {
        let mut record = cotransfer_round(&mut state, pair)?;
        record.heldout_errors = monitor.map(|t| state.heldout(t));
        let changed = record.changed();
        trace.rounds.push(record);
        if !changed {
            break;
        }
    }
    Ok((state, trace))
}

/// Convenience wrapper over [`CoTransferState::predict`].
pub fn predict_co(state: &CoTransferState, x: &[f64]) -> Result<u8> {
    state.predict(x)
}

//! Agreement-based error estimates and pseudo-labeling shared by
//! tri-training and Co-Transfer.
//!
//! Everything here works on precomputed prediction vectors so that one
//! round can predict each pool once and reuse the result; the
//! model-level wrappers exist for callers holding classifiers.

use std::collections::HashSet;

use rand::Rng;

use crate::data::{EncodedDataset, FeatureMatrix, UnlabeledSet};
use crate::error::{Error, Result};
use crate::tradaboost::TrAdaBoostModel;
use crate::tree::TreeModel;

/// Returned when no sample is agreed upon; it blocks any update because
/// every bound starts at 0.5.
pub const NO_AGREEMENT_ERROR: f64 = 0.5;

pub trait Classifier {
    fn classify(&self, x: &[f64]) -> u8;

    fn classify_all(&self, x: &FeatureMatrix) -> Vec<u8> {
        x.rows().map(|r| self.classify(r)).collect()
    }
}

impl Classifier for TreeModel {
    fn classify(&self, x: &[f64]) -> u8 {
        TreeModel::classify(self, x)
    }
}

impl Classifier for TrAdaBoostModel {
    fn classify(&self, x: &[f64]) -> u8 {
        TrAdaBoostModel::classify(self, x)
    }
}

/// Fraction of `t` misclassified by `m`; `0` for an empty set.
pub fn error_rate<C: Classifier + ?Sized>(m: &C, t: &EncodedDataset) -> f64 {
    if t.is_empty() {
        return 0.0;
    }
    let wrong = t
        .features()
        .rows()
        .zip(t.labels())
        .filter(|(r, &y)| m.classify(r) != y)
        .count();
    wrong as f64 / t.len() as f64
}

/// Majority of three binary votes.
pub fn majority(votes: [u8; 3]) -> u8 {
    u8::from(votes.iter().filter(|&&v| v == 1).count() >= 2)
}

/// Both wrong over both agreeing.
pub fn pair_error_from_predictions(a: &[u8], b: &[u8], labels: &[u8]) -> f64 {
    let mut agree = 0usize;
    let mut wrong = 0usize;
    for ((&pa, &pb), &y) in a.iter().zip(b).zip(labels) {
        if pa == pb {
            agree += 1;
            wrong += usize::from(pa != y);
        }
    }
    if agree == 0 {
        NO_AGREEMENT_ERROR
    } else {
        wrong as f64 / agree as f64
    }
}

/// All three wrong over all three agreeing.
pub fn ensemble_error_from_predictions(preds: [&[u8]; 3], labels: &[u8]) -> f64 {
    let mut agree = 0usize;
    let mut wrong = 0usize;
    for (k, &y) in labels.iter().enumerate() {
        let p = preds[0][k];
        if preds[1][k] == p && preds[2][k] == p {
            agree += 1;
            wrong += usize::from(p != y);
        }
    }
    if agree == 0 {
        NO_AGREEMENT_ERROR
    } else {
        wrong as f64 / agree as f64
    }
}

pub fn measure_pair_error<C: Classifier>(hj: &C, hk: &C, l: &EncodedDataset) -> f64 {
    pair_error_from_predictions(
        &hj.classify_all(l.features()),
        &hk.classify_all(l.features()),
        l.labels(),
    )
}

pub fn measure_ensemble_error<C: Classifier>(h: [&C; 3], l: &EncodedDataset) -> f64 {
    let p = h.map(|m| m.classify_all(l.features()));
    ensemble_error_from_predictions([&p[0], &p[1], &p[2]], l.labels())
}

/// Which learner(s) produced a pseudo-label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Labeled by the two peers of member `i`, for member `i`.
    Pair(usize),
    /// Labeled by a unanimous three-member ensemble.
    Ensemble,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PseudoLabel {
    /// Row of the unlabeled pool the label refers to.
    pub index: usize,
    pub label: u8,
    pub provenance: Provenance,
}

/// Pseudo-labels referring into an [`UnlabeledSet`] by row index; the pool
/// itself is never modified, so rows may be selected again later.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PseudoLabeledSet {
    rows: Vec<PseudoLabel>,
}

impl PseudoLabeledSet {
    pub fn new(rows: Vec<PseudoLabel>) -> Self {
        PseudoLabeledSet { rows }
    }

    pub fn rows(&self) -> &[PseudoLabel] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Feature rows from `u` with the assigned labels.
    pub fn materialize(&self, u: &UnlabeledSet) -> Result<EncodedDataset> {
        let idx: Vec<usize> = self.rows.iter().map(|r| r.index).collect();
        if let Some(&bad) = idx.iter().find(|&&i| i >= u.len()) {
            return Err(Error::InvalidArgument(format!(
                "pseudo-label refers to row {bad} of a {}-row pool",
                u.len()
            )));
        }
        EncodedDataset::new(
            u.feature_names().clone(),
            u.features().select(&idx),
            self.rows.iter().map(|r| r.label).collect(),
        )
    }
}

/// Rows where both peers agree, labeled with the shared prediction.
pub fn pseudo_label_from_predictions(a: &[u8], b: &[u8], member: usize) -> PseudoLabeledSet {
    PseudoLabeledSet::new(
        a.iter()
            .zip(b)
            .enumerate()
            .filter(|(_, (pa, pb))| pa == pb)
            .map(|(index, (&label, _))| PseudoLabel {
                index,
                label,
                provenance: Provenance::Pair(member),
            })
            .collect(),
    )
}

pub fn pseudo_label_pair<C: Classifier>(
    hj: &C,
    hk: &C,
    u: &UnlabeledSet,
    member: usize,
) -> PseudoLabeledSet {
    pseudo_label_from_predictions(
        &hj.classify_all(u.features()),
        &hk.classify_all(u.features()),
        member,
    )
}

/// Union of the member sets, deduplicated by feature vector (first
/// occurrence wins), keeping rows on which the whole ensemble agrees with the
/// pseudo-label. `ensemble_preds` are the three members' predictions on `u`.
pub fn screen_from_predictions(
    ensemble_preds: [&[u8]; 3],
    sets: [&PseudoLabeledSet; 3],
    u: &UnlabeledSet,
) -> PseudoLabeledSet {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = Vec::new();
    for set in sets {
        for r in set.rows() {
            let key: Vec<u64> = u.row(r.index).iter().map(|v| v.to_bits()).collect();
            if !seen.insert(key) {
                continue;
            }
            let k = r.index;
            let unanimous = ensemble_preds.iter().all(|p| p[k] == r.label);
            if unanimous {
                out.push(PseudoLabel {
                    index: k,
                    label: r.label,
                    provenance: Provenance::Ensemble,
                });
            }
        }
    }
    PseudoLabeledSet::new(out)
}

pub fn screen_pseudo_label<C: Classifier>(
    h: [&C; 3],
    sets: [&PseudoLabeledSet; 3],
    u: &UnlabeledSet,
) -> PseudoLabeledSet {
    let p = h.map(|m| m.classify_all(u.features()));
    screen_from_predictions([&p[0], &p[1], &p[2]], sets, u)
}

/// Uniformly random subset of exactly `keep` rows, in original order.
pub fn subsample<R: Rng + ?Sized>(
    s: &PseudoLabeledSet,
    keep: usize,
    rng: &mut R,
) -> Result<PseudoLabeledSet> {
    if keep > s.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot keep {keep} of {} pseudo-labels",
            s.len()
        )));
    }
    let mut picked = rand::seq::index::sample(rng, s.len(), keep).into_vec();
    picked.sort_unstable();
    Ok(PseudoLabeledSet::new(
        picked.into_iter().map(|i| s.rows[i]).collect(),
    ))
}

//! Instance-transfer boosting (TrAdaBoost).
//!
//! Source and target rows are pooled and boosted together. Each round the
//! weighted error is measured on the target rows only; misclassified source
//! rows are down-weighted by a fixed factor `β = 1 / (1 + √(2 ln n / N))`
//! while misclassified target rows are up-weighted by `1/β_t` with
//! `β_t = ε_t / (1 - ε_t)`. The final hypothesis is a weighted vote over the
//! second half of the rounds.

use crate::data::{EncodedDataset, FeatureMatrix};
use crate::error::{Error, Result};
use crate::tree::{fit_tree_presorted, SortedColumns, TreeModel};

/// Lower clamp for the per-round target error; the upper clamp is
/// `0.5 - EPSILON_MIN`.
pub const EPSILON_MIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoostParams {
    /// Boosting rounds `N`.
    pub rounds: usize,
    /// Depth bound `D` of every base tree.
    pub max_depth: usize,
}

impl BoostParams {
    pub fn new(rounds: usize, max_depth: usize) -> Self {
        BoostParams { rounds, max_depth }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrAdaBoostModel {
    trees: Vec<TreeModel>,
    betas: Vec<f64>,
    source_beta: f64,
    params: BoostParams,
}

/// What one boosting round saw and did. Handed to the observer of
/// [`fit_tradaboost_observed`]; rows are ordered source first, then target.
#[derive(Debug)]
pub struct RoundReport<'a> {
    pub round: usize,
    pub n_source: usize,
    /// Normalised weights the round's tree was fitted with.
    pub fit_weights: &'a [f64],
    /// Normalised weights after the round's update.
    pub updated_weights: &'a [f64],
    /// Weighted target error before clamping.
    pub raw_error: f64,
    pub error: f64,
    pub beta: f64,
}

pub fn fit_tradaboost(
    source: &EncodedDataset,
    target: &EncodedDataset,
    params: BoostParams,
) -> Result<TrAdaBoostModel> {
    fit_tradaboost_observed(source, target, params, |_| {})
}

pub fn fit_tradaboost_observed(
    source: &EncodedDataset,
    target: &EncodedDataset,
    params: BoostParams,
    mut observe: impl FnMut(&RoundReport<'_>),
) -> Result<TrAdaBoostModel> {
    if params.rounds == 0 {
        return Err(Error::InvalidArgument("TrAdaBoost needs at least one round".into()));
    }
    if params.max_depth == 0 {
        return Err(Error::InvalidArgument("tree depth must be at least 1".into()));
    }
    if source.is_empty() {
        return Err(Error::InvalidArgument("empty source set".into()));
    }
    if !target.has_both_classes() {
        return Err(Error::SingleClass(format!(
            "target set of {} rows has a single class",
            target.len()
        )));
    }
    if source.width() != target.width() {
        return Err(Error::WidthMismatch {
            expected: source.width(),
            actual: target.width(),
        });
    }

    let n = source.len();
    let m = target.len();
    let mut x = FeatureMatrix::with_width(source.width());
    for r in source.features().rows().chain(target.features().rows()) {
        x.push_row(r)?;
    }
    let y: Vec<u8> = source.labels().iter().chain(target.labels()).copied().collect();
    let sorted = SortedColumns::new(&x);

    let source_beta = source_beta(n, params.rounds);
    let mut weights = vec![1.0 / (n + m) as f64; n + m];
    let mut trees = Vec::with_capacity(params.rounds);
    let mut betas = Vec::with_capacity(params.rounds);
    let mut missed = vec![false; n + m];

    for round in 0..params.rounds {
        let tree = fit_tree_presorted(&x, &y, &weights, Some(params.max_depth), &sorted)?;
        for (i, r) in x.rows().enumerate() {
            missed[i] = tree.classify(r) != y[i];
        }
        let target_mass: f64 = weights[n..].iter().sum();
        let target_missed: f64 = weights[n..]
            .iter()
            .zip(&missed[n..])
            .filter(|(_, &miss)| miss)
            .map(|(w, _)| w)
            .sum();
        let raw_error = target_missed / target_mass;
        let error = raw_error.clamp(EPSILON_MIN, 0.5 - EPSILON_MIN);
        let beta = error / (1.0 - error);

        let mut updated = weights.clone();
        for (i, w) in updated.iter_mut().enumerate() {
            if missed[i] {
                *w *= if i < n { source_beta } else { 1.0 / beta };
            }
        }
        let total: f64 = updated.iter().sum();
        updated.iter_mut().for_each(|w| *w /= total);

        observe(&RoundReport {
            round,
            n_source: n,
            fit_weights: &weights,
            updated_weights: &updated,
            raw_error,
            error,
            beta,
        });
        trees.push(tree);
        betas.push(beta);
        weights = updated;
    }

    Ok(TrAdaBoostModel {
        trees,
        betas,
        source_beta,
        params,
    })
}

/// Fixed source down-weighting factor for `n` source rows over `rounds`.
pub fn source_beta(n: usize, rounds: usize) -> f64 {
    1.0 / (1.0 + (2.0 * (n as f64).ln() / rounds as f64).sqrt())
}

impl TrAdaBoostModel {
    /// Assembles a model from parts; used by tests and tools that replay
    /// stored ensembles.
    pub fn from_parts(trees: Vec<TreeModel>, betas: Vec<f64>, source_beta: f64, params: BoostParams) -> Result<Self> {
        if trees.len() != betas.len() || trees.len() != params.rounds || trees.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{} trees, {} betas, {} rounds",
                trees.len(),
                betas.len(),
                params.rounds
            )));
        }
        if let Some(b) = betas.iter().find(|b| !(**b > 0.0 && **b < 1.0)) {
            return Err(Error::InvalidArgument(format!("beta {b} outside (0, 1)")));
        }
        Ok(TrAdaBoostModel {
            trees,
            betas,
            source_beta,
            params,
        })
    }

    pub fn trees(&self) -> &[TreeModel] {
        &self.trees
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn source_beta(&self) -> f64 {
        self.source_beta
    }

    pub fn params(&self) -> BoostParams {
        self.params
    }

    pub fn width(&self) -> usize {
        self.trees[0].width()
    }

    /// Zero-based index of the first voting round, `⌈N/2⌉ - 1`.
    pub fn vote_start(&self) -> usize {
        (self.trees.len() - 1) / 2
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        if x.len() != self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                actual: x.len(),
            });
        }
        Ok(self.classify(x))
    }

    /// `1` iff `Π β_t^{-h_t(x)} ≥ Π β_t^{-1/2}` over the voting window,
    /// evaluated as `Σ ln(1/β_t)·(h_t(x) - ½) ≥ 0`.
    pub(crate) fn classify(&self, x: &[f64]) -> u8 {
        let start = self.vote_start();
        let score: f64 = self.trees[start..]
            .iter()
            .zip(&self.betas[start..])
            .map(|(t, b)| -b.ln() * (f64::from(t.classify(x)) - 0.5))
            .sum();
        u8::from(score >= 0.0)
    }
}

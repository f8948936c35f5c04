//! Tri-training baseline: three unbounded trees grown on bootstrap samples
//! of the labeled target data, each refined with the unlabeled points its
//! two peers agree on.

use rand::Rng;

use crate::agreement::{
    error_rate, majority, pair_error_from_predictions, pseudo_label_from_predictions, subsample, Classifier,
    PseudoLabeledSet,
};
use crate::data::{bootstrap_with, EncodedDataset, UnlabeledSet};
use crate::error::{Error, Result};
use crate::noise_bound::{decide, Decision, ErrorBound};
use crate::seed;
use crate::tree::{fit_tree, TreeModel};

pub const DEFAULT_MAX_ROUNDS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriParams {
    /// Base-tree depth; `None` grows to purity.
    pub max_depth: Option<usize>,
    pub max_rounds: usize,
}

impl Default for TriParams {
    fn default() -> Self {
        TriParams {
            max_depth: None,
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriModel {
    trees: [TreeModel; 3],
    bounds: [ErrorBound; 3],
    rounds: usize,
}

/// One accepted update, kept for auditing the product condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriAcceptance {
    pub member: usize,
    pub error: f64,
    pub size: usize,
    pub prev_error: f64,
    /// `l'` compared against, after first-round unblocking.
    pub prev_count: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriRound {
    pub errors: [f64; 3],
    /// Pseudo-label set sizes after any subsampling (0 when not labeled).
    pub sizes: [usize; 3],
    pub refit: [bool; 3],
    pub accepted: Vec<TriAcceptance>,
    /// Held-out error of the vote after this round, when monitored.
    pub heldout_error: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriTrace {
    pub initial_heldout_error: Option<f64>,
    pub rounds: Vec<TriRound>,
}

impl TriModel {
    pub fn trees(&self) -> &[TreeModel; 3] {
        &self.trees
    }

    pub fn bounds(&self) -> &[ErrorBound; 3] {
        &self.bounds
    }

    /// Rounds executed, including the final round that changed nothing.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        let width = self.trees[0].width();
        if x.len() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                actual: x.len(),
            });
        }
        Ok(self.classify(x))
    }

    fn votes(&self, x: &[f64]) -> [u8; 3] {
        [0, 1, 2].map(|i| self.trees[i].classify(x))
    }
}

impl Classifier for TriModel {
    fn classify(&self, x: &[f64]) -> u8 {
        majority(self.votes(x))
    }
}

pub fn fit_tritraining(l: &EncodedDataset, u: &UnlabeledSet, seed: u64) -> Result<TriModel> {
    fit_tritraining_traced(l, u, seed, TriParams::default(), None).map(|(m, _)| m)
}

/// Full fit. `monitor`, when given, is evaluated after initialisation and
/// after every round; it never influences training.
pub fn fit_tritraining_traced(
    l: &EncodedDataset,
    u: &UnlabeledSet,
    seed: u64,
    params: TriParams,
    monitor: Option<&EncodedDataset>,
) -> Result<(TriModel, TriTrace)> {
    if l.len() < 2 || !l.has_both_classes() {
        return Err(Error::SingleClass(format!(
            "tri-training needs both classes among its {} labeled rows",
            l.len()
        )));
    }
    if u.width() != l.width() {
        return Err(Error::WidthMismatch {
            expected: l.width(),
            actual: u.width(),
        });
    }
    let mut rng = seed::rng(seed);
    let fit = |d: &EncodedDataset| fit_tree(d.features(), d.labels(), &vec![1.0; d.len()], params.max_depth);

    let mut trees = Vec::with_capacity(3);
    for _ in 0..3 {
        trees.push(fit(&bootstrap_with(l, &mut rng)?)?);
    }
    let mut model = TriModel {
        trees: trees.try_into().expect("three trees"),
        bounds: [ErrorBound::default(); 3],
        rounds: 0,
    };
    let heldout = |m: &TriModel| monitor.map(|t| error_rate(m, t));
    let mut trace = TriTrace {
        initial_heldout_error: heldout(&model),
        rounds: Vec::new(),
    };

    loop {
        if model.rounds >= params.max_rounds {
            return Err(Error::RoundCap(params.max_rounds));
        }
        model.rounds += 1;
        let round = tri_round(&mut model, l, u, &mut rng, &fit)?;
        let changed = round.refit.iter().any(|&r| r);
        trace.rounds.push(TriRound {
            heldout_error: heldout(&model),
            ..round
        });
        if !changed {
            break;
        }
    }
    Ok((model, trace))
}

fn tri_round<R: Rng>(
    model: &mut TriModel,
    l: &EncodedDataset,
    u: &UnlabeledSet,
    rng: &mut R,
    fit: &impl Fn(&EncodedDataset) -> Result<TreeModel>,
) -> Result<TriRound> {
    let on_l = model.trees.each_ref().map(|t| t.classify_all(l.features()));
    let on_u = model.trees.each_ref().map(|t| t.classify_all(u.features()));
    let mut round = TriRound::default();
    let mut pseudo: [Option<PseudoLabeledSet>; 3] = Default::default();

    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let e = pair_error_from_predictions(&on_l[j], &on_l[k], l.labels());
        round.errors[i] = e;
        let prev = model.bounds[i];
        if !(e < prev.error) {
            continue;
        }
        let mut set = pseudo_label_from_predictions(&on_u[j], &on_u[k], i);
        let verdict = decide(e, prev, set.len());
        match verdict.decision {
            Decision::Reject => {}
            Decision::Accept => pseudo[i] = Some(set.clone()),
            Decision::Subsample { keep } => {
                set = subsample(&set, keep, rng)?;
                pseudo[i] = Some(set.clone());
            }
        }
        round.sizes[i] = set.len();
        if pseudo[i].is_some() {
            round.accepted.push(TriAcceptance {
                member: i,
                error: e,
                size: set.len(),
                prev_error: prev.error,
                prev_count: verdict.effective_count,
            });
        }
    }

    for (i, set) in pseudo.iter().enumerate() {
        let Some(set) = set else { continue };
        let augmented = l.concat(&set.materialize(u)?)?;
        model.trees[i] = fit(&augmented)?;
        model.bounds[i] = ErrorBound {
            error: round.errors[i],
            count: set.len(),
        };
        round.refit[i] = true;
    }
    Ok(round)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::ShiftedGaussians;

    fn task(seed: u64) -> (EncodedDataset, UnlabeledSet, EncodedDataset) {
        let g = ShiftedGaussians {
            shift: 0.0,
            ..ShiftedGaussians::default()
        };
        let (_, target) = g.generate(10, 400, seed).unwrap();
        let (pool, test) = (target.select(&(0..300).collect::<Vec<_>>()), target.select(&(300..400).collect::<Vec<_>>()));
        let (lab, unl) = crate::data::partition_label_rate(&pool, 0.1, seed).unwrap();
        (lab, unl, test)
    }

    #[test]
    fn empty_pool_never_updates() {
        let (l, u, _) = task(1);
        let empty = UnlabeledSet::empty(u.feature_names().clone());
        let (m, trace) = fit_tritraining_traced(&l, &empty, 4, TriParams::default(), None).unwrap();
        assert_eq!(m.rounds(), 1);
        assert!(trace.rounds[0].refit.iter().all(|r| !r));
        assert_eq!(m.bounds(), &[ErrorBound::default(); 3]);
    }

    #[test]
    fn majority_of_three() {
        assert_eq!(majority([0, 0, 1]), 0);
        assert_eq!(majority([1, 0, 1]), 1);
        for pattern in 0..8u8 {
            let votes = [pattern & 1, (pattern >> 1) & 1, (pattern >> 2) & 1];
            let ones = votes.iter().filter(|&&v| v == 1).count();
            assert_eq!(majority(votes), u8::from(ones * 2 > 3));
        }
    }

    #[test]
    fn accepted_updates_respect_product_bound() {
        for s in 0..10 {
            let (l, u, _) = task(s);
            let (_, trace) = fit_tritraining_traced(&l, &u, s, TriParams::default(), None).unwrap();
            for r in &trace.rounds {
                for a in &r.accepted {
                    assert!(a.error * (a.size as f64) < a.prev_error * a.prev_count as f64);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let (l, u, t) = task(3);
        let a = fit_tritraining_traced(&l, &u, 9, TriParams::default(), Some(&t)).unwrap();
        let b = fit_tritraining_traced(&l, &u, 9, TriParams::default(), Some(&t)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_class_rejected() {
        let l = EncodedDataset::from_rows(&[[0.0], [1.0]], vec![1, 1]).unwrap();
        let u = UnlabeledSet::empty(l.feature_names().clone());
        assert!(fit_tritraining(&l, &u, 0).is_err());
    }
}

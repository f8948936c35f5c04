#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use cotransfer::agreement::{
    ensemble_error_from_predictions, pair_error_from_predictions, pseudo_label_from_predictions,
    screen_from_predictions, PseudoLabeledSet, NO_AGREEMENT_ERROR,
};
use cotransfer::cotransfer::{cotransfer_round, fit_cotransfer, init_ensembles, CoTransferParams};
use cotransfer::data::{partition_label_rate, EncodedDataset, FeatureMatrix, UnlabeledSet};
use cotransfer::synthetic::ShiftedGaussians;
use cotransfer::tradaboost::{fit_tradaboost_observed, source_beta, BoostParams};
use cotransfer::tree::{fit_tree, Node};
use cotransfer::tritraining::{fit_tritraining_traced, TriParams};
use cotransfer::TrAdaBoostModel;

use common::{check_cotransfer_acceptances, check_tri_acceptances, gaussian_pair, snapshot};

#[test]
fn product_condition_over_seeded_runs() {
    let mut accepted = 0;
    for seed in 0..100 {
        let (pair, _) = gaussian_pair(60, 0.2, seed);
        let (state, trace) = fit_cotransfer(&pair, CoTransferParams::new(3, 2), seed, None).unwrap();
        accepted += check_cotransfer_acceptances(&trace);
        assert_eq!(state.rounds(), trace.rounds.len());
        assert!(!trace.rounds.last().unwrap().changed());
        assert!(trace.rounds[..trace.rounds.len() - 1].iter().all(|r| r.changed()));
    }
    assert!(accepted > 100, "only {accepted} acceptances in 100 runs");
}

#[test]
fn tri_training_product_condition() {
    let mut accepted = 0;
    for seed in 0..30 {
        let (pair, _) = gaussian_pair(80, 0.2, seed);
        let (_, trace) =
            fit_tritraining_traced(&pair.labeled[1], &pair.unlabeled[1], seed, TriParams::default(), None)
                .unwrap();
        accepted += check_tri_acceptances(&trace);
    }
    assert!(accepted > 0);
}

#[test]
fn pools_untouched_by_fitting() {
    let (pair, test) = gaussian_pair(80, 0.1, 5);
    let before = pair.clone();
    let u = [0, 1].map(|d| pair.unlabeled[d].features().rows().map(<[f64]>::to_vec).collect::<Vec<_>>());
    fit_cotransfer(&pair, CoTransferParams::new(4, 3), 5, Some(&test)).unwrap();
    fit_tritraining_traced(&pair.labeled[1], &pair.unlabeled[1], 5, TriParams::default(), None).unwrap();
    assert_eq!(pair, before);
    for d in 0..2 {
        let after: Vec<Vec<f64>> = pair.unlabeled[d].features().rows().map(<[f64]>::to_vec).collect();
        assert_eq!(after, u[d]);
        assert_eq!(snapshot(&pair.labeled[d]), snapshot(&before.labeled[d]));
    }
}

#[test]
fn refits_and_bounds_follow_the_gate() {
    let mut refits = 0;
    for seed in 0..20 {
        let (pair, _) = gaussian_pair(60, 0.2, 100 + seed);
        let mut state = init_ensembles(&pair, CoTransferParams::new(3, 2), seed).unwrap();
        loop {
            let models = state.ensembles().clone();
            let members = *state.member_bounds();
            let ensembles = *state.ensemble_bounds();
            let r = cotransfer_round(&mut state, &pair).unwrap();
            for d in 0..2 {
                let o = (d + 1) % 2;
                for i in 0..3 {
                    let gate = r.member_updates[d][i] && r.ensemble_updates[o];
                    assert_eq!(r.refit[d][i], gate, "seed {seed} round {} [{d}][{i}]", r.round);
                    if gate {
                        refits += 1;
                        assert_eq!(state.member_bounds()[d][i].error, r.member_errors[d][i]);
                        assert_eq!(state.member_bounds()[d][i].count, r.member_sizes[d][i]);
                    } else {
                        assert_eq!(state.ensembles()[d][i], models[d][i]);
                        assert_eq!(state.member_bounds()[d][i], members[d][i]);
                    }
                }
                if r.ensemble_updates[d] {
                    assert_eq!(state.ensemble_bounds()[d].count, r.ensemble_sizes[d]);
                } else {
                    assert_eq!(state.ensemble_bounds()[d], ensembles[d]);
                }
            }
            if !r.changed() {
                break;
            }
        }
    }
    assert!(refits > 0);
}

/// Snapshot of one boosting round, owned so it outlives the observer.
struct Round {
    fit: Vec<f64>,
    updated: Vec<f64>,
    error: f64,
    beta: f64,
}

#[test]
fn tradaboost_weights_positive_normalised_and_reweighted() {
    for seed in 0..10 {
        let (source, target) = ShiftedGaussians::default().generate(60, 120, seed).unwrap();
        let (target, _) = partition_label_rate(&target, 0.2, seed).unwrap();
        let params = BoostParams::new(8, 2);
        let mut rounds = Vec::new();
        let n_source = source.len();
        let model = fit_tradaboost_observed(&source, &target, params, |r| {
            assert_eq!(r.n_source, n_source);
            rounds.push(Round {
                fit: r.fit_weights.to_vec(),
                updated: r.updated_weights.to_vec(),
                error: r.error,
                beta: r.beta,
            });
        })
        .unwrap();
        assert_eq!(rounds.len(), 8);
        let bs = source_beta(n_source, 8);
        let all = source.concat(&target).unwrap();
        for (t, r) in rounds.iter().enumerate() {
            for w in [&r.fit, &r.updated] {
                assert!(w.iter().all(|&v| v > 0.0));
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
            assert!((1e-6..=0.5 - 1e-6).contains(&r.error));
            assert!((r.beta - r.error / (1.0 - r.error)).abs() < 1e-12);
            if t + 1 < rounds.len() {
                assert_eq!(r.updated, rounds[t + 1].fit);
            }
            // update factors relative to a correctly classified row of the same domain
            let tree = &model.trees()[t];
            let factor: Vec<f64> = (0..all.len()).map(|i| r.updated[i] / r.fit[i]).collect();
            let wrong: Vec<bool> = (0..all.len()).map(|i| tree.predict(all.row(i)).unwrap() != all.labels()[i]).collect();
            for (range, expect) in [(0..n_source, bs), (n_source..all.len(), 1.0 / r.beta)] {
                let base = range.clone().find(|&i| !wrong[i]).map(|i| factor[i]);
                let Some(base) = base else { continue };
                for i in range {
                    let want = if wrong[i] { expect } else { 1.0 };
                    assert!((factor[i] / base - want).abs() < 1e-9 * want.max(1.0), "round {t} row {i}");
                }
            }
        }
    }
}

fn constant_tree(class: u8) -> cotransfer::TreeModel {
    fit_tree(&FeatureMatrix::from_rows(&[[0.0]]).unwrap(), &[class], &[1.0], Some(1)).unwrap()
}

/// `1` iff `Π β_t^{-h_t} ≥ Π β_t^{-1/2}`, i.e. `Π β_t^{1 - 2h_t} ≥ 1` after
/// squaring, over rounds `⌈N/2⌉..N`; `None` on an exact tie.
fn exact_vote(betas: &[(i64, i64)], votes: &[u8]) -> Option<u8> {
    let n = betas.len();
    let mut prod = BigRational::one();
    for t in n.div_ceil(2) - 1..n {
        let b = BigRational::new(BigInt::from(betas[t].0), BigInt::from(betas[t].1));
        prod *= if votes[t] == 1 { b.recip() } else { b };
    }
    match prod.cmp(&BigRational::one()) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some(0),
        std::cmp::Ordering::Greater => Some(1),
    }
}

#[test]
fn boosted_vote_matches_exact_rationals() {
    let grid: Vec<(i64, i64)> = vec![(1, 2), (1, 3), (2, 3), (1, 7), (5, 6), (3, 10), (9, 10), (1, 100)];
    let mut checked = 0;
    for n in 1..=5usize {
        for code in 0..grid.len().pow(n as u32) {
            let betas: Vec<(i64, i64)> = (0..n).map(|t| grid[code / grid.len().pow(t as u32) % grid.len()]).collect();
            let fb: Vec<f64> = betas.iter().map(|&(p, q)| p as f64 / q as f64).collect();
            for mask in 0..1u32 << n {
                let votes: Vec<u8> = (0..n).map(|t| ((mask >> t) & 1) as u8).collect();
                let Some(want) = exact_vote(&betas, &votes) else { continue };
                let trees = votes.iter().map(|&c| constant_tree(c)).collect();
                let m = TrAdaBoostModel::from_parts(trees, fb.clone(), 0.5, BoostParams::new(n, 1)).unwrap();
                assert_eq!(m.predict(&[0.0]).unwrap(), want, "betas {betas:?} votes {votes:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn symmetric_tie_votes_one() {
    let m = TrAdaBoostModel::from_parts(
        vec![constant_tree(0), constant_tree(1)],
        vec![0.25, 0.25],
        0.5,
        BoostParams::new(2, 1),
    )
    .unwrap();
    // window is the second round only, which votes 1
    assert_eq!(m.predict(&[0.0]).unwrap(), 1);
    let m = TrAdaBoostModel::from_parts(
        vec![constant_tree(0), constant_tree(1), constant_tree(0)],
        vec![0.5, 0.25, 0.25],
        0.5,
        BoostParams::new(3, 1),
    )
    .unwrap();
    assert_eq!(m.predict(&[0.0]).unwrap(), 1);
}

fn brute_pair_error(a: &[u8], b: &[u8], y: &[u8]) -> f64 {
    let agree: Vec<usize> = (0..y.len()).filter(|&k| a[k] == b[k]).collect();
    if agree.is_empty() {
        return NO_AGREEMENT_ERROR;
    }
    agree.iter().filter(|&&k| a[k] != y[k]).count() as f64 / agree.len() as f64
}

fn preds(n: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0u8..2, n)
}

proptest! {
    #[test]
    fn estimators_match_brute_force(
        (a, b, c, y) in (1usize..40).prop_flat_map(|n| (preds(n), preds(n), preds(n), preds(n)))
    ) {
        prop_assert_eq!(pair_error_from_predictions(&a, &b, &y), brute_pair_error(&a, &b, &y));
        // three agree iff both pairs (a,b) and (a,c) agree
        let ab: Vec<u8> = (0..y.len()).map(|k| if a[k] == c[k] { b[k] } else { 1 - a[k] }).collect();
        prop_assert_eq!(
            ensemble_error_from_predictions([&a, &b, &c], &y),
            brute_pair_error(&a, &ab, &y)
        );
        let set = pseudo_label_from_predictions(&a, &b, 0);
        let want: Vec<(usize, u8)> = (0..y.len()).filter(|&k| a[k] == b[k]).map(|k| (k, a[k])).collect();
        let got: Vec<(usize, u8)> = set.rows().iter().map(|r| (r.index, r.label)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn screening_matches_brute_force(
        (rows, p, sets) in (1usize..25).prop_flat_map(|n| (
            proptest::collection::vec(0u8..4, n),
            [preds(n), preds(n), preds(n)],
            [preds(n), preds(n), preds(n)],
        ))
    ) {
        // few distinct feature values so duplicates are common
        let x = FeatureMatrix::from_rows(&rows.iter().map(|&v| [f64::from(v)]).collect::<Vec<_>>()).unwrap();
        let u = UnlabeledSet::new(std::sync::Arc::new(vec!["x".into()]), x).unwrap();
        let member: Vec<PseudoLabeledSet> = (0..3)
            .map(|i| pseudo_label_from_predictions(&sets[i], &p[(i + 1) % 3], i))
            .collect();
        let got = screen_from_predictions([&p[0], &p[1], &p[2]], [&member[0], &member[1], &member[2]], &u);

        let mut seen = HashSet::new();
        let mut want = Vec::new();
        for s in &member {
            for r in s.rows() {
                if seen.insert(rows[r.index]) && (0..3).all(|j| p[j][r.index] == r.label) {
                    want.push((r.index, r.label));
                }
            }
        }
        let got: Vec<(usize, u8)> = got.rows().iter().map(|r| (r.index, r.label)).collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn fits_are_deterministic() {
    let (pair, test) = gaussian_pair(80, 0.1, 9);
    let a = fit_cotransfer(&pair, CoTransferParams::new(5, 3), 9, Some(&test)).unwrap();
    let b = fit_cotransfer(&pair, CoTransferParams::new(5, 3), 9, Some(&test)).unwrap();
    assert_eq!(a.1, b.1);
    assert_eq!(a.0.ensembles(), b.0.ensembles());
    let t1 = fit_tritraining_traced(&pair.labeled[1], &pair.unlabeled[1], 9, TriParams::default(), Some(&test)).unwrap();
    let t2 = fit_tritraining_traced(&pair.labeled[1], &pair.unlabeled[1], 9, TriParams::default(), Some(&test)).unwrap();
    assert_eq!(t1, t2);
}

#[test]
fn sealed_labels_do_not_leak() {
    for seed in 0..5 {
        let (pair, test) = gaussian_pair(80, 0.1, 40 + seed);
        let mut poisoned = pair.clone();
        for d in 0..2 {
            let u = poisoned.unlabeled[d].clone();
            let flipped: Vec<u8> = u.unseal().unwrap().labels().iter().map(|y| 1 - y).collect();
            poisoned.unlabeled[d] = u.with_sealed_labels(flipped).unwrap();
        }
        assert_ne!(pair.unlabeled[1].unseal(), poisoned.unlabeled[1].unseal());

        let params = CoTransferParams::new(4, 3);
        let clean = fit_cotransfer(&pair, params, seed, Some(&test)).unwrap();
        let dirty = fit_cotransfer(&poisoned, params, seed, Some(&test)).unwrap();
        assert_eq!(clean.1, dirty.1);
        assert_eq!(clean.0.ensembles(), dirty.0.ensembles());

        let tri = |p: &cotransfer::DomainPair| {
            fit_tritraining_traced(&p.labeled[1], &p.unlabeled[1], seed, TriParams::default(), Some(&test)).unwrap()
        };
        assert_eq!(tri(&pair), tri(&poisoned));
    }
}

/// Independent greedy CART: scan features then thresholds in ascending
/// order, keep a candidate only if strictly better beyond the tolerance.
fn brute_tree(rows: &[Vec<f64>], y: &[u8], w: &[f64], idx: &[usize], depth: usize, max: usize, x: &[f64]) -> u8 {
    let mass = |ids: &[usize]| {
        let mut m = [0.0; 2];
        for &i in ids {
            m[y[i] as usize] += w[i];
        }
        m
    };
    let m = mass(idx);
    let leaf = u8::from(m[1] > m[0]);
    if m[0] <= 0.0 || m[1] <= 0.0 || depth >= max || idx.len() < 2 {
        return leaf;
    }
    let gini = |m: [f64; 2]| {
        let t = m[0] + m[1];
        if t <= 0.0 { 0.0 } else { t - (m[0] * m[0] + m[1] * m[1]) / t }
    };
    let tol = 1e-12 * (m[0] + m[1]);
    let mut best: Option<(usize, f64, f64)> = None;
    for f in 0..rows[0].len() {
        let mut vals: Vec<f64> = idx.iter().map(|&i| rows[i][f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for pair in vals.windows(2) {
            let th = pair[0] + (pair[1] - pair[0]) / 2.0;
            let left: Vec<usize> = idx.iter().copied().filter(|&i| rows[i][f] <= th).collect();
            let right: Vec<usize> = idx.iter().copied().filter(|&i| rows[i][f] > th).collect();
            let score = gini(mass(&left)) + gini(mass(&right));
            if best.is_none_or(|b| score < b.2 - tol) {
                best = Some((f, th, score));
            }
        }
    }
    let Some((f, th, _)) = best else { return leaf };
    let side: Vec<usize> = idx.iter().copied().filter(|&i| (rows[i][f] <= th) == (x[f] <= th)).collect();
    brute_tree(rows, y, w, &side, depth + 1, max, x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tree_matches_brute_force(
        (rows, y, w) in (2usize..16).prop_flat_map(|n| (
            proptest::collection::vec(proptest::collection::vec(0u8..4, 2), n),
            preds(n),
            proptest::collection::vec(1u32..8, n),
        )),
        depth in 1usize..4,
    ) {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| f64::from(v)).collect()).collect();
        let w: Vec<f64> = w.iter().map(|&v| f64::from(v)).collect();
        let tree = fit_tree(&FeatureMatrix::from_rows(&rows).unwrap(), &y, &w, Some(depth)).unwrap();
        let all: Vec<usize> = (0..rows.len()).collect();
        for a in 0..5 {
            for b in 0..5 {
                let x = [f64::from(a) - 0.5, f64::from(b) - 0.5];
                prop_assert_eq!(tree.predict(&x).unwrap(), brute_tree(&rows, &y, &w, &all, 0, depth, &x));
            }
        }
    }

    #[test]
    fn tree_ignores_weight_scale(
        (rows, y, w) in (2usize..30).prop_flat_map(|n| (
            proptest::collection::vec(proptest::collection::vec(-3.0f64..3.0, 3), n),
            preds(n),
            proptest::collection::vec(0.01f64..1.0, n),
        )),
        k in -20i32..20,
    ) {
        let x = FeatureMatrix::from_rows(&rows).unwrap();
        let c = 2f64.powi(k);
        let scaled: Vec<f64> = w.iter().map(|v| v * c).collect();
        let a = fit_tree(&x, &y, &w, Some(4)).unwrap();
        let b = fit_tree(&x, &y, &scaled, Some(4)).unwrap();
        prop_assert_eq!(a.nodes().len(), b.nodes().len());
        for (na, nb) in a.nodes().iter().zip(b.nodes()) {
            match (na, nb) {
                (Node::Leaf { class: ca, mass: ma }, Node::Leaf { class: cb, mass: mb }) => {
                    prop_assert_eq!(ca, cb);
                    prop_assert_eq!([ma[0] * c, ma[1] * c], *mb);
                }
                (s, t) => prop_assert_eq!(s, t),
            }
        }
    }
}

#[test]
fn unbounded_tree_fits_consistent_data() {
    let d: EncodedDataset = ShiftedGaussians::default().generate(200, 1, 3).unwrap().0;
    let t = fit_tree(d.features(), d.labels(), &vec![1.0; d.len()], None).unwrap();
    let wrong = (0..d.len()).filter(|&i| t.predict(d.row(i)).unwrap() != d.labels()[i]).count();
    assert_eq!(wrong, 0);
}

use rand::seq::SliceRandom;
use rand::Rng;

use super::{EncodedDataset, UnlabeledSet};
use crate::error::{Error, Result};
use crate::seed;

/// Redraws allowed before `bootstrap` gives up on getting both classes.
pub const BOOTSTRAP_RETRIES: usize = 100;

fn class_indices(labels: &[u8]) -> [Vec<usize>; 2] {
    let mut out = [Vec::new(), Vec::new()];
    for (i, &l) in labels.iter().enumerate() {
        out[l as usize].push(i);
    }
    out
}

/// Rate-times-size rounded up, guarded against float noise such as
/// `0.1 * 30 = 3.0000000000000004`.
fn labeled_count(rate: f64, n: usize) -> usize {
    ((rate * n as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Per-class labeled quotas summing to `total`, via largest remainder with a
/// floor of one per present class.
fn stratified_quotas(total: usize, counts: [usize; 2]) -> Result<[usize; 2]> {
    let n = counts[0] + counts[1];
    if n == 0 {
        return Err(Error::InvalidArgument("cannot partition an empty set".into()));
    }
    let exact = counts.map(|c| total as f64 * c as f64 / n as f64);
    let mut quota = exact.map(|e| e.floor() as usize);
    let mut left = total - quota[0] - quota[1];
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for &c in order.iter().cycle() {
        if left == 0 {
            break;
        }
        if quota[c] < counts[c] {
            quota[c] += 1;
            left -= 1;
        }
    }
    for c in 0..2 {
        if quota[c] == 0 {
            let other = 1 - c;
            if counts[c] == 0 || quota[other] < 2 {
                return Err(Error::SingleClass(format!(
                    "class {c} cannot be represented among {total} labeled rows"
                )));
            }
            quota[c] = 1;
            quota[other] -= 1;
        }
    }
    Ok(quota)
}

/// Stratified split into `⌈rate·|d|⌉` labeled rows and the remaining rows,
/// whose labels are sealed. Both outputs keep the input's row order.
pub fn partition_label_rate(
    d: &EncodedDataset,
    rate: f64,
    seed: u64,
) -> Result<(EncodedDataset, UnlabeledSet)> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "label rate {rate} is outside (0, 1)"
        )));
    }
    let total = labeled_count(rate, d.len());
    let by_class = class_indices(d.labels());
    let quota = stratified_quotas(total, [by_class[0].len(), by_class[1].len()])?;

    let mut rng = seed::rng(seed);
    let mut chosen = vec![false; d.len()];
    for (c, mut idx) in by_class.into_iter().enumerate() {
        idx.shuffle(&mut rng);
        for &i in &idx[..quota[c]] {
            chosen[i] = true;
        }
    }
    let (lab, unlab): (Vec<usize>, Vec<usize>) = (0..d.len()).partition(|&i| chosen[i]);
    Ok((d.select(&lab), d.select(&unlab).into_unlabeled()))
}

/// Stratified k-fold test-index sets. Each class is shuffled and dealt
/// round-robin, so fold sizes and per-class counts differ by at most one.
pub fn kfold_indices(labels: &[u8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    if labels.len() < k {
        return Err(Error::InvalidArgument(format!(
            "{} rows cannot fill {k} folds",
            labels.len()
        )));
    }
    let mut rng = seed::rng(seed);
    let mut folds = vec![Vec::new(); k];
    let mut pos = 0;
    for mut idx in class_indices(labels) {
        idx.shuffle(&mut rng);
        for i in idx {
            folds[pos % k].push(i);
            pos += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// `(train, test)` pairs for stratified k-fold cross validation.
pub fn kfold(
    d: &EncodedDataset,
    k: usize,
    seed: u64,
) -> Result<Vec<(EncodedDataset, EncodedDataset)>> {
    let folds = kfold_indices(d.labels(), k, seed)?;
    Ok(folds
        .iter()
        .map(|test| {
            let mut in_test = vec![false; d.len()];
            test.iter().for_each(|&i| in_test[i] = true);
            let train: Vec<usize> = (0..d.len()).filter(|&i| !in_test[i]).collect();
            (d.select(&train), d.select(test))
        })
        .collect())
}

/// Same-size draw with replacement that contains both classes.
pub fn bootstrap_indices<R: Rng + ?Sized>(labels: &[u8], rng: &mut R) -> Result<Vec<usize>> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::InvalidArgument("cannot bootstrap an empty set".into()));
    }
    let [zeros, ones] = class_indices(labels).map(|v| v.len());
    if zeros == 0 || ones == 0 {
        return Err(Error::SingleClass(format!(
            "bootstrap source of {n} rows holds a single class"
        )));
    }
    for _ in 0..BOOTSTRAP_RETRIES {
        let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let first = labels[idx[0]];
        if idx.iter().any(|&i| labels[i] != first) {
            return Ok(idx);
        }
    }
    Err(Error::SingleClass(format!(
        "{BOOTSTRAP_RETRIES} bootstrap draws of {n} rows were all single-class"
    )))
}

pub fn bootstrap_with<R: Rng + ?Sized>(d: &EncodedDataset, rng: &mut R) -> Result<EncodedDataset> {
    bootstrap_indices(d.labels(), rng).map(|idx| d.select(&idx))
}

pub fn bootstrap(d: &EncodedDataset, seed: u64) -> Result<EncodedDataset> {
    bootstrap_with(d, &mut seed::rng(seed))
}

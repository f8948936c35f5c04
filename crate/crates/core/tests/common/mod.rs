#![allow(dead_code)]

use cotransfer::cotransfer::{Acceptance, CoTransferTrace};
use cotransfer::data::{partition_label_rate, DomainPair, EncodedDataset};
use cotransfer::synthetic::ShiftedGaussians;
use cotransfer::tritraining::TriTrace;

/// Small labeled/unlabeled pair on both domains plus a target test set.
pub fn gaussian_pair(n: usize, rate: f64, seed: u64) -> (DomainPair, EncodedDataset) {
    let (source, target) = ShiftedGaussians::default()
        .generate(n, 2 * n, seed)
        .unwrap();
    let test = target.select(&(n..2 * n).collect::<Vec<_>>());
    let target = target.select(&(0..n).collect::<Vec<_>>());
    let (sl, su) = partition_label_rate(&source, rate, seed).unwrap();
    let (tl, tu) = partition_label_rate(&target, rate, seed + 1).unwrap();
    (DomainPair::new([sl, tl], [su, tu]).unwrap(), test)
}

/// Every accepted Co-Transfer update satisfies `0 <= e < e' < 0.5` and
/// `e·|L| < e'·l'`. Returns the number of acceptances checked.
pub fn check_cotransfer_acceptances(trace: &CoTransferTrace) -> usize {
    let all: Vec<&Acceptance> = trace.rounds.iter().flat_map(|r| &r.accepted).collect();
    for a in &all {
        assert!(0.0 <= a.error && a.error < a.prev_error, "{a:?}");
        assert!(a.prev_error <= 0.5, "{a:?}");
        assert!(
            a.error * (a.size as f64) < a.prev_error * a.prev_count as f64,
            "product condition broken: {a:?}"
        );
    }
    all.len()
}

pub fn check_tri_acceptances(trace: &TriTrace) -> usize {
    let mut n = 0;
    for a in trace.rounds.iter().flat_map(|r| &r.accepted) {
        assert!(0.0 <= a.error && a.error < a.prev_error, "{a:?}");
        assert!(a.error * (a.size as f64) < a.prev_error * a.prev_count as f64, "{a:?}");
        n += 1;
    }
    n
}

/// Exact copy of a set's rows and labels for before/after comparisons.
pub fn snapshot(d: &EncodedDataset) -> (Vec<Vec<f64>>, Vec<u8>) {
    (
        d.features().rows().map(<[f64]>::to_vec).collect(),
        d.labels().to_vec(),
    )
}

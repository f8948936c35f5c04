// Every example compiled in and run once so they cannot rot.

mod load_and_split {
    include!("../examples/load_and_split.rs");
}
mod decision_tree {
    include!("../examples/decision_tree.rs");
}
mod tradaboost_basics {
    include!("../examples/tradaboost_basics.rs");
}
mod tri_training {
    include!("../examples/tri_training.rs");
}
mod co_transfer_rounds {
    include!("../examples/co_transfer_rounds.rs");
}
mod vote_benchmark {
    include!("../examples/vote_benchmark.rs");
}
mod transferability {
    include!("../examples/transferability.rs");
}
mod significance {
    include!("../examples/significance.rs");
}
mod sweep_grid {
    include!("../examples/sweep_grid.rs");
}
mod iteration_traces {
    include!("../examples/iteration_traces.rs");
}
mod generate_waveform {
    include!("../examples/generate_waveform.rs");
}

#[test]
fn load_and_split_runs() {
    load_and_split::run_example().unwrap();
}

#[test]
fn decision_tree_solves_xor() {
    assert_eq!(decision_tree::run_example().unwrap(), 0);
}

#[test]
fn tradaboost_basics_runs() {
    let (boosted, alone) = tradaboost_basics::run_example().unwrap();
    assert!((0.0..=0.5).contains(&boosted) && (0.0..=0.5).contains(&alone));
}

#[test]
fn tri_training_terminates() {
    assert!(tri_training::run_example().unwrap() >= 1);
}

#[test]
fn co_transfer_rounds_runs() {
    let (initial, last) = co_transfer_rounds::run_example().unwrap();
    assert!(initial <= 0.5 && last <= 0.5);
}

#[test]
fn vote_benchmark_covers_all_runs() {
    let records = vote_benchmark::run_example().unwrap();
    assert_eq!(records.len(), 5 * 30);
    assert!(records.iter().all(|r| r.is_ok()));
}

#[test]
fn transferability_both_datasets() {
    let out = transferability::run_example().unwrap();
    assert_eq!(out.len(), 2);
}

#[test]
fn significance_pairs_thirty_runs() {
    assert_eq!(significance::run_example().unwrap(), 30);
}

#[test]
fn sweep_grid_fills_every_cell() {
    let grid = sweep_grid::run_example().unwrap();
    assert_eq!(grid.failed, 0);
    assert!(grid.mean_final.iter().flatten().all(|e| e.is_finite()));
}

#[test]
fn iteration_traces_start_at_initial_error() {
    let series = iteration_traces::run_example().unwrap();
    assert_eq!(series.len(), 4);
    assert!(series.iter().all(|s| s.means.len() >= 2 && s.runs == 30));
}

#[test]
fn generate_waveform_matches_bundled_split() {
    let t = generate_waveform::run_example().unwrap();
    assert_eq!(t, 1.4235446187078904);
}

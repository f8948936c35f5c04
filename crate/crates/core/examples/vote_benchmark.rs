// The 30-run protocol on Vote at one label rate, all five methods.
//
// cargo run --release --example vote_benchmark [-- <rate>]

use cotransfer::harness::{render_summary, run_experiment, summarize, ExperimentConfig, RunRecord};

pub fn run_example_at(rate: f64) -> cotransfer::Result<Vec<RunRecord>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/vote.toml");
    let mut cfg = ExperimentConfig::from_file(path)?;
    cfg.protocol.rates = vec![rate];
    let res = run_experiment(&cfg)?;
    print!("{}", render_summary(&summarize(&res.records)));
    Ok(res.records)
}

pub fn run_example() -> cotransfer::Result<Vec<RunRecord>> {
    run_example_at(0.1)
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    let rate = std::env::args().nth(1).map_or(Ok(0.1), |s| s.parse()).unwrap_or(0.1);
    run_example_at(rate).map(|_| ())
}

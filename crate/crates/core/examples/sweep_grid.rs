// Co-Transfer error over boosting rounds N and tree depth D on Vote.

use cotransfer::harness::{sweep, ExperimentConfig, SweepGrid};

pub fn run_example_with(rounds: &[usize], depths: &[usize], rates: &[f64]) -> cotransfer::Result<SweepGrid> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/vote.toml");
    let mut cfg = ExperimentConfig::from_file(path)?;
    cfg.protocol.rates = rates.to_vec();
    let grid = sweep(&cfg, &cfg.domains()?, rounds, depths)?;
    print!("{:>4}", "N\\D");
    for d in &grid.depths {
        print!(" {d:>6}");
    }
    println!();
    for (n, row) in grid.rounds.iter().zip(&grid.mean_final) {
        print!("{n:>4}");
        row.iter().for_each(|e| print!(" {e:>6.3}"));
        println!();
    }
    Ok(grid)
}

pub fn run_example() -> cotransfer::Result<SweepGrid> {
    run_example_with(&[1, 5], &[2, 50], &[0.2])
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example_with(&[1, 5, 10, 20], &[2, 4, 10, 50], &[0.1, 0.2, 0.4, 0.5]).map(|_| ())
}

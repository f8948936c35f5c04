// Paired t-tests of Co-Transfer against each baseline on matched Vote runs.

use cotransfer::harness::{paired_t_test, run_experiment, ExperimentConfig, Method, RunRecord};

fn finals(records: &[RunRecord], m: Method) -> Vec<f64> {
    let mut rs: Vec<&RunRecord> = records.iter().filter(|r| r.method == m).collect();
    rs.sort_by_key(|r| r.key());
    rs.iter().map(|r| r.final_error.unwrap_or(f64::NAN)).collect()
}

pub fn run_example() -> cotransfer::Result<usize> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/vote.toml");
    let mut cfg = ExperimentConfig::from_file(path)?;
    cfg.protocol.rates = vec![0.2];
    let res = run_experiment(&cfg)?;
    let co = finals(&res.records, Method::CoTransfer);
    for m in [Method::Dt, Method::TrAdaBoost, Method::TriTraining, Method::TrAdaBoostA] {
        let t = paired_t_test(&co, &finals(&res.records, m), 0.05)?;
        println!(
            "CoTransfer vs {:<12} mean diff {:+.4}  t {:+.3}  p {:.4}  {}",
            m.name(),
            t.mean_difference,
            t.t,
            t.p_value,
            t.marker.symbol()
        );
    }
    Ok(co.len())
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example().map(|_| ())
}

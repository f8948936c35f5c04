// Mean test error per iteration for the two iterative methods on Vote.

use cotransfer::harness::{run_experiment, trace_export, ExperimentConfig, Method, TraceSeries};

pub fn run_example() -> cotransfer::Result<Vec<TraceSeries>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/vote.toml");
    let mut cfg = ExperimentConfig::from_file(path)?;
    cfg.protocol.rates = vec![0.1, 0.5];
    cfg.methods = vec![Method::TriTraining, Method::CoTransfer];
    let res = run_experiment(&cfg)?;
    let series = trace_export(&res.traces);
    for s in &series {
        let pts: Vec<String> = s.means.iter().map(|m| format!("{m:.3}")).collect();
        println!("{:<11} rate {:.1} over {} runs: {}", s.method.name(), s.rate, s.runs, pts.join(" -> "));
    }
    Ok(series)
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example().map(|_| ())
}

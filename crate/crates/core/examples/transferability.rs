// How far apart the bundled domains are: error of a tree trained on one
// domain when applied to the other.

use cotransfer::harness::{transferability, ExperimentConfig};

pub fn run_example() -> cotransfer::Result<Vec<(String, f64, f64)>> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut out = Vec::new();
    for name in ["vote.toml", "waveform.toml"] {
        let cfg = ExperimentConfig::from_file(dir.join(name))?;
        let d = cfg.domains()?;
        let (s_to_t, t_to_s) = transferability(&d.source, &d.target, None)?;
        println!(
            "{:<9} |S| {:>5} |T| {:>5}  h_s on T {s_to_t:.3}  h_t on S {t_to_s:.3}",
            cfg.name,
            d.source.len(),
            d.target.len()
        );
        out.push((cfg.name, s_to_t, t_to_s));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example().map(|_| ())
}

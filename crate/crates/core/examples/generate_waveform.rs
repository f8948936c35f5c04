// Regenerates `data/waveform.csv`: 3304 two-class waveform rows, and
// prints the `x16` threshold that leaves 1582 rows in the target domain.
//
// cargo run --example generate_waveform [-- <out.csv>]

use std::path::PathBuf;

use cotransfer::data::{write_csv, Value};
use cotransfer::synthetic::waveform;

pub const ROWS: usize = 3304;
pub const TARGET_ROWS: usize = 1582;
pub const SEED: u64 = 1984;
const SPLIT_COLUMN: usize = 15;

/// Returns the threshold separating the `TARGET_ROWS` smallest `x16` values.
pub fn run_example_to(out: Option<PathBuf>) -> cotransfer::Result<f64> {
    let d = waveform(ROWS, SEED)?;
    let mut x16: Vec<f64> = d
        .rows()
        .iter()
        .map(|r| match r.values[SPLIT_COLUMN] {
            Value::Num(v) => v,
            Value::Cat(_) => unreachable!("waveform attributes are numeric"),
        })
        .collect();
    x16.sort_by(f64::total_cmp);
    let threshold = (x16[TARGET_ROWS - 1] + x16[TARGET_ROWS]) / 2.0;
    if let Some(path) = out {
        write_csv(&path, &d)?;
        println!("wrote {} rows to {}", d.len(), path.display());
    }
    println!("target domain: x16 < {threshold} ({TARGET_ROWS} rows)");
    Ok(threshold)
}

pub fn run_example() -> cotransfer::Result<f64> {
    run_example_to(None)
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/waveform.csv"));
    run_example_to(Some(out))?;
    Ok(())
}

// Co-Transfer on a rotated two-Gaussian pair, printing what each round
// estimated, accepted and refit.

use cotransfer::agreement::error_rate;
use cotransfer::cotransfer::{fit_cotransfer, CoTransferParams};
use cotransfer::data::{partition_label_rate, DomainPair};
use cotransfer::synthetic::ShiftedGaussians;

pub fn run_example() -> cotransfer::Result<(f64, f64)> {
    let (source, target) = ShiftedGaussians::default().generate(400, 600, 21)?;
    let test = target.select(&(400..600).collect::<Vec<_>>());
    let target = target.select(&(0..400).collect::<Vec<_>>());
    let (sl, su) = partition_label_rate(&source, 0.1, 1)?;
    let (tl, tu) = partition_label_rate(&target, 0.1, 2)?;
    let pair = DomainPair::new([sl, tl], [su, tu])?;

    let (state, trace) = fit_cotransfer(&pair, CoTransferParams::new(10, 3), 42, Some(&test))?;
    let initial = trace.initial_heldout_errors.map_or(f64::NAN, |e| e[1]);
    println!("initial H1 test error {initial:.3}");
    for r in &trace.rounds {
        println!(
            "round {}: e^d {:.3?}, |L_i^d| {:?}, |L^d| {:?}, refit {:?}, test [H0 H1] {:.3?}",
            r.round,
            r.ensemble_errors,
            r.member_sizes,
            r.ensemble_sizes,
            r.refit,
            r.heldout_errors.unwrap_or([f64::NAN; 2])
        );
    }
    let last = error_rate(&state, &test);
    println!("final H1 test error {last:.3} after {} rounds", state.rounds());
    Ok((initial, last))
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example().map(|_| ())
}

// Tri-training on one domain: 10% labels, the rest used through peer
// agreement.

use cotransfer::data::partition_label_rate;
use cotransfer::synthetic::ShiftedGaussians;
use cotransfer::tritraining::{fit_tritraining_traced, TriParams};

pub fn run_example() -> cotransfer::Result<usize> {
    let (_, data) = ShiftedGaussians::default().generate(1, 800, 3)?;
    let test = data.select(&(600..800).collect::<Vec<_>>());
    let (l, u) = partition_label_rate(&data.select(&(0..600).collect::<Vec<_>>()), 0.1, 3)?;

    let (model, trace) = fit_tritraining_traced(&l, &u, 3, TriParams::default(), Some(&test))?;
    println!("{} labeled, {} unlabeled", l.len(), u.len());
    println!("initial test error {:.3}", trace.initial_heldout_error.unwrap_or(f64::NAN));
    for (k, r) in trace.rounds.iter().enumerate() {
        println!(
            "round {}: pair errors {:.3?}, added {:?}, refit {:?}, test error {:.3}",
            k + 1,
            r.errors,
            r.sizes,
            r.refit,
            r.heldout_error.unwrap_or(f64::NAN)
        );
    }
    Ok(model.rounds())
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example().map(|_| ())
}

// TrAdaBoost on a rotated two-Gaussian pair: misclassified source rows
// lose weight round by round while target rows gain it.

use cotransfer::agreement::error_rate;
use cotransfer::data::partition_label_rate;
use cotransfer::synthetic::ShiftedGaussians;
use cotransfer::tradaboost::{fit_tradaboost_observed, BoostParams};
use cotransfer::tree::fit_tree;

pub fn run_example() -> cotransfer::Result<(f64, f64)> {
    let (source, target) = ShiftedGaussians::default().generate(300, 600, 11)?;
    let test = target.select(&(300..600).collect::<Vec<_>>());
    let (target, _) = partition_label_rate(&target.select(&(0..300).collect::<Vec<_>>()), 0.1, 11)?;

    let model = fit_tradaboost_observed(&source, &target, BoostParams::new(20, 3), |r| {
        let source_mass: f64 = r.updated_weights[..r.n_source].iter().sum();
        if r.round % 4 == 0 {
            println!(
                "round {:>2}: target error {:.3}, beta_t {:.3}, source mass {:.3}",
                r.round, r.error, r.beta, source_mass
            );
        }
    })?;
    let boosted = error_rate(&model, &test);
    let alone = fit_tree(target.features(), target.labels(), &vec![1.0; target.len()], Some(3))?;
    let alone = error_rate(&alone, &test);
    println!("test error: TrAdaBoost {boosted:.3}, tree on {} target rows {alone:.3}", target.len());
    Ok((boosted, alone))
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example().map(|_| ())
}

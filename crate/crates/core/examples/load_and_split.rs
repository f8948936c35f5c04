// Data pipeline: CSV with an inferred schema, domain split, one-hot
// encoding, label-rate partitions and stratified folds.

use cotransfer::data::{encode, kfold, partition_label_rate, split_domains};
use cotransfer::harness::ExperimentConfig;

pub fn config_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

pub fn run_example() -> cotransfer::Result<()> {
    let cfg = ExperimentConfig::from_file(config_path("vote.toml"))?;
    let raw = cfg.load()?;
    println!("{} rows, {} attributes", raw.len(), raw.schema().attributes().len());

    let (source, target) = split_domains(&raw, &cfg.split)?;
    let (source, target) = (encode(&source)?, encode(&target)?);
    println!(
        "source {} rows, target {} rows, {} encoded columns",
        source.len(),
        target.len(),
        target.width()
    );

    let (labeled, unlabeled) = partition_label_rate(&source, 0.1, 7)?;
    println!(
        "10% of the source: {} labeled {:?}, {} unlabeled (labels sealed: {})",
        labeled.len(),
        labeled.class_counts(),
        unlabeled.len(),
        unlabeled.has_sealed_labels()
    );
    for (k, (train, test)) in kfold(&target, 5, 7)?.iter().enumerate() {
        println!("fold {k}: train {} test {} {:?}", train.len(), test.len(), test.class_counts());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example()
}

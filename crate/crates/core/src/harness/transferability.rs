//! How well a tree trained on one domain classifies the other.

use crate::agreement::error_rate;
use crate::data::EncodedDataset;
use crate::error::Result;
use crate::tree::fit_tree;

/// `(error on target of a source-trained tree, error on source of a
/// target-trained tree)`. `max_depth = None` grows trees to purity.
pub fn transferability(
    source: &EncodedDataset,
    target: &EncodedDataset,
    max_depth: Option<usize>,
) -> Result<(f64, f64)> {
    let fit = |d: &EncodedDataset| fit_tree(d.features(), d.labels(), &vec![1.0; d.len()], max_depth);
    let hs = fit(source)?;
    let ht = fit(target)?;
    Ok((error_rate(&hs, target), error_rate(&ht, source)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::ShiftedGaussians;

    #[test]
    fn identical_domains_give_resubstitution_error() {
        let (s, _) = ShiftedGaussians::default().generate(80, 1, 3).unwrap();
        let (a, b) = transferability(&s, &s, Some(2)).unwrap();
        assert_eq!(a, b);
        let t = fit_tree(s.features(), s.labels(), &vec![1.0; s.len()], Some(2)).unwrap();
        assert_eq!(a, error_rate(&t, &s));
    }

    #[test]
    fn flipped_clone_inverts_errors() {
        let (s, _) = ShiftedGaussians::default().generate(200, 1, 4).unwrap();
        let flipped = EncodedDataset::new(
            s.feature_names().clone(),
            s.features().clone(),
            s.labels().iter().map(|y| 1 - y).collect(),
        )
        .unwrap();
        let (base, _) = transferability(&s, &s, Some(3)).unwrap();
        let (a, b) = transferability(&s, &flipped, Some(3)).unwrap();
        assert!((a - (1.0 - base)).abs() < 1e-12);
        assert!((b - (1.0 - base)).abs() < 1e-12);
    }
}

// Weighted CART on XOR: no single split helps, two levels separate it.

use cotransfer::data::FeatureMatrix;
use cotransfer::tree::{fit_tree, Node};

pub fn run_example() -> cotransfer::Result<usize> {
    let x = FeatureMatrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])?;
    let y = [0, 1, 1, 0];
    let w = [0.25; 4];

    let stump = fit_tree(&x, &y, &w, Some(1))?;
    let deep = fit_tree(&x, &y, &w, Some(2))?;
    let wrong = |t: &cotransfer::TreeModel| {
        x.rows()
            .zip(&y)
            .filter(|(r, &l)| t.predict(r).unwrap() != l)
            .count()
    };
    println!("depth 1: {} of 4 wrong", wrong(&stump));
    println!("depth 2: {} of 4 wrong, {} leaves", wrong(&deep), deep.n_leaves());
    for (i, n) in deep.nodes().iter().enumerate() {
        match n {
            Node::Split { feature, threshold, left, right } => {
                println!("  node {i}: x{feature} <= {threshold} ? {left} : {right}")
            }
            Node::Leaf { class, mass } => println!("  node {i}: class {class} (mass {mass:?})"),
        }
    }

    // upweighting one point changes the majority of its leaf
    let skewed = fit_tree(&x, &y, &[0.1, 0.1, 0.1, 0.7], Some(1))?;
    println!("heavy (1,1) stump predicts {} there", skewed.predict(&[1.0, 1.0])?);
    Ok(wrong(&deep))
}

#[allow(dead_code)]
fn main() -> cotransfer::Result<()> {
    run_example().map(|_| ())
}

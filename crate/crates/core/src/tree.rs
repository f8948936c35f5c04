//! Depth-bounded binary CART with per-instance weights.
//!
//! Splits minimise the weighted Gini impurity of the children. Candidate
//! thresholds are midpoints between consecutive distinct feature values.
//! Ties go to the lowest feature index, then the lowest threshold, so a fit
//! is a pure function of its inputs. A node becomes a leaf when it is pure,
//! reaches the depth bound, or has no candidate threshold left.

use crate::data::FeatureMatrix;
use crate::error::{Error, Result};

/// Relative tolerance under which two split scores count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Leaf {
        class: u8,
        /// Weighted mass of class 0 and class 1 that reached this leaf.
        mass: [f64; 2],
    },
    /// `x[feature] <= threshold` goes left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeModel {
    nodes: Vec<Node>,
    width: usize,
    max_depth: Option<usize>,
}

/// Feature indices sorted by value, one permutation per column. Reusable
/// across fits on the same matrix (boosting rounds only change weights).
#[derive(Clone, Debug)]
pub struct SortedColumns {
    order: Vec<Vec<usize>>,
}

impl SortedColumns {
    pub fn new(x: &FeatureMatrix) -> Self {
        let n = x.n_rows();
        let order = (0..x.n_cols())
            .map(|f| {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| x.get(a, f).total_cmp(&x.get(b, f)).then(a.cmp(&b)));
                idx
            })
            .collect();
        SortedColumns { order }
    }
}

/// Fits a tree. `max_depth = None` grows until every leaf is pure or cannot
/// be split further; `Some(0)` is rejected.
pub fn fit_tree(
    x: &FeatureMatrix,
    y: &[u8],
    w: &[f64],
    max_depth: Option<usize>,
) -> Result<TreeModel> {
    fit_tree_presorted(x, y, w, max_depth, &SortedColumns::new(x))
}

pub fn fit_tree_presorted(
    x: &FeatureMatrix,
    y: &[u8],
    w: &[f64],
    max_depth: Option<usize>,
    sorted: &SortedColumns,
) -> Result<TreeModel> {
    let n = x.n_rows();
    if n == 0 {
        return Err(Error::InvalidArgument("cannot fit a tree on zero rows".into()));
    }
    if y.len() != n || w.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{n} rows, {} labels, {} weights",
            y.len(),
            w.len()
        )));
    }
    if max_depth == Some(0) {
        return Err(Error::InvalidArgument("max_depth must be at least 1".into()));
    }
    if let Some(bad) = w.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidArgument(format!("invalid weight {bad}")));
    }
    if w.iter().sum::<f64>() <= 0.0 {
        return Err(Error::ZeroWeights);
    }
    if sorted.order.len() != x.n_cols() || sorted.order.iter().any(|o| o.len() != n) {
        return Err(Error::InvalidArgument(
            "presorted columns do not match the matrix".into(),
        ));
    }

    let mut builder = Builder {
        x,
        y,
        w,
        max_depth,
        order: sorted.order.clone(),
        goes_left: vec![false; n],
        scratch: Vec::with_capacity(n),
        nodes: Vec::new(),
    };
    builder.grow(0, n, 0);
    Ok(TreeModel {
        nodes: builder.nodes,
        width: x.n_cols(),
        max_depth,
    })
}

struct Builder<'a> {
    x: &'a FeatureMatrix,
    y: &'a [u8],
    w: &'a [f64],
    max_depth: Option<usize>,
    /// Per feature, a permutation of row indices; every node owns the same
    /// `[start, end)` window in each of them.
    order: Vec<Vec<usize>>,
    goes_left: Vec<bool>,
    scratch: Vec<usize>,
    nodes: Vec<Node>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    score: f64,
}

/// `Σ w · gini` for a node holding class masses `m0`, `m1`.
fn weighted_gini(m0: f64, m1: f64) -> f64 {
    let total = m0 + m1;
    if total <= 0.0 {
        0.0
    } else {
        total - (m0 * m0 + m1 * m1) / total
    }
}

impl Builder<'_> {
    fn grow(&mut self, start: usize, end: usize, depth: usize) -> usize {
        let mut mass = [0.0; 2];
        for &i in &self.order[0][start..end] {
            mass[self.y[i] as usize] += self.w[i];
        }
        let id = self.nodes.len();
        self.nodes.push(leaf(mass));

        let pure = mass[0] <= 0.0 || mass[1] <= 0.0;
        let depth_reached = self.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_reached || end - start < 2 {
            return id;
        }
        // Zero-gain splits are taken: an impure node only stops when no
        // threshold exists (XOR-like data has no positive-gain first split).
        let Some(best) = self.best_split(start, end, mass) else {
            return id;
        };

        let n_left = self.partition(start, end, best.feature, best.threshold);
        let left = self.grow(start, start + n_left, depth + 1);
        let right = self.grow(start + n_left, end, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        id
    }

    fn best_split(&self, start: usize, end: usize, mass: [f64; 2]) -> Option<Candidate> {
        let tol = TIE_TOLERANCE * (mass[0] + mass[1]);
        let mut best: Option<Candidate> = None;
        for (f, order) in self.order.iter().enumerate() {
            let idx = &order[start..end];
            let mut left = [0.0; 2];
            for k in 0..idx.len() - 1 {
                let i = idx[k];
                left[self.y[i] as usize] += self.w[i];
                let lo = self.x.get(i, f);
                let hi = self.x.get(idx[k + 1], f);
                if lo == hi {
                    continue;
                }
                let right = [(mass[0] - left[0]).max(0.0), (mass[1] - left[1]).max(0.0)];
                let score = weighted_gini(left[0], left[1]) + weighted_gini(right[0], right[1]);
                if best.as_ref().is_none_or(|b| score < b.score - tol) {
                    let mid = lo + (hi - lo) / 2.0;
                    best = Some(Candidate {
                        feature: f,
                        threshold: if mid < hi { mid } else { lo },
                        score,
                    });
                }
            }
        }
        best
    }

    /// Stable partition of every feature window; returns the left count.
    fn partition(&mut self, start: usize, end: usize, feature: usize, threshold: f64) -> usize {
        let mut n_left = 0;
        for &i in &self.order[feature][start..end] {
            let l = self.x.get(i, feature) <= threshold;
            self.goes_left[i] = l;
            n_left += usize::from(l);
        }
        for order in &mut self.order {
            self.scratch.clear();
            let window = &mut order[start..end];
            let mut write = 0;
            for k in 0..window.len() {
                let i = window[k];
                if self.goes_left[i] {
                    window[write] = i;
                    write += 1;
                } else {
                    self.scratch.push(i);
                }
            }
            window[write..].copy_from_slice(&self.scratch);
        }
        n_left
    }
}

fn leaf(mass: [f64; 2]) -> Node {
    Node::Leaf {
        class: u8::from(mass[1] > mass[0]),
        mass,
    }
}

impl TreeModel {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn max_depth(&self) -> Option<usize> {
        self.max_depth
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        if x.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: x.len(),
            });
        }
        Ok(self.classify(x))
    }

    pub fn predict_batch(&self, x: &FeatureMatrix) -> Result<Vec<u8>> {
        if x.n_cols() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: x.n_cols(),
            });
        }
        Ok(x.rows().map(|r| self.classify(r)).collect())
    }

    /// Leaf lookup without the width check.
    pub(crate) fn classify(&self, x: &[f64]) -> u8 {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf { class, .. } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => id = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }
}

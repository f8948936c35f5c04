//! Noise-bounded acceptance of pseudo-labeled sets.
//!
//! A learner refined with `|L|` pseudo-labels whose estimated error is `e`
//! may only accept them when `e·|L| < e'·l'`, where `e'` and `l'` are the
//! values from its last accepted update. When the fresh set is too large
//! for that, it is randomly cut down to `⌈e'·l'/e - 1⌉` rows, which is only
//! worthwhile while that size still exceeds `l'` (i.e. `l' > e/(e' - e)`).

/// Previous error bound `e'` and pseudo-label count `l'` of one learner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorBound {
    pub error: f64,
    pub count: usize,
}

impl Default for ErrorBound {
    fn default() -> Self {
        ErrorBound {
            error: 0.5,
            count: 0,
        }
    }
}

impl ErrorBound {
    pub fn product(&self) -> f64 {
        self.error * self.count as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Reject,
    Accept,
    /// Accept after shrinking the set to `keep` rows.
    Subsample { keep: usize },
}

/// Outcome of [`decide`], with the `l'` actually compared against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub decision: Decision,
    pub effective_count: usize,
}

/// `l'` used for comparison. A learner that has never been updated has
/// `l' = 0`, which blocks both branches forever; it is lifted to
/// `⌊e/(e' - e)⌋ + 1`, the smallest count for which subsampling can fire.
/// The stored bound is left untouched.
pub fn effective_count(e: f64, prev: ErrorBound) -> usize {
    if prev.count == 0 {
        (e / (prev.error - e)).floor() as usize + 1
    } else {
        prev.count
    }
}

/// Two-branch acceptance test. Callers only pseudo-label, and call this,
/// when `e < prev.error`.
pub fn decide(e: f64, prev: ErrorBound, candidates: usize) -> Verdict {
    let reject = |count| Verdict {
        decision: Decision::Reject,
        effective_count: count,
    };
    if !(e < prev.error) {
        return reject(prev.count);
    }
    let count = effective_count(e, prev);
    if count >= candidates {
        return reject(count);
    }
    let bound = prev.error * count as f64;
    if e * (candidates as f64) < bound {
        return Verdict {
            decision: Decision::Accept,
            effective_count: count,
        };
    }
    if count as f64 > e / (prev.error - e) {
        let mut keep = (bound / e - 1.0).ceil() as usize;
        // float guard: the kept size must satisfy the strict product bound
        while keep > 0 && e * keep as f64 >= bound {
            keep -= 1;
        }
        let keep = keep.min(candidates);
        return Verdict {
            decision: Decision::Subsample { keep },
            effective_count: count,
        };
    }
    reject(count)
}

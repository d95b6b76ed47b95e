use crate::error::{Error, Result};

/// Binary regression tree grown by exhaustive variance-reduction splits.
#[derive(Debug, Clone, PartialEq)]
pub enum RegressionTree {
    Leaf {
        mean: f64,
        count: usize,
    },
    Split {
        feature: usize,
        /// Rows with `x[feature] <= threshold` go left.
        threshold: f64,
        count: usize,
        left: Box<RegressionTree>,
        right: Box<RegressionTree>,
    },
}

impl RegressionTree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self {
            RegressionTree::Leaf { mean, .. } => *mean,
            RegressionTree::Split {
                feature,
                threshold,
                left,
                right,
                ..
            } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, RegressionTree::Leaf { .. })
    }

    pub fn count(&self) -> usize {
        match self {
            RegressionTree::Leaf { count, .. } | RegressionTree::Split { count, .. } => *count,
        }
    }

    /// Mean target of the rows under this node.
    pub fn mean(&self) -> f64 {
        match self {
            RegressionTree::Leaf { mean, .. } => *mean,
            RegressionTree::Split {
                left, right, count, ..
            } => {
                (left.mean() * left.count() as f64 + right.mean() * right.count() as f64)
                    / *count as f64
            }
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            RegressionTree::Leaf { .. } => 1,
            RegressionTree::Split { left, right, .. } => left.leaves() + right.leaves(),
        }
    }
}

/// Fits a CART regression tree; each leaf keeps at least `min_leaf` rows.
pub fn fit_regression_tree(
    features: &[Vec<f64>],
    targets: &[f64],
    min_leaf: usize,
) -> Result<RegressionTree> {
    if features.len() != targets.len() {
        return Err(Error::Contract(format!(
            "{} feature rows but {} targets",
            features.len(),
            targets.len()
        )));
    }
    let min_leaf = min_leaf.max(1);
    if targets.len() < min_leaf {
        return Err(Error::Contract(format!(
            "{} rows cannot fill a leaf of {min_leaf}",
            targets.len()
        )));
    }
    let dims = features.first().map_or(0, Vec::len);
    if features.iter().any(|r| r.len() != dims) {
        return Err(Error::Contract("ragged feature matrix".into()));
    }
    let rows: Vec<usize> = (0..targets.len()).collect();
    Ok(grow(features, targets, rows, min_leaf))
}

fn sse_of(sum: f64, sum_sq: f64, n: f64) -> f64 {
    (sum_sq - sum * sum / n).max(0.0)
}

fn grow(
    features: &[Vec<f64>],
    targets: &[f64],
    rows: Vec<usize>,
    min_leaf: usize,
) -> RegressionTree {
    let n = rows.len();
    let sum: f64 = rows.iter().map(|&r| targets[r]).sum();
    let sum_sq: f64 = rows.iter().map(|&r| targets[r] * targets[r]).sum();
    let leaf = RegressionTree::Leaf {
        mean: sum / n as f64,
        count: n,
    };
    if n < 2 * min_leaf {
        return leaf;
    }
    let parent_sse = sse_of(sum, sum_sq, n as f64);
    if parent_sse <= 1e-12 * sum_sq.max(1.0) {
        return leaf;
    }

    let dims = features[rows[0]].len();
    let mut best: Option<(f64, usize, f64)> = None;
    let mut sorted = rows.clone();
    for f in 0..dims {
        sorted.sort_by(|&a, &b| features[a][f].total_cmp(&features[b][f]).then(a.cmp(&b)));
        let (mut ls, mut lss) = (0.0, 0.0);
        for i in 0..n - 1 {
            let t = targets[sorted[i]];
            ls += t;
            lss += t * t;
            let left_n = i + 1;
            let right_n = n - left_n;
            let here = features[sorted[i]][f];
            let next = features[sorted[i + 1]][f];
            if left_n < min_leaf || right_n < min_leaf || here == next {
                continue;
            }
            let sse =
                sse_of(ls, lss, left_n as f64) + sse_of(sum - ls, sum_sq - lss, right_n as f64);
            let gain = parent_sse - sse;
            // Near-equal gains keep the earlier feature.
            if gain > 0.0 && best.is_none_or(|(g, _, _)| gain > g + 1e-12 * parent_sse) {
                best = Some((gain, f, 0.5 * (here + next)));
            }
        }
    }
    let Some((_, feature, threshold)) = best else {
        return leaf;
    };
    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
        .iter()
        .partition(|&&r| features[r][feature] <= threshold);
    RegressionTree::Split {
        feature,
        threshold,
        count: n,
        left: Box::new(grow(features, targets, left_rows, min_leaf)),
        right: Box::new(grow(features, targets, right_rows, min_leaf)),
    }
}

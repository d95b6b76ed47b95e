use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cart::{fit_regression_tree, RegressionTree};
use crate::domination::{mean_loss_scores, DominationContext};
use crate::error::{Error, Result};
use crate::metrics::{goal_vector, GoalVector};
use crate::model::Simulator;
use crate::signal::{sample_in_ranges, InputSpec, Range, TestCase};
use crate::TestSuite;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpicurusConfig {
    /// Tests generated per iteration and size of each final suite.
    pub k: usize,
    pub iterations: usize,
    pub min_leaf: usize,
    /// Independent final suites drawn from the narrowed ranges.
    pub final_suites: usize,
}

impl Default for EpicurusConfig {
    fn default() -> Self {
        Self {
            k: 4,
            iterations: 30,
            min_leaf: 2,
            final_suites: 5,
        }
    }
}

/// Current per-input sampling interval, always inside the declared range.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeAssumption {
    names: Vec<String>,
    ranges: Vec<Range>,
}

impl RangeAssumption {
    pub fn from_specs(specs: &[InputSpec]) -> Self {
        Self {
            names: specs.iter().map(|s| s.name.clone()).collect(),
            ranges: specs.iter().map(|s| s.range).collect(),
        }
    }

    pub fn ranges(&self) -> &[Range] {
        &self.ranges
    }

    pub fn get(&self, name: &str) -> Option<Range> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.ranges[i])
    }

    /// Intersects input `input` with `[lo, hi]`; returns false (and leaves
    /// the assumption untouched) when the intersection is empty.
    pub fn narrow(&mut self, input: usize, lo: f64, hi: f64) -> bool {
        let cur = self.ranges[input];
        let next = Range::new(cur.lo.max(lo), cur.hi.min(hi));
        if next.lo > next.hi {
            return false;
        }
        self.ranges[input] = next;
        true
    }

    pub fn is_within(&self, specs: &[InputSpec]) -> bool {
        self.ranges
            .iter()
            .zip(specs)
            .all(|(r, s)| r.lo <= r.hi && r.is_subset_of(&s.range))
    }

    /// `{"input": [lo, hi], ...}`.
    pub fn to_json(&self) -> Result<String> {
        let map: serde_json::Map<String, serde_json::Value> = self
            .names
            .iter()
            .zip(&self.ranges)
            .map(|(n, r)| (n.clone(), serde_json::json!([r.lo, r.hi])))
            .collect();
        Ok(serde_json::to_string_pretty(&map)?)
    }
}

/// What one narrowing iteration did.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationLog {
    pub iteration: usize,
    /// `(input, control point)` of the root split, if the tree split at all.
    pub narrowed: Option<(usize, usize)>,
    pub ranges: Vec<Range>,
}

#[derive(Debug, Clone)]
pub struct EpicurusOutcome {
    /// First of the final suites.
    pub suite: TestSuite,
    pub final_suites: Vec<TestSuite>,
    pub ranges: RangeAssumption,
    pub simulations: usize,
    pub history: Vec<IterationLog>,
}

fn flatten(test: &TestCase) -> Vec<f64> {
    test.inputs
        .iter()
        .flat_map(|i| i.points.iter().copied())
        .collect()
}

/// Maps a flattened control-point index to `(input, point)`.
fn locate(specs: &[InputSpec], mut feature: usize) -> (usize, usize) {
    for (i, s) in specs.iter().enumerate() {
        if feature < s.control_points {
            return (i, feature);
        }
        feature -= s.control_points;
    }
    unreachable!("feature index beyond the control-point vector")
}

/// Iteratively narrows input ranges toward tests with larger anti-pattern
/// values, then draws the final suites from the narrowed ranges.
///
/// Each iteration samples `k` tests inside the current ranges, simulates
/// them, scores every accumulated test by its mean continuous-domination
/// loss (lower is better), fits a regression tree on control-point values
/// and restricts the input owning the root split to the better side.
pub fn epicurus_suite<S, R>(
    sim: &S,
    config: &EpicurusConfig,
    rng: &mut R,
) -> Result<EpicurusOutcome>
where
    S: Simulator + ?Sized,
    R: Rng + ?Sized,
{
    if config.k == 0 || config.final_suites == 0 {
        return Err(Error::Config(
            "k and final_suites must be at least 1".into(),
        ));
    }
    let specs = sim.specs();
    let mut assumption = RangeAssumption::from_specs(specs);
    let mut tests: Vec<TestCase> = Vec::new();
    let mut goals: Vec<GoalVector> = Vec::new();
    let mut history = Vec::with_capacity(config.iterations);

    for iteration in 0..config.iterations {
        let batch = (0..config.k)
            .map(|_| sample_in_ranges(specs, assumption.ranges(), rng))
            .collect::<Result<Vec<_>>>()?;
        let labels: Vec<Option<GoalVector>> = batch
            .par_iter()
            .map(|t| match sim.run(t) {
                Ok(trace) if !trace.is_faulted() => goal_vector(&trace).ok(),
                _ => None,
            })
            .collect();
        for (t, g) in batch.into_iter().zip(labels) {
            match g {
                Some(g) => {
                    tests.push(t);
                    goals.push(g);
                }
                None => log::warn!("epicurus: dropped a test whose simulation faulted"),
            }
        }

        let mut narrowed = None;
        if tests.len() >= 2 * config.min_leaf.max(1) {
            let ctx = DominationContext::maximize_all(&goals)?;
            let targets = mean_loss_scores(&goals, &ctx)?;
            let features: Vec<Vec<f64>> = tests.iter().map(flatten).collect();
            match fit_regression_tree(&features, &targets, config.min_leaf)? {
                RegressionTree::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    let (input, point) = locate(specs, feature);
                    let applied = if left.mean() <= right.mean() {
                        assumption.narrow(input, f64::NEG_INFINITY, threshold)
                    } else {
                        assumption.narrow(input, threshold, f64::INFINITY)
                    };
                    if applied {
                        narrowed = Some((input, point));
                    } else {
                        log::debug!("epicurus: split outside the current range, kept ranges");
                    }
                }
                RegressionTree::Leaf { .. } => {
                    log::debug!("epicurus: iteration {iteration} tree is a single leaf");
                }
            }
        }
        history.push(IterationLog {
            iteration,
            narrowed,
            ranges: assumption.ranges().to_vec(),
        });
    }

    let final_suites = (0..config.final_suites)
        .map(|_| {
            (0..config.k)
                .map(|_| sample_in_ranges(specs, assumption.ranges(), rng))
                .collect::<Result<TestSuite>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EpicurusOutcome {
        suite: final_suites[0].clone(),
        final_suites,
        ranges: assumption,
        simulations: sim.invocations(),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrowing_only_shrinks() {
        let specs = vec![InputSpec::numeric("a", -10.0, 10.0, 2)];
        let mut a = RangeAssumption::from_specs(&specs);
        assert!(a.narrow(0, f64::NEG_INFINITY, 3.0));
        assert_eq!(a.ranges()[0], Range::new(-10.0, 3.0));
        assert!(a.narrow(0, -20.0, 50.0));
        assert_eq!(a.ranges()[0], Range::new(-10.0, 3.0));
        assert!(!a.narrow(0, 5.0, f64::INFINITY));
        assert_eq!(a.ranges()[0], Range::new(-10.0, 3.0));
        assert!(a.is_within(&specs));
    }

    #[test]
    fn range_json_shape() {
        let specs = vec![
            InputSpec::numeric("a", -1.0, 1.0, 1),
            InputSpec::numeric("b", 0.0, 2.0, 1),
        ];
        let a = RangeAssumption::from_specs(&specs);
        let v: serde_json::Value = serde_json::from_str(&a.to_json().unwrap()).unwrap();
        assert_eq!(v["a"], serde_json::json!([-1.0, 1.0]));
        assert_eq!(v["b"], serde_json::json!([0.0, 2.0]));
    }

    #[test]
    fn feature_location() {
        let specs = vec![
            InputSpec::numeric("a", 0.0, 1.0, 3),
            InputSpec::numeric("b", 0.0, 1.0, 2),
        ];
        assert_eq!(locate(&specs, 0), (0, 0));
        assert_eq!(locate(&specs, 2), (0, 2));
        assert_eq!(locate(&specs, 3), (1, 0));
        assert_eq!(locate(&specs, 4), (1, 1));
    }
}

//! GenClu: cluster many unlabeled candidates, label one per cluster.
//!
//! Candidates are recursively bisected with a FASTMAP projection: pick a
//! random pivot, take the point farthest from it as the east pole and the
//! point farthest from east as the west pole, project every point onto the
//! east-west axis with the cosine rule and cut the sorted list in half. Each
//! split costs a linear number of distance evaluations. Recursion stops once
//! a cluster holds at most `enough` candidates. One random representative per
//! leaf is simulated, representatives are ranked with continuous domination,
//! and the whole leaf of the winner becomes the suite.

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domination::{self, DominationContext};
use crate::error::{Error, Result};
use crate::metrics::{goal_vector, GoalVector};
use crate::model::Simulator;
use crate::signal::{sample_test_case, InputSpec, TestCase};
use crate::TestSuite;

/// Control points of a test case, each scaled to `[0, 1]` by its input range.
pub type FeatureVector = Vec<f64>;

pub fn feature_vector(test: &TestCase, specs: &[InputSpec]) -> FeatureVector {
    test.inputs
        .iter()
        .zip(specs)
        .flat_map(|(input, spec)| input.points.iter().map(move |&v| spec.range.normalize(v)))
        .collect()
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Counts distance evaluations so the linear-cost claim can be checked.
#[derive(Debug, Default, Clone, Copy)]
pub struct DistanceCounter {
    pub evaluations: usize,
}

impl DistanceCounter {
    fn distance(&mut self, a: &[f64], b: &[f64]) -> f64 {
        self.evaluations += 1;
        euclidean(a, b)
    }
}

/// Result of one FASTMAP bisection. Item lists hold indices into the point set.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub east: usize,
    pub west: usize,
    pub pole_distance: f64,
    pub east_items: Vec<usize>,
    pub west_items: Vec<usize>,
    /// Projection of each member onto the east-west axis, in member order.
    pub projections: Vec<f64>,
}

/// Index of the member farthest from `from` (first one on ties), plus all distances.
fn farthest(
    points: &[FeatureVector],
    members: &[usize],
    from: usize,
    counter: &mut DistanceCounter,
) -> (usize, Vec<f64>) {
    let mut best = members[0];
    let mut best_d = f64::NEG_INFINITY;
    let mut dists = Vec::with_capacity(members.len());
    for &m in members {
        let d = counter.distance(&points[m], &points[from]);
        if d > best_d {
            best = m;
            best_d = d;
        }
        dists.push(d);
    }
    (best, dists)
}

/// Bisects `members` around a uniformly drawn pivot.
///
/// Returns `Ok(None)` when the poles coincide (every member sits on the same
/// point), in which case the cluster cannot be split further.
pub fn split<R: Rng + ?Sized>(
    points: &[FeatureVector],
    members: &[usize],
    rng: &mut R,
    counter: &mut DistanceCounter,
) -> Result<Option<Split>> {
    if members.len() < 2 {
        return Err(Error::Contract(format!(
            "split needs at least two points, got {}",
            members.len()
        )));
    }
    let pivot = *members.choose(rng).expect("nonempty");
    Ok(split_around(points, members, pivot, counter))
}

pub(crate) fn split_around(
    points: &[FeatureVector],
    members: &[usize],
    pivot: usize,
    counter: &mut DistanceCounter,
) -> Option<Split> {
    let (east, _) = farthest(points, members, pivot, counter);
    let (west, to_east) = farthest(points, members, east, counter);
    let c = to_east[members
        .iter()
        .position(|&m| m == west)
        .expect("west is a member")];
    if c <= 0.0 {
        return None;
    }
    let projections: Vec<f64> = members
        .iter()
        .zip(&to_east)
        .map(|(&m, &a)| {
            let b = counter.distance(&points[m], &points[west]);
            (a * a + c * c - b * b) / (2.0 * c)
        })
        .collect();
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&x, &y| {
        projections[x]
            .total_cmp(&projections[y])
            .then(members[x].cmp(&members[y]))
    });
    let half = members.len() / 2;
    let sorted: Vec<usize> = order.iter().map(|&i| members[i]).collect();
    Some(Split {
        east,
        west,
        pole_distance: c,
        east_items: sorted[..half].to_vec(),
        west_items: sorted[half..].to_vec(),
        projections,
    })
}

/// Node of the bisection tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterNode {
    pub members: Vec<usize>,
    pub east: Option<usize>,
    pub west: Option<usize>,
    pub left: Option<Box<ClusterNode>>,
    pub right: Option<Box<ClusterNode>>,
    /// Set when splitting stopped because all members coincide.
    pub degenerate: bool,
}

impl ClusterNode {
    pub fn is_leaf(&self) -> bool {
        self.left.is_none()
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&ClusterNode> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a ClusterNode>) {
        match (&self.left, &self.right) {
            (Some(l), Some(r)) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
            _ => out.push(self),
        }
    }

    pub fn depth(&self) -> usize {
        match (&self.left, &self.right) {
            (Some(l), Some(r)) => 1 + l.depth().max(r.depth()),
            _ => 0,
        }
    }
}

/// Statistics gathered while building a tree.
#[derive(Debug, Default, Clone)]
pub struct ClusterStats {
    pub splits: usize,
    pub distance_evaluations: usize,
    /// `(members, distance evaluations)` for each split performed.
    pub per_split: Vec<(usize, usize)>,
}

/// Recursively bisects all points until clusters hold at most `enough` members.
pub fn cluster<R: Rng + ?Sized>(
    points: &[FeatureVector],
    enough: usize,
    rng: &mut R,
) -> Result<(ClusterNode, ClusterStats)> {
    if points.is_empty() {
        return Err(Error::Contract("cannot cluster an empty population".into()));
    }
    let mut stats = ClusterStats::default();
    let members: Vec<usize> = (0..points.len()).collect();
    let root = build(points, members, enough, rng, &mut stats)?;
    Ok((root, stats))
}

fn build<R: Rng + ?Sized>(
    points: &[FeatureVector],
    members: Vec<usize>,
    enough: usize,
    rng: &mut R,
    stats: &mut ClusterStats,
) -> Result<ClusterNode> {
    let mut node = ClusterNode {
        members,
        east: None,
        west: None,
        left: None,
        right: None,
        degenerate: false,
    };
    if node.members.len() <= enough || node.members.len() < 2 {
        return Ok(node);
    }
    let mut counter = DistanceCounter::default();
    let outcome = split(points, &node.members, rng, &mut counter)?;
    stats.splits += 1;
    stats.distance_evaluations += counter.evaluations;
    stats
        .per_split
        .push((node.members.len(), counter.evaluations));
    match outcome {
        None => node.degenerate = true,
        Some(s) => {
            node.east = Some(s.east);
            node.west = Some(s.west);
            node.left = Some(Box::new(build(points, s.east_items, enough, rng, stats)?));
            node.right = Some(Box::new(build(points, s.west_items, enough, rng, stats)?));
        }
    }
    Ok(node)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenCluConfig {
    pub initial_samples: usize,
    /// Target leaf size, which is also the suite size.
    pub enough: usize,
    pub seed: u64,
}

impl Default for GenCluConfig {
    fn default() -> Self {
        Self {
            initial_samples: 256,
            enough: 4,
            seed: 0,
        }
    }
}

impl GenCluConfig {
    pub fn validate(&self) -> Result<()> {
        if self.initial_samples == 0 || self.enough == 0 {
            return Err(Error::Config(
                "initial_samples and enough must be positive".into(),
            ));
        }
        if self.enough > self.initial_samples {
            return Err(Error::Config(format!(
                "enough ({}) exceeds initial_samples ({})",
                self.enough, self.initial_samples
            )));
        }
        Ok(())
    }
}

/// Budget record emitted alongside a GenClu suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub simulations: usize,
    pub leaves: usize,
    pub seed: u64,
    pub winning_leaf: usize,
    pub suite_size: usize,
    pub excluded_leaves: Vec<usize>,
    pub distance_evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct GenCluOutcome {
    pub suite: TestSuite,
    pub report: BudgetReport,
    /// Goal vector of each ranked leaf representative, by leaf index.
    pub representative_goals: Vec<Option<GoalVector>>,
}

/// Runs the full pipeline: sample, cluster, label representatives, pick a leaf.
pub fn generate_suite<S, R>(sim: &S, config: &GenCluConfig, rng: &mut R) -> Result<GenCluOutcome>
where
    S: Simulator + ?Sized,
    R: Rng + ?Sized,
{
    config.validate()?;
    let specs = sim.specs();
    let samples = (0..config.initial_samples)
        .map(|_| sample_test_case(specs, rng))
        .collect::<Result<Vec<_>>>()?;
    let features: Vec<FeatureVector> = samples.iter().map(|t| feature_vector(t, specs)).collect();
    let (tree, stats) = cluster(&features, config.enough, rng)?;
    let leaves = tree.leaves();

    // All random choices happen here, before any simulation is dispatched.
    let picks: Vec<(usize, Option<usize>)> = leaves
        .iter()
        .map(|leaf| {
            let first = *leaf.members.choose(rng).expect("leaves are nonempty");
            let others: Vec<usize> = leaf
                .members
                .iter()
                .copied()
                .filter(|&m| m != first)
                .collect();
            (first, others.choose(rng).copied())
        })
        .collect();

    let label = |idx: usize| -> Option<GoalVector> {
        match sim.run(&samples[idx]) {
            Ok(trace) if !trace.is_faulted() => goal_vector(&trace).ok(),
            Ok(_) | Err(_) => None,
        }
    };
    let mut goals: Vec<Option<GoalVector>> =
        picks.par_iter().map(|&(first, _)| label(first)).collect();
    let retry: Vec<usize> = (0..leaves.len())
        .filter(|&l| goals[l].is_none() && picks[l].1.is_some())
        .collect();
    let retried: Vec<Option<GoalVector>> = retry
        .par_iter()
        .map(|&l| label(picks[l].1.expect("filtered")))
        .collect();
    for (l, g) in retry.into_iter().zip(retried) {
        goals[l] = g;
    }
    let excluded: Vec<usize> = (0..leaves.len()).filter(|&l| goals[l].is_none()).collect();
    for &l in &excluded {
        log::warn!("genclu: leaf {l} excluded, representative simulation failed twice");
    }

    let ranked_leaves: Vec<usize> = (0..leaves.len()).filter(|&l| goals[l].is_some()).collect();
    if ranked_leaves.is_empty() {
        return Err(Error::Simulation(
            "every leaf representative failed to simulate".into(),
        ));
    }
    let candidates: Vec<GoalVector> = ranked_leaves
        .iter()
        .map(|&l| goals[l].clone().expect("filtered"))
        .collect();
    let ctx = DominationContext::maximize_all(&candidates)?;
    let order = domination::rank(&candidates, &ctx)?;
    let winning_leaf = ranked_leaves[order[0]];

    let mut members = leaves[winning_leaf].members.clone();
    members.sort_unstable();
    let suite: TestSuite = members.iter().map(|&i| samples[i].clone()).collect();
    let report = BudgetReport {
        simulations: sim.invocations(),
        leaves: leaves.len(),
        seed: config.seed,
        winning_leaf,
        suite_size: suite.len(),
        excluded_leaves: excluded,
        distance_evaluations: stats.distance_evaluations,
    };
    Ok(GenCluOutcome {
        suite,
        report,
        representative_goals: goals,
    })
}

/// Suite file layout: the test cases plus the budget record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteFile {
    pub suite: Vec<TestCase>,
    pub budget: SuiteBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteBudget {
    pub simulations: usize,
    pub leaves: usize,
    pub seed: u64,
}

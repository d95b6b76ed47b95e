//! Binary (Pareto) and continuous domination between goal vectors.
//!
//! The continuous predicate charges a loss for moving from `a` to `b`:
//! `loss(a, b) = sum_i exp(w_i * (a_i - b_i) / n)`, with `w_i = 1` for goals
//! to minimize and `w_i = -1` for goals to maximize. `a` is better than `b`
//! when it loses less. Goals are min-max normalized per goal before the
//! exponential so that goals with large magnitudes do not swamp the rest.

use crate::error::{Error, Result};
use crate::metrics::GoalVector;

/// How a list of candidates is turned into a total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankRule {
    /// Ascending mean loss against every other candidate.
    #[default]
    MeanLoss,
    /// Descending count of pairwise `better` wins.
    Tournament,
}

/// Goal directions and per-goal normalization bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct DominationContext {
    directions: Vec<f64>,
    bounds: Vec<(f64, f64)>,
}

impl DominationContext {
    /// Directions are `1.0` (minimize) or `-1.0` (maximize); bounds are `(lo, hi)`.
    pub fn new(directions: Vec<f64>, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if directions.len() != bounds.len() {
            return Err(Error::Contract(format!(
                "{} directions but {} normalization bounds",
                directions.len(),
                bounds.len()
            )));
        }
        if let Some(w) = directions.iter().find(|&&w| w != 1.0 && w != -1.0) {
            return Err(Error::Contract(format!(
                "direction weight {w} is not 1 or -1"
            )));
        }
        if let Some((lo, hi)) = bounds.iter().find(|(lo, hi)| !(lo <= hi)) {
            return Err(Error::Contract(format!(
                "normalization bounds [{lo}, {hi}] are empty"
            )));
        }
        Ok(Self { directions, bounds })
    }

    /// Directions with goals already on a unit scale.
    pub fn unnormalized(directions: Vec<f64>) -> Result<Self> {
        let bounds = vec![(0.0, 1.0); directions.len()];
        Self::new(directions, bounds)
    }

    /// Normalizes each goal over the min and max seen in `population`.
    pub fn for_population(population: &[GoalVector], directions: Vec<f64>) -> Result<Self> {
        let n = directions.len();
        let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); n];
        for g in population {
            if g.len() != n {
                return Err(Error::Contract(format!(
                    "goal vector of length {} in a {n}-goal population",
                    g.len()
                )));
            }
            for (b, &v) in bounds.iter_mut().zip(g.values()) {
                b.0 = b.0.min(v);
                b.1 = b.1.max(v);
            }
        }
        if population.is_empty() {
            bounds = vec![(0.0, 1.0); n];
        }
        Self::new(directions, bounds)
    }

    /// All goals maximized, normalized over `population`.
    pub fn maximize_all(population: &[GoalVector]) -> Result<Self> {
        let n = population.first().map_or(0, GoalVector::len);
        Self::for_population(population, vec![-1.0; n])
    }

    pub fn goals(&self) -> usize {
        self.directions.len()
    }

    pub fn directions(&self) -> &[f64] {
        &self.directions
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn normalized(&self, goal: usize, x: f64) -> f64 {
        let (lo, hi) = self.bounds[goal];
        if hi > lo {
            (x - lo) / (hi - lo)
        } else {
            0.0
        }
    }

    fn check(&self, a: &GoalVector, b: &GoalVector) -> Result<()> {
        if a.len() != self.goals() || b.len() != self.goals() {
            return Err(Error::Contract(format!(
                "goal vectors of length {} and {} in a {}-goal context",
                a.len(),
                b.len(),
                self.goals()
            )));
        }
        Ok(())
    }

    /// Signed, scaled per-goal exponents `w_i * (a_i - b_i) / n`.
    fn exponents<'a>(
        &'a self,
        a: &'a GoalVector,
        b: &'a GoalVector,
    ) -> impl Iterator<Item = f64> + 'a {
        let n = self.goals() as f64;
        (0..self.goals()).map(move |i| {
            let diff = self.normalized(i, a.values()[i]) - self.normalized(i, b.values()[i]);
            self.directions[i] * diff / n
        })
    }
}

/// Loss incurred moving from `a` to `b`.
pub fn zitzler_loss(a: &GoalVector, b: &GoalVector, ctx: &DominationContext) -> Result<f64> {
    ctx.check(a, b)?;
    Ok(ctx.exponents(a, b).map(f64::exp).sum())
}

/// True when `a` loses strictly less than `b`.
///
/// Evaluated as `sum_i sinh(x_i) < 0`, which is the same inequality as
/// `loss(a, b) < loss(b, a)` (since `e^x - e^-x = 2 sinh x`) but does not
/// round sub-epsilon differences away.
pub fn better(a: &GoalVector, b: &GoalVector, ctx: &DominationContext) -> Result<bool> {
    ctx.check(a, b)?;
    Ok(ctx.exponents(a, b).map(f64::sinh).sum::<f64>() < 0.0)
}

/// Pareto dominance: no goal worse and at least one strictly better.
pub fn binary_dominates(a: &GoalVector, b: &GoalVector, ctx: &DominationContext) -> Result<bool> {
    ctx.check(a, b)?;
    let mut strict = false;
    for x in ctx.exponents(a, b) {
        if x > 0.0 {
            return Ok(false);
        }
        strict |= x < 0.0;
    }
    Ok(strict)
}

/// Mean loss of each candidate against all others.
pub fn mean_loss_scores(candidates: &[GoalVector], ctx: &DominationContext) -> Result<Vec<f64>> {
    let m = candidates.len();
    let mut scores = vec![0.0; m];
    if m < 2 {
        return Ok(scores);
    }
    for (i, a) in candidates.iter().enumerate() {
        let mut total = 0.0;
        for (j, b) in candidates.iter().enumerate() {
            if i != j {
                total += zitzler_loss(a, b, ctx)?;
            }
        }
        scores[i] = total / (m - 1) as f64;
    }
    Ok(scores)
}

/// Candidate indices, best first.
pub fn rank(candidates: &[GoalVector], ctx: &DominationContext) -> Result<Vec<usize>> {
    rank_with(candidates, ctx, RankRule::default())
}

pub fn rank_with(
    candidates: &[GoalVector],
    ctx: &DominationContext,
    rule: RankRule,
) -> Result<Vec<usize>> {
    if candidates.is_empty() {
        return Err(Error::Contract(
            "cannot rank an empty candidate list".into(),
        ));
    }
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    match rule {
        RankRule::MeanLoss => {
            let scores = mean_loss_scores(candidates, ctx)?;
            order.sort_by(|&x, &y| scores[x].total_cmp(&scores[y]));
        }
        RankRule::Tournament => {
            let mut wins = vec![0usize; candidates.len()];
            for (i, a) in candidates.iter().enumerate() {
                for (j, b) in candidates.iter().enumerate() {
                    if i != j && better(a, b, ctx)? {
                        wins[i] += 1;
                    }
                }
            }
            order.sort_by(|&x, &y| wins[y].cmp(&wins[x]));
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gv(v: &[f64]) -> GoalVector {
        GoalVector::new(v.to_vec())
    }

    #[test]
    fn identical_vectors_cost_n() {
        let ctx = DominationContext::unnormalized(vec![-1.0, 1.0, -1.0]).unwrap();
        let a = gv(&[0.2, 0.4, 0.9]);
        assert!((zitzler_loss(&a, &a, &ctx).unwrap() - 3.0).abs() < 1e-15);
        assert!(!better(&a, &a, &ctx).unwrap());
    }

    #[test]
    fn single_maximized_goal() {
        let ctx = DominationContext::unnormalized(vec![-1.0]).unwrap();
        let (a, b) = (gv(&[1.0]), gv(&[0.0]));
        assert!((zitzler_loss(&a, &b, &ctx).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((zitzler_loss(&b, &a, &ctx).unwrap() - 1.0f64.exp()).abs() < 1e-15);
        assert!(better(&a, &b, &ctx).unwrap());
        assert!(!better(&b, &a, &ctx).unwrap());
    }

    #[test]
    fn loss_depends_only_on_differences() {
        let ctx = DominationContext::unnormalized(vec![-1.0, 1.0]).unwrap();
        let (a, b) = (gv(&[0.3, 0.1]), gv(&[0.2, 0.6]));
        let (a2, b2) = (gv(&[0.5, 0.3]), gv(&[0.4, 0.8]));
        let l1 = zitzler_loss(&a, &b, &ctx).unwrap();
        let l2 = zitzler_loss(&a2, &b2, &ctx).unwrap();
        assert!((l1 - l2).abs() < 1e-12);
    }

    #[test]
    fn pointwise_better_wins() {
        let ctx = DominationContext::unnormalized(vec![-1.0; 3]).unwrap();
        let (a, b) = (gv(&[0.5, 0.5, 0.7]), gv(&[0.5, 0.5, 0.6]));
        assert!(better(&a, &b, &ctx).unwrap());
        assert!(binary_dominates(&a, &b, &ctx).unwrap());
    }

    #[test]
    fn binary_dominance_cases() {
        let ctx = DominationContext::unnormalized(vec![-1.0, -1.0]).unwrap();
        assert!(binary_dominates(&gv(&[2.0, 2.0]), &gv(&[1.0, 1.0]), &ctx).unwrap());
        assert!(!binary_dominates(&gv(&[2.0, 0.0]), &gv(&[1.0, 1.0]), &ctx).unwrap());
        let a = gv(&[3.0, 1.0]);
        assert!(!binary_dominates(&a, &a, &ctx).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let ctx = DominationContext::unnormalized(vec![-1.0, -1.0]).unwrap();
        assert!(matches!(
            zitzler_loss(&gv(&[1.0]), &gv(&[1.0, 2.0]), &ctx),
            Err(Error::Contract(_))
        ));
        assert!(DominationContext::new(vec![0.5], vec![(0.0, 1.0)]).is_err());
        assert!(DominationContext::new(vec![1.0], vec![(2.0, 1.0)]).is_err());
    }

    #[test]
    fn population_normalization_handles_degenerate_goals() {
        let pop = vec![gv(&[1.0, 100.0]), gv(&[1.0, 300.0])];
        let ctx = DominationContext::maximize_all(&pop).unwrap();
        assert_eq!(ctx.bounds(), &[(1.0, 1.0), (100.0, 300.0)]);
        // goal 0 normalizes to 0 for both; goal 1 maps to 0 and 1
        let l = zitzler_loss(&pop[1], &pop[0], &ctx).unwrap();
        assert!((l - (1.0 + (-0.5f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn ranking() {
        let ctx = DominationContext::unnormalized(vec![-1.0, -1.0]).unwrap();
        assert_eq!(rank(&[gv(&[0.1, 0.1])], &ctx).unwrap(), vec![0]);

        let cands = vec![
            gv(&[0.2, 0.1]),
            gv(&[0.9, 0.9]),
            gv(&[0.5, 0.1]),
            gv(&[0.5, 0.1]),
        ];
        let order = rank(&cands, &ctx).unwrap();
        assert_eq!(order[0], 1);
        let p2 = order.iter().position(|&i| i == 2).unwrap();
        let p3 = order.iter().position(|&i| i == 3).unwrap();
        assert_eq!(p3, p2 + 1, "duplicates stay adjacent in input order");

        let order = rank_with(&cands, &ctx, RankRule::Tournament).unwrap();
        assert_eq!(order[0], 1);
        assert!(rank(&[], &ctx).is_err());
    }
}

//! Output-signal anti-pattern objectives.
//!
//! Each output signal contributes four values (discontinuity, instability,
//! growth to infinity and min/max range). All four are to be maximized.

use crate::error::{Error, Result};
use crate::model::SimulationTrace;
use crate::signal::Signal;

/// Number of anti-pattern values per output signal.
pub const GOALS_PER_OUTPUT: usize = 4;

/// Largest look-back/look-ahead window used by [`discontinuity`].
pub const DISCONTINUITY_MAX_WINDOW: usize = 3;

/// Divisor for the left/right change rates inside [`discontinuity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChangeRateDivisor {
    /// Divide by the sample period for every window width.
    #[default]
    SamplePeriod,
    /// Divide by the window span (`width * dt`), a true rate.
    WindowSpan,
}

/// Largest two-sided jump around any sample, over windows of 1 to 3 steps.
pub fn discontinuity(sig: &Signal) -> Result<f64> {
    discontinuity_with(sig, ChangeRateDivisor::default())
}

pub fn discontinuity_with(sig: &Signal, divisor: ChangeRateDivisor) -> Result<f64> {
    let v = sig.values();
    let k = sig.last_index();
    if k < 2 {
        return Err(Error::UndefinedMetric(format!(
            "discontinuity needs at least three samples, got {}",
            v.len()
        )));
    }
    let mut best = 0.0f64;
    for width in 1..=DISCONTINUITY_MAX_WINDOW {
        if 2 * width > k {
            break;
        }
        let scale = match divisor {
            ChangeRateDivisor::SamplePeriod => sig.dt(),
            ChangeRateDivisor::WindowSpan => width as f64 * sig.dt(),
        };
        for j in width..=k - width {
            let left = (v[j] - v[j - width]).abs() / scale;
            let right = (v[j + width] - v[j]).abs() / scale;
            best = best.max(left.min(right));
        }
    }
    Ok(best)
}

/// Total variation of the sample sequence.
pub fn instability(sig: &Signal) -> f64 {
    sig.values().windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Largest magnitude after the initial sample.
pub fn growth_to_infinity(sig: &Signal) -> f64 {
    sig.values()[1..].iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Range of the samples after the initial one.
pub fn minmax(sig: &Signal) -> f64 {
    let tail = &sig.values()[1..];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    (hi - lo).abs()
}

/// Anti-pattern values of every output, `4 * outputs` long, in outport order.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalVector {
    values: Vec<f64>,
}

impl GoalVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Direction weights: `-1` (maximize) for every goal.
    pub fn directions(&self) -> Vec<f64> {
        vec![-1.0; self.values.len()]
    }
}

/// Computes the four anti-patterns for a single signal.
pub fn signal_goals(sig: &Signal, divisor: ChangeRateDivisor) -> Result<[f64; GOALS_PER_OUTPUT]> {
    Ok([
        discontinuity_with(sig, divisor)?,
        instability(sig),
        growth_to_infinity(sig),
        minmax(sig),
    ])
}

pub fn goal_vector(trace: &SimulationTrace) -> Result<GoalVector> {
    goal_vector_with(trace, ChangeRateDivisor::default())
}

pub fn goal_vector_with(trace: &SimulationTrace, divisor: ChangeRateDivisor) -> Result<GoalVector> {
    let mut values = Vec::with_capacity(GOALS_PER_OUTPUT * trace.outputs.len());
    for sig in &trace.outputs {
        values.extend(signal_goals(sig, divisor)?);
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::UndefinedMetric(format!(
            "anti-pattern {i} overflowed to a non-finite value"
        )));
    }
    Ok(GoalVector::new(values))
}

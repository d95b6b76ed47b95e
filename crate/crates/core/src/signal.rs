//! Signals, input specifications and control-point test cases.
//!
//! A test case stores, per model inport, a short vector of control-point
//! values. [`render_signal`] turns one vector into a dense, uniformly sampled
//! [`Signal`] using a zero-order hold between equally spaced control points.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const STEP_TOLERANCE: f64 = 1e-9;

/// A uniformly sampled real-valued time series over `[0, duration]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
    dt: f64,
    duration: f64,
}

impl Signal {
    pub fn new(values: Vec<f64>, dt: f64, duration: f64) -> Result<Self> {
        let steps = step_count(duration, dt)?;
        if values.len() != steps + 1 {
            return Err(Error::Config(format!(
                "signal has {} samples, expected {} for duration {duration} and dt {dt}",
                values.len(),
                steps + 1
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!("signal sample {i} is not finite")));
        }
        Ok(Self {
            values,
            dt,
            duration,
        })
    }

    /// Builds a signal from raw samples, taking the duration from the length.
    pub fn from_samples(values: Vec<f64>, dt: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Config("a signal needs at least two samples".into()));
        }
        let duration = (values.len() - 1) as f64 * dt;
        Self::new(values, dt, duration)
    }

    pub(crate) fn from_parts_unchecked(values: Vec<f64>, dt: f64, duration: f64) -> Self {
        Self {
            values,
            dt,
            duration,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Index of the last sample, `k`.
    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Number of solver steps `k = duration / dt`, rejecting non-integral ratios.
pub fn step_count(duration: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::Config(format!(
            "duration must be positive, got {duration}"
        )));
    }
    let ratio = duration / dt;
    let steps = ratio.round();
    if steps < 1.0 {
        return Err(Error::Config(format!(
            "duration {duration} is shorter than one step of {dt}"
        )));
    }
    if (ratio - steps).abs() > STEP_TOLERANCE * ratio.max(1.0) {
        return Err(Error::Config(format!(
            "duration {duration} is not an integral multiple of dt {dt}"
        )));
    }
    Ok(steps as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Numeric,
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    PiecewiseConstant,
    Constant,
}

/// Closed interval of admissible control-point values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub const UNIT: Range = Range { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Maps `x` into `[0, 1]`; zero-width ranges map to 0.
    pub fn normalize(&self, x: f64) -> f64 {
        let w = self.width();
        if w > 0.0 {
            ((x - self.lo) / w).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    pub fn is_subset_of(&self, other: &Range) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }

    /// Uniform draw; a degenerate range returns its single value.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.hi > self.lo {
            rng.random_range(self.lo..=self.hi)
        } else {
            self.lo
        }
    }
}

impl From<[f64; 2]> for Range {
    fn from([lo, hi]: [f64; 2]) -> Self {
        Range { lo, hi }
    }
}

impl From<Range> for [f64; 2] {
    fn from(r: Range) -> Self {
        [r.lo, r.hi]
    }
}

fn default_interpolation() -> Interpolation {
    Interpolation::PiecewiseConstant
}

/// Declares one model inport: its domain and how test values become a signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub name: String,
    pub kind: InputKind,
    pub range: Range,
    pub control_points: usize,
    #[serde(default = "default_interpolation")]
    pub interpolation: Interpolation,
}

impl InputSpec {
    pub fn numeric(name: impl Into<String>, lo: f64, hi: f64, control_points: usize) -> Self {
        Self {
            name: name.into(),
            kind: InputKind::Numeric,
            range: Range::new(lo, hi),
            control_points,
            interpolation: Interpolation::PiecewiseConstant,
        }
    }

    pub fn boolean(name: impl Into<String>, control_points: usize) -> Self {
        Self {
            name: name.into(),
            kind: InputKind::Boolean,
            range: Range::UNIT,
            control_points,
            interpolation: Interpolation::PiecewiseConstant,
        }
    }

    pub fn constant(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            kind: InputKind::Numeric,
            range: Range::new(lo, hi),
            control_points: 1,
            interpolation: Interpolation::Constant,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.control_points == 0 {
            return Err(Error::Config(format!(
                "input `{}` needs at least one control point",
                self.name
            )));
        }
        if self.interpolation == Interpolation::Constant && self.control_points != 1 {
            return Err(Error::Config(format!(
                "constant input `{}` must have exactly one control point",
                self.name
            )));
        }
        if !(self.range.lo.is_finite() && self.range.hi.is_finite()) {
            return Err(Error::Config(format!(
                "input `{}` has a non-finite range",
                self.name
            )));
        }
        match self.kind {
            // Zero-width numeric ranges are accepted: they pin an input.
            InputKind::Numeric if self.range.lo > self.range.hi => Err(Error::Config(format!(
                "input `{}` has an empty range [{}, {}]",
                self.name, self.range.lo, self.range.hi
            ))),
            InputKind::Boolean if self.range != Range::UNIT => Err(Error::Config(format!(
                "boolean input `{}` must use range [0, 1]",
                self.name
            ))),
            _ => Ok(()),
        }
    }

    /// True when the input varies over time (more than one control point).
    pub fn is_time_varying(&self) -> bool {
        self.interpolation != Interpolation::Constant && self.control_points > 1
    }
}

/// Control-point values of one inport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputPoints {
    pub name: String,
    pub points: Vec<f64>,
}

/// One test: a control-point vector per inport, in inport order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCase {
    pub inputs: Vec<InputPoints>,
}

impl TestCase {
    pub fn points(&self, input: usize) -> &[f64] {
        &self.inputs[input].points
    }

    /// Checks order, arity and range membership against `specs`.
    pub fn validate(&self, specs: &[InputSpec]) -> Result<()> {
        if self.inputs.len() != specs.len() {
            return Err(Error::Contract(format!(
                "test case has {} inputs, model expects {}",
                self.inputs.len(),
                specs.len()
            )));
        }
        for (input, spec) in self.inputs.iter().zip(specs) {
            if input.name != spec.name {
                return Err(Error::Contract(format!(
                    "test input `{}` does not match inport `{}`",
                    input.name, spec.name
                )));
            }
            if input.points.len() != spec.control_points {
                return Err(Error::Contract(format!(
                    "input `{}` has {} control points, expected {}",
                    spec.name,
                    input.points.len(),
                    spec.control_points
                )));
            }
            if let Some(v) = input.points.iter().find(|v| !spec.range.contains(**v)) {
                return Err(Error::Contract(format!(
                    "input `{}` value {v} outside [{}, {}]",
                    spec.name, spec.range.lo, spec.range.hi
                )));
            }
        }
        Ok(())
    }

    /// Renders every input into a signal, booleanizing boolean inputs.
    pub fn to_signals(&self, specs: &[InputSpec], duration: f64, dt: f64) -> Result<Vec<Signal>> {
        self.validate(specs)?;
        self.inputs
            .iter()
            .zip(specs)
            .map(|(input, spec)| {
                let sig = render_signal(&input.points, spec, duration, dt)?;
                Ok(match spec.kind {
                    InputKind::Numeric => sig,
                    InputKind::Boolean => {
                        let values = sig.values.iter().map(|&x| booleanize(x)).collect();
                        Signal::from_parts_unchecked(values, dt, duration)
                    }
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Draws one test case with every control point uniform in its input range.
pub fn sample_test_case<R: Rng + ?Sized>(specs: &[InputSpec], rng: &mut R) -> Result<TestCase> {
    if specs.is_empty() {
        return Err(Error::Config("no input specifications given".into()));
    }
    sample_in_ranges(
        specs,
        &specs.iter().map(|s| s.range).collect::<Vec<_>>(),
        rng,
    )
}

/// Like [`sample_test_case`], but draws from per-input sub-ranges.
pub fn sample_in_ranges<R: Rng + ?Sized>(
    specs: &[InputSpec],
    ranges: &[Range],
    rng: &mut R,
) -> Result<TestCase> {
    if specs.is_empty() {
        return Err(Error::Config("no input specifications given".into()));
    }
    if ranges.len() != specs.len() {
        return Err(Error::Contract("one range per input is required".into()));
    }
    let mut inputs = Vec::with_capacity(specs.len());
    for (spec, range) in specs.iter().zip(ranges) {
        spec.validate()?;
        let points = (0..spec.control_points)
            .map(|_| range.sample(rng))
            .collect();
        inputs.push(InputPoints {
            name: spec.name.clone(),
            points,
        });
    }
    Ok(TestCase { inputs })
}

/// Renders control points into a signal with a zero-order hold.
///
/// Control point `i` of `c` is placed at `i * duration / c`, so five points
/// over ten seconds sit at 0, 2, 4, 6 and 8.
pub fn render_signal(values: &[f64], spec: &InputSpec, duration: f64, dt: f64) -> Result<Signal> {
    spec.validate()?;
    if values.len() != spec.control_points {
        return Err(Error::Config(format!(
            "input `{}`: {} control points given, {} declared",
            spec.name,
            values.len(),
            spec.control_points
        )));
    }
    let k = step_count(duration, dt)?;
    let samples = match spec.interpolation {
        Interpolation::Constant => vec![values[0]; k + 1],
        Interpolation::PiecewiseConstant => {
            let c = values.len();
            // Sample j sits at j/k of the horizon; the active point is the
            // largest i with i/c <= j/k, i.e. floor(j*c/k).
            (0..=k).map(|j| values[((j * c) / k).min(c - 1)]).collect()
        }
    };
    Signal::new(samples, dt, duration)
}

/// Maps a value in `[0, 1]` to 0 or 1 (`0.5` rounds up).
pub fn booleanize(x: f64) -> f64 {
    let clamped = if (0.0..=1.0).contains(&x) {
        x
    } else {
        log::warn!("booleanize: {x} outside [0, 1], clamping");
        x.clamp(0.0, 1.0)
    };
    if clamped < 0.5 {
        0.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_three_inputs_in_range() {
        let specs: Vec<_> = (0..3)
            .map(|i| InputSpec::numeric(format!("u{i}"), -100.0, 100.0, 5))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tc = sample_test_case(&specs, &mut rng).unwrap();
        assert_eq!(tc.inputs.len(), 3);
        for input in &tc.inputs {
            assert_eq!(input.points.len(), 5);
            assert!(input.points.iter().all(|v| (-100.0..=100.0).contains(v)));
        }
    }

    #[test]
    fn degenerate_range_yields_constant_value() {
        let specs = vec![InputSpec::numeric("u", 5.0, 5.0, 4)];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tc = sample_test_case(&specs, &mut rng).unwrap();
        assert_eq!(tc.inputs[0].points, vec![5.0; 4]);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let specs = vec![
            InputSpec::numeric("a", -1.0, 1.0, 3),
            InputSpec::boolean("b", 2),
        ];
        let a = sample_test_case(&specs, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = sample_test_case(&specs, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_specs_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            sample_test_case(&[], &mut rng),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn render_holds_values_between_points() {
        let spec = InputSpec::numeric("u", 0.0, 10.0, 2);
        let sig = render_signal(&[1.0, 3.0], &spec, 10.0, 1.0).unwrap();
        assert_eq!(
            sig.values(),
            &[1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0]
        );
    }

    #[test]
    fn render_five_points_over_ten_seconds() {
        let spec = InputSpec::numeric("u", 0.0, 10.0, 5);
        let sig = render_signal(&[0.0, 1.0, 2.0, 3.0, 4.0], &spec, 10.0, 1.0).unwrap();
        assert_eq!(
            sig.values(),
            &[0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 4.0]
        );
    }

    #[test]
    fn render_constant_input() {
        let spec = InputSpec::constant("u", 0.0, 10.0);
        let sig = render_signal(&[7.0], &spec, 4.0, 1.0).unwrap();
        assert_eq!(sig.values(), &[7.0; 5]);
    }

    #[test]
    fn render_equal_points() {
        let spec = InputSpec::numeric("u", 0.0, 10.0, 3);
        let sig = render_signal(&[2.0; 3], &spec, 10.0, 0.1).unwrap();
        assert_eq!(sig.values().len(), 101);
        assert!(sig.values().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn render_rejects_non_integral_steps() {
        let spec = InputSpec::numeric("u", 0.0, 10.0, 2);
        assert!(matches!(
            render_signal(&[1.0, 2.0], &spec, 1.05, 0.1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn render_rejects_wrong_point_count() {
        let spec = InputSpec::numeric("u", 0.0, 10.0, 3);
        assert!(render_signal(&[1.0, 2.0], &spec, 1.0, 0.1).is_err());
    }

    #[test]
    fn constant_interpolation_requires_one_point() {
        let mut spec = InputSpec::constant("u", 0.0, 1.0);
        spec.control_points = 2;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn booleanize_threshold() {
        assert_eq!(booleanize(0.49), 0.0);
        assert_eq!(booleanize(0.5), 1.0);
        assert_eq!(booleanize(0.0), 0.0);
        assert_eq!(booleanize(1.0), 1.0);
        assert_eq!(booleanize(-3.0), 0.0);
        assert_eq!(booleanize(7.0), 1.0);
    }

    #[test]
    fn boolean_inputs_render_as_zero_one() {
        let specs = vec![InputSpec::boolean("b", 2)];
        let tc = TestCase {
            inputs: vec![InputPoints {
                name: "b".into(),
                points: vec![0.2, 0.7],
            }],
        };
        let sigs = tc.to_signals(&specs, 2.0, 1.0).unwrap();
        assert_eq!(sigs[0].values(), &[0.0, 1.0, 1.0]);
    }

    #[test]
    fn test_case_json_shape() {
        let tc = TestCase {
            inputs: vec![InputPoints {
                name: "u".into(),
                points: vec![1.0, 2.5],
            }],
        };
        let v: serde_json::Value = serde_json::from_str(&tc.to_json().unwrap()).unwrap();
        assert_eq!(v["inputs"][0]["name"], "u");
        assert_eq!(v["inputs"][0]["points"][1], 2.5);
        assert_eq!(TestCase::from_json(&tc.to_json().unwrap()).unwrap(), tc);
    }

    #[test]
    fn validate_flags_out_of_range_points() {
        let specs = vec![InputSpec::numeric("u", 0.0, 1.0, 1)];
        let tc = TestCase {
            inputs: vec![InputPoints {
                name: "u".into(),
                points: vec![2.0],
            }],
        };
        assert!(matches!(tc.validate(&specs), Err(Error::Contract(_))));
    }
}

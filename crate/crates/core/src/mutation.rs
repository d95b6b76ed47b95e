//! First-order model mutants, probe-based filtering and mutation scores.
//!
//! Fault patterns: constant changes, arithmetic sign/product swaps,
//! relational and logical operator swaps, NOT insertion/removal, Switch
//! input-line swaps and changed initial conditions of state blocks.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::model::{
    signs_string, simulate, BlockKind, LogicOp, ModelGraph, RelOp, SimulationTrace,
};
use crate::signal::{sample_test_case, Signal, TestCase};

/// Default number of random probe tests used by [`filter_mutants`].
pub const DEFAULT_PROBES: usize = 200;

/// Per-sample kill tolerance, absolute and relative.
pub const KILL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum MutationOperator {
    ConstantChange { value: f64 },
    BooleanNegate,
    SumSignVector { signs: Vec<i8> },
    SumToProduct,
    RelationalSwap { op: RelOp },
    LogicalSwap { op: LogicOp },
    NotToggle,
    SwitchLineSwap,
    InitialValueChange { value: f64 },
}

impl MutationOperator {
    pub fn name(&self) -> &'static str {
        match self {
            MutationOperator::ConstantChange { .. } => "ConstantChange",
            MutationOperator::BooleanNegate => "BooleanNegate",
            MutationOperator::SumSignVector { .. } => "SumSignVector",
            MutationOperator::SumToProduct => "SumToProduct",
            MutationOperator::RelationalSwap { .. } => "RelationalSwap",
            MutationOperator::LogicalSwap { .. } => "LogicalSwap",
            MutationOperator::NotToggle => "NotToggle",
            MutationOperator::SwitchLineSwap => "SwitchLineSwap",
            MutationOperator::InitialValueChange { .. } => "InitialValueChange",
        }
    }

    pub fn params(&self) -> Value {
        match self {
            MutationOperator::ConstantChange { value }
            | MutationOperator::InitialValueChange { value } => json!({ "value": value }),
            MutationOperator::SumSignVector { signs } => json!({ "signs": signs_string(signs) }),
            MutationOperator::RelationalSwap { op } => json!({ "op": op.symbol() }),
            MutationOperator::LogicalSwap { op } => json!({ "op": op.name() }),
            _ => json!({}),
        }
    }

    fn from_parts(name: &str, params: &Value) -> Result<Self> {
        let bad = || Error::Config(format!("malformed {name} mutant parameters: {params}"));
        let value = || params.get("value").and_then(Value::as_f64).ok_or_else(bad);
        let text = || params.get("op").and_then(Value::as_str).ok_or_else(bad);
        Ok(match name {
            "ConstantChange" => MutationOperator::ConstantChange { value: value()? },
            "InitialValueChange" => MutationOperator::InitialValueChange { value: value()? },
            "BooleanNegate" => MutationOperator::BooleanNegate,
            "SumToProduct" => MutationOperator::SumToProduct,
            "NotToggle" => MutationOperator::NotToggle,
            "SwitchLineSwap" => MutationOperator::SwitchLineSwap,
            "SumSignVector" => {
                let signs = params
                    .get("signs")
                    .and_then(Value::as_str)
                    .ok_or_else(bad)?
                    .chars()
                    .map(|c| if c == '+' { 1 } else { -1 })
                    .collect();
                MutationOperator::SumSignVector { signs }
            }
            "RelationalSwap" => MutationOperator::RelationalSwap {
                op: RelOp::parse(text()?).ok_or_else(bad)?,
            },
            "LogicalSwap" => MutationOperator::LogicalSwap {
                op: LogicOp::parse(text()?).ok_or_else(bad)?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown mutation operator `{other}`"
                )))
            }
        })
    }
}

/// A single seeded fault.
#[derive(Debug, Clone, PartialEq)]
pub struct Mutant {
    pub id: usize,
    pub model: String,
    pub block: String,
    pub operator: MutationOperator,
    pub description: String,
}

impl Mutant {
    /// Builds the faulty model.
    pub fn apply(&self, graph: &ModelGraph) -> Result<ModelGraph> {
        let b = graph.block_index(&self.block).ok_or_else(|| {
            Error::Contract(format!(
                "mutant {} targets unknown block `{}`",
                self.id, self.block
            ))
        })?;
        let kind = &graph.blocks()[b].kind;
        let inapplicable = || {
            Error::Contract(format!(
                "mutant {} ({}) does not apply to {}",
                self.id,
                self.operator.name(),
                kind.type_name()
            ))
        };
        let new_kind = match (&self.operator, kind) {
            (
                MutationOperator::ConstantChange { value },
                BlockKind::Constant { boolean: false, .. },
            ) => BlockKind::Constant {
                value: *value,
                boolean: false,
            },
            (
                MutationOperator::BooleanNegate,
                BlockKind::Constant {
                    value,
                    boolean: true,
                },
            ) => BlockKind::Constant {
                value: if *value != 0.0 { 0.0 } else { 1.0 },
                boolean: true,
            },
            (MutationOperator::SumSignVector { signs }, BlockKind::Sum { signs: old })
                if signs.len() == old.len() =>
            {
                BlockKind::Sum {
                    signs: signs.clone(),
                }
            }
            (MutationOperator::SumToProduct, BlockKind::Sum { signs }) => BlockKind::Product {
                inputs: signs.len(),
            },
            (MutationOperator::RelationalSwap { op }, BlockKind::RelationalOp { .. }) => {
                BlockKind::RelationalOp { op: *op }
            }
            (
                MutationOperator::LogicalSwap { op },
                BlockKind::LogicalOp {
                    op: old,
                    inputs,
                    negate,
                },
            ) if *old != LogicOp::Not && *op != LogicOp::Not => BlockKind::LogicalOp {
                op: *op,
                inputs: *inputs,
                negate: *negate,
            },
            (MutationOperator::NotToggle, BlockKind::LogicalOp { op, inputs, negate }) => {
                BlockKind::LogicalOp {
                    op: *op,
                    inputs: *inputs,
                    negate: !*negate,
                }
            }
            (MutationOperator::InitialValueChange { value }, BlockKind::UnitDelay { .. }) => {
                BlockKind::UnitDelay { initial: *value }
            }
            (
                MutationOperator::InitialValueChange { value },
                BlockKind::DiscreteIntegrator { .. },
            ) => BlockKind::DiscreteIntegrator { initial: *value },
            (MutationOperator::SwitchLineSwap, BlockKind::Switch { .. }) => {
                return graph.with_swapped_inputs(b, 0, 2);
            }
            _ => return Err(inapplicable()),
        };
        graph.with_block_kind(b, new_kind)
    }

    pub fn to_export(&self) -> MutantRecord {
        MutantRecord {
            id: self.id,
            block: self.block.clone(),
            operator: self.operator.name().to_string(),
            params: self.operator.params(),
            description: Some(self.description.clone()),
        }
    }
}

/// Exported mutant: `{id, block, operator, params}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutantRecord {
    pub id: usize,
    pub block: String,
    pub operator: String,
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl MutantRecord {
    pub fn into_mutant(self, model: &str) -> Result<Mutant> {
        let operator = MutationOperator::from_parts(&self.operator, &self.params)?;
        Ok(Mutant {
            id: self.id,
            model: model.to_string(),
            block: self.block,
            description: self
                .description
                .unwrap_or_else(|| operator.name().to_string()),
            operator,
        })
    }
}

pub fn mutants_to_json(mutants: &[Mutant]) -> Result<String> {
    let records: Vec<MutantRecord> = mutants.iter().map(Mutant::to_export).collect();
    Ok(serde_json::to_string_pretty(&records)?)
}

pub fn mutants_from_json(text: &str, model: &str) -> Result<Vec<Mutant>> {
    let records: Vec<MutantRecord> = serde_json::from_str(text)?;
    records.into_iter().map(|r| r.into_mutant(model)).collect()
}

/// How sign-vector variants of a Sum block are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountingMode {
    /// Every sign combination, the original one included, plus the product:
    /// nine variants for a three-input Sum.
    #[default]
    All,
    /// Only sign combinations that differ from the original, plus the product.
    Distinct,
}

fn relational_swaps(op: RelOp) -> [RelOp; 2] {
    match op {
        RelOp::Ge => [RelOp::Lt, RelOp::Le],
        RelOp::Le => [RelOp::Gt, RelOp::Ge],
        RelOp::Lt => [RelOp::Ge, RelOp::Gt],
        RelOp::Gt => [RelOp::Le, RelOp::Ge],
        RelOp::Eq => [RelOp::Ne, RelOp::Ne],
        RelOp::Ne => [RelOp::Eq, RelOp::Eq],
    }
}

fn constant_variants(c: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in [c + 1.0, -c, 0.0, 10.0 * c] {
        let v = if v == 0.0 { 0.0 } else { v };
        if v != c && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub fn enumerate_mutants(graph: &ModelGraph) -> Vec<Mutant> {
    enumerate_mutants_with(graph, CountingMode::default())
}

/// Every single-block fault the model admits, in block order.
pub fn enumerate_mutants_with(graph: &ModelGraph, mode: CountingMode) -> Vec<Mutant> {
    let mut out = Vec::new();
    let mut push = |block: &str, operator: MutationOperator, description: String| {
        out.push(Mutant {
            id: out.len(),
            model: graph.name().to_string(),
            block: block.to_string(),
            operator,
            description,
        });
    };
    for block in graph.blocks() {
        let id = block.id.as_str();
        match &block.kind {
            BlockKind::Constant {
                value,
                boolean: false,
            } => {
                for v in constant_variants(*value) {
                    push(
                        id,
                        MutationOperator::ConstantChange { value: v },
                        format!("{id}: constant {value} -> {v}"),
                    );
                }
            }
            BlockKind::Constant {
                value,
                boolean: true,
            } => {
                push(
                    id,
                    MutationOperator::BooleanNegate,
                    format!("{id}: negate boolean {value}"),
                );
            }
            BlockKind::Sum { signs } => {
                let n = signs.len();
                for mask in 0..(1u32 << n) {
                    // bit i set means input i is subtracted; mask 0 is "++...+"
                    let variant: Vec<i8> = (0..n)
                        .map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 })
                        .collect();
                    if mode == CountingMode::Distinct && variant == *signs {
                        continue;
                    }
                    push(
                        id,
                        MutationOperator::SumSignVector {
                            signs: variant.clone(),
                        },
                        format!(
                            "{id}: signs {} -> {}",
                            signs_string(signs),
                            signs_string(&variant)
                        ),
                    );
                }
                push(
                    id,
                    MutationOperator::SumToProduct,
                    format!("{id}: sum -> product"),
                );
            }
            BlockKind::RelationalOp { op } => {
                let swaps = relational_swaps(*op);
                let unique: &[RelOp] = if swaps[0] == swaps[1] {
                    &swaps[..1]
                } else {
                    &swaps
                };
                for &new in unique {
                    push(
                        id,
                        MutationOperator::RelationalSwap { op: new },
                        format!("{id}: {} -> {}", op.symbol(), new.symbol()),
                    );
                }
            }
            BlockKind::LogicalOp { op, negate, .. } => {
                if *op != LogicOp::Not {
                    for new in [LogicOp::And, LogicOp::Or, LogicOp::Xor] {
                        if new != *op {
                            push(
                                id,
                                MutationOperator::LogicalSwap { op: new },
                                format!("{id}: {} -> {}", op.name(), new.name()),
                            );
                        }
                    }
                }
                let what = if (*op == LogicOp::Not) != *negate {
                    "remove NOT"
                } else {
                    "add NOT"
                };
                push(id, MutationOperator::NotToggle, format!("{id}: {what}"));
            }
            BlockKind::Switch { .. } => {
                push(
                    id,
                    MutationOperator::SwitchLineSwap,
                    format!("{id}: swap input lines 1 and 3"),
                );
            }
            BlockKind::UnitDelay { initial } | BlockKind::DiscreteIntegrator { initial } => {
                let v = initial + 1.0;
                push(
                    id,
                    MutationOperator::InitialValueChange { value: v },
                    format!("{id}: initial {initial} -> {v}"),
                );
            }
            BlockKind::Product { .. }
            | BlockKind::Gain { .. }
            | BlockKind::Saturation { .. }
            | BlockKind::Abs
            | BlockKind::MinMax { .. } => {}
        }
    }
    out
}

fn samples_differ(a: &Signal, b: &Signal) -> bool {
    a.values().iter().zip(b.values()).any(|(&x, &y)| {
        let tol = KILL_TOLERANCE.max(KILL_TOLERANCE * x.abs().max(y.abs()));
        (x - y).abs() > tol
    })
}

/// True when any output sample of the mutant differs from the original.
pub fn kills(original: &SimulationTrace, mutated: &SimulationTrace) -> Result<bool> {
    if original.outputs.len() != mutated.outputs.len()
        || original
            .outputs
            .iter()
            .zip(&mutated.outputs)
            .any(|(a, b)| a.values().len() != b.values().len())
    {
        return Err(Error::Contract("traces differ in shape".into()));
    }
    if original.is_faulted() != mutated.is_faulted() {
        return Ok(true);
    }
    Ok(original
        .outputs
        .iter()
        .zip(&mutated.outputs)
        .any(|(a, b)| samples_differ(a, b)))
}

/// Test-by-mutant detection table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KillMatrix {
    pub mutant_ids: Vec<usize>,
    /// `cells[test][mutant]`.
    pub cells: Vec<Vec<bool>>,
}

impl KillMatrix {
    pub fn tests(&self) -> usize {
        self.cells.len()
    }

    pub fn mutants(&self) -> usize {
        self.mutant_ids.len()
    }

    /// Column of kills for one mutant, over all tests.
    pub fn signature(&self, mutant: usize) -> Vec<bool> {
        self.cells.iter().map(|row| row[mutant]).collect()
    }

    pub fn killed_by_any(&self, mutant: usize) -> bool {
        self.cells.iter().any(|row| row[mutant])
    }

    pub fn killed_count(&self) -> usize {
        (0..self.mutants())
            .filter(|&m| self.killed_by_any(m))
            .count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["test".to_string()];
        header.extend(self.mutant_ids.iter().map(|id| format!("m{id}")));
        w.write_record(&header)?;
        for (t, row) in self.cells.iter().enumerate() {
            let mut rec = vec![t.to_string()];
            rec.extend(row.iter().map(|&k| u8::from(k).to_string()));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Contract(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// An original model paired with prebuilt mutant models, counting every
/// simulation it performs.
#[derive(Debug)]
pub struct MutationHarness<'g> {
    original: &'g ModelGraph,
    mutants: Vec<Mutant>,
    graphs: Vec<ModelGraph>,
    calls: AtomicUsize,
}

impl<'g> MutationHarness<'g> {
    pub fn new(original: &'g ModelGraph, mutants: &[Mutant]) -> Result<Self> {
        let graphs = mutants
            .iter()
            .map(|m| m.apply(original))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            original,
            mutants: mutants.to_vec(),
            graphs,
            calls: AtomicUsize::new(0),
        })
    }

    pub fn mutants(&self) -> &[Mutant] {
        &self.mutants
    }

    pub fn simulations(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    fn run(&self, graph: &ModelGraph, signals: &[Signal]) -> Result<SimulationTrace> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        simulate(graph, signals)
    }

    /// Simulates each test on the original and on every mutant.
    pub fn kill_matrix(&self, suite: &[TestCase]) -> Result<KillMatrix> {
        let cells = suite
            .iter()
            .map(|test| {
                let signals = test.to_signals(
                    self.original.inports(),
                    self.original.duration(),
                    self.original.dt(),
                )?;
                let reference = self.run(self.original, &signals)?;
                self.graphs
                    .par_iter()
                    .map(|g| kills(&reference, &self.run(g, &signals)?))
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KillMatrix {
            mutant_ids: self.mutants.iter().map(|m| m.id).collect(),
            cells,
        })
    }

    /// Fraction of mutants killed by at least one test of `suite`.
    pub fn score(&self, suite: &[TestCase]) -> Result<f64> {
        if self.mutants.is_empty() {
            return Err(Error::UndefinedScore("no mutants to score against".into()));
        }
        if suite.is_empty() {
            return Ok(0.0);
        }
        let matrix = self.kill_matrix(suite)?;
        Ok(matrix.killed_count() as f64 / self.mutants.len() as f64)
    }
}

pub fn mutation_score(suite: &[TestCase], graph: &ModelGraph, mutants: &[Mutant]) -> Result<f64> {
    MutationHarness::new(graph, mutants)?.score(suite)
}

/// Counts reported by [`filter_mutants`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterStats {
    pub original: usize,
    pub filtered: usize,
    /// `filtered / original`, rounded to three decimals.
    pub fraction: f64,
    pub killed_by_all: usize,
    pub killed_by_none: usize,
    pub duplicates: usize,
    pub probes: usize,
}

impl FilterStats {
    /// `"33 -> 11 (33%)"`.
    pub fn summary(&self) -> String {
        format!(
            "{} -> {} ({:.0}%)",
            self.original,
            self.filtered,
            100.0 * self.fraction
        )
    }
}

#[derive(Debug, Clone)]
pub struct FilterOutcome {
    pub survivors: Vec<Mutant>,
    pub stats: FilterStats,
    pub probes: Vec<TestCase>,
}

/// Drops mutants killed by every probe, by no probe, or with a kill
/// signature already seen (the lowest id is kept).
pub fn filter_mutants<R: Rng + ?Sized>(
    mutants: &[Mutant],
    graph: &ModelGraph,
    n_probe: usize,
    rng: &mut R,
) -> Result<FilterOutcome> {
    if mutants.is_empty() {
        return Err(Error::Contract("no mutants to filter".into()));
    }
    let probes = (0..n_probe)
        .map(|_| sample_test_case(graph.inports(), rng))
        .collect::<Result<Vec<_>>>()?;
    filter_with_probes(mutants, graph, probes)
}

pub fn filter_with_probes(
    mutants: &[Mutant],
    graph: &ModelGraph,
    probes: Vec<TestCase>,
) -> Result<FilterOutcome> {
    if mutants.is_empty() {
        return Err(Error::Contract("no mutants to filter".into()));
    }
    let mut order: Vec<usize> = (0..mutants.len()).collect();
    order.sort_by_key(|&i| mutants[i].id);
    let harness = MutationHarness::new(graph, mutants)?;
    let matrix = harness.kill_matrix(&probes)?;

    let (mut all, mut none, mut dup) = (0, 0, 0);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut keep = Vec::new();
    for &m in &order {
        let sig = matrix.signature(m);
        if sig.iter().all(|&k| k) {
            all += 1;
        } else if !sig.iter().any(|&k| k) {
            none += 1;
        } else if !seen.insert(sig) {
            dup += 1;
        } else {
            keep.push(m);
        }
    }
    keep.sort_unstable();
    let survivors: Vec<Mutant> = keep.into_iter().map(|m| mutants[m].clone()).collect();
    let fraction = (1000.0 * survivors.len() as f64 / mutants.len() as f64).round() / 1000.0;
    Ok(FilterOutcome {
        stats: FilterStats {
            original: mutants.len(),
            filtered: survivors.len(),
            fraction,
            killed_by_all: all,
            killed_by_none: none,
            duplicates: dup,
            probes: probes.len(),
        },
        survivors,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_model;

    fn sum3() -> ModelGraph {
        load_model(
            r#"{"name": "s", "dt": 1, "duration": 4,
                "inports": [
                    {"name": "a", "kind": "numeric", "range": [-5, 5], "control_points": 2},
                    {"name": "b", "kind": "numeric", "range": [-5, 5], "control_points": 2},
                    {"name": "c", "kind": "numeric", "range": [-5, 5], "control_points": 2}],
                "outports": ["y"],
                "blocks": [{"id": "s", "kind": "Sum", "params": {"signs": "++-"}}],
                "connections": [{"from": "a", "to": "s.in1"}, {"from": "b", "to": "s.in2"},
                                {"from": "c", "to": "s.in3"}, {"from": "s", "to": "y"}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn three_input_sum_counts() {
        let g = sum3();
        assert_eq!(enumerate_mutants(&g).len(), 9);
        assert_eq!(enumerate_mutants_with(&g, CountingMode::Distinct).len(), 8);
        assert_eq!(enumerate_mutants(&g), enumerate_mutants(&g));
    }

    #[test]
    fn no_mutable_blocks() {
        let g = load_model(
            r#"{"name": "g", "dt": 1, "duration": 2,
                "inports": [{"name": "u", "kind": "numeric", "range": [0, 1], "control_points": 1}],
                "outports": ["y"],
                "blocks": [{"id": "g", "kind": "Gain", "params": {"factor": 2}}],
                "connections": [{"from": "u", "to": "g.in1"}, {"from": "g", "to": "y"}]}"#,
        )
        .unwrap();
        assert!(enumerate_mutants(&g).is_empty());
    }

    #[test]
    fn constant_variant_set() {
        assert_eq!(constant_variants(2.0), vec![3.0, -2.0, 0.0, 20.0]);
        assert_eq!(constant_variants(0.0), vec![1.0]);
        assert_eq!(constant_variants(-1.0), vec![0.0, 1.0, -10.0]);
    }

    #[test]
    fn relational_family() {
        assert_eq!(relational_swaps(RelOp::Ge), [RelOp::Lt, RelOp::Le]);
        assert_eq!(relational_swaps(RelOp::Le), [RelOp::Gt, RelOp::Ge]);
        assert_eq!(relational_swaps(RelOp::Lt), [RelOp::Ge, RelOp::Gt]);
        assert_eq!(relational_swaps(RelOp::Gt), [RelOp::Le, RelOp::Ge]);
    }

    #[test]
    fn kill_tolerance() {
        let t = |v: Vec<f64>| SimulationTrace {
            outputs: vec![Signal::from_samples(v, 1.0).unwrap()],
            coverage: Default::default(),
            fault: None,
        };
        let a = t(vec![1.0, 1.0, 1.0]);
        assert!(!kills(&a, &a).unwrap());
        assert!(kills(&a, &t(vec![1.0, 2.0, 1.0])).unwrap());
        assert!(!kills(&a, &t(vec![1.0, 1.0 + 1e-15, 1.0])).unwrap());
        assert!(kills(&a, &t(vec![1.0, 1.0])).is_err());
    }

    #[test]
    fn each_mutant_changes_exactly_one_block() {
        let g = crate::model::load_model_file(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/models/tiny_controller.json"
        ))
        .unwrap();
        for m in enumerate_mutants(&g) {
            let mg = m.apply(&g).unwrap();
            let changed_blocks = g
                .blocks()
                .iter()
                .zip(mg.blocks())
                .filter(|(a, b)| a != b)
                .count();
            let changed_wires = g
                .connections()
                .iter()
                .zip(mg.connections())
                .filter(|(a, b)| a != b)
                .count();
            match m.operator {
                MutationOperator::SwitchLineSwap => {
                    assert_eq!(changed_blocks, 0);
                    assert_eq!(changed_wires, 2);
                }
                MutationOperator::SumSignVector { ref signs }
                    if matches!(&g.blocks()[g.block_index(&m.block).unwrap()].kind,
                                BlockKind::Sum { signs: s } if s == signs) =>
                {
                    assert_eq!(changed_blocks, 0, "the original sign pattern is a no-op");
                }
                _ => {
                    assert_eq!(changed_blocks, 1, "{}", m.description);
                    assert_eq!(changed_wires, 0);
                }
            }
        }
    }

    #[test]
    fn export_round_trip() {
        let g = sum3();
        let ms = enumerate_mutants(&g);
        let back = mutants_from_json(&mutants_to_json(&ms).unwrap(), g.name()).unwrap();
        assert_eq!(back, ms);
        let v: Value = serde_json::from_str(&mutants_to_json(&ms).unwrap()).unwrap();
        assert_eq!(v[0]["operator"], "SumSignVector");
        assert_eq!(v[0]["block"], "s");
        assert_eq!(v[0]["params"]["signs"], "+++");
    }

    #[test]
    fn score_examples() {
        let g = sum3();
        let ms = enumerate_mutants_with(&g, CountingMode::Distinct);
        assert_eq!(mutation_score(&[], &g, &ms).unwrap(), 0.0);
        assert!(matches!(
            mutation_score(&[], &g, &[]),
            Err(Error::UndefinedScore(_))
        ));
    }

    #[test]
    fn kill_matrix_csv_layout() {
        let m = KillMatrix {
            mutant_ids: vec![3, 5],
            cells: vec![vec![true, false], vec![false, false]],
        };
        assert_eq!(m.to_csv().unwrap(), "test,m3,m5\n0,1,0\n1,0,0\n");
        assert_eq!(m.killed_count(), 1);
    }
}

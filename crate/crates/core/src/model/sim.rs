use super::{BlockKind, Extremum, LogicOp, ModelGraph, Source};
use crate::error::{Error, Result};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchTag {
    /// Switch passed `in1`, or a relational block evaluated true.
    Taken,
    /// Switch passed `in3`, or a relational block evaluated false.
    NotTaken,
}

/// Exercised Switch branches and relational outcomes, as a bitmap over the
/// model's static branch universe.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coverage {
    hits: Vec<bool>,
}

impl Coverage {
    pub fn empty(universe: usize) -> Self {
        Self {
            hits: vec![false; universe],
        }
    }

    pub fn universe(&self) -> usize {
        self.hits.len()
    }

    pub fn count(&self) -> usize {
        self.hits.iter().filter(|&&h| h).count()
    }

    /// Covered fraction; an empty universe counts as fully covered.
    pub fn fraction(&self) -> f64 {
        if self.hits.is_empty() {
            1.0
        } else {
            self.count() as f64 / self.hits.len() as f64
        }
    }

    pub fn contains(&self, index: usize) -> bool {
        self.hits.get(index).copied().unwrap_or(false)
    }

    pub fn mark(&mut self, index: usize) {
        self.hits[index] = true;
    }

    /// Adds `other` in place and returns how many branches were new.
    pub fn merge(&mut self, other: &Coverage) -> usize {
        if self.hits.len() < other.hits.len() {
            self.hits.resize(other.hits.len(), false);
        }
        let mut added = 0;
        for (mine, &theirs) in self.hits.iter_mut().zip(&other.hits) {
            if theirs && !*mine {
                *mine = true;
                added += 1;
            }
        }
        added
    }

    pub fn is_subset_of(&self, other: &Coverage) -> bool {
        self.hits
            .iter()
            .enumerate()
            .all(|(i, &h)| !h || other.contains(i))
    }

    /// Covered branches as `(block id, tag)` pairs.
    pub fn branches<'g>(&self, graph: &'g ModelGraph) -> Vec<(&'g str, BranchTag)> {
        let mut out = Vec::new();
        for (b, block) in graph.blocks().iter().enumerate() {
            if let Some(offset) = graph.branch_offset(b) {
                if self.contains(offset) {
                    out.push((block.id.as_str(), BranchTag::Taken));
                }
                if self.contains(offset + 1) {
                    out.push((block.id.as_str(), BranchTag::NotTaken));
                }
            }
        }
        out
    }
}

/// First non-finite value seen during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimFault {
    pub step: usize,
    pub block: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub outputs: Vec<Signal>,
    pub coverage: Coverage,
    /// Set when the run diverged; outputs are then held at their last finite value.
    pub fault: Option<SimFault>,
}

impl SimulationTrace {
    pub fn is_faulted(&self) -> bool {
        self.fault.is_some()
    }
}

#[inline]
fn truth(x: f64) -> bool {
    x != 0.0
}

#[inline]
fn bit(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Runs the model over its horizon on the given input signals.
pub fn simulate(graph: &ModelGraph, inputs: &[Signal]) -> Result<SimulationTrace> {
    if inputs.len() != graph.inports().len() {
        return Err(Error::Contract(format!(
            "model `{}` has {} inports, {} signals given",
            graph.name(),
            graph.inports().len(),
            inputs.len()
        )));
    }
    let k = graph.steps();
    for (sig, spec) in inputs.iter().zip(graph.inports()) {
        if sig.values().len() != k + 1 || (sig.dt() - graph.dt()).abs() > 1e-12 * graph.dt() {
            return Err(Error::Contract(format!(
                "signal for `{}` does not match the model's dt/duration",
                spec.name
            )));
        }
    }

    let blocks = graph.blocks();
    let n = blocks.len();
    let mut value = vec![0.0f64; n];
    let mut state: Vec<f64> = blocks
        .iter()
        .map(|b| match b.kind {
            BlockKind::UnitDelay { initial } | BlockKind::DiscreteIntegrator { initial } => initial,
            _ => 0.0,
        })
        .collect();
    let stateful: Vec<usize> = (0..n).filter(|&b| blocks[b].kind.is_stateful()).collect();
    let mut coverage = Coverage::empty(graph.branch_count());
    let n_out = graph.outports().len();
    let mut outputs: Vec<Vec<f64>> = vec![Vec::with_capacity(k + 1); n_out];
    let mut fault = None;
    let mut operands: Vec<f64> = Vec::with_capacity(8);

    let read = |value: &[f64], src: Source, j: usize| -> f64 {
        match src {
            Source::Inport(i) => inputs[i].values()[j],
            Source::Block(b) => value[b],
        }
    };

    'steps: for j in 0..=k {
        for &b in &stateful {
            value[b] = state[b];
        }
        for &b in graph.topological_order() {
            let kind = &blocks[b].kind;
            if kind.is_stateful() {
                continue;
            }
            operands.clear();
            operands.extend(graph.block_inputs(b).iter().map(|&s| read(&value, s, j)));
            let x = &operands;
            let out = match kind {
                BlockKind::Constant { value, .. } => *value,
                BlockKind::Sum { signs } => signs
                    .iter()
                    .zip(x)
                    .map(|(&s, &v)| if s >= 0 { v } else { -v })
                    .sum(),
                BlockKind::Product { .. } => x.iter().product(),
                BlockKind::Gain { factor } => factor * x[0],
                BlockKind::RelationalOp { op } => {
                    let r = op.apply(x[0], x[1]);
                    let offset = graph.branch_offset(b).expect("relational blocks branch");
                    coverage.mark(offset + usize::from(!r));
                    bit(r)
                }
                BlockKind::LogicalOp { op, negate, .. } => {
                    let r = match op {
                        LogicOp::And => x.iter().all(|&v| truth(v)),
                        LogicOp::Or => x.iter().any(|&v| truth(v)),
                        LogicOp::Xor => x.iter().filter(|&&v| truth(v)).count() % 2 == 1,
                        LogicOp::Not => !truth(x[0]),
                    };
                    bit(r != *negate)
                }
                BlockKind::Switch { threshold } => {
                    let pass_first = x[1] >= *threshold;
                    let offset = graph.branch_offset(b).expect("switch blocks branch");
                    coverage.mark(offset + usize::from(!pass_first));
                    if pass_first {
                        x[0]
                    } else {
                        x[2]
                    }
                }
                BlockKind::Saturation { lo, hi } => x[0].clamp(*lo, *hi),
                BlockKind::Abs => x[0].abs(),
                BlockKind::MinMax { function, .. } => match function {
                    Extremum::Min => x.iter().copied().fold(f64::INFINITY, f64::min),
                    Extremum::Max => x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                },
                BlockKind::UnitDelay { .. } | BlockKind::DiscreteIntegrator { .. } => {
                    unreachable!()
                }
            };
            if !out.is_finite() {
                fault = Some(SimFault {
                    step: j,
                    block: blocks[b].id.clone(),
                });
                break 'steps;
            }
            value[b] = out;
        }
        for &b in &stateful {
            let input = read(&value, graph.block_inputs(b)[0], j);
            let next = match blocks[b].kind {
                BlockKind::UnitDelay { .. } => input,
                _ => state[b] + graph.dt() * input,
            };
            if !next.is_finite() && j < k {
                fault = Some(SimFault {
                    step: j + 1,
                    block: blocks[b].id.clone(),
                });
                for (o, out) in outputs.iter_mut().enumerate() {
                    out.push(read(&value, graph.outport_source(o), j));
                }
                break 'steps;
            }
            state[b] = next;
        }
        for (o, out) in outputs.iter_mut().enumerate() {
            out.push(read(&value, graph.outport_source(o), j));
        }
    }

    if fault.is_some() {
        for out in &mut outputs {
            let hold = out.last().copied().unwrap_or(0.0);
            out.resize(k + 1, hold);
        }
    }
    let outputs = outputs
        .into_iter()
        .map(|v| Signal::from_parts_unchecked(v, graph.dt(), graph.duration()))
        .collect();
    Ok(SimulationTrace {
        outputs,
        coverage,
        fault,
    })
}

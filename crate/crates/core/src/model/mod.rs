//! Discrete-time block-diagram models and their fixed-step simulator.
//!
//! A model is a flat graph of single-output blocks wired to named inports and
//! outports. Every block input has exactly one driver and every feedback
//! cycle must pass through a state block (`UnitDelay` or
//! `DiscreteIntegrator`), so a topological order over the direct-feedthrough
//! edges always exists for valid graphs.

mod block;
mod harness;
mod sim;

pub use block::{signs_string, Block, BlockKind, Extremum, LogicOp, RelOp};
pub use harness::{ModelSimulator, Simulator};
pub use sim::{simulate, BranchTag, Coverage, SimFault, SimulationTrace};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::{step_count, InputSpec};

/// Where a wire comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Inport(usize),
    Block(usize),
}

/// Where a wire goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sink {
    /// Zero-based input port of a block.
    Block(usize, usize),
    Outport(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Connection {
    pub from: Source,
    pub to: Sink,
}

/// A validated block diagram.
#[derive(Debug, Clone)]
pub struct ModelGraph {
    name: String,
    dt: f64,
    duration: f64,
    inports: Vec<InputSpec>,
    outports: Vec<String>,
    blocks: Vec<Block>,
    connections: Vec<Connection>,
    block_inputs: Vec<Vec<Source>>,
    outport_sources: Vec<Source>,
    order: Vec<usize>,
    branch_offsets: Vec<Option<usize>>,
    branch_count: usize,
}

impl ModelGraph {
    pub fn new(
        name: impl Into<String>,
        dt: f64,
        duration: f64,
        inports: Vec<InputSpec>,
        outports: Vec<String>,
        blocks: Vec<Block>,
        connections: Vec<Connection>,
    ) -> Result<Self> {
        let name = name.into();
        step_count(duration, dt).map_err(|e| Error::Load(e.to_string()))?;
        if inports.is_empty() {
            return Err(Error::Load(format!("model `{name}` has no inports")));
        }
        if outports.is_empty() {
            return Err(Error::Load(format!("model `{name}` has no outports")));
        }
        for spec in &inports {
            spec.validate().map_err(|e| Error::Load(e.to_string()))?;
        }
        let mut seen = HashMap::new();
        for id in inports
            .iter()
            .map(|s| s.name.as_str())
            .chain(outports.iter().map(String::as_str))
            .chain(blocks.iter().map(|b| b.id.as_str()))
        {
            if seen.insert(id, ()).is_some() {
                return Err(Error::Load(format!("duplicate identifier `{id}`")));
            }
        }
        for b in &blocks {
            b.kind
                .validate()
                .map_err(|e| Error::Load(format!("block `{}`: {e}", b.id)))?;
        }

        let mut block_inputs: Vec<Vec<Option<Source>>> =
            blocks.iter().map(|b| vec![None; b.kind.arity()]).collect();
        let mut outport_sources: Vec<Option<Source>> = vec![None; outports.len()];
        let describe_source = |s: Source| match s {
            Source::Inport(i) => inports[i].name.clone(),
            Source::Block(b) => format!("{}.out", blocks[b].id),
        };
        for c in &connections {
            match c.from {
                Source::Inport(i) if i >= inports.len() => {
                    return Err(Error::Load(format!("connection from unknown inport #{i}")))
                }
                Source::Block(b) if b >= blocks.len() => {
                    return Err(Error::Load(format!("connection from unknown block #{b}")))
                }
                _ => {}
            }
            let slot = match c.to {
                Sink::Block(b, port) => {
                    let block = blocks
                        .get(b)
                        .ok_or_else(|| Error::Load(format!("connection to unknown block #{b}")))?;
                    block_inputs[b].get_mut(port).ok_or_else(|| {
                        Error::Load(format!(
                            "dangling connection: `{}` has no input port in{}",
                            block.id,
                            port + 1
                        ))
                    })?
                }
                Sink::Outport(o) => outport_sources
                    .get_mut(o)
                    .ok_or_else(|| Error::Load(format!("connection to unknown outport #{o}")))?,
            };
            if slot.is_some() {
                return Err(Error::Load(format!(
                    "port driven twice (second driver {})",
                    describe_source(c.from)
                )));
            }
            *slot = Some(c.from);
        }
        let block_inputs = block_inputs
            .into_iter()
            .enumerate()
            .map(|(b, ports)| {
                ports
                    .into_iter()
                    .enumerate()
                    .map(|(p, s)| {
                        s.ok_or_else(|| {
                            Error::Load(format!(
                                "dangling input: `{}.in{}` is not connected",
                                blocks[b].id,
                                p + 1
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let outport_sources = outport_sources
            .into_iter()
            .enumerate()
            .map(|(o, s)| {
                s.ok_or_else(|| {
                    Error::Load(format!(
                        "dangling outport: `{}` is not connected",
                        outports[o]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let order = topological_sort(&blocks, &block_inputs)?;
        let mut branch_offsets = Vec::with_capacity(blocks.len());
        let mut branch_count = 0;
        for b in &blocks {
            let n = b.kind.branch_count();
            branch_offsets.push((n > 0).then_some(branch_count));
            branch_count += n;
        }

        Ok(Self {
            name,
            dt,
            duration,
            inports,
            outports,
            blocks,
            connections,
            block_inputs,
            outport_sources,
            order,
            branch_offsets,
            branch_count,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn inports(&self) -> &[InputSpec] {
        &self.inports
    }

    pub fn outports(&self) -> &[String] {
        &self.outports
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn connections(&self) -> &[Connection] {
        &self.connections
    }

    pub fn block_index(&self, id: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.id == id)
    }

    pub fn block_inputs(&self, block: usize) -> &[Source] {
        &self.block_inputs[block]
    }

    pub fn outport_source(&self, outport: usize) -> Source {
        self.outport_sources[outport]
    }

    /// Evaluation order computed at validation time.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// Size of the static branch universe used for coverage.
    pub fn branch_count(&self) -> usize {
        self.branch_count
    }

    pub(crate) fn branch_offset(&self, block: usize) -> Option<usize> {
        self.branch_offsets[block]
    }

    /// Number of solver steps `k`; signals carry `k + 1` samples.
    pub fn steps(&self) -> usize {
        step_count(self.duration, self.dt).expect("validated at construction")
    }

    /// Rebuilds the graph with one block's kind replaced.
    pub fn with_block_kind(&self, block: usize, kind: BlockKind) -> Result<Self> {
        let mut blocks = self.blocks.clone();
        blocks[block].kind = kind;
        Self::new(
            self.name.clone(),
            self.dt,
            self.duration,
            self.inports.clone(),
            self.outports.clone(),
            blocks,
            self.connections.clone(),
        )
    }

    /// Rebuilds the graph with the drivers of two input ports of a block exchanged.
    pub fn with_swapped_inputs(&self, block: usize, a: usize, b: usize) -> Result<Self> {
        let connections = self
            .connections
            .iter()
            .map(|c| match c.to {
                Sink::Block(t, p) if t == block && p == a => Connection {
                    from: c.from,
                    to: Sink::Block(t, b),
                },
                Sink::Block(t, p) if t == block && p == b => Connection {
                    from: c.from,
                    to: Sink::Block(t, a),
                },
                _ => *c,
            })
            .collect();
        Self::new(
            self.name.clone(),
            self.dt,
            self.duration,
            self.inports.clone(),
            self.outports.clone(),
            self.blocks.clone(),
            connections,
        )
    }

    pub fn to_document(&self) -> ModelDocument {
        let source_name = |s: Source| match s {
            Source::Inport(i) => self.inports[i].name.clone(),
            Source::Block(b) => format!("{}.out", self.blocks[b].id),
        };
        ModelDocument {
            name: self.name.clone(),
            dt: self.dt,
            duration: self.duration,
            inports: self.inports.clone(),
            outports: self.outports.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockDocument {
                    id: b.id.clone(),
                    kind: b.kind.type_name().to_string(),
                    params: b.kind.params(),
                })
                .collect(),
            connections: self
                .connections
                .iter()
                .map(|c| ConnectionDocument {
                    from: source_name(c.from),
                    to: match c.to {
                        Sink::Block(b, p) => format!("{}.in{}", self.blocks[b].id, p + 1),
                        Sink::Outport(o) => self.outports[o].clone(),
                    },
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }
}

/// Serialized form of a model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDocument {
    pub name: String,
    pub dt: f64,
    pub duration: f64,
    pub inports: Vec<InputSpec>,
    pub outports: Vec<String>,
    pub blocks: Vec<BlockDocument>,
    pub connections: Vec<ConnectionDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockDocument {
    pub id: String,
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectionDocument {
    pub from: String,
    pub to: String,
}

impl ModelDocument {
    pub fn into_graph(self) -> Result<ModelGraph> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                Ok(Block {
                    id: b.id.clone(),
                    kind: BlockKind::from_params(&b.kind, &b.params)
                        .map_err(|e| Error::Load(format!("block `{}`: {e}", b.id)))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let block_ids: HashMap<&str, usize> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.id.as_str(), i))
            .collect();
        let inport_ids: HashMap<&str, usize> = self
            .inports
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.as_str(), i))
            .collect();
        let outport_ids: HashMap<&str, usize> = self
            .outports
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();

        let mut connections = Vec::with_capacity(self.connections.len());
        for c in &self.connections {
            let (from_id, from_port) = split_endpoint(&c.from);
            let from = match (inport_ids.get(from_id), block_ids.get(from_id)) {
                (Some(&i), _) if matches!(from_port, None | Some("out")) => Source::Inport(i),
                (_, Some(&b)) if matches!(from_port, None | Some("out")) => Source::Block(b),
                _ => {
                    return Err(Error::Load(format!(
                        "dangling connection: unknown source `{}`",
                        c.from
                    )))
                }
            };
            let (to_id, to_port) = split_endpoint(&c.to);
            let to = if let (Some(&o), None | Some("in") | Some("in1")) =
                (outport_ids.get(to_id), to_port)
            {
                Sink::Outport(o)
            } else if let Some(&b) = block_ids.get(to_id) {
                let port = to_port
                    .and_then(|p| p.strip_prefix("in"))
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| {
                        Error::Load(format!("dangling connection: bad input port in `{}`", c.to))
                    })?;
                Sink::Block(b, port - 1)
            } else {
                return Err(Error::Load(format!(
                    "dangling connection: unknown destination `{}`",
                    c.to
                )));
            };
            connections.push(Connection { from, to });
        }
        ModelGraph::new(
            self.name,
            self.dt,
            self.duration,
            self.inports,
            self.outports,
            blocks,
            connections,
        )
    }
}

fn split_endpoint(s: &str) -> (&str, Option<&str>) {
    match s.rsplit_once('.') {
        Some((id, port)) => (id, Some(port)),
        None => (s, None),
    }
}

/// Parses and validates a model document.
pub fn load_model(text: &str) -> Result<ModelGraph> {
    let doc: ModelDocument =
        serde_json::from_str(text).map_err(|e| Error::Load(format!("malformed model: {e}")))?;
    doc.into_graph()
}

pub fn load_model_file(path: impl AsRef<Path>) -> Result<ModelGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_model(&text)
}

/// Kahn's algorithm over direct-feedthrough edges, lowest index first.
fn topological_sort(blocks: &[Block], inputs: &[Vec<Source>]) -> Result<Vec<usize>> {
    let n = blocks.len();
    let mut indegree = vec![0usize; n];
    let mut successors = vec![Vec::new(); n];
    for (b, srcs) in inputs.iter().enumerate() {
        if blocks[b].kind.is_stateful() {
            continue;
        }
        for s in srcs {
            if let Source::Block(p) = *s {
                indegree[b] += 1;
                successors[p].push(b);
            }
        }
    }
    let mut ready: std::collections::BTreeSet<usize> =
        (0..n).filter(|&b| indegree[b] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(b) = ready.pop_first() {
        order.push(b);
        for &s in &successors[b] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.insert(s);
            }
        }
    }
    if order.len() != n {
        let stuck: Vec<&str> = (0..n)
            .filter(|&b| indegree[b] > 0)
            .map(|b| blocks[b].id.as_str())
            .collect();
        return Err(Error::Load(format!(
            "algebraic loop through blocks: {}",
            stuck.join(", ")
        )));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(blocks: &str, connections: &str) -> String {
        format!(
            r#"{{
                "name": "t", "dt": 1.0, "duration": 2.0,
                "inports": [{{"name": "u", "kind": "numeric", "range": [-1, 1], "control_points": 1}}],
                "outports": ["y"],
                "blocks": {blocks},
                "connections": {connections}
            }}"#
        )
    }

    #[test]
    fn minimal_gain_model() {
        let g = load_model(&doc(
            r#"[{"id": "g", "kind": "Gain", "params": {"factor": 2}}]"#,
            r#"[{"from": "u", "to": "g.in1"}, {"from": "g.out", "to": "y"}]"#,
        ))
        .unwrap();
        assert_eq!(g.blocks().len(), 1);
        assert_eq!(g.inports().len(), 1);
        assert_eq!(g.outports(), &["y".to_string()]);
    }

    #[test]
    fn algebraic_loop_rejected() {
        let err = load_model(&doc(
            r#"[{"id": "s", "kind": "Sum", "params": {"signs": "++"}},
                {"id": "g", "kind": "Gain", "params": {"factor": 0.5}}]"#,
            r#"[{"from": "u", "to": "s.in1"}, {"from": "g", "to": "s.in2"},
                {"from": "s", "to": "g.in1"}, {"from": "s", "to": "y"}]"#,
        ))
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("algebraic loop"), "{msg}");
        assert!(msg.contains('s') && msg.contains('g'));
    }

    #[test]
    fn delay_breaks_loop() {
        let g = load_model(&doc(
            r#"[{"id": "s", "kind": "Sum", "params": {"signs": "++"}},
                {"id": "d", "kind": "UnitDelay", "params": {"initial": 0}}]"#,
            r#"[{"from": "u", "to": "s.in1"}, {"from": "d", "to": "s.in2"},
                {"from": "s", "to": "d.in1"}, {"from": "s", "to": "y"}]"#,
        ))
        .unwrap();
        assert_eq!(g.topological_order().len(), 2);
    }

    #[test]
    fn unknown_kind_and_dangling_errors() {
        let err = load_model(&doc(
            r#"[{"id": "q", "kind": "Quux", "params": {}}]"#,
            r#"[{"from": "u", "to": "y"}]"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("Quux"));

        let err = load_model(&doc(
            r#"[{"id": "g", "kind": "Gain", "params": {"factor": 1}}]"#,
            r#"[{"from": "nowhere", "to": "g.in1"}, {"from": "g", "to": "y"}]"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("nowhere"));

        let err = load_model(&doc(
            r#"[{"id": "g", "kind": "Gain", "params": {"factor": 1}}]"#,
            r#"[{"from": "g", "to": "y"}]"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("g.in1"));
    }

    #[test]
    fn chain_and_diamond_orders() {
        // chain a -> b -> c, declared out of order
        let g = load_model(&doc(
            r#"[{"id": "c", "kind": "Abs"}, {"id": "b", "kind": "Abs"}, {"id": "a", "kind": "Abs"}]"#,
            r#"[{"from": "u", "to": "a.in1"}, {"from": "a", "to": "b.in1"},
                {"from": "b", "to": "c.in1"}, {"from": "c", "to": "y"}]"#,
        ))
        .unwrap();
        let ids: Vec<&str> = g
            .topological_order()
            .iter()
            .map(|&b| g.blocks()[b].id.as_str())
            .collect();
        assert_eq!(ids, ["a", "b", "c"]);

        let g = load_model(&doc(
            r#"[{"id": "join", "kind": "Sum", "params": {"signs": "++"}},
                {"id": "l", "kind": "Abs"}, {"id": "r", "kind": "Gain", "params": {"factor": 3}}]"#,
            r#"[{"from": "u", "to": "l.in1"}, {"from": "u", "to": "r.in1"},
                {"from": "l", "to": "join.in1"}, {"from": "r", "to": "join.in2"},
                {"from": "join", "to": "y"}]"#,
        ))
        .unwrap();
        let pos = |id: &str| {
            let b = g.block_index(id).unwrap();
            g.topological_order().iter().position(|&x| x == b).unwrap()
        };
        assert!(pos("l") < pos("join") && pos("r") < pos("join"));
    }

    #[test]
    fn document_round_trip() {
        let g = load_model(&doc(
            r#"[{"id": "sw", "kind": "Switch", "params": {"threshold": 0.25}},
                {"id": "k", "kind": "Constant", "params": {"value": 4}}]"#,
            r#"[{"from": "u", "to": "sw.in1"}, {"from": "u", "to": "sw.in2"},
                {"from": "k", "to": "sw.in3"}, {"from": "sw", "to": "y"}]"#,
        ))
        .unwrap();
        let again = load_model(&g.to_json().unwrap()).unwrap();
        assert_eq!(again.blocks(), g.blocks());
        assert_eq!(again.connections(), g.connections());
        assert_eq!(again.branch_count(), 2);
    }
}

use std::sync::atomic::{AtomicUsize, Ordering};

use super::{simulate, ModelGraph, SimulationTrace};
use crate::error::Result;
use crate::signal::{InputSpec, TestCase};

/// Something that turns a test case into a simulation trace and counts how
/// often it was asked to.
pub trait Simulator: Sync {
    fn specs(&self) -> &[InputSpec];

    /// Size of the branch universe coverage is measured against.
    fn branch_count(&self) -> usize;

    fn run(&self, test: &TestCase) -> Result<SimulationTrace>;

    /// Number of `run` calls so far.
    fn invocations(&self) -> usize;
}

/// Renders test cases against a [`ModelGraph`] and simulates them.
#[derive(Debug)]
pub struct ModelSimulator<'g> {
    graph: &'g ModelGraph,
    calls: AtomicUsize,
}

impl<'g> ModelSimulator<'g> {
    pub fn new(graph: &'g ModelGraph) -> Self {
        Self {
            graph,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn graph(&self) -> &'g ModelGraph {
        self.graph
    }
}

impl Simulator for ModelSimulator<'_> {
    fn specs(&self) -> &[InputSpec] {
        self.graph.inports()
    }

    fn branch_count(&self) -> usize {
        self.graph.branch_count()
    }

    fn run(&self, test: &TestCase) -> Result<SimulationTrace> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let signals =
            test.to_signals(self.graph.inports(), self.graph.duration(), self.graph.dt())?;
        simulate(self.graph, &signals)
    }

    fn invocations(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

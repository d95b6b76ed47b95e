//! Test generation and evaluation for discrete-time block-diagram models.
//!
//! The crate bundles a small fixed-step block-diagram simulator, signal
//! anti-pattern objectives, four test-suite generators (GenClu, Random,
//! EPIcuRus-style range narrowing and output diversity search), a mutation
//! testing engine and Scott-Knott ranking for comparing generators.

pub mod baselines;
pub mod domination;
pub mod error;
pub mod experiment;
pub mod genclu;
pub mod metrics;
pub mod model;
pub mod mutation;
pub mod signal;
pub mod stats;

pub use error::{Error, Result};
pub use model::{load_model, load_model_file, ModelGraph, ModelSimulator, Simulator};
pub use signal::{InputSpec, Signal, TestCase};

/// A list of test cases.
pub type TestSuite = Vec<TestCase>;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use genclu::baselines::{
    epicurus_suite, od_suite, random_suite, EpicurusConfig, OdClock, OdConfig,
};
use genclu::experiment::{
    prepare_mutants, read_records, read_timings, run_experiment, summarize, write_mutants,
    ExperimentConfig,
};
use genclu::genclu::{generate_suite, GenCluConfig, SuiteBudget, SuiteFile};
use genclu::metrics::goal_vector;
use genclu::model::simulate;
use genclu::mutation::{
    enumerate_mutants_with, filter_mutants, mutants_from_json, CountingMode, MutationHarness,
    DEFAULT_PROBES,
};
use genclu::{load_model_file, ModelGraph, ModelSimulator, Simulator, TestCase, TestSuite};

#[derive(Parser)]
#[command(
    name = "genclu",
    version,
    about = "Test generation and mutation scoring for block-diagram models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one test case and print outputs, coverage and anti-pattern goals as JSON.
    Simulate { model: PathBuf, testcase: PathBuf },
    /// Mutant preparation.
    Mutants {
        #[command(subcommand)]
        action: MutantsAction,
    },
    /// Generate a test suite.
    Generate {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "genclu")]
        algo: Algo,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initial samples for genclu.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Narrowing iterations for epicurus.
        #[arg(long, default_value_t = 30)]
        iterations: usize,
        /// Timeout in seconds for od.
        #[arg(long, default_value_t = 600.0)]
        timeout: f64,
        /// Write the suite here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mutation score of a suite.
    Score {
        model: PathBuf,
        suite: PathBuf,
        /// Filtered mutant file; prepared on the fly when absent.
        #[arg(long)]
        mutants: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the kill matrix as CSV.
        #[arg(long)]
        matrix: bool,
    },
    /// Run a full experiment from a JSON config.
    Experiment {
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a records CSV (timings.csv next to it is picked up if present).
    Stats { records: PathBuf },
}

#[derive(Subcommand)]
enum MutantsAction {
    /// Enumerate, probe-filter and write the surviving mutants.
    Prepare {
        model: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PROBES)]
        probes: usize,
        #[arg(long, value_enum, default_value = "all")]
        mode: Mode,
        #[arg(long, default_value = "mutants")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Random,
    Epicurus,
    Od,
    Genclu,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    All,
    Distinct,
}

fn load(path: &Path) -> Result<ModelGraph> {
    load_model_file(path).with_context(|| format!("loading model {}", path.display()))
}

/// Accepts a suite file with a budget record or a bare array of test cases.
fn load_suite(path: &Path) -> Result<TestSuite> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(file) = serde_json::from_str::<SuiteFile>(&text) {
        return Ok(file.suite);
    }
    serde_json::from_str::<TestSuite>(&text)
        .with_context(|| format!("parsing suite {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Simulate { model, testcase } => {
            let graph = load(&model)?;
            let text = fs::read_to_string(&testcase)?;
            let test = TestCase::from_json(&text)?;
            let signals = test.to_signals(graph.inports(), graph.duration(), graph.dt())?;
            let trace = simulate(&graph, &signals)?;
            let outputs: serde_json::Map<_, _> = graph
                .outports()
                .iter()
                .zip(&trace.outputs)
                .map(|(n, s)| (n.clone(), json!(s.values())))
                .collect();
            let goals = goal_vector(&trace).ok().map(|g| g.values().to_vec());
            let doc = json!({
                "outputs": outputs,
                "coverage": trace.coverage.fraction(),
                "goals": goals,
                "fault": trace.fault.as_ref().map(|f| json!({"step": f.step, "block": f.block})),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Mutants {
            action:
                MutantsAction::Prepare {
                    model,
                    seed,
                    probes,
                    mode,
                    out,
                },
        } => {
            let graph = load(&model)?;
            let (mutants, stats) = match mode {
                Mode::All => prepare_mutants(&graph, probes, seed)?,
                Mode::Distinct => {
                    let all = enumerate_mutants_with(&graph, CountingMode::Distinct);
                    let f =
                        filter_mutants(&all, &graph, probes, &mut ChaCha8Rng::seed_from_u64(seed))?;
                    (f.survivors, f.stats)
                }
            };
            write_mutants(&out, graph.name(), &mutants, &stats)?;
            println!("{}: {}", graph.name(), stats.summary());
            if mutants.is_empty() {
                eprintln!("warning: no mutant survived filtering");
            }
        }
        Command::Generate {
            model,
            algo,
            size,
            seed,
            samples,
            iterations,
            timeout,
            out,
        } => {
            let graph = load(&model)?;
            let sim = ModelSimulator::new(&graph);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (suite, leaves) = match algo {
                Algo::Random => (random_suite(sim.specs(), size, &mut rng)?, 0),
                Algo::Genclu => {
                    let cfg = GenCluConfig {
                        initial_samples: samples,
                        enough: size,
                        seed,
                    };
                    let o = generate_suite(&sim, &cfg, &mut rng)?;
                    (o.suite, o.report.leaves)
                }
                Algo::Epicurus => {
                    let cfg = EpicurusConfig {
                        k: size,
                        iterations,
                        ..EpicurusConfig::default()
                    };
                    (epicurus_suite(&sim, &cfg, &mut rng)?.suite, 0)
                }
                Algo::Od => {
                    let cfg = OdConfig {
                        k: size,
                        timeout_secs: timeout,
                        clock: OdClock::Wall,
                        max_iterations: None,
                    };
                    (od_suite(&sim, &cfg, &mut rng)?.suite, 0)
                }
            };
            let file = SuiteFile {
                suite,
                budget: SuiteBudget {
                    simulations: sim.invocations(),
                    leaves,
                    seed,
                },
            };
            emit(out.as_deref(), &serde_json::to_string_pretty(&file)?)?;
        }
        Command::Score {
            model,
            suite,
            mutants,
            seed,
            matrix,
        } => {
            let graph = load(&model)?;
            let suite = load_suite(&suite)?;
            let mutants = match mutants {
                Some(p) => mutants_from_json(&fs::read_to_string(&p)?, graph.name())?,
                None => prepare_mutants(&graph, DEFAULT_PROBES, seed)?.0,
            };
            if mutants.is_empty() {
                bail!("no mutants to score against");
            }
            let harness = MutationHarness::new(&graph, &mutants)?;
            let km = harness.kill_matrix(&suite)?;
            let score = km.killed_count() as f64 / mutants.len() as f64;
            println!(
                "mutation score {score} ({} of {} mutants killed)",
                km.killed_count(),
                mutants.len()
            );
            if matrix {
                print!("{}", km.to_csv()?);
            }
        }
        Command::Experiment { config, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(out) = out {
                cfg.output_dir = std::env::current_dir()?.join(out);
            }
            let base = config.parent().unwrap_or(Path::new("."));
            let report = run_experiment(&cfg, base)?;
            for f in &report.failures {
                eprintln!("failure: {f}");
            }
            println!("{}", report.summary);
        }
        Command::Stats { records } => {
            let recs = read_records(&records)?;
            let timings_path = records.with_file_name("timings.csv");
            let timings = if timings_path.exists() {
                Some(read_timings(&timings_path)?)
            } else {
                None
            };
            print!("{}", summarize(&recs, timings.as_deref(), &[], &[])?);
        }
    }
    Ok(())
}

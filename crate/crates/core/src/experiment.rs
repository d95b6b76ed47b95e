//! Batch experiments: models x generators x suite sizes x repeats, scored
//! against probe-filtered mutants and summarized with Scott-Knott ranks.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{epicurus_suite, od_suite, random_suite, EpicurusConfig, OdClock, OdConfig};
use crate::error::{Error, Result};
use crate::genclu::{generate_suite, GenCluConfig};
use crate::model::{load_model_file, ModelGraph, ModelSimulator, Simulator};
use crate::mutation::{
    enumerate_mutants, filter_mutants, mutants_to_json, FilterStats, Mutant, MutationHarness,
    DEFAULT_PROBES,
};
use crate::stats::{iqr, median, scott_knott};
use crate::TestSuite;

/// Environment variable overriding the worker-pool size.
pub const WORKERS_ENV: &str = "GENCLU_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Random,
    Epicurus,
    Od,
    Genclu,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Random => "random",
            Generator::Epicurus => "epicurus",
            Generator::Od => "od",
            Generator::Genclu => "genclu",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Generator::Random),
            "epicurus" => Ok(Generator::Epicurus),
            "od" => Ok(Generator::Od),
            "genclu" => Ok(Generator::Genclu),
            other => Err(Error::Config(format!("unknown generator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GencluParams {
    pub initial_samples: usize,
}

impl Default for GencluParams {
    fn default() -> Self {
        Self {
            initial_samples: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EpicurusParams {
    pub iterations: usize,
    pub min_leaf: usize,
    pub final_suites: usize,
}

impl Default for EpicurusParams {
    fn default() -> Self {
        let d = EpicurusConfig::default();
        Self {
            iterations: d.iterations,
            min_leaf: d.min_leaf,
            final_suites: d.final_suites,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OdParams {
    pub timeout_secs: f64,
    /// Multiplies `timeout_secs`.
    pub timeout_scale: f64,
    pub clock: OdClock,
    pub max_iterations: Option<usize>,
}

impl Default for OdParams {
    fn default() -> Self {
        Self {
            timeout_secs: 600.0,
            timeout_scale: 1.0,
            clock: OdClock::PerSimulation(5.0),
            max_iterations: None,
        }
    }
}

fn default_sizes() -> Vec<usize> {
    vec![4, 16, 32]
}

fn default_repeats() -> usize {
    20
}

fn default_probes() -> usize {
    DEFAULT_PROBES
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Model files; relative paths resolve against the config file's directory.
    pub models: Vec<PathBuf>,
    pub generators: Vec<Generator>,
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_probes")]
    pub probes: usize,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub genclu: GencluParams,
    #[serde(default)]
    pub epicurus: EpicurusParams,
    #[serde(default)]
    pub od: OdParams,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::Config("no models listed".into()));
        }
        if self.generators.is_empty() {
            return Err(Error::Config("no generators listed".into()));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::Config("suite sizes must be positive".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if self.probes == 0 {
            return Err(Error::Config("probes must be at least 1".into()));
        }
        if !(self.od.timeout_secs >= 0.0 && self.od.timeout_scale >= 0.0) {
            return Err(Error::Config(
                "OD timeout and scale must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Seed of one work item, derived from the master seed by SHA-256.
pub fn repeat_seed(master: u64, model: &str, generator: &str, size: usize, repeat: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(model.as_bytes());
    h.update([0u8]);
    h.update(generator.as_bytes());
    h.update([0u8]);
    h.update((size as u64).to_le_bytes());
    h.update((repeat as u64).to_le_bytes());
    let digest = h.finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(head)
}

/// One (model, generator, size, repeat) result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub model: String,
    pub generator: Generator,
    pub suite_size: usize,
    pub repeat: usize,
    pub seed: u64,
    pub mutation_score: f64,
    pub generation_simulations: usize,
    pub scoring_simulations: usize,
    pub simulations: usize,
}

/// Wall-clock seconds of one record, kept apart so `records.csv` stays
/// reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub model: String,
    pub generator: Generator,
    pub suite_size: usize,
    pub repeat: usize,
    pub generation_secs: f64,
    pub scoring_secs: f64,
    pub total_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMutants {
    pub model: String,
    pub stats: FilterStats,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub records: Vec<ExperimentRecord>,
    pub timings: Vec<TimingRecord>,
    pub mutants: Vec<ModelMutants>,
    /// Per-model or per-record failures; the run carries on past them.
    pub failures: Vec<String>,
    /// Skipped combinations, e.g. output diversity on all-constant models.
    pub notes: Vec<String>,
    pub summary: String,
}

/// Enumerates and probe-filters a model's mutants.
pub fn prepare_mutants(
    graph: &ModelGraph,
    probes: usize,
    seed: u64,
) -> Result<(Vec<Mutant>, FilterStats)> {
    let all = enumerate_mutants(graph);
    if all.is_empty() {
        return Err(Error::Contract(format!(
            "model `{}` has no mutable blocks",
            graph.name()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = filter_mutants(&all, graph, probes, &mut rng)?;
    Ok((out.survivors, out.stats))
}

/// Writes `<dir>/<model>.json`, `<dir>/<model>.stats.json` and, when
/// nothing survived, `<dir>/<model>.warning.txt`.
pub fn write_mutants(
    dir: &Path,
    model: &str,
    mutants: &[Mutant],
    stats: &FilterStats,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |name: String, text: String| {
        let p = dir.join(name);
        fs::write(&p, text).map_err(|e| Error::io(&p, e))
    };
    write(format!("{model}.json"), mutants_to_json(mutants)?)?;
    write(
        format!("{model}.stats.json"),
        serde_json::to_string_pretty(stats)?,
    )?;
    if mutants.is_empty() {
        write(
            format!("{model}.warning.txt"),
            format!(
                "no mutant of `{model}` survived filtering with {} probes; the model is excluded from scoring\n",
                stats.probes
            ),
        )?;
    }
    Ok(())
}

struct Generated {
    /// Every suite to score; the reported score is their median.
    suites: Vec<TestSuite>,
    simulations: usize,
}

fn generate(
    graph: &ModelGraph,
    generator: Generator,
    size: usize,
    seed: u64,
    config: &ExperimentConfig,
) -> Result<Generated> {
    let sim = ModelSimulator::new(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = match generator {
        Generator::Random => vec![random_suite(sim.specs(), size, &mut rng)?],
        Generator::Genclu => {
            let cfg = GenCluConfig {
                initial_samples: config.genclu.initial_samples,
                enough: size,
                seed,
            };
            vec![generate_suite(&sim, &cfg, &mut rng)?.suite]
        }
        Generator::Epicurus => {
            let cfg = EpicurusConfig {
                k: size,
                iterations: config.epicurus.iterations,
                min_leaf: config.epicurus.min_leaf,
                final_suites: config.epicurus.final_suites,
            };
            epicurus_suite(&sim, &cfg, &mut rng)?.final_suites
        }
        Generator::Od => {
            let cfg = OdConfig {
                k: size,
                timeout_secs: config.od.timeout_secs * config.od.timeout_scale,
                clock: config.od.clock,
                max_iterations: config.od.max_iterations,
            };
            vec![od_suite(&sim, &cfg, &mut rng)?.suite]
        }
    };
    Ok(Generated {
        suites,
        simulations: sim.invocations(),
    })
}

struct Job<'a> {
    model: &'a str,
    graph: &'a ModelGraph,
    mutants: &'a [Mutant],
    generator: Generator,
    size: usize,
    repeat: usize,
}

fn run_job(job: &Job<'_>, config: &ExperimentConfig) -> Result<(ExperimentRecord, TimingRecord)> {
    let seed = repeat_seed(
        config.seed,
        job.model,
        job.generator.name(),
        job.size,
        job.repeat,
    );
    let t0 = Instant::now();
    let generated = generate(job.graph, job.generator, job.size, seed, config)?;
    let generation_secs = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let harness = MutationHarness::new(job.graph, job.mutants)?;
    let scores = generated
        .suites
        .iter()
        .map(|s| harness.score(s))
        .collect::<Result<Vec<_>>>()?;
    let mutation_score = median(&scores)?;
    let scoring_secs = t1.elapsed().as_secs_f64();
    let scoring_simulations = harness.simulations();

    Ok((
        ExperimentRecord {
            model: job.model.to_string(),
            generator: job.generator,
            suite_size: job.size,
            repeat: job.repeat,
            seed,
            mutation_score,
            generation_simulations: generated.simulations,
            scoring_simulations,
            simulations: generated.simulations + scoring_simulations,
        },
        TimingRecord {
            model: job.model.to_string(),
            generator: job.generator,
            suite_size: job.size,
            repeat: job.repeat,
            generation_secs,
            scoring_secs,
            total_secs: generation_secs + scoring_secs,
        },
    ))
}

fn worker_pool(config: &ExperimentConfig) -> Result<rayon::ThreadPool> {
    let from_env = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let n = from_env.or(config.workers).unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))
}

/// Runs every record of the experiment and writes `records.csv`,
/// `timings.csv`, `summary.md` and `mutants/` under the output directory.
///
/// Relative model paths and output directories resolve against `base`.
pub fn run_experiment(config: &ExperimentConfig, base: &Path) -> Result<ExperimentReport> {
    config.validate()?;
    let out_dir = base.join(&config.output_dir);
    let mutant_dir = out_dir.join("mutants");
    fs::create_dir_all(&mutant_dir).map_err(|e| Error::io(&mutant_dir, e))?;
    let mut report = ExperimentReport::default();

    let mut prepared: Vec<(String, ModelGraph, Vec<Mutant>)> = Vec::new();
    for path in &config.models {
        let path = base.join(path);
        let graph = match load_model_file(&path) {
            Ok(g) => g,
            Err(e) => {
                log::error!("{e}");
                report.failures.push(format!("{}: {e}", path.display()));
                continue;
            }
        };
        let name = graph.name().to_string();
        let seed = repeat_seed(config.seed, &name, "mutants", 0, 0);
        match prepare_mutants(&graph, config.probes, seed) {
            Ok((mutants, stats)) => {
                write_mutants(&mutant_dir, &name, &mutants, &stats)?;
                log::info!("{name}: mutants {}", stats.summary());
                report.mutants.push(ModelMutants {
                    model: name.clone(),
                    stats,
                });
                if mutants.is_empty() {
                    report
                        .failures
                        .push(format!("{name}: no mutant survived filtering"));
                } else {
                    prepared.push((name, graph, mutants));
                }
            }
            Err(e) => report.failures.push(format!("{name}: {e}")),
        }
    }

    let mut jobs = Vec::new();
    for (name, graph, mutants) in &prepared {
        let all_constant = !graph.inports().iter().any(|s| s.is_time_varying());
        for &generator in &config.generators {
            if generator == Generator::Od && all_constant {
                let note = format!("{name}: od skipped, every input is constant");
                log::info!("{note}");
                report.notes.push(note);
                continue;
            }
            for &size in &config.sizes {
                for repeat in 0..config.repeats {
                    jobs.push(Job {
                        model: name,
                        graph,
                        mutants,
                        generator,
                        size,
                        repeat,
                    });
                }
            }
        }
    }

    let pool = worker_pool(config)?;
    let results: Vec<Result<(ExperimentRecord, TimingRecord)>> =
        pool.install(|| jobs.par_iter().map(|j| run_job(j, config)).collect());
    for (job, result) in jobs.iter().zip(results) {
        match result {
            Ok((r, t)) => {
                report.records.push(r);
                report.timings.push(t);
            }
            Err(e) => report.failures.push(format!(
                "{} {} size {} repeat {}: {e}",
                job.model,
                job.generator.name(),
                job.size,
                job.repeat
            )),
        }
    }

    write_csv(&out_dir.join("records.csv"), &report.records)?;
    write_csv(&out_dir.join("timings.csv"), &report.timings)?;
    report.summary = summarize(
        &report.records,
        Some(&report.timings),
        &report.mutants,
        &report.notes,
    )?;
    let summary_path = out_dir.join("summary.md");
    fs::write(&summary_path, &report.summary).map_err(|e| Error::io(&summary_path, e))?;
    if !report.failures.is_empty() {
        let p = out_dir.join("failures.txt");
        fs::write(&p, report.failures.join("\n") + "\n").map_err(|e| Error::io(&p, e))?;
    }
    Ok(report)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()?)
}

pub fn read_timings(path: &Path) -> Result<Vec<TimingRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()?)
}

type CellKey = (String, usize);

/// Markdown report: filtered mutants, per (model, size) median/IQR/rank
/// tables, GenClu speedups and rank-1 wins.
pub fn summarize(
    records: &[ExperimentRecord],
    timings: Option<&[TimingRecord]>,
    mutants: &[ModelMutants],
    notes: &[String],
) -> Result<String> {
    let mut cells: BTreeMap<CellKey, BTreeMap<Generator, Vec<&ExperimentRecord>>> = BTreeMap::new();
    for r in records {
        cells
            .entry((r.model.clone(), r.suite_size))
            .or_default()
            .entry(r.generator)
            .or_default()
            .push(r);
    }
    let mut times: BTreeMap<(String, usize, Generator), Vec<f64>> = BTreeMap::new();
    for t in timings.unwrap_or(&[]) {
        times
            .entry((t.model.clone(), t.suite_size, t.generator))
            .or_default()
            .push(t.total_secs);
    }

    let mut md = String::from("# Experiment summary\n\n");
    if !mutants.is_empty() {
        md.push_str("## Mutants\n\n| model | original | filtered | kept |\n|---|---|---|---|\n");
        for m in mutants {
            let _ = writeln!(
                md,
                "| {} | {} | {} | {:.1}% |",
                m.model,
                m.stats.original,
                m.stats.filtered,
                100.0 * m.stats.fraction
            );
        }
        md.push('\n');
    }

    md.push_str("## Mutation score\n\n");
    let mut wins: BTreeMap<Generator, usize> = BTreeMap::new();
    let mut speedups = String::new();
    for ((model, size), by_gen) in &cells {
        let groups: Vec<(String, Vec<f64>)> = by_gen
            .iter()
            .map(|(g, rs)| {
                (
                    g.name().to_string(),
                    rs.iter().map(|r| r.mutation_score).collect(),
                )
            })
            .collect();
        let ranked = scott_knott(&groups, true)?;
        let _ = writeln!(md, "### {model}, suite size {size}\n");
        md.push_str("| generator | median | IQR | rank | median simulations | median time (s) |\n");
        md.push_str("|---|---|---|---|---|---|\n");
        for g in &ranked.groups {
            let generator = Generator::parse(&g.name)?;
            let sims: Vec<f64> = by_gen[&generator]
                .iter()
                .map(|r| r.simulations as f64)
                .collect();
            let time = times
                .get(&(model.clone(), *size, generator))
                .map(|t| median(t))
                .transpose()?
                .map_or_else(|| "-".to_string(), |t| format!("{t:.3}"));
            let _ = writeln!(
                md,
                "| {} | {:.4} | {:.4} | {} | {} | {} |",
                g.name,
                g.median,
                g.iqr,
                g.rank,
                median(&sims)?,
                time
            );
            if g.rank == 1 {
                *wins.entry(generator).or_default() += 1;
            }
        }
        md.push('\n');

        if let Some(gc) = by_gen.get(&Generator::Genclu) {
            let gc_sims = median(&gc.iter().map(|r| r.simulations as f64).collect::<Vec<_>>())?;
            let gc_time = times
                .get(&(model.clone(), *size, Generator::Genclu))
                .map(|t| median(t))
                .transpose()?;
            for (other, rs) in by_gen {
                if *other == Generator::Genclu {
                    continue;
                }
                let sims = median(&rs.iter().map(|r| r.simulations as f64).collect::<Vec<_>>())?;
                let time = match (gc_time, times.get(&(model.clone(), *size, *other))) {
                    (Some(g), Some(t)) if g > 0.0 => format!("{:.2}", median(t)? / g),
                    _ => "-".to_string(),
                };
                let _ = writeln!(
                    speedups,
                    "| {model} | {size} | {} | {time} | {:.2} |",
                    other.name(),
                    sims / gc_sims
                );
            }
        }
    }

    if !speedups.is_empty() {
        md.push_str(
            "## GenClu speedup\n\nRatios of the other generator's median cost to GenClu's.\n\n",
        );
        md.push_str(
            "| model | size | versus | time ratio | simulation ratio |\n|---|---|---|---|---|\n",
        );
        md.push_str(&speedups);
        md.push('\n');
    }
    if !wins.is_empty() {
        md.push_str("## Rank-1 cells\n\n| generator | cells |\n|---|---|\n");
        for (g, n) in &wins {
            let _ = writeln!(md, "| {} | {n} |", g.name());
        }
        md.push('\n');
    }
    if !notes.is_empty() {
        md.push_str("## Notes\n\n");
        for n in notes {
            let _ = writeln!(md, "- {n}");
        }
        md.push('\n');
    }
    Ok(md)
}

/// Median and IQR of one generator's scores in one (model, size) cell.
pub fn cell_summary(
    records: &[ExperimentRecord],
    model: &str,
    generator: Generator,
    size: usize,
) -> Option<(f64, f64)> {
    let scores: Vec<f64> = records
        .iter()
        .filter(|r| r.model == model && r.generator == generator && r.suite_size == size)
        .map(|r| r.mutation_score)
        .collect();
    Some((median(&scores).ok()?, iqr(&scores).ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_per_coordinate() {
        let a = repeat_seed(1, "m", "genclu", 4, 0);
        assert_eq!(a, repeat_seed(1, "m", "genclu", 4, 0));
        assert_ne!(a, repeat_seed(1, "m", "genclu", 4, 1));
        assert_ne!(a, repeat_seed(1, "m", "random", 4, 0));
        assert_ne!(a, repeat_seed(2, "m", "genclu", 4, 0));
        assert_ne!(a, repeat_seed(1, "m", "genclu", 16, 0));
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = ExperimentConfig::from_json(
            r#"{"models": ["a.json"], "generators": ["random", "od"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.sizes, vec![4, 16, 32]);
        assert_eq!(cfg.repeats, 20);
        assert_eq!(cfg.probes, 200);
        assert_eq!(cfg.od.timeout_secs, 600.0);
        assert!(
            ExperimentConfig::from_json(r#"{"models": [], "generators": ["random"]}"#).is_err()
        );
        assert!(ExperimentConfig::from_json(r#"{"models": ["a"], "generators": []}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"models": ["a"], "generators": ["x"]}"#).is_err());
        assert!(ExperimentConfig::from_json(
            r#"{"models": ["a"], "generators": ["od"], "repeats": 0}"#
        )
        .is_err());
        let cfg = ExperimentConfig::from_json(
            r#"{"models": ["a"], "generators": ["od"], "od": {"timeout_scale": 0.05, "clock": "wall"}}"#,
        )
        .unwrap();
        assert_eq!(cfg.od.clock, OdClock::Wall);
        assert_eq!(cfg.od.timeout_scale, 0.05);
    }

    fn rec(generator: Generator, repeat: usize, score: f64) -> ExperimentRecord {
        ExperimentRecord {
            model: "m".into(),
            generator,
            suite_size: 4,
            repeat,
            seed: 0,
            mutation_score: score,
            generation_simulations: 10,
            scoring_simulations: 5,
            simulations: 15,
        }
    }

    #[test]
    fn summary_lists_medians_and_ranks() {
        let mut records = Vec::new();
        for (i, s) in [0.9, 1.0, 0.95].iter().enumerate() {
            records.push(rec(Generator::Genclu, i, *s));
        }
        for (i, s) in [0.2, 0.3, 0.1].iter().enumerate() {
            records.push(rec(Generator::Random, i, *s));
        }
        let md = summarize(&records, None, &[], &[]).unwrap();
        assert!(
            md.contains("| genclu | 0.9500 | 0.0500 | 1 | 15 | - |"),
            "{md}"
        );
        assert!(
            md.contains("| random | 0.2000 | 0.1000 | 2 | 15 | - |"),
            "{md}"
        );
        assert!(md.contains("| m | 4 | random | - | 1.00 |"), "{md}");
        let (m, q) = cell_summary(&records, "m", Generator::Random, 4).unwrap();
        assert_eq!(m, 0.2);
        assert!((q - 0.1).abs() < 1e-12);
    }
}

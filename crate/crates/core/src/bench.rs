//! Experiment harness: multi-seed runs over instance sets, checkpointed
//! medians, first-feasible statistics, and CSV/JSON report emission.

use crate::instance_io::{gap_percent, BksRegistry};
use crate::model::Instance;
use crate::tabu::{search, ClockMode, ConvergenceTrace, SearchConfig, SearchError, Variant};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use thiserror::Error;

/// Checkpoint times of the aggregate table, seconds.
pub const CHECKPOINTS_SEC: [u64; 6] = [1, 2, 5, 15, 30, 60];

/// Harness configuration shared by every run of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub variants: Vec<Variant>,
    pub replicates: usize,
    pub time_limit_ms: u64,
    /// Replicate `i` of every (instance, variant) cell runs with seed
    /// `seed_base + i`.
    pub seed_base: u64,
    pub workers: usize,
    pub clock: ClockMode,
}

impl BenchConfig {
    pub fn new(variants: Vec<Variant>, replicates: usize, time_limit_ms: u64, seed_base: u64) -> Self {
        BenchConfig {
            variants,
            replicates,
            time_limit_ms,
            seed_base,
            workers: 1,
            clock: ClockMode::work(),
        }
    }

    fn checkpoints(&self) -> Vec<u64> {
        CHECKPOINTS_SEC
            .iter()
            .copied()
            .filter(|&s| s * 1000 <= self.time_limit_ms)
            .collect()
    }
}

/// Result of one (instance, variant, seed) search.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub instance: String,
    pub variant: Variant,
    pub seed: u64,
    /// `(seconds, best feasible cost at that time)` per checkpoint.
    pub checkpoints: Vec<(u64, Option<f64>)>,
    /// Gap per checkpoint when the registry knows the instance.
    pub gaps: Vec<(u64, Option<f64>)>,
    pub first_feasible: Option<(f64, u64)>,
    pub final_best: Option<f64>,
    pub trace: ConvergenceTrace,
}

/// Median-over-replicates summary of one (instance, variant) cell.
#[derive(Debug, Clone)]
pub struct AggregateReport {
    pub instance: String,
    pub variant: Variant,
    pub bks: Option<f64>,
    pub median_checkpoints: Vec<(u64, Option<f64>)>,
    pub median_gaps: Vec<(u64, Option<f64>)>,
    pub median_first_cost: Option<f64>,
    pub median_first_time_ms: Option<u64>,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("experiment needs at least one instance, one variant, one replicate")]
    EmptyExperiment,
    #[error("search failed on {instance}: {source}")]
    Search {
        instance: String,
        source: SearchError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Median of costs where `None` means "no feasible solution" and sorts last.
/// Even counts average the two middle values; the cell stays empty if either
/// middle replicate had no feasible solution.
pub fn median_cost(values: &[Option<f64>]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<Option<f64>> = values.to_vec();
    sorted.sort_by(|a, b| match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        match (sorted[n / 2 - 1], sorted[n / 2]) {
            (Some(a), Some(b)) => Some((a + b) / 2.0),
            _ => None,
        }
    }
}

fn median_time(values: &[Option<u64>]) -> Option<u64> {
    let as_costs: Vec<Option<f64>> = values.iter().map(|v| v.map(|t| t as f64)).collect();
    median_cost(&as_costs).map(|t| t as u64)
}

fn run_one(
    instance: &Instance,
    variant: Variant,
    seed: u64,
    config: &BenchConfig,
    registry: &BksRegistry,
) -> Result<RunReport, BenchError> {
    let mut sc = SearchConfig::new(variant, config.time_limit_ms, seed);
    sc.clock = config.clock;
    let outcome = search(instance, &sc).map_err(|source| BenchError::Search {
        instance: instance.name.clone(),
        source,
    })?;
    let bks = registry.get(&instance.name);
    let checkpoints: Vec<(u64, Option<f64>)> = config
        .checkpoints()
        .iter()
        .map(|&s| (s, outcome.trace.best_at(s * 1000)))
        .collect();
    let gaps = checkpoints
        .iter()
        .map(|&(s, cost)| {
            let g = match (cost, bks) {
                (Some(c), Some(b)) => gap_percent(c, b).ok(),
                _ => None,
            };
            (s, g)
        })
        .collect();
    Ok(RunReport {
        instance: instance.name.clone(),
        variant,
        seed,
        checkpoints,
        gaps,
        first_feasible: outcome.trace.first_feasible,
        final_best: outcome.best_cost,
        trace: outcome.trace,
    })
}

/// Runs `replicates x variants x instances` searches (optionally on worker
/// threads) and aggregates medians per (instance, variant) cell. Runs are
/// returned sorted by (instance, variant, seed); the output is a pure
/// function of the inputs when the work clock is used.
pub fn run_experiment(
    instances: &[Instance],
    config: &BenchConfig,
    registry: &BksRegistry,
) -> Result<(Vec<RunReport>, Vec<AggregateReport>), BenchError> {
    if instances.is_empty() || config.variants.is_empty() || config.replicates == 0 {
        return Err(BenchError::EmptyExperiment);
    }
    let mut jobs = Vec::new();
    for instance in instances {
        for &variant in &config.variants {
            for r in 0..config.replicates {
                jobs.push((instance, variant, config.seed_base + r as u64));
            }
        }
    }

    let workers = config.workers.max(1).min(jobs.len());
    let results: Vec<Option<Result<RunReport, BenchError>>> = {
        let slots: Mutex<Vec<Option<Result<RunReport, BenchError>>>> =
            Mutex::new((0..jobs.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= jobs.len() {
                        break;
                    }
                    let (instance, variant, seed) = jobs[idx];
                    let report = run_one(instance, variant, seed, config, registry);
                    slots.lock().unwrap()[idx] = Some(report);
                });
            }
        });
        slots.into_inner().unwrap()
    };

    let mut runs = Vec::with_capacity(jobs.len());
    for report in results {
        runs.push(report.expect("every job ran")?);
    }
    runs.sort_by(|a, b| {
        (a.instance.as_str(), a.variant.label(), a.seed).cmp(&(
            b.instance.as_str(),
            b.variant.label(),
            b.seed,
        ))
    });

    let mut aggregates = Vec::new();
    for instance in instances {
        for &variant in &config.variants {
            let cell: Vec<&RunReport> = runs
                .iter()
                .filter(|r| r.instance == instance.name && r.variant == variant)
                .collect();
            let checkpoints = config.checkpoints();
            let mut median_checkpoints = Vec::new();
            let mut median_gaps = Vec::new();
            let bks = registry.get(&instance.name);
            for (i, &s) in checkpoints.iter().enumerate() {
                let costs: Vec<Option<f64>> = cell.iter().map(|r| r.checkpoints[i].1).collect();
                let med = median_cost(&costs);
                median_checkpoints.push((s, med));
                let gap = match (med, bks) {
                    (Some(c), Some(b)) => gap_percent(c, b).ok(),
                    _ => None,
                };
                median_gaps.push((s, gap));
            }
            let first_costs: Vec<Option<f64>> =
                cell.iter().map(|r| r.first_feasible.map(|(c, _)| c)).collect();
            let first_times: Vec<Option<u64>> =
                cell.iter().map(|r| r.first_feasible.map(|(_, t)| t)).collect();
            aggregates.push(AggregateReport {
                instance: instance.name.clone(),
                variant,
                bks,
                median_checkpoints,
                median_gaps,
                median_first_cost: median_cost(&first_costs),
                median_first_time_ms: median_time(&first_times),
            });
        }
    }
    aggregates.sort_by(|a, b| {
        (a.instance.as_str(), a.variant.label()).cmp(&(b.instance.as_str(), b.variant.label()))
    });
    Ok((runs, aggregates))
}

fn fmt_opt_cost(v: Option<f64>) -> String {
    v.map_or(String::new(), |c| format!("{c:.2}"))
}

/// Per-run improvement events, one row per trace event.
pub fn traces_csv(runs: &[RunReport]) -> String {
    let mut out = String::from("instance,variant,seed,elapsed_ms,best_cost,feasible\n");
    for run in runs {
        for event in &run.trace.events {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                run.instance,
                run.variant.label(),
                run.seed,
                event.elapsed_ms,
                event.best_cost,
                event.feasible
            );
        }
    }
    out
}

/// Aggregate checkpoint table: median best cost and gap per checkpoint.
pub fn checkpoints_csv(aggregates: &[AggregateReport], checkpoints: &[u64]) -> String {
    let mut out = String::from("instance,variant,bks");
    for s in checkpoints {
        let _ = write!(out, ",cost_{s}s");
    }
    for s in checkpoints {
        let _ = write!(out, ",gap_{s}s");
    }
    out.push('\n');
    for agg in aggregates {
        let _ = write!(
            out,
            "{},{},{}",
            agg.instance,
            agg.variant.label(),
            fmt_opt_cost(agg.bks)
        );
        for &(_, c) in &agg.median_checkpoints {
            let _ = write!(out, ",{}", fmt_opt_cost(c));
        }
        for &(_, g) in &agg.median_gaps {
            let _ = write!(out, ",{}", fmt_opt_cost(g));
        }
        out.push('\n');
    }
    out
}

/// First-feasible table: median cost, gap, and time per cell.
pub fn first_feasible_csv(aggregates: &[AggregateReport]) -> String {
    let mut out = String::from("instance,variant,bks,median_cost,median_gap,median_time_ms\n");
    for agg in aggregates {
        let gap = match (agg.median_first_cost, agg.bks) {
            (Some(c), Some(b)) => gap_percent(c, b).ok(),
            _ => None,
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            agg.instance,
            agg.variant.label(),
            fmt_opt_cost(agg.bks),
            fmt_opt_cost(agg.median_first_cost),
            fmt_opt_cost(gap),
            agg.median_first_time_ms
                .map_or(String::new(), |t| t.to_string())
        );
    }
    out
}

#[derive(Debug, Serialize)]
struct ConfigSummary {
    instances: Vec<String>,
    variants: Vec<String>,
    replicates: usize,
    time_limit_ms: u64,
    seed_base: u64,
    workers: usize,
    clock: String,
    checkpoints_sec: Vec<u64>,
}

/// Writes trace, checkpoint, and first-feasible CSVs plus a JSON summary of
/// the full configuration into `out_dir`. Returns the written paths.
pub fn emit_reports(
    runs: &[RunReport],
    aggregates: &[AggregateReport],
    config: &BenchConfig,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, BenchError> {
    std::fs::create_dir_all(out_dir)?;
    let checkpoints = config.checkpoints();
    let instances: Vec<String> = runs
        .iter()
        .map(|r| r.instance.clone())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let summary = ConfigSummary {
        instances,
        variants: config.variants.iter().map(|v| v.label().to_string()).collect(),
        replicates: config.replicates,
        time_limit_ms: config.time_limit_ms,
        seed_base: config.seed_base,
        workers: config.workers,
        clock: match config.clock {
            ClockMode::Wall => "wall".to_string(),
            ClockMode::Work { units_per_ms } => format!("work:{units_per_ms}"),
        },
        checkpoints_sec: checkpoints.clone(),
    };
    let files = [
        ("traces.csv", traces_csv(runs)),
        ("checkpoints.csv", checkpoints_csv(aggregates, &checkpoints)),
        ("first_feasible.csv", first_feasible_csv(aggregates)),
        (
            "config.json",
            serde_json::to_string_pretty(&summary).expect("serializable summary") + "\n",
        ),
    ];
    let mut written = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, content)?;
        written.push(path);
    }
    Ok(written)
}

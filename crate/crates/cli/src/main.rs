//! `darp` — solve benchmark instances, run multi-seed experiments, generate
//! test instances, and exact-solve tiny ones.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use darp_core::bench::{emit_reports, run_experiment, BenchConfig};
use darp_core::instance_io::{gap_percent, parse_instance, serialize_instance, BksRegistry};
use darp_core::instgen::{generate, GenParams};
use darp_core::model::Instance;
use darp_core::oracle::{exact_solve, ExactOutcome};
use darp_core::tabu::{search, ClockMode, SearchConfig, Variant, DEFAULT_WORK_UNITS_PER_MS};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "darp", version, about = "Dial-a-ride tabu search solver and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClockArg {
    /// Real elapsed time.
    Wall,
    /// Deterministic virtual time derived from evaluator work.
    Work,
}

impl ClockArg {
    fn to_mode(self) -> ClockMode {
        match self {
            ClockArg::Wall => ClockMode::Wall,
            ClockArg::Work => ClockMode::Work {
                units_per_ms: DEFAULT_WORK_UNITS_PER_MS,
            },
        }
    }
}

#[derive(Args)]
struct BksArgs {
    /// Best-known-solution file (`name cost` lines) overriding the built-in
    /// registry. Also settable via DARP_BKS.
    #[arg(long)]
    bks: Option<PathBuf>,
}

impl BksArgs {
    fn registry(&self) -> Result<BksRegistry> {
        let mut registry = BksRegistry::builtin();
        let path = self
            .bks
            .clone()
            .or_else(|| std::env::var_os("DARP_BKS").map(PathBuf::from));
        if let Some(path) = path {
            let overrides = BksRegistry::from_file(&path)
                .with_context(|| format!("reading BKS file {}", path.display()))?;
            registry = registry.merged_with(&overrides);
        }
        Ok(registry)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one search on one instance and print the outcome.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        variant: Variant,
        /// Enable the greedy construction heuristic (implied by `its`).
        #[arg(long)]
        ch: bool,
        /// Enable time-window tightening (implied by `its`).
        #[arg(long)]
        tw: bool,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60)]
        time_limit: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ClockArg::Wall)]
        clock: ClockArg,
        #[command(flatten)]
        bks: BksArgs,
    },
    /// Run replicated searches over an instance directory and write CSV
    /// reports.
    Bench {
        /// Directory of instance files.
        #[arg(long)]
        instances: PathBuf,
        /// Comma-separated variant labels (ts11..ts32, its).
        #[arg(long, value_delimiter = ',', required = true)]
        variants: Vec<Variant>,
        #[arg(long, default_value_t = 5)]
        replicates: usize,
        /// Time budget per search, seconds.
        #[arg(long, default_value_t = 60)]
        time_limit: u64,
        /// Base seed; replicate i runs with seeds + i.
        #[arg(long, default_value_t = 0)]
        seeds: u64,
        /// Output directory for the CSV reports.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = ClockArg::Work)]
        clock: ClockArg,
        #[command(flatten)]
        bks: BksArgs,
    },
    /// Exhaustively solve a tiny instance (at most 5 requests).
    Oracle {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Generate a random benchmark-like instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; the instance name is its file stem.
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_instance(path: &Path) -> Result<Instance> {
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("instance")
        .to_string();
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading instance {}", path.display()))?;
    parse_instance(&name, &text).with_context(|| format!("parsing {}", path.display()))
}

fn load_instance_dir(dir: &Path) -> Result<Vec<Instance>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading instance directory {}", dir.display()))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no instance files in {}", dir.display());
    }
    paths.iter().map(|p| load_instance(p)).collect()
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve {
            instance,
            variant,
            ch,
            tw,
            time_limit,
            seed,
            clock,
            bks,
        } => {
            let inst = load_instance(&instance)?;
            let registry = bks.registry()?;
            let mut config = SearchConfig::new(variant, time_limit * 1000, seed);
            config.use_construction_heuristic |= ch;
            config.use_time_window_adjustment |= tw;
            config.clock = clock.to_mode();
            let outcome = search(&inst, &config).context("search failed")?;
            println!(
                "instance {} ({} requests, {} vehicles), variant {}{}{}, seed {seed}",
                inst.name,
                inst.n_requests,
                inst.n_vehicles,
                variant,
                if config.use_construction_heuristic && !variant.accelerated() {
                    "+CH"
                } else {
                    ""
                },
                if config.use_time_window_adjustment && !variant.accelerated() {
                    "+TW"
                } else {
                    ""
                },
            );
            match outcome.trace.first_feasible {
                Some((cost, ms)) => println!("first feasible: {cost:.2} at {ms} ms"),
                None => println!("first feasible: none"),
            }
            match outcome.best_cost {
                Some(cost) => {
                    match registry.get(&inst.name) {
                        Some(b) => println!(
                            "best: {cost:.2} (gap {:.2}% vs BKS {b:.2})",
                            gap_percent(cost, b).unwrap_or(f64::NAN)
                        ),
                        None => println!("best: {cost:.2}"),
                    }
                    for event in &outcome.trace.events {
                        println!("  {} ms: {:.2}", event.elapsed_ms, event.best_cost);
                    }
                }
                None => println!("best: no feasible solution within the budget"),
            }
            println!(
                "iterations {}, evaluations {}",
                outcome.iterations, outcome.evaluations
            );
        }
        Command::Bench {
            instances,
            variants,
            replicates,
            time_limit,
            seeds,
            out,
            workers,
            clock,
            bks,
        } => {
            let insts = load_instance_dir(&instances)?;
            let registry = bks.registry()?;
            let mut config = BenchConfig::new(variants, replicates, time_limit * 1000, seeds);
            config.workers = workers;
            config.clock = clock.to_mode();
            let (runs, aggregates) =
                run_experiment(&insts, &config, &registry).context("experiment failed")?;
            let written = emit_reports(&runs, &aggregates, &config, &out)
                .with_context(|| format!("writing reports to {}", out.display()))?;
            for path in written {
                println!("wrote {}", path.display());
            }
        }
        Command::Oracle { instance } => {
            let inst = load_instance(&instance)?;
            match exact_solve(&inst).context("exact solve refused")? {
                ExactOutcome::Optimal { cost, solution } => {
                    println!("optimal cost: {cost:.4}");
                    for route in &solution.routes {
                        if !route.is_empty() {
                            println!("vehicle {}: {:?}", route.vehicle_id, route.vertex_sequence);
                        }
                    }
                }
                ExactOutcome::Infeasible => println!("infeasible"),
            }
        }
        Command::Gen { n, m, seed, out } => {
            let name = out
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("generated")
                .to_string();
            let inst = generate(&name, n, m, seed, &GenParams::default());
            std::fs::write(&out, serialize_instance(&inst))
                .with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {} ({n} requests, {m} vehicles)", out.display());
        }
    }
    Ok(())
}

//! The tabu search loop: best-non-tabu move selection, tenure, aspiration,
//! adaptive penalties, periodic intra-route intensification, and
//! frequency-based diversification. The six TS variants differ only in
//! evaluation level and insertion mode; ITS additionally enables the greedy
//! construction heuristic and time-window tightening.

use crate::construction::{construct_greedy_with, construct_random};
use crate::model::{Instance, Solution};
use crate::neighborhood::{
    apply_move, enumerate_moves, evaluate_solution, InsertionMode, Move, SolutionEval,
};
use crate::schedule::{
    objective, EvaluationLevel, Penalties, RouteEvaluator, SlackPolicy, Violations, SCHEDULE_EPS,
};
use crate::timewindow::{adjust_windows, TimeWindowError};
use std::collections::{BTreeSet, HashMap};
use std::time::Instant;
use thiserror::Error;

/// Conversion rate of evaluator work units to virtual milliseconds for the
/// deterministic clock. Calibrated so a virtual second roughly matches a
/// real second of single-threaded release-build search on commodity
/// hardware (measured 165k-195k units/ms across instance sizes).
pub const DEFAULT_WORK_UNITS_PER_MS: f64 = 170_000.0;

/// Search variant: evaluation level x insertion mode. `Its` is `Ts32` with
/// the construction heuristic and time-window adjustment switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Ts11,
    Ts12,
    Ts21,
    Ts22,
    Ts31,
    Ts32,
    Its,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Ts11,
        Variant::Ts12,
        Variant::Ts21,
        Variant::Ts22,
        Variant::Ts31,
        Variant::Ts32,
        Variant::Its,
    ];

    pub fn level(self) -> EvaluationLevel {
        match self {
            Variant::Ts11 | Variant::Ts12 => EvaluationLevel::Level1,
            Variant::Ts21 | Variant::Ts22 => EvaluationLevel::Level2,
            Variant::Ts31 | Variant::Ts32 | Variant::Its => EvaluationLevel::Level3,
        }
    }

    pub fn mode(self) -> InsertionMode {
        match self {
            Variant::Ts11 | Variant::Ts21 | Variant::Ts31 => InsertionMode::OneStep,
            Variant::Ts12 | Variant::Ts22 | Variant::Ts32 | Variant::Its => InsertionMode::TwoStep,
        }
    }

    /// Whether the variant enables the two accelerations by default.
    pub fn accelerated(self) -> bool {
        self == Variant::Its
    }

    pub fn label(self) -> &'static str {
        match self {
            Variant::Ts11 => "TS11",
            Variant::Ts12 => "TS12",
            Variant::Ts21 => "TS21",
            Variant::Ts22 => "TS22",
            Variant::Ts31 => "TS31",
            Variant::Ts32 => "TS32",
            Variant::Its => "ITS",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "ts11" => Ok(Variant::Ts11),
            "ts12" => Ok(Variant::Ts12),
            "ts21" => Ok(Variant::Ts21),
            "ts22" => Ok(Variant::Ts22),
            "ts31" => Ok(Variant::Ts31),
            "ts32" => Ok(Variant::Ts32),
            "its" => Ok(Variant::Its),
            _ => Err(format!("unknown variant `{s}` (expected ts11..ts32 or its)")),
        }
    }
}

/// Time source for the search budget and trace timestamps.
///
/// `Wall` is real elapsed time. `Work` derives time from the number of
/// evaluator work units, which makes runs (and their traces) bit-for-bit
/// reproducible across machines and repeat runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClockMode {
    Wall,
    Work { units_per_ms: f64 },
}

impl ClockMode {
    pub fn work() -> Self {
        ClockMode::Work {
            units_per_ms: DEFAULT_WORK_UNITS_PER_MS,
        }
    }
}

/// Penalty coefficients plus the adaptation factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyState {
    pub weights: Penalties,
    /// Multiplicative adaptation factor; violated terms scale by `1 + delta`.
    pub delta: f64,
    pub floor: f64,
    pub cap: f64,
}

pub const PENALTY_FLOOR: f64 = 1e-3;
pub const PENALTY_CAP: f64 = 1e6;

impl PenaltyState {
    pub fn new(delta: f64) -> Self {
        assert!(delta > 0.0, "adaptation factor must be positive");
        PenaltyState {
            weights: Penalties::UNIT,
            delta,
            floor: PENALTY_FLOOR,
            cap: PENALTY_CAP,
        }
    }
}

/// Scales each coefficient by `1 + delta` if the matching violation of the
/// current solution is positive, divides by it otherwise, then clamps to the
/// floor/cap band.
pub fn update_penalties(state: &PenaltyState, current: &Violations) -> PenaltyState {
    let factor = 1.0 + state.delta;
    let adapt = |coef: f64, violated: bool| -> f64 {
        let next = if violated { coef * factor } else { coef / factor };
        next.clamp(state.floor, state.cap)
    };
    PenaltyState {
        weights: Penalties {
            alpha: adapt(state.weights.alpha, current.load > SCHEDULE_EPS),
            beta: adapt(state.weights.beta, current.duration > SCHEDULE_EPS),
            gamma: adapt(state.weights.gamma, current.window > SCHEDULE_EPS),
            tau: adapt(state.weights.tau, current.ride > SCHEDULE_EPS),
        },
        ..*state
    }
}

/// Tabu attributes `(request, vehicle)` with their expiry iterations.
#[derive(Debug, Default, Clone)]
pub struct TabuList {
    entries: HashMap<(usize, usize), (u64, u64)>,
    next_seq: u64,
}

impl TabuList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Forbids reinserting `request` into `vehicle` through iteration
    /// `until` inclusive.
    pub fn forbid(&mut self, request: usize, vehicle: usize, until: u64) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.entries.insert((request, vehicle), (until, seq));
    }

    pub fn is_tabu(&self, request: usize, vehicle: usize, iteration: u64) -> bool {
        self.entries
            .get(&(request, vehicle))
            .is_some_and(|&(until, _)| iteration <= until)
    }

    /// Drops the entry with the earliest (expiry, insertion) order. Used to
    /// unblock selection when every candidate is tabu and none aspirates.
    pub fn expire_oldest(&mut self) -> Option<(usize, usize)> {
        let key = self
            .entries
            .iter()
            .min_by_key(|(_, &(until, seq))| (until, seq))
            .map(|(&k, _)| k)?;
        self.entries.remove(&key);
        Some(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Tenure used when the config does not pin one: `round(7.5 * log10(n))`,
/// at least 1.
pub fn default_tenure(n_requests: usize) -> u64 {
    if n_requests <= 1 {
        return 1;
    }
    (7.5 * (n_requests as f64).log10()).round().max(1.0) as u64
}

/// Full configuration of one search run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub variant: Variant,
    pub use_construction_heuristic: bool,
    pub use_time_window_adjustment: bool,
    /// Tabu tenure; `None` uses [`default_tenure`].
    pub tenure: Option<u64>,
    /// Penalty adaptation factor.
    pub delta: f64,
    /// Diversification weight on the frequency penalty.
    pub lambda: f64,
    /// Intra-route intensification runs every this many iterations.
    pub intensification_period: u64,
    pub time_limit_ms: u64,
    pub seed: u64,
    pub clock: ClockMode,
    pub slack_policy: SlackPolicy,
    /// Stop as soon as a feasible solution exists (first-feasible studies).
    pub stop_after_first_feasible: bool,
    /// Stop once the best feasible cost reaches this value.
    pub stop_at_cost: Option<f64>,
}

impl SearchConfig {
    pub fn new(variant: Variant, time_limit_ms: u64, seed: u64) -> Self {
        SearchConfig {
            variant,
            use_construction_heuristic: variant.accelerated(),
            use_time_window_adjustment: variant.accelerated(),
            tenure: None,
            delta: 0.5,
            lambda: 0.015,
            intensification_period: 10,
            time_limit_ms,
            seed,
            clock: ClockMode::Wall,
            slack_policy: SlackPolicy::default(),
            stop_after_first_feasible: false,
            stop_at_cost: None,
        }
    }

    pub fn level(&self) -> EvaluationLevel {
        self.variant.level()
    }

    pub fn mode(&self) -> InsertionMode {
        self.variant.mode()
    }

    /// The tuple that fully determines engine behavior. Two configs with
    /// equal effective tuples run the same search (`TS32 + CH + TW == ITS`).
    pub fn effective(&self) -> (EvaluationLevel, InsertionMode, bool, bool) {
        (
            self.level(),
            self.mode(),
            self.use_construction_heuristic,
            self.use_time_window_adjustment,
        )
    }

    fn validate(&self) {
        assert!(self.time_limit_ms > 0, "time limit must be positive");
        assert!(self.intensification_period >= 1, "period must be >= 1");
        assert!(self.delta > 0.0, "delta must be positive");
        assert!(self.lambda >= 0.0, "lambda must be nonnegative");
        if let ClockMode::Work { units_per_ms } = self.clock {
            assert!(units_per_ms > 0.0, "work clock rate must be positive");
        }
    }
}

/// One timestamped event: a new best feasible solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub elapsed_ms: u64,
    /// Best feasible travel cost so far.
    pub best_cost: f64,
    /// Penalized objective of the current solution at event time.
    pub current_objective: f64,
    pub feasible: bool,
}

/// Timestamped best-cost events plus the first-feasible marker.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTrace {
    pub events: Vec<TraceEvent>,
    /// `(cost, elapsed_ms)` of the first feasible solution encountered.
    pub first_feasible: Option<(f64, u64)>,
}

impl ConvergenceTrace {
    /// Best feasible cost known at or before `elapsed_ms`.
    pub fn best_at(&self, elapsed_ms: u64) -> Option<f64> {
        self.events
            .iter()
            .take_while(|e| e.elapsed_ms <= elapsed_ms)
            .last()
            .map(|e| e.best_cost)
    }
}

/// Everything a finished search reports.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: Option<Solution>,
    pub best_cost: Option<f64>,
    pub trace: ConvergenceTrace,
    pub iterations: u64,
    pub evaluations: u64,
    pub work_units: u64,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    TimeWindow(#[from] TimeWindowError),
}

/// Aspiration: a tabu move is still admissible if it produces a feasible
/// solution cheaper than the best feasible cost so far, or — while no
/// feasible solution exists — an objective below the best objective seen.
pub fn is_aspirated(mv: &Move, best_feasible_cost: Option<f64>, best_objective: f64) -> bool {
    match best_feasible_cost {
        Some(best) => mv.feasible && mv.cost < best - 1e-12,
        None => {
            if mv.feasible {
                true
            } else {
                mv.objective < best_objective - 1e-12
            }
        }
    }
}

/// Exhaustive intra-route reinsertion of every request of every route,
/// keeping strict improvements. The result is never worse in `f(s)`.
pub fn intensify(
    instance: &Instance,
    solution: &Solution,
    level: EvaluationLevel,
    penalties: &Penalties,
) -> Solution {
    let mut evaluator = RouteEvaluator::new(instance);
    let mut out = solution.clone();
    for vehicle in 0..instance.n_vehicles {
        intensify_route(&mut evaluator, &mut out, vehicle, level, penalties);
    }
    out
}

/// Intra-route improvement of one vehicle's route. Returns true if the
/// route changed.
fn intensify_route(
    evaluator: &mut RouteEvaluator<'_>,
    solution: &mut Solution,
    vehicle: usize,
    level: EvaluationLevel,
    penalties: &Penalties,
) -> bool {
    let instance = evaluator.instance();
    let requests: Vec<usize> = solution.routes[vehicle]
        .vertex_sequence
        .iter()
        .copied()
        .filter(|&v| instance.is_pickup(v))
        .collect();
    let mut changed = false;
    let mut candidate = Vec::new();
    for request in requests {
        let dropoff = instance.dropoff_of(request);
        let seq = &solution.routes[vehicle].vertex_sequence;
        let (cur_cost, cur_viol) = evaluator.evaluate_light(seq, level);
        let current_f = objective(cur_cost, &cur_viol, penalties);
        let removed: Vec<usize> = seq
            .iter()
            .copied()
            .filter(|&v| v != request && v != dropoff)
            .collect();
        let mut best: Option<(f64, usize, usize)> = None;
        for p in 0..=removed.len() {
            for q in p..=removed.len() {
                candidate.clear();
                candidate.extend_from_slice(&removed[..p]);
                candidate.push(request);
                candidate.extend_from_slice(&removed[p..q]);
                candidate.push(dropoff);
                candidate.extend_from_slice(&removed[q..]);
                let (cost, viol) = evaluator.evaluate_light(&candidate, level);
                let f = objective(cost, &viol, penalties);
                if best.map_or(true, |(bf, ..)| f < bf) {
                    best = Some((f, p, q + 1));
                }
            }
        }
        if let Some((bf, p, d)) = best {
            if bf < current_f - 1e-9 {
                solution.remove_request(instance, request);
                solution.insert_request(instance, request, vehicle, p, d);
                changed = true;
            }
        }
    }
    changed
}

struct BestTracker {
    solution: Option<Solution>,
    cost: Option<f64>,
}

/// Runs the configured tabu search until the time budget (or a stop
/// condition) is reached. Returns the best feasible solution by travel cost,
/// if any was found, along with the convergence trace.
pub fn search(instance: &Instance, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    config.validate();
    let adjusted;
    let inst: &Instance = if config.use_time_window_adjustment {
        adjusted = adjust_windows(instance)?;
        &adjusted
    } else {
        instance
    };

    let wall_start = Instant::now();
    let mut evaluator = RouteEvaluator::with_policy(inst, config.slack_policy);
    let elapsed_ms = |ev: &RouteEvaluator| -> u64 {
        match config.clock {
            ClockMode::Wall => wall_start.elapsed().as_millis() as u64,
            ClockMode::Work { units_per_ms } => (ev.work_units as f64 / units_per_ms) as u64,
        }
    };

    let level = config.level();
    let mode = config.mode();
    let mut solution = if config.use_construction_heuristic {
        construct_greedy_with(&mut evaluator, config.seed)
    } else {
        construct_random(inst, config.seed)
    };
    let mut cache = evaluate_solution(&mut evaluator, &solution, level);

    let mut penalties = PenaltyState::new(config.delta);
    let mut tabu = TabuList::new();
    let tenure = config.tenure.unwrap_or_else(|| default_tenure(inst.n_requests));
    let mut frequencies: HashMap<(usize, usize), u64> = HashMap::new();
    let mut touched: BTreeSet<usize> = BTreeSet::new();
    let sqrt_nm = ((inst.n_requests * inst.n_vehicles) as f64).sqrt();

    let mut trace = ConvergenceTrace::default();
    let mut best = BestTracker {
        solution: None,
        cost: None,
    };
    let mut best_objective = f64::INFINITY;
    let mut iterations: u64 = 0;

    let note_solution = |cache: &SolutionEval,
                             solution: &Solution,
                             penalties: &PenaltyState,
                             evaluator: &RouteEvaluator,
                             best: &mut BestTracker,
                             trace: &mut ConvergenceTrace| {
        let viol = cache.total_violations();
        if !viol.is_feasible(SCHEDULE_EPS) {
            return;
        }
        let cost = cache.total_cost();
        let now = elapsed_ms(evaluator);
        if trace.first_feasible.is_none() {
            trace.first_feasible = Some((cost, now));
        }
        if best.cost.map_or(true, |c| cost < c - 1e-9) {
            best.solution = Some(solution.clone());
            best.cost = Some(cost);
            trace.events.push(TraceEvent {
                elapsed_ms: now,
                best_cost: cost,
                current_objective: cache.objective(&penalties.weights),
                feasible: true,
            });
        }
    };

    note_solution(&cache, &solution, &penalties, &evaluator, &mut best, &mut trace);

    let stop_reached = |best: &BestTracker, trace: &ConvergenceTrace| -> bool {
        if config.stop_after_first_feasible && trace.first_feasible.is_some() {
            return true;
        }
        if let (Some(target), Some(cost)) = (config.stop_at_cost, best.cost) {
            if cost <= target + 1e-6 {
                return true;
            }
        }
        false
    };

    loop {
        if elapsed_ms(&evaluator) >= config.time_limit_ms || stop_reached(&best, &trace) {
            break;
        }
        if inst.n_requests == 0 || inst.n_vehicles < 2 {
            break;
        }
        iterations += 1;

        let current_objective = cache.objective(&penalties.weights);
        best_objective = best_objective.min(current_objective);

        let moves = enumerate_moves(&mut evaluator, &solution, &cache, mode, level, &penalties.weights);
        if moves.is_empty() {
            break;
        }

        // Best admissible move; when everything is tabu and nothing
        // aspirates, expire the oldest entry and retry.
        let selected: Move = loop {
            let mut chosen: Option<(f64, usize)> = None;
            for (idx, mv) in moves.iter().enumerate() {
                if tabu.is_tabu(mv.request, mv.target, iterations)
                    && !is_aspirated(mv, best.cost, best_objective)
                {
                    continue;
                }
                let mut score = mv.objective;
                if mv.objective >= current_objective - 1e-12 {
                    let count = frequencies
                        .get(&(mv.request, mv.target))
                        .copied()
                        .unwrap_or(0);
                    score += config.lambda
                        * mv.cost
                        * sqrt_nm
                        * (count as f64 / iterations as f64);
                }
                if chosen.map_or(true, |(s, _)| score < s) {
                    chosen = Some((score, idx));
                }
            }
            match chosen {
                Some((_, idx)) => break moves[idx],
                None => {
                    if tabu.expire_oldest().is_none() {
                        unreachable!("no admissible move though tabu list is empty");
                    }
                }
            }
        };

        apply_move(inst, &mut solution, &selected);
        let src_eval =
            evaluator.evaluate_light(&solution.routes[selected.source].vertex_sequence, level);
        let tgt_eval =
            evaluator.evaluate_light(&solution.routes[selected.target].vertex_sequence, level);
        cache.set_route(selected.source, src_eval);
        cache.set_route(selected.target, tgt_eval);
        tabu.forbid(selected.request, selected.source, iterations + tenure);
        *frequencies
            .entry((selected.request, selected.target))
            .or_insert(0) += 1;
        touched.insert(selected.source);
        touched.insert(selected.target);

        penalties = update_penalties(&penalties, &cache.total_violations());
        note_solution(&cache, &solution, &penalties, &evaluator, &mut best, &mut trace);

        if iterations % config.intensification_period == 0 && !touched.is_empty() {
            let mut any = false;
            for &vehicle in &touched {
                if intensify_route(&mut evaluator, &mut solution, vehicle, level, &penalties.weights)
                {
                    let eval = evaluator
                        .evaluate_light(&solution.routes[vehicle].vertex_sequence, level);
                    cache.set_route(vehicle, eval);
                    any = true;
                }
            }
            touched.clear();
            if any {
                note_solution(&cache, &solution, &penalties, &evaluator, &mut best, &mut trace);
            }
        }
    }

    Ok(SearchOutcome {
        best: best.solution,
        best_cost: best.cost,
        trace,
        iterations,
        evaluations: evaluator.evaluations,
        work_units: evaluator.work_units,
    })
}

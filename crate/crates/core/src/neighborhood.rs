//! Single-paired-insertion neighborhood: relocate one request's vertex pair
//! from its vehicle to another, under one-step (full position grid) or
//! two-step (critical vertex first) insertion.

use crate::model::{Instance, Solution};
use crate::schedule::{objective, EvaluationLevel, Penalties, RouteEvaluator, Violations, SCHEDULE_EPS};
use crate::timewindow::{classify_critical, CriticalVertex};

/// How insertion positions are searched when scoring a relocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InsertionMode {
    /// Every (pickup, drop-off) position pair is scored.
    OneStep,
    /// The critical vertex is placed at its best position first, then the
    /// non-critical vertex on the admissible side of it.
    TwoStep,
}

/// One candidate relocation, scored against the full solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move {
    pub request: usize,
    pub source: usize,
    pub target: usize,
    /// Final position of the pickup in the target sequence.
    pub pickup_pos: usize,
    /// Final position of the drop-off in the target sequence.
    pub dropoff_pos: usize,
    /// Solution objective after the move, under the penalties given at
    /// enumeration time.
    pub objective: f64,
    /// Solution travel cost after the move.
    pub cost: f64,
    /// Whether the solution after the move has zero violations.
    pub feasible: bool,
}

/// Cached per-route cost and violations of one solution at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionEval {
    pub per_route: Vec<(f64, Violations)>,
}

impl SolutionEval {
    pub fn total_cost(&self) -> f64 {
        self.per_route.iter().map(|(c, _)| c).sum()
    }

    pub fn total_violations(&self) -> Violations {
        let mut v = Violations::default();
        for (_, rv) in &self.per_route {
            v.add(rv);
        }
        v
    }

    pub fn objective(&self, penalties: &Penalties) -> f64 {
        objective(self.total_cost(), &self.total_violations(), penalties)
    }

    pub fn is_feasible(&self) -> bool {
        self.total_violations().is_feasible(SCHEDULE_EPS)
    }

    pub fn set_route(&mut self, vehicle: usize, eval: (f64, Violations)) {
        self.per_route[vehicle] = eval;
    }
}

/// Evaluates every route of a solution, producing the scoring cache.
pub fn evaluate_solution(
    evaluator: &mut RouteEvaluator<'_>,
    solution: &Solution,
    level: EvaluationLevel,
) -> SolutionEval {
    let per_route = solution
        .routes
        .iter()
        .map(|r| evaluator.evaluate_light(&r.vertex_sequence, level))
        .collect();
    SolutionEval { per_route }
}

/// Enumerates all relocations of all requests, in (request asc, vehicle asc)
/// order. With `OneStep`, every position pair of every target route is
/// emitted; with `TwoStep`, one move per (request, target vehicle).
pub fn enumerate_moves(
    evaluator: &mut RouteEvaluator<'_>,
    solution: &Solution,
    cache: &SolutionEval,
    mode: InsertionMode,
    level: EvaluationLevel,
    penalties: &Penalties,
) -> Vec<Move> {
    let mut moves = Vec::new();
    for request in 1..=evaluator.instance().n_requests {
        enumerate_moves_for_request(
            evaluator, solution, cache, request, mode, level, penalties, &mut moves,
        );
    }
    moves
}

/// Enumerates relocations of a single request into every other vehicle.
#[allow(clippy::too_many_arguments)]
pub fn enumerate_moves_for_request(
    evaluator: &mut RouteEvaluator<'_>,
    solution: &Solution,
    cache: &SolutionEval,
    request: usize,
    mode: InsertionMode,
    level: EvaluationLevel,
    penalties: &Penalties,
    moves: &mut Vec<Move>,
) {
    let instance = evaluator.instance();
    let source = match solution.vehicle_of(request) {
        Some(v) => v,
        None => return,
    };
    if instance.n_vehicles < 2 {
        return;
    }
    let dropoff = instance.dropoff_of(request);

    let removed: Vec<usize> = solution.routes[source]
        .vertex_sequence
        .iter()
        .copied()
        .filter(|&v| v != request && v != dropoff)
        .collect();
    let removed_eval = evaluator.evaluate_light(&removed, level);

    let total_cost = cache.total_cost();
    let total_viol = cache.total_violations();

    let mut candidate = Vec::new();
    for target in 0..instance.n_vehicles {
        if target == source {
            continue;
        }
        let seq = &solution.routes[target].vertex_sequence;
        let base_cost =
            total_cost - cache.per_route[source].0 - cache.per_route[target].0 + removed_eval.0;
        let mut base_viol = total_viol;
        base_viol.sub(&cache.per_route[source].1);
        base_viol.sub(&cache.per_route[target].1);
        base_viol.add(&removed_eval.1);

        let score = |evaluator: &mut RouteEvaluator<'_>, cand: &[usize]| -> (f64, f64, bool) {
            let (cost, viol) = evaluator.evaluate_light(cand, level);
            let mut all = base_viol;
            all.add(&viol);
            let c = base_cost + cost;
            (objective(c, &all, penalties), c, all.is_feasible(SCHEDULE_EPS))
        };

        match mode {
            InsertionMode::OneStep => {
                for p in 0..=seq.len() {
                    for q in p..=seq.len() {
                        candidate.clear();
                        candidate.extend_from_slice(&seq[..p]);
                        candidate.push(request);
                        candidate.extend_from_slice(&seq[p..q]);
                        candidate.push(dropoff);
                        candidate.extend_from_slice(&seq[q..]);
                        let (f, cost, feasible) = score(evaluator, &candidate);
                        moves.push(Move {
                            request,
                            source,
                            target,
                            pickup_pos: p,
                            dropoff_pos: q + 1,
                            objective: f,
                            cost,
                            feasible,
                        });
                    }
                }
            }
            InsertionMode::TwoStep => {
                let critical = classify_critical(instance, request);
                let (critical_vertex, other_vertex) = match critical {
                    CriticalVertex::Pickup => (request, dropoff),
                    CriticalVertex::Dropoff => (dropoff, request),
                };
                // Step one: best position for the critical vertex alone.
                let mut best_cpos = 0usize;
                let mut best_cf = f64::INFINITY;
                for cp in 0..=seq.len() {
                    candidate.clear();
                    candidate.extend_from_slice(&seq[..cp]);
                    candidate.push(critical_vertex);
                    candidate.extend_from_slice(&seq[cp..]);
                    let (f, _, _) = score(evaluator, &candidate);
                    if f < best_cf {
                        best_cf = f;
                        best_cpos = cp;
                    }
                }
                // Step two: best admissible position for the other vertex,
                // holding the critical one fixed.
                let mut with_critical: Vec<usize> = Vec::with_capacity(seq.len() + 1);
                with_critical.extend_from_slice(&seq[..best_cpos]);
                with_critical.push(critical_vertex);
                with_critical.extend_from_slice(&seq[best_cpos..]);
                let positions: Vec<usize> = match critical {
                    CriticalVertex::Pickup => (best_cpos + 1..=with_critical.len()).collect(),
                    CriticalVertex::Dropoff => (0..=best_cpos).collect(),
                };
                let mut best: Option<(f64, f64, bool, usize)> = None;
                for op in positions {
                    candidate.clear();
                    candidate.extend_from_slice(&with_critical[..op]);
                    candidate.push(other_vertex);
                    candidate.extend_from_slice(&with_critical[op..]);
                    let (f, cost, feasible) = score(evaluator, &candidate);
                    if best.map_or(true, |(bf, ..)| f < bf) {
                        best = Some((f, cost, feasible, op));
                    }
                }
                let (f, cost, feasible, op) = best.expect("at least one position");
                let (pickup_pos, dropoff_pos) = match critical {
                    CriticalVertex::Pickup => (best_cpos, op),
                    CriticalVertex::Dropoff => (op, best_cpos + 1),
                };
                moves.push(Move {
                    request,
                    source,
                    target,
                    pickup_pos,
                    dropoff_pos,
                    objective: f,
                    cost,
                    feasible,
                });
            }
        }
    }
}

/// Re-scores a move from the cache: only the two affected routes are
/// re-evaluated.
pub fn score_move(
    evaluator: &mut RouteEvaluator<'_>,
    solution: &Solution,
    cache: &SolutionEval,
    mv: &Move,
    level: EvaluationLevel,
    penalties: &Penalties,
) -> f64 {
    assert!(mv.source != mv.target, "move must change vehicles");
    assert!(mv.pickup_pos < mv.dropoff_pos, "pickup must precede drop-off");
    let instance = evaluator.instance();
    let dropoff = instance.dropoff_of(mv.request);
    let removed: Vec<usize> = solution.routes[mv.source]
        .vertex_sequence
        .iter()
        .copied()
        .filter(|&v| v != mv.request && v != dropoff)
        .collect();
    let mut inserted = solution.routes[mv.target].vertex_sequence.clone();
    assert!(mv.dropoff_pos <= inserted.len() + 1, "drop-off position out of range");
    inserted.insert(mv.pickup_pos, mv.request);
    inserted.insert(mv.dropoff_pos, dropoff);

    let removed_eval = evaluator.evaluate_light(&removed, level);
    let inserted_eval = evaluator.evaluate_light(&inserted, level);
    let cost = cache.total_cost() - cache.per_route[mv.source].0 - cache.per_route[mv.target].0
        + removed_eval.0
        + inserted_eval.0;
    let mut viol = cache.total_violations();
    viol.sub(&cache.per_route[mv.source].1);
    viol.sub(&cache.per_route[mv.target].1);
    viol.add(&removed_eval.1);
    viol.add(&inserted_eval.1);
    objective(cost, &viol, penalties)
}

/// Applies a move to the solution in place.
pub fn apply_move(instance: &Instance, solution: &mut Solution, mv: &Move) {
    let (vehicle, _, _) = solution.remove_request(instance, mv.request);
    debug_assert_eq!(vehicle, mv.source);
    solution.insert_request(instance, mv.request, mv.target, mv.pickup_pos, mv.dropoff_pos);
}

//! Independent ground truth for tests: an exhaustive exact solver for tiny
//! instances and a brute-force schedule optimizer for short routes.
//!
//! The schedule brute-forcer shares no code with the staged evaluation in
//! [`crate::schedule`]; it recomputes schedules from scratch with its own
//! sweep and searches over depot departures and inserted waits directly.

use crate::model::{Instance, Solution};
use crate::schedule::{EvaluationLevel, RouteEvaluator, SCHEDULE_EPS};
use thiserror::Error;

/// Hard cap on `exact_solve` (assignment and ordering enumeration is
/// factorial in the request count).
pub const EXACT_SOLVE_MAX_REQUESTS: usize = 5;
/// Hard cap on `brute_schedule` route length.
pub const BRUTE_ROUTE_MAX_LEN: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("exact_solve handles at most {cap} requests, got {n}")]
    TooManyRequests { n: usize, cap: usize },
    #[error("brute_schedule handles routes of at most {cap} vertices, got {len}")]
    RouteTooLong { len: usize, cap: usize },
    #[error("discretization step must be positive, got {0}")]
    BadStep(f64),
}

/// Result of the exhaustive solver.
#[derive(Debug, Clone)]
pub enum ExactOutcome {
    Optimal { cost: f64, solution: Solution },
    Infeasible,
}

/// Enumerates every request-to-vehicle assignment and every
/// precedence-respecting ordering per route, keeping the cheapest fully
/// feasible solution (feasibility judged by Level3 evaluation).
pub fn exact_solve(instance: &Instance) -> Result<ExactOutcome, OracleError> {
    let n = instance.n_requests;
    if n > EXACT_SOLVE_MAX_REQUESTS {
        return Err(OracleError::TooManyRequests {
            n,
            cap: EXACT_SOLVE_MAX_REQUESTS,
        });
    }
    let m = instance.n_vehicles;
    if n == 0 {
        return Ok(ExactOutcome::Optimal {
            cost: 0.0,
            solution: Solution::empty(instance),
        });
    }

    // Best feasible ordering per request subset; vehicles are uniform so the
    // result is vehicle-independent.
    let mut best_by_subset: Vec<Option<Option<(f64, Vec<usize>)>>> = vec![None; 1 << n];
    let mut evaluator = RouteEvaluator::new(instance);
    let mut best_route = |mask: usize, ev: &mut RouteEvaluator| -> Option<(f64, Vec<usize>)> {
        if let Some(cached) = &best_by_subset[mask] {
            return cached.clone();
        }
        let requests: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut seq = Vec::with_capacity(2 * requests.len());
        enumerate_orderings(instance, &requests, &mut seq, &mut |candidate| {
            let (cost, viol) = ev.evaluate_light(candidate, EvaluationLevel::Level3);
            if viol.is_feasible(SCHEDULE_EPS) {
                match &best {
                    Some((c, _)) if *c <= cost => {}
                    _ => best = Some((cost, candidate.to_vec())),
                }
            }
        });
        best_by_subset[mask] = Some(best.clone());
        best
    };

    // Enumerate assignments as an ordered list of per-vehicle subsets.
    let full = (1usize << n) - 1;
    let mut best_total: Option<(f64, Vec<usize>)> = None; // (cost, per-vehicle masks)
    let mut masks = vec![0usize; m];
    assign_requests(
        0,
        n,
        m,
        &mut masks,
        &mut |masks: &[usize]| {
            let mut total = 0.0;
            for &mask in masks {
                if mask == 0 {
                    continue;
                }
                match best_route(mask, &mut evaluator) {
                    Some((cost, _)) => total += cost,
                    None => return,
                }
            }
            match &best_total {
                Some((c, _)) if *c <= total => {}
                _ => best_total = Some((total, masks.to_vec())),
            }
        },
    );
    debug_assert_eq!(masks.iter().fold(0, |a, b| a | b), 0);
    let _ = full;

    match best_total {
        None => Ok(ExactOutcome::Infeasible),
        Some((cost, masks)) => {
            let mut solution = Solution::empty(instance);
            for (vehicle, &mask) in masks.iter().enumerate() {
                if mask == 0 {
                    continue;
                }
                let (_, seq) = best_by_subset[mask].clone().unwrap().unwrap();
                solution.routes[vehicle].vertex_sequence = seq;
                for i in 0..n {
                    if mask & (1 << i) != 0 {
                        solution.assignment[i] = Some(vehicle);
                    }
                }
            }
            Ok(ExactOutcome::Optimal { cost, solution })
        }
    }
}

fn assign_requests(
    request: usize,
    n: usize,
    m: usize,
    masks: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if request == n {
        visit(masks);
        return;
    }
    for vehicle in 0..m {
        masks[vehicle] |= 1 << request;
        assign_requests(request + 1, n, m, masks, visit);
        masks[vehicle] &= !(1 << request);
    }
}

/// Visits every ordering of the given requests' vertex pairs in which each
/// pickup precedes its drop-off.
fn enumerate_orderings(
    instance: &Instance,
    requests: &[usize],
    seq: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    let target = 2 * requests.len();
    if seq.len() == target {
        visit(seq);
        return;
    }
    for &r in requests {
        let pickup = r;
        let dropoff = instance.dropoff_of(r);
        if !seq.contains(&pickup) {
            seq.push(pickup);
            enumerate_orderings(instance, requests, seq, visit);
            seq.pop();
        } else if !seq.contains(&dropoff) {
            seq.push(dropoff);
            enumerate_orderings(instance, requests, seq, visit);
            seq.pop();
        }
    }
}

/// Weights of the schedule-dependent violation terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleWeights {
    pub duration: f64,
    pub window: f64,
    pub ride: f64,
}

impl Default for ScheduleWeights {
    fn default() -> Self {
        ScheduleWeights {
            duration: 1.0,
            window: 1.0,
            ride: 1.0,
        }
    }
}

/// Reusable schedule state for one candidate: begin/depart/wait per position.
struct BruteSchedule {
    begin: Vec<f64>,
    depart: Vec<f64>,
    wait: Vec<f64>,
    depot_return: f64,
}

impl BruteSchedule {
    fn new(len: usize) -> Self {
        BruteSchedule {
            begin: vec![0.0; len],
            depart: vec![0.0; len],
            wait: vec![0.0; len],
            depot_return: 0.0,
        }
    }
}

fn brute_sweep(
    instance: &Instance,
    seq: &[usize],
    d0: f64,
    extra: &[f64],
    sched: &mut BruteSchedule,
) {
    let mut t = d0;
    let mut prev = 0usize;
    for (i, &v) in seq.iter().enumerate() {
        let arrive = t + instance.travel(prev, v);
        let b = arrive.max(instance.vertex(v).window_earliest) + extra[i];
        sched.wait[i] = b - arrive;
        sched.begin[i] = b;
        sched.depart[i] = b + instance.vertex(v).service_duration;
        t = sched.depart[i];
        prev = v;
    }
    sched.depot_return = t + instance.travel(prev, 0);
}

/// Returns `(weighted total, lateness)`.
fn brute_objective(
    instance: &Instance,
    seq: &[usize],
    d0: f64,
    pairs: &[(usize, usize)],
    sched: &BruteSchedule,
    weights: &ScheduleWeights,
) -> (f64, f64) {
    let mut lateness = 0.0;
    for (i, &v) in seq.iter().enumerate() {
        lateness += (sched.begin[i] - instance.vertex(v).window_latest).max(0.0);
    }
    let mut ride_excess = 0.0;
    for &(ppos, dpos) in pairs {
        let ride = sched.begin[dpos] - sched.depart[ppos];
        ride_excess += (ride - instance.max_ride_time).max(0.0);
    }
    let duration_excess = (sched.depot_return - d0 - instance.max_route_duration).max(0.0);
    (
        weights.duration * duration_excess
            + weights.window * lateness
            + weights.ride * ride_excess,
        lateness,
    )
}

/// Minimum weighted violation total over schedules of the given sequence,
/// searching depot departures and inserted waits on a grid of the given
/// step.
///
/// Inserted waits are searched at pickups only: a delay block starting at a
/// drop-off is dominated by starting the same block at the next pickup, so
/// this restriction loses no optima. Per pickup, the candidate waits are
/// bounded by the ride reduction still needed and by the downstream waiting
/// available to absorb the delay. The returned minimum is exact up to the
/// grid resolution.
pub fn brute_schedule(
    instance: &Instance,
    seq: &[usize],
    weights: &ScheduleWeights,
    step: f64,
) -> Result<f64, OracleError> {
    brute_schedule_impl(instance, seq, weights, step, None)
}

/// As [`brute_schedule`], but restricted to schedules whose total lateness
/// stays within `lateness_cap`. With the cap set to the route's minimal
/// lateness this searches exactly the schedule family the staged evaluation
/// optimizes over (it never trades new lateness for duration or ride time).
pub fn brute_schedule_min_lateness(
    instance: &Instance,
    seq: &[usize],
    weights: &ScheduleWeights,
    step: f64,
) -> Result<f64, OracleError> {
    if seq.is_empty() {
        return Ok(0.0);
    }
    if seq.len() > BRUTE_ROUTE_MAX_LEN {
        return Err(OracleError::RouteTooLong {
            len: seq.len(),
            cap: BRUTE_ROUTE_MAX_LEN,
        });
    }
    // The earliest schedule minimizes every service start simultaneously, so
    // its lateness is the route's floor.
    let mut sched = BruteSchedule::new(seq.len());
    let extra = vec![0.0; seq.len()];
    brute_sweep(
        instance,
        seq,
        instance.vertex(0).window_earliest,
        &extra,
        &mut sched,
    );
    let mut floor = 0.0;
    for (i, &v) in seq.iter().enumerate() {
        floor += (sched.begin[i] - instance.vertex(v).window_latest).max(0.0);
    }
    brute_schedule_impl(instance, seq, weights, step, Some(floor + 1e-9))
}

fn brute_schedule_impl(
    instance: &Instance,
    seq: &[usize],
    weights: &ScheduleWeights,
    step: f64,
    lateness_cap: Option<f64>,
) -> Result<f64, OracleError> {
    if seq.len() > BRUTE_ROUTE_MAX_LEN {
        return Err(OracleError::RouteTooLong {
            len: seq.len(),
            cap: BRUTE_ROUTE_MAX_LEN,
        });
    }
    if !(step > 0.0) {
        return Err(OracleError::BadStep(step));
    }
    if seq.is_empty() {
        return Ok(0.0);
    }

    let depot = instance.vertex(0);
    // Departing later than the last window close cannot help.
    let max_latest = seq
        .iter()
        .map(|&v| instance.vertex(v).window_latest)
        .fold(depot.window_earliest, f64::max)
        .min(depot.window_latest);

    // Pickup positions with their drop-off on the route, in route order.
    let pairs: Vec<(usize, usize)> = seq
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| {
            if !instance.is_pickup(v) {
                return None;
            }
            seq.iter()
                .position(|&x| x == instance.dropoff_of(v))
                .map(|d| (i, d))
        })
        .collect();

    // Candidate depot departures: a uniform grid plus the exact values that
    // align each vertex's no-wait arrival with a window bound.
    let mut d0_candidates = Vec::new();
    let mut t = depot.window_earliest;
    while t <= max_latest {
        d0_candidates.push(t);
        t += step;
    }
    let mut path = 0.0;
    let mut prev = 0usize;
    for &v in seq {
        path += instance.travel(prev, v);
        for bound in [
            instance.vertex(v).window_earliest,
            instance.vertex(v).window_latest,
        ] {
            let d0 = bound - path;
            if d0 >= depot.window_earliest && d0 <= max_latest {
                d0_candidates.push(d0);
            }
        }
        path += instance.vertex(v).service_duration;
        prev = v;
    }

    let mut best = f64::INFINITY;
    let mut extra = vec![0.0; seq.len()];
    let mut sched = BruteSchedule::new(seq.len());
    for &d0 in &d0_candidates {
        // The zero-wait schedule both seeds the incumbent and lower-bounds
        // everything reachable from this d0 (inserted waits can only
        // increase lateness and duration).
        brute_sweep(instance, seq, d0, &extra, &mut sched);
        let (zero, zero_lateness) = brute_objective(instance, seq, d0, &pairs, &sched, weights);
        if let Some(cap) = lateness_cap {
            if zero_lateness > cap {
                continue;
            }
        }
        if zero < best {
            best = zero;
        }
        let mut floor = weights.duration
            * (sched.depot_return - d0 - instance.max_route_duration).max(0.0);
        for (i, &v) in seq.iter().enumerate() {
            floor += weights.window
                * (sched.begin[i] - instance.vertex(v).window_latest).max(0.0);
        }
        if best <= 1e-12 {
            break;
        }
        if floor >= best || pairs.is_empty() {
            continue;
        }
        let mut leaves = WAIT_LEAF_CAP;
        brute_waits(
            instance,
            seq,
            d0,
            &pairs,
            0,
            &mut extra,
            &mut sched,
            weights,
            step,
            lateness_cap,
            &mut leaves,
            &mut best,
        );
        if best <= 1e-12 {
            break;
        }
    }
    Ok(best)
}

/// Grid-backstop resolution per pickup, sized against this leaf target.
const WAIT_NODE_BUDGET: f64 = 4096.0;
/// Hard cap on DFS leaves explored per depot departure.
const WAIT_LEAF_CAP: i64 = 50_000;

/// Depth-first search over inserted waits at pickups, in route order. The
/// all-zero leaf is assumed already scored by the caller.
#[allow(clippy::too_many_arguments)]
fn brute_waits(
    instance: &Instance,
    seq: &[usize],
    d0: f64,
    pairs: &[(usize, usize)],
    idx: usize,
    extra: &mut Vec<f64>,
    sched: &mut BruteSchedule,
    weights: &ScheduleWeights,
    step: f64,
    lateness_cap: Option<f64>,
    leaves: &mut i64,
    best: &mut f64,
) {
    if *leaves <= 0 {
        return;
    }
    if idx == pairs.len() {
        *leaves -= 1;
        brute_sweep(instance, seq, d0, extra, sched);
        let (obj, lateness) = brute_objective(instance, seq, d0, pairs, sched, weights);
        if let Some(cap) = lateness_cap {
            if lateness > cap {
                return;
            }
        }
        if obj < *best {
            *best = obj;
        }
        return;
    }
    let (ppos, dpos) = pairs[idx];
    brute_sweep(instance, seq, d0, extra, sched);
    let ride = sched.begin[dpos] - sched.depart[ppos];
    // A wait inserted here is absorbed by the waiting between the pickup and
    // its drop-off; anything beyond that is dominated by inserting the rest
    // at a later pickup directly.
    let absorbable: f64 = sched.wait[ppos + 1..=dpos].iter().sum();

    let mut candidates = vec![0.0];
    if absorbable > 0.0 {
        // The objective is piecewise linear in this wait; its breakpoints are
        // where downstream absorption runs out, a window closes, or a ride
        // hits the bound. These subsume the wait the staged evaluation would
        // insert.
        let push = |cands: &mut Vec<f64>, v: f64| {
            if v > 0.0 && v <= absorbable {
                cands.push(v);
            }
        };
        push(&mut candidates, (ride - instance.max_ride_time).max(0.0));
        push(&mut candidates, absorbable);
        let mut cum = 0.0;
        for k in ppos + 1..seq.len() {
            cum += sched.wait[k];
            push(&mut candidates, cum);
            push(
                &mut candidates,
                cum + instance.vertex(seq[k]).window_latest - sched.begin[k],
            );
        }
        for &(p2, d2) in pairs {
            if p2 < ppos && d2 > ppos {
                let other_ride = sched.begin[d2] - sched.depart[p2];
                let cum: f64 = sched.wait[ppos + 1..=d2].iter().sum();
                push(
                    &mut candidates,
                    cum + instance.max_ride_time - other_ride,
                );
            }
        }
        // Coarse grid backstop between breakpoints, bounded per level.
        let levels_left = (pairs.len() - idx) as f64;
        let per_level = WAIT_NODE_BUDGET.powf(1.0 / levels_left).max(2.0);
        let eff_step = (absorbable / per_level).max(step);
        let mut w = eff_step;
        while w < absorbable {
            candidates.push(w);
            w += eff_step;
        }
        candidates.sort_by(f64::total_cmp);
        candidates.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    }
    for &delta in &candidates {
        extra[ppos] = delta;
        brute_waits(
            instance,
            seq,
            d0,
            pairs,
            idx + 1,
            extra,
            sched,
            weights,
            step,
            lateness_cap,
            leaves,
            best,
        );
    }
    extra[ppos] = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_solution, Vertex};

    fn vertex(id: usize, x: f64, y: f64, load: i32, e: f64, l: f64) -> Vertex {
        Vertex {
            id,
            x,
            y,
            service_duration: 0.0,
            load_change: load,
            window_earliest: e,
            window_latest: l,
        }
    }

    #[test]
    fn single_request_tour_cost() {
        let inst = Instance::new(
            "one",
            1,
            6,
            480.0,
            90.0,
            vec![
                vertex(0, 0.0, 0.0, 0, 0.0, 1440.0),
                vertex(1, 3.0, 4.0, 1, 0.0, 1440.0),
                vertex(2, 3.0, 0.0, -1, 0.0, 1440.0),
            ],
        );
        match exact_solve(&inst).unwrap() {
            ExactOutcome::Optimal { cost, solution } => {
                let expected = inst.travel(0, 1) + inst.travel(1, 2) + inst.travel(2, 0);
                assert!((cost - expected).abs() < 1e-9);
                assert!(validate_solution(&inst, &solution).is_empty());
            }
            ExactOutcome::Infeasible => panic!("trivially feasible instance"),
        }
    }

    #[test]
    fn interleaved_ordering_wins_when_geometry_says_so() {
        // Corridor out to d1 with d2 next to the depot: visiting
        // [1, 2, 3, 4] is strictly cheapest among the six valid orderings.
        let inst = Instance::new(
            "interleave",
            1,
            6,
            480.0,
            90.0,
            vec![
                vertex(0, 0.0, 0.0, 0, 0.0, 1440.0),
                vertex(1, 1.0, 0.0, 1, 0.0, 1440.0),
                vertex(2, 2.0, 0.0, 1, 0.0, 1440.0),
                vertex(3, 3.0, 0.0, -1, 0.0, 1440.0),
                vertex(4, 0.0, 1.0, -1, 0.0, 1440.0),
            ],
        );
        match exact_solve(&inst).unwrap() {
            ExactOutcome::Optimal { cost, solution } => {
                assert_eq!(solution.routes[0].vertex_sequence, vec![1, 2, 3, 4]);
                let expected = inst.travel(0, 1)
                    + inst.travel(1, 2)
                    + inst.travel(2, 3)
                    + inst.travel(3, 4)
                    + inst.travel(4, 0);
                assert!((cost - expected).abs() < 1e-9);
            }
            ExactOutcome::Infeasible => panic!("feasible instance"),
        }
    }

    #[test]
    fn contradictory_windows_are_infeasible() {
        // Drop-off must start by minute 10 but the pickup opens at 1000.
        let inst = Instance::new(
            "impossible",
            2,
            6,
            480.0,
            90.0,
            vec![
                vertex(0, 0.0, 0.0, 0, 0.0, 1440.0),
                vertex(1, 1.0, 0.0, 1, 1000.0, 1010.0),
                vertex(2, 2.0, 0.0, -1, 0.0, 10.0),
            ],
        );
        match exact_solve(&inst).unwrap() {
            ExactOutcome::Infeasible => {}
            ExactOutcome::Optimal { cost, .. } => panic!("should be infeasible, got {cost}"),
        }
    }

    #[test]
    fn request_cap_is_enforced() {
        let params = crate::instgen::GenParams::default();
        let inst = crate::instgen::generate("big", 6, 2, 1, &params);
        assert_eq!(
            exact_solve(&inst).unwrap_err(),
            OracleError::TooManyRequests { n: 6, cap: 5 }
        );
    }

    #[test]
    fn brute_schedule_zero_for_relaxed_route() {
        let inst = Instance::new(
            "relaxed",
            1,
            6,
            480.0,
            90.0,
            vec![
                vertex(0, 0.0, 0.0, 0, 0.0, 1440.0),
                vertex(1, 10.0, 0.0, 1, 0.0, 1440.0),
                vertex(2, 20.0, 0.0, -1, 0.0, 1440.0),
            ],
        );
        let v = brute_schedule(&inst, &[1, 2], &ScheduleWeights::default(), 1.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn brute_schedule_finds_the_depot_shift() {
        // Pickup window [100, 120]: a naive departure at 0 waits 90 minutes
        // and (with duration bound 25) overshoots; shifting the departure
        // absorbs it all.
        let inst = Instance::new(
            "shift",
            1,
            6,
            25.0,
            90.0,
            vec![
                vertex(0, 0.0, 0.0, 0, 0.0, 1440.0),
                vertex(1, 10.0, 0.0, 1, 100.0, 120.0),
                vertex(2, 20.0, 0.0, -1, 0.0, 1440.0),
            ],
        );
        let v = brute_schedule(&inst, &[1, 2], &ScheduleWeights::default(), 1.0).unwrap();
        assert!((v - 15.0).abs() < 1e-9, "duration 40 vs bound 25 -> 15, got {v}");
    }

    #[test]
    fn brute_schedule_floor_equals_unavoidable_lateness() {
        // Window closes before the earliest possible arrival: lateness 5 is
        // unavoidable whatever the schedule does.
        let inst = Instance::new(
            "late",
            1,
            6,
            480.0,
            90.0,
            vec![
                vertex(0, 0.0, 0.0, 0, 0.0, 1440.0),
                vertex(1, 10.0, 0.0, 1, 0.0, 5.0),
                vertex(2, 20.0, 0.0, -1, 0.0, 1440.0),
            ],
        );
        let v = brute_schedule(&inst, &[1, 2], &ScheduleWeights::default(), 1.0).unwrap();
        assert!((v - 5.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn brute_schedule_caps_are_enforced() {
        let inst = crate::instgen::generate("cap", 5, 1, 3, &crate::instgen::GenParams::default());
        let seq: Vec<usize> = (1..=5).flat_map(|r| [r, r + 5]).collect();
        assert_eq!(
            brute_schedule(&inst, &seq, &ScheduleWeights::default(), 1.0).unwrap_err(),
            OracleError::RouteTooLong { len: 10, cap: 8 }
        );
        assert_eq!(
            brute_schedule(&inst, &[1, 6], &ScheduleWeights::default(), 0.0).unwrap_err(),
            OracleError::BadStep(0.0)
        );
    }
}

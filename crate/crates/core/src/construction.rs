//! Initial-solution builders: greedy sequential best-position insertion from
//! a random request order, and the plain randomized baseline.

use crate::model::{Instance, Solution};
use crate::schedule::{objective, EvaluationLevel, Penalties, RouteEvaluator, Violations};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Greedy construction: requests are visited in a seed-determined random
/// order and each is inserted at the (vehicle, pickup, drop-off) position
/// triple minimizing the unit-penalty objective, evaluated at Level3. Ties
/// break first-found: vehicle, then pickup position, then drop-off position.
pub fn construct_greedy(instance: &Instance, seed: u64) -> Solution {
    let mut evaluator = RouteEvaluator::new(instance);
    construct_greedy_with(&mut evaluator, seed)
}

/// As [`construct_greedy`], reusing the caller's evaluator (and so its slack
/// policy and work counters).
pub fn construct_greedy_with(evaluator: &mut RouteEvaluator<'_>, seed: u64) -> Solution {
    let instance = evaluator.instance();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=instance.n_requests).collect();
    order.shuffle(&mut rng);

    let mut solution = Solution::empty(instance);
    let m = instance.n_vehicles;
    let mut route_cost = vec![0.0; m];
    let mut route_viol = vec![Violations::default(); m];
    let mut total_cost = 0.0;
    let mut total_viol = Violations::default();

    let mut candidate = Vec::new();
    for &request in &order {
        let dropoff = instance.dropoff_of(request);
        let mut best: Option<(f64, usize, usize, usize)> = None;
        for vehicle in 0..m {
            let seq = &solution.routes[vehicle].vertex_sequence;
            let rest_cost = total_cost - route_cost[vehicle];
            let mut rest_viol = total_viol;
            rest_viol.sub(&route_viol[vehicle]);
            for p in 0..=seq.len() {
                for q in p..=seq.len() {
                    candidate.clear();
                    candidate.extend_from_slice(&seq[..p]);
                    candidate.push(request);
                    candidate.extend_from_slice(&seq[p..q]);
                    candidate.push(dropoff);
                    candidate.extend_from_slice(&seq[q..]);
                    let (cost, viol) =
                        evaluator.evaluate_light(&candidate, EvaluationLevel::Level3);
                    let mut all = rest_viol;
                    all.add(&viol);
                    let f = objective(rest_cost + cost, &all, &Penalties::UNIT);
                    if best.map_or(true, |(bf, ..)| f < bf) {
                        best = Some((f, vehicle, p, q + 1));
                    }
                }
            }
        }
        let (_, vehicle, pickup_pos, dropoff_pos) =
            best.expect("at least one insertion position exists");
        solution.insert_request(instance, request, vehicle, pickup_pos, dropoff_pos);
        let (cost, viol) = evaluator.evaluate_light(
            &solution.routes[vehicle].vertex_sequence,
            EvaluationLevel::Level3,
        );
        total_cost += cost - route_cost[vehicle];
        total_viol.sub(&route_viol[vehicle]);
        total_viol.add(&viol);
        route_cost[vehicle] = cost;
        route_viol[vehicle] = viol;
    }
    solution
}

/// Random construction: each request goes to a uniformly random vehicle,
/// pickup appended then drop-off appended.
pub fn construct_random(instance: &Instance, seed: u64) -> Solution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut solution = Solution::empty(instance);
    for request in 1..=instance.n_requests {
        let vehicle = rng.random_range(0..instance.n_vehicles);
        let len = solution.routes[vehicle].vertex_sequence.len();
        solution.insert_request(instance, request, vehicle, len, len + 1);
    }
    solution
}

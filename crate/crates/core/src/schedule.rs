//! Route schedule evaluation at three fidelity levels, plus the penalized
//! objective.
//!
//! Level1 departs the depot as early as possible and sweeps forward. Level2
//! additionally delays the depot departure by the route's forward time slack,
//! shrinking the duration without creating lateness. Level3 additionally
//! inserts waiting time at each pickup (in route order) to shorten ride
//! times. All levels report the same four violation measures computed from
//! whatever schedule the level produced, so later levels can only relax the
//! totals.

use crate::model::{Instance, Route};

/// How much schedule optimization to perform before measuring violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvaluationLevel {
    Level1,
    Level2,
    Level3,
}

impl EvaluationLevel {
    pub const ALL: [EvaluationLevel; 3] = [
        EvaluationLevel::Level1,
        EvaluationLevel::Level2,
        EvaluationLevel::Level3,
    ];
}

/// Slack term used when inserting waits at pickups (Level3 only).
///
/// `WindowOnly` bounds the inserted wait by downstream window slack alone.
/// `RideAware` additionally keeps the ride time of passengers already on
/// board from being stretched past the ride-time bound; without that cap a
/// wait inserted for one request can push an interleaved passenger's ride
/// over the bound, letting a later evaluation level report a worse total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SlackPolicy {
    WindowOnly,
    #[default]
    RideAware,
}

/// The numeric tolerance used for all schedule comparisons, minutes.
pub const SCHEDULE_EPS: f64 = 1e-6;

/// The four constraint-violation measures of a route or solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Violations {
    /// Passengers above capacity at the load peak, summed over vehicles.
    pub load: f64,
    /// Minutes of route duration above the duration bound.
    pub duration: f64,
    /// Minutes of service-start lateness past window ends.
    pub window: f64,
    /// Minutes of ride time above the ride-time bound.
    pub ride: f64,
}

impl Violations {
    pub fn is_feasible(&self, eps: f64) -> bool {
        self.load <= eps && self.duration <= eps && self.window <= eps && self.ride <= eps
    }

    /// `beta * duration + gamma * window + tau * ride` — the schedule-dependent
    /// part of the penalty (load does not depend on the schedule).
    pub fn weighted_schedule_total(&self, beta: f64, gamma: f64, tau: f64) -> f64 {
        beta * self.duration + gamma * self.window + tau * self.ride
    }

    pub fn add(&mut self, other: &Violations) {
        self.load += other.load;
        self.duration += other.duration;
        self.window += other.window;
        self.ride += other.ride;
    }

    pub fn sub(&mut self, other: &Violations) {
        self.load -= other.load;
        self.duration -= other.duration;
        self.window -= other.window;
        self.ride -= other.ride;
    }
}

/// Sums per-route violations into the solution-level measures.
pub fn violations<'a>(evaluations: impl IntoIterator<Item = &'a RouteEvaluation>) -> Violations {
    let mut total = Violations::default();
    for eval in evaluations {
        total.add(&eval.violations);
    }
    total
}

/// Penalty coefficients of the penalized objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalties {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
}

impl Penalties {
    pub const UNIT: Penalties = Penalties {
        alpha: 1.0,
        beta: 1.0,
        gamma: 1.0,
        tau: 1.0,
    };
}

impl Default for Penalties {
    fn default() -> Self {
        Penalties::UNIT
    }
}

/// Penalized objective `f(s) = c + alpha*q + beta*d + gamma*w + tau*t`.
pub fn objective(cost: f64, violations: &Violations, penalties: &Penalties) -> f64 {
    assert!(
        penalties.alpha > 0.0
            && penalties.beta > 0.0
            && penalties.gamma > 0.0
            && penalties.tau > 0.0,
        "penalty coefficients must be positive"
    );
    cost + penalties.alpha * violations.load
        + penalties.beta * violations.duration
        + penalties.gamma * violations.window
        + penalties.tau * violations.ride
}

/// Schedule and violation measures of one route.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteEvaluation {
    /// Arrival time per customer position.
    pub arrival: Vec<f64>,
    /// Waiting time per customer position.
    pub wait: Vec<f64>,
    /// Service start per customer position.
    pub begin: Vec<f64>,
    /// Departure per customer position.
    pub depart: Vec<f64>,
    /// Departure time from the depot.
    pub depot_departure: f64,
    /// Arrival time back at the depot.
    pub depot_return: f64,
    /// Sum of traversed travel entries.
    pub cost: f64,
    /// `depot_return - depot_departure`, minutes.
    pub duration: f64,
    /// Maximum on-board load along the route.
    pub peak_load: i32,
    /// `(pickup vertex, ride time)` for every complete pair on the route, in
    /// pickup order.
    pub rides: Vec<(usize, f64)>,
    pub violations: Violations,
}

impl RouteEvaluation {
    fn empty(depot_earliest: f64) -> Self {
        RouteEvaluation {
            arrival: Vec::new(),
            wait: Vec::new(),
            begin: Vec::new(),
            depart: Vec::new(),
            depot_departure: depot_earliest,
            depot_return: depot_earliest,
            cost: 0.0,
            duration: 0.0,
            peak_load: 0,
            rides: Vec::new(),
            violations: Violations::default(),
        }
    }
}

/// Route evaluator carrying the slack policy, reusable scratch buffers, and
/// work counters.
///
/// `evaluations` counts calls; `work_units` counts vertex visits across
/// sweeps and slack scans, which is what the deterministic work clock ticks
/// on. The evaluator tolerates sequences with unpaired vertices (as arise
/// while scoring two-step insertions); ride terms simply skip incomplete
/// pairs.
#[derive(Debug)]
pub struct RouteEvaluator<'a> {
    instance: &'a Instance,
    pub slack_policy: SlackPolicy,
    pub evaluations: u64,
    pub work_units: u64,
    arrival: Vec<f64>,
    wait: Vec<f64>,
    begin: Vec<f64>,
    depart: Vec<f64>,
    depot_departure: f64,
    // Position of each vertex id in the current sequence, stamped per call.
    pos: Vec<u32>,
    pos_stamp: Vec<u64>,
    stamp: u64,
}

impl<'a> RouteEvaluator<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Self::with_policy(instance, SlackPolicy::default())
    }

    pub fn with_policy(instance: &'a Instance, slack_policy: SlackPolicy) -> Self {
        let ids = instance.vertices.len();
        RouteEvaluator {
            instance,
            slack_policy,
            evaluations: 0,
            work_units: 0,
            arrival: Vec::new(),
            wait: Vec::new(),
            begin: Vec::new(),
            depart: Vec::new(),
            depot_departure: 0.0,
            pos: vec![0; ids],
            pos_stamp: vec![0; ids],
            stamp: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    #[inline]
    fn position(&self, vertex: usize) -> Option<usize> {
        if self.pos_stamp[vertex] == self.stamp {
            Some(self.pos[vertex] as usize)
        } else {
            None
        }
    }

    /// Evaluates a vertex sequence (depot implicit at both ends), returning
    /// the full schedule.
    pub fn evaluate(&mut self, seq: &[usize], level: EvaluationLevel) -> RouteEvaluation {
        let inst = self.instance;
        if seq.is_empty() {
            self.evaluations += 1;
            return RouteEvaluation::empty(inst.vertex(0).window_earliest);
        }
        let (cost, peak_load, violations) = self.compute(seq, level);
        let mut rides = Vec::new();
        for (i, &v) in seq.iter().enumerate() {
            if inst.is_pickup(v) {
                if let Some(dpos) = self.position(inst.dropoff_of(v)) {
                    rides.push((v, self.begin[dpos] - self.depart[i]));
                }
            }
        }
        let r = seq.len();
        let depot_return = self.depart[r - 1] + inst.travel(seq[r - 1], 0);
        RouteEvaluation {
            arrival: self.arrival.clone(),
            wait: self.wait.clone(),
            begin: self.begin.clone(),
            depart: self.depart.clone(),
            depot_departure: self.depot_departure,
            depot_return,
            cost,
            duration: depot_return - self.depot_departure,
            peak_load,
            rides,
            violations,
        }
    }

    /// Scoring fast path: cost and violations only, no per-call allocation.
    pub fn evaluate_light(&mut self, seq: &[usize], level: EvaluationLevel) -> (f64, Violations) {
        if seq.is_empty() {
            self.evaluations += 1;
            return (0.0, Violations::default());
        }
        let (cost, _, violations) = self.compute(seq, level);
        (cost, violations)
    }

    fn compute(&mut self, seq: &[usize], level: EvaluationLevel) -> (f64, i32, Violations) {
        self.evaluations += 1;
        let inst = self.instance;
        let r = seq.len();

        self.stamp += 1;
        for (i, &v) in seq.iter().enumerate() {
            self.pos[v] = i as u32;
            self.pos_stamp[v] = self.stamp;
        }

        let mut cost = inst.travel(0, seq[0]);
        let mut load = 0i32;
        let mut peak_load = 0i32;
        for (i, &v) in seq.iter().enumerate() {
            if i + 1 < r {
                cost += inst.travel(v, seq[i + 1]);
            }
            load += inst.vertex(v).load_change;
            peak_load = peak_load.max(load);
        }
        cost += inst.travel(seq[r - 1], 0);
        self.work_units += r as u64;

        self.arrival.resize(r, 0.0);
        self.wait.resize(r, 0.0);
        self.begin.resize(r, 0.0);
        self.depart.resize(r, 0.0);

        // Steps 1-2: earliest departure, forward sweep.
        self.depot_departure = inst.vertex(0).window_earliest;
        self.sweep(seq, 0);

        if level != EvaluationLevel::Level1 {
            // Steps 3-5: delay the depot departure by the route slack.
            let f0 = self.forward_slack(seq, None);
            let total_wait: f64 = self.wait.iter().sum();
            let shift = f0.min(total_wait);
            if shift > SCHEDULE_EPS {
                self.depot_departure += shift;
                self.sweep(seq, 0);
            }
        }

        if level == EvaluationLevel::Level3 {
            // Step 7: insert waiting at each pickup, in route order, to
            // shorten the ride of the request it starts.
            for j in 0..r {
                if !inst.is_pickup(seq[j]) || self.position(inst.dropoff_of(seq[j])).is_none() {
                    continue;
                }
                let fj = self.forward_slack(seq, Some(j));
                let wait_after: f64 = self.wait[j + 1..].iter().sum();
                let delta = fj.min(wait_after);
                if delta > SCHEDULE_EPS {
                    self.wait[j] += delta;
                    self.begin[j] = self.arrival[j] + self.wait[j];
                    self.depart[j] = self.begin[j] + inst.vertex(seq[j]).service_duration;
                    self.resweep_from(seq, j + 1);
                }
            }
        }

        let depot_return = self.depart[r - 1] + inst.travel(seq[r - 1], 0);
        let duration = depot_return - self.depot_departure;

        let mut window_lateness = 0.0;
        let mut ride_excess = 0.0;
        for (i, &v) in seq.iter().enumerate() {
            window_lateness += (self.begin[i] - inst.vertex(v).window_latest).max(0.0);
            if inst.is_pickup(v) {
                if let Some(dpos) = self.position(inst.dropoff_of(v)) {
                    let ride = self.begin[dpos] - self.depart[i];
                    ride_excess += (ride - inst.max_ride_time).max(0.0);
                }
            }
        }

        let violations = Violations {
            load: (peak_load - inst.vehicle_capacity).max(0) as f64,
            duration: (duration - inst.max_route_duration).max(0.0),
            window: window_lateness,
            ride: ride_excess,
        };
        (cost, peak_load, violations)
    }

    /// Forward sweep from position `from`, departing the depot at
    /// `self.depot_departure` when `from == 0`.
    fn sweep(&mut self, seq: &[usize], from: usize) {
        let inst = self.instance;
        for i in from..seq.len() {
            let v = inst.vertex(seq[i]);
            self.arrival[i] = if i == 0 {
                self.depot_departure + inst.travel(0, seq[0])
            } else {
                self.depart[i - 1] + inst.travel(seq[i - 1], seq[i])
            };
            self.begin[i] = self.arrival[i].max(v.window_earliest);
            self.wait[i] = self.begin[i] - self.arrival[i];
            self.depart[i] = self.begin[i] + v.service_duration;
            self.work_units += 1;
        }
    }

    /// Propagates a changed departure at `from - 1` downstream, stopping once
    /// the delay is fully absorbed by waiting.
    fn resweep_from(&mut self, seq: &[usize], from: usize) {
        let inst = self.instance;
        for i in from..seq.len() {
            let v = inst.vertex(seq[i]);
            let a = self.depart[i - 1] + inst.travel(seq[i - 1], seq[i]);
            self.work_units += 1;
            if (a - self.arrival[i]).abs() <= 1e-12 {
                return;
            }
            self.arrival[i] = a;
            self.begin[i] = a.max(v.window_earliest);
            self.wait[i] = self.begin[i] - self.arrival[i];
            self.depart[i] = self.begin[i] + v.service_duration;
        }
    }

    /// Forward time slack at `origin` (`None` = depot): the largest delay
    /// insertable there without creating new window lateness. With
    /// `SlackPolicy::RideAware` the slack at a drop-off whose pickup precedes
    /// the origin is additionally capped so the on-board ride cannot be
    /// stretched past the ride-time bound.
    fn forward_slack(&mut self, seq: &[usize], origin: Option<usize>) -> f64 {
        let inst = self.instance;
        let start = origin.unwrap_or(0);
        let mut cum_wait = 0.0;
        let mut best = f64::INFINITY;
        for k in start..seq.len() {
            // Waits in (origin, k]: the depot absorbs through the first
            // customer's wait as well.
            if origin.is_none() || k > start {
                cum_wait += self.wait[k];
            }
            let v = inst.vertex(seq[k]);
            let mut slack = v.window_latest - self.begin[k];
            if self.slack_policy == SlackPolicy::RideAware {
                if let Some(j) = origin {
                    if inst.is_dropoff(seq[k]) {
                        if let Some(ppos) = self.position(inst.pickup_of(seq[k])) {
                            if ppos < j {
                                let ride = self.begin[k] - self.depart[ppos];
                                slack = slack.min(inst.max_ride_time - ride);
                            }
                        }
                    }
                }
            }
            best = best.min(cum_wait + slack.max(0.0));
            self.work_units += 1;
        }
        best
    }
}

/// Evaluates a route, asserting the model invariants first (complete pairs,
/// pickup-before-drop-off, no duplicates).
pub fn evaluate_route(
    instance: &Instance,
    route: &Route,
    level: EvaluationLevel,
) -> RouteEvaluation {
    assert_route_well_formed(instance, route);
    RouteEvaluator::new(instance).evaluate(&route.vertex_sequence, level)
}

fn assert_route_well_formed(instance: &Instance, route: &Route) {
    let n = instance.n_requests;
    let mut pos = vec![usize::MAX; 2 * n + 1];
    for (i, &v) in route.vertex_sequence.iter().enumerate() {
        assert!(v >= 1 && v <= 2 * n, "vertex id {v} out of range");
        assert!(pos[v] == usize::MAX, "vertex {v} appears twice on route");
        pos[v] = i;
    }
    for request in 1..=n {
        let p = pos[request];
        let d = pos[instance.dropoff_of(request)];
        match (p == usize::MAX, d == usize::MAX) {
            (true, true) => {}
            (false, false) => assert!(p < d, "drop-off of request {request} precedes its pickup"),
            _ => panic!("request {request} has only one vertex on the route"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Vertex;

    fn vertex(id: usize, x: f64, load: i32, e: f64, l: f64, service: f64) -> Vertex {
        Vertex {
            id,
            x,
            y: 0.0,
            service_duration: service,
            load_change: load,
            window_earliest: e,
            window_latest: l,
        }
    }

    /// One request: depot at 0, pickup at x=10, drop-off at x=20.
    fn line_instance(pickup_window: (f64, f64), dropoff_window: (f64, f64)) -> Instance {
        Instance::new(
            "line",
            1,
            6,
            480.0,
            90.0,
            vec![
                vertex(0, 0.0, 0, 0.0, 1440.0, 0.0),
                vertex(1, 10.0, 1, pickup_window.0, pickup_window.1, 0.0),
                vertex(2, 20.0, -1, dropoff_window.0, dropoff_window.1, 0.0),
            ],
        )
    }

    #[test]
    fn relaxed_windows_give_a_tight_schedule() {
        let inst = line_instance((0.0, 1440.0), (0.0, 1440.0));
        let route = Route {
            vehicle_id: 0,
            vertex_sequence: vec![1, 2],
        };
        for level in EvaluationLevel::ALL {
            let eval = evaluate_route(&inst, &route, level);
            assert!((eval.begin[0] - 10.0).abs() < SCHEDULE_EPS);
            assert!((eval.begin[1] - 20.0).abs() < SCHEDULE_EPS);
            assert_eq!(eval.rides.len(), 1);
            assert!((eval.rides[0].1 - 10.0).abs() < SCHEDULE_EPS);
            assert_eq!(eval.violations.window, 0.0);
            assert!((eval.cost - 40.0).abs() < SCHEDULE_EPS);
        }
    }

    #[test]
    fn level2_shifts_depot_departure_into_the_waiting() {
        let inst = line_instance((100.0, 120.0), (0.0, 1440.0));
        let route = Route {
            vehicle_id: 0,
            vertex_sequence: vec![1, 2],
        };
        let l1 = evaluate_route(&inst, &route, EvaluationLevel::Level1);
        assert!((l1.wait[0] - 90.0).abs() < SCHEDULE_EPS);
        assert!((l1.begin[0] - 100.0).abs() < SCHEDULE_EPS);
        assert_eq!(l1.depot_departure, 0.0);

        let l2 = evaluate_route(&inst, &route, EvaluationLevel::Level2);
        assert!((l2.depot_departure - 90.0).abs() < SCHEDULE_EPS);
        assert!((l2.begin[0] - 100.0).abs() < SCHEDULE_EPS);
        assert!((l1.duration - l2.duration - 90.0).abs() < SCHEDULE_EPS);
    }

    #[test]
    fn depot_shift_alone_cuts_a_ride_when_nothing_pins_it() {
        // Drop-off opens at 200; delaying the depot departure absorbs the
        // wait and shrinks the ride from 190 to 10 already at Level2.
        let inst = line_instance((0.0, 1440.0), (200.0, 1440.0));
        let route = Route {
            vehicle_id: 0,
            vertex_sequence: vec![1, 2],
        };
        let l1 = evaluate_route(&inst, &route, EvaluationLevel::Level1);
        assert!((l1.rides[0].1 - 190.0).abs() < SCHEDULE_EPS);
        let l2 = evaluate_route(&inst, &route, EvaluationLevel::Level2);
        assert!((l2.rides[0].1 - 10.0).abs() < SCHEDULE_EPS);
        assert_eq!(l2.violations.ride, 0.0);
    }

    #[test]
    fn level3_waits_at_the_pickup_to_cut_the_ride() {
        // Route [1, 3, 2, 4] on a line. Vertex 1 is pinned to start exactly
        // at minute 10, so the depot cannot be delayed; request 2's drop-off
        // opens at 200, so its ride is 180 until Level3 holds the vehicle at
        // pickup 2.
        let v = |id: usize, x: f64, load: i32, e: f64, l: f64| vertex(id, x, load, e, l, 0.0);
        let inst = Instance::new(
            "pinned",
            1,
            6,
            480.0,
            90.0,
            vec![
                v(0, 0.0, 0, 0.0, 1440.0),
                v(1, 10.0, 1, 10.0, 10.0),
                v(2, 20.0, 1, 0.0, 1440.0),
                v(3, 15.0, -1, 0.0, 1440.0),
                v(4, 25.0, -1, 200.0, 1440.0),
            ],
        );
        let route = Route {
            vehicle_id: 0,
            vertex_sequence: vec![1, 3, 2, 4],
        };
        let l2 = evaluate_route(&inst, &route, EvaluationLevel::Level2);
        assert_eq!(l2.depot_departure, 0.0);
        assert!((l2.rides[1].1 - 180.0).abs() < SCHEDULE_EPS);
        assert!((l2.violations.ride - 90.0).abs() < SCHEDULE_EPS);

        let l3 = evaluate_route(&inst, &route, EvaluationLevel::Level3);
        assert!((l3.begin[2] - 195.0).abs() < SCHEDULE_EPS, "B {}", l3.begin[2]);
        assert!((l3.rides[1].1 - 5.0).abs() < SCHEDULE_EPS, "ride {}", l3.rides[1].1);
        assert_eq!(l3.violations.ride, 0.0);
        assert_eq!(l3.violations.window, 0.0);
    }

    #[test]
    fn reevaluation_is_deterministic() {
        let inst = line_instance((100.0, 120.0), (150.0, 400.0));
        let route = Route {
            vehicle_id: 0,
            vertex_sequence: vec![1, 2],
        };
        for level in EvaluationLevel::ALL {
            let a = evaluate_route(&inst, &route, level);
            let b = evaluate_route(&inst, &route, level);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn light_and_full_evaluation_agree() {
        let inst = line_instance((100.0, 120.0), (150.0, 400.0));
        let seq = vec![1, 2];
        let mut ev = RouteEvaluator::new(&inst);
        for level in EvaluationLevel::ALL {
            let full = ev.evaluate(&seq, level);
            let (cost, viol) = ev.evaluate_light(&seq, level);
            assert_eq!(full.cost, cost);
            assert_eq!(full.violations, viol);
        }
    }

    #[test]
    fn violation_sums_match_the_definitions() {
        // Peak load 2 with capacity 1 -> load violation 1.
        let inst = Instance::new(
            "load",
            1,
            1,
            480.0,
            90.0,
            vec![
                vertex(0, 0.0, 0, 0.0, 1440.0, 0.0),
                vertex(1, 1.0, 1, 0.0, 1440.0, 0.0),
                vertex(2, 2.0, 1, 0.0, 1440.0, 0.0),
                vertex(3, 3.0, -1, 0.0, 1440.0, 0.0),
                vertex(4, 4.0, -1, 0.0, 1440.0, 0.0),
            ],
        );
        let route = Route {
            vehicle_id: 0,
            vertex_sequence: vec![1, 2, 3, 4],
        };
        let eval = evaluate_route(&inst, &route, EvaluationLevel::Level3);
        assert_eq!(eval.peak_load, 2);
        assert_eq!(eval.violations.load, 1.0);
        let total = violations([&eval]);
        assert_eq!(total.load, 1.0);
    }

    #[test]
    fn lateness_counts_past_window_end_only() {
        // Window closes at 5 but arrival is at 10: contributes 5 lateness.
        let inst = line_instance((0.0, 5.0), (0.0, 1440.0));
        let route = Route {
            vehicle_id: 0,
            vertex_sequence: vec![1, 2],
        };
        let eval = evaluate_route(&inst, &route, EvaluationLevel::Level3);
        assert!((eval.violations.window - 5.0).abs() < SCHEDULE_EPS);
    }

    #[test]
    fn objective_sums_with_the_given_penalties() {
        let v = Violations {
            load: 1.0,
            duration: 2.0,
            window: 3.0,
            ride: 4.0,
        };
        assert_eq!(
            objective(100.0, &Violations::default(), &Penalties::UNIT),
            100.0
        );
        assert_eq!(
            objective(
                100.0,
                &Violations {
                    load: 2.0,
                    ..Default::default()
                },
                &Penalties {
                    alpha: 1.0,
                    beta: 5.0,
                    gamma: 5.0,
                    tau: 5.0
                }
            ),
            102.0
        );
        assert_eq!(objective(100.0, &v, &Penalties::UNIT), 110.0);
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn objective_rejects_nonpositive_penalties() {
        let _ = objective(
            1.0,
            &Violations::default(),
            &Penalties {
                alpha: 0.0,
                beta: 1.0,
                gamma: 1.0,
                tau: 1.0,
            },
        );
    }

    #[test]
    #[should_panic(expected = "only one vertex")]
    fn evaluate_route_rejects_incomplete_pairs() {
        let inst = line_instance((0.0, 1440.0), (0.0, 1440.0));
        let route = Route {
            vehicle_id: 0,
            vertex_sequence: vec![1],
        };
        let _ = evaluate_route(&inst, &route, EvaluationLevel::Level1);
    }

    #[test]
    fn empty_route_evaluates_to_zero() {
        let inst = line_instance((0.0, 1440.0), (0.0, 1440.0));
        let route = Route::empty(0);
        let eval = evaluate_route(&inst, &route, EvaluationLevel::Level3);
        assert_eq!(eval.cost, 0.0);
        assert_eq!(eval.duration, 0.0);
        assert!(eval.violations.is_feasible(0.0));
    }
}

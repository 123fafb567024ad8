//! Core domain types: instances, requests, routes, solutions.
//!
//! Vertex ids follow the usual DARP convention: 0 is the depot, `1..=n` are
//! pickups and `n+1..=2n` the matching drop-offs. Request `i` owns vertices
//! `i` and `i + n`.

use std::fmt;

/// One service location. The depot is vertex 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Service duration at this vertex, minutes.
    pub service_duration: f64,
    /// Signed passenger count: +q at a pickup, -q at the drop-off.
    pub load_change: i32,
    pub window_earliest: f64,
    pub window_latest: f64,
}

impl Vertex {
    pub fn window_width(&self) -> f64 {
        self.window_latest - self.window_earliest
    }
}

/// Immutable problem data. Shared read-only across concurrent searches.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub n_requests: usize,
    pub n_vehicles: usize,
    /// Uniform vehicle capacity, passengers.
    pub vehicle_capacity: i32,
    /// Uniform maximum route duration, minutes.
    pub max_route_duration: f64,
    /// Maximum passenger ride time, minutes.
    pub max_ride_time: f64,
    /// End of the planning horizon, minutes.
    pub horizon: f64,
    /// `2n + 1` vertices; index == vertex id.
    pub vertices: Vec<Vertex>,
    travel: Vec<f64>,
}

impl Instance {
    /// Builds an instance and precomputes the Euclidean travel matrix.
    pub fn new(
        name: impl Into<String>,
        n_vehicles: usize,
        vehicle_capacity: i32,
        max_route_duration: f64,
        max_ride_time: f64,
        vertices: Vec<Vertex>,
    ) -> Self {
        assert!(
            vertices.len() % 2 == 1 && !vertices.is_empty(),
            "expected 2n+1 vertices, got {}",
            vertices.len()
        );
        let n_requests = vertices.len() / 2;
        let horizon = vertices[0].window_latest;
        let size = vertices.len();
        let mut travel = vec![0.0; size * size];
        for i in 0..size {
            for j in 0..size {
                let dx = vertices[i].x - vertices[j].x;
                let dy = vertices[i].y - vertices[j].y;
                travel[i * size + j] = (dx * dx + dy * dy).sqrt();
            }
        }
        Instance {
            name: name.into(),
            n_requests,
            n_vehicles,
            vehicle_capacity,
            max_route_duration,
            max_ride_time,
            horizon,
            vertices,
            travel,
        }
    }

    #[inline]
    pub fn travel(&self, from: usize, to: usize) -> f64 {
        self.travel[from * self.vertices.len() + to]
    }

    #[inline]
    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    #[inline]
    pub fn is_pickup(&self, id: usize) -> bool {
        id >= 1 && id <= self.n_requests
    }

    #[inline]
    pub fn is_dropoff(&self, id: usize) -> bool {
        id > self.n_requests && id <= 2 * self.n_requests
    }

    /// Drop-off vertex of the request whose pickup is `id`.
    #[inline]
    pub fn dropoff_of(&self, pickup: usize) -> usize {
        debug_assert!(self.is_pickup(pickup));
        pickup + self.n_requests
    }

    /// Pickup vertex of the request whose drop-off is `id`.
    #[inline]
    pub fn pickup_of(&self, dropoff: usize) -> usize {
        debug_assert!(self.is_dropoff(dropoff));
        dropoff - self.n_requests
    }

    /// Request id (1-based) owning vertex `id`.
    #[inline]
    pub fn request_of(&self, id: usize) -> usize {
        debug_assert!(id >= 1 && id <= 2 * self.n_requests);
        if id > self.n_requests {
            id - self.n_requests
        } else {
            id
        }
    }
}

/// Per-vehicle vertex sequence. Depot is implicit at both ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub vehicle_id: usize,
    pub vertex_sequence: Vec<usize>,
}

impl Route {
    pub fn empty(vehicle_id: usize) -> Self {
        Route {
            vehicle_id,
            vertex_sequence: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertex_sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_sequence.is_empty()
    }

    pub fn position_of(&self, vertex: usize) -> Option<usize> {
        self.vertex_sequence.iter().position(|&v| v == vertex)
    }
}

/// One route per vehicle plus the request-to-vehicle map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub routes: Vec<Route>,
    /// `assignment[r - 1]` is the vehicle serving request `r`, if any.
    pub assignment: Vec<Option<usize>>,
}

impl Solution {
    pub fn empty(instance: &Instance) -> Self {
        Solution {
            routes: (0..instance.n_vehicles).map(Route::empty).collect(),
            assignment: vec![None; instance.n_requests],
        }
    }

    pub fn vehicle_of(&self, request: usize) -> Option<usize> {
        self.assignment[request - 1]
    }

    /// Inserts request `request`'s pair into `vehicle` so that the pickup ends
    /// up at `pickup_pos` and the drop-off at `dropoff_pos` of the final
    /// sequence. Requires `pickup_pos < dropoff_pos` and an unassigned request.
    pub fn insert_request(
        &mut self,
        instance: &Instance,
        request: usize,
        vehicle: usize,
        pickup_pos: usize,
        dropoff_pos: usize,
    ) {
        assert!(pickup_pos < dropoff_pos, "pickup must precede drop-off");
        assert!(
            self.assignment[request - 1].is_none(),
            "request {request} already assigned"
        );
        let seq = &mut self.routes[vehicle].vertex_sequence;
        assert!(dropoff_pos <= seq.len() + 1, "drop-off position out of range");
        seq.insert(pickup_pos, request);
        seq.insert(dropoff_pos, instance.dropoff_of(request));
        self.assignment[request - 1] = Some(vehicle);
    }

    /// Removes request `request` from its route, returning
    /// `(vehicle, pickup_pos, dropoff_pos)` so the removal can be undone.
    pub fn remove_request(
        &mut self,
        instance: &Instance,
        request: usize,
    ) -> (usize, usize, usize) {
        let vehicle = self.assignment[request - 1]
            .unwrap_or_else(|| panic!("request {request} not assigned"));
        let dropoff = instance.dropoff_of(request);
        let seq = &mut self.routes[vehicle].vertex_sequence;
        let pickup_pos = seq.iter().position(|&v| v == request).expect("pickup on route");
        seq.remove(pickup_pos);
        let dropoff_pos = seq.iter().position(|&v| v == dropoff).expect("drop-off on route");
        seq.remove(dropoff_pos);
        self.assignment[request - 1] = None;
        // dropoff_pos is reported in final-sequence indexing (after the pickup
        // is back in), matching insert_request's convention.
        (vehicle, pickup_pos, dropoff_pos + 1)
    }
}

/// Which basic constraint a solution breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectKind {
    /// Pickup and drop-off sit on different routes.
    SplitPair,
    /// Drop-off precedes its pickup on the route.
    PrecedenceViolated,
    /// Request missing from every route.
    Unassigned,
    /// A vertex appears more than once across the solution.
    DuplicateVertex,
    /// Assignment map disagrees with route contents.
    AssignmentMismatch,
}

impl fmt::Display for DefectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DefectKind::SplitPair => "pickup and drop-off on different routes",
            DefectKind::PrecedenceViolated => "drop-off visited before pickup",
            DefectKind::Unassigned => "request not assigned to any route",
            DefectKind::DuplicateVertex => "vertex appears more than once",
            DefectKind::AssignmentMismatch => "assignment map inconsistent with routes",
        };
        f.write_str(s)
    }
}

/// A structural defect found by [`validate_solution`]. Defects are data, not
/// failures: infeasible-but-structurally-sound solutions produce none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Defect {
    pub request: usize,
    pub kind: DefectKind,
}

/// Checks the three basic structural constraints: complete assignment,
/// same-route pairing, and pickup-before-drop-off precedence.
pub fn validate_solution(instance: &Instance, solution: &Solution) -> Vec<Defect> {
    let mut defects = Vec::new();
    let n = instance.n_requests;

    let mut seen: Vec<Option<usize>> = vec![None; 2 * n + 1];
    for route in &solution.routes {
        for &v in &route.vertex_sequence {
            if let Some(_prev) = seen[v] {
                defects.push(Defect {
                    request: instance.request_of(v),
                    kind: DefectKind::DuplicateVertex,
                });
            } else {
                seen[v] = Some(route.vehicle_id);
            }
        }
    }

    for request in 1..=n {
        let pickup_vehicle = seen[request];
        let dropoff_vehicle = seen[instance.dropoff_of(request)];
        match (pickup_vehicle, dropoff_vehicle) {
            (None, None) => defects.push(Defect {
                request,
                kind: DefectKind::Unassigned,
            }),
            (Some(a), Some(b)) if a == b => {
                let route = &solution.routes[a];
                let p = route.position_of(request).unwrap();
                let d = route.position_of(instance.dropoff_of(request)).unwrap();
                if d < p {
                    defects.push(Defect {
                        request,
                        kind: DefectKind::PrecedenceViolated,
                    });
                }
                if solution.vehicle_of(request) != Some(a) {
                    defects.push(Defect {
                        request,
                        kind: DefectKind::AssignmentMismatch,
                    });
                }
            }
            _ => defects.push(Defect {
                request,
                kind: DefectKind::SplitPair,
            }),
        }
    }

    defects
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_request_instance() -> Instance {
        let mut vertices = vec![Vertex {
            id: 0,
            x: 0.0,
            y: 0.0,
            service_duration: 0.0,
            load_change: 0,
            window_earliest: 0.0,
            window_latest: 1440.0,
        }];
        for i in 1..=4usize {
            vertices.push(Vertex {
                id: i,
                x: i as f64,
                y: 0.0,
                service_duration: 0.0,
                load_change: if i <= 2 { 1 } else { -1 },
                window_earliest: 0.0,
                window_latest: 1440.0,
            });
        }
        Instance::new("t2", 2, 6, 480.0, 90.0, vertices)
    }

    #[test]
    fn minimal_valid_pairing_has_no_defects() {
        let inst = two_request_instance();
        let mut sol = Solution::empty(&inst);
        sol.insert_request(&inst, 1, 0, 0, 1);
        sol.insert_request(&inst, 2, 0, 2, 3);
        assert!(validate_solution(&inst, &sol).is_empty());
    }

    #[test]
    fn dropoff_before_pickup_is_a_precedence_defect() {
        let inst = two_request_instance();
        let mut sol = Solution::empty(&inst);
        sol.routes[0].vertex_sequence = vec![3, 1];
        sol.assignment[0] = Some(0);
        sol.routes[1].vertex_sequence = vec![2, 4];
        sol.assignment[1] = Some(1);
        let defects = validate_solution(&inst, &sol);
        assert_eq!(defects.len(), 1);
        assert_eq!(defects[0].request, 1);
        assert_eq!(defects[0].kind, DefectKind::PrecedenceViolated);
    }

    #[test]
    fn pair_on_two_vehicles_is_a_split_pair_defect() {
        let inst = two_request_instance();
        let mut sol = Solution::empty(&inst);
        sol.routes[0].vertex_sequence = vec![1];
        sol.routes[1].vertex_sequence = vec![3];
        sol.assignment[0] = Some(0);
        sol.routes[0].vertex_sequence.extend([2, 4]);
        sol.assignment[1] = Some(0);
        let defects = validate_solution(&inst, &sol);
        assert!(defects
            .iter()
            .any(|d| d.request == 1 && d.kind == DefectKind::SplitPair));
    }

    #[test]
    fn unassigned_request_is_reported() {
        let inst = two_request_instance();
        let mut sol = Solution::empty(&inst);
        sol.insert_request(&inst, 1, 0, 0, 1);
        let defects = validate_solution(&inst, &sol);
        assert_eq!(defects.len(), 1);
        assert_eq!(defects[0].request, 2);
        assert_eq!(defects[0].kind, DefectKind::Unassigned);
    }

    #[test]
    fn remove_then_insert_round_trips() {
        let inst = two_request_instance();
        let mut sol = Solution::empty(&inst);
        sol.insert_request(&inst, 1, 0, 0, 1);
        sol.insert_request(&inst, 2, 0, 1, 2);
        let original = sol.clone();
        let (veh, p, d) = sol.remove_request(&inst, 2);
        sol.insert_request(&inst, 2, veh, p, d);
        assert_eq!(sol, original);
    }

    #[test]
    fn travel_matrix_is_euclidean_and_symmetric() {
        let vertices = vec![
            Vertex {
                id: 0,
                x: 0.0,
                y: 0.0,
                service_duration: 0.0,
                load_change: 0,
                window_earliest: 0.0,
                window_latest: 1440.0,
            },
            Vertex {
                id: 1,
                x: 3.0,
                y: 4.0,
                service_duration: 0.0,
                load_change: 1,
                window_earliest: 0.0,
                window_latest: 1440.0,
            },
            Vertex {
                id: 2,
                x: 0.0,
                y: 4.0,
                service_duration: 0.0,
                load_change: -1,
                window_earliest: 0.0,
                window_latest: 1440.0,
            },
        ];
        let inst = Instance::new("tri", 1, 6, 480.0, 90.0, vertices);
        assert_eq!(inst.travel(0, 1), 5.0);
        assert_eq!(inst.travel(1, 0), 5.0);
        assert_eq!(inst.travel(0, 0), 0.0);
    }
}

//! Random instance generation with benchmark-like parameters. Used for
//! oracle-backed property tests and for producing small reproducible
//! fixtures.

use crate::model::{Instance, Vertex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generation parameters. Defaults copy the published benchmark bounds:
/// capacity 6, ride-time bound 90, route-duration bound 480, horizon 1440.
#[derive(Debug, Clone)]
pub struct GenParams {
    pub vehicle_capacity: i32,
    pub max_route_duration: f64,
    pub max_ride_time: f64,
    pub horizon: f64,
    /// Coordinates are drawn uniformly from `[-half_width, half_width]^2`;
    /// the depot sits at the center.
    pub half_width: f64,
    pub service_duration: f64,
    /// Width range (inclusive, integral minutes) of the narrow window each
    /// request gets on exactly one side.
    pub window_width: (u32, u32),
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            vehicle_capacity: 6,
            max_route_duration: 480.0,
            max_ride_time: 90.0,
            horizon: 1440.0,
            half_width: 10.0,
            service_duration: 10.0,
            window_width: (15, 45),
        }
    }
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Generates an instance with `n` requests and `m` vehicles. Each request
/// gets a narrow window on one side (pickup or drop-off, chosen at random)
/// and the full `[0, T]` window on the other, so exactly one vertex per
/// request is critical.
pub fn generate(name: &str, n: usize, m: usize, seed: u64, params: &GenParams) -> Instance {
    assert!(m >= 1, "need at least one vehicle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hw = params.half_width;
    let t = params.horizon;

    let depot = Vertex {
        id: 0,
        x: 0.0,
        y: 0.0,
        service_duration: 0.0,
        load_change: 0,
        window_earliest: 0.0,
        window_latest: t,
    };
    let mut pickups = Vec::with_capacity(n);
    let mut dropoffs = Vec::with_capacity(n);
    for i in 1..=n {
        let mut coords = || {
            (
                round3(rng.random_range(-hw..=hw)),
                round3(rng.random_range(-hw..=hw)),
            )
        };
        let (px, py) = coords();
        let (dx, dy) = coords();
        let width = rng.random_range(params.window_width.0..=params.window_width.1) as f64;
        // Leave room at both ends of the day, and keep the window spread
        // within what the fleet's route-duration budget can cover, so the
        // generated instance is servable by its m vehicles.
        let lo = 60u32;
        let shift_capacity = (m as f64 * params.max_route_duration * 0.7)
            .max(params.max_route_duration);
        let hi = ((t - 60.0 - width).min(shift_capacity) as u32).max(lo + 1);
        let start = rng.random_range(lo..hi) as f64;
        let narrow_on_pickup = rng.random_bool(0.5);
        let (pick_window, drop_window) = if narrow_on_pickup {
            ((start, start + width), (0.0, t))
        } else {
            ((0.0, t), (start, start + width))
        };
        pickups.push(Vertex {
            id: i,
            x: px,
            y: py,
            service_duration: params.service_duration,
            load_change: 1,
            window_earliest: pick_window.0,
            window_latest: pick_window.1,
        });
        dropoffs.push(Vertex {
            id: i + n,
            x: dx,
            y: dy,
            service_duration: params.service_duration,
            load_change: -1,
            window_earliest: drop_window.0,
            window_latest: drop_window.1,
        });
    }
    let mut vertices = vec![depot];
    vertices.extend(pickups);
    vertices.extend(dropoffs);
    Instance::new(
        name,
        m,
        params.vehicle_capacity,
        params.max_route_duration,
        params.max_ride_time,
        vertices,
    )
}

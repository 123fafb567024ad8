//! Time-window tightening: shrinks the `[0, T]` window of each request's
//! non-critical vertex using its twin's window, the service duration, and the
//! ride-time bound. Any schedule feasible under the original windows and the
//! ride-time bound stays feasible under the tightened ones.

use crate::model::Instance;
use thiserror::Error;

/// Which side of a request carries the narrower (critical) time window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalVertex {
    Pickup,
    Dropoff,
}

#[derive(Debug, Error, PartialEq)]
pub enum TimeWindowError {
    #[error("request {request}: window adjustment yields earliest {earliest} > latest {latest}")]
    InfeasibleRequest {
        request: usize,
        earliest: f64,
        latest: f64,
    },
}

/// The vertex with the smaller window width is critical; ties go to the
/// pickup.
pub fn classify_critical(instance: &Instance, request: usize) -> CriticalVertex {
    let pickup = instance.vertex(request);
    let dropoff = instance.vertex(instance.dropoff_of(request));
    if dropoff.window_width() < pickup.window_width() {
        CriticalVertex::Dropoff
    } else {
        CriticalVertex::Pickup
    }
}

/// Returns a fresh instance with each request's non-critical window tightened.
/// The input is not modified; critical windows are untouched.
pub fn adjust_windows(instance: &Instance) -> Result<Instance, TimeWindowError> {
    let mut vertices = instance.vertices.clone();
    let ride_bound = instance.max_ride_time;
    for request in 1..=instance.n_requests {
        let dropoff_id = instance.dropoff_of(request);
        let service = vertices[request].service_duration;
        match classify_critical(instance, request) {
            CriticalVertex::Dropoff => {
                let (e_d, l_d) = {
                    let d = &vertices[dropoff_id];
                    (d.window_earliest, d.window_latest)
                };
                let p = &mut vertices[request];
                p.window_earliest = p.window_earliest.max(e_d - service - ride_bound);
                p.window_latest = p.window_latest.min(l_d - service);
                if p.window_earliest > p.window_latest {
                    return Err(TimeWindowError::InfeasibleRequest {
                        request,
                        earliest: p.window_earliest,
                        latest: p.window_latest,
                    });
                }
            }
            CriticalVertex::Pickup => {
                let (e_p, l_p) = {
                    let p = &vertices[request];
                    (p.window_earliest, p.window_latest)
                };
                let d = &mut vertices[dropoff_id];
                d.window_earliest = d.window_earliest.max(e_p + service);
                d.window_latest = d.window_latest.min(l_p + service + ride_bound);
                if d.window_earliest > d.window_latest {
                    return Err(TimeWindowError::InfeasibleRequest {
                        request,
                        earliest: d.window_earliest,
                        latest: d.window_latest,
                    });
                }
            }
        }
    }
    Ok(Instance::new(
        instance.name.clone(),
        instance.n_vehicles,
        instance.vehicle_capacity,
        instance.max_route_duration,
        instance.max_ride_time,
        vertices,
    ))
}

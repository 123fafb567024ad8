//! Dial-a-ride (DARP) solver library: domain model, benchmark instance I/O,
//! three-level route schedule evaluation, time-window tightening, greedy and
//! random construction, single-paired-insertion neighborhoods, a tabu search
//! engine with adaptive penalties, exhaustive oracles for tiny inputs, and a
//! multi-seed benchmark harness.

pub mod bench;
pub mod construction;
pub mod instance_io;
pub mod instgen;
pub mod model;
pub mod neighborhood;
pub mod oracle;
pub mod schedule;
pub mod tabu;
pub mod timewindow;

pub use model::{validate_solution, Defect, DefectKind, Instance, Route, Solution, Vertex};
pub use schedule::{
    evaluate_route, objective, violations, EvaluationLevel, Penalties, RouteEvaluation,
    RouteEvaluator, SlackPolicy, Violations, SCHEDULE_EPS,
};
pub use tabu::{search, ClockMode, SearchConfig, SearchOutcome, Variant};

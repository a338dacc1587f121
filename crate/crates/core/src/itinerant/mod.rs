//! The itinerant car simulation on a power-of-two tree, its general-metric
//! wrapper, traces and the checks that audit a finished run.

mod audit;
mod metric_sim;
mod sim;
mod trace;

pub use audit::{
    component_surplus, level_census, walk_cost_audit, walk_cost_bound, CarAudit, CensusRow,
};
pub use metric_sim::{run_b, run_b_with, BArrival, MetricItinerant, RunBResult};
pub use sim::{
    run_a, run_a_with, Cascade, GarageSnapshot, GuardFailure, Hop, ItinerantSim, RunAResult,
    SimConfig,
};
pub use trace::{trace_csv, EventKind, TraceEvent, TRACE_HEADER};

//! Metric spaces, garage layouts, minimum spanning trees and the power-of-two
//! tree metric derived from them.

mod layout;
mod space;
mod tree;
mod union_find;

pub use layout::{merge_colocated, GarageLayout};
pub use space::{validate_metric, MetricSpace, MetricViolation, METRIC_TOLERANCE};
pub use tree::{
    build_mst, power_of_two_tree, round_up_exponent, scale_and_round, units, PowerOfTwoTree,
    SpanningEdge, SpanningTree, TreeEdge, Units, MAX_EXPONENT, POWER_OF_TWO_TOLERANCE,
};
pub use union_find::UnionFind;

//! Problem instances: model, validation, JSON files and generators.

mod generate;
mod io;
mod model;

pub use generate::{
    gen_adaptive_star, gen_euclidean_random, gen_graph_random, gen_greedy_hard_line,
    gen_line_random, gen_random, star_space, Family, GenParams, GREEDY_HARD_EPSILON,
    MIN_GARAGE_SEPARATION,
};
pub use io::{from_json, read_instance, to_json, write_instance};
pub use model::{validate_instance, Instance, Violation};

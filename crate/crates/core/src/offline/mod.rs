//! Exact offline optima: minimum-cost transportation and optimal bottleneck
//! matchings on trees, plus exhaustive oracles for tiny inputs.

mod bottleneck;
mod brute;
mod flow;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instances::Instance;

pub use bottleneck::{
    bottleneck_greedy, bottleneck_on_spanning, bottleneck_threshold, bottleneck_units,
};
pub use brute::{brute_force_bottleneck, brute_force_opt, BRUTE_FORCE_SLOTS};
pub use flow::TransportFlow;

pub const PLAN_HEADER: &str = "car,assigned_garage,distance_cost,bottleneck_cost";

/// A complete assignment of cars to garages with per-car costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub assignment: Vec<usize>,
    pub distance: Vec<f64>,
    /// Present for plans computed on a tree.
    pub bottleneck: Option<Vec<f64>>,
}

impl Plan {
    pub fn total_distance(&self) -> f64 {
        self.distance.iter().sum()
    }

    pub fn total_bottleneck(&self) -> Option<f64> {
        self.bottleneck.as_ref().map(|b| b.iter().sum())
    }

    pub fn loads(&self, garages: usize) -> Vec<u32> {
        let mut load = vec![0; garages];
        for &g in &self.assignment {
            load[g] += 1;
        }
        load
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(PLAN_HEADER);
        out.push('\n');
        for (car, &g) in self.assignment.iter().enumerate() {
            let _ = write!(out, "{car},{g},{}", self.distance[car]);
            match &self.bottleneck {
                Some(b) => {
                    let _ = writeln!(out, ",{}", b[car]);
                }
                None => out.push_str(",\n"),
            }
        }
        out
    }
}

/// Minimum total-distance assignment of all arrivals of `inst`.
pub fn opt_mincost(inst: &Instance) -> Result<Plan> {
    inst.check()?;
    let mut flow = TransportFlow::new(inst.layout.capacities().to_vec());
    for &p in &inst.arrivals {
        let costs = inst
            .layout
            .points()
            .iter()
            .map(|&g| inst.space.d(p, g))
            .collect();
        flow.add_car(costs)?;
    }
    let assignment = flow.assignment().to_vec();
    let distance = (0..flow.car_count()).map(|c| flow.car_cost(c)).collect();
    Ok(Plan {
        assignment,
        distance,
        bottleneck: None,
    })
}

/// Minimum total cost for a raw cost matrix `cost[car][garage]`.
pub fn opt_cost_matrix(capacities: &[u32], cost: &[Vec<f64>]) -> Result<f64> {
    let total: u64 = capacities.iter().map(|&c| c as u64).sum();
    if cost.len() as u64 > total {
        return Err(Error::Input(format!(
            "{} cars exceed total capacity {total}",
            cost.len()
        )));
    }
    let mut flow = TransportFlow::new(capacities.to_vec());
    for row in cost {
        flow.add_car(row.clone())?;
    }
    Ok(flow.total_cost())
}

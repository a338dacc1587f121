use std::ops::Add;

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::metric::{PowerOfTwoTree, Units};
use crate::offline::Plan;

pub const BRUTE_FORCE_SLOTS: u64 = 8;

struct Search<'a, K> {
    cost: &'a [Vec<K>],
    residual: Vec<u32>,
    current: Vec<usize>,
    best: Option<(K, Vec<usize>)>,
}

impl<K: Copy + PartialOrd + Add<Output = K>> Search<'_, K> {
    fn go(&mut self, car: usize, acc: K) {
        if car == self.cost.len() {
            if self.best.as_ref().is_none_or(|(b, _)| acc < *b) {
                self.best = Some((acc, self.current.clone()));
            }
            return;
        }
        for g in 0..self.residual.len() {
            if self.residual[g] == 0 {
                continue;
            }
            self.residual[g] -= 1;
            self.current.push(g);
            self.go(car + 1, acc + self.cost[car][g]);
            self.current.pop();
            self.residual[g] += 1;
        }
    }
}

/// Lexicographically first assignment of minimum total cost.
fn exhaustive<K: Copy + PartialOrd + Add<Output = K>>(
    capacities: &[u32],
    cost: &[Vec<K>],
    zero: K,
) -> Vec<usize> {
    let mut search = Search {
        cost,
        residual: capacities.to_vec(),
        current: Vec::with_capacity(cost.len()),
        best: None,
    };
    search.go(0, zero);
    search.best.map(|(_, a)| a).unwrap_or_default()
}

fn check_slots(capacities: &[u32], cars: usize, limit: u64) -> Result<()> {
    let slots: u64 = capacities.iter().map(|&c| c as u64).sum();
    if slots > limit {
        return Err(Error::Input(format!(
            "{slots} slots exceed the brute-force limit {limit}"
        )));
    }
    if cars as u64 > slots {
        return Err(Error::Input(format!(
            "{cars} arrivals exceed total capacity {slots}"
        )));
    }
    Ok(())
}

/// Exact minimum-distance plan by enumerating every feasible assignment.
pub fn brute_force_opt(inst: &Instance, limit: u64) -> Result<Plan> {
    check_slots(inst.layout.capacities(), inst.car_count(), limit)?;
    inst.check()?;
    let cost: Vec<Vec<f64>> = inst
        .arrivals
        .iter()
        .map(|&p| {
            inst.layout
                .points()
                .iter()
                .map(|&g| inst.space.d(p, g))
                .collect()
        })
        .collect();
    let assignment = exhaustive(inst.layout.capacities(), &cost, 0.0);
    Ok(Plan {
        distance: assignment
            .iter()
            .enumerate()
            .map(|(c, &g)| cost[c][g])
            .collect(),
        bottleneck: None,
        assignment,
    })
}

/// Exact minimum-bottleneck plan on `T` by enumeration, compared in exact units.
pub fn brute_force_bottleneck(
    tree: &PowerOfTwoTree,
    capacities: &[u32],
    arrivals: &[usize],
    limit: u64,
) -> Result<Plan> {
    let m = tree.vertex_count();
    if capacities.len() != m || arrivals.iter().any(|&g| g >= m) {
        return Err(Error::Input(
            "arrivals or capacities do not match the tree".into(),
        ));
    }
    check_slots(capacities, arrivals.len(), limit)?;
    let cost: Vec<Vec<Units>> = arrivals
        .iter()
        .map(|&a| (0..m).map(|g| tree.bottleneck_units(a, g)).collect())
        .collect();
    let assignment = exhaustive(capacities, &cost, 0);
    Ok(Plan {
        distance: arrivals
            .iter()
            .zip(&assignment)
            .map(|(&a, &g)| tree.to_length(tree.path_units(a, g)))
            .collect(),
        bottleneck: Some(
            assignment
                .iter()
                .enumerate()
                .map(|(c, &g)| tree.to_length(cost[c][g]))
                .collect(),
        ),
        assignment,
    })
}

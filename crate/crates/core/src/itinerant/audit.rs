use crate::itinerant::RunAResult;
use crate::metric::{units, PowerOfTwoTree, UnionFind, Units};
use crate::walks::level_tree;

/// Per-level comparison between the simulated walk levels and the capacity
/// surplus of the level components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusRow {
    pub level: u32,
    /// Cars with final walk level at least `level + 1`.
    pub lhs: usize,
    /// Sum over components of `T` without edges of exponent `>= level` of
    /// `max(arrivals - capacity, 0)`.
    pub rhs: usize,
}

impl CensusRow {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Surplus of arrivals over capacity summed over the components of `T` that
/// remain when every edge with exponent `>= level` is removed.
pub fn component_surplus(
    tree: &PowerOfTwoTree,
    capacities: &[u32],
    arrivals: &[usize],
    level: u32,
) -> usize {
    let m = tree.vertex_count();
    let mut uf = UnionFind::new(m);
    for e in tree.edges() {
        if e.exponent < level {
            uf.union(e.u, e.v);
        }
    }
    let mut demand = vec![0i64; m];
    for &g in arrivals {
        demand[uf.find(g)] += 1;
    }
    for (g, &c) in capacities.iter().enumerate() {
        demand[uf.find(g)] -= c as i64;
    }
    demand.iter().filter(|&&d| d > 0).map(|&d| d as usize).sum()
}

/// Rows for every level from 0 through one past the highest level reached.
pub fn level_census(
    run: &RunAResult,
    tree: &PowerOfTwoTree,
    capacities: &[u32],
    arrivals: &[usize],
) -> Vec<CensusRow> {
    let top = run.max_level().max(tree.top_level()) + 1;
    (0..=top)
        .map(|level| CensusRow {
            level,
            lhs: run.level.iter().filter(|&&l| l > level).count(),
            rhs: component_surplus(tree, capacities, arrivals, level),
        })
        .collect()
}

/// Per-car movement bound: `sum_{j < l} 2 (l - j) 2^j e_j(t)` where `e_j(t)` counts
/// edges of exponent `j` in `T_l(i)`, `i` the arrival garage and `l` the final level.
pub fn walk_cost_bound(tree: &PowerOfTwoTree, root: usize, level: u32) -> Units {
    let lt = level_tree(tree, root, level);
    (0..level)
        .map(|j| 2 * (level - j) as Units * units(j) * lt.count_exponent(j) as Units)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CarAudit {
    pub car: usize,
    pub cost: Units,
    pub bound: Units,
}

/// Cars whose movement exceeds [`walk_cost_bound`].
pub fn walk_cost_audit(run: &RunAResult, tree: &PowerOfTwoTree) -> Vec<CarAudit> {
    (0..run.level.len())
        .map(|car| CarAudit {
            car,
            cost: run.car_units[car],
            bound: walk_cost_bound(tree, run.arrival_garage[car], run.level[car]),
        })
        .filter(|a| a.cost > a.bound)
        .collect()
}

//! Online transportation: the itinerant-derived assignment rule, the greedy and
//! retrospective baselines, and the witness that the rule's choice depends on
//! history.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::itinerant::{MetricItinerant, RunBResult, SimConfig};
use crate::metric::{GarageLayout, MetricSpace};
use crate::offline::TransportFlow;

pub const ASSIGNMENT_HEADER: &str = "car,arrival_point,assigned_garage,cost";

/// An online algorithm that irrevocably picks a garage for each arriving car.
pub trait OnlineAssigner {
    fn name(&self) -> &'static str;

    /// Garage index for a car arriving at `point`.
    fn assign(&mut self, point: usize) -> Result<usize>;
}

/// Record of an online run.
#[derive(Debug, Clone, PartialEq)]
pub struct OnlineAssignment {
    pub algorithm: String,
    pub points: Vec<usize>,
    pub assigned: Vec<usize>,
    pub costs: Vec<f64>,
    pub total: f64,
    /// Residual capacities after each arrival.
    pub residual_history: Vec<Vec<u32>>,
}

impl OnlineAssignment {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(ASSIGNMENT_HEADER);
        out.push('\n');
        for car in 0..self.assigned.len() {
            let _ = writeln!(
                out,
                "{car},{},{},{}",
                self.points[car], self.assigned[car], self.costs[car]
            );
        }
        out
    }
}

/// Feeds every arrival of `inst` to `alg` and checks capacity feasibility.
pub fn run_online<A: OnlineAssigner>(inst: &Instance, alg: &mut A) -> Result<OnlineAssignment> {
    inst.check()?;
    let mut residual = inst.layout.capacities().to_vec();
    let mut out = OnlineAssignment {
        algorithm: alg.name().to_string(),
        points: inst.arrivals.clone(),
        assigned: Vec::with_capacity(inst.car_count()),
        costs: Vec::with_capacity(inst.car_count()),
        total: 0.0,
        residual_history: Vec::with_capacity(inst.car_count()),
    };
    for &p in &inst.arrivals {
        let g = alg.assign(p)?;
        if g >= residual.len() || residual[g] == 0 {
            return Err(Error::Invariant(format!(
                "{} assigned a car to garage {g} without spare capacity",
                alg.name()
            )));
        }
        residual[g] -= 1;
        let cost = inst.space.d(p, inst.layout.point(g));
        out.assigned.push(g);
        out.costs.push(cost);
        out.total += cost;
        out.residual_history.push(residual.clone());
    }
    Ok(out)
}

/// Assigns each car to the garage whose occupancy grew by one in the itinerant
/// simulation.
#[derive(Debug, Clone)]
pub struct ItinerantAssigner {
    sim: MetricItinerant,
}

impl ItinerantAssigner {
    pub fn new(space: &MetricSpace, layout: &GarageLayout) -> Result<Self> {
        Self::with_config(space, layout, SimConfig::default())
    }

    pub fn with_config(
        space: &MetricSpace,
        layout: &GarageLayout,
        config: SimConfig,
    ) -> Result<Self> {
        Ok(ItinerantAssigner {
            sim: MetricItinerant::new(space, layout, config)?,
        })
    }

    pub fn simulation(&self) -> &MetricItinerant {
        &self.sim
    }

    pub fn into_simulation(self) -> MetricItinerant {
        self.sim
    }
}

impl OnlineAssigner for ItinerantAssigner {
    fn name(&self) -> &'static str {
        "C"
    }

    fn assign(&mut self, point: usize) -> Result<usize> {
        let arrival = self.sim.arrive(point)?;
        let raised: Vec<usize> = (0..arrival.delta.len())
            .filter(|&g| arrival.delta[g] != 0)
            .collect();
        match raised.as_slice() {
            [g] if arrival.delta[*g] == 1 => Ok(*g),
            _ => Err(Error::Invariant(format!(
                "car {} changed occupancy by {:?}",
                arrival.car, arrival.delta
            ))),
        }
    }
}

/// Nearest garage with spare capacity, ties to the lowest index.
#[derive(Debug, Clone)]
pub struct GreedyAssigner {
    space: MetricSpace,
    layout: GarageLayout,
    residual: Vec<u32>,
}

impl GreedyAssigner {
    pub fn new(space: &MetricSpace, layout: &GarageLayout) -> Result<Self> {
        Ok(GreedyAssigner {
            space: space.clone(),
            layout: layout.clone(),
            residual: layout.capacities().to_vec(),
        })
    }
}

impl OnlineAssigner for GreedyAssigner {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn assign(&mut self, point: usize) -> Result<usize> {
        self.space.distance(point, point)?;
        let mut best: Option<(f64, usize)> = None;
        for g in 0..self.layout.len() {
            if self.residual[g] == 0 {
                continue;
            }
            let d = self.space.d(point, self.layout.point(g));
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, g));
            }
        }
        let (_, g) = best.ok_or_else(|| Error::Input("every garage is full".into()))?;
        self.residual[g] -= 1;
        Ok(g)
    }
}

/// Keeps residual capacities equal to those of an optimal matching of the cars
/// seen so far.
#[derive(Debug, Clone)]
pub struct RetrospectiveAssigner {
    space: MetricSpace,
    layout: GarageLayout,
    flow: TransportFlow,
}

impl RetrospectiveAssigner {
    pub fn new(space: &MetricSpace, layout: &GarageLayout) -> Result<Self> {
        Ok(RetrospectiveAssigner {
            space: space.clone(),
            layout: layout.clone(),
            flow: TransportFlow::new(layout.capacities().to_vec()),
        })
    }

    /// Residual capacities of the current optimal matching.
    pub fn optimal_residual(&self) -> Vec<u32> {
        self.flow.residual()
    }

    pub fn optimal_cost(&self) -> f64 {
        self.flow.total_cost()
    }
}

impl OnlineAssigner for RetrospectiveAssigner {
    fn name(&self) -> &'static str {
        "retrospective"
    }

    fn assign(&mut self, point: usize) -> Result<usize> {
        self.space.distance(point, point)?;
        let before = self.flow.residual();
        let costs = self
            .layout
            .points()
            .iter()
            .map(|&g| self.space.d(point, g))
            .collect();
        let g = self.flow.add_car(costs)?;
        let after = self.flow.residual();
        let dropped: Vec<usize> = (0..before.len())
            .filter(|&i| after[i] < before[i])
            .collect();
        if dropped != [g] {
            return Err(Error::Invariant(format!(
                "optimal residuals moved from {before:?} to {after:?}"
            )));
        }
        Ok(g)
    }
}

pub fn run_c(inst: &Instance) -> Result<OnlineAssignment> {
    run_c_with_b(inst).map(|(c, _)| c)
}

/// Runs the assignment rule and returns the underlying simulation as well,
/// checking after every arrival that both agree on residual capacities.
pub fn run_c_with_b(inst: &Instance) -> Result<(OnlineAssignment, RunBResult)> {
    inst.check()?;
    let mut alg = ItinerantAssigner::new(&inst.space, &inst.layout)?;
    let mut residual = inst.layout.capacities().to_vec();
    let mut out = OnlineAssignment {
        algorithm: alg.name().to_string(),
        points: inst.arrivals.clone(),
        assigned: Vec::new(),
        costs: Vec::new(),
        total: 0.0,
        residual_history: Vec::new(),
    };
    for &p in &inst.arrivals {
        let g = alg.assign(p)?;
        residual[g] -= 1;
        if residual != alg.simulation().residual() {
            return Err(Error::Invariant(format!(
                "residuals diverged after car {}: {residual:?} vs {:?}",
                out.assigned.len(),
                alg.simulation().residual()
            )));
        }
        let cost = inst.space.d(p, inst.layout.point(g));
        out.assigned.push(g);
        out.costs.push(cost);
        out.total += cost;
        out.residual_history.push(residual.clone());
    }
    Ok((out, alg.into_simulation().finish()))
}

pub fn run_greedy(inst: &Instance) -> Result<OnlineAssignment> {
    run_online(inst, &mut GreedyAssigner::new(&inst.space, &inst.layout)?)
}

pub fn run_retrospective(inst: &Instance) -> Result<OnlineAssignment> {
    run_online(
        inst,
        &mut RetrospectiveAssigner::new(&inst.space, &inst.layout)?,
    )
}

/// Five unit-capacity garages `g1..g5` (indices 0..4) on the tree metric with
/// edges g1-g5 and g5-g4 of length 1 and g5-g3, g5-g2 of length 2.
pub fn mpfs_fixture() -> Result<(MetricSpace, GarageLayout)> {
    let edges = [(0, 4, 1.0), (4, 3, 1.0), (4, 2, 2.0), (4, 1, 2.0)];
    let n = 5;
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b, w) in &edges {
        d[a][b] = w;
        d[b][a] = w;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    Ok((
        MetricSpace::explicit(d)?,
        GarageLayout::unit((0..n).collect())?,
    ))
}

/// Outcome of running the assignment rule on two histories that end in the same
/// set of unfull garages before the same final arrival.
#[derive(Debug, Clone, PartialEq)]
pub struct MpfsWitness {
    pub histories: [Vec<usize>; 2],
    pub unfull_before: Vec<usize>,
    pub assigned: [usize; 2],
}

impl MpfsWitness {
    pub fn differs(&self) -> bool {
        self.assigned[0] != self.assigned[1]
    }

    pub fn report(&self) -> String {
        let mut out = String::from("history,arrivals,unfull_before,test_car_garage\n");
        let unfull: Vec<String> = self
            .unfull_before
            .iter()
            .map(|g| format!("g{}", g + 1))
            .collect();
        for (h, arrivals) in self.histories.iter().enumerate() {
            let names: Vec<String> = arrivals.iter().map(|g| format!("g{}", g + 1)).collect();
            let _ = writeln!(
                out,
                "{},{},{},g{}",
                h + 1,
                names.join(" "),
                unfull.join(" "),
                self.assigned[h] + 1
            );
        }
        out
    }
}

pub fn mpfs_witness() -> Result<MpfsWitness> {
    let (space, layout) = mpfs_fixture()?;
    let histories = [vec![0, 2, 4, 0], vec![0, 2, 2, 0]];
    let mut unfull = Vec::new();
    let mut assigned = [0; 2];
    for (h, arrivals) in histories.iter().enumerate() {
        let mut alg = ItinerantAssigner::new(&space, &layout)?;
        let (&t, prefix) = arrivals.split_last().expect("non-empty history");
        for &p in prefix {
            alg.assign(p)?;
        }
        let open: Vec<usize> = alg
            .simulation()
            .residual()
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(|(g, _)| g)
            .collect();
        unfull.push(open);
        assigned[h] = alg.assign(t)?;
    }
    if unfull[0] != unfull[1] {
        return Err(Error::Input(format!(
            "fixture histories leave different unfull garages: {:?} vs {:?}",
            unfull[0], unfull[1]
        )));
    }
    Ok(MpfsWitness {
        histories,
        unfull_before: unfull.swap_remove(0),
        assigned,
    })
}

use crate::error::Result;
use crate::instances::Instance;
use crate::itinerant::{EventKind, ItinerantSim, RunAResult, SimConfig, TraceEvent};
use crate::metric::{power_of_two_tree, GarageLayout, MetricSpace, PowerOfTwoTree, SpanningTree};

/// What the general-metric simulation did for one arrival.
#[derive(Debug, Clone, PartialEq)]
pub struct BArrival {
    pub car: usize,
    pub point: usize,
    pub nearest: usize,
    /// Distance from the arrival point to its nearest garage.
    pub first_move: f64,
    /// M-distance of all garage-to-garage hops in the cascade.
    pub hop_cost: f64,
    pub filled_garage: usize,
    pub delta: Vec<i64>,
}

/// Itinerant car simulation on a general metric: each car is first driven to its
/// nearest garage, then the tree simulation runs on `T` and every hop is paid at
/// its M-distance.
#[derive(Debug, Clone)]
pub struct MetricItinerant {
    space: MetricSpace,
    layout: GarageLayout,
    spanning: SpanningTree,
    sim: ItinerantSim,
    arrivals: Vec<BArrival>,
    total_cost: f64,
}

impl MetricItinerant {
    pub fn new(space: &MetricSpace, layout: &GarageLayout, config: SimConfig) -> Result<Self> {
        let (spanning, tree) = power_of_two_tree(space, layout)?;
        let sim = ItinerantSim::new(tree, layout.capacities().to_vec(), config)?;
        Ok(MetricItinerant {
            space: space.clone(),
            layout: layout.clone(),
            spanning,
            sim,
            arrivals: Vec::new(),
            total_cost: 0.0,
        })
    }

    pub fn tree(&self) -> &PowerOfTwoTree {
        self.sim.tree()
    }

    pub fn sim(&self) -> &ItinerantSim {
        &self.sim
    }

    pub fn residual(&self) -> Vec<u32> {
        self.sim.residual()
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    pub fn arrive(&mut self, point: usize) -> Result<&BArrival> {
        self.space.distance(point, point)?;
        let (nearest, first_move) = self.layout.nearest(&self.space, point);
        let cascade = self.sim.arrive(nearest)?;
        let hop_cost: f64 = cascade
            .hops
            .iter()
            .map(|h| {
                self.space
                    .d(self.layout.point(h.from), self.layout.point(h.to))
            })
            .sum();
        self.total_cost += first_move + hop_cost;
        self.arrivals.push(BArrival {
            car: cascade.car,
            point,
            nearest,
            first_move,
            hop_cost,
            filled_garage: cascade.filled_garage,
            delta: cascade.delta,
        });
        Ok(self.arrivals.last().expect("just pushed"))
    }

    pub fn finish(self) -> RunBResult {
        let tree = self.sim.tree().clone();
        let run_a = self.sim.finish();
        let trace = run_a
            .trace
            .iter()
            .map(|e| {
                let hop_length = match (e.kind, e.from_garage, e.to_garage) {
                    (EventKind::Arrive, _, _) => self.arrivals[e.car].first_move,
                    (EventKind::Hop, Some(a), Some(b)) => {
                        self.space.d(self.layout.point(a), self.layout.point(b))
                    }
                    _ => 0.0,
                };
                TraceEvent {
                    hop_length,
                    ..e.clone()
                }
            })
            .collect();
        RunBResult {
            arrivals: self.arrivals,
            total_cost: self.total_cost,
            spanning: self.spanning,
            tree,
            run_a,
            trace,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunBResult {
    pub arrivals: Vec<BArrival>,
    pub total_cost: f64,
    pub spanning: SpanningTree,
    pub tree: PowerOfTwoTree,
    /// The tree simulation on the snapped arrivals, costs in tree lengths.
    pub run_a: RunAResult,
    /// Same events as `run_a.trace`, with hop lengths measured in M.
    pub trace: Vec<TraceEvent>,
}

impl RunBResult {
    pub fn first_move_cost(&self) -> f64 {
        self.arrivals.iter().map(|a| a.first_move).sum()
    }
}

pub fn run_b(inst: &Instance) -> Result<RunBResult> {
    run_b_with(inst, SimConfig::default())
}

pub fn run_b_with(inst: &Instance, config: SimConfig) -> Result<RunBResult> {
    inst.check()?;
    let mut sim = MetricItinerant::new(&inst.space, &inst.layout, config)?;
    for &p in &inst.arrivals {
        sim.arrive(p)?;
    }
    Ok(sim.finish())
}

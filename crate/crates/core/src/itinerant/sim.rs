use crate::error::{Error, Result};
use crate::itinerant::{EventKind, TraceEvent};
use crate::metric::{units, GarageLayout, PowerOfTwoTree, Units};
use crate::walks::{ChildOrder, WalkCache, WalkCursor};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub order: ChildOrder,
    /// Check the level-up guard on every level transition.
    pub guards: bool,
    pub record_trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            order: ChildOrder::Ascending,
            guards: true,
            record_trace: true,
        }
    }
}

/// State of one garage at the moment a guard failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarageSnapshot {
    pub garage: usize,
    pub capacity: u32,
    /// Current walk levels of the parked cars.
    pub parked_levels: Vec<u32>,
}

/// A car began walk level `level` while `T_{level-1}(root)` was not saturated
/// with cars of level at most `level - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardFailure {
    pub car: usize,
    pub root: usize,
    pub level: u32,
    pub reason: String,
    pub snapshot: Vec<GarageSnapshot>,
}

/// A garage-to-garage move of one car during a cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hop {
    pub car: usize,
    pub from: usize,
    pub to: usize,
    pub units: Units,
}

/// Everything that happened in response to one arrival.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cascade {
    pub car: usize,
    pub arrival_garage: usize,
    pub hops: Vec<Hop>,
    /// The garage that was unfull before the arrival and received the net extra car.
    pub filled_garage: usize,
    /// Per-garage change in parked cars.
    pub delta: Vec<i64>,
    pub ejections: usize,
}

/// Itinerant car simulation on a power-of-two tree.
///
/// Exactly one car moves at a time. A moving car on level `j` that reaches a full
/// garage whose highest-level occupant is on level `b > j` takes that occupant's
/// spot; the occupant resumes its own walk from the tour position where it parked.
/// Ties among highest-level occupants eject the most recent car.
#[derive(Debug, Clone)]
pub struct ItinerantSim {
    tree: PowerOfTwoTree,
    capacities: Vec<u32>,
    walks: WalkCache,
    config: SimConfig,
    cursors: Vec<WalkCursor>,
    parked_at: Vec<Option<usize>>,
    occupants: Vec<Vec<usize>>,
    parked_total: u64,
    capacity_total: u64,
    trace: Vec<TraceEvent>,
    guard_failures: Vec<GuardFailure>,
}

impl ItinerantSim {
    pub fn new(tree: PowerOfTwoTree, capacities: Vec<u32>, config: SimConfig) -> Result<Self> {
        let m = tree.vertex_count();
        if capacities.len() != m {
            return Err(Error::Input(format!(
                "tree has {m} garages but {} capacities were given",
                capacities.len()
            )));
        }
        if let Some(g) = capacities.iter().position(|&c| c == 0) {
            return Err(Error::Input(format!("garage {g} has capacity 0")));
        }
        if let ChildOrder::Ranked(rank) = &config.order {
            if rank.len() != m {
                return Err(Error::Input(format!(
                    "walk order ranks {} garages, tree has {m}",
                    rank.len()
                )));
            }
        }
        let walks = WalkCache::new(&tree, config.order.clone());
        let capacity_total = capacities.iter().map(|&c| c as u64).sum();
        Ok(ItinerantSim {
            tree,
            capacities,
            walks,
            config,
            cursors: Vec::new(),
            parked_at: Vec::new(),
            occupants: vec![Vec::new(); m],
            parked_total: 0,
            capacity_total,
            trace: Vec::new(),
            guard_failures: Vec::new(),
        })
    }

    pub fn tree(&self) -> &PowerOfTwoTree {
        &self.tree
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn car_count(&self) -> usize {
        self.cursors.len()
    }

    pub fn occupancy(&self) -> Vec<u32> {
        self.occupants.iter().map(|o| o.len() as u32).collect()
    }

    pub fn residual(&self) -> Vec<u32> {
        self.occupants
            .iter()
            .zip(&self.capacities)
            .map(|(o, &c)| c - o.len() as u32)
            .collect()
    }

    pub fn is_full(&self, garage: usize) -> bool {
        self.occupants[garage].len() as u32 == self.capacities[garage]
    }

    pub fn cursor(&self, car: usize) -> &WalkCursor {
        &self.cursors[car]
    }

    pub fn parked_at(&self, car: usize) -> Option<usize> {
        self.parked_at[car]
    }

    /// Cars parked in `garage`, in the order they took their spot.
    pub fn occupants(&self, garage: usize) -> &[usize] {
        &self.occupants[garage]
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn guard_failures(&self) -> &[GuardFailure] {
        &self.guard_failures
    }

    fn record(
        &mut self,
        kind: EventKind,
        car: usize,
        from: Option<usize>,
        to: Option<usize>,
        hop: Units,
    ) {
        if !self.config.record_trace {
            return;
        }
        let level = self.cursors[car].level;
        let hop_length = self.tree.to_length(hop);
        self.trace.push(TraceEvent {
            ordinal: self.trace.len(),
            kind,
            car,
            from_garage: from,
            to_garage: to,
            hop_length,
            level,
        });
    }

    fn park(&mut self, car: usize, garage: usize) {
        self.occupants[garage].push(car);
        self.parked_at[car] = Some(garage);
        self.record(EventKind::Park, car, None, Some(garage), 0);
    }

    /// Highest-level occupant of `garage`; ties go to the largest car index.
    fn eviction_candidate(&self, garage: usize) -> (usize, u32) {
        self.occupants[garage]
            .iter()
            .map(|&c| (c, self.cursors[c].level))
            .max_by_key(|&(c, level)| (level, c))
            .expect("a full garage has occupants")
    }

    /// Processes one arrival at `garage` until every car is parked again.
    pub fn arrive(&mut self, garage: usize) -> Result<Cascade> {
        let m = self.tree.vertex_count();
        if garage >= m {
            return Err(Error::Input(format!(
                "arrival garage {garage} out of range for {m} garages"
            )));
        }
        if self.parked_total >= self.capacity_total {
            return Err(Error::Input(format!(
                "arrival {} exceeds total capacity {}",
                self.cursors.len() + 1,
                self.capacity_total
            )));
        }
        let before = self.occupancy();
        let car = self.cursors.len();
        self.cursors.push(WalkCursor::start(car, garage));
        self.parked_at.push(None);
        self.record(EventKind::Arrive, car, None, Some(garage), 0);

        let mut hops = Vec::new();
        let mut ejections = 0;
        let mut mover = car;
        let mut here = garage;
        loop {
            if !self.is_full(here) {
                self.park(mover, here);
                break;
            }
            let (occupant, occupant_level) = self.eviction_candidate(here);
            if self.cursors[mover].level < occupant_level {
                self.park(mover, here);
                let slot = self.occupants[here]
                    .iter()
                    .position(|&c| c == occupant)
                    .expect("occupant is parked here");
                self.occupants[here].remove(slot);
                self.parked_at[occupant] = None;
                self.record(EventKind::Eject, occupant, Some(here), None, 0);
                ejections += 1;
                mover = occupant;
            }
            let step = self.cursors[mover].advance(&mut self.walks, &self.tree)?;
            if step.leveled_up {
                self.record(EventKind::LevelUp, mover, None, Some(step.garage), 0);
                if self.config.guards {
                    self.check_level_up(mover);
                }
            } else {
                self.record(
                    EventKind::Hop,
                    mover,
                    Some(here),
                    Some(step.garage),
                    step.hop,
                );
                hops.push(Hop {
                    car: mover,
                    from: here,
                    to: step.garage,
                    units: step.hop,
                });
            }
            here = step.garage;
        }
        self.parked_total += 1;

        let delta: Vec<i64> = self
            .occupancy()
            .iter()
            .zip(&before)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect();
        Ok(Cascade {
            car,
            arrival_garage: garage,
            hops,
            filled_garage: here,
            delta,
            ejections,
        })
    }

    /// The level-up guard: all of `T_{l-1}(root)` is full, with cars of level `<= l-1`.
    fn check_level_up(&mut self, car: usize) {
        let cursor = self.cursors[car];
        let below = cursor.level - 1;
        let lt = self.walks.level_tree(&self.tree, cursor.root, below);
        let mut reasons = Vec::new();
        for &g in &lt.members {
            if !self.is_full(g) {
                reasons.push(format!("garage {g} is unfull"));
            }
            for &c in &self.occupants[g] {
                if self.cursors[c].level > below {
                    reasons.push(format!(
                        "car {c} in garage {g} is on level {} > {below}",
                        self.cursors[c].level
                    ));
                }
            }
        }
        if reasons.is_empty() {
            return;
        }
        let snapshot = lt
            .members
            .iter()
            .map(|&g| GarageSnapshot {
                garage: g,
                capacity: self.capacities[g],
                parked_levels: self.occupants[g]
                    .iter()
                    .map(|&c| self.cursors[c].level)
                    .collect(),
            })
            .collect();
        self.guard_failures.push(GuardFailure {
            car,
            root: cursor.root,
            level: cursor.level,
            reason: reasons.join("; "),
            snapshot,
        });
    }

    pub fn finish(self) -> RunAResult {
        let final_garage = self
            .parked_at
            .iter()
            .map(|g| g.expect("every car is parked between arrivals"))
            .collect();
        let car_units: Vec<Units> = self.cursors.iter().map(|c| c.traveled).collect();
        RunAResult {
            scale: self.tree.scale(),
            arrival_garage: self.cursors.iter().map(|c| c.root).collect(),
            final_garage,
            level: self.cursors.iter().map(|c| c.level).collect(),
            total_units: car_units.iter().sum(),
            car_units,
            trace: self.trace,
            guard_failures: self.guard_failures,
        }
    }
}

/// Outcome of running the itinerant car simulation on a whole arrival sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RunAResult {
    pub scale: f64,
    pub arrival_garage: Vec<usize>,
    pub final_garage: Vec<usize>,
    /// Final walk level `l(t)` of every car.
    pub level: Vec<u32>,
    pub car_units: Vec<Units>,
    pub total_units: Units,
    pub trace: Vec<TraceEvent>,
    pub guard_failures: Vec<GuardFailure>,
}

impl RunAResult {
    pub fn total_cost(&self) -> f64 {
        self.total_units as f64 * self.scale
    }

    pub fn car_cost(&self, car: usize) -> f64 {
        self.car_units[car] as f64 * self.scale
    }

    /// Sum of `2^(l(t)-1)` over cars with `l(t) >= 1`, in tree units.
    pub fn level_sum_units(&self) -> Units {
        self.level
            .iter()
            .filter(|&&l| l >= 1)
            .map(|&l| units(l - 1))
            .sum()
    }

    pub fn max_level(&self) -> u32 {
        self.level.iter().copied().max().unwrap_or(0)
    }
}

/// Runs the simulation with the default walk order, guards on.
pub fn run_a(
    tree: &PowerOfTwoTree,
    layout: &GarageLayout,
    arrivals: &[usize],
) -> Result<RunAResult> {
    run_a_with(tree, layout, arrivals, SimConfig::default())
}

pub fn run_a_with(
    tree: &PowerOfTwoTree,
    layout: &GarageLayout,
    arrivals: &[usize],
    config: SimConfig,
) -> Result<RunAResult> {
    if arrivals.len() as u64 > layout.total_capacity() {
        return Err(Error::Input(format!(
            "{} arrivals exceed total capacity {}",
            arrivals.len(),
            layout.total_capacity()
        )));
    }
    let mut sim = ItinerantSim::new(tree.clone(), layout.capacities().to_vec(), config)?;
    for &g in arrivals {
        sim.arrive(g)?;
    }
    Ok(sim.finish())
}

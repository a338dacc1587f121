use std::fmt;

use crate::error::{Error, Result};
use crate::metric::{validate_metric, GarageLayout, MetricSpace, MetricViolation};

/// A metric, a garage layout and an arrival sequence `x_1..x_k'`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub space: MetricSpace,
    pub layout: GarageLayout,
    pub arrivals: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Metric(MetricViolation),
    NoGarages,
    CapacityCount { garages: usize, capacities: usize },
    ZeroCapacity { garage: usize },
    GarageOutOfRange { garage: usize, point: usize },
    ArrivalOutOfRange { car: usize, point: usize },
    Infeasible { arrivals: usize, capacity: u64 },
    ColocatedGarages { a: usize, b: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Metric(v) => write!(f, "metric: {v}"),
            Violation::NoGarages => write!(f, "no garages"),
            Violation::CapacityCount {
                garages,
                capacities,
            } => {
                write!(f, "{garages} garages but {capacities} capacities")
            }
            Violation::ZeroCapacity { garage } => write!(f, "garage {garage} has capacity 0"),
            Violation::GarageOutOfRange { garage, point } => {
                write!(f, "garage {garage} at point {point} outside the space")
            }
            Violation::ArrivalOutOfRange { car, point } => {
                write!(f, "car {car} arrives at point {point} outside the space")
            }
            Violation::Infeasible { arrivals, capacity } => {
                write!(f, "{arrivals} arrivals exceed total capacity {capacity}")
            }
            Violation::ColocatedGarages { a, b } => {
                write!(f, "garages {a} and {b} share a location")
            }
        }
    }
}

/// Every reason `inst` cannot be simulated; empty iff it is runnable.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out: Vec<Violation> = validate_metric(&inst.space)
        .into_iter()
        .map(Violation::Metric)
        .collect();
    let layout = &inst.layout;
    if layout.is_empty() {
        out.push(Violation::NoGarages);
    }
    if layout.points().len() != layout.capacities().len() {
        out.push(Violation::CapacityCount {
            garages: layout.points().len(),
            capacities: layout.capacities().len(),
        });
    }
    for (garage, &c) in layout.capacities().iter().enumerate() {
        if c == 0 {
            out.push(Violation::ZeroCapacity { garage });
        }
    }
    let mut garages_in_range = true;
    for (garage, &point) in layout.points().iter().enumerate() {
        if !inst.space.contains(point) {
            out.push(Violation::GarageOutOfRange { garage, point });
            garages_in_range = false;
        }
    }
    for (car, &point) in inst.arrivals.iter().enumerate() {
        if !inst.space.contains(point) {
            out.push(Violation::ArrivalOutOfRange { car, point });
        }
    }
    let capacity = layout.total_capacity();
    if inst.arrivals.len() as u64 > capacity {
        out.push(Violation::Infeasible {
            arrivals: inst.arrivals.len(),
            capacity,
        });
    }
    if garages_in_range {
        out.extend(
            layout
                .colocated_pairs(&inst.space)
                .into_iter()
                .map(|(a, b)| Violation::ColocatedGarages { a, b }),
        );
    }
    out
}

impl Instance {
    /// Builds and validates; any violation is returned as [`Error::Invalid`].
    pub fn new(
        name: impl Into<String>,
        space: MetricSpace,
        layout: GarageLayout,
        arrivals: Vec<usize>,
    ) -> Result<Self> {
        let inst = Instance {
            name: name.into(),
            space,
            layout,
            arrivals,
        };
        inst.check()?;
        Ok(inst)
    }

    pub fn check(&self) -> Result<()> {
        let v = validate_instance(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub fn garage_count(&self) -> usize {
        self.layout.len()
    }

    pub fn car_count(&self) -> usize {
        self.arrivals.len()
    }

    /// Garage index of each arrival, if every arrival sits exactly on a garage point.
    pub fn arrivals_at_garages(&self) -> Option<Vec<usize>> {
        self.arrivals
            .iter()
            .map(|&p| self.layout.points().iter().position(|&g| g == p))
            .collect()
    }

    /// Nearest garage (ties to the lowest index) for every arrival.
    pub fn snapped_garages(&self) -> Vec<usize> {
        self.arrivals
            .iter()
            .map(|&p| self.layout.nearest(&self.space, p).0)
            .collect()
    }

    /// The instance `J`: every arrival moved to its nearest garage's location.
    pub fn snapped(&self) -> Instance {
        Instance {
            name: format!("{}-snapped", self.name),
            space: self.space.clone(),
            layout: self.layout.clone(),
            arrivals: self
                .snapped_garages()
                .into_iter()
                .map(|g| self.layout.point(g))
                .collect(),
        }
    }

    pub fn with_arrivals(&self, arrivals: Vec<usize>) -> Instance {
        Instance {
            arrivals,
            ..self.clone()
        }
    }
}

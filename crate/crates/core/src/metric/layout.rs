use crate::error::{Error, Result};
use crate::metric::MetricSpace;

/// Garage locations `g_1..g_m` and their capacities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarageLayout {
    points: Vec<usize>,
    capacities: Vec<u32>,
}

impl GarageLayout {
    pub fn new(points: Vec<usize>, capacities: Vec<u32>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("a layout needs at least one garage".into()));
        }
        if points.len() != capacities.len() {
            return Err(Error::Input(format!(
                "{} garage points but {} capacities",
                points.len(),
                capacities.len()
            )));
        }
        if let Some(i) = capacities.iter().position(|&c| c == 0) {
            return Err(Error::Input(format!("garage {i} has capacity 0")));
        }
        Ok(GarageLayout { points, capacities })
    }

    /// Skips the positivity checks so parsers can report them as violations.
    pub(crate) fn from_raw(points: Vec<usize>, capacities: Vec<u32>) -> Self {
        GarageLayout { points, capacities }
    }

    /// `m` garages of capacity one.
    pub fn unit(points: Vec<usize>) -> Result<Self> {
        let caps = vec![1; points.len()];
        Self::new(points, caps)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, garage: usize) -> usize {
        self.points[garage]
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn capacity(&self, garage: usize) -> u32 {
        self.capacities[garage]
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn total_capacity(&self) -> u64 {
        self.capacities.iter().map(|&c| c as u64).sum()
    }

    /// Garage pairs sharing a location (distance zero in `space`).
    pub fn colocated_pairs(&self, space: &MetricSpace) -> Vec<(usize, usize)> {
        let m = self.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let (pa, pb) = (self.points[a], self.points[b]);
                if space.contains(pa) && space.contains(pb) && (pa == pb || space.d(pa, pb) <= 0.0)
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Nearest garage to `point`; ties go to the lowest garage index.
    pub fn nearest(&self, space: &MetricSpace, point: usize) -> (usize, f64) {
        let mut best = (0, space.d(point, self.points[0]));
        for (g, &p) in self.points.iter().enumerate().skip(1) {
            let d = space.d(point, p);
            if d < best.1 {
                best = (g, d);
            }
        }
        best
    }
}

/// Merges garages that share a location by summing their capacities.
///
/// Returns the merged layout and, for every original garage, the index of the
/// merged garage that absorbed it. The first garage at a location keeps its slot order.
pub fn merge_colocated(space: &MetricSpace, layout: &GarageLayout) -> (GarageLayout, Vec<usize>) {
    let mut points: Vec<usize> = Vec::new();
    let mut caps: Vec<u32> = Vec::new();
    let mut mapping = Vec::with_capacity(layout.len());
    for g in 0..layout.len() {
        let p = layout.point(g);
        let existing = points.iter().position(|&q| q == p || space.d(p, q) <= 0.0);
        match existing {
            Some(idx) => {
                caps[idx] += layout.capacity(g);
                mapping.push(idx);
            }
            None => {
                mapping.push(points.len());
                points.push(p);
                caps.push(layout.capacity(g));
            }
        }
    }
    (GarageLayout::from_raw(points, caps), mapping)
}

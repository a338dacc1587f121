use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::metric::{GarageLayout, MetricSpace};
use crate::transport::OnlineAssigner;

/// Garages closer than this are resampled.
pub const MIN_GARAGE_SEPARATION: f64 = 1e-6;

/// Default offset used by [`gen_greedy_hard_line`].
pub const GREEDY_HARD_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Uniform points in a square.
    Euclidean,
    /// Uniform points on a segment.
    Line,
    /// Shortest-path metric of a random connected weighted graph.
    Graph,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Euclidean => "euclidean",
            Family::Line => "line",
            Family::Graph => "graph",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub seed: u64,
    pub family: Family,
    pub m: usize,
    /// Inclusive range capacities are drawn from.
    pub capacity_range: (u32, u32),
    /// Number of arrivals; `None` fills every slot.
    pub arrivals: Option<usize>,
    /// Coordinate range per axis (edge-weight range for [`Family::Graph`]).
    pub bounds: (f64, f64),
}

impl GenParams {
    pub fn new(seed: u64, family: Family, m: usize) -> Self {
        GenParams {
            seed,
            family,
            m,
            capacity_range: (1, 3),
            arrivals: None,
            bounds: (0.0, 1.0),
        }
    }

    fn check(&self) -> Result<()> {
        let (lo, hi) = self.capacity_range;
        if self.m == 0 {
            return Err(Error::Input("m must be at least 1".into()));
        }
        if lo == 0 || lo > hi {
            return Err(Error::Input(format!("bad capacity range [{lo},{hi}]")));
        }
        let (a, b) = self.bounds;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Input(format!("bad coordinate bounds [{a},{b}]")));
        }
        if let Some(k) = self.arrivals {
            let most = self.m as u64 * hi as u64;
            if k as u64 > most {
                return Err(Error::Input(format!(
                    "{k} arrivals cannot fit in {} garages of capacity at most {hi}",
                    self.m
                )));
            }
        }
        Ok(())
    }

    fn name(&self) -> String {
        format!("{}-m{}-s{}", self.family.as_str(), self.m, self.seed)
    }
}

/// Draws capacities, then raises them round-robin (up to the range maximum)
/// until the requested arrivals fit.
fn draw_capacities(rng: &mut ChaCha8Rng, params: &GenParams) -> Vec<u32> {
    let (lo, hi) = params.capacity_range;
    let mut caps: Vec<u32> = (0..params.m).map(|_| rng.gen_range(lo..=hi)).collect();
    if let Some(k) = params.arrivals {
        let mut total: u64 = caps.iter().map(|&c| c as u64).sum();
        let mut g = 0;
        while total < k as u64 {
            if caps[g] < hi {
                caps[g] += 1;
                total += 1;
            }
            g = (g + 1) % caps.len();
        }
    }
    caps
}

fn arrival_count(params: &GenParams, caps: &[u32]) -> usize {
    params
        .arrivals
        .unwrap_or_else(|| caps.iter().map(|&c| c as usize).sum())
}

fn sample_point(rng: &mut ChaCha8Rng, dim: usize, (a, b): (f64, f64)) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(a..b)).collect()
}

/// Coordinate instance: garages are points `0..m`, arrival `t` is point `m + t`.
fn gen_coordinates(params: &GenParams, dim: usize) -> Result<Instance> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(params.m);
    while points.len() < params.m {
        let p = sample_point(&mut rng, dim, params.bounds);
        let clear = points.iter().all(|q| {
            q.iter()
                .zip(&p)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                >= MIN_GARAGE_SEPARATION
        });
        if clear {
            points.push(p);
        }
    }
    let caps = draw_capacities(&mut rng, params);
    let k = arrival_count(params, &caps);
    let arrivals = (0..k).map(|t| params.m + t).collect();
    for _ in 0..k {
        points.push(sample_point(&mut rng, dim, params.bounds));
    }
    let layout = GarageLayout::new((0..params.m).collect(), caps)?;
    Instance::new(
        params.name(),
        MetricSpace::euclidean(points)?,
        layout,
        arrivals,
    )
}

pub fn gen_euclidean_random(params: &GenParams) -> Result<Instance> {
    gen_coordinates(params, 2)
}

pub fn gen_line_random(params: &GenParams) -> Result<Instance> {
    gen_coordinates(params, 1)
}

/// Random connected graph on `m + max(1, k/2)` nodes (a random tree plus extra
/// chords), closed under shortest paths. Garages are nodes `0..m`; arrivals are
/// uniform over all nodes, so some land on garages.
pub fn gen_graph_random(params: &GenParams) -> Result<Instance> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let caps = draw_capacities(&mut rng, params);
    let k = arrival_count(params, &caps);
    let n = params.m + (k / 2).max(1);
    let (lo, hi) = params.bounds;
    let lo = lo.max(MIN_GARAGE_SEPARATION);
    let hi = hi.max(lo * 2.0);
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let link = |d: &mut Vec<Vec<f64>>, a: usize, b: usize, w: f64| {
        if w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    };
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let w = rng.gen_range(lo..hi);
        link(&mut d, u, v, w);
    }
    for _ in 0..n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            let w = rng.gen_range(lo..hi);
            link(&mut d, a, b, w);
        }
    }
    for via in 0..n {
        for a in 0..n {
            for b in 0..n {
                let alt = d[a][via] + d[via][b];
                if alt < d[a][b] {
                    d[a][b] = alt;
                }
            }
        }
    }
    let arrivals = (0..k).map(|_| rng.gen_range(0..n)).collect();
    let layout = GarageLayout::new((0..params.m).collect(), caps)?;
    Instance::new(params.name(), MetricSpace::explicit(d)?, layout, arrivals)
}

pub fn gen_random(params: &GenParams) -> Result<Instance> {
    match params.family {
        Family::Euclidean => gen_euclidean_random(params),
        Family::Line => gen_line_random(params),
        Family::Graph => gen_graph_random(params),
    }
}

/// Line instance on which nearest-available parking pays roughly `2^m - 1`
/// while the optimum pays about one.
///
/// Unit-capacity garages sit at `-1` and `2^i - 1` for `i = 1..m-1`. The first car
/// arrives at `epsilon`, just right of the midpoint between `-1` and `1`; car `i`
/// then arrives `epsilon` right of the garage car `i-1` was sent to, so the next
/// garage to the right is always strictly closer than `-1`.
pub fn gen_greedy_hard_line(m: usize, epsilon: f64) -> Result<Instance> {
    if m < 2 {
        return Err(Error::Input(format!(
            "greedy-hard family needs m >= 2, got {m}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::Input(format!(
            "epsilon must lie in (0, 1/4), got {epsilon}"
        )));
    }
    if m > 50 {
        return Err(Error::Range(format!(
            "m = {m} would need positions beyond 2^50"
        )));
    }
    let mut xs: Vec<f64> = vec![-1.0];
    xs.extend((1..m).map(|i| 2f64.powi(i as i32) - 1.0));
    let garages: Vec<usize> = (0..m).collect();
    let mut arrivals = Vec::with_capacity(m);
    xs.push(epsilon);
    arrivals.push(m);
    for i in 1..m {
        xs.push(xs[i] + epsilon);
        arrivals.push(m + i);
    }
    Instance::new(
        format!("greedy-hard-m{m}"),
        MetricSpace::line(&xs)?,
        GarageLayout::unit(garages)?,
        arrivals,
    )
}

/// Star with a centre (point 0) and `m` unit-capacity garages on leaves `1..=m`,
/// leaf edges of length one.
pub fn star_space(m: usize) -> Result<(MetricSpace, GarageLayout)> {
    let n = m + 1;
    let matrix = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| match (a, b) {
                    _ if a == b => 0.0,
                    (0, _) | (_, 0) => 1.0,
                    _ => 2.0,
                })
                .collect()
        })
        .collect();
    Ok((
        MetricSpace::explicit(matrix)?,
        GarageLayout::unit((1..=m).collect())?,
    ))
}

/// Plays the adaptive star adversary against an online algorithm.
///
/// The first car arrives at the centre; every later car arrives at the garage the
/// algorithm used for the previous car. Returns the recorded arrival sequence as a
/// replayable instance.
pub fn gen_adaptive_star<A, F>(m: usize, make_algorithm: F) -> Result<Instance>
where
    A: OnlineAssigner,
    F: FnOnce(&MetricSpace, &GarageLayout) -> Result<A>,
{
    if m < 2 {
        return Err(Error::Input(format!("adaptive star needs m >= 2, got {m}")));
    }
    let (space, layout) = star_space(m)?;
    let mut alg = make_algorithm(&space, &layout)?;
    let mut arrivals = Vec::with_capacity(m);
    let mut next = 0;
    for _ in 0..m {
        arrivals.push(next);
        let g = alg.assign(next)?;
        if g >= m {
            return Err(Error::Input(format!(
                "algorithm returned garage {g} of {m}"
            )));
        }
        next = layout.point(g);
    }
    Instance::new(format!("star-adaptive-m{m}"), space, layout, arrivals)
}

use std::ops::RangeInclusive;

use clap::ValueEnum;
use otw_core::instances::{
    gen_adaptive_star, gen_greedy_hard_line, gen_random, Family, GenParams, Instance,
    GREEDY_HARD_EPSILON,
};
use otw_core::itinerant::run_b;
use otw_core::offline::opt_mincost;
use otw_core::transport::{
    run_c, run_greedy, run_retrospective, GreedyAssigner, ItinerantAssigner, RetrospectiveAssigner,
};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::report::{finish, ratio};
use crate::run::itinerant_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchFamily {
    Euclidean,
    Line,
    Graph,
    GreedyHard,
    StarAdaptive,
}

impl BenchFamily {
    pub fn name(self) -> &'static str {
        match self {
            BenchFamily::Euclidean => "euclidean",
            BenchFamily::Line => "line",
            BenchFamily::Graph => "graph",
            BenchFamily::GreedyHard => "greedy-hard",
            BenchFamily::StarAdaptive => "star-adaptive",
        }
    }

    fn random(self) -> Option<Family> {
        match self {
            BenchFamily::Euclidean => Some(Family::Euclidean),
            BenchFamily::Line => Some(Family::Line),
            BenchFamily::Graph => Some(Family::Graph),
            _ => None,
        }
    }
}

pub const ALGORITHMS: [&str; 4] = ["B", "C", "greedy", "retrospective"];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: &'static str,
    pub m: usize,
    pub algorithm: &'static str,
    pub trials: usize,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    pub bound: f64,
}

fn cost_of(algorithm: &str, inst: &Instance) -> CliResult<f64> {
    Ok(match algorithm {
        "B" => run_b(inst)?.total_cost,
        "C" => run_c(inst)?.total,
        "greedy" => run_greedy(inst)?.total,
        _ => run_retrospective(inst)?.total,
    })
}

/// Ratios of every algorithm on one trial, in [`ALGORITHMS`] order.
fn trial(family: BenchFamily, m: usize, seed: u64) -> CliResult<[f64; 4]> {
    let mut ratios = [0.0; 4];
    if family == BenchFamily::StarAdaptive {
        // B and C share the instance built against C
        let instances = [
            gen_adaptive_star(m, ItinerantAssigner::new)?,
            gen_adaptive_star(m, ItinerantAssigner::new)?,
            gen_adaptive_star(m, GreedyAssigner::new)?,
            gen_adaptive_star(m, RetrospectiveAssigner::new)?,
        ];
        for (i, inst) in instances.iter().enumerate() {
            let opt = opt_mincost(inst)?.total_distance();
            ratios[i] = ratio(cost_of(ALGORITHMS[i], inst)?, opt);
        }
        return Ok(ratios);
    }
    let inst = match family.random() {
        Some(f) => gen_random(&GenParams::new(seed, f, m))?,
        None => gen_greedy_hard_line(m, GREEDY_HARD_EPSILON)?,
    };
    let opt = opt_mincost(&inst)?.total_distance();
    for (i, alg) in ALGORITHMS.iter().enumerate() {
        ratios[i] = ratio(cost_of(alg, &inst)?, opt);
    }
    Ok(ratios)
}

/// Mean and max empirical ratio per (m, algorithm). Deterministic families
/// (greedy-hard, star-adaptive) run a single trial regardless of `trials`.
pub fn bench(
    family: BenchFamily,
    ms: RangeInclusive<usize>,
    trials: usize,
    seed: u64,
) -> CliResult<Vec<BenchRow>> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let trials = if family.random().is_some() { trials } else { 1 };
    let jobs: Vec<(usize, u64)> = ms
        .clone()
        .flat_map(|m| (0..trials as u64).map(move |t| (m, seed + t)))
        .collect();
    let results: Vec<CliResult<[f64; 4]>> =
        jobs.par_iter().map(|&(m, s)| trial(family, m, s)).collect();
    let mut rows = Vec::new();
    let mut results = results.into_iter();
    for m in ms {
        let mut sum = [0.0; 4];
        let mut max = [0.0f64; 4];
        for _ in 0..trials {
            let r = results.next().expect("one result per job")?;
            for i in 0..4 {
                sum[i] += r[i];
                max[i] = max[i].max(r[i]);
            }
        }
        for (i, &algorithm) in ALGORITHMS.iter().enumerate() {
            rows.push(BenchRow {
                family: family.name(),
                m,
                algorithm,
                trials,
                mean_ratio: sum[i] / trials as f64,
                max_ratio: max[i],
                bound: itinerant_bound(m),
            });
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "family",
        "m",
        "algorithm",
        "trials",
        "mean_ratio",
        "max_ratio",
        "bound",
    ])?;
    for r in rows {
        w.write_record([
            r.family.to_string(),
            r.m.to_string(),
            r.algorithm.to_string(),
            r.trials.to_string(),
            r.mean_ratio.to_string(),
            r.max_ratio.to_string(),
            r.bound.to_string(),
        ])?;
    }
    Ok(finish(w))
}

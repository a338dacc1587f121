use std::time::Instant;

use clap::ValueEnum;
use otw_core::instances::Instance;
use otw_core::itinerant::{
    level_census, run_a_with, run_b_with, trace_csv, walk_cost_audit, RunAResult, SimConfig,
};
use otw_core::metric::{power_of_two_tree, PowerOfTwoTree};
use otw_core::offline::{bottleneck_greedy, bottleneck_units, opt_mincost};
use otw_core::transport::{run_c_with_b, run_greedy, run_retrospective, OnlineAssignment};

use crate::error::{CliError, CliResult};
use crate::report::{ratio, within, Check, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "C")]
    C,
    Greedy,
    Retrospective,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::A => "A",
            Algorithm::B => "B",
            Algorithm::C => "C",
            Algorithm::Greedy => "greedy",
            Algorithm::Retrospective => "retrospective",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Run inline guards and invariant checks.
    pub assert: bool,
    pub trace: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub trace: Option<String>,
    /// Debug dump of the first guard failure or failed check.
    pub counterexample: Option<String>,
}

pub fn itinerant_bound(m: usize) -> f64 {
    8.0 * m as f64 - 7.0
}

fn tree_checks(
    run: &RunAResult,
    tree: &PowerOfTwoTree,
    caps: &[u32],
    arrivals: &[usize],
) -> Vec<Check> {
    let census = level_census(run, tree, caps, arrivals);
    let bad_levels: Vec<u32> = census
        .iter()
        .filter(|r| !r.holds())
        .map(|r| r.level)
        .collect();
    let audit = walk_cost_audit(run, tree);
    vec![
        Check::new(
            "guards",
            run.guard_failures.is_empty(),
            format!("{} level-up guard failures", run.guard_failures.len()),
        ),
        Check::new(
            "census",
            bad_levels.is_empty(),
            format!("levels failing: {bad_levels:?}"),
        ),
        Check::new(
            "eq1_audit",
            audit.is_empty(),
            format!("cars over budget: {audit:?}"),
        ),
    ]
}

fn sim_config(opts: RunOptions) -> SimConfig {
    SimConfig {
        guards: opts.assert,
        record_trace: opts.trace,
        ..SimConfig::default()
    }
}

fn online_report(
    inst: &Instance,
    run: &OnlineAssignment,
    opt: f64,
    bound: Option<f64>,
) -> RunReport {
    RunReport {
        instance: inst.name.clone(),
        m: inst.garage_count(),
        k: inst.car_count(),
        algorithm: run.algorithm.clone(),
        cost: run.total,
        opt,
        ratio: ratio(run.total, opt),
        bound,
        checks: Vec::new(),
        wall_ms: 0.0,
    }
}

fn feasible(inst: &Instance, run: &OnlineAssignment) -> Check {
    let mut load = vec![0u32; inst.garage_count()];
    for &g in &run.assigned {
        load[g] += 1;
    }
    let over: Vec<usize> = (0..load.len())
        .filter(|&g| load[g] > inst.layout.capacity(g))
        .collect();
    Check::new(
        "feasible",
        over.is_empty(),
        format!("over capacity: {over:?}"),
    )
}

/// Runs one algorithm on `inst`, computing the matching offline optimum.
pub fn run_algorithm(inst: &Instance, alg: Algorithm, opts: RunOptions) -> CliResult<RunOutput> {
    inst.check()?;
    let start = Instant::now();
    let m = inst.garage_count();
    let mut counterexample = None;
    let (mut report, trace) = match alg {
        Algorithm::A => {
            let arrivals = inst.arrivals_at_garages().ok_or_else(|| {
                CliError::Usage("algorithm A needs every arrival at a garage point".into())
            })?;
            let (_, tree) = power_of_two_tree(&inst.space, &inst.layout)?;
            let run = run_a_with(&tree, &inst.layout, &arrivals, sim_config(opts))?;
            let caps = inst.layout.capacities();
            let plan = bottleneck_greedy(&tree, caps, &arrivals)?;
            let bottle = bottleneck_units(&tree, &arrivals, &plan.assignment);
            let opt = tree.to_length(bottle);
            let cost = run.total_cost();
            let bound = 2.0 * m as f64 - 2.0;
            let mut checks = Vec::new();
            if opts.assert {
                checks.push(Check::new(
                    "lemma2",
                    run.level_sum_units() == bottle,
                    format!(
                        "level sum {} vs bottleneck {}",
                        run.level_sum_units(),
                        bottle
                    ),
                ));
                checks.push(Check::new(
                    "thm3",
                    run.total_units <= (2 * m as u128).saturating_sub(2) * bottle,
                    format!("cost {cost} vs {bound} x {opt}"),
                ));
                checks.extend(tree_checks(&run, &tree, caps, &arrivals));
                counterexample = run.guard_failures.first().map(|f| format!("{f:#?}"));
            }
            let report = RunReport {
                instance: inst.name.clone(),
                m,
                k: inst.car_count(),
                algorithm: "A".into(),
                cost,
                opt,
                ratio: ratio(cost, opt),
                bound: Some(bound),
                checks,
                wall_ms: 0.0,
            };
            (report, opts.trace.then(|| trace_csv(&run.trace)))
        }
        Algorithm::B => {
            let b = run_b_with(inst, sim_config(opts))?;
            let opt = opt_mincost(inst)?.total_distance();
            let bound = itinerant_bound(m);
            let mut checks = Vec::new();
            if opts.assert {
                checks.push(Check::new(
                    "thm5",
                    within(b.total_cost, bound * opt),
                    format!("cost {} vs {bound} x {opt}", b.total_cost),
                ));
                let snapped = inst.snapped_garages();
                checks.extend(tree_checks(
                    &b.run_a,
                    &b.tree,
                    inst.layout.capacities(),
                    &snapped,
                ));
                counterexample = b.run_a.guard_failures.first().map(|f| format!("{f:#?}"));
            }
            let report = RunReport {
                instance: inst.name.clone(),
                m,
                k: inst.car_count(),
                algorithm: "B".into(),
                cost: b.total_cost,
                opt,
                ratio: ratio(b.total_cost, opt),
                bound: Some(bound),
                checks,
                wall_ms: 0.0,
            };
            (report, opts.trace.then(|| trace_csv(&b.trace)))
        }
        Algorithm::C => {
            let opt = opt_mincost(inst)?.total_distance();
            let bound = itinerant_bound(m);
            match run_c_with_b(inst) {
                Ok((c, b)) => {
                    let mut report = online_report(inst, &c, opt, Some(bound));
                    if opts.assert {
                        report.checks = vec![
                            Check::new("well_defined", true, ""),
                            Check::new(
                                "c_le_b",
                                within(c.total, b.total_cost),
                                format!("C {} vs B {}", c.total, b.total_cost),
                            ),
                            Check::new(
                                "thm6",
                                within(c.total, bound * opt),
                                format!("cost {} vs {bound} x {opt}", c.total),
                            ),
                            feasible(inst, &c),
                            Check::new(
                                "guards",
                                b.run_a.guard_failures.is_empty(),
                                format!("{} level-up guard failures", b.run_a.guard_failures.len()),
                            ),
                        ];
                        counterexample = b.run_a.guard_failures.first().map(|f| format!("{f:#?}"));
                    }
                    (report, opts.trace.then(|| trace_csv(&b.trace)))
                }
                Err(otw_core::Error::Invariant(msg)) if opts.assert => {
                    counterexample = Some(msg.clone());
                    let report = RunReport {
                        instance: inst.name.clone(),
                        m,
                        k: inst.car_count(),
                        algorithm: "C".into(),
                        cost: f64::NAN,
                        opt,
                        ratio: f64::NAN,
                        bound: Some(bound),
                        checks: vec![Check::new("well_defined", false, msg)],
                        wall_ms: 0.0,
                    };
                    (report, None)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Algorithm::Greedy | Algorithm::Retrospective => {
            let run = if alg == Algorithm::Greedy {
                run_greedy(inst)?
            } else {
                run_retrospective(inst)?
            };
            let opt = opt_mincost(inst)?.total_distance();
            let mut report = online_report(inst, &run, opt, None);
            if opts.assert {
                report.checks.push(feasible(inst, &run));
            }
            (report, opts.trace.then(|| run.to_csv()))
        }
    };
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    if counterexample.is_none() {
        counterexample = report
            .failures()
            .next()
            .map(|c| format!("{}: {}", c.name, c.detail));
    }
    Ok(RunOutput {
        report,
        trace,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use otw_core::metric::{GarageLayout, MetricSpace};

    fn line_fixture() -> Instance {
        Instance::new(
            "line",
            MetricSpace::line(&[0.0, 0.4, 1.0]).unwrap(),
            GarageLayout::unit(vec![0, 2]).unwrap(),
            vec![1, 1],
        )
        .unwrap()
    }

    #[test]
    fn c_on_the_line_fixture() {
        let out = run_algorithm(
            &line_fixture(),
            Algorithm::C,
            RunOptions {
                assert: true,
                trace: true,
            },
        )
        .unwrap();
        assert!((out.report.cost - 1.0).abs() < 1e-12);
        assert!((out.report.ratio - 1.0).abs() < 1e-12);
        assert_eq!(out.report.bound, Some(9.0));
        assert!(out.report.all_pass());
        assert!(out.trace.unwrap().starts_with("ordinal,"));
    }

    #[test]
    fn a_rejects_off_garage_arrivals() {
        let err = run_algorithm(&line_fixture(), Algorithm::A, RunOptions::default()).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn a_on_snapped_arrivals() {
        let inst = line_fixture().snapped();
        let out = run_algorithm(
            &inst,
            Algorithm::A,
            RunOptions {
                assert: true,
                trace: false,
            },
        )
        .unwrap();
        assert!(out.report.all_pass(), "{:?}", out.report.checks);
        assert!(out.trace.is_none());
    }

    #[test]
    fn greedy_hard_ratio() {
        let inst = otw_core::instances::gen_greedy_hard_line(8, 1e-3).unwrap();
        let out = run_algorithm(&inst, Algorithm::Greedy, RunOptions::default()).unwrap();
        assert!(out.report.ratio > 57.0);
    }
}

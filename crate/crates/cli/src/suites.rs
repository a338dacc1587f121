use clap::ValueEnum;
use otw_core::instances::{gen_random, Family, GenParams, Instance};
use otw_core::itinerant::{level_census, run_a, run_b, walk_cost_audit};
use otw_core::metric::power_of_two_tree;
use otw_core::offline::{
    bottleneck_greedy, bottleneck_on_spanning, bottleneck_threshold, bottleneck_units,
    brute_force_bottleneck, brute_force_opt, opt_mincost, BRUTE_FORCE_SLOTS,
};
use otw_core::transport::{mpfs_witness, run_c_with_b};
use rayon::prelude::*;

use crate::error::CliResult;
use crate::report::{agree, finish, within};
use crate::run::itinerant_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Lemma2,
    Thm3,
    Lemma4,
    Thm5,
    Thm6,
    Census,
    Oracles,
    Mpfs,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Lemma2,
        Suite::Thm3,
        Suite::Lemma4,
        Suite::Thm5,
        Suite::Thm6,
        Suite::Census,
        Suite::Oracles,
        Suite::Mpfs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma2 => "lemma2",
            Suite::Thm3 => "thm3",
            Suite::Lemma4 => "lemma4",
            Suite::Thm5 => "thm5",
            Suite::Thm6 => "thm6",
            Suite::Census => "census",
            Suite::Oracles => "oracles",
            Suite::Mpfs => "mpfs",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }
}

/// One checked quantity: `value` compared against `bound` (or required to equal it).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub suite: &'static str,
    pub seed: u64,
    pub instance: String,
    pub m: usize,
    pub k: usize,
    pub check: &'static str,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub suite: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub first_failure: Option<CheckRow>,
}

impl SuiteSummary {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn generated(seed: u64, family: Family, m: usize, cap_max: u32, k: usize) -> CliResult<Instance> {
    let mut p = GenParams::new(seed, family, m);
    p.capacity_range = (1, cap_max);
    p.arrivals = Some(k);
    Ok(gen_random(&p)?)
}

/// Tree-suite instance: euclidean (even seeds) or line (odd seeds), m in [2,10],
/// at most 40 arrivals, every arrival moved onto its nearest garage.
pub fn tree_instance(seed: u64) -> CliResult<Instance> {
    let family = if seed.is_multiple_of(2) {
        Family::Euclidean
    } else {
        Family::Line
    };
    let m = 2 + (mix(seed, 1) % 9) as usize;
    let cap_max = 1 + (mix(seed, 2) % 3) as u32;
    let k = (mix(seed, 3) % (40.min(m * cap_max as usize) as u64 + 1)) as usize;
    Ok(generated(seed, family, m, cap_max, k)?.snapped())
}

/// General-metric instance: euclidean, line or shortest-path graph metric, m in
/// [1,10], at most 40 arrivals anywhere in the space.
pub fn general_instance(seed: u64) -> CliResult<Instance> {
    let family = [Family::Euclidean, Family::Line, Family::Graph][(seed % 3) as usize];
    let m = 1 + (mix(seed, 4) % 10) as usize;
    let cap_max = 1 + (mix(seed, 5) % 3) as u32;
    let k = (mix(seed, 6) % (40.min(m * cap_max as usize) as u64 + 1)) as usize;
    generated(seed, family, m, cap_max, k)
}

/// Instance with at most eight garage slots in total.
pub fn small_instance(seed: u64) -> CliResult<Instance> {
    let family = [Family::Euclidean, Family::Line, Family::Graph][(seed % 3) as usize];
    let m = 1 + (mix(seed, 7) % 4) as usize;
    let cap_max = 1 + (mix(seed, 8) % 2) as u32;
    let k = (mix(seed, 9) % (m as u64 * cap_max as u64 + 1)) as usize;
    generated(seed, family, m, cap_max, k)
}

struct Rows<'a> {
    suite: &'static str,
    seed: u64,
    inst: &'a Instance,
    out: Vec<CheckRow>,
}

impl Rows<'_> {
    fn push(
        &mut self,
        check: &'static str,
        value: f64,
        bound: f64,
        pass: bool,
        detail: impl Into<String>,
    ) {
        self.out.push(CheckRow {
            suite: self.suite,
            seed: self.seed,
            instance: self.inst.name.clone(),
            m: self.inst.garage_count(),
            k: self.inst.car_count(),
            check,
            value,
            bound,
            pass,
            detail: detail.into(),
        });
    }

    fn equal(&mut self, check: &'static str, value: f64, bound: f64) {
        self.push(check, value, bound, agree(value, bound), "");
    }

    fn at_most(&mut self, check: &'static str, value: f64, bound: f64) {
        self.push(check, value, bound, within(value, bound), "");
    }
}

fn seed_rows(suite: Suite, seed: u64) -> CliResult<Vec<CheckRow>> {
    let inst = match suite {
        Suite::Lemma2 | Suite::Thm3 | Suite::Census => tree_instance(seed)?,
        Suite::Oracles => small_instance(seed)?,
        _ => general_instance(seed)?,
    };
    let mut rows = Rows {
        suite: suite.name(),
        seed,
        inst: &inst,
        out: Vec::new(),
    };
    let m = inst.garage_count();
    let caps = inst.layout.capacities();
    match suite {
        Suite::Lemma2 | Suite::Thm3 | Suite::Census => {
            let (_, tree) = power_of_two_tree(&inst.space, &inst.layout)?;
            let arrivals = inst.snapped_garages();
            let run = run_a(&tree, &inst.layout, &arrivals)?;
            rows.push(
                "guards",
                run.guard_failures.len() as f64,
                0.0,
                run.guard_failures.is_empty(),
                run.guard_failures
                    .first()
                    .map(|f| format!("{f:?}"))
                    .unwrap_or_default(),
            );
            match suite {
                Suite::Lemma2 => {
                    let level_sum = tree.to_length(run.level_sum_units());
                    let g = bottleneck_greedy(&tree, caps, &arrivals)?;
                    let h = bottleneck_threshold(&tree, caps, &arrivals)?;
                    rows.equal(
                        "lemma2_greedy",
                        level_sum,
                        g.total_bottleneck().unwrap_or(f64::NAN),
                    );
                    rows.equal(
                        "lemma2_threshold",
                        level_sum,
                        h.total_bottleneck().unwrap_or(f64::NAN),
                    );
                }
                Suite::Thm3 => {
                    let g = bottleneck_greedy(&tree, caps, &arrivals)?;
                    let bottle = tree.to_length(bottleneck_units(&tree, &arrivals, &g.assignment));
                    rows.at_most("thm3", run.total_cost(), (2.0 * m as f64 - 2.0) * bottle);
                    let audit = walk_cost_audit(&run, &tree);
                    rows.push(
                        "eq1_audit",
                        audit.len() as f64,
                        0.0,
                        audit.is_empty(),
                        format!("{audit:?}"),
                    );
                }
                _ => {
                    for row in level_census(&run, &tree, caps, &arrivals) {
                        rows.push(
                            "census",
                            row.lhs as f64,
                            row.rhs as f64,
                            row.holds(),
                            format!("level {}", row.level),
                        );
                    }
                }
            }
        }
        Suite::Lemma4 => {
            let (s, t) = power_of_two_tree(&inst.space, &inst.layout)?;
            let j = inst.snapped_garages();
            let bt = bottleneck_greedy(&t, caps, &j)?
                .total_bottleneck()
                .unwrap_or(f64::NAN);
            let bs = bottleneck_on_spanning(&s, caps, &j)?
                .total_bottleneck()
                .unwrap_or(f64::NAN);
            let opt_j = opt_mincost(&inst.snapped())?.total_distance();
            let opt_i = opt_mincost(&inst)?.total_distance();
            rows.at_most("eq8", bt, 2.0 * bs);
            rows.at_most("eq9", bs, opt_j);
            rows.at_most("eq10", opt_j, 2.0 * opt_i);
            rows.at_most("lemma4", bt, 4.0 * opt_i);
        }
        Suite::Thm5 => {
            let b = run_b(&inst)?;
            let opt = opt_mincost(&inst)?.total_distance();
            rows.at_most("thm5", b.total_cost, itinerant_bound(m) * opt);
            let failures = &b.run_a.guard_failures;
            rows.push(
                "guards",
                failures.len() as f64,
                0.0,
                failures.is_empty(),
                failures
                    .first()
                    .map(|f| format!("{f:?}"))
                    .unwrap_or_default(),
            );
        }
        Suite::Thm6 => {
            let opt = opt_mincost(&inst)?.total_distance();
            match run_c_with_b(&inst) {
                Ok((c, b)) => {
                    rows.push("well_defined", 0.0, 0.0, true, "");
                    rows.at_most("c_le_b", c.total, b.total_cost);
                    rows.at_most("thm6", c.total, itinerant_bound(m) * opt);
                    let failures = &b.run_a.guard_failures;
                    rows.push(
                        "guards",
                        failures.len() as f64,
                        0.0,
                        failures.is_empty(),
                        "",
                    );
                }
                Err(otw_core::Error::Invariant(msg)) => {
                    rows.push("well_defined", 1.0, 0.0, false, msg)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Suite::Oracles => {
            let opt = opt_mincost(&inst)?.total_distance();
            let brute = brute_force_opt(&inst, BRUTE_FORCE_SLOTS)?.total_distance();
            rows.equal("mincost_vs_brute", opt, brute);

            let tree_case = tree_instance(seed)?;
            let (_, tree) = power_of_two_tree(&tree_case.space, &tree_case.layout)?;
            let arrivals = tree_case.snapped_garages();
            let tcaps = tree_case.layout.capacities();
            let g = bottleneck_greedy(&tree, tcaps, &arrivals)?;
            let h = bottleneck_threshold(&tree, tcaps, &arrivals)?;
            let gu = bottleneck_units(&tree, &arrivals, &g.assignment);
            let hu = bottleneck_units(&tree, &arrivals, &h.assignment);
            rows.push(
                "greedy_vs_threshold",
                tree.to_length(gu),
                tree.to_length(hu),
                gu == hu,
                tree_case.name.clone(),
            );
            if tree_case.layout.total_capacity() <= BRUTE_FORCE_SLOTS {
                let b = brute_force_bottleneck(&tree, tcaps, &arrivals, BRUTE_FORCE_SLOTS)?;
                let bu = bottleneck_units(&tree, &arrivals, &b.assignment);
                rows.push(
                    "greedy_vs_brute",
                    tree.to_length(gu),
                    tree.to_length(bu),
                    gu == bu,
                    tree_case.name,
                );
            }
        }
        Suite::Mpfs | Suite::All => unreachable!("handled by run_suite"),
    }
    Ok(rows.out)
}

fn mpfs_rows() -> CliResult<Vec<CheckRow>> {
    let w = mpfs_witness()?;
    let row = |check, value: f64, bound: f64, pass, detail: String| CheckRow {
        suite: "mpfs",
        seed: 0,
        instance: "mpfs-fixture".into(),
        m: 5,
        k: w.histories[0].len(),
        check,
        value,
        bound,
        pass,
        detail,
    };
    let names = |v: &[usize]| {
        v.iter()
            .map(|g| format!("g{}", g + 1))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(vec![
        row("same_unfull", 0.0, 0.0, true, names(&w.unfull_before)),
        row(
            "assignments_differ",
            (w.assigned[0] + 1) as f64,
            (w.assigned[1] + 1) as f64,
            w.differs(),
            format!(
                "history 1 -> g{}, history 2 -> g{}",
                w.assigned[0] + 1,
                w.assigned[1] + 1
            ),
        ),
    ])
}

/// Runs one suite over `seeds` in parallel; rows come back in seed order.
pub fn run_suite(suite: Suite, seeds: &[u64]) -> CliResult<Vec<CheckRow>> {
    match suite {
        Suite::Mpfs => mpfs_rows(),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, seeds)?);
            }
            Ok(all)
        }
        s => {
            let per_seed: Vec<CliResult<Vec<CheckRow>>> =
                seeds.par_iter().map(|&seed| seed_rows(s, seed)).collect();
            let mut rows = Vec::new();
            for r in per_seed {
                rows.extend(r?);
            }
            Ok(rows)
        }
    }
}

/// Per-suite counts; a case is one (suite, seed) pair and passes when all its rows pass.
pub fn summarize(rows: &[CheckRow]) -> Vec<SuiteSummary> {
    let mut out: Vec<SuiteSummary> = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let (suite, seed) = (rows[i].suite, rows[i].seed);
        let end = i + rows[i..]
            .iter()
            .take_while(|r| r.suite == suite && r.seed == seed)
            .count();
        let failure = rows[i..end].iter().find(|r| !r.pass).cloned();
        if out.last().is_none_or(|s| s.suite != suite) {
            out.push(SuiteSummary {
                suite,
                cases: 0,
                passed: 0,
                first_failure: None,
            });
        }
        let summary = out.last_mut().expect("pushed above");
        summary.cases += 1;
        match failure {
            None => summary.passed += 1,
            Some(f) => {
                summary.first_failure.get_or_insert(f);
            }
        }
        i = end;
    }
    out
}

pub fn rows_csv(rows: &[CheckRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "suite", "seed", "instance", "m", "k", "check", "value", "bound", "pass", "detail",
    ])?;
    for r in rows {
        w.write_record([
            r.suite.to_string(),
            r.seed.to_string(),
            r.instance.clone(),
            r.m.to_string(),
            r.k.to_string(),
            r.check.to_string(),
            r.value.to_string(),
            r.bound.to_string(),
            r.pass.to_string(),
            r.detail.clone(),
        ])?;
    }
    Ok(finish(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_shapes() {
        for seed in 1..200 {
            let t = tree_instance(seed).unwrap();
            assert!((2..=10).contains(&t.garage_count()));
            assert!(t.car_count() <= 40);
            assert!(t.arrivals_at_garages().is_some());
            let s = small_instance(seed).unwrap();
            assert!(s.layout.total_capacity() <= BRUTE_FORCE_SLOTS);
            assert!(general_instance(seed).unwrap().car_count() <= 40);
        }
    }

    #[test]
    fn summary_counts_cases() {
        let rows = run_suite(Suite::Census, &[1, 2, 3]).unwrap();
        let s = summarize(&rows);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].cases, s[0].passed), (3, 3));
        let mut broken = rows.clone();
        broken[1].pass = false;
        let s = summarize(&broken);
        assert_eq!(s[0].passed, 2);
        assert_eq!(s[0].first_failure.as_ref().unwrap().seed, broken[1].seed);
    }

    #[test]
    fn mpfs_suite() {
        let rows = run_suite(Suite::Mpfs, &[]).unwrap();
        assert!(rows.iter().all(|r| r.pass));
        assert_eq!(rows[1].detail, "history 1 -> g4, history 2 -> g2");
    }
}

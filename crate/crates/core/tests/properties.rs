mod common;

use common::{close, instances, leq, raw_trees};
use otw_core::instances::{
    from_json, gen_adaptive_star, gen_random, read_instance, to_json, validate_instance,
    write_instance, Family, GenParams,
};
use otw_core::itinerant::{level_census, run_a, run_b, walk_cost_audit};
use otw_core::metric::{power_of_two_tree, units};
use otw_core::offline::{bottleneck_greedy, bottleneck_threshold, bottleneck_units, opt_mincost};
use otw_core::transport::{
    run_c_with_b, run_greedy, run_online, run_retrospective, GreedyAssigner, ItinerantAssigner,
    OnlineAssignment, RetrospectiveAssigner,
};
use otw_core::walks::{dfs_walk, level_tree, ChildOrder};
use proptest::prelude::*;

fn feasible(run: &OnlineAssignment, caps: &[u32]) -> bool {
    let mut load = vec![0u32; caps.len()];
    for &g in &run.assigned {
        load[g] += 1;
    }
    load.iter().zip(caps).all(|(l, c)| l <= c)
        && run
            .residual_history
            .last()
            .is_none_or(|r| r.iter().zip(caps).zip(&load).all(|((r, c), l)| r + l == *c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_algorithm_invariants(inst in instances(10, 40, true)) {
        let (_, t) = power_of_two_tree(&inst.space, &inst.layout).unwrap();
        let arrivals = inst.snapped_garages();
        let caps = inst.layout.capacities();
        let run = run_a(&t, &inst.layout, &arrivals).unwrap();
        prop_assert!(run.guard_failures.is_empty());

        let greedy = bottleneck_greedy(&t, caps, &arrivals).unwrap();
        let threshold = bottleneck_threshold(&t, caps, &arrivals).unwrap();
        let bottle = bottleneck_units(&t, &arrivals, &greedy.assignment);
        prop_assert_eq!(run.level_sum_units(), bottle);
        prop_assert_eq!(bottleneck_units(&t, &arrivals, &threshold.assignment), bottle);

        let m = inst.garage_count() as u128;
        prop_assert!(run.total_units <= (2 * m).saturating_sub(2) * bottle);

        prop_assert!(walk_cost_audit(&run, &t).is_empty());
        for row in level_census(&run, &t, caps, &arrivals) {
            prop_assert!(row.holds(), "{:?}", row);
        }
    }

    #[test]
    fn online_algorithms(inst in instances(10, 40, false)) {
        let m = inst.garage_count() as f64;
        let opt = opt_mincost(&inst).unwrap().total_distance();
        let b = run_b(&inst).unwrap();
        let (c, b2) = run_c_with_b(&inst).unwrap();
        prop_assert_eq!(b.total_cost, b2.total_cost);
        prop_assert!(leq(b.total_cost, (8.0 * m - 7.0) * opt));
        prop_assert!(leq(c.total, b.total_cost));
        prop_assert!(leq(c.total, (8.0 * m - 7.0) * opt));
        if opt == 0.0 {
            prop_assert_eq!(c.total, 0.0);
        }
        prop_assert!(b.run_a.guard_failures.is_empty());
        let caps = inst.layout.capacities();
        let g = run_greedy(&inst).unwrap();
        let r = run_retrospective(&inst).unwrap();
        for run in [&c, &g, &r] {
            prop_assert!(feasible(run, caps));
            prop_assert!(leq(opt, run.total));
        }
    }

    #[test]
    fn level_trees_nest_and_tours_double_edges(t in raw_trees(8, 4, 1)) {
        let tree = t.tree();
        for root in 0..t.m {
            let mut prev: Option<Vec<usize>> = None;
            for level in 0..=tree.top_level() {
                let lt = level_tree(&tree, root, level);
                prop_assert!(lt.edges.iter().all(|e| e.exponent < level));
                if let Some(p) = &prev {
                    prop_assert!(p.iter().all(|g| lt.contains(*g)));
                }
                let tour = dfs_walk(&lt, &ChildOrder::Ascending);
                prop_assert_eq!(tour.length, 2 * lt.edge_units());
                let by_exp: u128 = (0..level).map(|h| units(h) * lt.count_exponent(h) as u128).sum();
                prop_assert_eq!(by_exp, lt.edge_units());
                let mut seen = tour.garages();
                seen.sort_unstable();
                seen.dedup();
                prop_assert_eq!(&seen, &lt.members);
                prop_assert_eq!(tour.steps.first().map(|s| s.garage), Some(root));
                prop_assert_eq!(tour.steps.last().map(|s| s.garage), Some(root));
                prev = Some(lt.members.clone());
            }
            prop_assert_eq!(prev.unwrap().len(), t.m);
        }
    }

    #[test]
    fn generators_are_deterministic_and_valid(seed in any::<u64>(), f in 0..3usize, m in 1..=10usize, k in 0..=40usize) {
        let mut p = GenParams::new(seed, common::family(f), m);
        p.arrivals = Some(k.min(3 * m));
        let a = gen_random(&p).unwrap();
        prop_assert!(validate_instance(&a).is_empty());
        prop_assert_eq!(to_json(&a), to_json(&gen_random(&p).unwrap()));
        prop_assert_eq!(from_json(&to_json(&a), "memory").unwrap(), a);
    }
}

#[test]
fn adaptive_star_costs_every_online_algorithm_two_m_minus_one() {
    for m in 2..=8 {
        let c = gen_adaptive_star(m, ItinerantAssigner::new).unwrap();
        let g = gen_adaptive_star(m, GreedyAssigner::new).unwrap();
        let r = gen_adaptive_star(m, RetrospectiveAssigner::new).unwrap();
        for inst in [&c, &g, &r] {
            assert_eq!(inst.arrivals.len(), m);
            assert_eq!(inst.layout.total_capacity(), m as u64);
            assert!(close(opt_mincost(inst).unwrap().total_distance(), 1.0));
        }
        let expected = 2.0 * m as f64 - 1.0;
        assert_eq!(
            run_online(
                &c,
                &mut ItinerantAssigner::new(&c.space, &c.layout).unwrap()
            )
            .unwrap()
            .total,
            expected
        );
        assert_eq!(run_greedy(&g).unwrap().total, expected);
        assert_eq!(run_retrospective(&r).unwrap().total, expected);
    }
}

#[test]
fn instance_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let mut p = GenParams::new(9, Family::Graph, 5);
    p.arrivals = Some(7);
    let inst = gen_random(&p).unwrap();
    write_instance(&inst, &path).unwrap();
    assert_eq!(read_instance(&path).unwrap(), inst);
    let missing = dir.path().join("nope.json");
    let err = read_instance(&missing).unwrap_err().to_string();
    assert!(err.contains("nope.json"), "{err}");
}

#[test]
fn single_garage_everything_is_optimal() {
    for seed in 0..20 {
        let mut p = GenParams::new(seed, Family::Euclidean, 1);
        p.capacity_range = (5, 5);
        p.arrivals = Some(5);
        let inst = gen_random(&p).unwrap();
        let opt = opt_mincost(&inst).unwrap().total_distance();
        assert_eq!(run_b(&inst).unwrap().total_cost, opt);
        assert_eq!(run_c_with_b(&inst).unwrap().0.total, opt);
        assert_eq!(run_greedy(&inst).unwrap().total, opt);
    }
}

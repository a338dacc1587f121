mod common;

use common::{
    close, family, for_each_assignment, instances, leq, max_exponent_keys, random_instance,
    raw_trees,
};
use otw_core::metric::{build_mst, power_of_two_tree, GarageLayout, MetricSpace};
use otw_core::offline::{
    bottleneck_greedy, bottleneck_on_spanning, bottleneck_threshold, bottleneck_units,
    brute_force_bottleneck, brute_force_opt, opt_mincost, BRUTE_FORCE_SLOTS,
};
use proptest::prelude::*;

/// Smallest total distance over every feasible assignment, enumerated here.
fn enumerate_opt(inst: &otw_core::instances::Instance) -> f64 {
    let mut best = f64::INFINITY;
    for_each_assignment(inst.layout.capacities(), inst.arrivals.len(), &mut |a| {
        let cost: f64 = a
            .iter()
            .zip(&inst.arrivals)
            .map(|(&g, &p)| inst.space.d(p, inst.layout.point(g)))
            .sum();
        best = best.min(cost);
    });
    best
}

fn small_slots() -> impl Strategy<Value = otw_core::instances::Instance> {
    (any::<u64>(), 0..3usize, 1..=4usize, 0..=8usize, 1..=2u32).prop_filter_map(
        "too many slots",
        |(seed, f, m, k, c)| {
            let inst = random_instance(seed, family(f), m, k, c, false);
            (inst.layout.total_capacity() <= BRUTE_FORCE_SLOTS).then_some(inst)
        },
    )
}

/// Total length of every spanning tree of the complete garage graph.
fn brute_mst(space: &MetricSpace, layout: &GarageLayout) -> f64 {
    let m = layout.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    let mut best = f64::INFINITY;
    let need = m - 1;
    let mut pick = Vec::new();
    fn go(
        from: usize,
        need: usize,
        pairs: &[(usize, usize)],
        pick: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if pick.len() == need {
            visit(pick);
            return;
        }
        for i in from..pairs.len() {
            pick.push(i);
            go(i + 1, need, pairs, pick, visit);
            pick.pop();
        }
    }
    go(0, need, &pairs, &mut pick, &mut |chosen| {
        let mut uf = otw_core::metric::UnionFind::new(m);
        if chosen.iter().all(|&i| uf.union(pairs[i].0, pairs[i].1)) {
            let len: f64 = chosen
                .iter()
                .map(|&i| space.d(layout.point(pairs[i].0), layout.point(pairs[i].1)))
                .sum();
            best = best.min(len);
        }
    });
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mincost_matches_brute_force(inst in small_slots()) {
        let opt = opt_mincost(&inst).unwrap().total_distance();
        let brute = brute_force_opt(&inst, BRUTE_FORCE_SLOTS).unwrap().total_distance();
        let enumerated = enumerate_opt(&inst);
        prop_assert!(close(opt, brute), "{} vs {}", opt, brute);
        prop_assert!(close(opt, enumerated), "{} vs {}", opt, enumerated);
    }

    #[test]
    fn mincost_plan_is_feasible(inst in instances(8, 30, false)) {
        let plan = opt_mincost(&inst).unwrap();
        let loads = plan.loads(inst.garage_count());
        prop_assert!(loads.iter().zip(inst.layout.capacities()).all(|(l, c)| l <= c));
        let recomputed: f64 = plan
            .assignment
            .iter()
            .zip(&inst.arrivals)
            .map(|(&g, &p)| inst.space.d(p, inst.layout.point(g)))
            .sum();
        prop_assert!(close(recomputed, plan.total_distance()));
    }

    #[test]
    fn bottleneck_oracles_agree(t in raw_trees(7, 4, 2)) {
        let tree = t.tree();
        let g = bottleneck_greedy(&tree, &t.caps, &t.arrivals).unwrap();
        let h = bottleneck_threshold(&tree, &t.caps, &t.arrivals).unwrap();
        let gu = bottleneck_units(&tree, &t.arrivals, &g.assignment);
        let hu = bottleneck_units(&tree, &t.arrivals, &h.assignment);
        prop_assert_eq!(gu, hu);
        for plan in [&g, &h] {
            let loads = plan.loads(t.m);
            prop_assert!(loads.iter().zip(&t.caps).all(|(l, c)| l <= c));
        }
        if t.caps.iter().sum::<u32>() as u64 <= 10 {
            let keys = max_exponent_keys(t.m, &t.edges);
            let mut best = u128::MAX;
            for_each_assignment(&t.caps, t.arrivals.len(), &mut |a| {
                let cost: u128 = a
                    .iter()
                    .zip(&t.arrivals)
                    .map(|(&g, &s)| match keys[s][g] { 0 => 0, k => 1u128 << (k - 1) })
                    .sum();
                best = best.min(cost);
            });
            prop_assert_eq!(gu, best);
            let b = brute_force_bottleneck(&tree, &t.caps, &t.arrivals, 10).unwrap();
            prop_assert_eq!(bottleneck_units(&tree, &t.arrivals, &b.assignment), best);
        }
    }

    #[test]
    fn spanning_bottleneck_matches_enumeration(inst in small_slots()) {
        let (s, _) = power_of_two_tree(&inst.space, &inst.layout).unwrap();
        let arrivals = inst.snapped_garages();
        let plan = bottleneck_on_spanning(&s, inst.layout.capacities(), &arrivals).unwrap();
        let maxima = s.bottleneck_matrix();
        let mut best = f64::INFINITY;
        for_each_assignment(inst.layout.capacities(), arrivals.len(), &mut |a| {
            let cost: f64 = a.iter().zip(&arrivals).map(|(&g, &x)| maxima[x][g]).sum();
            best = best.min(cost);
        });
        prop_assert!(close(plan.total_bottleneck().unwrap(), best));
    }

    #[test]
    fn mst_is_minimum(seed in any::<u64>(), f in 0..3usize, m in 1..=6usize) {
        let inst = random_instance(seed, family(f), m, 0, 1, false);
        let mst = build_mst(&inst.space, &inst.layout).unwrap();
        prop_assert_eq!(mst.edges().len(), m - 1);
        let brute = brute_mst(&inst.space, &inst.layout);
        let expected = if m == 1 { 0.0 } else { brute };
        prop_assert!(close(mst.total_length(), expected));
    }

    #[test]
    fn tree_distances_dominate_and_round_by_at_most_two(inst in instances(9, 0, false)) {
        let (s, t) = power_of_two_tree(&inst.space, &inst.layout).unwrap();
        let s_len = s.path_length_matrix();
        let s_max = s.bottleneck_matrix();
        let m = inst.garage_count();
        for i in 0..m {
            for j in 0..m {
                let d = inst.space.d(inst.layout.point(i), inst.layout.point(j));
                let (t_len, t_max) = t.tree_path_stats(i, j).unwrap();
                // cycle property of the spanning tree
                prop_assert!(leq(s_max[i][j], d));
                prop_assert!(leq(d, t_len));
                prop_assert!(leq(s_len[i][j], t_len));
                prop_assert!(leq(t_len, 2.0 * s_len[i][j]));
                prop_assert!(leq(s_max[i][j], t_max) && leq(t_max, 2.0 * s_max[i][j]));
            }
        }
        let t_total: f64 = t.edges().iter().map(|e| t.edge_length(e.exponent)).sum();
        prop_assert!(leq(s.total_length(), t_total) && leq(t_total, 2.0 * s.total_length()));
    }

    #[test]
    fn bottleneck_chain(inst in instances(10, 40, false)) {
        let (s, t) = power_of_two_tree(&inst.space, &inst.layout).unwrap();
        let j = inst.snapped_garages();
        let caps = inst.layout.capacities();
        let bt = bottleneck_greedy(&t, caps, &j).unwrap().total_bottleneck().unwrap();
        let bs = bottleneck_on_spanning(&s, caps, &j).unwrap().total_bottleneck().unwrap();
        let opt_j = opt_mincost(&inst.snapped()).unwrap().total_distance();
        let opt_i = opt_mincost(&inst).unwrap().total_distance();
        prop_assert!(leq(bt, 2.0 * bs), "{} {}", bt, bs);
        prop_assert!(leq(bs, opt_j), "{} {}", bs, opt_j);
        prop_assert!(leq(opt_j, 2.0 * opt_i), "{} {}", opt_j, opt_i);
        prop_assert!(leq(bt, 4.0 * opt_i));
    }
}

#[test]
fn empty_and_symmetric_brute_force() {
    let inst = random_instance(3, family(0), 3, 0, 2, false);
    assert_eq!(
        brute_force_opt(&inst, BRUTE_FORCE_SLOTS)
            .unwrap()
            .total_distance(),
        0.0
    );
    assert_eq!(opt_mincost(&inst).unwrap().total_distance(), 0.0);
}

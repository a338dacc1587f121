#![allow(dead_code)]

use otw_core::instances::{gen_random, Family, GenParams, Instance};
use proptest::prelude::*;

pub fn leq(a: f64, b: f64) -> bool {
    a <= b + 1e-9 * a.abs().max(b.abs()).max(1e-300)
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

pub fn family(i: usize) -> Family {
    [Family::Euclidean, Family::Line, Family::Graph][i % 3]
}

/// Random generated instance; `snap` moves every arrival onto its nearest garage.
pub fn random_instance(
    seed: u64,
    fam: Family,
    m: usize,
    k: usize,
    cap_max: u32,
    snap: bool,
) -> Instance {
    let mut p = GenParams::new(seed, fam, m);
    p.capacity_range = (1, cap_max);
    p.arrivals = Some(k.min(m * cap_max as usize));
    let inst = gen_random(&p).expect("generator accepts feasible parameters");
    if snap {
        inst.snapped()
    } else {
        inst
    }
}

pub fn instances(max_m: usize, max_k: usize, snap: bool) -> impl Strategy<Value = Instance> {
    (any::<u64>(), 0..3usize, 1..=max_m, 0..=max_k, 1..=3u32)
        .prop_map(move |(seed, f, m, k, c)| random_instance(seed, family(f), m, k, c, snap))
}

/// A random tree on `m` vertices as `(u, v, exponent)` triples plus capacities and
/// arrivals at vertices that fit the capacities.
#[derive(Debug, Clone)]
pub struct RawTree {
    pub m: usize,
    pub edges: Vec<(usize, usize, u32)>,
    pub caps: Vec<u32>,
    pub arrivals: Vec<usize>,
}

pub fn raw_trees(max_m: usize, max_exp: u32, max_cap: u32) -> impl Strategy<Value = RawTree> {
    (1..=max_m)
        .prop_flat_map(move |m| {
            let parents: Vec<_> = (1..m).map(|i| (0..i, 0..=max_exp)).collect();
            (Just(m), parents, prop::collection::vec(1..=max_cap, m))
        })
        .prop_flat_map(|(m, parents, caps)| {
            let total: u32 = caps.iter().sum();
            let arrivals = prop::collection::vec(0..m, 0..=total as usize);
            (Just(m), Just(parents), Just(caps), arrivals)
        })
        .prop_map(|(m, parents, caps, arrivals)| RawTree {
            m,
            edges: parents
                .iter()
                .enumerate()
                .map(|(i, &(p, e))| (p, i + 1, e))
                .collect(),
            caps,
            arrivals,
        })
}

impl RawTree {
    pub fn tree(&self) -> otw_core::metric::PowerOfTwoTree {
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, exponent)| otw_core::metric::TreeEdge { u, v, exponent })
            .collect();
        otw_core::metric::PowerOfTwoTree::new(self.m, 1.0, edges).unwrap()
    }

    pub fn layout(&self) -> otw_core::metric::GarageLayout {
        otw_core::metric::GarageLayout::new((0..self.m).collect(), self.caps.clone()).unwrap()
    }
}

/// Longest-edge exponent (+1, 0 for the empty path) between every vertex pair,
/// by depth-first search.
pub fn max_exponent_keys(m: usize, edges: &[(usize, usize, u32)]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); m];
    for &(u, v, e) in edges {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut out = vec![vec![0; m]; m];
    for (s, row) in out.iter_mut().enumerate() {
        let mut stack = vec![(s, usize::MAX, 0u32)];
        while let Some((x, parent, key)) = stack.pop() {
            row[x] = key;
            for &(y, e) in &adj[x] {
                if y != parent {
                    stack.push((y, x, key.max(e + 1)));
                }
            }
        }
    }
    out
}

/// Every capacity-respecting assignment, calling `visit` on each.
pub fn for_each_assignment(caps: &[u32], cars: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(
        car: usize,
        cars: usize,
        left: &mut [u32],
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if car == cars {
            visit(cur);
            return;
        }
        for g in 0..left.len() {
            if left[g] > 0 {
                left[g] -= 1;
                cur.push(g);
                go(car + 1, cars, left, cur, visit);
                cur.pop();
                left[g] += 1;
            }
        }
    }
    let mut left = caps.to_vec();
    go(0, cars, &mut left, &mut Vec::new(), visit);
}

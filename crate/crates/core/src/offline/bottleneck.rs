use crate::error::{Error, Result};
use crate::metric::{PowerOfTwoTree, SpanningTree, UnionFind, Units};
use crate::offline::Plan;

fn check_feasible(m: usize, capacities: &[u32], arrivals: &[usize]) -> Result<()> {
    if capacities.len() != m {
        return Err(Error::Input(format!(
            "{} capacities for {m} garages",
            capacities.len()
        )));
    }
    if let Some(&g) = arrivals.iter().find(|&&g| g >= m) {
        return Err(Error::Input(format!(
            "arrival garage {g} out of range for {m} garages"
        )));
    }
    let total: u64 = capacities.iter().map(|&c| c as u64).sum();
    if arrivals.len() as u64 > total {
        return Err(Error::Input(format!(
            "{} arrivals exceed total capacity {total}",
            arrivals.len()
        )));
    }
    Ok(())
}

/// Cheapest-pair-first matching: repeatedly commits the (car, garage) pair with the
/// smallest key among unassigned cars and unfull garages, ties by car then garage index.
/// Optimal for sums over any ultrametric, in particular tree path maxima.
fn cheapest_pair_first(
    capacities: &[u32],
    arrivals: &[usize],
    key: impl Fn(usize, usize) -> u32,
) -> Vec<usize> {
    let m = capacities.len();
    let mut pairs: Vec<(u32, usize, usize)> = Vec::with_capacity(arrivals.len() * m);
    for (car, &from) in arrivals.iter().enumerate() {
        for g in 0..m {
            pairs.push((key(from, g), car, g));
        }
    }
    pairs.sort_unstable();
    let mut residual = capacities.to_vec();
    let mut assignment = vec![usize::MAX; arrivals.len()];
    let mut left = arrivals.len();
    for (_, car, g) in pairs {
        if left == 0 {
            break;
        }
        if assignment[car] == usize::MAX && residual[g] > 0 {
            assignment[car] = g;
            residual[g] -= 1;
            left -= 1;
        }
    }
    assignment
}

fn tree_plan(tree: &PowerOfTwoTree, arrivals: &[usize], assignment: Vec<usize>) -> Plan {
    let distance = arrivals
        .iter()
        .zip(&assignment)
        .map(|(&a, &g)| tree.to_length(tree.path_units(a, g)))
        .collect();
    let bottleneck = arrivals
        .iter()
        .zip(&assignment)
        .map(|(&a, &g)| tree.to_length(tree.bottleneck_units(a, g)))
        .collect();
    Plan {
        assignment,
        distance,
        bottleneck: Some(bottleneck),
    }
}

/// Exact bottleneck cost of a plan on `T`, in tree units.
pub fn bottleneck_units(tree: &PowerOfTwoTree, arrivals: &[usize], assignment: &[usize]) -> Units {
    arrivals
        .iter()
        .zip(assignment)
        .map(|(&a, &g)| tree.bottleneck_units(a, g))
        .sum()
}

/// Optimal bottleneck matching on a power-of-two tree by cheapest-pair-first greedy.
pub fn bottleneck_greedy(
    tree: &PowerOfTwoTree,
    capacities: &[u32],
    arrivals: &[usize],
) -> Result<Plan> {
    check_feasible(tree.vertex_count(), capacities, arrivals)?;
    let assignment = cheapest_pair_first(capacities, arrivals, |a, g| {
        tree.bottleneck_exponent(a, g).map_or(0, |e| e + 1)
    });
    Ok(tree_plan(tree, arrivals, assignment))
}

/// Optimal bottleneck matching on an arbitrary spanning tree (real edge lengths).
pub fn bottleneck_on_spanning(
    tree: &SpanningTree,
    capacities: &[u32],
    arrivals: &[usize],
) -> Result<Plan> {
    check_feasible(tree.vertex_count(), capacities, arrivals)?;
    let maxima = tree.bottleneck_matrix();
    let mut levels: Vec<f64> = tree.edges().iter().map(|e| e.length).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let rank = |v: f64| -> u32 {
        if v == 0.0 {
            0
        } else {
            levels.partition_point(|&x| x < v) as u32 + 1
        }
    };
    let assignment = cheapest_pair_first(capacities, arrivals, |a, g| rank(maxima[a][g]));
    let lengths = tree.path_length_matrix();
    Ok(Plan {
        distance: arrivals
            .iter()
            .zip(&assignment)
            .map(|(&a, &g)| lengths[a][g])
            .collect(),
        bottleneck: Some(
            arrivals
                .iter()
                .zip(&assignment)
                .map(|(&a, &g)| maxima[a][g])
                .collect(),
        ),
        assignment,
    })
}

/// Optimal bottleneck matching built bottom-up over the level components of `T`.
///
/// Cars first fill their own garage. Then edges are added in groups of equal
/// exponent `j`; inside each merged component the leftover cars take the free
/// slots, each such match costing exactly `2^j`. At every stage the number of
/// leftover cars must equal the summed capacity surplus of the components
/// (Hall's condition per component); a mismatch is reported as an invariant error.
pub fn bottleneck_threshold(
    tree: &PowerOfTwoTree,
    capacities: &[u32],
    arrivals: &[usize],
) -> Result<Plan> {
    let m = tree.vertex_count();
    check_feasible(m, capacities, arrivals)?;
    let mut residual = capacities.to_vec();
    let mut assignment = vec![usize::MAX; arrivals.len()];
    let mut waiting: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (car, &g) in arrivals.iter().enumerate() {
        if residual[g] > 0 {
            residual[g] -= 1;
            assignment[car] = g;
        } else {
            waiting[g].push(car);
        }
    }
    let mut members: Vec<Vec<usize>> = (0..m).map(|g| vec![g]).collect();
    let mut uf = UnionFind::new(m);
    let mut edges = tree.edges().to_vec();
    edges.sort_by_key(|e| (e.exponent, e.u.min(e.v), e.u.max(e.v)));

    let mut surplus: Vec<i64> = vec![0; m];
    for &g in arrivals {
        surplus[g] += 1;
    }
    for (g, &c) in capacities.iter().enumerate() {
        surplus[g] -= c as i64;
    }

    let mut start = 0;
    while start < edges.len() {
        let exponent = edges[start].exponent;
        let end = start
            + edges[start..]
                .iter()
                .take_while(|e| e.exponent == exponent)
                .count();
        let mut touched = Vec::new();
        for e in &edges[start..end] {
            let (ra, rb) = (uf.find(e.u), uf.find(e.v));
            uf.union(ra, rb);
            let root = uf.find(ra);
            let other = if root == ra { rb } else { ra };
            let moved = std::mem::take(&mut members[other]);
            members[root].extend(moved);
            let moved = std::mem::take(&mut waiting[other]);
            waiting[root].extend(moved);
            surplus[root] += std::mem::take(&mut surplus[other]);
            touched.push(root);
        }
        touched.sort_unstable();
        touched.dedup();
        for r in touched {
            let root = uf.find(r);
            if root != r {
                continue;
            }
            let mut cars = std::mem::take(&mut waiting[root]);
            cars.sort_unstable();
            let mut garages = members[root].clone();
            garages.sort_unstable();
            let mut left = Vec::new();
            let mut slots = garages
                .iter()
                .flat_map(|&g| std::iter::repeat_n(g, residual[g] as usize));
            let mut fills = Vec::new();
            for car in cars {
                match slots.next() {
                    Some(g) => fills.push((car, g)),
                    None => left.push(car),
                }
            }
            drop(slots);
            for (car, g) in fills {
                residual[g] -= 1;
                assignment[car] = g;
            }
            waiting[root] = left;
        }
        // Hall check: leftovers equal the positive surpluses of the components
        let leftover: usize = waiting.iter().map(Vec::len).sum();
        let expected: i64 = (0..m)
            .filter(|&g| uf.find(g) == g)
            .map(|g| surplus[g].max(0))
            .sum();
        if leftover as i64 != expected {
            return Err(Error::Invariant(format!(
                "after exponent {exponent}: {leftover} cars unplaced, component surplus is {expected}"
            )));
        }
        start = end;
    }
    if assignment.contains(&usize::MAX) {
        return Err(Error::Invariant(
            "bottom-up matching left cars unplaced".into(),
        ));
    }
    Ok(tree_plan(tree, arrivals, assignment))
}

//! Level trees `T_j(i)`, their closed depth-first tours `W_j(i)`, and cursors that
//! walk the concatenation `W_0(i) W_1(i) W_2(i) ...`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::{units, PowerOfTwoTree, TreeEdge, Units};

/// Garages reachable from `root` using only edges with exponent below `level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTree {
    pub root: usize,
    pub level: u32,
    /// Ascending garage indices.
    pub members: Vec<usize>,
    pub edges: Vec<TreeEdge>,
}

impl LevelTree {
    pub fn contains(&self, garage: usize) -> bool {
        self.members.binary_search(&garage).is_ok()
    }

    pub fn edge_units(&self) -> Units {
        self.edges.iter().map(|e| units(e.exponent)).sum()
    }

    /// Number of member edges with the given exponent.
    pub fn count_exponent(&self, exponent: u32) -> usize {
        self.edges.iter().filter(|e| e.exponent == exponent).count()
    }
}

pub fn level_tree(tree: &PowerOfTwoTree, root: usize, level: u32) -> LevelTree {
    let mut seen = vec![false; tree.vertex_count()];
    let mut members = vec![root];
    let mut edges = Vec::new();
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &(y, exponent) in tree.neighbors(x) {
            if exponent < level && !seen[y] {
                seen[y] = true;
                members.push(y);
                edges.push(TreeEdge {
                    u: x,
                    v: y,
                    exponent,
                });
                stack.push(y);
            }
        }
    }
    members.sort_unstable();
    LevelTree {
        root,
        level,
        members,
        edges,
    }
}

/// Order in which a depth-first tour visits the children of a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ChildOrder {
    /// Ascending garage index.
    #[default]
    Ascending,
    /// Ascending by `rank[garage]`, ties by garage index.
    Ranked(Vec<usize>),
}

impl ChildOrder {
    fn sort(&self, children: &mut [(usize, u32)]) {
        match self {
            ChildOrder::Ascending => children.sort_unstable(),
            ChildOrder::Ranked(rank) => children.sort_unstable_by_key(|&(g, _)| (rank[g], g)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TourStep {
    pub garage: usize,
    /// Length of the edge used to enter `garage`; zero for the starting step.
    pub hop: Units,
}

/// A closed tour that starts and ends at the root and crosses every edge twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTour {
    pub root: usize,
    pub level: u32,
    pub steps: Vec<TourStep>,
    pub length: Units,
}

impl WalkTour {
    pub fn garages(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.garage).collect()
    }
}

pub fn dfs_walk(lt: &LevelTree, order: &ChildOrder) -> WalkTour {
    let mut adjacency: Vec<(usize, Vec<(usize, u32)>)> =
        lt.members.iter().map(|&g| (g, Vec::new())).collect();
    let slot = |g: usize| {
        lt.members
            .binary_search(&g)
            .expect("edge endpoint is a member")
    };
    for e in &lt.edges {
        adjacency[slot(e.u)].1.push((e.v, e.exponent));
        adjacency[slot(e.v)].1.push((e.u, e.exponent));
    }
    for (_, children) in &mut adjacency {
        order.sort(children);
    }

    let mut steps = vec![TourStep {
        garage: lt.root,
        hop: 0,
    }];
    let mut length: Units = 0;
    // (vertex, parent, exponent of the edge to parent, next child position)
    let mut stack: Vec<(usize, usize, u32, usize)> = vec![(lt.root, usize::MAX, 0, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, parent, up_exp, next) = *top;
        let children = &adjacency[slot(v)].1;
        if let Some(&(child, exp)) = children.get(next) {
            top.3 += 1;
            if child == parent {
                continue;
            }
            steps.push(TourStep {
                garage: child,
                hop: units(exp),
            });
            length += units(exp);
            stack.push((child, v, exp, 0));
        } else {
            stack.pop();
            if parent != usize::MAX {
                steps.push(TourStep {
                    garage: parent,
                    hop: units(up_exp),
                });
                length += units(up_exp);
            }
        }
    }
    WalkTour {
        root: lt.root,
        level: lt.level,
        steps,
        length,
    }
}

/// Lazily built tours for every `(root, level)` of one tree.
#[derive(Debug, Clone)]
pub struct WalkCache {
    order: ChildOrder,
    top_level: u32,
    tours: Vec<Vec<Option<Arc<WalkTour>>>>,
    trees: Vec<Vec<Option<Arc<LevelTree>>>>,
}

impl WalkCache {
    pub fn new(tree: &PowerOfTwoTree, order: ChildOrder) -> Self {
        let m = tree.vertex_count();
        let levels = tree.top_level() as usize + 1;
        WalkCache {
            order,
            top_level: tree.top_level(),
            tours: vec![vec![None; levels]; m],
            trees: vec![vec![None; levels]; m],
        }
    }

    pub fn order(&self) -> &ChildOrder {
        &self.order
    }

    /// Highest level a walk may reach: the level whose tree spans all of `T`.
    pub fn top_level(&self) -> u32 {
        self.top_level
    }

    pub fn level_tree(&mut self, tree: &PowerOfTwoTree, root: usize, level: u32) -> Arc<LevelTree> {
        let level = level.min(self.top_level);
        self.trees[root][level as usize]
            .get_or_insert_with(|| Arc::new(level_tree(tree, root, level)))
            .clone()
    }

    pub fn tour(&mut self, tree: &PowerOfTwoTree, root: usize, level: u32) -> Arc<WalkTour> {
        if let Some(t) = &self.tours[root][level as usize] {
            return t.clone();
        }
        let lt = self.level_tree(tree, root, level);
        let t = Arc::new(dfs_walk(&lt, &self.order));
        self.tours[root][level as usize] = Some(t.clone());
        t
    }
}

/// Position of one car in the concatenated tour sequence of its arrival garage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkCursor {
    pub car: usize,
    pub root: usize,
    pub level: u32,
    /// Index into the steps of `W_level(root)`.
    pub index: usize,
    pub traveled: Units,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Advance {
    pub garage: usize,
    pub hop: Units,
    pub leveled_up: bool,
}

impl WalkCursor {
    pub fn start(car: usize, root: usize) -> Self {
        WalkCursor {
            car,
            root,
            level: 0,
            index: 0,
            traveled: 0,
        }
    }

    pub fn garage(&self, cache: &mut WalkCache, tree: &PowerOfTwoTree) -> usize {
        cache.tour(tree, self.root, self.level).steps[self.index].garage
    }

    /// Moves to the next step. At the end of a tour the cursor enters the next
    /// level's tour at the root with a zero-length hop.
    pub fn advance(&mut self, cache: &mut WalkCache, tree: &PowerOfTwoTree) -> Result<Advance> {
        let tour = cache.tour(tree, self.root, self.level);
        if self.index + 1 < tour.steps.len() {
            self.index += 1;
            let step = tour.steps[self.index];
            self.traveled += step.hop;
            return Ok(Advance {
                garage: step.garage,
                hop: step.hop,
                leveled_up: false,
            });
        }
        if self.level >= cache.top_level() {
            return Err(Error::Invariant(format!(
                "car {} finished its level {} walk from garage {} without parking",
                self.car, self.level, self.root
            )));
        }
        self.level += 1;
        self.index = 0;
        Ok(Advance {
            garage: self.root,
            hop: 0,
            leveled_up: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(exps: &[u32]) -> PowerOfTwoTree {
        let edges = exps
            .iter()
            .enumerate()
            .map(|(i, &exponent)| TreeEdge {
                u: i,
                v: i + 1,
                exponent,
            })
            .collect();
        PowerOfTwoTree::new(exps.len() + 1, 1.0, edges).unwrap()
    }

    #[test]
    fn level_trees_on_a_path() {
        let t = path(&[0, 1]);
        assert_eq!(level_tree(&t, 2, 0).members, vec![2]);
        assert_eq!(level_tree(&t, 0, 1).members, vec![0, 1]);
        assert_eq!(level_tree(&t, 0, 2).members, vec![0, 1, 2]);
    }

    #[test]
    fn tours() {
        let t = path(&[0]);
        let single = dfs_walk(&level_tree(&t, 0, 0), &ChildOrder::Ascending);
        assert_eq!(single.garages(), vec![0]);
        assert_eq!(single.length, 0);
        let edge = dfs_walk(&level_tree(&t, 0, 1), &ChildOrder::Ascending);
        assert_eq!(edge.garages(), vec![0, 1, 0]);
        assert_eq!(edge.length, 2);

        // star: centre 2, leaves 0 and 1
        let star = PowerOfTwoTree::new(
            3,
            1.0,
            vec![
                TreeEdge {
                    u: 2,
                    v: 1,
                    exponent: 0,
                },
                TreeEdge {
                    u: 2,
                    v: 0,
                    exponent: 0,
                },
            ],
        )
        .unwrap();
        let w = dfs_walk(&level_tree(&star, 2, 1), &ChildOrder::Ascending);
        assert_eq!(w.garages(), vec![2, 0, 2, 1, 2]);
        assert_eq!(w.length, 4);
        let ranked = dfs_walk(&level_tree(&star, 2, 1), &ChildOrder::Ranked(vec![1, 0, 2]));
        assert_eq!(ranked.garages(), vec![2, 1, 2, 0, 2]);
    }

    #[test]
    fn cursor_crosses_levels_at_the_root() {
        let t = path(&[0, 1]);
        let mut cache = WalkCache::new(&t, ChildOrder::Ascending);
        let mut c = WalkCursor::start(0, 0);
        let a = c.advance(&mut cache, &t).unwrap();
        assert_eq!(
            a,
            Advance {
                garage: 0,
                hop: 0,
                leveled_up: true
            }
        );
        assert_eq!(c.advance(&mut cache, &t).unwrap().garage, 1);
        assert_eq!(c.advance(&mut cache, &t).unwrap().garage, 0);
        assert_eq!(c.traveled, 2);
        assert!(c.advance(&mut cache, &t).unwrap().leveled_up);
        let hops: Vec<_> = (0..4)
            .map(|_| {
                let a = c.advance(&mut cache, &t).unwrap();
                (a.garage, a.hop)
            })
            .collect();
        assert_eq!(hops, vec![(1, 1), (2, 2), (1, 2), (0, 1)]);
        assert_eq!(c.traveled, 8);
        assert!(matches!(
            c.advance(&mut cache, &t),
            Err(Error::Invariant(_))
        ));
    }
}

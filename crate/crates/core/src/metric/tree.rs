use crate::error::{Error, Result};
use crate::metric::{GarageLayout, MetricSpace, UnionFind};

/// Largest edge exponent a [`PowerOfTwoTree`] may carry. Keeps unit sums exact in `f64`.
pub const MAX_EXPONENT: u32 = 50;

/// Relative tolerance for treating a length ratio as an exact power of two.
pub const POWER_OF_TWO_TOLERANCE: f64 = 1e-9;

/// Tree lengths measured in multiples of the tree's `scale`. Always exact.
pub type Units = u128;

pub fn units(exponent: u32) -> Units {
    1u128 << exponent
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanningEdge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// A spanning tree on the garages, with M-distances as edge lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    m: usize,
    edges: Vec<SpanningEdge>,
}

impl SpanningTree {
    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[SpanningEdge] {
        &self.edges
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// `out[u][v]` = longest edge on the `u`–`v` path (0 on the diagonal).
    pub fn bottleneck_matrix(&self) -> Vec<Vec<f64>> {
        self.fold_paths(f64::max)
    }

    /// `out[u][v]` is the length of the tree path from `u` to `v`.
    pub fn path_length_matrix(&self) -> Vec<Vec<f64>> {
        self.fold_paths(|acc, w| acc + w)
    }

    fn fold_paths(&self, step: impl Fn(f64, f64) -> f64) -> Vec<Vec<f64>> {
        let mut adj = vec![Vec::new(); self.m];
        for e in &self.edges {
            adj[e.u].push((e.v, e.length));
            adj[e.v].push((e.u, e.length));
        }
        let mut out = vec![vec![0.0; self.m]; self.m];
        for (src, row) in out.iter_mut().enumerate() {
            let mut stack = vec![(src, usize::MAX, 0.0f64)];
            while let Some((x, parent, acc)) = stack.pop() {
                row[x] = acc;
                for &(y, w) in &adj[x] {
                    if y != parent {
                        stack.push((y, x, step(acc, w)));
                    }
                }
            }
        }
        out
    }
}

/// Minimum spanning tree of the garage sub-metric, Kruskal order with ties
/// broken by `(length, min index, max index)`.
pub fn build_mst(space: &MetricSpace, layout: &GarageLayout) -> Result<SpanningTree> {
    let m = layout.len();
    if m == 0 {
        return Err(Error::Input(
            "cannot build a spanning tree on zero garages".into(),
        ));
    }
    if let Some(g) = layout.points().iter().position(|&p| !space.contains(p)) {
        return Err(Error::Input(format!(
            "garage {g} refers to a point outside the space"
        )));
    }
    if let Some(&(a, b)) = layout.colocated_pairs(space).first() {
        return Err(Error::Input(format!(
            "garages {a} and {b} share a location"
        )));
    }
    let mut candidates = Vec::with_capacity(m * (m - 1) / 2);
    for u in 0..m {
        for v in u + 1..m {
            candidates.push(SpanningEdge {
                u,
                v,
                length: space.d(layout.point(u), layout.point(v)),
            });
        }
    }
    candidates.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.u.cmp(&b.u))
            .then(a.v.cmp(&b.v))
    });
    let mut uf = UnionFind::new(m);
    let mut edges = Vec::with_capacity(m - 1);
    for e in candidates {
        if uf.union(e.u, e.v) {
            edges.push(e);
            if edges.len() == m - 1 {
                break;
            }
        }
    }
    Ok(SpanningTree { m, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub exponent: u32,
}

/// A tree on the garages whose edge lengths are `scale * 2^exponent`.
///
/// Path lengths and path maxima for every garage pair are precomputed in units,
/// so all tree-side arithmetic is exact integer arithmetic.
#[derive(Debug, Clone)]
pub struct PowerOfTwoTree {
    m: usize,
    scale: f64,
    edges: Vec<TreeEdge>,
    adjacency: Vec<Vec<(usize, u32)>>,
    path_units: Vec<Vec<Units>>,
    path_max: Vec<Vec<Option<u32>>>,
}

impl PowerOfTwoTree {
    pub fn new(m: usize, scale: f64, edges: Vec<TreeEdge>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Input("a tree needs at least one vertex".into()));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Input(format!(
                "tree scale must be positive, got {scale}"
            )));
        }
        if edges.len() != m - 1 {
            return Err(Error::Input(format!(
                "a tree on {m} vertices needs {} edges, got {}",
                m - 1,
                edges.len()
            )));
        }
        let mut uf = UnionFind::new(m);
        let mut adjacency = vec![Vec::new(); m];
        for e in &edges {
            if e.u >= m || e.v >= m {
                return Err(Error::Input(format!("edge ({},{}) out of range", e.u, e.v)));
            }
            if e.exponent > MAX_EXPONENT {
                return Err(Error::Range(format!(
                    "edge ({},{}) exponent {} exceeds {MAX_EXPONENT}",
                    e.u, e.v, e.exponent
                )));
            }
            if !uf.union(e.u, e.v) {
                return Err(Error::Input(format!(
                    "edge ({},{}) closes a cycle",
                    e.u, e.v
                )));
            }
            adjacency[e.u].push((e.v, e.exponent));
            adjacency[e.v].push((e.u, e.exponent));
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let mut path_units = vec![vec![0; m]; m];
        let mut path_max = vec![vec![None; m]; m];
        for src in 0..m {
            let mut stack: Vec<(usize, usize, Units, Option<u32>)> =
                vec![(src, usize::MAX, 0, None)];
            while let Some((x, parent, len, max)) = stack.pop() {
                path_units[src][x] = len;
                path_max[src][x] = max;
                for &(y, exp) in &adjacency[x] {
                    if y != parent {
                        stack.push((
                            y,
                            x,
                            len + units(exp),
                            Some(max.map_or(exp, |b| b.max(exp))),
                        ));
                    }
                }
            }
        }
        Ok(PowerOfTwoTree {
            m,
            scale,
            edges,
            adjacency,
            path_units,
            path_max,
        })
    }

    /// The single-vertex tree with scale one.
    pub fn trivial() -> Self {
        Self::new(1, 1.0, Vec::new()).expect("one vertex, no edges")
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    /// Neighbours of `v` as `(neighbour, exponent)`, ascending by neighbour index.
    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.adjacency[v]
    }

    pub fn max_exponent(&self) -> Option<u32> {
        self.edges.iter().map(|e| e.exponent).max()
    }

    /// Highest walk level a car can ever need: the level whose tree is all of `T`.
    pub fn top_level(&self) -> u32 {
        self.max_exponent().map_or(0, |e| e + 1)
    }

    pub fn to_length(&self, u: Units) -> f64 {
        u as f64 * self.scale
    }

    pub fn edge_length(&self, exponent: u32) -> f64 {
        self.to_length(units(exponent))
    }

    pub fn path_units(&self, u: usize, v: usize) -> Units {
        self.path_units[u][v]
    }

    /// Exponent of the longest edge on the `u`–`v` path, `None` when `u == v`.
    pub fn bottleneck_exponent(&self, u: usize, v: usize) -> Option<u32> {
        self.path_max[u][v]
    }

    pub fn bottleneck_units(&self, u: usize, v: usize) -> Units {
        self.path_max[u][v].map_or(0, units)
    }

    /// `(path length, longest edge length)` on the `u`–`v` path; `(0, 0)` when `u == v`.
    pub fn tree_path_stats(&self, u: usize, v: usize) -> Result<(f64, f64)> {
        if u >= self.m || v >= self.m {
            return Err(Error::Input(format!(
                "garage pair ({u},{v}) out of range for a tree on {} vertices",
                self.m
            )));
        }
        Ok((
            self.to_length(self.path_units(u, v)),
            self.to_length(self.bottleneck_units(u, v)),
        ))
    }

    /// Tree metric as an explicit distance matrix over the garages.
    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|u| {
                (0..self.m)
                    .map(|v| self.to_length(self.path_units(u, v)))
                    .collect()
            })
            .collect()
    }
}

/// Smallest `j >= 0` with `2^j >= ratio`, snapping to an exact power when `ratio`
/// is within [`POWER_OF_TWO_TOLERANCE`] of one.
pub fn round_up_exponent(ratio: f64) -> Result<u32> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::Range(format!(
            "cannot round ratio {ratio} to a power of two"
        )));
    }
    let nearest = ratio.log2().round();
    if nearest >= 0.0 && nearest <= MAX_EXPONENT as f64 {
        let p = 2f64.powi(nearest as i32);
        if (ratio - p).abs() <= POWER_OF_TWO_TOLERANCE * p {
            return Ok(nearest as u32);
        }
    }
    let mut j = ratio.log2().ceil().max(0.0);
    if j > MAX_EXPONENT as f64 + 1.0 {
        return Err(Error::Range(format!(
            "length ratio {ratio} needs exponent above {MAX_EXPONENT}"
        )));
    }
    // log2 may be off by an ulp near powers of two
    while 2f64.powi(j as i32) < ratio {
        j += 1.0;
    }
    while j > 0.0 && 2f64.powi(j as i32 - 1) >= ratio {
        j -= 1.0;
    }
    let j = j as u32;
    if j > MAX_EXPONENT {
        return Err(Error::Range(format!(
            "length ratio {ratio} needs exponent {j} above {MAX_EXPONENT}"
        )));
    }
    Ok(j)
}

/// Rescales so the closest garage pair is at distance one and rounds every
/// spanning-tree edge up to the next power of two.
pub fn scale_and_round(
    tree: &SpanningTree,
    layout: &GarageLayout,
    space: &MetricSpace,
) -> Result<PowerOfTwoTree> {
    let m = layout.len();
    if tree.vertex_count() != m {
        return Err(Error::Input(format!(
            "spanning tree has {} vertices but layout has {m} garages",
            tree.vertex_count()
        )));
    }
    if m == 1 {
        return Ok(PowerOfTwoTree::trivial());
    }
    let mut scale = f64::INFINITY;
    for a in 0..m {
        for b in a + 1..m {
            scale = scale.min(space.d(layout.point(a), layout.point(b)));
        }
    }
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::Input(
            "garage locations must be pairwise distinct".into(),
        ));
    }
    let edges = tree
        .edges()
        .iter()
        .map(|e| {
            Ok(TreeEdge {
                u: e.u,
                v: e.v,
                exponent: round_up_exponent(e.length / scale)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PowerOfTwoTree::new(m, scale, edges)
}

/// `build_mst` followed by `scale_and_round`.
pub fn power_of_two_tree(
    space: &MetricSpace,
    layout: &GarageLayout,
) -> Result<(SpanningTree, PowerOfTwoTree)> {
    let s = build_mst(space, layout)?;
    let t = scale_and_round(&s, layout, space)?;
    Ok((s, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_layout(xs: &[f64]) -> (MetricSpace, GarageLayout) {
        let space = MetricSpace::line(xs).unwrap();
        let layout = GarageLayout::unit((0..xs.len()).collect()).unwrap();
        (space, layout)
    }

    #[test]
    fn mst_on_a_line() {
        let (space, layout) = line_layout(&[0.0, 1.0, 3.0]);
        let s = build_mst(&space, &layout).unwrap();
        let got: Vec<_> = s.edges().iter().map(|e| (e.u, e.v, e.length)).collect();
        assert_eq!(got, vec![(0, 1, 1.0), (1, 2, 2.0)]);
        assert_eq!(s.total_length(), 3.0);
    }

    #[test]
    fn mst_single_vertex_and_ties() {
        let (space, layout) = line_layout(&[4.0]);
        assert!(build_mst(&space, &layout).unwrap().edges().is_empty());

        let s = MetricSpace::explicit(vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        let l = GarageLayout::unit(vec![0, 1, 2]).unwrap();
        let got: Vec<_> = build_mst(&s, &l)
            .unwrap()
            .edges()
            .iter()
            .map(|e| (e.u, e.v))
            .collect();
        assert_eq!(got, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn mst_rejects_duplicates() {
        let (space, _) = line_layout(&[0.0, 0.0]);
        let layout = GarageLayout::unit(vec![0, 1]).unwrap();
        assert!(matches!(build_mst(&space, &layout), Err(Error::Input(_))));
    }

    #[test]
    fn exponents_round_up() {
        assert_eq!(round_up_exponent(1.0).unwrap(), 0);
        assert_eq!(round_up_exponent(2.0).unwrap(), 1);
        assert_eq!(round_up_exponent(3.0).unwrap(), 2);
        assert_eq!(round_up_exponent(2.0000000001).unwrap(), 1);
        assert_eq!(round_up_exponent(2.001).unwrap(), 2);
        assert_eq!(round_up_exponent(1.5).unwrap(), 1);
        assert!(matches!(
            round_up_exponent(2f64.powi(51)),
            Err(Error::Range(_))
        ));
        assert_eq!(round_up_exponent(2f64.powi(50)).unwrap(), 50);
    }

    #[test]
    fn scale_and_round_examples() {
        // lengths {0.5, 1.5}, scale 0.5 -> ratios {1, 3} -> exponents {0, 2}
        let (space, layout) = line_layout(&[0.0, 0.5, 2.0]);
        let (_, t) = power_of_two_tree(&space, &layout).unwrap();
        assert_eq!(t.scale(), 0.5);
        let exps: Vec<_> = t.edges().iter().map(|e| e.exponent).collect();
        assert_eq!(exps, vec![0, 2]);
        let lens: Vec<_> = t
            .edges()
            .iter()
            .map(|e| t.edge_length(e.exponent))
            .collect();
        assert_eq!(lens, vec![0.5, 2.0]);

        let (space, layout) = line_layout(&[0.0, 1.0, 3.0]);
        let (_, t) = power_of_two_tree(&space, &layout).unwrap();
        let exps: Vec<_> = t.edges().iter().map(|e| e.exponent).collect();
        assert_eq!(exps, vec![0, 1]);

        let (space, layout) = line_layout(&[0.0, 1.0, 4.0]);
        let (_, t) = power_of_two_tree(&space, &layout).unwrap();
        assert_eq!(t.edge_length(t.edges()[1].exponent), 4.0);
    }

    #[test]
    fn spread_too_large_is_a_range_error() {
        let (space, layout) = line_layout(&[0.0, 1.0, 1.0 + 2f64.powi(52)]);
        assert!(matches!(
            power_of_two_tree(&space, &layout),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn path_stats() {
        let t = PowerOfTwoTree::new(
            3,
            1.0,
            vec![
                TreeEdge {
                    u: 0,
                    v: 1,
                    exponent: 0,
                },
                TreeEdge {
                    u: 1,
                    v: 2,
                    exponent: 1,
                },
            ],
        )
        .unwrap();
        assert_eq!(t.tree_path_stats(0, 2).unwrap(), (3.0, 2.0));
        assert_eq!(t.tree_path_stats(1, 1).unwrap(), (0.0, 0.0));
        assert!(t.tree_path_stats(0, 3).is_err());

        // star with centre 0, leaf edges 1 and 4
        let star = PowerOfTwoTree::new(
            3,
            1.0,
            vec![
                TreeEdge {
                    u: 0,
                    v: 1,
                    exponent: 0,
                },
                TreeEdge {
                    u: 0,
                    v: 2,
                    exponent: 2,
                },
            ],
        )
        .unwrap();
        assert_eq!(star.tree_path_stats(1, 2).unwrap(), (5.0, 4.0));
    }

    #[test]
    fn tree_constructor_rejects_non_trees() {
        let cyc = vec![
            TreeEdge {
                u: 0,
                v: 1,
                exponent: 0,
            },
            TreeEdge {
                u: 1,
                v: 0,
                exponent: 0,
            },
        ];
        assert!(PowerOfTwoTree::new(3, 1.0, cyc).is_err());
        assert!(PowerOfTwoTree::new(2, 1.0, vec![]).is_err());
        assert!(PowerOfTwoTree::new(
            2,
            1.0,
            vec![TreeEdge {
                u: 0,
                v: 1,
                exponent: 51
            }]
        )
        .is_err());
    }
}

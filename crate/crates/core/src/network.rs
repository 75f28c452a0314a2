//! Weighted resistor networks and the classical resistance-preserving
//! transformations on them: series and parallel merging, elimination of a
//! pendant block, and substitution of an equivalent sub-network.
//!
//! Every transform removing vertices relabels the survivors densely in their
//! original order and returns the map `old id -> Option<new id>`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::rational::ExactRational;

pub type VertexMap = Vec<Option<VertexId>>;

/// Undirected multigraph with a positive resistance on every edge. Edges are
/// kept normalised (`u < v`, sorted), so equality is multiset equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedNetwork {
    order: usize,
    edges: Vec<(VertexId, VertexId, ExactRational)>,
}

impl WeightedNetwork {
    pub fn new(order: usize, edges: Vec<(VertexId, VertexId, ExactRational)>) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v, r) in edges {
            for x in [u, v] {
                if x >= order {
                    return Err(Error::VertexOutOfRange { vertex: x, order });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !r.is_positive() {
                return Err(Error::NonPositiveResistance(u, v));
            }
            norm.push((u.min(v), u.max(v), r));
        }
        norm.sort();
        Ok(WeightedNetwork { order, edges: norm })
    }

    /// Unit resistor on every edge of `g`.
    pub fn from_graph(g: &Graph) -> Self {
        let edges = g
            .edges()
            .map(|(u, v)| (u, v, ExactRational::one()))
            .collect();
        WeightedNetwork::new(g.order(), edges).expect("graph edges are valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, ExactRational)] {
        &self.edges
    }

    /// Underlying simple graph (parallel edges collapsed).
    pub fn skeleton(&self) -> Graph {
        let pairs: Vec<_> = self.edges.iter().map(|(u, v, _)| (*u, *v)).collect();
        Graph::new(self.order, &pairs).expect("network edges are valid")
    }

    pub fn is_connected(&self) -> bool {
        self.skeleton().is_connected()
    }

    fn incident(&self, v: VertexId) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].0 == v || self.edges[i].1 == v)
            .collect()
    }

    /// Grounded weighted Laplacian (conductances `1/r`), inverted exactly.
    /// Row/column `i` of the result is vertex `i` for `i < ground`, `i + 1`
    /// otherwise.
    fn grounded_inverse(&self, ground: VertexId) -> Vec<Vec<ExactRational>> {
        let n = self.order;
        let idx = |v: VertexId| if v < ground { v } else { v - 1 };
        let k = n - 1;
        let mut m = vec![vec![ExactRational::zero(); 2 * k]; k];
        for (u, v, r) in &self.edges {
            let c = r.recip();
            for (a, b) in [(*u, *v), (*v, *u)] {
                if a != ground {
                    let ia = idx(a);
                    m[ia][ia] = &m[ia][ia] + &c;
                    if b != ground {
                        m[ia][idx(b)] = &m[ia][idx(b)] - &c;
                    }
                }
            }
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[k + i] = ExactRational::one();
        }
        // Gauss-Jordan; the grounded Laplacian of a connected network is
        // positive definite, so every pivot is non-zero without swapping.
        for col in 0..k {
            let pivot = m[col][col].clone();
            assert!(!pivot.is_zero(), "singular grounded Laplacian");
            for x in m[col].iter_mut() {
                *x = &*x / &pivot;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * p);
                }
            }
        }
        m.into_iter().map(|row| row[k..].to_vec()).collect()
    }

    /// All pairwise effective resistances (zero diagonal).
    pub fn resistance_matrix(&self) -> Result<Vec<Vec<ExactRational>>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.order;
        let ground = n - 1;
        let inv = self.grounded_inverse(ground);
        let mut out = vec![vec![ExactRational::zero(); n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let r = if v == ground {
                    inv[u][u].clone()
                } else {
                    &(&inv[u][u] + &inv[v][v]) - &(&inv[u][v] + &inv[u][v])
                };
                out[u][v] = r.clone();
                out[v][u] = r;
            }
        }
        Ok(out)
    }

    /// Text form: header `n m`, then one `u v num/den` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.order, self.edges.len());
        for (u, v, r) in &self.edges {
            s.push_str(&format!("{u} {v} {r}\n"));
        }
        s
    }
}

impl fmt::Debug for WeightedNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedNetwork({}, [", self.order)?;
        for (i, (u, v, r)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}:{r}")?;
        }
        write!(f, "])")
    }
}

impl FromStr for WeightedNetwork {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing header line".into()))?;
        let parse_usize = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Format(format!("bad {what}: {s:?}")))
        };
        let mut head = header.split_whitespace();
        let (Some(n), Some(m), None) = (head.next(), head.next(), head.next()) else {
            return Err(Error::Format(format!(
                "header must be `n m`, got {header:?}"
            )));
        };
        let (n, m) = (
            parse_usize(n, "vertex count")?,
            parse_usize(m, "edge count")?,
        );
        let mut edges = Vec::with_capacity(m);
        for line in lines.by_ref().take(m) {
            let mut parts = line.split_whitespace();
            let (Some(u), Some(v), Some(r), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::Format(format!(
                    "edge line must be `u v num/den`, got {line:?}"
                )));
            };
            edges.push((
                parse_usize(u, "vertex")?,
                parse_usize(v, "vertex")?,
                r.parse::<ExactRational>()?,
            ));
        }
        if edges.len() != m {
            return Err(Error::Format(format!(
                "expected {m} edges, found {}",
                edges.len()
            )));
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Format(format!("unexpected trailing line {extra:?}")));
        }
        WeightedNetwork::new(n, edges)
    }
}

fn check_pair(net: &WeightedNetwork, u: VertexId, v: VertexId) -> Result<()> {
    for x in [u, v] {
        if x >= net.order {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                order: net.order,
            });
        }
    }
    if u == v {
        return Err(Error::SameVertex(u));
    }
    Ok(())
}

/// Effective resistance between `u` and `v` with conductance `1/r` per edge.
pub fn weighted_resistance(
    net: &WeightedNetwork,
    u: VertexId,
    v: VertexId,
) -> Result<ExactRational> {
    check_pair(net, u, v)?;
    if !net.is_connected() {
        return Err(Error::Disconnected);
    }
    let inv = net.grounded_inverse(u);
    let iv = if v < u { v } else { v - 1 };
    Ok(inv[iv][iv].clone())
}

/// Drops the vertices in `removed` (a bitmask) and relabels densely.
fn compact(order: usize, removed: &[bool]) -> (usize, VertexMap) {
    let mut map = vec![None; order];
    let mut next = 0;
    for v in 0..order {
        if !removed[v] {
            map[v] = Some(next);
            next += 1;
        }
    }
    (next, map)
}

fn remap_edges(
    edges: impl IntoIterator<Item = (VertexId, VertexId, ExactRational)>,
    map: &VertexMap,
) -> Vec<(VertexId, VertexId, ExactRational)> {
    edges
        .into_iter()
        .map(|(u, v, r)| {
            (
                map[u].expect("edge endpoint survives"),
                map[v].expect("edge endpoint survives"),
                r,
            )
        })
        .collect()
}

/// Replaces the two resistors through `v` by one of resistance `r1 + r2`
/// between its neighbours and removes `v`.
pub fn series_reduce(net: &WeightedNetwork, v: VertexId) -> Result<(WeightedNetwork, VertexMap)> {
    if v >= net.order {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: net.order,
        });
    }
    let inc = net.incident(v);
    if inc.len() != 2 {
        return Err(Error::InvalidReduction(format!(
            "series reduction needs exactly two edges at vertex {v}, found {}",
            inc.len()
        )));
    }
    let other = |i: usize| {
        let (a, b, _) = &net.edges[i];
        if *a == v {
            *b
        } else {
            *a
        }
    };
    let (a, b) = (other(inc[0]), other(inc[1]));
    if a == b {
        return Err(Error::InvalidReduction(format!(
            "both edges at vertex {v} lead to vertex {a}; merge them in parallel first"
        )));
    }
    let r = &net.edges[inc[0]].2 + &net.edges[inc[1]].2;
    let mut removed = vec![false; net.order];
    removed[v] = true;
    let (order, map) = compact(net.order, &removed);
    let kept = net
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| !inc.contains(i))
        .map(|(_, e)| e.clone())
        .chain([(a, b, r)]);
    let edges = remap_edges(kept, &map);
    Ok((WeightedNetwork::new(order, edges)?, map))
}

/// Merges every resistor between `u` and `v` into one with `1/r = Σ 1/r_k`.
pub fn parallel_reduce(net: &WeightedNetwork, u: VertexId, v: VertexId) -> Result<WeightedNetwork> {
    check_pair(net, u, v)?;
    let (a, b) = (u.min(v), u.max(v));
    let (parallel, rest): (Vec<_>, Vec<_>) = net
        .edges
        .iter()
        .cloned()
        .partition(|(x, y, _)| (*x, *y) == (a, b));
    if parallel.len() < 2 {
        return Err(Error::InvalidReduction(format!(
            "parallel reduction needs at least two edges between {a} and {b}, found {}",
            parallel.len()
        )));
    }
    let conductance: ExactRational = parallel.iter().map(|(_, _, r)| r.recip()).sum();
    let mut edges = rest;
    edges.push((a, b, conductance.recip()));
    WeightedNetwork::new(net.order, edges)
}

/// Checks that `block` is a block of the connected graph `g` whose only cut
/// vertex is `w`, returning the vertices to delete.
fn pendant_block_interior(g: &Graph, block: &[VertexId], w: VertexId) -> Result<Vec<VertexId>> {
    for &v in block.iter().chain([&w]) {
        g.check_vertex(v)?;
    }
    let dec = g.blocks_and_cut_vertices()?;
    let mut sorted = block.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if !dec.blocks.contains(&sorted) {
        return Err(Error::InvalidReduction(format!(
            "{sorted:?} is not a block"
        )));
    }
    if !sorted.contains(&w) {
        return Err(Error::InvalidReduction(format!(
            "vertex {w} is not in block {sorted:?}"
        )));
    }
    let cuts: Vec<_> = sorted
        .iter()
        .filter(|v| dec.cut_vertices.contains(v))
        .copied()
        .collect();
    if cuts != [w] {
        return Err(Error::InvalidReduction(format!(
            "block {sorted:?} must contain exactly one cut vertex {w}, has {cuts:?}"
        )));
    }
    Ok(sorted.into_iter().filter(|&v| v != w).collect())
}

/// `G - (V(B) \ {w})` for a block `B` attached to the rest of `G` only at `w`.
pub fn eliminate_block(g: &Graph, block: &[VertexId], w: VertexId) -> Result<(Graph, VertexMap)> {
    let interior = pendant_block_interior(g, block, w)?;
    g.delete_vertices(&interior)
}

/// Weighted counterpart of [`eliminate_block`]; blocks are those of the
/// underlying simple graph.
pub fn eliminate_block_network(
    net: &WeightedNetwork,
    block: &[VertexId],
    w: VertexId,
) -> Result<(WeightedNetwork, VertexMap)> {
    let interior = pendant_block_interior(&net.skeleton(), block, w)?;
    let mut removed = vec![false; net.order];
    for v in interior {
        removed[v] = true;
    }
    let (order, map) = compact(net.order, &removed);
    let kept = net
        .edges
        .iter()
        .filter(|(u, v, _)| !removed[*u] && !removed[*v])
        .cloned();
    Ok((WeightedNetwork::new(order, remap_edges(kept, &map))?, map))
}

/// The vertex set of a sub-network `H` to be replaced. Terminals stay in the
/// composite network; interior vertices must have all their edges inside `H`
/// and disappear with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub terminals: Vec<VertexId>,
    pub interior: Vec<VertexId>,
}

impl Region {
    pub fn terminals(terminals: Vec<VertexId>) -> Self {
        Region {
            terminals,
            interior: Vec::new(),
        }
    }
}

/// Replaces the sub-network `H` induced on `region` by `replacement`, whose
/// vertex `i` is identified with `region.terminals[i]` and whose remaining
/// vertices are appended as new vertices. Rejected unless `H` and the
/// replacement have identical effective resistances between every pair of
/// terminals.
pub fn substitute(
    net: &WeightedNetwork,
    region: &Region,
    replacement: &WeightedNetwork,
) -> Result<(WeightedNetwork, VertexMap)> {
    let n = net.order;
    let mut in_region = vec![false; n];
    let mut is_interior = vec![false; n];
    for (list, interior) in [(&region.terminals, false), (&region.interior, true)] {
        for &v in list {
            if v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    order: n,
                });
            }
            if in_region[v] {
                return Err(Error::InvalidReduction(format!(
                    "vertex {v} listed twice in region"
                )));
            }
            in_region[v] = true;
            is_interior[v] = interior;
        }
    }
    let k = region.terminals.len();
    if k == 0 {
        return Err(Error::InvalidReduction(
            "region needs at least one terminal".into(),
        ));
    }
    if replacement.order < k {
        return Err(Error::InvalidReduction(format!(
            "replacement has {} vertices but region has {k} terminals",
            replacement.order
        )));
    }
    let (inside, outside): (Vec<_>, Vec<_>) = net
        .edges
        .iter()
        .cloned()
        .partition(|(u, v, _)| in_region[*u] && in_region[*v]);
    if let Some((u, v, _)) = outside
        .iter()
        .find(|(u, v, _)| is_interior[*u] || is_interior[*v])
    {
        return Err(Error::InvalidReduction(format!(
            "interior vertex on edge {u}-{v} leaves the region"
        )));
    }

    // H relabelled: terminals first (in order), then interior vertices.
    let mut local = vec![usize::MAX; n];
    for (i, &v) in region.terminals.iter().chain(&region.interior).enumerate() {
        local[v] = i;
    }
    let h = WeightedNetwork::new(
        k + region.interior.len(),
        inside
            .iter()
            .map(|(u, v, r)| (local[*u], local[*v], r.clone()))
            .collect(),
    )?;
    if !h.is_connected() {
        return Err(Error::InvalidReduction(
            "region does not induce a connected sub-network".into(),
        ));
    }
    if !replacement.is_connected() {
        return Err(Error::InvalidReduction(
            "replacement network is disconnected".into(),
        ));
    }
    let rh = h.resistance_matrix()?;
    let rr = replacement.resistance_matrix()?;
    for i in 0..k {
        for j in i + 1..k {
            if rh[i][j] != rr[i][j] {
                return Err(Error::NotEquivalent {
                    u: region.terminals[i],
                    v: region.terminals[j],
                    original: rh[i][j].to_string(),
                    replacement: rr[i][j].to_string(),
                });
            }
        }
    }

    let (survivors, map) = compact(n, &is_interior);
    let extra = replacement.order - k;
    let to_composite = |x: VertexId| {
        if x < k {
            map[region.terminals[x]].expect("terminals survive")
        } else {
            survivors + (x - k)
        }
    };
    let mut edges = remap_edges(outside, &map);
    edges.extend(
        replacement
            .edges
            .iter()
            .map(|(u, v, r)| (to_composite(*u), to_composite(*v), r.clone())),
    );
    Ok((WeightedNetwork::new(survivors + extra, edges)?, map))
}

/// Resistance between `u` and `v` after joining them with a unit resistor,
/// when it was `r` before: the rest of the network acts as a single resistor
/// `r` in parallel with the new edge.
pub fn resistance_with_added_edge(r: &ExactRational) -> ExactRational {
    r / &(r + &ExactRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resistance::{resistance, resistance_matrix};

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    fn net(order: usize, edges: &[(usize, usize, ExactRational)]) -> WeightedNetwork {
        WeightedNetwork::new(order, edges.to_vec()).unwrap()
    }

    /// Every surviving pair keeps its resistance.
    fn assert_preserved(before: &WeightedNetwork, after: &WeightedNetwork, map: &VertexMap) {
        let rb = before.resistance_matrix().unwrap();
        let ra = after.resistance_matrix().unwrap();
        for u in 0..before.order() {
            for v in 0..before.order() {
                if let (Some(a), Some(b)) = (map[u], map[v]) {
                    assert_eq!(rb[u][v], ra[a][b], "pair {u},{v}");
                }
            }
        }
    }

    #[test]
    fn weighted_resistance_examples() {
        assert_eq!(
            weighted_resistance(&net(2, &[(0, 1, q(5, 1))]), 0, 1).unwrap(),
            q(5, 1)
        );
        let path = net(3, &[(0, 1, q(1, 1)), (1, 2, q(2, 1))]);
        assert_eq!(weighted_resistance(&path, 0, 2).unwrap(), q(3, 1));
        let double = net(2, &[(0, 1, q(1, 1)), (0, 1, q(1, 1))]);
        assert_eq!(weighted_resistance(&double, 0, 1).unwrap(), q(1, 2));
        assert_eq!(
            weighted_resistance(&net(3, &[(0, 1, q(1, 1))]), 0, 2),
            Err(Error::Disconnected)
        );
        assert_eq!(
            weighted_resistance(&double, 1, 1),
            Err(Error::SameVertex(1))
        );
    }

    #[test]
    fn unit_networks_agree_with_graph_engine() {
        for g in [
            Graph::complete_bipartite(2, 3).unwrap(),
            Graph::cycle(5).unwrap(),
            Graph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap(),
        ] {
            let rm = resistance_matrix(&g).unwrap();
            let wn = WeightedNetwork::from_graph(&g);
            let wm = wn.resistance_matrix().unwrap();
            for (u, v, r) in rm.pairs() {
                assert_eq!(&wm[u][v], r);
                assert_eq!(&weighted_resistance(&wn, u, v).unwrap(), r);
            }
        }
    }

    #[test]
    fn invalid_networks() {
        assert_eq!(
            WeightedNetwork::new(2, vec![(0, 1, q(0, 1))]),
            Err(Error::NonPositiveResistance(0, 1))
        );
        assert_eq!(
            WeightedNetwork::new(2, vec![(1, 1, q(1, 1))]),
            Err(Error::SelfLoop(1))
        );
        assert!(WeightedNetwork::new(2, vec![(0, 2, q(1, 1))]).is_err());
    }

    #[test]
    fn series_examples() {
        let p3 = WeightedNetwork::from_graph(&Graph::path(3).unwrap());
        let (r, map) = series_reduce(&p3, 1).unwrap();
        assert_eq!(r, net(2, &[(0, 1, q(2, 1))]));
        assert_eq!(map, vec![Some(0), None, Some(1)]);

        let chain = net(3, &[(0, 1, q(1, 2)), (1, 2, q(1, 3))]);
        assert_eq!(
            series_reduce(&chain, 1).unwrap().0,
            net(2, &[(0, 1, q(5, 6))])
        );

        let c4 = WeightedNetwork::from_graph(&Graph::cycle(4).unwrap());
        let (r, map) = series_reduce(&c4, 1).unwrap();
        assert_eq!(
            r,
            net(3, &[(0, 1, q(2, 1)), (0, 2, q(1, 1)), (1, 2, q(1, 1))])
        );
        assert_preserved(&c4, &r, &map);
    }

    #[test]
    fn series_rejections() {
        let star = WeightedNetwork::from_graph(&Graph::star(3).unwrap());
        assert!(matches!(
            series_reduce(&star, 0),
            Err(Error::InvalidReduction(_))
        ));
        assert!(matches!(
            series_reduce(&star, 1),
            Err(Error::InvalidReduction(_))
        ));
        let lens = net(2, &[(0, 1, q(1, 1)), (0, 1, q(1, 1))]);
        assert!(matches!(
            series_reduce(&lens, 1),
            Err(Error::InvalidReduction(_))
        ));
    }

    #[test]
    fn parallel_examples() {
        let two = net(2, &[(0, 1, q(1, 1)), (0, 1, q(1, 1))]);
        assert_eq!(
            parallel_reduce(&two, 0, 1).unwrap(),
            net(2, &[(0, 1, q(1, 2))])
        );
        let twos = net(2, &[(0, 1, q(2, 1)), (0, 1, q(2, 1))]);
        assert_eq!(
            parallel_reduce(&twos, 1, 0).unwrap(),
            net(2, &[(0, 1, q(1, 1))])
        );
        let three = net(2, &[(0, 1, q(1, 2)), (0, 1, q(1, 3)), (0, 1, q(1, 6))]);
        assert_eq!(
            parallel_reduce(&three, 0, 1).unwrap(),
            net(2, &[(0, 1, q(1, 11))])
        );
        assert!(matches!(
            parallel_reduce(&net(2, &[(0, 1, q(1, 1))]), 0, 1),
            Err(Error::InvalidReduction(_))
        ));
    }

    #[test]
    fn eliminate_examples() {
        let tp = Graph::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let (tri, map) = eliminate_block(&tp, &[2, 3], 2).unwrap();
        assert_eq!(tri, Graph::complete(3).unwrap());
        for u in 0..3 {
            for v in u + 1..3 {
                assert_eq!(
                    resistance(&tp, u, v).unwrap(),
                    resistance(&tri, map[u].unwrap(), map[v].unwrap()).unwrap()
                );
            }
        }

        let p4 = Graph::path(4).unwrap();
        let (p3, map) = eliminate_block(&p4, &[2, 3], 2).unwrap();
        assert_eq!(p3, Graph::path(3).unwrap());
        assert_eq!(map, vec![Some(0), Some(1), Some(2), None]);
        assert_eq!(
            resistance(&p3, 0, 2).unwrap(),
            resistance(&p4, 0, 2).unwrap()
        );

        // K_{2,3} with a pendant path 4-5-6 hanging off vertex 4.
        let mut edges: Vec<_> = Graph::complete_bipartite(2, 3).unwrap().edges().collect();
        edges.extend([(4, 5), (5, 6)]);
        let host = Graph::new(7, &edges).unwrap();
        let (g, map) = eliminate_block(&host, &[5, 6], 5).unwrap();
        let (g, map2) =
            eliminate_block(&g, &[map[4].unwrap(), map[5].unwrap()], map[4].unwrap()).unwrap();
        assert_eq!(g, Graph::complete_bipartite(2, 3).unwrap());
        let rh = resistance_matrix(&host).unwrap();
        let rg = resistance_matrix(&g).unwrap();
        for u in 0..5 {
            for v in 0..5 {
                let (a, b) = (
                    map2[map[u].unwrap()].unwrap(),
                    map2[map[v].unwrap()].unwrap(),
                );
                assert_eq!(rh.get(u, v), rg.get(a, b));
            }
        }
    }

    #[test]
    fn eliminate_rejections() {
        let p4 = Graph::path(4).unwrap();
        // Middle block {1,2} holds two cut vertices.
        assert!(matches!(
            eliminate_block(&p4, &[1, 2], 1),
            Err(Error::InvalidReduction(_))
        ));
        // Not a block.
        assert!(matches!(
            eliminate_block(&p4, &[0, 2], 0),
            Err(Error::InvalidReduction(_))
        ));
        // Wrong cut vertex.
        assert!(matches!(
            eliminate_block(&p4, &[2, 3], 3),
            Err(Error::InvalidReduction(_))
        ));
        assert_eq!(
            eliminate_block(&Graph::empty(3).unwrap(), &[0], 0),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn substitute_series_segment() {
        // Host: 4-cycle 0-1-2-3 plus chord 0-2; replace segment 0-1-2 (1 internal) by 0-2 r=2.
        let host = WeightedNetwork::from_graph(
            &Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap(),
        );
        let region = Region {
            terminals: vec![0, 2],
            interior: vec![1],
        };
        // The chord 0-2 lies inside the region too, so H is the lens 0-1-2 || 0-2.
        let bad = net(2, &[(0, 1, q(2, 1))]);
        assert!(matches!(
            substitute(&host, &region, &bad),
            Err(Error::NotEquivalent { u: 0, v: 2, .. })
        ));
        let good = net(2, &[(0, 1, q(2, 1)), (0, 1, q(1, 1))]);
        let (out, map) = substitute(&host, &region, &good).unwrap();
        assert_eq!(map, vec![Some(0), None, Some(1), Some(2)]);
        assert_preserved(&host, &out, &map);

        let p3_host =
            WeightedNetwork::from_graph(&Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap());
        let (out, map) = substitute(&p3_host, &region, &net(2, &[(0, 1, q(2, 1))])).unwrap();
        assert_eq!(
            out,
            net(3, &[(0, 1, q(2, 1)), (0, 2, q(1, 1)), (1, 2, q(1, 1))])
        );
        assert_preserved(&p3_host, &out, &map);
    }

    #[test]
    fn substitute_parallel_pair() {
        let host = net(
            3,
            &[
                (0, 1, q(1, 1)),
                (0, 1, q(1, 1)),
                (1, 2, q(3, 1)),
                (0, 2, q(1, 1)),
            ],
        );
        // Region {0,1} induces the parallel pair only; the other edges leave it.
        let (out, map) = substitute(
            &host,
            &Region::terminals(vec![0, 1]),
            &net(2, &[(0, 1, q(1, 2))]),
        )
        .unwrap();
        assert_eq!(
            out,
            net(3, &[(0, 1, q(1, 2)), (1, 2, q(3, 1)), (0, 2, q(1, 1))])
        );
        assert_preserved(&host, &out, &map);
    }

    #[test]
    fn substitute_identity() {
        let host = WeightedNetwork::from_graph(&Graph::complete_bipartite(2, 3).unwrap());
        let region = Region::terminals(vec![0, 2, 3]);
        let induced = net(3, &[(0, 1, q(1, 1)), (0, 2, q(1, 1))]);
        let (out, map) = substitute(&host, &region, &induced).unwrap();
        assert_eq!(out, host);
        assert_eq!(map, (0..5).map(Some).collect::<Vec<_>>());
    }

    #[test]
    fn substitute_rejections() {
        let host = WeightedNetwork::from_graph(&Graph::path(4).unwrap());
        let interior_leaks = Region {
            terminals: vec![0, 1],
            interior: vec![2],
        };
        assert!(matches!(
            substitute(&host, &interior_leaks, &net(2, &[(0, 1, q(1, 1))])),
            Err(Error::InvalidReduction(_))
        ));
        let disconnected = Region::terminals(vec![0, 3]);
        assert!(matches!(
            substitute(&host, &disconnected, &net(2, &[(0, 1, q(3, 1))])),
            Err(Error::InvalidReduction(_))
        ));
        assert!(matches!(
            substitute(
                &host,
                &Region::terminals(vec![0, 1, 2]),
                &net(2, &[(0, 1, q(1, 1))])
            ),
            Err(Error::InvalidReduction(_))
        ));
    }

    #[test]
    fn text_format() {
        let n = net(3, &[(0, 1, q(1, 2)), (1, 2, q(3, 1))]);
        let text = n.to_text();
        assert_eq!(text, "3 2\n0 1 1/2\n1 2 3\n");
        assert_eq!(text.parse::<WeightedNetwork>().unwrap(), n);
        assert!("3 2\n0 1 1\n".parse::<WeightedNetwork>().is_err());
        assert!("3 1\n0 1 1\n1 2 1\n".parse::<WeightedNetwork>().is_err());
        assert!("3\n".parse::<WeightedNetwork>().is_err());
        assert!("2 1\n0 1 -1\n".parse::<WeightedNetwork>().is_err());
    }

    #[test]
    fn added_edge_identity_on_kmn() {
        // In K_{n,n} two same-side vertices are at 2/n; joining them gives 2/(n+2).
        for n in 2..6usize {
            let g = Graph::complete_bipartite(n, n).unwrap();
            let r = resistance(&g, 0, 1).unwrap();
            assert_eq!(r, q(2, n as i64));
            let h = g.add_edge(0, 1).unwrap();
            let predicted = resistance_with_added_edge(&r);
            assert_eq!(predicted, q(2, n as i64 + 2));
            assert_eq!(resistance(&h, 0, 1).unwrap(), predicted);
        }
    }
}

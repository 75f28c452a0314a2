//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Adjacency is one `u64` bitmask per vertex, kept symmetric. Graphs are
//! values: every mutator returns a new graph.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Largest order representable (single-byte graph6 header, one word per row).
pub const MAX_ORDER: usize = 62;

pub type VertexId = usize;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    order: usize,
    rows: Vec<u64>,
}

/// Blocks (as sorted vertex lists) and cut vertices of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Vec<VertexId>>,
    pub cut_vertices: BTreeSet<VertexId>,
}

impl Graph {
    pub fn new(order: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Graph::empty(order)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.set(u, v);
        }
        Ok(g)
    }

    /// Edgeless graph on `order` vertices.
    pub fn empty(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyGraph);
        }
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order,
                max: MAX_ORDER,
            });
        }
        Ok(Graph {
            order,
            rows: vec![0; order],
        })
    }

    /// Builds a graph directly from adjacency rows. Rows must be symmetric and
    /// loop-free; this is checked.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let mut g = Graph::empty(rows.len())?;
        let n = rows.len();
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for (v, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                return Err(Error::Format(format!("row {v} has bits beyond order {n}")));
            }
            if row >> v & 1 == 1 {
                return Err(Error::SelfLoop(v));
            }
            let mut bits = row;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if rows[u] >> v & 1 == 0 {
                    return Err(Error::Format(format!("asymmetric adjacency at {v}-{u}")));
                }
            }
        }
        g.rows = rows;
        Ok(g)
    }

    pub fn complete(order: usize) -> Result<Self> {
        let mut g = Graph::empty(order)?;
        for u in 0..order {
            for v in u + 1..order {
                g.set(u, v);
            }
        }
        Ok(g)
    }

    /// `K_{m,n}` with parts `0..m` and `m..m+n`.
    pub fn complete_bipartite(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::ZeroPartSize(m, n));
        }
        let mut g = Graph::empty(m + n)?;
        for u in 0..m {
            for v in m..m + n {
                g.set(u, v);
            }
        }
        Ok(g)
    }

    pub fn path(order: usize) -> Result<Self> {
        let edges: Vec<_> = (1..order).map(|v| (v - 1, v)).collect();
        Graph::new(order, &edges)
    }

    pub fn cycle(order: usize) -> Result<Self> {
        if order < 3 {
            return Err(Error::Format(format!(
                "cycle needs at least 3 vertices, got {order}"
            )));
        }
        let edges: Vec<_> = (0..order).map(|v| (v, (v + 1) % order)).collect();
        Graph::new(order, &edges)
    }

    pub fn star(leaves: usize) -> Result<Self> {
        Graph::complete_bipartite(1, leaves)
    }

    fn set(&mut self, u: VertexId, v: VertexId) {
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    fn clear(&mut self, u: VertexId, v: VertexId) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.order {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.order,
            })
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edge_count(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Bitmask of the neighbours of `v`. Panics on an invalid id.
    pub fn neighbor_mask(&self, v: VertexId) -> u64 {
        self.rows[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.order && v < self.order && self.rows[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.rows[v].count_ones() as usize)
    }

    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>> {
        self.check_vertex(v)?;
        Ok(bits(self.rows[v]).collect())
    }

    /// Edges as `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.order).flat_map(move |u| bits(self.rows[u] >> u >> 1).map(move |d| (u, u + 1 + d)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.rows.iter().map(|r| r.count_ones() as usize).collect();
        d.sort_unstable();
        d
    }

    /// Vertices reachable from `start` avoiding the vertices in `removed`.
    fn reach(&self, start: VertexId, removed: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = self.rows[v] & !seen & !removed;
            seen |= next;
            frontier |= next;
        }
        seen
    }

    fn full_mask(&self) -> u64 {
        if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        }
    }

    pub fn is_connected(&self) -> bool {
        self.reach(0, 0) == self.full_mask()
    }

    /// Connected components as vertex bitmasks, ordered by smallest member.
    pub fn components(&self) -> Vec<u64> {
        let mut left = self.full_mask();
        let mut out = Vec::new();
        while left != 0 {
            let comp = self.reach(left.trailing_zeros() as usize, 0);
            out.push(comp);
            left &= !comp;
        }
        out
    }

    /// True when every edge joins the two sides of some 2-colouring.
    pub fn bipartition(&self) -> Option<u64> {
        let mut colour = vec![None::<bool>; self.order];
        for s in 0..self.order {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                let c = colour[v].unwrap();
                for u in bits(self.rows[v]) {
                    match colour[u] {
                        None => {
                            colour[u] = Some(!c);
                            stack.push(u);
                        }
                        Some(cu) if cu == c => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(
            colour
                .iter()
                .enumerate()
                .filter(|(_, c)| **c == Some(true))
                .fold(0u64, |m, (v, _)| m | 1 << v),
        )
    }

    /// An edge is a bridge iff deleting it disconnects its endpoints.
    pub fn is_bridge(&self, u: VertexId, v: VertexId) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let mut h = self.clone();
        h.clear(u, v);
        h.reach(u, 0) >> v & 1 == 0
    }

    pub fn add_edge(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::EdgeAlreadyPresent(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.set(u, v);
        Ok(g)
    }

    pub fn delete_edge(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.clear(u, v);
        Ok(g)
    }

    /// Removes `vertices` and relabels survivors densely, preserving their
    /// relative order. `map[old]` is the new id of `old`, or `None` if removed.
    pub fn delete_vertices(&self, vertices: &[VertexId]) -> Result<(Graph, Vec<Option<VertexId>>)> {
        let mut removed = 0u64;
        for &v in vertices {
            self.check_vertex(v)?;
            removed |= 1 << v;
        }
        let mut map = vec![None; self.order];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if removed >> v & 1 == 0 {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut g = Graph::empty(next)?;
        for (u, v) in self.edges() {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                g.set(a, b);
            }
        }
        Ok((g, map))
    }

    /// Subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[VertexId]) -> Result<Graph> {
        let mut g = Graph::empty(vertices.len())?;
        for (i, &a) in vertices.iter().enumerate() {
            self.check_vertex(a)?;
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.set(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[VertexId]) -> Result<Graph> {
        if perm.len() != self.order {
            return Err(Error::Format("permutation length mismatch".into()));
        }
        let mut seen = 0u64;
        for &p in perm {
            self.check_vertex(p)?;
            seen |= 1 << p;
        }
        if seen != self.full_mask() {
            return Err(Error::Format("not a permutation".into()));
        }
        let mut g = Graph::empty(self.order)?;
        for (u, v) in self.edges() {
            g.set(perm[u], perm[v]);
        }
        Ok(g)
    }

    /// Block decomposition via the Hopcroft-Tarjan edge-stack algorithm.
    pub fn blocks_and_cut_vertices(&self) -> Result<BlockDecomposition> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.order;
        if n == 1 {
            return Ok(BlockDecomposition {
                blocks: vec![vec![0]],
                cut_vertices: BTreeSet::new(),
            });
        }
        let mut st = BlockState {
            g: self,
            disc: vec![usize::MAX; n],
            low: vec![0; n],
            time: 0,
            edge_stack: Vec::new(),
            blocks: Vec::new(),
            cut: BTreeSet::new(),
        };
        st.dfs(0, usize::MAX);
        let mut blocks = st.blocks;
        blocks.sort();
        Ok(BlockDecomposition {
            blocks,
            cut_vertices: st.cut,
        })
    }

    pub fn cut_vertices(&self) -> Result<BTreeSet<VertexId>> {
        Ok(self.blocks_and_cut_vertices()?.cut_vertices)
    }

    /// True iff `v` is a cut vertex of the connected component containing it.
    pub fn is_cut_vertex(&self, v: VertexId) -> bool {
        let nbrs = self.rows[v];
        if nbrs.count_ones() < 2 {
            return false;
        }
        let start = nbrs.trailing_zeros() as usize;
        self.reach(start, 1 << v) & nbrs != nbrs
    }
}

struct BlockState<'a> {
    g: &'a Graph,
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    edge_stack: Vec<(VertexId, VertexId)>,
    blocks: Vec<Vec<VertexId>>,
    cut: BTreeSet<VertexId>,
}

impl BlockState<'_> {
    fn dfs(&mut self, v: VertexId, parent: VertexId) {
        self.disc[v] = self.time;
        self.low[v] = self.time;
        self.time += 1;
        let mut children = 0;
        for u in bits(self.g.rows[v]) {
            if self.disc[u] == usize::MAX {
                children += 1;
                self.edge_stack.push((v, u));
                self.dfs(u, v);
                self.low[v] = self.low[v].min(self.low[u]);
                if self.low[u] >= self.disc[v] {
                    if parent != usize::MAX || children > 1 {
                        self.cut.insert(v);
                    }
                    let mut block = BTreeSet::new();
                    while let Some((a, b)) = self.edge_stack.pop() {
                        block.insert(a);
                        block.insert(b);
                        if (a, b) == (v, u) {
                            break;
                        }
                    }
                    self.blocks.push(block.into_iter().collect());
                }
            } else if u != parent && self.disc[u] < self.disc[v] {
                self.edge_stack.push((v, u));
                self.low[v] = self.low[v].min(self.disc[u]);
            }
        }
        if parent == usize::MAX && children < 2 {
            self.cut.remove(&v);
        }
    }
}

/// Iterates the set bit positions of a mask in ascending order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Graph({}, {:?})",
            self.order,
            self.edges().collect::<Vec<_>>()
        )
    }
}

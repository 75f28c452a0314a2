//! Canonical forms for graphs of order at most 16.
//!
//! Search tree of equitable ordered partitions: refine, individualise a vertex
//! of the first non-trivial cell, recurse. Each leaf is a vertex ordering whose
//! relabelled upper triangle (graph6 bit order) is a candidate code; the
//! smallest candidate is the canonical code. Automorphisms found on the way
//! prune the tree: sibling vertices in one orbit of the point stabiliser of the
//! current prefix are skipped, and a leaf equivalent to the first leaf abandons
//! its whole branch back to where it left the first path.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::to_graph6;

/// Largest order accepted by [`canonical_form`].
pub const MAX_CANON_ORDER: usize = 16;

/// Automorphisms kept per search; more only sharpens pruning.
const MAX_STORED_AUTOMORPHISMS: usize = 64;

/// Upper-triangle bitstring (graph6 order, first bit most significant) of the
/// canonically relabelled graph. Codes of equal order compare
/// lexicographically; codes of different order compare by order first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    order: u8,
    bits: u128,
}

impl CanonicalCode {
    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn to_graph(&self) -> Graph {
        SmallGraph::from_code(self.order as usize, self.bits).to_graph()
    }

    pub fn graph6(&self) -> String {
        to_graph6(&self.to_graph())
    }

    /// Code of `g` under its own labelling. Equal to [`canonical_form`] only
    /// when `g` is already canonical.
    pub(crate) fn of_labelled(g: &Graph) -> Result<Self> {
        let s = SmallGraph::from_graph(g)?;
        let identity: Vec<u8> = (0..s.n as u8).collect();
        Ok(CanonicalCode::from_parts(s.n, s.code_of(&identity)))
    }

    pub(crate) fn from_parts(order: usize, bits: u128) -> Self {
        CanonicalCode {
            order: order as u8,
            bits,
        }
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.graph6())
    }
}

/// Compact adjacency for the hot loops of canonisation and generation.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct SmallGraph {
    pub n: usize,
    pub adj: [u16; MAX_CANON_ORDER],
}

impl SmallGraph {
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let n = g.order();
        if n > MAX_CANON_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                max: MAX_CANON_ORDER,
            });
        }
        let mut adj = [0u16; MAX_CANON_ORDER];
        for (v, slot) in adj.iter_mut().enumerate().take(n) {
            *slot = g.neighbor_mask(v) as u16;
        }
        Ok(SmallGraph { n, adj })
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_rows(self.adj[..self.n].iter().map(|&r| r as u64).collect())
            .expect("valid small graph")
    }

    pub fn from_code(n: usize, bits: u128) -> Self {
        let mut adj = [0u16; MAX_CANON_ORDER];
        let total = n * n.saturating_sub(1) / 2;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bits >> (total - 1 - k) & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
                k += 1;
            }
        }
        SmallGraph { n, adj }
    }

    pub fn full(&self) -> u16 {
        ((1u32 << self.n) - 1) as u16
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.adj[v].count_ones()
    }

    /// Vertices reachable from `start` without entering `blocked`.
    pub fn reach(&self, start: usize, blocked: u16) -> u16 {
        let mut seen = 1u16 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = self.adj[v] & !seen & !blocked;
            seen |= next;
            frontier |= next;
        }
        seen
    }

    /// Cut vertex of a connected graph.
    pub fn is_cut_vertex(&self, v: usize) -> bool {
        let nbrs = self.adj[v];
        if nbrs.count_ones() < 2 {
            return false;
        }
        self.reach(nbrs.trailing_zeros() as usize, 1 << v) & nbrs != nbrs
    }

    /// Removes vertex `v`, shifting higher ids down by one.
    pub fn without(&self, v: usize) -> SmallGraph {
        let low = (1u16 << v) - 1;
        let mut adj = [0u16; MAX_CANON_ORDER];
        let mut k = 0;
        for u in 0..self.n {
            if u == v {
                continue;
            }
            let row = self.adj[u];
            adj[k] = (row & low) | ((row >> 1) & !low);
            k += 1;
        }
        SmallGraph { n: self.n - 1, adj }
    }

    /// Code of the graph relabelled so that `order[i]` becomes vertex `i`.
    fn code_of(&self, order: &[u8]) -> u128 {
        let mut code = 0u128;
        for j in 1..self.n {
            let row = self.adj[order[j] as usize];
            for &oi in &order[..j] {
                code = code << 1 | (row >> oi & 1) as u128;
            }
        }
        code
    }
}

/// Splits cells until every cell is equitable with respect to every other.
fn refine(g: &SmallGraph, cells: &mut Vec<u16>) {
    'restart: loop {
        for s in 0..cells.len() {
            let splitter = cells[s];
            for c in 0..cells.len() {
                let cell = cells[c];
                if cell & (cell - 1) == 0 {
                    continue;
                }
                let mut counts = [0u16; MAX_CANON_ORDER + 1];
                let mut seen_counts = 0u32;
                let mut rest = cell;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let k = (g.adj[v] & splitter).count_ones() as usize;
                    counts[k] |= 1 << v;
                    seen_counts |= 1 << k;
                }
                if seen_counts.count_ones() == 1 {
                    continue;
                }
                let pieces = (0..=MAX_CANON_ORDER)
                    .filter(|&k| seen_counts >> k & 1 == 1)
                    .map(|k| counts[k]);
                cells.splice(c..=c, pieces);
                continue 'restart;
            }
        }
        return;
    }
}

#[derive(Clone)]
struct Leaf {
    code: u128,
    order: [u8; MAX_CANON_ORDER],
    prefix: Vec<u8>,
}

enum Outcome {
    Continue,
    /// Resume at the node whose prefix has this length.
    Jump(usize),
}

struct Search<'a> {
    g: &'a SmallGraph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<[u8; MAX_CANON_ORDER]>,
}

impl Search<'_> {
    fn leaf(&mut self, cells: &[u16], prefix: &[u8]) -> Outcome {
        let mut order = [0u8; MAX_CANON_ORDER];
        for (i, &c) in cells.iter().enumerate() {
            order[i] = c.trailing_zeros() as u8;
        }
        let code = self.g.code_of(&order[..self.g.n]);
        let Some(first) = &self.first else {
            let leaf = Leaf {
                code,
                order,
                prefix: prefix.to_vec(),
            };
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return Outcome::Continue;
        };
        if code == first.code {
            let (first_order, diverge) = (first.order, divergence(&first.prefix, prefix));
            self.record(&first_order, &order);
            return Outcome::Jump(diverge);
        }
        let best = self.best.as_ref().expect("best set with first");
        match code.cmp(&best.code) {
            Ordering::Less => {
                self.best = Some(Leaf {
                    code,
                    order,
                    prefix: prefix.to_vec(),
                });
                Outcome::Continue
            }
            Ordering::Equal => {
                let (best_order, diverge) = (best.order, divergence(&best.prefix, prefix));
                self.record(&best_order, &order);
                Outcome::Jump(diverge)
            }
            Ordering::Greater => Outcome::Continue,
        }
    }

    /// Stores the automorphism mapping `other[i]` to `reference[i]`.
    fn record(&mut self, reference: &[u8; MAX_CANON_ORDER], other: &[u8; MAX_CANON_ORDER]) {
        if self.automorphisms.len() >= MAX_STORED_AUTOMORPHISMS {
            return;
        }
        let mut gamma = [0u8; MAX_CANON_ORDER];
        for i in 0..self.g.n {
            gamma[other[i] as usize] = reference[i];
        }
        self.automorphisms.push(gamma);
    }

    /// True if `v` shares an orbit with an explored vertex under the stored
    /// automorphisms that fix `prefix` pointwise.
    fn equivalent_to_explored(&self, v: usize, explored: u16, prefix: &[u8]) -> bool {
        let n = self.g.n;
        let mut parent: [u8; MAX_CANON_ORDER] = std::array::from_fn(|i| i as u8);
        fn find(p: &mut [u8; MAX_CANON_ORDER], mut x: usize) -> usize {
            while p[x] as usize != x {
                p[x] = p[p[x] as usize];
                x = p[x] as usize;
            }
            x
        }
        let mut any = false;
        for gamma in &self.automorphisms {
            if prefix.iter().any(|&p| gamma[p as usize] != p) {
                continue;
            }
            any = true;
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x] as usize));
                if a != b {
                    parent[a.max(b)] = a.min(b) as u8;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        let mut rest = explored;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if find(&mut parent, w) == root {
                return true;
            }
        }
        false
    }

    fn visit(&mut self, cells: Vec<u16>, prefix: &mut Vec<u8>) -> Outcome {
        if cells.len() == self.g.n {
            return self.leaf(&cells, prefix);
        }
        let depth = prefix.len();
        let target_idx = cells
            .iter()
            .position(|c| c & (c - 1) != 0)
            .expect("non-discrete partition");
        let target = cells[target_idx];
        let mut explored = 0u16;
        let mut rest = target;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if explored != 0 && self.equivalent_to_explored(v, explored, prefix) {
                continue;
            }
            explored |= 1 << v;
            let mut child = cells.clone();
            child[target_idx] = 1 << v;
            child.insert(target_idx + 1, target & !(1 << v));
            refine(self.g, &mut child);
            prefix.push(v as u8);
            let out = self.visit(child, prefix);
            prefix.pop();
            if let Outcome::Jump(level) = out {
                if level < depth {
                    return Outcome::Jump(level);
                }
            }
        }
        Outcome::Continue
    }
}

fn divergence(a: &[u8], b: &[u8]) -> usize {
    a.iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .unwrap_or(a.len().min(b.len()))
}

/// Canonical code plus the vertex order realising it: vertex `order[i]` of
/// the input becomes vertex `i` of the canonical graph.
pub(crate) fn canonical_labeling(g: &SmallGraph) -> (u128, [u8; MAX_CANON_ORDER]) {
    if g.n <= 1 {
        return (0, [0; MAX_CANON_ORDER]);
    }
    let mut cells = vec![g.full()];
    refine(g, &mut cells);
    let mut search = Search {
        g,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    search.visit(cells, &mut Vec::with_capacity(g.n));
    let best = search.best.expect("search reaches a leaf");
    (best.code, best.order)
}

pub(crate) fn small_code(g: &SmallGraph) -> CanonicalCode {
    CanonicalCode::from_parts(g.n, canonical_labeling(g).0)
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalCode> {
    Ok(small_code(&SmallGraph::from_graph(g)?))
}

/// The canonical representative graph itself.
pub fn canonical_graph(g: &Graph) -> Result<Graph> {
    Ok(canonical_form(g)?.to_graph())
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        // Still enforce the order guard on both inputs.
        SmallGraph::from_graph(g)?;
        SmallGraph::from_graph(h)?;
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Isomorphism by trying every bijection.
    pub(crate) fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
        fn extend(g: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut u64) -> bool {
            let k = map.len();
            if k == g.order() {
                return true;
            }
            for t in 0..h.order() {
                if *used >> t & 1 == 1 {
                    continue;
                }
                if (0..k).all(|i| g.has_edge(i, k) == h.has_edge(map[i], t)) {
                    map.push(t);
                    *used |= 1 << t;
                    if extend(g, h, map, used) {
                        return true;
                    }
                    map.pop();
                    *used &= !(1 << t);
                }
            }
            false
        }
        g.order() == h.order()
            && g.edge_count() == h.edge_count()
            && extend(g, h, &mut Vec::new(), &mut 0)
    }

    fn graph_from_bits(n: usize, bits: u64) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits >> k & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn examples() {
        let p3a = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let p3b = Graph::new(3, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&p3a).unwrap(), canonical_form(&p3b).unwrap());
        let c4 = Graph::cycle(4).unwrap();
        let k22 = Graph::complete_bipartite(2, 2).unwrap();
        assert_eq!(canonical_form(&c4).unwrap(), canonical_form(&k22).unwrap());
        assert!(are_isomorphic(&c4, &k22).unwrap());
        let p4 = Graph::path(4).unwrap();
        let k13 = Graph::star(3).unwrap();
        assert_ne!(canonical_form(&p4).unwrap(), canonical_form(&k13).unwrap());
        assert!(!are_isomorphic(&p4, &k13).unwrap());
    }

    #[test]
    fn order_guard() {
        let g = Graph::empty(17).unwrap();
        assert!(matches!(
            canonical_form(&g),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(canonical_form(&Graph::complete(16).unwrap()).is_ok());
    }

    #[test]
    fn symmetric_graphs_finish() {
        for g in [
            Graph::complete(16).unwrap(),
            Graph::empty(16).unwrap(),
            Graph::complete_bipartite(8, 8).unwrap(),
            Graph::cycle(16).unwrap(),
        ] {
            let c = canonical_form(&g).unwrap();
            assert_eq!(canonical_form(&c.to_graph()).unwrap(), c);
        }
    }

    #[test]
    fn exhaustive_five_vertices_agree_with_brute_force() {
        let n = 5;
        let graphs: Vec<Graph> = (0..1u64 << 10).map(|b| graph_from_bits(n, b)).collect();
        let codes: Vec<CanonicalCode> = graphs.iter().map(|g| canonical_form(g).unwrap()).collect();
        // Representatives: one brute-force class per distinct code, and
        // brute-force isomorphism must agree with code equality.
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..graphs.len() {
            let matching: Vec<usize> = reps
                .iter()
                .copied()
                .filter(|&r| brute_isomorphic(&graphs[i], &graphs[r]))
                .collect();
            assert!(matching.len() <= 1);
            match matching.first() {
                Some(&r) => assert_eq!(codes[i], codes[r]),
                None => {
                    assert!(reps.iter().all(|&r| codes[r] != codes[i]));
                    reps.push(i);
                }
            }
        }
        assert_eq!(reps.len(), 34);
    }

    fn arb_graph_and_perm() -> impl Strategy<Value = (Graph, Vec<usize>)> {
        (1usize..=12).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
                .prop_map(move |(bits, perm)| {
                    let mut edges = Vec::new();
                    let mut k = 0;
                    for u in 0..n {
                        for v in u + 1..n {
                            if bits[k] {
                                edges.push((u, v));
                            }
                            k += 1;
                        }
                    }
                    (Graph::new(n, &edges).unwrap(), perm)
                })
        })
    }

    proptest! {
        #[test]
        fn invariant_under_relabelling((g, perm) in arb_graph_and_perm()) {
            let h = g.permute(&perm).unwrap();
            let c = canonical_form(&g).unwrap();
            prop_assert_eq!(c, canonical_form(&h).unwrap());
            prop_assert!(are_isomorphic(&g, &h).unwrap());
            let canon = c.to_graph();
            prop_assert_eq!(canonical_form(&canon).unwrap(), c);
            prop_assert!(brute_isomorphic(&g, &canon) || g.order() > 9);
        }

        #[test]
        fn labeling_realises_code((g, _perm) in arb_graph_and_perm()) {
            let sg = SmallGraph::from_graph(&g).unwrap();
            let (code, order) = canonical_labeling(&sg);
            prop_assert_eq!(sg.code_of(&order[..sg.n]), code);
        }

        #[test]
        fn without_matches_delete_vertices((g, perm) in arb_graph_and_perm()) {
            let v = perm[0];
            let sg = SmallGraph::from_graph(&g).unwrap();
            let (h, _) = match g.delete_vertices(&[v]) { Ok(x) => x, Err(_) => return Ok(()) };
            prop_assert_eq!(sg.without(v).to_graph(), h);
        }
    }
}

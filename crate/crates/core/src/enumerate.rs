//! Connected graphs up to isomorphism by canonical augmentation.
//!
//! Every connected graph on `n >= 2` vertices has a non-cut vertex, and
//! deleting it leaves a connected graph on `n - 1` vertices. Children are
//! formed by joining a new vertex to each non-empty subset of a parent's
//! vertices. A child is kept only when the parent is its canonical parent:
//! the graph left after deleting the canonically chosen non-cut vertex (least
//! degree/neighbour-degree key, ties broken by the largest canonical position)
//! must be isomorphic to the parent. Distinct parents therefore never produce
//! isomorphic children, and duplicates from one parent are removed locally.

use rayon::prelude::*;

use crate::canon::{canonical_labeling, small_code, CanonicalCode, SmallGraph, MAX_CANON_ORDER};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default largest order for exhaustive enumeration.
pub const DEFAULT_MAX_ORDER: usize = 9;
/// Largest order reachable with [`Guard::AllowTen`].
pub const EXTENDED_MAX_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guard {
    Default,
    AllowTen,
}

impl Guard {
    pub fn max_order(self) -> usize {
        match self {
            Guard::Default => DEFAULT_MAX_ORDER,
            Guard::AllowTen => EXTENDED_MAX_ORDER,
        }
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let max = self.max_order();
        if n > max {
            return Err(Error::OrderTooLarge { order: n, max });
        }
        Ok(())
    }
}

/// Sort key of a vertex that is preserved by isomorphisms.
fn vertex_key(g: &SmallGraph, v: usize) -> (u32, u32) {
    let mut nbr_degrees = 0;
    let mut rest = g.adj[v];
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        nbr_degrees += g.degree(u);
    }
    (g.degree(v), nbr_degrees)
}

/// Canonical codes of the connected children of `parent` whose canonical
/// parent is `parent`, sorted and deduplicated.
fn children(parent: CanonicalCode) -> Vec<CanonicalCode> {
    let p = SmallGraph::from_code(parent.order(), parent.bits());
    let new = p.n;
    let mut out = Vec::new();
    for subset in 1u16..(1 << new) {
        let mut child = p;
        child.n = new + 1;
        child.adj[new] = subset;
        let mut rest = subset;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            child.adj[u] |= 1 << new;
        }
        // The new vertex is never a cut vertex (its deletion leaves the
        // connected parent). It must carry the least key among non-cut vertices.
        let new_key = vertex_key(&child, new);
        let mut candidates = 1u16 << new;
        let mut rejected = false;
        for v in 0..new {
            if child.is_cut_vertex(v) {
                continue;
            }
            let key = vertex_key(&child, v);
            if key < new_key {
                rejected = true;
                break;
            }
            if key == new_key {
                candidates |= 1 << v;
            }
        }
        if rejected {
            continue;
        }
        let (bits, order) = canonical_labeling(&child);
        let code = CanonicalCode::from_parts(child.n, bits);
        if candidates.count_ones() > 1 {
            let chosen = order[..child.n]
                .iter()
                .rev()
                .map(|&v| v as usize)
                .find(|&v| candidates >> v & 1 == 1)
                .expect("candidate set is non-empty");
            if chosen != new && small_code(&child.without(chosen)) != parent {
                continue;
            }
        }
        out.push(code);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// One representative code per connected isomorphism class on `n` vertices,
/// in ascending code order.
pub fn enumerate_connected_codes(n: usize, guard: Guard) -> Result<Vec<CanonicalCode>> {
    guard.check(n)?;
    debug_assert!(n <= MAX_CANON_ORDER);
    let mut level = vec![CanonicalCode::from_parts(1, 0)];
    for _ in 2..=n {
        level = extend_level(&level);
    }
    Ok(level)
}

/// All connected classes on `k + 1` vertices from all on `k`.
pub fn extend_level(parents: &[CanonicalCode]) -> Vec<CanonicalCode> {
    let mut next: Vec<CanonicalCode> = parents.par_iter().flat_map_iter(|&p| children(p)).collect();
    next.par_sort_unstable();
    next
}

/// Representative graphs, in canonical-code order.
pub fn enumerate_connected(n: usize, guard: Guard) -> Result<Vec<Graph>> {
    Ok(enumerate_connected_codes(n, guard)?
        .iter()
        .map(|c| c.to_graph())
        .collect())
}

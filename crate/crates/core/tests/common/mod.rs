//! Oracles and generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use resist_core::canon::{canonical_form, CanonicalCode};
use resist_core::network::{
    eliminate_block_network, parallel_reduce, series_reduce, substitute, Region, VertexMap,
    WeightedNetwork,
};
use resist_core::{ExactRational, Graph};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for k in (1..=n.min(max)).rev() {
        prefix.push(k);
        partitions(n - k, k, prefix, out);
        prefix.pop();
    }
}

/// Unlabelled graphs on `n` vertices by Burnside's lemma: average, over the
/// cycle types of `S_n`, of 2^(cycles induced on vertex pairs).
pub fn unlabelled_graph_count(n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut parts = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut parts);
    let mut total = BigRational::zero();
    for lambda in parts {
        let mut pair_cycles = 0usize;
        for (i, &a) in lambda.iter().enumerate() {
            pair_cycles += a / 2;
            for &b in &lambda[i + 1..] {
                pair_cycles += gcd(a, b);
            }
        }
        // z_lambda = prod k^{m_k} m_k!
        let mut z = BigInt::one();
        let mut k = 0;
        while k < lambda.len() {
            let run = lambda[k..].iter().take_while(|&&x| x == lambda[k]).count();
            for j in 1..=run {
                z *= BigInt::from(lambda[k]) * BigInt::from(j);
            }
            k += run;
        }
        total += BigRational::new(BigInt::one() << pair_cycles, z);
    }
    assert!(total.is_integer());
    total.to_integer()
}

/// Connected unlabelled graph counts `c_1..=c_max` from all-graph counts by
/// the inverse Euler transform.
pub fn connected_counts(max: usize) -> Vec<u64> {
    let g: Vec<BigInt> = (0..=max).map(unlabelled_graph_count).collect();
    let mut a = vec![BigInt::zero(); max + 1];
    let mut c = vec![BigInt::zero(); max + 1];
    for n in 1..=max {
        let mut an = BigInt::from(n) * &g[n];
        for k in 1..n {
            an -= &a[k] * &g[n - k];
        }
        a[n] = an;
        let mut cn = a[n].clone();
        for d in (1..n).filter(|d| n % d == 0) {
            cn -= BigInt::from(d) * &c[d];
        }
        c[n] = cn / BigInt::from(n);
    }
    c[1..].iter().map(|x| x.to_u64().unwrap()).collect()
}

/// Canonical codes of all connected labelled graphs on `n` vertices.
pub fn labelled_sweep(n: usize) -> BTreeSet<CanonicalCode> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(pairs.len());
    for mask in 0u64..1 << pairs.len() {
        edges.clear();
        edges.extend(
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e),
        );
        let g = Graph::new(n, &edges).unwrap();
        if g.is_connected() {
            seen.insert(canonical_form(&g).unwrap());
        }
    }
    seen
}

pub fn random_resistance(rng: &mut StdRng) -> ExactRational {
    ExactRational::new(rng.gen_range(1..=6i64), rng.gen_range(1..=4i64))
}

/// Random connected network on `n` vertices: a random spanning tree plus a
/// few extra (possibly parallel) edges.
pub fn random_network(rng: &mut StdRng, n: usize) -> WeightedNetwork {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, random_resistance(rng)));
    }
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=n) {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.push((u, v, random_resistance(rng)));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges = edges
        .into_iter()
        .map(|(u, v, r)| (perm[u], perm[v], r))
        .collect();
    WeightedNetwork::new(n, edges).unwrap()
}

/// Star-mesh elimination of every vertex outside `keep`; the result has
/// vertex `i` for `keep[i]` and is equivalent on those terminals.
pub fn kron_reduce(net: &WeightedNetwork, keep: &[usize]) -> WeightedNetwork {
    let n = net.order();
    let mut c = vec![vec![ExactRational::zero(); n]; n];
    for (u, v, r) in net.edges() {
        let g = r.recip();
        c[*u][*v] = &c[*u][*v] + &g;
        c[*v][*u] = &c[*v][*u] + &g;
    }
    let mut alive: Vec<bool> = vec![true; n];
    for k in (0..n).filter(|k| !keep.contains(k)) {
        alive[k] = false;
        let nbrs: Vec<usize> = (0..n).filter(|&j| alive[j] && !c[k][j].is_zero()).collect();
        let total: ExactRational = nbrs.iter().map(|&j| c[k][j].clone()).sum();
        for (a, &i) in nbrs.iter().enumerate() {
            for &j in &nbrs[a + 1..] {
                let add = &(&c[k][i] * &c[k][j]) / &total;
                c[i][j] = &c[i][j] + &add;
                c[j][i] = c[i][j].clone();
            }
        }
    }
    let mut edges = Vec::new();
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate().skip(a + 1) {
            if !c[i][j].is_zero() {
                edges.push((a, b, c[i][j].recip()));
            }
        }
    }
    WeightedNetwork::new(keep.len(), edges).unwrap()
}

/// Every pair surviving under `map` keeps its resistance.
pub fn preserves_resistances(
    before: &WeightedNetwork,
    after: &WeightedNetwork,
    map: &VertexMap,
) -> bool {
    let rb = before.resistance_matrix().unwrap();
    let ra = after.resistance_matrix().unwrap();
    (0..before.order()).all(|u| {
        (0..before.order()).all(|v| match (map[u], map[v]) {
            (Some(a), Some(b)) => rb[u][v] == ra[a][b],
            _ => true,
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Series,
    Parallel,
    Eliminate,
    Substitute,
}

/// Builds a random network on which a `kind` step is applicable, applies
/// it, and returns `(before, after, map)`. Total order stays at most 8.
pub fn random_step(
    rng: &mut StdRng,
    kind: StepKind,
) -> (WeightedNetwork, WeightedNetwork, VertexMap) {
    match kind {
        StepKind::Series => {
            // Subdivide an edge with a fresh vertex, then reduce it away.
            let base = {
                let n = rng.gen_range(2..=7);
                random_network(rng, n)
            };
            let n = base.order();
            let mut edges = base.edges().to_vec();
            let (u, v, _) = edges.swap_remove(rng.gen_range(0..edges.len()));
            edges.push((u, n, random_resistance(rng)));
            edges.push((n, v, random_resistance(rng)));
            let before = WeightedNetwork::new(n + 1, edges).unwrap();
            let (after, map) = series_reduce(&before, n).unwrap();
            (before, after, map)
        }
        StepKind::Parallel => {
            let base = {
                let n = rng.gen_range(2..=8);
                random_network(rng, n)
            };
            let mut edges = base.edges().to_vec();
            let (u, v, _) = edges[rng.gen_range(0..edges.len())].clone();
            for _ in 0..rng.gen_range(1..=2) {
                edges.push((u, v, random_resistance(rng)));
            }
            let before = WeightedNetwork::new(base.order(), edges).unwrap();
            let after = parallel_reduce(&before, u, v).unwrap();
            (before, after, (0..base.order()).map(Some).collect())
        }
        StepKind::Eliminate => {
            // Hang a 2-connected blob (a cycle with a chord or a lens) off
            // vertex w, then eliminate it.
            // At least two base vertices, so w is a cut vertex afterwards.
            let n = rng.gen_range(2..=5);
            let base = random_network(rng, n);
            let w = rng.gen_range(0..n);
            let size = rng.gen_range(2..=9 - n);
            let blob: Vec<usize> = std::iter::once(w).chain(n..n + size - 1).collect();
            let mut edges = base.edges().to_vec();
            if blob.len() == 2 {
                edges.push((blob[0], blob[1], random_resistance(rng)));
            } else {
                for i in 0..blob.len() {
                    edges.push((blob[i], blob[(i + 1) % blob.len()], random_resistance(rng)));
                }
                if blob.len() > 3 && rng.gen_bool(0.5) {
                    edges.push((blob[0], blob[2], random_resistance(rng)));
                }
            }
            let before = WeightedNetwork::new(n + size - 1, edges).unwrap();
            let (after, map) = eliminate_block_network(&before, &blob, w).unwrap();
            (before, after, map)
        }
        StepKind::Substitute => loop {
            let before = {
                let n = rng.gen_range(2..=8);
                random_network(rng, n)
            };
            let n = before.order();
            let mut region: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
            if region.len() < 2 {
                continue;
            }
            region.shuffle(rng);
            let in_region = |v: usize| region.contains(&v);
            let skeleton = before.skeleton();
            let induced = skeleton.induced(&region).unwrap();
            if !induced.is_connected() {
                continue;
            }
            let (interior, terminals): (Vec<usize>, Vec<usize>) = region.iter().partition(|&&v| {
                skeleton.neighbors(v).unwrap().into_iter().all(in_region) && rng.gen_bool(0.7)
            });
            if terminals.is_empty() {
                continue;
            }
            // Sub-network induced on the region, relabelled terminals first.
            let order: Vec<usize> = terminals.iter().chain(&interior).copied().collect();
            let local = |v: usize| order.iter().position(|&x| x == v).unwrap();
            let h_edges = before
                .edges()
                .iter()
                .filter(|(u, v, _)| in_region(*u) && in_region(*v))
                .map(|(u, v, r)| (local(*u), local(*v), r.clone()))
                .collect();
            let h = WeightedNetwork::new(order.len(), h_edges).unwrap();
            let mut replacement = kron_reduce(&h, &(0..terminals.len()).collect::<Vec<_>>());
            let composite_order = n - interior.len();
            if composite_order < 8 && !replacement.edges().is_empty() && rng.gen_bool(0.5) {
                // Split one replacement edge in two halves through a new vertex.
                let k = replacement.order();
                let mut edges = replacement.edges().to_vec();
                let (a, b, r) = edges.swap_remove(rng.gen_range(0..edges.len()));
                let half = &r / &ExactRational::from_integer(2);
                edges.push((a, k, half.clone()));
                edges.push((k, b, half));
                replacement = WeightedNetwork::new(k + 1, edges).unwrap();
            }
            let region = Region {
                terminals,
                interior,
            };
            let (after, map) = substitute(&before, &region, &replacement).unwrap();
            return (before, after, map);
        },
    }
}

//! Executable checks of the general resistance identities and inequalities.
//!
//! Each check walks every instance (vertex tuple) of one statement on a
//! graph and reports the first violation as a witness. Witnesses can be
//! re-evaluated with [`forest_resistance`], which counts spanning forests
//! instead of solving the Laplacian.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{enumerate_connected, Guard};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::graph6::to_graph6;
use crate::rational::ExactRational;
use crate::resistance::{resistance_matrix, ResistanceMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    /// `R(u,v) + R(v,w) >= R(u,w)`.
    Triangle,
    /// `Σ_{uv ∈ E} R(u,v) = n - 1`.
    Foster,
    /// `d(u) R(u,v) + Σ_{z ∈ N(u)} (R(z,u) - R(z,v)) = 2`.
    LocalSum,
    /// `R(u,v) >= 1/(d(u)+1) + 1/(d(v)+1)`, with equality exactly when `uv`
    /// is an edge and `N(u) - v = N(v) - u`.
    LowerBound,
    /// Deleting a non-bridge edge never lowers any resistance.
    Rayleigh,
    /// An edge on a cycle has resistance strictly below 1.
    CycleBound,
    /// Through a cut vertex `w` separating `u` and `v`, `R(u,v) = R(u,w) + R(w,v)`.
    CutAdditivity,
}

impl LemmaId {
    pub const ALL: [LemmaId; 7] = [
        LemmaId::Triangle,
        LemmaId::Foster,
        LemmaId::LocalSum,
        LemmaId::LowerBound,
        LemmaId::Rayleigh,
        LemmaId::CycleBound,
        LemmaId::CutAdditivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Triangle => "triangle",
            LemmaId::Foster => "foster",
            LemmaId::LocalSum => "local-sum",
            LemmaId::LowerBound => "lower-bound",
            LemmaId::Rayleigh => "rayleigh",
            LemmaId::CycleBound => "cycle-bound",
            LemmaId::CutAdditivity => "cut-additivity",
        }
    }
}

/// A concrete violation. For [`LemmaId::Rayleigh`] the vertices are
/// `[a, b, u, v]` with `ab` the deleted edge; otherwise they are the tuple
/// named in the statement (empty for Foster).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "graph6_field")]
    pub graph: Graph,
    pub vertices: Vec<VertexId>,
    pub lhs: ExactRational,
    pub rhs: ExactRational,
}

fn graph6_field<S: serde::Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_graph6(g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub lemma: LemmaId,
    pub passed: bool,
    /// Number of tuples examined.
    pub instances: u64,
    pub witness: Option<Witness>,
}

/// Both sides of one instance and whether the statement holds for it.
struct Evaluation {
    lhs: ExactRational,
    rhs: ExactRational,
    holds: bool,
}

/// Evaluates one instance with resistances taken from `r(graph, u, v)`;
/// the graph argument is `g` itself or, for Rayleigh, `g` minus the edge.
fn evaluate(
    lemma: LemmaId,
    g: &Graph,
    t: &[VertexId],
    r: &dyn Fn(&Graph, VertexId, VertexId) -> ExactRational,
) -> Evaluation {
    let deg = |v: VertexId| g.neighbor_mask(v).count_ones() as i64;
    let res = |u: VertexId, v: VertexId| {
        if u == v {
            ExactRational::zero()
        } else {
            r(g, u, v)
        }
    };
    match lemma {
        LemmaId::Triangle => {
            let lhs = &res(t[0], t[1]) + &res(t[1], t[2]);
            let rhs = res(t[0], t[2]);
            let holds = lhs >= rhs;
            Evaluation { lhs, rhs, holds }
        }
        LemmaId::Foster => {
            let lhs: ExactRational = g.edges().map(|(u, v)| res(u, v)).sum();
            let rhs = ExactRational::from_integer(g.order() as i64 - 1);
            let holds = lhs == rhs;
            Evaluation { lhs, rhs, holds }
        }
        LemmaId::LocalSum => {
            let (u, v) = (t[0], t[1]);
            let mut lhs = &ExactRational::from_integer(deg(u)) * &res(u, v);
            for z in crate::graph::bits(g.neighbor_mask(u)) {
                lhs = &lhs + &(&res(z, u) - &res(z, v));
            }
            let rhs = ExactRational::from_integer(2);
            let holds = lhs == rhs;
            Evaluation { lhs, rhs, holds }
        }
        LemmaId::LowerBound => {
            let (u, v) = (t[0], t[1]);
            let lhs = res(u, v);
            let rhs = &ExactRational::new(1, deg(u) + 1) + &ExactRational::new(1, deg(v) + 1);
            let twins = g.has_edge(u, v)
                && g.neighbor_mask(u) & !(1 << v) == g.neighbor_mask(v) & !(1 << u);
            let holds = lhs >= rhs && (lhs == rhs) == twins;
            Evaluation { lhs, rhs, holds }
        }
        LemmaId::Rayleigh => {
            let h = g.delete_edge(t[0], t[1]).expect("instance edge exists");
            let lhs = r(&h, t[2], t[3]);
            let rhs = res(t[2], t[3]);
            let holds = lhs >= rhs;
            Evaluation { lhs, rhs, holds }
        }
        LemmaId::CycleBound => {
            let lhs = res(t[0], t[1]);
            let rhs = ExactRational::one();
            let holds = lhs < rhs;
            Evaluation { lhs, rhs, holds }
        }
        LemmaId::CutAdditivity => {
            let (u, v, w) = (t[0], t[1], t[2]);
            let lhs = res(u, v);
            let rhs = &res(u, w) + &res(w, v);
            let holds = lhs == rhs;
            Evaluation { lhs, rhs, holds }
        }
    }
}

/// Tuples each statement quantifies over.
fn instances(lemma: LemmaId, g: &Graph) -> Vec<Vec<VertexId>> {
    let n = g.order();
    let pairs = || (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)));
    match lemma {
        LemmaId::Triangle => {
            let mut out = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    for w in 0..n {
                        if u != v && v != w && u != w {
                            out.push(vec![u, v, w]);
                        }
                    }
                }
            }
            out
        }
        LemmaId::Foster => vec![vec![]],
        LemmaId::LocalSum => (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| vec![u, v]))
            .collect(),
        LemmaId::LowerBound => pairs().map(|(u, v)| vec![u, v]).collect(),
        LemmaId::Rayleigh => g
            .edges()
            .filter(|&(a, b)| !g.is_bridge(a, b))
            .flat_map(|(a, b)| pairs().map(move |(u, v)| vec![a, b, u, v]))
            .collect(),
        LemmaId::CycleBound => g
            .edges()
            .filter(|&(u, v)| !g.is_bridge(u, v))
            .map(|(u, v)| vec![u, v])
            .collect(),
        LemmaId::CutAdditivity => {
            let mut out = Vec::new();
            for w in 0..n {
                if !g.is_cut_vertex(w) {
                    continue;
                }
                let (rest, map) = g.delete_vertices(&[w]).expect("valid vertex");
                let comps = rest.components();
                let comp_of = |x: VertexId| {
                    comps
                        .iter()
                        .position(|&c| c >> map[x].expect("survivor") & 1 == 1)
                };
                for (u, v) in pairs() {
                    if u != w && v != w && comp_of(u) != comp_of(v) {
                        out.push(vec![u, v, w]);
                    }
                }
            }
            out
        }
    }
}

/// Resistance lookup backed by the matrix of `g` and, lazily, of each `g - e`.
struct MatrixSource<'a> {
    g: &'a Graph,
    m: &'a ResistanceMatrix,
    deleted: std::cell::RefCell<Option<(Graph, ResistanceMatrix)>>,
}

impl MatrixSource<'_> {
    fn get(&self, h: &Graph, u: VertexId, v: VertexId) -> ExactRational {
        if h == self.g {
            return self.m.get(u, v).clone();
        }
        let mut slot = self.deleted.borrow_mut();
        if slot.as_ref().is_none_or(|(cached, _)| cached != h) {
            let m = resistance_matrix(h).expect("deleted edge is not a bridge");
            *slot = Some((h.clone(), m));
        }
        slot.as_ref().expect("just filled").1.get(u, v).clone()
    }
}

fn check_with_matrix(
    lemma: LemmaId,
    g: &Graph,
    m: &ResistanceMatrix,
    tuples: Vec<Vec<VertexId>>,
) -> CheckReport {
    let src = MatrixSource {
        g,
        m,
        deleted: std::cell::RefCell::new(None),
    };
    let lookup = |h: &Graph, u: VertexId, v: VertexId| src.get(h, u, v);
    let mut report = CheckReport {
        lemma,
        passed: true,
        instances: 0,
        witness: None,
    };
    for t in tuples {
        report.instances += 1;
        let e = evaluate(lemma, g, &t, &lookup);
        if !e.holds {
            report.passed = false;
            report.witness = Some(Witness {
                graph: g.clone(),
                vertices: t,
                lhs: e.lhs,
                rhs: e.rhs,
            });
            break;
        }
    }
    report
}

fn connected_matrix(g: &Graph) -> Result<ResistanceMatrix> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    resistance_matrix(g)
}

fn check_all_instances(lemma: LemmaId, g: &Graph) -> Result<CheckReport> {
    let m = connected_matrix(g)?;
    Ok(check_with_matrix(lemma, g, &m, instances(lemma, g)))
}

pub fn check_triangle(g: &Graph) -> Result<CheckReport> {
    check_all_instances(LemmaId::Triangle, g)
}

pub fn check_foster(g: &Graph) -> Result<CheckReport> {
    check_all_instances(LemmaId::Foster, g)
}

/// The local sum rule for one ordered pair.
pub fn check_local_sum(g: &Graph, u: VertexId, v: VertexId) -> Result<CheckReport> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }
    let m = connected_matrix(g)?;
    Ok(check_with_matrix(
        LemmaId::LocalSum,
        g,
        &m,
        vec![vec![u, v]],
    ))
}

/// The local sum rule for every ordered pair.
pub fn check_local_sum_all(g: &Graph) -> Result<CheckReport> {
    check_all_instances(LemmaId::LocalSum, g)
}

pub fn check_lower_bound(g: &Graph) -> Result<CheckReport> {
    check_all_instances(LemmaId::LowerBound, g)
}

/// Monotonicity under deleting the edge `uv`, over all vertex pairs.
pub fn check_rayleigh(g: &Graph, (a, b): (VertexId, VertexId)) -> Result<CheckReport> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if !g.has_edge(a, b) {
        return Err(Error::NotAnEdge(a, b));
    }
    let m = connected_matrix(g)?;
    if g.is_bridge(a, b) {
        return Err(Error::EdgeDisconnects(a, b));
    }
    let n = g.order();
    let tuples = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| vec![a, b, u, v]))
        .collect();
    Ok(check_with_matrix(LemmaId::Rayleigh, g, &m, tuples))
}

/// Monotonicity over every edge whose deletion keeps `g` connected.
pub fn check_rayleigh_all(g: &Graph) -> Result<CheckReport> {
    check_all_instances(LemmaId::Rayleigh, g)
}

pub fn check_cycle_bound(g: &Graph) -> Result<CheckReport> {
    check_all_instances(LemmaId::CycleBound, g)
}

pub fn check_cut_additivity(g: &Graph) -> Result<CheckReport> {
    check_all_instances(LemmaId::CutAdditivity, g)
}

/// Every check over all instances on one connected graph, sharing one
/// resistance matrix.
pub fn check_graph(g: &Graph) -> Result<Vec<CheckReport>> {
    let m = connected_matrix(g)?;
    Ok(LemmaId::ALL
        .iter()
        .map(|&lemma| check_with_matrix(lemma, g, &m, instances(lemma, g)))
        .collect())
}

/// Number of spanning forests of `g` with exactly `components` trees in
/// which the vertices of `separated` lie in pairwise different trees. Brute
/// force over edge subsets.
fn count_forests(g: &Graph, components: usize, separated: &[VertexId]) -> BigInt {
    let n = g.order();
    let edges: Vec<_> = g.edges().collect();
    let k = n - components;
    let mut count = BigInt::from(0);
    if k > edges.len() {
        return count;
    }
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let acyclic = pick.iter().all(|&i| {
            let (a, b) = edges[i];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
            ra != rb
        });
        if acyclic {
            let mut roots: Vec<usize> = separated.iter().map(|&v| find(&mut parent, v)).collect();
            roots.sort_unstable();
            roots.dedup();
            if roots.len() == separated.len() {
                count += 1;
            }
        }
        // Next k-subset in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| pick[i] < edges.len() - k + i) else {
            break;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    count
}

/// `R(u,v)` as the number of two-tree spanning forests separating `u` from
/// `v` over the number of spanning trees. Exponential; small graphs only.
pub fn forest_resistance(g: &Graph, u: VertexId, v: VertexId) -> Result<ExactRational> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }
    let trees = count_forests(g, 1, &[]);
    if trees == BigInt::from(0) {
        return Err(Error::Disconnected);
    }
    Ok(ExactRational::new(count_forests(g, 2, &[u, v]), trees))
}

impl Witness {
    /// Recomputes both sides with [`forest_resistance`] and reports whether
    /// the instance still violates `lemma`.
    pub fn reproduces(&self, lemma: LemmaId) -> bool {
        let r = |h: &Graph, u: VertexId, v: VertexId| {
            forest_resistance(h, u, v).expect("connected witness graph")
        };
        let e = evaluate(lemma, &self.graph, &self.vertices, &r);
        !e.holds && e.lhs == self.lhs && e.rhs == self.rhs
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    pub graphs: u64,
    pub instances: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub lemma: LemmaId,
    #[serde(flatten)]
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSummary {
    pub n_max: usize,
    pub graphs: u64,
    pub lemmas: BTreeMap<&'static str, LemmaTally>,
    pub failures: u64,
    pub witnesses: Vec<FailureRecord>,
}

impl LemmaSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialises")
    }
}

/// Runs every check on every connected graph with at most `n_max` vertices.
/// Witnesses are listed in enumeration order, so the report does not depend
/// on the worker count.
pub fn run_all_checks(n_max: usize, guard: Guard) -> Result<LemmaSummary> {
    let mut summary = LemmaSummary {
        n_max,
        graphs: 0,
        lemmas: LemmaId::ALL
            .iter()
            .map(|l| (l.name(), LemmaTally::default()))
            .collect(),
        failures: 0,
        witnesses: Vec::new(),
    };
    for n in 1..=n_max {
        let graphs = enumerate_connected(n, guard)?;
        let reports: Vec<Vec<CheckReport>> =
            graphs.par_iter().map(check_graph).collect::<Result<_>>()?;
        summary.graphs += graphs.len() as u64;
        for report in reports.into_iter().flatten() {
            let tally = summary
                .lemmas
                .get_mut(report.lemma.name())
                .expect("every lemma tallied");
            tally.graphs += 1;
            tally.instances += report.instances;
            if let Some(witness) = report.witness {
                tally.failures += 1;
                summary.failures += 1;
                summary.witnesses.push(FailureRecord {
                    lemma: report.lemma,
                    witness,
                });
            }
        }
    }
    Ok(summary)
}

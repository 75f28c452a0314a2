//! Exact effective resistances of unit-resistor graphs.
//!
//! All values come from integer determinants of the Laplacian: the spanning
//! tree count `T` (any cofactor) is the common denominator, and the grounded
//! Laplacian's adjugate supplies every numerator at once.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bareiss::{adjugate, determinant, ExactInt};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::rational::ExactRational;

/// Combinatorial Laplacian `D - A`.
pub fn laplacian(g: &Graph) -> Vec<Vec<i64>> {
    let n = g.order();
    let mut l = vec![vec![0i64; n]; n];
    for (u, v) in g.edges() {
        l[u][v] = -1;
        l[v][u] = -1;
        l[u][u] += 1;
        l[v][v] += 1;
    }
    l
}

/// Laplacian with the rows and columns in `drop` removed.
fn laplacian_minor<T: ExactInt + From<i64>>(g: &Graph, drop: &[VertexId]) -> Vec<Vec<T>> {
    let keep: Vec<VertexId> = (0..g.order()).filter(|v| !drop.contains(v)).collect();
    let l = laplacian(g);
    keep.iter()
        .map(|&i| keep.iter().map(|&j| T::from(l[i][j])).collect())
        .collect()
}

fn minor_determinant(g: &Graph, drop: &[VertexId]) -> BigInt {
    match determinant(laplacian_minor::<i128>(g, drop)) {
        Some(d) => BigInt::from(d),
        None => determinant(laplacian_minor::<BigInt>(g, drop)).expect("bigint determinant"),
    }
}

/// Number of spanning trees (Matrix-Tree theorem); zero iff disconnected.
pub fn spanning_tree_count(g: &Graph) -> BigInt {
    minor_determinant(g, &[g.order() - 1])
}

fn check_pair(g: &Graph, u: VertexId, v: VertexId) -> Result<()> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }
    Ok(())
}

/// `R(u,v) = det L[{u,v}] / det L[{u}]`, computed directly from two minors.
pub fn resistance(g: &Graph, u: VertexId, v: VertexId) -> Result<ExactRational> {
    check_pair(g, u, v)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let num = minor_determinant(g, &[u, v]);
    let den = minor_determinant(g, &[u]);
    Ok(ExactRational::new(num, den))
}

/// Symmetric matrix of all pairwise resistances with zero diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct ResistanceMatrix {
    order: usize,
    entries: Vec<ExactRational>,
    tree_count: BigInt,
}

impl ResistanceMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> &ExactRational {
        &self.entries[u * self.order + v]
    }

    pub fn spanning_tree_count(&self) -> &BigInt {
        &self.tree_count
    }

    /// Upper-triangle entries `(u, v, R)` with `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId, &ExactRational)> + '_ {
        let n = self.order;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v, self.get(u, v))))
    }

    pub fn spectrum(&self) -> ResistanceSpectrum {
        ResistanceSpectrum::from_values(self.pairs().map(|(_, _, r)| r.clone()).collect())
    }
}

impl fmt::Debug for ResistanceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.order)
            .map(|u| {
                (0..self.order)
                    .map(|v| self.get(u, v).to_string())
                    .collect()
            })
            .collect();
        f.debug_struct("ResistanceMatrix")
            .field("rows", &rows)
            .finish()
    }
}

/// Spanning tree count `T` and the integers `T·R(u,v)` for all `u < v` in
/// row-major order, from one adjugate of the Laplacian grounded at the last
/// vertex. `None` on overflow of `T`.
fn pair_numerators<T: ExactInt + From<i64>>(g: &Graph) -> Option<(T, Vec<T>)> {
    let n = g.order();
    let ground = n - 1;
    let reduced = laplacian_minor::<T>(g, &[ground]);
    let (det, adj) = adjugate(&reduced)?;
    let mut nums = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            let num = if v == ground {
                adj[u][u].clone()
            } else {
                adj[u][u]
                    .add(&adj[v][v])?
                    .sub(&adj[u][v])?
                    .sub(&adj[u][v])?
            };
            nums.push(num);
        }
    }
    Some((det, nums))
}

/// Runs `f` on the pair numerators using the narrowest integer type that
/// does not overflow.
fn with_pair_numerators<R>(
    g: &Graph,
    small: impl FnOnce(i64, Vec<i64>) -> R,
    wide: impl FnOnce(i128, Vec<i128>) -> R,
    big: impl FnOnce(BigInt, Vec<BigInt>) -> R,
) -> R {
    if let Some((t, nums)) = pair_numerators::<i64>(g) {
        return small(t, nums);
    }
    if let Some((t, nums)) = pair_numerators::<i128>(g) {
        return wide(t, nums);
    }
    let (t, nums) = pair_numerators::<BigInt>(g).expect("bigint adjugate");
    big(t, nums)
}

fn build_matrix<T: Clone + Into<BigInt>>(
    n: usize,
    det: T,
    nums: Vec<T>,
    make: impl Fn(T, T) -> ExactRational,
) -> ResistanceMatrix {
    let mut entries = vec![ExactRational::zero(); n * n];
    let mut it = nums.into_iter();
    for u in 0..n {
        for v in u + 1..n {
            let r = make(it.next().expect("one numerator per pair"), det.clone());
            entries[u * n + v] = r.clone();
            entries[v * n + u] = r;
        }
    }
    ResistanceMatrix {
        order: n,
        entries,
        tree_count: det.into(),
    }
}

/// Sorting numerators over the shared denominator orders the resistances
/// without any rational arithmetic; only distinct values get reduced.
fn build_spectrum<T: Ord + Clone>(
    det: T,
    mut nums: Vec<T>,
    make: impl Fn(T, T) -> ExactRational,
) -> ResistanceSpectrum {
    nums.sort_unstable();
    let mut entries: Vec<(ExactRational, u64)> = Vec::new();
    let mut i = 0;
    while i < nums.len() {
        let j = i + nums[i..].iter().take_while(|x| **x == nums[i]).count();
        entries.push((make(nums[i].clone(), det.clone()), (j - i) as u64));
        i = j;
    }
    ResistanceSpectrum { entries }
}

/// All pairwise resistances over the common denominator `T`.
pub fn resistance_matrix(g: &Graph) -> Result<ResistanceMatrix> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.order();
    Ok(with_pair_numerators(
        g,
        |t, nums| {
            build_matrix(n, t, nums, |a, b| {
                ExactRational::from_i128(a as i128, b as i128)
            })
        },
        |t, nums| build_matrix(n, t, nums, ExactRational::from_i128),
        |t, nums| build_matrix(n, t, nums, ExactRational::new),
    ))
}

/// Sorted run-length multiset of resistance values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ResistanceSpectrum {
    entries: Vec<(ExactRational, u64)>,
}

impl ResistanceSpectrum {
    pub fn from_values(mut values: Vec<ExactRational>) -> Self {
        values.sort_unstable();
        let mut entries: Vec<(ExactRational, u64)> = Vec::new();
        for v in values {
            match entries.last_mut() {
                Some((last, count)) if *last == v => *count += 1,
                _ => entries.push((v, 1)),
            }
        }
        ResistanceSpectrum { entries }
    }

    /// Builds from `(value, multiplicity)` terms, merging equal values and
    /// dropping zero multiplicities.
    pub fn from_terms(terms: impl IntoIterator<Item = (ExactRational, u64)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, m)| *m > 0).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut entries: Vec<(ExactRational, u64)> = Vec::new();
        for (v, m) in terms {
            match entries.last_mut() {
                Some((last, count)) if *last == v => *count += m,
                _ => entries.push((v, m)),
            }
        }
        ResistanceSpectrum { entries }
    }

    pub fn entries(&self) -> &[(ExactRational, u64)] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Vertex count implied by the total multiplicity `C(n,2)`; a spectrum
    /// is empty only for `K_1`.
    pub fn implied_order(&self) -> Option<usize> {
        let total = self.total_multiplicity();
        (1..=crate::graph::MAX_ORDER as u64)
            .find(|n| n * (n - 1) / 2 == total)
            .map(|n| n as usize)
    }

    pub fn largest(&self) -> Option<&ExactRational> {
        self.entries.last().map(|(v, _)| v)
    }

    pub fn multiplicity(&self, value: &ExactRational) -> u64 {
        self.entries
            .binary_search_by(|(v, _)| v.cmp(value))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// `[["num/den", multiplicity], ...]`, ascending.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ResistanceSpectrum =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let strictly_ascending = spec.entries.windows(2).all(|w| w[0].0 < w[1].0);
        if !strictly_ascending || spec.entries.iter().any(|(_, m)| *m == 0) {
            return Err(Error::Format(
                "spectrum must be strictly ascending with positive multiplicities".into(),
            ));
        }
        Ok(spec)
    }
}

impl Serialize for ResistanceSpectrum {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ResistanceSpectrum {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        Ok(ResistanceSpectrum {
            entries: Vec::deserialize(deserializer)?,
        })
    }
}

impl fmt::Debug for ResistanceSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{v}]^{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for ResistanceSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn resistance_spectrum(g: &Graph) -> Result<ResistanceSpectrum> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(with_pair_numerators(
        g,
        |t, nums| {
            build_spectrum(t, nums, |a, b| {
                ExactRational::from_i128(a as i128, b as i128)
            })
        },
        |t, nums| build_spectrum(t, nums, ExactRational::from_i128),
        |t, nums| build_spectrum(t, nums, ExactRational::new),
    ))
}

/// Largest pairwise resistance; zero for `K_1`.
pub fn resistance_diameter(g: &Graph) -> Result<ExactRational> {
    let spec = resistance_spectrum(g)?;
    Ok(spec.largest().cloned().unwrap_or_else(ExactRational::zero))
}

/// Spectrum of `K_{m,n}` from its three resistance classes: pairs inside the
/// size-`n` part are at `2/m`, cross pairs at `1/m + 1/n - 1/(mn)`, pairs
/// inside the size-`m` part at `2/n`.
pub fn kmn_spectrum_closed_form(m: u64, n: u64) -> ResistanceSpectrum {
    assert!(m >= 1 && n >= 1, "part sizes must be positive");
    let (mi, ni) = (m as i64, n as i64);
    let same_in_n = ExactRational::new(2, mi);
    let cross = ExactRational::new(mi + ni - 1, mi * ni);
    let same_in_m = ExactRational::new(2, ni);
    ResistanceSpectrum::from_terms([
        (same_in_n, n * (n - 1) / 2),
        (cross, m * n),
        (same_in_m, m * (m - 1) / 2),
    ])
}

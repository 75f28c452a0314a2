//! Which graphs are determined by their resistance spectrum.
//!
//! A spectrum has `C(n,2)` entries, so it fixes the vertex count, and a
//! finite spectrum forces connectivity. A graph on `n` vertices is therefore
//! determined exactly when no other connected class on `n` vertices shares
//! its spectrum, which the index below decides exhaustively.

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::cache::{spectrum_rows, Cache};
use crate::canon::{canonical_form, CanonicalCode};
use crate::enumerate::Guard;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::to_graph6;
use crate::resistance::{resistance, resistance_spectrum, ResistanceSpectrum};

pub type SpectrumDigest = [u8; 16];

/// Content hash of a spectrum's canonical JSON form.
pub fn spectrum_digest(json: &str) -> SpectrumDigest {
    let full = Sha256::digest(json.as_bytes());
    full[..16].try_into().expect("digest is 32 bytes")
}

/// Connected classes on one vertex count, partitioned by exact spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumIndex {
    order: usize,
    /// Codes ascending within a group; groups ordered by their first code.
    groups: Vec<Vec<CanonicalCode>>,
    /// `(code, group)` sorted by code.
    membership: Vec<(CanonicalCode, u32)>,
    /// `(digest, group)` sorted.
    digests: Vec<(SpectrumDigest, u32)>,
}

impl SpectrumIndex {
    /// Groups `(code, spectrum json)` rows. Rows are bucketed by digest and
    /// equal digests are confirmed by comparing the full JSON text.
    pub fn from_rows(order: usize, rows: &[(CanonicalCode, String)]) -> Self {
        let mut keyed: Vec<(SpectrumDigest, usize)> = rows
            .par_iter()
            .enumerate()
            .map(|(i, (_, json))| (spectrum_digest(json), i))
            .collect();
        keyed
            .par_sort_unstable_by(|a, b| a.0.cmp(&b.0).then_with(|| rows[a.1].0.cmp(&rows[b.1].0)));

        let mut groups: Vec<(SpectrumDigest, Vec<CanonicalCode>)> = Vec::new();
        let mut start = 0;
        while start < keyed.len() {
            let end = start
                + keyed[start..]
                    .iter()
                    .take_while(|k| k.0 == keyed[start].0)
                    .count();
            // Split a digest bucket by exact text; buckets are almost always
            // a single spectrum.
            let mut reps: Vec<(&str, Vec<CanonicalCode>)> = Vec::new();
            for &(_, i) in &keyed[start..end] {
                let (code, json) = &rows[i];
                match reps.iter_mut().find(|(r, _)| *r == json.as_str()) {
                    Some((_, codes)) => codes.push(*code),
                    None => reps.push((json.as_str(), vec![*code])),
                }
            }
            groups.extend(reps.into_iter().map(|(_, codes)| (keyed[start].0, codes)));
            start = end;
        }
        groups.par_sort_unstable_by(|a, b| a.1[0].cmp(&b.1[0]));

        let mut membership = Vec::with_capacity(rows.len());
        let mut digests = Vec::with_capacity(groups.len());
        for (gi, (digest, codes)) in groups.iter().enumerate() {
            digests.push((*digest, gi as u32));
            membership.extend(codes.iter().map(|&c| (c, gi as u32)));
        }
        membership.par_sort_unstable();
        digests.sort_unstable();
        SpectrumIndex {
            order,
            groups: groups.into_iter().map(|(_, codes)| codes).collect(),
            membership,
            digests,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn class_count(&self) -> usize {
        self.membership.len()
    }

    pub fn groups(&self) -> &[Vec<CanonicalCode>] {
        &self.groups
    }

    /// The group containing `code`, if `code` is an indexed class.
    pub fn group_of(&self, code: &CanonicalCode) -> Option<&[CanonicalCode]> {
        let i = self
            .membership
            .binary_search_by(|(c, _)| c.cmp(code))
            .ok()?;
        Some(&self.groups[self.membership[i].1 as usize])
    }

    /// Every indexed class with exactly this spectrum.
    pub fn realizations(&self, spectrum: &ResistanceSpectrum) -> Result<&[CanonicalCode]> {
        let digest = spectrum_digest(&spectrum.to_json());
        let lo = self.digests.partition_point(|(d, _)| *d < digest);
        for &(d, gi) in &self.digests[lo..] {
            if d != digest {
                break;
            }
            let group = &self.groups[gi as usize];
            if &resistance_spectrum(&group[0].to_graph())? == spectrum {
                return Ok(group);
            }
        }
        Ok(&[])
    }
}

/// Builds (or loads from `cache`) the index for order `n`.
pub fn index_spectra(n: usize, guard: Guard, cache: Option<&Cache>) -> Result<SpectrumIndex> {
    let rows = spectrum_rows(n, guard, cache)?;
    Ok(SpectrumIndex::from_rows(n, &rows))
}

/// Which family a complete bipartite graph falls in with respect to the
/// known determinability results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremTag {
    /// `K_{n,n}`.
    #[serde(rename = "Thm3.1")]
    EqualParts,
    /// `K_{n,n+1}`.
    #[serde(rename = "Thm3.2")]
    PartsDifferByOne,
    /// `K_{2,n}`.
    #[serde(rename = "Thm3.3")]
    PartOfSizeTwo,
    /// `K_{m,n}` with `m > 3n + 1`.
    #[serde(rename = "Thm3.4")]
    Lopsided,
    #[serde(rename = "conjecture-only")]
    ConjectureOnly,
    #[serde(rename = "not-complete-bipartite")]
    NotCompleteBipartite,
}

impl TheoremTag {
    pub fn label(self) -> &'static str {
        match self {
            TheoremTag::EqualParts => "Thm3.1",
            TheoremTag::PartsDifferByOne => "Thm3.2",
            TheoremTag::PartOfSizeTwo => "Thm3.3",
            TheoremTag::Lopsided => "Thm3.4",
            TheoremTag::ConjectureOnly => "conjecture-only",
            TheoremTag::NotCompleteBipartite => "not-complete-bipartite",
        }
    }

    /// Tags whose graphs are proven determined.
    pub fn is_proven(self) -> bool {
        !matches!(
            self,
            TheoremTag::ConjectureOnly | TheoremTag::NotCompleteBipartite
        )
    }
}

/// First matching family, tested in the order equal parts, parts differing
/// by one, a part of size two, lopsided.
pub fn classify_kmn(m: usize, n: usize) -> TheoremTag {
    let (lo, hi) = (m.min(n), m.max(n));
    if lo == hi {
        TheoremTag::EqualParts
    } else if hi - lo == 1 {
        TheoremTag::PartsDifferByOne
    } else if lo == 2 {
        TheoremTag::PartOfSizeTwo
    } else if hi > 3 * lo + 1 {
        TheoremTag::Lopsided
    } else {
        TheoremTag::ConjectureOnly
    }
}

/// Part sizes `(small, large)` if `g` is a complete bipartite graph.
pub fn complete_bipartite_parts(g: &Graph) -> Option<(usize, usize)> {
    if g.order() < 2 || !g.is_connected() {
        return None;
    }
    let side = g.bipartition()?;
    let a = side.count_ones() as usize;
    let b = g.order() - a;
    (g.edge_count() == a * b).then_some((a.min(b), a.max(b)))
}

fn serialize_graph6<S: Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_graph6(g))
}

fn serialize_codes<S: Serializer>(
    codes: &[CanonicalCode],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(codes.iter().map(|c| c.graph6()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrsVerdict {
    #[serde(serialize_with = "serialize_graph6")]
    pub target: Graph,
    /// Part sizes when the target is complete bipartite.
    pub parts: Option<(usize, usize)>,
    pub theorem_tag: TheoremTag,
    pub determined: bool,
    #[serde(serialize_with = "serialize_codes")]
    pub impostors: Vec<CanonicalCode>,
    pub spectrum: ResistanceSpectrum,
    /// Connected classes compared against: every one on the target's
    /// vertex count, which the spectrum size fixes.
    pub classes_compared: usize,
}

/// Verdict for `g` against a prebuilt index of its order.
pub fn verdict_from_index(g: &Graph, index: &SpectrumIndex) -> Result<DrsVerdict> {
    if g.order() != index.order() {
        return Err(Error::Format(format!(
            "graph of order {} checked against an order-{} index",
            g.order(),
            index.order()
        )));
    }
    let spectrum = resistance_spectrum(g)?;
    let code = canonical_form(g)?;
    let group = index.group_of(&code).ok_or_else(|| {
        Error::Inconsistent(format!("{} missing from the enumeration", code.graph6()))
    })?;
    if index.realizations(&spectrum)? != group {
        return Err(Error::Inconsistent(format!(
            "spectrum group of {} does not match its spectrum",
            code.graph6()
        )));
    }
    let impostors: Vec<CanonicalCode> = group.iter().copied().filter(|c| *c != code).collect();
    let parts = complete_bipartite_parts(g);
    Ok(DrsVerdict {
        target: g.clone(),
        parts,
        theorem_tag: parts.map_or(TheoremTag::NotCompleteBipartite, |(m, n)| {
            classify_kmn(m, n)
        }),
        determined: impostors.is_empty(),
        impostors,
        spectrum,
        classes_compared: index.class_count(),
    })
}

/// Exhaustive verdict for a connected graph within the enumeration guard.
pub fn verify_drs(g: &Graph, guard: Guard, cache: Option<&Cache>) -> Result<DrsVerdict> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let index = index_spectra(g.order(), guard, cache)?;
    verdict_from_index(g, &index)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub n_max: usize,
    pub verdicts: Vec<DrsVerdict>,
    /// Proven-family graphs that came back with impostors.
    pub violations: usize,
}

impl TheoremReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Verdicts for every `K_{m,n}` with `m <= n` and `2 <= m + n <= n_max`.
pub fn check_theorems(n_max: usize, guard: Guard, cache: Option<&Cache>) -> Result<TheoremReport> {
    let mut verdicts = Vec::new();
    for order in 2..=n_max {
        let index = index_spectra(order, guard, cache)?;
        for m in 1..=order / 2 {
            let g = Graph::complete_bipartite(m, order - m)?;
            verdicts.push(verdict_from_index(&g, &index)?);
        }
    }
    let violations = verdicts
        .iter()
        .filter(|v| v.theorem_tag.is_proven() && !v.determined)
        .count();
    Ok(TheoremReport {
        n_max,
        verdicts,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionPair {
    #[serde(serialize_with = "serialize_code")]
    pub a: CanonicalCode,
    #[serde(serialize_with = "serialize_code")]
    pub b: CanonicalCode,
    pub spectrum: ResistanceSpectrum,
}

fn serialize_code<S: Serializer>(c: &CanonicalCode, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.graph6())
}

impl CollisionPair {
    /// Re-derives the claim from the graphs alone: the canonical forms
    /// differ, and both spectra, rebuilt one pair at a time from Laplacian
    /// minors, equal the recorded spectrum.
    pub fn reverify(&self) -> Result<bool> {
        let (ga, gb) = (self.a.to_graph(), self.b.to_graph());
        let distinct = canonical_form(&ga)? != canonical_form(&gb)?;
        let pairwise = |g: &Graph| -> Result<ResistanceSpectrum> {
            let n = g.order();
            let mut values = Vec::with_capacity(n * (n - 1) / 2);
            for u in 0..n {
                for v in u + 1..n {
                    values.push(resistance(g, u, v)?);
                }
            }
            Ok(ResistanceSpectrum::from_values(values))
        };
        Ok(distinct && pairwise(&ga)? == self.spectrum && pairwise(&gb)? == self.spectrum)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionReport {
    pub order: usize,
    pub classes: usize,
    pub distinct_spectra: usize,
    pub pairs: Vec<CollisionPair>,
}

impl CollisionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// All non-isomorphic pairs on `n` vertices with equal spectra. Every pair
/// is re-verified before it is reported.
pub fn find_collisions(n: usize, guard: Guard, cache: Option<&Cache>) -> Result<CollisionReport> {
    let index = index_spectra(n, guard, cache)?;
    let mut pairs = Vec::new();
    for group in index.groups().iter().filter(|g| g.len() > 1) {
        let spectrum = resistance_spectrum(&group[0].to_graph())?;
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                pairs.push(CollisionPair {
                    a,
                    b,
                    spectrum: spectrum.clone(),
                });
            }
        }
    }
    for p in &pairs {
        if !p.reverify()? {
            return Err(Error::Inconsistent(format!(
                "collision {} / {} failed re-verification",
                p.a.graph6(),
                p.b.graph6()
            )));
        }
    }
    Ok(CollisionReport {
        order: n,
        classes: index.class_count(),
        distinct_spectra: index.groups().len(),
        pairs,
    })
}

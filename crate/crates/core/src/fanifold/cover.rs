//! The barycentric sectorial cover of a closed fanifold and its nerve.
//!
//! Each 0-stratum `P` gets the closed star of `P` in the barycentric
//! subdivision of the stratum poset, recorded as the set of chains
//! `P = S_0 < S_1 < … < S_m`. Two stars meet exactly over the barycentric
//! cells of strata whose closures contain both vertices.

use std::collections::{BTreeMap, BTreeSet};

use super::{Fanifold, StratumId};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::poset::Poset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverRegion {
    pub vertex: StratumId,
    /// Chains in the exit poset starting at `vertex`, including the trivial one.
    pub flags: BTreeSet<Vec<StratumId>>,
    /// Fan of the relative skeleton of the piece: the vertex's normal fan.
    pub skeleton_fan: Fan,
}

impl CoverRegion {
    /// Strata whose barycenter lies in this region.
    pub fn reached(&self) -> BTreeSet<&StratumId> {
        self.flags.iter().filter_map(|c| c.last()).collect()
    }
}

fn chains_from(phi: &Fanifold, start: &StratumId) -> BTreeSet<Vec<StratumId>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![vec![start.clone()]];
    while let Some(chain) = stack.pop() {
        let last = chain.last().expect("chains are nonempty").clone();
        for a in phi.arrows_from(&last) {
            let mut next = chain.clone();
            next.push(a.target.clone());
            stack.push(next);
        }
        out.insert(chain);
    }
    out
}

pub fn barycentric_cover(phi: &Fanifold) -> Result<Vec<CoverRegion>> {
    if !phi.closed {
        return Err(Error::NotClosed);
    }
    for s in phi.strata().filter(|s| s.dim > 0) {
        let touches_vertex = phi.arrows_into(&s.id).any(|a| phi.stratum(&a.source).is_some_and(|p| p.dim == 0));
        if !touches_vertex {
            return Err(Error::NoAdjacentVertex(s.id.clone()));
        }
    }
    Ok(phi
        .strata()
        .filter(|s| s.dim == 0)
        .map(|p| CoverRegion {
            vertex: p.id.clone(),
            flags: chains_from(phi, &p.id),
            skeleton_fan: p.normal_fan.clone(),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveSimplex {
    /// Indices into [`Nerve::vertices`], sorted.
    pub vertices: Vec<usize>,
    /// Minimal strata whose closures contain every vertex of the simplex.
    pub carriers: Vec<StratumId>,
    /// Fan of the intersection's skeleton, when the carrier is unique.
    pub fan: Option<Fan>,
    pub base_cone: Option<Cone>,
}

impl NerveSimplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    pub vertices: Vec<StratumId>,
    /// Sorted by dimension, then lexicographically.
    pub simplices: Vec<NerveSimplex>,
}

impl Nerve {
    pub fn count_by_dim(&self) -> Vec<usize> {
        let top = self.simplices.iter().map(NerveSimplex::dim).max();
        let mut counts = vec![0; top.map_or(0, |d| d + 1)];
        for s in &self.simplices {
            counts[s.dim()] += 1;
        }
        counts
    }

    pub fn contains(&self, vertices: &[usize]) -> bool {
        self.simplices.iter().any(|s| s.vertices == vertices)
    }

    /// Simplices ordered by face inclusion.
    pub fn face_poset(&self) -> Poset {
        let s = &self.simplices;
        Poset::from_relation(s.len(), |a, b| s[a].vertices.iter().all(|v| s[b].vertices.contains(v)))
    }
}

fn nonempty_subsets(items: &[usize]) -> Vec<Vec<usize>> {
    let k = items.len();
    (1u64..1 << k).map(|mask| (0..k).filter(|b| mask >> b & 1 == 1).map(|b| items[b]).collect()).collect()
}

/// Nerve of the cover: vertices are the regions, and a set of regions spans a
/// simplex iff some stratum's barycenter lies in all of them.
pub fn nerve(regions: &[CoverRegion], phi: &Fanifold) -> Nerve {
    let vertices: Vec<StratumId> = regions.iter().map(|r| r.vertex.clone()).collect();
    let mut over: BTreeMap<&StratumId, Vec<usize>> = BTreeMap::new();
    for (i, r) in regions.iter().enumerate() {
        for s in r.reached() {
            over.entry(s).or_default().push(i);
        }
    }

    let mut simplices: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    for vs in over.values() {
        for sub in nonempty_subsets(vs) {
            simplices.insert((sub.len(), sub));
        }
    }

    let simplices = simplices
        .into_iter()
        .map(|(_, vs)| {
            let common: Vec<&StratumId> =
                over.iter().filter(|(_, members)| vs.iter().all(|v| members.contains(v))).map(|(s, _)| *s).collect();
            let carriers: Vec<StratumId> = common
                .iter()
                .filter(|s| !common.iter().any(|t| t != *s && phi.exits_to(t, s)))
                .map(|s| (*s).clone())
                .collect();
            let single = (carriers.len() == 1).then(|| phi.stratum(&carriers[0]).expect("known stratum"));
            NerveSimplex {
                vertices: vs,
                fan: single.map(|s| s.normal_fan.clone()),
                base_cone: single.and_then(|s| s.base_cone.clone()),
                carriers,
            }
        })
        .collect();
    Nerve { vertices, simplices }
}

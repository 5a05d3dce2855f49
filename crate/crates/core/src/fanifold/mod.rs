//! Fanifolds: a finite stratum poset with a normal fan on each stratum and
//! exit arrows labelled by a cone and a lattice surjection.
//!
//! Strata are not stored as point sets; every computation here only needs
//! the poset with its fan and lattice data.

mod cover;
mod filtration;
mod validate;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fan::{is_complete, quotient_fan, relative_quotient, validate_fan, Cone, Fan};
use crate::lattice::QuotientMap;

pub use cover::{barycentric_cover, nerve, CoverRegion, Nerve, NerveSimplex};
pub use filtration::{filtration, Filtration, HandleRecord};
pub use validate::{validate_fanifold, FanifoldReport};

pub type StratumId = String;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub id: StratumId,
    pub dim: usize,
    pub lattice_rank: usize,
    pub normal_fan: Fan,
    /// Whether the stratum is closed in the fanifold (nothing exits into it).
    pub is_closed: bool,
    /// For sphere fanifolds, the cone of the base fan this stratum comes from.
    pub base_cone: Option<Cone>,
}

impl Stratum {
    pub fn new(id: impl Into<StratumId>, dim: usize, normal_fan: Fan) -> Self {
        Stratum { id: id.into(), dim, lattice_rank: normal_fan.rank(), normal_fan, is_closed: true, base_cone: None }
    }

    pub fn with_base_cone(mut self, cone: Cone) -> Self {
        self.base_cone = Some(cone);
        self
    }
}

/// An exit path `source → target`, with `Σ_target ≅ Σ_source / cone` through
/// `lattice_map: M_source ↠ M_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitArrow {
    pub source: StratumId,
    pub target: StratumId,
    pub cone: Cone,
    pub lattice_map: QuotientMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fanifold {
    pub dim: usize,
    strata: BTreeMap<StratumId, Stratum>,
    arrows: BTreeMap<(StratumId, StratumId), ExitArrow>,
    pub closed: bool,
}

impl Fanifold {
    /// Assembles a fanifold. Arrow endpoints must name strata; each
    /// stratum's `is_closed` flag is recomputed from the arrows.
    pub fn new(dim: usize, strata: Vec<Stratum>, arrows: Vec<ExitArrow>, closed: bool) -> Result<Self> {
        let mut by_id: BTreeMap<StratumId, Stratum> = strata.into_iter().map(|s| (s.id.clone(), s)).collect();
        let mut map = BTreeMap::new();
        for a in arrows {
            for end in [&a.source, &a.target] {
                if !by_id.contains_key(end) {
                    return Err(Error::UnknownStratum(end.clone()));
                }
            }
            map.insert((a.source.clone(), a.target.clone()), a);
        }
        for s in by_id.values_mut() {
            s.is_closed = !map.keys().any(|(_, t)| *t == s.id);
        }
        Ok(Fanifold { dim, strata: by_id, arrows: map, closed })
    }

    pub fn strata(&self) -> impl Iterator<Item = &Stratum> + '_ {
        self.strata.values()
    }

    pub fn num_strata(&self) -> usize {
        self.strata.len()
    }

    pub fn stratum(&self, id: &str) -> Option<&Stratum> {
        self.strata.get(id)
    }

    pub fn arrows(&self) -> impl Iterator<Item = &ExitArrow> + '_ {
        self.arrows.values()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, source: &str, target: &str) -> Option<&ExitArrow> {
        self.arrows.get(&(source.to_owned(), target.to_owned()))
    }

    pub fn arrows_from<'a>(&'a self, source: &'a str) -> impl Iterator<Item = &'a ExitArrow> + 'a {
        self.arrows.values().filter(move |a| a.source == source)
    }

    pub fn arrows_into<'a>(&'a self, target: &'a str) -> impl Iterator<Item = &'a ExitArrow> + 'a {
        self.arrows.values().filter(move |a| a.target == target)
    }

    /// `a ≤ b` in the exit order: equal, or an exit arrow `a → b`.
    pub fn exits_to(&self, a: &str, b: &str) -> bool {
        a == b || self.arrow(a, b).is_some()
    }

    pub fn arrow_mut(&mut self, source: &str, target: &str) -> Option<&mut ExitArrow> {
        self.arrows.get_mut(&(source.to_owned(), target.to_owned()))
    }
}

/// Identifier of the stratum of the sphere fanifold coming from `cone`.
pub fn sphere_stratum_id(cone: &Cone) -> StratumId {
    let parts: Vec<String> = cone.rays().iter().map(ToString::to_string).collect();
    format!("s{}", parts.join("_"))
}

/// The fanifold `Σ ∩ S^d` of a complete fan of rank `d + 1`.
///
/// One stratum of dimension `dim σ - 1` per nonzero cone `σ`, with normal fan
/// `Σ/σ`, and one exit arrow per proper inclusion `σ ⊊ σ′`.
pub fn sphere_fanifold(f: &Fan) -> Result<Fanifold> {
    let violations = validate_fan(f);
    if !violations.is_empty() {
        return Err(Error::InvalidFan(violations));
    }
    if f.rank() == 0 {
        return Err(Error::RankZero);
    }
    if !is_complete(f) {
        return Err(Error::NotComplete);
    }
    let mut strata = Vec::new();
    let mut arrows = Vec::new();
    for sigma in f.nonzero_cones() {
        let q = quotient_fan(f, sigma)?;
        strata.push(Stratum::new(sphere_stratum_id(sigma), sigma.dim() - 1, q.fan).with_base_cone(sigma.clone()));
        for tau in f.nonzero_cones().filter(|t| *t != sigma && sigma.is_face_of(t)) {
            let (cone, lattice_map) = relative_quotient(f, sigma, tau)?;
            arrows.push(ExitArrow {
                source: sphere_stratum_id(sigma),
                target: sphere_stratum_id(tau),
                cone,
                lattice_map,
            });
        }
    }
    Fanifold::new(f.rank() - 1, strata, arrows, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fan::fan_isomorphic;

    #[test]
    fn sphere_of_p2() {
        let phi = sphere_fanifold(&corpus::p2()).unwrap();
        assert_eq!(phi.dim, 1);
        let vertices: Vec<&Stratum> = phi.strata().filter(|s| s.dim == 0).collect();
        let arcs: Vec<&Stratum> = phi.strata().filter(|s| s.dim == 1).collect();
        assert_eq!((vertices.len(), arcs.len()), (3, 3));
        for v in vertices {
            assert!(fan_isomorphic(&v.normal_fan, &corpus::p1(), None).is_some());
            assert!(v.is_closed);
        }
        for a in arcs {
            assert_eq!(a.normal_fan, Fan::trivial(0));
            assert!(!a.is_closed);
        }
        assert_eq!(phi.num_arrows(), 6);
        assert!(phi.closed);
    }

    #[test]
    fn sphere_of_p1_and_p1xp1() {
        let phi = sphere_fanifold(&corpus::p1()).unwrap();
        assert_eq!((phi.dim, phi.num_strata(), phi.num_arrows()), (0, 2, 0));

        let phi = sphere_fanifold(&corpus::p1xp1()).unwrap();
        assert_eq!(phi.strata().filter(|s| s.dim == 0).count(), 4);
        assert_eq!(phi.strata().filter(|s| s.dim == 1).count(), 4);
        for s in phi.strata().filter(|s| s.dim == 0) {
            assert_eq!(phi.arrows_from(&s.id).count(), 2);
        }
        for s in phi.strata().filter(|s| s.dim == 1) {
            assert_eq!(phi.arrows_into(&s.id).count(), 2);
        }
    }

    #[test]
    fn sphere_rejects_incomplete() {
        assert!(matches!(sphere_fanifold(&corpus::a2()), Err(Error::NotComplete)));
        assert!(matches!(sphere_fanifold(&Fan::trivial(0)), Err(Error::RankZero)));
    }

    #[test]
    fn unknown_arrow_endpoint() {
        let s = Stratum::new("p", 0, Fan::trivial(0));
        let a = ExitArrow {
            source: "p".into(),
            target: "q".into(),
            cone: Cone::zero(),
            lattice_map: QuotientMap::identity(0),
        };
        assert!(matches!(Fanifold::new(0, vec![s], vec![a], true), Err(Error::UnknownStratum(_))));
    }
}

//! The FLTZ skeleton `L(Σ) = ⋃ σ^⊥ × σ` of a fan, the strata of its
//! boundary at infinity, and the open cover of that boundary by the pieces
//! `L(Σ/σ) × ∂∞σ`, one for each nonzero cone.
//!
//! The boundary at infinity is modelled by its strata: a pair `(σ, τ)` with
//! `0 ≠ σ ⊆ τ` stands for the points at infinity in direction `relint σ`
//! whose torus coordinate lies in `τ^⊥`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::fan::{quotient_fan, quotient_functoriality, Cone, Fan};
use crate::lattice::{canonical_basis, perp_lattice, IntMatrix, PerpLattice};
use crate::report::{all_passed, Clause};

/// One piece `σ^⊥ × σ` of the skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FltzStratum {
    pub cone: Cone,
    pub perp: PerpLattice,
    pub dim: usize,
}

pub fn fltz_strata(f: &Fan) -> Vec<FltzStratum> {
    f.cones()
        .map(|c| {
            let perp = perp_lattice(f.rank(), &f.generators(c));
            // real subtorus of dimension rank(σ^⊥) times the cone itself
            let dim = perp.rank() + c.dim();
            FltzStratum { cone: c.clone(), perp, dim }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BoundaryStratum {
    pub direction_cone: Cone,
    pub ambient_cone: Cone,
    pub dim: usize,
}

/// All pairs `(σ, τ)` with `0 ≠ σ ⊆ τ`. Empty when the fan has no nonzero cone.
pub fn boundary_strata(f: &Fan) -> Vec<BoundaryStratum> {
    let mut out = Vec::new();
    for sigma in f.nonzero_cones() {
        for tau in f.cones().filter(|t| sigma.is_face_of(t)) {
            out.push(BoundaryStratum {
                direction_cone: sigma.clone(),
                ambient_cone: tau.clone(),
                dim: (f.rank() - tau.dim()) + (sigma.dim() - 1),
            });
        }
    }
    out
}

/// The piece `L(Σ/σ) × ∂∞σ` of the boundary cover.
#[derive(Clone, Debug)]
pub struct CoverPiece {
    pub index_cone: Cone,
    pub fiber_fan: Fan,
    pub members: BTreeSet<BoundaryStratum>,
}

/// Membership law: `(σ′, τ)` lies in the piece of `σ` iff `σ ⊆ σ′`.
pub fn piece_contains(index_cone: &Cone, stratum: &BoundaryStratum) -> bool {
    index_cone.is_face_of(&stratum.direction_cone)
}

pub fn cover_pieces(f: &Fan) -> Vec<CoverPiece> {
    let strata = boundary_strata(f);
    f.nonzero_cones()
        .map(|sigma| {
            let fiber_fan = quotient_fan(f, sigma).expect("cone of the fan").fan;
            let members = strata.iter().filter(|s| piece_contains(sigma, s)).cloned().collect();
            CoverPiece { index_cone: sigma.clone(), fiber_fan, members }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub pieces: Vec<CoverPiece>,
    pub strata: Vec<BoundaryStratum>,
    /// Number of pieces containing each boundary stratum.
    pub multiplicity: BTreeMap<BoundaryStratum, usize>,
    pub clauses: Vec<Clause>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.clauses)
    }
}

/// Checks the cover of `∂∞L(Σ)`: coverage, anti-indexing in both
/// directions, agreement of perp lattices across quotients, and the fan data
/// of the inclusions between pieces.
pub fn check_cover(f: &Fan) -> CoverReport {
    let strata = boundary_strata(f);
    let pieces = cover_pieces(f);

    let mut multiplicity = BTreeMap::new();
    let mut coverage = Vec::new();
    for s in &strata {
        let m = pieces.iter().filter(|p| p.members.contains(s)).count();
        if m == 0 {
            coverage.push(format!("stratum ({}, {}) lies in no piece", s.direction_cone, s.ambient_cone));
        }
        multiplicity.insert(s.clone(), m);
    }

    let mut anti = Vec::new();
    for a in &pieces {
        for b in &pieces {
            let contained = b.members.is_subset(&a.members);
            let face = a.index_cone.is_face_of(&b.index_cone);
            if contained != face {
                anti.push(format!(
                    "members({}) ⊆ members({}) is {contained} but {} ⊆ {} is {face}",
                    b.index_cone, a.index_cone, a.index_cone, b.index_cone
                ));
            }
        }
    }

    let mut perp = Vec::new();
    let mut inclusion = Vec::new();
    let cones: Vec<&Cone> = f.cones().collect();
    for sigma in &cones {
        let q = quotient_fan(f, sigma).expect("cone of the fan");
        for tau in cones.iter().filter(|t| sigma.is_face_of(t)) {
            let image = &q.cone_map[*tau];
            let fiber_perp = perp_lattice(q.fan.rank(), &q.fan.generators(image));
            let pulled: Vec<_> =
                fiber_perp.basis.row_vectors().iter().map(|y| q.quotient.projection.apply_left(y)).collect();
            let pulled = canonical_basis(&IntMatrix::from_rows(f.rank(), &pulled));
            let direct = perp_lattice(f.rank(), &f.generators(tau)).basis;
            if pulled != direct {
                perp.push(format!("({tau}/⟨{sigma}⟩)^⊥ pulls back to {pulled}, but {tau}^⊥ is {direct}"));
            }
            if !sigma.is_zero() {
                if let Err(e) = quotient_functoriality(f, sigma, tau) {
                    inclusion.push(e);
                }
            }
        }
    }

    CoverReport {
        clauses: vec![
            Clause::new("coverage", coverage),
            Clause::new("anti_indexing", anti),
            Clause::new("perp_stability", perp),
            Clause::new("open_inclusion", inclusion),
        ],
        pieces,
        strata,
        multiplicity,
    }
}

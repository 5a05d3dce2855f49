//! Simplicial rational fans.
//!
//! A cone is identified by the sorted set of indices of its rays in the
//! parent fan's ray table; the zero cone is the empty set.

mod iso;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{int_vector, primitive, quotient_map, solve_in_span, IntVector, QuotientMap};
use crate::poset::Poset;

pub use iso::{fan_isomorphic, induced_iso, quotient_functoriality, FanIso};
pub use validate::{validate_fan, FanViolation};

/// A simplicial cone as a sorted set of ray indices.
///
/// Cones order by dimension first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(rays: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = rays.into_iter().collect();
        Cone(set.into_iter().collect())
    }

    pub fn zero() -> Self {
        Cone(Vec::new())
    }

    pub fn ray(i: usize) -> Self {
        Cone(vec![i])
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_ray(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|&i| other.contains_ray(i))
    }

    pub fn union(&self, other: &Cone) -> Cone {
        Cone::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        Cone(self.0.iter().copied().filter(|&i| other.contains_ray(i)).collect())
    }

    /// All faces, including the zero cone and the cone itself.
    pub fn faces(&self) -> Vec<Cone> {
        let k = self.0.len();
        (0u64..1 << k).map(|mask| Cone((0..k).filter(|b| mask >> b & 1 == 1).map(|b| self.0[b]).collect())).collect()
    }

    /// Faces of codimension one.
    pub fn facets(&self) -> Vec<Cone> {
        (0..self.0.len())
            .map(|skip| Cone(self.0.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect()))
            .collect()
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A fan of simplicial cones in `Z^rank ⊗ R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVector>,
    cones: BTreeSet<Cone>,
}

impl Fan {
    /// Stores the data as given, without face closure or validation.
    pub fn new_unchecked(rank: usize, rays: Vec<IntVector>, cones: impl IntoIterator<Item = Cone>) -> Self {
        Fan { rank, rays, cones: cones.into_iter().collect() }
    }

    /// Closes the given cones under taking faces (the zero cone is always added).
    pub fn from_cones(rank: usize, rays: Vec<IntVector>, cones: impl IntoIterator<Item = Cone>) -> Self {
        let mut all = BTreeSet::new();
        all.insert(Cone::zero());
        for c in cones {
            all.extend(c.faces());
        }
        Fan { rank, rays, cones: all }
    }

    pub fn from_i64(rank: usize, rays: &[&[i64]], maximal: &[&[usize]]) -> Self {
        Self::from_cones(
            rank,
            rays.iter().map(|r| int_vector(r)).collect(),
            maximal.iter().map(|c| Cone::new(c.iter().copied())),
        )
    }

    /// The fan consisting of the zero cone only.
    pub fn trivial(rank: usize) -> Self {
        Self::from_cones(rank, Vec::new(), [])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn cones(&self) -> impl Iterator<Item = &Cone> + '_ {
        self.cones.iter()
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn contains(&self, c: &Cone) -> bool {
        self.cones.contains(c)
    }

    pub fn nonzero_cones(&self) -> impl Iterator<Item = &Cone> + '_ {
        self.cones.iter().filter(|c| !c.is_zero())
    }

    pub fn cones_of_dim(&self, k: usize) -> impl Iterator<Item = &Cone> + '_ {
        self.cones.iter().filter(move |c| c.dim() == k)
    }

    /// Cones not properly contained in another cone.
    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.dim() > c.dim() && c.is_face_of(d)))
            .cloned()
            .collect()
    }

    pub fn generators(&self, c: &Cone) -> Vec<IntVector> {
        c.rays().iter().map(|&i| self.rays[i].clone()).collect()
    }

    fn require(&self, c: &Cone) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::ConeNotInFan(c.clone()))
        }
    }

    /// Index of a ray equal to `v`, if any.
    pub fn ray_index(&self, v: &[BigInt]) -> Option<usize> {
        self.rays.iter().position(|r| r.as_slice() == v)
    }

    pub fn is_valid(&self) -> bool {
        validate_fan(self).is_empty()
    }

    /// Whether `v` lies in the closed cone `c`.
    pub fn cone_contains_point(&self, c: &Cone, v: &[BigInt]) -> bool {
        if is_zero(v) {
            return true;
        }
        match solve_in_span(&self.generators(c), v) {
            Some(coords) => coords.iter().all(|x| !x.is_negative()),
            None => false,
        }
    }
}

fn is_zero(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Cones ordered by face inclusion; covering relations are codimension-one faces.
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub cones: Vec<Cone>,
    pub poset: Poset,
}

impl FacePoset {
    pub fn index_of(&self, c: &Cone) -> Option<usize> {
        self.cones.binary_search(c).ok()
    }
}

pub fn face_poset(f: &Fan) -> FacePoset {
    let cones: Vec<Cone> = f.cones().cloned().collect();
    let poset = Poset::from_relation(cones.len(), |a, b| cones[a].is_face_of(&cones[b]));
    FacePoset { cones, poset }
}

/// `{τ ∈ Σ : σ ⊆ τ}`.
pub fn star(f: &Fan, sigma: &Cone) -> Result<Vec<Cone>> {
    f.require(sigma)?;
    Ok(f.cones().filter(|t| sigma.is_face_of(t)).cloned().collect())
}

/// The smallest cone of the fan containing both cones, if one exists.
pub fn wedge(f: &Fan, s1: &Cone, s2: &Cone) -> Option<Cone> {
    let both = s1.union(s2);
    let above: Vec<&Cone> = f.cones().filter(|t| both.is_face_of(t)).collect();
    let min = above.iter().min_by_key(|c| c.dim())?;
    debug_assert!(above.iter().all(|t| min.is_face_of(t)));
    Some((*min).clone())
}

/// `Σ/σ` together with the quotient lattice map and the map `star(σ) → Σ/σ`.
#[derive(Clone, Debug)]
pub struct QuotientFan {
    pub quotient: QuotientMap,
    pub fan: Fan,
    pub cone_map: BTreeMap<Cone, Cone>,
}

pub fn quotient_fan(f: &Fan, sigma: &Cone) -> Result<QuotientFan> {
    f.require(sigma)?;
    let quotient = quotient_map(f.rank(), &f.generators(sigma));

    let mut rays: Vec<IntVector> = Vec::new();
    let mut by_vector: HashMap<IntVector, usize> = HashMap::new();
    let mut new_index: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, r) in f.rays().iter().enumerate() {
        if sigma.contains_ray(i) {
            continue;
        }
        let mut extended = sigma.rays().to_vec();
        extended.push(i);
        if !f.contains(&Cone::new(extended)) {
            continue;
        }
        let image = primitive(&quotient.apply(r))?;
        let next = rays.len();
        let idx = *by_vector.entry(image.clone()).or_insert(next);
        if idx == next {
            rays.push(image);
        }
        new_index.insert(i, idx);
    }

    let mut cone_map = BTreeMap::new();
    for tau in f.cones().filter(|t| sigma.is_face_of(t)) {
        let image = Cone::new(tau.rays().iter().filter(|i| !sigma.contains_ray(**i)).map(|i| new_index[i]));
        cone_map.insert(tau.clone(), image);
    }
    let fan = Fan::new_unchecked(quotient.target_rank, rays, cone_map.values().cloned());
    Ok(QuotientFan { quotient, fan, cone_map })
}

/// Data of the exit arrow from the stratum of `sigma` to that of `tau`
/// (`σ ⊆ τ`): the image cone `τ/⟨σ⟩` in `Σ/σ` and the lattice surjection
/// `M/⟨σ⟩ ↠ M/⟨τ⟩` in canonical coordinates on both sides.
pub fn relative_quotient(f: &Fan, sigma: &Cone, tau: &Cone) -> Result<(Cone, QuotientMap)> {
    let qs = quotient_fan(f, sigma)?;
    f.require(tau)?;
    let cone = qs.cone_map.get(tau).cloned().ok_or_else(|| Error::ConeNotInFan(tau.clone()))?;
    let qt = quotient_map(f.rank(), &f.generators(tau));
    let map = qs.quotient.factor_through(&qt).expect("saturation of a face is contained in saturation of the cone");
    Ok((cone, map))
}

/// Whether the support of the fan is all of `M_R`.
///
/// Checks that all maximal cones are full-dimensional and every
/// codimension-one cone lies in exactly two of them, then certifies by
/// locating a set of test directions (± each ray, ± each pairwise sum) in
/// some top cone.
pub fn is_complete(f: &Fan) -> bool {
    let n = f.rank();
    if n == 0 {
        return true;
    }
    let maximal = f.maximal_cones();
    if maximal.iter().any(|c| c.dim() != n) {
        return false;
    }
    let top: Vec<&Cone> = f.cones_of_dim(n).collect();
    if top.is_empty() {
        return false;
    }
    for wall in f.cones_of_dim(n - 1) {
        if top.iter().filter(|t| wall.is_face_of(t)).count() != 2 {
            return false;
        }
    }
    let mut directions: Vec<IntVector> = Vec::new();
    for (i, r) in f.rays().iter().enumerate() {
        directions.push(r.clone());
        directions.push(r.iter().map(|x| -x).collect());
        for s in &f.rays()[i + 1..] {
            let sum: IntVector = r.iter().zip(s).map(|(a, b)| a + b).collect();
            if !is_zero(&sum) {
                directions.push(sum.iter().map(|x| -x).collect());
                directions.push(sum);
            }
        }
    }
    directions.iter().all(|d| top.iter().any(|t| f.cone_contains_point(t, d)))
}

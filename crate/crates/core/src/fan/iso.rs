use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use super::{quotient_fan, Cone, Fan};
use crate::lattice::{integer_kernel, integral, rational_inverse, right_inverse, saturate, IntMatrix, IntVector};

/// A lattice automorphism carrying one fan onto another, with the induced
/// pairing of rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanIso {
    pub lattice_iso: IntMatrix,
    /// `ray_bijection[i]` is the target ray matched with source ray `i`.
    pub ray_bijection: Vec<usize>,
}

impl FanIso {
    pub fn identity(f: &Fan) -> Self {
        FanIso { lattice_iso: IntMatrix::identity(f.rank()), ray_bijection: (0..f.rays().len()).collect() }
    }

    pub fn map_cone(&self, c: &Cone) -> Cone {
        Cone::new(c.rays().iter().map(|&i| self.ray_bijection[i]))
    }

    /// Checks that this is an isomorphism `f → g`.
    pub fn verify(&self, f: &Fan, g: &Fan) -> bool {
        let n = f.rank();
        if g.rank() != n
            || self.lattice_iso.rows() != n
            || self.lattice_iso.cols() != n
            || !self.lattice_iso.is_unimodular()
            || self.ray_bijection.len() != f.rays().len()
            || g.rays().len() != f.rays().len()
            || f.num_cones() != g.num_cones()
        {
            return false;
        }
        let targets: BTreeSet<usize> = self.ray_bijection.iter().copied().collect();
        if targets.len() != g.rays().len() || targets.iter().any(|&j| j >= g.rays().len()) {
            return false;
        }
        let rays_match =
            f.rays().iter().zip(&self.ray_bijection).all(|(r, &j)| self.lattice_iso.apply(r) == g.rays()[j]);
        rays_match && f.cones().all(|c| g.contains(&self.map_cone(c)))
    }
}

/// Builds the fan isomorphism induced by a lattice map, if it is one.
pub fn induced_iso(f: &Fan, g: &Fan, lattice_iso: IntMatrix) -> Option<FanIso> {
    if lattice_iso.rows() != g.rank() || lattice_iso.cols() != f.rank() {
        return None;
    }
    let ray_bijection = f.rays().iter().map(|r| g.ray_index(&lattice_iso.apply(r))).collect::<Option<Vec<_>>>()?;
    let iso = FanIso { lattice_iso, ray_bijection };
    iso.verify(f, g).then_some(iso)
}

/// Verifies `via` when given; otherwise searches for an isomorphism `f → g`.
///
/// The search tries the identity first, then maps a maximal-dimensional cone
/// (or an independent set of rays) of `f` onto candidates in `g` and extends
/// to the whole lattice through adapted bases of the ray spans.
pub fn fan_isomorphic(f: &Fan, g: &Fan, via: Option<&FanIso>) -> Option<FanIso> {
    if let Some(iso) = via {
        return iso.verify(f, g).then(|| iso.clone());
    }
    if f.rank() != g.rank() || f.rays().len() != g.rays().len() || f.num_cones() != g.num_cones() {
        return None;
    }
    if let Some(iso) = induced_iso(f, g, IntMatrix::identity(f.rank())) {
        return Some(iso);
    }
    let dims = |h: &Fan| {
        let mut d: Vec<usize> = h.cones().map(Cone::dim).collect();
        d.sort_unstable();
        d
    };
    if dims(f) != dims(g) {
        return None;
    }
    search(f, g)
}

struct Adapted {
    basis: IntMatrix,
    inverse: IntMatrix,
    span_rank: usize,
    coords: Vec<IntVector>,
}

/// A unimodular basis whose first columns span the saturated ray span.
fn adapted(f: &Fan) -> Adapted {
    let n = f.rank();
    let span = saturate(&IntMatrix::from_rows(n, f.rays()));
    let r = span.rows();
    let projection = integer_kernel(&span);
    let section = right_inverse(&projection).expect("annihilator of a saturated lattice is onto");
    let mut columns = span.row_vectors();
    for j in 0..section.cols() {
        columns.push(section.column(j));
    }
    let basis = IntMatrix::from_columns(n, &columns);
    let inverse = integral(&rational_inverse(&basis).expect("adapted basis is invertible"), n)
        .expect("adapted basis is unimodular");
    let coords = f
        .rays()
        .iter()
        .map(|v| {
            let full = inverse.apply(v);
            debug_assert!(full[r..].iter().all(Zero::is_zero));
            full[..r].to_vec()
        })
        .collect();
    Adapted { basis, inverse, span_rank: r, coords }
}

fn search(f: &Fan, g: &Fan) -> Option<FanIso> {
    let n = f.rank();
    let af = adapted(f);
    let ag = adapted(g);
    let r = af.span_rank;
    if ag.span_rank != r {
        return None;
    }

    let anchor_cone = f.cones_of_dim(r).next().cloned();
    let anchor: Vec<usize> = match &anchor_cone {
        Some(c) => c.rays().to_vec(),
        None => independent_rays(&af.coords, r),
    };

    let mut tuples: Vec<Vec<usize>> = Vec::new();
    if anchor_cone.is_some() {
        for c in g.cones_of_dim(r) {
            permutations(c.rays(), &mut tuples);
        }
    } else {
        ordered_tuples(g.rays().len(), r, &mut tuples);
    }

    let source = IntMatrix::from_columns(r, &anchor.iter().map(|&i| af.coords[i].clone()).collect::<Vec<_>>());
    let source_inv = rational_inverse(&source)?;
    for t in tuples {
        let target = IntMatrix::from_columns(r, &t.iter().map(|&j| ag.coords[j].clone()).collect::<Vec<_>>());
        let Some(local) = rational_product(&target, &source_inv, r) else { continue };
        if !local.is_unimodular() {
            continue;
        }
        let mut block = IntMatrix::identity(n);
        for i in 0..r {
            for j in 0..r {
                block[(i, j)] = local[(i, j)].clone();
            }
        }
        let lattice_iso = &(&ag.basis * &block) * &af.inverse;
        if let Some(iso) = induced_iso(f, g, lattice_iso) {
            return Some(iso);
        }
    }
    None
}

fn rational_product(a: &IntMatrix, b_inv: &[Vec<BigRational>], r: usize) -> Option<IntMatrix> {
    let rows: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    (0..r).fold(BigRational::zero(), |acc, k| {
                        acc + BigRational::from_integer(a[(i, k)].clone()) * &b_inv[k][j]
                    })
                })
                .collect()
        })
        .collect();
    integral(&rows, r)
}

fn independent_rays(coords: &[IntVector], r: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..coords.len() {
        if chosen.len() == r {
            break;
        }
        let mut trial: Vec<IntVector> = chosen.iter().map(|&k| coords[k].clone()).collect();
        trial.push(coords[i].clone());
        if IntMatrix::from_rows(r, &trial).rank() == trial.len() {
            chosen.push(i);
        }
    }
    chosen
}

fn permutations(items: &[usize], out: &mut Vec<Vec<usize>>) {
    fn go(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            prefix.push(x);
            go(rest, prefix, out);
            prefix.pop();
            rest.insert(k, x);
        }
    }
    go(&mut items.to_vec(), &mut Vec::new(), out);
}

fn ordered_tuples(n: usize, r: usize, out: &mut Vec<Vec<usize>>) {
    fn go(n: usize, r: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == r {
            out.push(prefix.clone());
            return;
        }
        for j in 0..n {
            if !prefix.contains(&j) {
                prefix.push(j);
                go(n, r, prefix, out);
                prefix.pop();
            }
        }
    }
    go(n, r, &mut Vec::new(), out);
}

/// Checks `(Σ/σ)/(τ/⟨σ⟩) ≅ Σ/τ` for `σ ⊆ τ` through the lattice map induced by
/// composing the two quotient projections. Returns the isomorphism or a
/// description of what failed.
pub fn quotient_functoriality(f: &Fan, sigma: &Cone, tau: &Cone) -> Result<FanIso, String> {
    if !sigma.is_face_of(tau) {
        return Err(format!("{sigma} is not a face of {tau}"));
    }
    let first = quotient_fan(f, sigma).map_err(|e| e.to_string())?;
    let image = first.cone_map.get(tau).ok_or_else(|| format!("{tau} not in star of {sigma}"))?;
    let second = quotient_fan(&first.fan, image).map_err(|e| e.to_string())?;
    let direct = quotient_fan(f, tau).map_err(|e| e.to_string())?;

    let composed = first.quotient.then(&second.quotient);
    let u = composed
        .comparison(&direct.quotient)
        .ok_or_else(|| format!("composed projection for {sigma} ⊆ {tau} has the wrong kernel"))?;
    if !u.is_unimodular() {
        return Err(format!("induced map for {sigma} ⊆ {tau} is not unimodular"));
    }
    induced_iso(&second.fan, &direct.fan, u)
        .ok_or_else(|| format!("induced map does not carry (Σ/{sigma})/({tau}/⟨{sigma}⟩) onto Σ/{tau}"))
}

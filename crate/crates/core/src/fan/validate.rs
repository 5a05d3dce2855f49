use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Cone, Fan};
use crate::lattice::{content, integer_kernel, IntMatrix, IntVector};

/// A single reason a fan fails the fan axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    RayLength {
        ray: usize,
        expected: usize,
        found: usize,
    },
    ZeroRay {
        ray: usize,
    },
    NonPrimitiveRay {
        ray: usize,
    },
    DuplicateRays {
        first: usize,
        second: usize,
    },
    RayIndexOutOfRange {
        cone: Cone,
        index: usize,
    },
    MissingZeroCone,
    MissingFace {
        cone: Cone,
        face: Cone,
    },
    DependentRays {
        cone: Cone,
    },
    /// The two cones meet outside their common face; `witness` lies in both.
    Intersection {
        first: Cone,
        second: Cone,
        witness: IntVector,
    },
    UnusedRay {
        ray: usize,
    },
}

impl FanViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            FanViolation::RayLength { .. } => "ray_length",
            FanViolation::ZeroRay { .. } => "zero_ray",
            FanViolation::NonPrimitiveRay { .. } => "non_primitive_ray",
            FanViolation::DuplicateRays { .. } => "duplicate_rays",
            FanViolation::RayIndexOutOfRange { .. } => "ray_index_out_of_range",
            FanViolation::MissingZeroCone => "missing_zero_cone",
            FanViolation::MissingFace { .. } => "missing_face",
            FanViolation::DependentRays { .. } => "dependent_rays",
            FanViolation::Intersection { .. } => "intersection",
            FanViolation::UnusedRay { .. } => "unused_ray",
        }
    }

    pub(crate) fn summarize(all: &[FanViolation]) -> String {
        all.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
    }
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanViolation::RayLength { ray, expected, found } => {
                write!(f, "ray {ray} has {found} entries, expected {expected}")
            }
            FanViolation::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            FanViolation::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            FanViolation::DuplicateRays { first, second } => {
                write!(f, "rays {first} and {second} are equal")
            }
            FanViolation::RayIndexOutOfRange { cone, index } => {
                write!(f, "cone {cone} refers to missing ray {index}")
            }
            FanViolation::MissingZeroCone => write!(f, "zero cone missing"),
            FanViolation::MissingFace { cone, face } => write!(f, "cone {cone} is missing face {face}"),
            FanViolation::DependentRays { cone } => write!(f, "rays of cone {cone} are linearly dependent"),
            FanViolation::Intersection { first, second, witness } => {
                let w: Vec<String> = witness.iter().map(ToString::to_string).collect();
                write!(f, "cones {first} and {second} meet at ({}) outside their common face", w.join(" "))
            }
            FanViolation::UnusedRay { ray } => write!(f, "ray {ray} is in no cone"),
        }
    }
}

/// Checks the fan axioms and returns every violation found (empty = valid).
pub fn validate_fan(f: &Fan) -> Vec<FanViolation> {
    let mut out = Vec::new();
    let n = f.rank();

    let mut shape_ok = true;
    for (i, r) in f.rays().iter().enumerate() {
        if r.len() != n {
            out.push(FanViolation::RayLength { ray: i, expected: n, found: r.len() });
            shape_ok = false;
            continue;
        }
        let g = content(r);
        if g.is_zero() {
            out.push(FanViolation::ZeroRay { ray: i });
        } else if !g.is_one() {
            out.push(FanViolation::NonPrimitiveRay { ray: i });
        }
    }
    let mut first_seen: HashMap<&IntVector, usize> = HashMap::new();
    for (i, r) in f.rays().iter().enumerate() {
        if let Some(&j) = first_seen.get(r) {
            out.push(FanViolation::DuplicateRays { first: j, second: i });
        } else {
            first_seen.insert(r, i);
        }
    }

    let mut indices_ok = true;
    for c in f.cones() {
        for &i in c.rays() {
            if i >= f.rays().len() {
                out.push(FanViolation::RayIndexOutOfRange { cone: c.clone(), index: i });
                indices_ok = false;
            }
        }
    }
    if !f.contains(&Cone::zero()) {
        out.push(FanViolation::MissingZeroCone);
    }
    for c in f.cones() {
        for face in c.facets() {
            if !f.contains(&face) {
                out.push(FanViolation::MissingFace { cone: c.clone(), face });
            }
        }
    }
    let mut used = vec![false; f.rays().len()];
    for c in f.cones() {
        for &i in c.rays() {
            if let Some(u) = used.get_mut(i) {
                *u = true;
            }
        }
    }
    for (i, u) in used.iter().enumerate() {
        if !u {
            out.push(FanViolation::UnusedRay { ray: i });
        }
    }
    if !shape_ok || !indices_ok {
        return out;
    }

    let mut independent = Vec::new();
    for c in f.cones() {
        let m = IntMatrix::from_rows(n, &f.generators(c));
        if m.rank() < c.dim() {
            out.push(FanViolation::DependentRays { cone: c.clone() });
        } else {
            independent.push(c.clone());
        }
    }

    // proper intersection of maximal cones implies it for all their faces
    let maximal: Vec<Cone> = f.maximal_cones().into_iter().filter(|c| independent.contains(c)).collect();
    for (a, c1) in maximal.iter().enumerate() {
        for c2 in &maximal[a + 1..] {
            if let Some(witness) = improper_intersection(f, c1, c2) {
                out.push(FanViolation::Intersection { first: c1.clone(), second: c2.clone(), witness });
            }
        }
    }
    out
}

/// Looks for an extreme ray of `cone(c1) ∩ cone(c2)` outside `cone(c1 ∩ c2)`.
///
/// Every extreme ray of the intersection of two simplicial cones spans
/// `span(F) ∩ span(G)` for some faces `F ⊆ c1`, `G ⊆ c2` with that span
/// one-dimensional, so it suffices to scan face pairs.
fn improper_intersection(f: &Fan, c1: &Cone, c2: &Cone) -> Option<IntVector> {
    let common = c1.intersection(c2);
    let n = f.rank();
    for face1 in c1.faces().into_iter().filter(|c| !c.is_zero()) {
        for face2 in c2.faces().into_iter().filter(|c| !c.is_zero()) {
            let mut columns = f.generators(&face1);
            columns.extend(f.generators(&face2).into_iter().map(|v| v.iter().map(|x| -x).collect()));
            let kernel = integer_kernel(&IntMatrix::from_columns(n, &columns));
            if kernel.rows() != 1 {
                continue;
            }
            let mut k = kernel.row(0).to_vec();
            if k.iter().any(|x| x.is_negative()) {
                if k.iter().any(|x| x.is_positive()) {
                    continue;
                }
                k.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            let (a, _) = k.split_at(face1.dim());
            let escapes = face1.rays().iter().zip(a).any(|(&i, coeff)| !coeff.is_zero() && !common.contains_ray(i));
            if escapes {
                let mut w = vec![num_bigint::BigInt::zero(); n];
                for (&i, coeff) in face1.rays().iter().zip(a) {
                    for (wj, rj) in w.iter_mut().zip(&f.rays()[i]) {
                        *wj += coeff * rj;
                    }
                }
                return Some(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lattice::int_vector;

    #[test]
    fn corpus_fans_are_valid() {
        for (name, f) in corpus::standard_fans() {
            assert_eq!(validate_fan(&f), vec![], "{name}");
        }
        assert!(validate_fan(&Fan::trivial(0)).is_empty());
    }

    #[test]
    fn interior_ray_is_an_intersection_violation() {
        let f = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1], &[2]]);
        let v = validate_fan(&f);
        assert_eq!(v.len(), 1);
        match &v[0] {
            FanViolation::Intersection { first, second, witness } => {
                assert_eq!((first, second), (&Cone::ray(2), &Cone::new([0, 1])));
                assert_eq!(witness, &int_vector(&[1, 1]));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn overlapping_two_cones() {
        // cone{(1,0),(1,2)} and cone{(0,1),(2,1)} overlap in their interiors
        let f = Fan::from_i64(2, &[&[1, 0], &[1, 2], &[0, 1], &[2, 1]], &[&[0, 1], &[2, 3]]);
        assert!(validate_fan(&f).iter().any(|v| v.kind() == "intersection"));
    }

    #[test]
    fn reports_structural_defects() {
        let f = Fan::new_unchecked(
            2,
            vec![int_vector(&[1, 0]), int_vector(&[1, 0]), int_vector(&[2, 2]), int_vector(&[0, 1])],
            [Cone::zero(), Cone::new([0, 3]), Cone::ray(1), Cone::ray(2)],
        );
        let kinds: Vec<&str> = validate_fan(&f).iter().map(FanViolation::kind).collect();
        assert!(kinds.contains(&"duplicate_rays"));
        assert!(kinds.contains(&"non_primitive_ray"));
        assert!(kinds.contains(&"missing_face"));

        let dep = Fan::from_i64(2, &[&[1, 0], &[-1, 0]], &[&[0, 1]]);
        assert!(validate_fan(&dep).iter().any(|v| v.kind() == "dependent_rays"));
    }
}

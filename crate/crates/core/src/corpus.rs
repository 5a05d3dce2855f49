//! Standard fans and a generator of random complete simplicial fans.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fan::{Cone, Fan};
use crate::lattice::{int_vector, primitive, IntMatrix, IntVector};

pub fn p1() -> Fan {
    Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]])
}

pub fn p2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
}

/// Rays `e1, e2, -e1, -e2`.
pub fn p1xp1() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])
}

/// Hirzebruch surface F₁.
pub fn f1() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])
}

pub fn p3() -> Fan {
    Fan::from_i64(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
        &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
    )
}

/// Rays `±e1, ±e2, ±e3` in the order `e1, e2, e3, -e1, -e2, -e3`.
pub fn p1xp1xp1() -> Fan {
    let mut maximal = Vec::new();
    for mask in 0..8usize {
        maximal.push(Cone::new((0..3).map(|k| if mask >> k & 1 == 1 { k + 3 } else { k })));
    }
    Fan::from_cones(
        3,
        vec![
            int_vector(&[1, 0, 0]),
            int_vector(&[0, 1, 0]),
            int_vector(&[0, 0, 1]),
            int_vector(&[-1, 0, 0]),
            int_vector(&[0, -1, 0]),
            int_vector(&[0, 0, -1]),
        ],
        maximal,
    )
}

/// The affine plane: one top cone and its faces.
pub fn a2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]])
}

pub fn a3() -> Fan {
    Fan::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[&[0, 1, 2]])
}

/// Every named fan, complete or not.
pub fn standard_fans() -> Vec<(&'static str, Fan)> {
    vec![
        ("p1", p1()),
        ("p2", p2()),
        ("p1xp1", p1xp1()),
        ("f1", f1()),
        ("p3", p3()),
        ("p1xp1xp1", p1xp1xp1()),
        ("a2", a2()),
        ("a3", a3()),
    ]
}

/// The complete members of [`standard_fans`].
pub fn complete_fans() -> Vec<(&'static str, Fan)> {
    standard_fans().into_iter().filter(|(name, _)| !name.starts_with('a')).collect()
}

/// Star subdivision of the fan at a lattice point in the relative interior of `sigma`.
pub fn stellar_subdivide(f: &Fan, sigma: &Cone, point: IntVector) -> Fan {
    let mut rays = f.rays().to_vec();
    let v = rays.len();
    rays.push(point);
    let mut maximal = Vec::new();
    for c in f.maximal_cones() {
        if sigma.is_face_of(&c) {
            for &drop in sigma.rays() {
                maximal.push(Cone::new(c.rays().iter().copied().filter(|&i| i != drop).chain([v])));
            }
        } else {
            maximal.push(c);
        }
    }
    Fan::from_cones(f.rank(), rays, maximal)
}

fn random_unimodular(rank: usize, rng: &mut impl Rng) -> IntMatrix {
    let mut u = IntMatrix::identity(rank);
    if rank < 2 {
        return u;
    }
    for _ in 0..rank {
        let i = rng.gen_range(0..rank);
        let mut j = rng.gen_range(0..rank - 1);
        if j >= i {
            j += 1;
        }
        let mut e = IntMatrix::identity(rank);
        e[(i, j)] = rng.gen_range(-1i64..=1).into();
        u = &e * &u;
    }
    u
}

/// A random complete simplicial fan of rank 2 or 3, built from P² / P¹×P¹
/// (rank 2) or P³ / (P¹)³ (rank 3) by a few random star subdivisions and a
/// random change of lattice basis.
pub fn random_complete_fan(rank: usize, rng: &mut impl Rng) -> Fan {
    let mut f = match (rank, rng.gen_bool(0.5)) {
        (2, true) => p2(),
        (2, false) => p1xp1(),
        (3, true) => p3(),
        (3, false) => p1xp1xp1(),
        _ => panic!("random fans are generated in rank 2 or 3 only"),
    };
    let steps = rng.gen_range(0..=3);
    for _ in 0..steps {
        let candidates: Vec<Cone> = f.cones().filter(|c| c.dim() >= 2).cloned().collect();
        let sigma = candidates.choose(rng).expect("complete fans of rank ≥ 2 have 2-cones").clone();
        let mut point = vec![num_bigint::BigInt::from(0); rank];
        for &i in sigma.rays() {
            let w: i64 = rng.gen_range(1..=2);
            for (p, r) in point.iter_mut().zip(&f.rays()[i]) {
                *p += r * w;
            }
        }
        let point = primitive(&point).expect("interior point of a nonzero cone");
        f = stellar_subdivide(&f, &sigma, point);
    }
    let u = random_unimodular(rank, rng);
    let rays = f.rays().iter().map(|r| u.apply(r)).collect();
    Fan::from_cones(rank, rays, f.maximal_cones())
}

/// `count` random complete fans alternating between rank 2 and rank 3.
pub fn random_complete_fans(count: usize, seed: u64) -> Vec<Fan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|k| random_complete_fan(2 + k % 2, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{is_complete, validate_fan};

    #[test]
    fn random_fans_are_complete_and_valid() {
        for f in random_complete_fans(20, 7) {
            assert_eq!(validate_fan(&f), vec![], "{f:?}");
            assert!(is_complete(&f), "{f:?}");
        }
    }

    #[test]
    fn subdivision_adds_a_ray() {
        let f = stellar_subdivide(&p2(), &Cone::new([0, 1]), int_vector(&[1, 1]));
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.cones_of_dim(2).count(), 4);
        assert!(is_complete(&f));
    }
}

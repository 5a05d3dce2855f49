use std::collections::BTreeSet;

use fanifold::corpus::{complete_fans, random_complete_fan};
use fanifold::fan::{face_poset, fan_isomorphic, is_complete, quotient_fan, star, wedge, Cone, Fan};
use fanifold::fanifold::{barycentric_cover, filtration, nerve, sphere_fanifold};
use fanifold::io::{emit_fan, emit_fanifold, load_fan, parse_fanifold};
use fanifold::lattice::{canonical_basis, perp_lattice, quotient_map, saturate, IntMatrix, IntVector};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Rank over Q by fraction-free elimination on i128.
fn oracle_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                let pivot = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot) {
                    *x = *x * a - p * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn big(rows: &[Vec<i64>]) -> Vec<IntVector> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn generators() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(-4i64..=4, n), 1..=3)))
}

/// A unimodular recombination built from elementary row operations.
fn recombine(rows: &[Vec<i64>], ops: &[(usize, usize, i64, bool)]) -> Vec<Vec<i64>> {
    let mut out = rows.to_vec();
    let k = out.len();
    for &(a, b, c, swap) in ops {
        let (a, b) = (a % k, b % k);
        if swap {
            out.swap(a, b);
        } else if a != b {
            let src = out[b].clone();
            out[a].iter_mut().zip(src).for_each(|(x, y)| *x += c * y);
        }
    }
    out
}

fn random_fan() -> impl Strategy<Value = Fan> {
    (any::<u64>(), 2usize..=3).prop_map(|(seed, rank)| random_complete_fan(rank, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_annihilates_and_counts_rank((n, rows) in generators()) {
        let q = quotient_map(n, &big(&rows));
        for g in big(&rows) {
            prop_assert!(q.apply(&g).iter().all(|x| *x == BigInt::from(0)));
        }
        prop_assert_eq!(q.target_rank + oracle_rank(&rows), n);
        prop_assert_eq!(perp_lattice(n, &big(&rows)).rank(), q.target_rank);
    }

    #[test]
    fn canonical_under_recombination(
        (n, rows) in generators(),
        ops in prop::collection::vec((0usize..3, 0usize..3, -3i64..=3, any::<bool>()), 0..8),
    ) {
        let other = recombine(&rows, &ops);
        prop_assert_eq!(quotient_map(n, &big(&rows)), quotient_map(n, &big(&other)));
        prop_assert_eq!(perp_lattice(n, &big(&rows)), perp_lattice(n, &big(&other)));
    }

    #[test]
    fn perp_of_perp_is_saturation((n, rows) in generators()) {
        let perp = perp_lattice(n, &big(&rows));
        let back = perp_lattice(n, &perp.basis.row_vectors());
        let sat = canonical_basis(&saturate(&IntMatrix::from_rows(n, &big(&rows))));
        prop_assert_eq!(back.basis, sat);
    }

    #[test]
    fn larger_sublattice_factors((n, rows) in generators(), extra in prop::collection::vec(-4i64..=4, 4)) {
        let a = quotient_map(n, &big(&rows));
        let mut more = rows.clone();
        more.push(extra[..n].to_vec());
        let b = quotient_map(n, &big(&more));
        let through = a.factor_through(&b).expect("ker a ⊆ ker b");
        prop_assert_eq!(a.then(&through).canonical(), b.canonical());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wedge_is_least_common_star(f in random_fan()) {
        let cones: Vec<&Cone> = f.cones().collect();
        for s in &cones {
            for t in &cones {
                let both: Vec<Cone> = star(&f, s).unwrap().into_iter().filter(|c| t.is_face_of(c)).collect();
                let w = wedge(&f, s, t);
                prop_assert_eq!(w.is_some(), !both.is_empty());
                if let Some(w) = &w {
                    prop_assert!(both.iter().all(|c| w.is_face_of(c)));
                    prop_assert!(both.contains(w));
                    for bigger in cones.iter().filter(|b| s.is_face_of(b)) {
                        if let Some(w2) = wedge(&f, bigger, t) {
                            prop_assert!(w.is_face_of(&w2));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotients_are_complete_and_match_stars(f in random_fan()) {
        let whole = face_poset(&f);
        for sigma in f.cones() {
            let q = quotient_fan(&f, sigma).unwrap();
            prop_assert!(is_complete(&q.fan));
            let st = star(&f, sigma).unwrap();
            let qp = face_poset(&q.fan);
            prop_assert_eq!(st.len(), qp.cones.len());
            for a in &st {
                for b in &st {
                    let ia = qp.index_of(&q.cone_map[a]).unwrap();
                    let ib = qp.index_of(&q.cone_map[b]).unwrap();
                    let (wa, wb) = (whole.index_of(a).unwrap(), whole.index_of(b).unwrap());
                    prop_assert_eq!(qp.poset.leq(ia, ib), whole.poset.leq(wa, wb));
                }
            }
        }
    }

    #[test]
    fn documents_round_trip(f in random_fan()) {
        let text = emit_fan(&f, None);
        prop_assert_eq!(&load_fan(&text).unwrap(), &f);
        prop_assert_eq!(emit_fan(&load_fan(&text).unwrap(), None), text);
        let phi = sphere_fanifold(&f).unwrap();
        prop_assert_eq!(parse_fanifold(&emit_fanifold(&phi)).unwrap(), phi);
    }

    #[test]
    fn nerve_recovers_the_fan(f in random_fan()) {
        check_nerve(&f)?;
    }

    #[test]
    fn filtration_exhausts(f in random_fan()) {
        let phi = sphere_fanifold(&f).unwrap();
        let fl = filtration(&phi);
        for (k, level) in fl.levels.iter().enumerate() {
            let expected: BTreeSet<&str> = phi.strata().filter(|s| s.dim <= k).map(|s| s.id.as_str()).collect();
            let got: BTreeSet<&str> = level.strata().map(|s| s.id.as_str()).collect();
            prop_assert_eq!(got, expected);
        }
        prop_assert_eq!(fl.levels.last().unwrap(), &phi);
        prop_assert_eq!(fl.replay(phi.dim, phi.closed), phi);
    }
}

fn check_nerve(f: &Fan) -> Result<(), TestCaseError> {
    let phi = sphere_fanifold(f).unwrap();
    let n = nerve(&barycentric_cover(&phi).unwrap(), &phi);
    let ray_of = |v: usize| -> usize { n.vertices[v][1..].parse().unwrap() };
    let from_nerve: BTreeSet<Cone> =
        n.simplices.iter().map(|s| Cone::new(s.vertices.iter().map(|&v| ray_of(v)))).collect();
    let from_fan: BTreeSet<Cone> = f.nonzero_cones().cloned().collect();
    prop_assert_eq!(from_nerve, from_fan);

    // the label of a simplex is the quotient of any vertex's skeleton fan by the image of its cone
    for s in &n.simplices {
        let sigma = s.base_cone.clone().unwrap();
        prop_assert_eq!(&sigma, &Cone::new(s.vertices.iter().map(|&v| ray_of(v))));
        let vertex = ray_of(s.vertices[0]);
        let qv = quotient_fan(f, &Cone::ray(vertex)).unwrap();
        let iterated = quotient_fan(&qv.fan, &qv.cone_map[&sigma]).unwrap().fan;
        prop_assert!(fan_isomorphic(&iterated, s.fan.as_ref().unwrap(), None).is_some());
    }
    Ok(())
}

#[test]
fn corpus_nerves_recover_their_fans() {
    for (_, f) in complete_fans() {
        check_nerve(&f).unwrap();
    }
}

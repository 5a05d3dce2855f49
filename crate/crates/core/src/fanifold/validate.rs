use std::collections::BTreeMap;

use super::{ExitArrow, Fanifold};
use crate::fan::{induced_iso, quotient_fan, validate_fan, Cone, FanIso, QuotientFan};
use crate::report::{all_passed, Clause};

#[derive(Clone, Debug)]
pub struct FanifoldReport {
    pub clauses: Vec<Clause>,
}

impl FanifoldReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.clauses)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

fn arrow_name(a: &ExitArrow) -> String {
    format!("{} -> {}", a.source, a.target)
}

/// The quotient of the source fan by the arrow's cone, and the isomorphism
/// onto the target fan induced by the arrow's lattice map.
fn arrow_quotient(phi: &Fanifold, a: &ExitArrow) -> Result<(QuotientFan, FanIso), String> {
    let src = phi.stratum(&a.source).expect("endpoints checked on construction");
    let tgt = phi.stratum(&a.target).expect("endpoints checked on construction");
    let lm = &a.lattice_map;
    if lm.source_rank != src.lattice_rank || lm.target_rank != tgt.lattice_rank {
        return Err(format!(
            "{}: lattice map is {}x{} but strata have ranks {} and {}",
            arrow_name(a),
            lm.projection.rows(),
            lm.projection.cols(),
            src.lattice_rank,
            tgt.lattice_rank
        ));
    }
    if let Some(d) = lm.defect() {
        return Err(format!("{}: lattice map {} is not a quotient ({d:?})", arrow_name(a), lm.projection));
    }
    let q = quotient_fan(&src.normal_fan, &a.cone).map_err(|e| format!("{}: {e}", arrow_name(a)))?;
    let u = q.quotient.comparison(lm).ok_or_else(|| {
        format!("{}: lattice map {} does not have kernel sat⟨{}⟩", arrow_name(a), lm.projection, a.cone)
    })?;
    let iso = induced_iso(&q.fan, &tgt.normal_fan, u).ok_or_else(|| {
        format!("{}: Σ_source/{} is not carried onto Σ_target by the lattice map", arrow_name(a), a.cone)
    })?;
    Ok((q, iso))
}

/// Checks the fanifold conditions and reports each failure with a witness:
/// quotient condition per arrow, the composition square, the exit-poset
/// condition per stratum, and dimension bookkeeping.
pub fn validate_fanifold(phi: &Fanifold) -> FanifoldReport {
    let mut fans = Vec::new();
    let mut dims = Vec::new();
    for s in phi.strata() {
        let v = validate_fan(&s.normal_fan);
        if !v.is_empty() {
            fans.push(format!("{}: {}", s.id, v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")));
        }
        if s.lattice_rank != s.normal_fan.rank() {
            dims.push(format!("{}: lattice rank {} but normal fan rank {}", s.id, s.lattice_rank, s.normal_fan.rank()));
        }
        if s.dim + s.lattice_rank != phi.dim {
            dims.push(format!("{}: dim {} + rank {} != {}", s.id, s.dim, s.lattice_rank, phi.dim));
        }
    }
    for a in phi.arrows() {
        let (src, tgt) = (phi.stratum(&a.source).unwrap(), phi.stratum(&a.target).unwrap());
        if tgt.dim <= src.dim {
            dims.push(format!("{}: exit arrow does not increase dimension", arrow_name(a)));
        }
    }

    let mut quotient = Vec::new();
    let mut induced: BTreeMap<(String, String), (QuotientFan, FanIso)> = BTreeMap::new();
    for a in phi.arrows() {
        match arrow_quotient(phi, a) {
            Ok(data) => {
                induced.insert((a.source.clone(), a.target.clone()), data);
            }
            Err(w) => quotient.push(w),
        }
    }

    let mut composition = Vec::new();
    for first in phi.arrows() {
        for second in phi.arrows_from(&first.target) {
            let Some(direct) = phi.arrow(&first.source, &second.target) else {
                composition.push(format!(
                    "{} and {} compose but there is no arrow {} -> {}",
                    arrow_name(first),
                    arrow_name(second),
                    first.source,
                    second.target
                ));
                continue;
            };
            let composed = &second.lattice_map.projection * &first.lattice_map.projection;
            if composed != direct.lattice_map.projection {
                composition.push(format!(
                    "{}: composite lattice map {} differs from {}",
                    arrow_name(direct),
                    composed,
                    direct.lattice_map.projection
                ));
            }
            if !first.cone.is_face_of(&direct.cone) {
                composition.push(format!(
                    "{}: cone {} does not contain {}",
                    arrow_name(direct),
                    direct.cone,
                    first.cone
                ));
                continue;
            }
            if let Some((q, iso)) = induced.get(&(first.source.clone(), first.target.clone())) {
                if let Some(image) = q.cone_map.get(&direct.cone) {
                    let transported = iso.map_cone(image);
                    if transported != second.cone {
                        composition.push(format!(
                            "{}: cone {} maps to {} in {}, expected {}",
                            arrow_name(direct),
                            direct.cone,
                            transported,
                            first.target,
                            second.cone
                        ));
                    }
                }
            }
        }
    }

    let mut exit = Vec::new();
    for s in phi.strata() {
        let out: Vec<&ExitArrow> = phi.arrows_from(&s.id).collect();
        let mut seen: BTreeMap<&Cone, &str> = BTreeMap::new();
        for a in &out {
            if a.cone.is_zero() {
                exit.push(format!("{}: labelled by the zero cone", arrow_name(a)));
            }
            if let Some(other) = seen.insert(&a.cone, &a.target) {
                exit.push(format!("{}: cone {} also labels the arrow to {}", arrow_name(a), a.cone, other));
            }
        }
        for c in s.normal_fan.nonzero_cones() {
            if !seen.contains_key(c) {
                exit.push(format!("{}: no exit arrow for cone {} of its normal fan", s.id, c));
            }
        }
        for a in &out {
            for b in &out {
                let cones = a.cone.is_face_of(&b.cone);
                let strata = phi.exits_to(&a.target, &b.target);
                if cones != strata {
                    exit.push(format!(
                        "{}: {} ⊆ {} is {cones} but {} ≤ {} is {strata}",
                        s.id, a.cone, b.cone, a.target, b.target
                    ));
                }
            }
        }
    }

    FanifoldReport {
        clauses: vec![
            Clause::new("normal_fans", fans),
            Clause::new("quotient", quotient),
            Clause::new("composition", composition),
            Clause::new("exit_poset", exit),
            Clause::new("dimensions", dims),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fan::Fan;
    use crate::fanifold::{sphere_fanifold, Stratum};
    use crate::lattice::{IntMatrix, QuotientMap};

    #[test]
    fn sphere_fanifolds_validate() {
        for (name, f) in corpus::complete_fans() {
            let r = validate_fanifold(&sphere_fanifold(&f).unwrap());
            assert!(r.passed(), "{name}: {:?}", r.clauses);
        }
    }

    #[test]
    fn corrupted_matrix_fails_quotient_clause() {
        let mut phi = sphere_fanifold(&corpus::p2()).unwrap();
        let a = phi.arrow_mut("s0", "s0_1").unwrap();
        a.lattice_map = QuotientMap::from_projection(IntMatrix::from_i64(1, &[&[2]]));
        let r = validate_fanifold(&phi);
        assert!(!r.clause("quotient").unwrap().passed);
        assert!(r.clause("quotient").unwrap().witnesses[0].contains("s0 -> s0_1"));

        let mut phi = sphere_fanifold(&corpus::p3()).unwrap();
        let a = phi.arrow_mut("s0", "s0_1").unwrap();
        let mut p = a.lattice_map.projection.clone();
        p[(0, 0)] = &p[(0, 0)] * 2 + 1;
        a.lattice_map = QuotientMap::from_projection(p);
        let r = validate_fanifold(&phi);
        assert!(!r.clause("quotient").unwrap().passed, "{:?}", r.clauses);
    }

    #[test]
    fn vertex_on_a_line() {
        let point = Stratum::new("v", 0, corpus::p1());
        let left = Stratum::new("l", 1, Fan::trivial(0));
        let right = Stratum::new("r", 1, Fan::trivial(0));
        let to = |t: &str, ray: usize| ExitArrow {
            source: "v".into(),
            target: t.into(),
            cone: Cone::ray(ray),
            lattice_map: QuotientMap::from_projection(IntMatrix::zeros(0, 1)),
        };
        let phi = Fanifold::new(1, vec![point, left, right], vec![to("r", 0), to("l", 1)], false).unwrap();
        let r = validate_fanifold(&phi);
        assert!(r.passed(), "{:?}", r.clauses);
    }

    #[test]
    fn missing_arrow_breaks_exit_poset() {
        let point = Stratum::new("v", 0, corpus::p1());
        let right = Stratum::new("r", 1, Fan::trivial(0));
        let a = ExitArrow {
            source: "v".into(),
            target: "r".into(),
            cone: Cone::ray(0),
            lattice_map: QuotientMap::from_projection(IntMatrix::zeros(0, 1)),
        };
        let phi = Fanifold::new(1, vec![point, right], vec![a], false).unwrap();
        let r = validate_fanifold(&phi);
        assert!(!r.clause("exit_poset").unwrap().passed);
    }
}

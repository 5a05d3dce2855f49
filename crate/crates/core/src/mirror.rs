//! Orbit-closure gluing diagrams and the matcher comparing them with the
//! diagrams read off a fanifold and off the nerve of its sectorial cover.
//!
//! A toric variety is represented by its fan alone. A diagram is indexed by a
//! poset; for `σ ≤ τ` it carries the cone `τ/⟨σ⟩` of the fan at `σ` and the
//! lattice surjection between the two objects, i.e. the closed immersion
//! `O(τ)̄ ↪ O(σ)̄` read in the opposite direction.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{
    fan_isomorphic, induced_iso, quotient_fan, relative_quotient, validate_fan, wedge, Cone, Fan, FanIso,
};
use crate::fanifold::{Fanifold, Nerve};
use crate::lattice::{right_inverse, QuotientMap};
use crate::poset::Poset;
use crate::report::{all_passed, Clause};

/// `O(σ)̄`, the toric variety of `Σ/σ`.
#[derive(Clone, Debug)]
pub struct OrbitClosure {
    pub cone: Cone,
    pub fan: Fan,
    pub quotient: QuotientMap,
}

pub fn orbit_closure(f: &Fan, sigma: &Cone) -> Result<OrbitClosure> {
    let q = quotient_fan(f, sigma)?;
    Ok(OrbitClosure { cone: sigma.clone(), fan: q.fan, quotient: q.quotient })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramObject {
    pub label: String,
    pub base_cone: Option<Cone>,
    pub fan: Fan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramArrow {
    pub cone: Cone,
    pub map: QuotientMap,
}

#[derive(Clone, Debug)]
pub struct GluingDiagram {
    pub objects: Vec<DiagramObject>,
    pub order: Poset,
    /// Keyed by `(σ, τ)` with `σ < τ`.
    pub arrows: BTreeMap<(usize, usize), DiagramArrow>,
    /// The fan whose cones index the diagram, when there is one.
    pub base_fan: Option<Fan>,
}

impl GluingDiagram {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.label == label)
    }

    /// Every strict comparison has an arrow, and arrows compose.
    pub fn coherence(&self) -> Vec<String> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.order.lt(a, b) != self.arrows.contains_key(&(a, b)) {
                    out.push(format!(
                        "{} < {} is {} but arrow present is {}",
                        self.objects[a].label,
                        self.objects[b].label,
                        self.order.lt(a, b),
                        self.arrows.contains_key(&(a, b))
                    ));
                }
            }
        }
        for (&(a, b), first) in &self.arrows {
            for c in (0..n).filter(|&c| self.order.lt(b, c)) {
                let (Some(second), Some(direct)) = (self.arrows.get(&(b, c)), self.arrows.get(&(a, c))) else {
                    continue;
                };
                let composed = first.map.then(&second.map).canonical();
                if composed != direct.map.canonical() {
                    out.push(format!(
                        "{} -> {} -> {} composes to {}, direct arrow is {}",
                        self.objects[a].label,
                        self.objects[b].label,
                        self.objects[c].label,
                        composed.projection,
                        direct.map.projection
                    ));
                }
            }
        }
        out
    }
}

/// The presentation of `∂T_Σ` as a colimit of orbit closures over the
/// nonzero cones of `f`.
pub fn boundary_diagram(f: &Fan) -> Result<GluingDiagram> {
    let violations = validate_fan(f);
    if !violations.is_empty() {
        return Err(Error::InvalidFan(violations));
    }
    let cones: Vec<Cone> = f.nonzero_cones().cloned().collect();
    if cones.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let mut objects = Vec::with_capacity(cones.len());
    for c in &cones {
        let o = orbit_closure(f, c)?;
        objects.push(DiagramObject { label: c.to_string(), base_cone: Some(o.cone), fan: o.fan });
    }
    let order = Poset::from_relation(cones.len(), |a, b| cones[a].is_face_of(&cones[b]));
    let mut arrows = BTreeMap::new();
    for a in 0..cones.len() {
        for b in (0..cones.len()).filter(|&b| order.lt(a, b)) {
            let (cone, map) = relative_quotient(f, &cones[a], &cones[b])?;
            arrows.insert((a, b), DiagramArrow { cone, map });
        }
    }
    Ok(GluingDiagram { objects, order, arrows, base_fan: Some(f.clone()) })
}

/// `O(σ)̄ ∩ O(σ′)̄`, as the index of `σ ∧ σ′`; `None` when the closures are disjoint.
pub fn orbit_intersection(d: &GluingDiagram, s1: usize, s2: usize) -> Option<usize> {
    if let (Some(f), Some(c1), Some(c2)) = (&d.base_fan, &d.objects[s1].base_cone, &d.objects[s2].base_cone) {
        let w = wedge(f, c1, c2)?;
        return d.objects.iter().position(|o| o.base_cone.as_ref() == Some(&w));
    }
    let upper: Vec<usize> = (0..d.len()).filter(|&t| d.order.leq(s1, t) && d.order.leq(s2, t)).collect();
    let least = d.order.minimal_elements(&upper);
    match least.as_slice() {
        [one] => Some(*one),
        _ => None,
    }
}

/// The presentation of `T(Φ)` over the exit poset, with arrows read off the
/// exit arrows.
pub fn fanifold_bside(phi: &Fanifold) -> GluingDiagram {
    let strata: Vec<_> = phi.strata().collect();
    let objects = strata
        .iter()
        .map(|s| DiagramObject { label: s.id.clone(), base_cone: s.base_cone.clone(), fan: s.normal_fan.clone() })
        .collect();
    let order = Poset::from_relation(strata.len(), |a, b| phi.exits_to(&strata[a].id, &strata[b].id));
    let mut arrows = BTreeMap::new();
    for (a, s) in strata.iter().enumerate() {
        for (b, t) in strata.iter().enumerate() {
            if let Some(e) = phi.arrow(&s.id, &t.id) {
                arrows.insert((a, b), DiagramArrow { cone: e.cone.clone(), map: e.lattice_map.clone() });
            }
        }
    }
    GluingDiagram { objects, order, arrows, base_fan: None }
}

/// Nerve simplices under face inclusion, each carrying the skeleton fan of
/// its minimal carrier.
pub fn nerve_diagram(n: &Nerve) -> GluingDiagram {
    let objects = n
        .simplices
        .iter()
        .map(|s| DiagramObject {
            label: s.vertices.iter().map(|&v| n.vertices[v].as_str()).collect::<Vec<_>>().join("+"),
            base_cone: s.base_cone.clone(),
            fan: s.fan.clone().unwrap_or_else(|| Fan::trivial(0)),
        })
        .collect();
    GluingDiagram { objects, order: n.face_poset(), arrows: BTreeMap::new(), base_fan: None }
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectMatch {
    pub a: String,
    pub b: String,
    pub matched: bool,
    pub witness: Option<String>,
    #[serde(skip)]
    pub iso: Option<FanIso>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub poset_iso: Option<Vec<usize>>,
    pub object_matches: Vec<ObjectMatch>,
    pub clauses: Vec<Clause>,
    pub verdict: bool,
}

fn finish(poset_iso: Option<Vec<usize>>, object_matches: Vec<ObjectMatch>, clauses: Vec<Clause>) -> MatchReport {
    let verdict = all_passed(&clauses);
    MatchReport { poset_iso, object_matches, clauses, verdict }
}

fn keyed_candidate<K: Ord>(
    a: &GluingDiagram,
    b: &GluingDiagram,
    key: impl Fn(&DiagramObject) -> Option<K>,
) -> Option<Vec<usize>> {
    let index: BTreeMap<K, usize> = b.objects.iter().enumerate().filter_map(|(j, o)| Some((key(o)?, j))).collect();
    if index.len() != b.len() {
        return None;
    }
    a.objects.iter().map(|o| index.get(&key(o)?).copied()).collect()
}

fn same_shape(f: &Fan, g: &Fan) -> bool {
    f.rank() == g.rank() && f.rays().len() == g.rays().len() && f.num_cones() == g.num_cones()
}

/// Finds the index bijection: the canonical candidate by base cone, then by
/// label, then a search among fan-compatible pairs.
fn index_iso(a: &GluingDiagram, b: &GluingDiagram) -> Option<Vec<usize>> {
    let canonical = [keyed_candidate(a, b, |o| o.base_cone.clone()), keyed_candidate(a, b, |o| Some(o.label.clone()))];
    canonical
        .into_iter()
        .flatten()
        .find(|m| a.order.is_isomorphism(&b.order, m))
        .or_else(|| a.order.find_isomorphism(&b.order, |i, j| same_shape(&a.objects[i].fan, &b.objects[j].fan)))
}

fn match_diagrams(a: &GluingDiagram, b: &GluingDiagram, with_arrows: bool) -> MatchReport {
    if a.len() != b.len() {
        let w = format!("poset cardinality {} vs {}", a.len(), b.len());
        return finish(None, vec![], vec![Clause::new("poset", vec![w])]);
    }
    let Some(map) = index_iso(a, b) else {
        return finish(None, vec![], vec![Clause::new("poset", vec!["no order isomorphism".into()])]);
    };

    // lower objects first, so an arrow into an object can propose its iso
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by_key(|&i| (a.order.down_set(i).len(), i));
    let mut isos: Vec<Option<FanIso>> = vec![None; a.len()];
    for &k in &order {
        let (fa, fb) = (&a.objects[k].fan, &b.objects[map[k]].fan);
        let proposed = if with_arrows {
            a.arrows.iter().filter(|((_, t), _)| *t == k).find_map(|(&(s, _), arrow)| {
                let li = isos[s].as_ref()?;
                let other = b.arrows.get(&(map[s], map[k]))?;
                let section = right_inverse(&arrow.map.projection)?;
                let lk = &(&other.map.projection * &li.lattice_iso) * &section;
                induced_iso(fa, fb, lk)
            })
        } else {
            None
        };
        isos[k] = proposed.or_else(|| fan_isomorphic(fa, fb, None));
    }

    let object_matches: Vec<ObjectMatch> = (0..a.len())
        .map(|i| {
            let (oa, ob) = (&a.objects[i], &b.objects[map[i]]);
            ObjectMatch {
                a: oa.label.clone(),
                b: ob.label.clone(),
                matched: isos[i].is_some(),
                witness: isos[i].is_none().then(|| {
                    format!(
                        "fan of {} (rank {}) is not isomorphic to fan of {} (rank {})",
                        oa.label,
                        oa.fan.rank(),
                        ob.label,
                        ob.fan.rank()
                    )
                }),
                iso: isos[i].clone(),
            }
        })
        .collect();
    let objects: Vec<String> = object_matches.iter().filter_map(|m| m.witness.clone()).collect();

    let mut clauses = vec![Clause::new("poset", vec![]), Clause::new("objects", objects)];
    if with_arrows {
        let mut arrows = Vec::new();
        for (&(s, t), arrow) in &a.arrows {
            let name = format!("{} -> {}", a.objects[s].label, a.objects[t].label);
            let Some(other) = b.arrows.get(&(map[s], map[t])) else {
                arrows.push(format!("{name}: no corresponding arrow"));
                continue;
            };
            let (Some(ls), Some(lt)) = (&isos[s], &isos[t]) else { continue };
            if ls.map_cone(&arrow.cone) != other.cone {
                arrows.push(format!(
                    "{name}: cone {} goes to {}, expected {}",
                    arrow.cone,
                    ls.map_cone(&arrow.cone),
                    other.cone
                ));
            }
            if &lt.lattice_iso * &arrow.map.projection != &other.map.projection * &ls.lattice_iso {
                arrows.push(format!("{name}: lattice square does not commute"));
            }
        }
        if a.arrows.len() != b.arrows.len() {
            arrows.push(format!("arrow count {} vs {}", a.arrows.len(), b.arrows.len()));
        }
        clauses.push(Clause::new("arrows", arrows));
    }
    finish(Some(map), object_matches, clauses)
}

/// Compares two B-side diagrams object by object, arrows included.
pub fn match_bside(a: &GluingDiagram, b: &GluingDiagram) -> MatchReport {
    match_diagrams(a, b, true)
}

/// Compares the nerve of a sectorial cover, labelled by skeleton fans, with
/// an orbit-closure diagram.
pub fn match_hms(n: &Nerve, b: &GluingDiagram) -> MatchReport {
    let mut report = match_diagrams(&nerve_diagram(n), b, false);
    let carriers: Vec<String> = n
        .simplices
        .iter()
        .filter(|s| s.fan.is_none())
        .map(|s| format!("simplex {:?} has carriers {:?}", s.vertices, s.carriers))
        .collect();
    report.clauses.push(Clause::new("carriers", carriers));
    report.verdict = all_passed(&report.clauses);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fanifold::{barycentric_cover, nerve, sphere_fanifold, ExitArrow, Stratum};

    #[test]
    fn p2_boundary() {
        let d = boundary_diagram(&corpus::p2()).unwrap();
        assert_eq!(d.len(), 6);
        assert_eq!(d.arrows.len(), 6);
        let rays: Vec<_> = d.objects.iter().filter(|o| o.base_cone.as_ref().unwrap().dim() == 1).collect();
        assert_eq!(rays.len(), 3);
        assert!(rays.iter().all(|o| fan_isomorphic(&o.fan, &corpus::p1(), None).is_some()));
        assert!(d
            .objects
            .iter()
            .filter(|o| o.base_cone.as_ref().unwrap().dim() == 2)
            .all(|o| o.fan == Fan::trivial(0)));
        assert!(d.coherence().is_empty());
    }

    #[test]
    fn small_boundaries() {
        let d = boundary_diagram(&corpus::p1()).unwrap();
        assert_eq!((d.len(), d.arrows.len()), (2, 0));
        assert!(d.objects.iter().all(|o| o.fan.rank() == 0));

        let d = boundary_diagram(&corpus::a2()).unwrap();
        assert_eq!(d.len(), 3);
        let top = d.index_of("{0,1}").unwrap();
        let keys: Vec<_> = d.arrows.keys().copied().collect();
        assert_eq!(keys, vec![(d.index_of("{0}").unwrap(), top), (d.index_of("{1}").unwrap(), top)]);

        assert!(matches!(boundary_diagram(&Fan::trivial(2)), Err(Error::EmptyBoundary)));
    }

    #[test]
    fn intersections() {
        let d = boundary_diagram(&corpus::p2()).unwrap();
        let (r0, r1) = (d.index_of("{0}").unwrap(), d.index_of("{1}").unwrap());
        assert_eq!(orbit_intersection(&d, r0, r0), Some(r0));
        assert_eq!(orbit_intersection(&d, r0, r1), d.index_of("{0,1}"));

        let d = boundary_diagram(&corpus::p1xp1()).unwrap();
        assert_eq!(orbit_intersection(&d, d.index_of("{0}").unwrap(), d.index_of("{2}").unwrap()), None);

        // poset fallback agrees
        let mut bare = boundary_diagram(&corpus::p1xp1()).unwrap();
        bare.base_fan = None;
        assert_eq!(orbit_intersection(&bare, bare.index_of("{0}").unwrap(), bare.index_of("{2}").unwrap()), None);
        assert_eq!(
            orbit_intersection(&bare, bare.index_of("{0}").unwrap(), bare.index_of("{1}").unwrap()),
            bare.index_of("{0,1}")
        );
    }

    #[test]
    fn bside_of_small_fanifolds() {
        let point = Fanifold::new(0, vec![Stratum::new("p", 0, corpus::p2())], vec![], true).unwrap();
        let d = fanifold_bside(&point);
        assert_eq!(d.len(), 1);
        assert_eq!(d.objects[0].fan, corpus::p2());

        let two = Fanifold::new(
            0,
            vec![Stratum::new("p", 0, Fan::trivial(0)), Stratum::new("q", 0, Fan::trivial(0))],
            vec![],
            true,
        )
        .unwrap();
        let d = fanifold_bside(&two);
        assert_eq!((d.len(), d.arrows.len()), (2, 0));
    }

    #[test]
    fn bside_matching() {
        for f in [corpus::p2(), corpus::p1xp1(), corpus::p1(), corpus::p3()] {
            let a = fanifold_bside(&sphere_fanifold(&f).unwrap());
            let b = boundary_diagram(&f).unwrap();
            let r = match_bside(&a, &b);
            assert!(r.verdict, "{:?}", r.clauses);
        }
        let r = match_bside(&boundary_diagram(&corpus::p2()).unwrap(), &boundary_diagram(&corpus::p1xp1()).unwrap());
        assert!(!r.verdict);
        assert_eq!(r.clauses[0].witnesses, vec!["poset cardinality 6 vs 8".to_string()]);
    }

    #[test]
    fn relabelled_match_uses_search() {
        let f = corpus::p1xp1();
        let a = fanifold_bside(&sphere_fanifold(&f).unwrap());
        let mut b = boundary_diagram(&f).unwrap();
        for o in &mut b.objects {
            o.base_cone = None;
            o.label = format!("x{}", o.label);
        }
        assert!(match_bside(&a, &b).verdict);
    }

    #[test]
    fn corrupted_arrow_is_noticed() {
        let f = corpus::p2();
        let mut phi = sphere_fanifold(&f).unwrap();
        let wrong = ExitArrow {
            source: "s0".into(),
            target: "s0_1".into(),
            cone: Cone::ray(1),
            lattice_map: phi.arrow("s0", "s0_1").unwrap().lattice_map.clone(),
        };
        phi = Fanifold::new(
            phi.dim,
            phi.strata().cloned().collect(),
            phi.arrows().filter(|a| !(a.source == "s0" && a.target == "s0_1")).cloned().chain([wrong]).collect(),
            true,
        )
        .unwrap();
        let r = match_bside(&fanifold_bside(&phi), &boundary_diagram(&f).unwrap());
        assert!(!r.verdict);
    }

    #[test]
    fn hms_matching() {
        let sizes = [(corpus::p2(), 6), (corpus::p1(), 2), (corpus::p1xp1(), 8)];
        for (f, n) in sizes {
            let phi = sphere_fanifold(&f).unwrap();
            let nv = nerve(&barycentric_cover(&phi).unwrap(), &phi);
            let b = boundary_diagram(&f).unwrap();
            let r = match_hms(&nv, &b);
            assert!(r.verdict, "{:?}", r.clauses);
            assert_eq!(r.object_matches.len(), n);
        }
    }
}

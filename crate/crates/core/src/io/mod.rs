//! Document formats and report emitters.

mod fan_doc;
mod fanifold_doc;

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::fan::FacePoset;
use crate::fanifold::Nerve;
use crate::mirror::GluingDiagram;
use crate::poset::Poset;
use crate::report::{all_passed, Clause};

pub use fan_doc::{emit_fan, load_fan, parse_fan, FanDocument};
pub use fanifold_doc::{emit_fanifold, parse_fanifold};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub verdict: &'static str,
    pub clauses: Vec<Clause>,
    pub body: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, clauses: Vec<Clause>, body: Value) -> Self {
        let verdict = if all_passed(&clauses) { "pass" } else { "fail" };
        Report { schema_version: SCHEMA_VERSION, command: command.into(), verdict, clauses, body }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable form: one line per clause, witnesses indented.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.verdict);
        for c in &self.clauses {
            writeln!(out, "  {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name).unwrap();
            for w in &c.witnesses {
                writeln!(out, "       {w}").unwrap();
            }
        }
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for a poset with the given node labels: nodes sorted by label,
/// one edge per covering relation.
pub fn emit_dot(name: &str, labels: &[String], poset: &Poset) -> String {
    let mut nodes: Vec<&String> = labels.iter().collect();
    nodes.sort();
    let mut edges: Vec<(&String, &String)> =
        poset.hasse_edges().into_iter().map(|(a, b)| (&labels[a], &labels[b])).collect();
    edges.sort();
    let mut out = format!("digraph {} {{\n", quote(name));
    for n in nodes {
        writeln!(out, "  {};", quote(n)).unwrap();
    }
    for (a, b) in edges {
        writeln!(out, "  {} -> {};", quote(a), quote(b)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn face_poset_dot(p: &FacePoset) -> String {
    let labels: Vec<String> = p.cones.iter().map(ToString::to_string).collect();
    emit_dot("face_poset", &labels, &p.poset)
}

/// The 1-skeleton of the nerve: vertices and edges only.
pub fn nerve_dot(n: &Nerve) -> String {
    let low: Vec<usize> = (0..n.simplices.len()).filter(|&i| n.simplices[i].dim() <= 1).collect();
    let labels: Vec<String> = low
        .iter()
        .map(|&i| n.simplices[i].vertices.iter().map(|&v| n.vertices[v].as_str()).collect::<Vec<_>>().join("+"))
        .collect();
    let mut out = String::from("graph \"nerve\" {\n");
    let mut nodes: Vec<&String> =
        labels.iter().zip(&low).filter(|(_, &i)| n.simplices[i].dim() == 0).map(|(l, _)| l).collect();
    nodes.sort();
    for v in nodes {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    let mut edges: Vec<(&str, &str)> = low
        .iter()
        .filter(|&&i| n.simplices[i].dim() == 1)
        .map(|&i| {
            let vs = &n.simplices[i].vertices;
            (n.vertices[vs[0]].as_str(), n.vertices[vs[1]].as_str())
        })
        .collect();
    edges.sort();
    for (a, b) in edges {
        writeln!(out, "  {} -- {};", quote(a), quote(b)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn diagram_dot(d: &GluingDiagram) -> String {
    let labels: Vec<String> = d.objects.iter().map(|o| o.label.clone()).collect();
    emit_dot("gluing_diagram", &labels, &d.order)
}

/// Node and edge counts of a DOT text produced here.
pub fn dot_counts(dot: &str) -> (usize, usize) {
    let body: Vec<&str> = dot.lines().filter(|l| l.starts_with("  ")).collect();
    let edges = body.iter().filter(|l| l.contains(" -> ") || l.contains(" -- ")).count();
    (body.len() - edges, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fan::face_poset;
    use crate::fanifold::{barycentric_cover, nerve, sphere_fanifold};

    #[test]
    fn dot_counts_match() {
        let dot = face_poset_dot(&face_poset(&corpus::p2()));
        assert_eq!(dot_counts(&dot), (7, 9));
        assert_eq!(dot, face_poset_dot(&face_poset(&corpus::p2())));

        let single = emit_dot("one", &["x".to_string()], &Poset::from_relation(1, |_, _| true));
        assert_eq!(dot_counts(&single), (1, 0));

        let phi = sphere_fanifold(&corpus::p2()).unwrap();
        let n = nerve(&barycentric_cover(&phi).unwrap(), &phi);
        assert_eq!(dot_counts(&nerve_dot(&n)), (3, 3));
    }

    #[test]
    fn report_schema() {
        let r = Report::new("fan check", vec![Clause::new("x", vec!["w".into()])], Value::Null);
        assert!(!r.passed());
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["verdict"], "fail");
        assert_eq!(v["clauses"][0]["witnesses"][0], "w");
    }
}

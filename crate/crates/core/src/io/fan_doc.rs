use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::{validate_fan, Cone, Fan};
use crate::lattice::IntVector;

/// A fan as written in a document: ray list plus the listed cones, before
/// face closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanDocument {
    pub name: Option<String>,
    pub rank: usize,
    pub rays: Vec<IntVector>,
    pub cones: Vec<Vec<usize>>,
}

impl FanDocument {
    /// Canonical document of a fan: maximal cones only.
    pub fn from_fan(f: &Fan, name: Option<&str>) -> Self {
        FanDocument {
            name: name.map(str::to_owned),
            rank: f.rank(),
            rays: f.rays().to_vec(),
            cones: f.maximal_cones().into_iter().map(|c| c.rays().to_vec()).collect(),
        }
    }

    /// The face closure of the listed cones. No validation.
    pub fn to_fan(&self) -> Fan {
        Fan::from_cones(self.rank, self.rays.clone(), self.cones.iter().map(|c| Cone::new(c.iter().copied())))
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            writeln!(out, "name: {n}").unwrap();
        }
        self.emit_body(&mut out, "");
        out
    }

    pub(crate) fn emit_body(&self, out: &mut String, indent: &str) {
        writeln!(out, "{indent}rank: {}", self.rank).unwrap();
        for (i, r) in self.rays.iter().enumerate() {
            write!(out, "{indent}ray {i}:").unwrap();
            for x in r {
                write!(out, " {x}").unwrap();
            }
            out.push('\n');
        }
        for c in &self.cones {
            write!(out, "{indent}cone:").unwrap();
            for i in c {
                write!(out, " {i}").unwrap();
            }
            out.push('\n');
        }
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub(crate) fn parse_indices(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line, format!("expected a ray index, found `{t}`"))))
        .collect()
}

pub(crate) fn parse_ints(s: &str, line: usize) -> Result<IntVector> {
    s.split_whitespace()
        .map(|t| t.parse::<BigInt>().map_err(|_| Error::parse(line, format!("expected an integer, found `{t}`"))))
        .collect()
}

/// Incremental reader for the fan lines, shared with the fanifold format.
#[derive(Default)]
pub(crate) struct FanLines {
    name: Option<String>,
    rank: Option<usize>,
    rays: Vec<IntVector>,
    cones: Vec<Vec<usize>>,
}

impl FanLines {
    /// Consumes one non-empty, comment-free line. Returns `false` if the line
    /// is not part of the fan syntax.
    pub(crate) fn accept(&mut self, text: &str, line: usize) -> Result<bool> {
        if let Some(rest) = text.strip_prefix("name:") {
            self.name = Some(rest.trim().to_owned());
        } else if let Some(rest) = text.strip_prefix("rank:") {
            if self.rank.is_some() {
                return Err(Error::parse(line, "rank given twice"));
            }
            let r = rest.trim();
            self.rank = Some(r.parse().map_err(|_| Error::parse(line, format!("expected a rank, found `{r}`")))?);
        } else if let Some(rest) = text.strip_prefix("ray") {
            let (idx, coords) =
                rest.split_once(':').ok_or_else(|| Error::parse(line, "expected `ray <i>: <coordinates>`"))?;
            let idx = idx.trim();
            let i: usize =
                idx.parse().map_err(|_| Error::parse(line, format!("expected a ray index, found `{idx}`")))?;
            if i != self.rays.len() {
                return Err(Error::parse(line, format!("ray {i} out of sequence, expected ray {}", self.rays.len())));
            }
            self.rays.push(parse_ints(coords, line)?);
        } else if let Some(rest) = text.strip_prefix("cone:") {
            self.cones.push(parse_indices(rest, line)?);
        } else {
            return Ok(false);
        }
        Ok(true)
    }

    pub(crate) fn finish(self, line: usize) -> Result<FanDocument> {
        let rank = self.rank.ok_or_else(|| Error::parse(line, "missing `rank:` line"))?;
        Ok(FanDocument { name: self.name, rank, rays: self.rays, cones: self.cones })
    }
}

/// Parses the text format. Syntax errors carry the line number; the
/// resulting fan is not validated.
pub fn parse_fan(text: &str) -> Result<FanDocument> {
    let mut lines = FanLines::default();
    let mut last = 0;
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        last = n + 1;
        if line.is_empty() {
            continue;
        }
        if !lines.accept(line, n + 1)? {
            return Err(Error::parse(n + 1, format!("unrecognised line `{line}`")));
        }
    }
    lines.finish(last.max(1))
}

/// Parses and validates.
pub fn load_fan(text: &str) -> Result<Fan> {
    let f = parse_fan(text)?.to_fan();
    let violations = validate_fan(&f);
    if violations.is_empty() {
        Ok(f)
    } else {
        Err(Error::InvalidFan(violations))
    }
}

pub fn emit_fan(f: &Fan, name: Option<&str>) -> String {
    FanDocument::from_fan(f, name).emit()
}

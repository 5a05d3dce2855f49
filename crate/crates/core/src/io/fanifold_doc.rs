use std::fmt::Write as _;

use super::fan_doc::{parse_indices, parse_ints, strip_comment, FanDocument, FanLines};
use crate::error::{Error, Result};
use crate::fan::{quotient_fan, Cone};
use crate::fanifold::{ExitArrow, Fanifold, Stratum};
use crate::lattice::{IntMatrix, QuotientMap};

/// An arrow line, resolved once all strata are known.
struct PendingArrow {
    line: usize,
    source: String,
    target: String,
    cone: Vec<usize>,
    projection: Option<String>,
}

/// Parses a fanifold document.
///
/// ```text
/// fanifold
/// dim: 1
/// closed: true
/// stratum s0 dim 0 base 0
///   rank: 1
///   ray 0: 1
///   ray 1: -1
///   cone: 0
///   cone: 1
/// end
/// arrow s0 -> s0_1 cone: 0 projection:
/// ```
///
/// Projection rows are separated by `;`. An omitted `projection:` is
/// replaced by the canonical quotient of the source lattice by the cone.
pub fn parse_fanifold(text: &str) -> Result<Fanifold> {
    let mut dim = None;
    let mut closed = None;
    let mut header = false;
    let mut strata: Vec<Stratum> = Vec::new();
    let mut pending_arrows: Vec<PendingArrow> = Vec::new();
    let mut open: Option<(usize, String, usize, Option<Cone>, FanLines)> = None;

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some((start, id, k, base, mut lines)) = open.take() {
            if line == "end" {
                let doc = lines.finish(start)?;
                let mut s = Stratum::new(id, k, doc.to_fan());
                if let Some(b) = base {
                    s = s.with_base_cone(b);
                }
                strata.push(s);
            } else if lines.accept(line, line_no)? {
                open = Some((start, id, k, base, lines));
            } else {
                return Err(Error::parse(line_no, format!("unexpected `{line}` inside stratum")));
            }
            continue;
        }
        if !header {
            if line != "fanifold" {
                return Err(Error::parse(line_no, "expected `fanifold` header"));
            }
            header = true;
        } else if let Some(rest) = line.strip_prefix("dim:") {
            let r = rest.trim();
            dim = Some(r.parse::<usize>().map_err(|_| Error::parse(line_no, format!("bad dimension `{r}`")))?);
        } else if let Some(rest) = line.strip_prefix("closed:") {
            closed = Some(match rest.trim() {
                "true" => true,
                "false" => false,
                other => return Err(Error::parse(line_no, format!("expected true or false, found `{other}`"))),
            });
        } else if let Some(rest) = line.strip_prefix("stratum ") {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            let (id, k, base) = match tokens.as_slice() {
                [id, "dim", k, tail @ ..] => {
                    let k: usize =
                        k.parse().map_err(|_| Error::parse(line_no, format!("bad stratum dimension `{k}`")))?;
                    let base = match tail {
                        [] => None,
                        ["base", idx @ ..] => Some(Cone::new(parse_indices(&idx.join(" "), line_no)?)),
                        _ => return Err(Error::parse(line_no, "expected `base <indices>` after the dimension")),
                    };
                    (id.to_string(), k, base)
                }
                _ => return Err(Error::parse(line_no, "expected `stratum <id> dim <k>`")),
            };
            if strata.iter().any(|s| s.id == id) {
                return Err(Error::parse(line_no, format!("stratum {id} declared twice")));
            }
            open = Some((line_no, id, k, base, FanLines::default()));
        } else if let Some(rest) = line.strip_prefix("arrow ") {
            let (ends, data) = rest
                .split_once("cone:")
                .ok_or_else(|| Error::parse(line_no, "expected `arrow <source> -> <target> cone: <indices>`"))?;
            let (src, tgt) =
                ends.split_once("->").ok_or_else(|| Error::parse(line_no, "expected `<source> -> <target>`"))?;
            let (cone, projection) = match data.split_once("projection:") {
                Some((c, p)) => (c, Some(p.to_owned())),
                None => (data, None),
            };
            pending_arrows.push(PendingArrow {
                line: line_no,
                source: src.trim().to_owned(),
                target: tgt.trim().to_owned(),
                cone: parse_indices(cone, line_no)?,
                projection,
            });
        } else {
            return Err(Error::parse(line_no, format!("unrecognised line `{line}`")));
        }
    }
    if let Some((start, id, ..)) = open {
        return Err(Error::parse(start, format!("stratum {id} has no `end`")));
    }
    let last = text.lines().count().max(1);
    if !header {
        return Err(Error::parse(last, "expected `fanifold` header"));
    }
    let dim = dim.ok_or_else(|| Error::parse(last, "missing `dim:` line"))?;
    let closed = closed.unwrap_or(true);

    let mut arrows = Vec::new();
    for PendingArrow { line: line_no, source, target, cone, projection } in pending_arrows {
        let src = strata
            .iter()
            .find(|s| s.id == source)
            .ok_or_else(|| Error::parse(line_no, format!("unknown stratum {source}")))?;
        if !strata.iter().any(|s| s.id == target) {
            return Err(Error::parse(line_no, format!("unknown stratum {target}")));
        }
        let cone = Cone::new(cone);
        let lattice_map = match projection {
            Some(p) => QuotientMap::from_projection(parse_matrix(&p, src.lattice_rank, line_no)?),
            None => {
                quotient_fan(&src.normal_fan, &cone)
                    .map_err(|e| Error::parse(line_no, format!("cannot compute projection: {e}")))?
                    .quotient
            }
        };
        arrows.push(ExitArrow { source, target, cone, lattice_map });
    }
    Fanifold::new(dim, strata, arrows, closed)
}

fn parse_matrix(text: &str, cols: usize, line: usize) -> Result<IntMatrix> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(IntMatrix::zeros(0, cols));
    }
    let rows = text.split(';').map(|r| parse_ints(r, line)).collect::<Result<Vec<_>>>()?;
    if let Some(r) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::parse(
            line,
            format!("projection row has {} entries, source lattice has rank {cols}", r.len()),
        ));
    }
    Ok(IntMatrix::from_rows(cols, &rows))
}

pub fn emit_fanifold(phi: &Fanifold) -> String {
    let mut out = String::new();
    writeln!(out, "fanifold\ndim: {}\nclosed: {}", phi.dim, phi.closed).unwrap();
    for s in phi.strata() {
        write!(out, "stratum {} dim {}", s.id, s.dim).unwrap();
        if let Some(b) = &s.base_cone {
            out.push_str(" base");
            for i in b.rays() {
                write!(out, " {i}").unwrap();
            }
        }
        out.push('\n');
        FanDocument::from_fan(&s.normal_fan, None).emit_body(&mut out, "  ");
        out.push_str("end\n");
    }
    for a in phi.arrows() {
        write!(out, "arrow {} -> {} cone:", a.source, a.target).unwrap();
        for i in a.cone.rays() {
            write!(out, " {i}").unwrap();
        }
        out.push_str(" projection:");
        let rows: Vec<String> = a
            .lattice_map
            .projection
            .row_vectors()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        if !rows.is_empty() {
            write!(out, " {}", rows.join("; ")).unwrap();
        }
        out.push('\n');
    }
    out
}

//! Command-line front end. Exit codes: 0 pass, 1 a check failed, 2 parse or
//! usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::Error;
use crate::fan::{face_poset, is_complete, quotient_fan, validate_fan, Cone, Fan};
use crate::fanifold::{barycentric_cover, filtration, nerve, sphere_fanifold, validate_fanifold, Fanifold};
use crate::fltz::{boundary_strata, check_cover, fltz_strata};
use crate::io::{diagram_dot, emit_fan, emit_fanifold, face_poset_dot, load_fan, nerve_dot, parse_fanifold, Report};
use crate::mirror::{boundary_diagram, fanifold_bside, match_bside, match_hms, MatchReport};
use crate::report::Clause;

#[derive(Parser, Debug)]
#[command(name = "fanifold", version, about = "Check fans, fanifolds and their mirror gluing diagrams")]
struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fan documents.
    #[command(subcommand)]
    Fan(FanCmd),
    /// FLTZ skeleton and the cover of its boundary.
    #[command(subcommand)]
    Fltz(FltzCmd),
    /// Fanifold documents (a fan document is read as its sphere fanifold).
    #[command(subcommand)]
    Fanifold(FanifoldCmd),
    /// Barycentric sectorial cover.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Orbit-closure gluing diagrams and matching.
    #[command(subcommand)]
    Mirror(MirrorCmd),
    /// Graph export.
    #[command(subcommand)]
    Emit(EmitCmd),
}

#[derive(Subcommand, Debug)]
enum FanCmd {
    /// Validate a fan.
    Check { file: PathBuf },
    /// Print the quotient fan by a cone.
    Quotient {
        /// Ray indices of the cone, separated by commas or spaces.
        #[arg(long)]
        cone: String,
        file: PathBuf,
    },
    /// Check that the fan is complete.
    Complete { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum FltzCmd {
    /// List the pieces of the skeleton.
    Strata { file: PathBuf },
    /// List the strata of the boundary at infinity.
    Boundary { file: PathBuf },
    /// Check the open cover of the boundary at infinity.
    CoverCheck { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum FanifoldCmd {
    /// Validate a fanifold.
    Check { file: PathBuf },
    /// Print the sphere fanifold of a complete fan.
    Sphere { file: PathBuf },
    /// Print the handle schedule and check that it replays.
    Filtration { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum CoverCmd {
    /// Nerve of the barycentric cover.
    Nerve { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum MirrorCmd {
    /// Orbit-closure diagram of the toric boundary.
    Boundary { file: PathBuf },
    /// Match both B-side diagrams and the cover nerve for a complete fan.
    Verify { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DotKind {
    FacePoset,
    Nerve,
    Diagram,
}

#[derive(Subcommand, Debug)]
enum EmitCmd {
    /// Hasse diagram in DOT.
    Dot {
        #[arg(long, value_enum, default_value_t = DotKind::FacePoset)]
        of: DotKind,
        file: PathBuf,
    },
}

enum Outcome {
    Report(Report),
    Text(String),
}

enum Failure {
    Usage(String),
    Check(Report),
}

type Step<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Step<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn fail(command: &str, clause: &'static str, witness: String) -> Failure {
    Failure::Check(Report::new(command, vec![Clause::new(clause, vec![witness])], Value::Null))
}

fn input_error(command: &str, path: &Path, e: Error) -> Failure {
    match e {
        Error::Parse { .. } => Failure::Usage(format!("{}: {e}", path.display())),
        Error::InvalidFan(v) => Failure::Check(Report::new(
            command,
            vec![Clause::new("fan_validity", v.iter().map(ToString::to_string).collect())],
            Value::Null,
        )),
        e => fail(command, "input", e.to_string()),
    }
}

fn fan_input(command: &str, path: &Path) -> Step<Fan> {
    load_fan(&read(path)?).map_err(|e| input_error(command, path, e))
}

fn is_fanifold_text(text: &str) -> bool {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty()) == Some("fanifold")
}

fn fanifold_input(command: &str, path: &Path) -> Step<Fanifold> {
    let text = read(path)?;
    if is_fanifold_text(&text) {
        parse_fanifold(&text).map_err(|e| input_error(command, path, e))
    } else {
        let f = load_fan(&text).map_err(|e| input_error(command, path, e))?;
        sphere_fanifold(&f).map_err(|e| input_error(command, path, e))
    }
}

fn int_json(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn fan_json(f: &Fan) -> Value {
    json!({
        "rank": f.rank(),
        "rays": f.rays().iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "maximal_cones": f.maximal_cones(),
        "num_cones": f.num_cones(),
    })
}

fn renamed(prefix: &str, c: &Clause) -> Clause {
    let name: &'static str = match (prefix, c.name) {
        ("bside", "poset") => "bside_poset",
        ("bside", "objects") => "bside_objects",
        ("bside", "arrows") => "bside_arrows",
        ("hms", "poset") => "hms_poset",
        ("hms", "objects") => "hms_objects",
        ("hms", "carriers") => "hms_carriers",
        (_, other) => other,
    };
    Clause { name, ..c.clone() }
}

fn match_json(r: &MatchReport) -> Value {
    json!({ "verdict": r.verdict, "poset_iso": r.poset_iso, "objects": r.object_matches })
}

fn execute(cmd: &Command) -> Step<Outcome> {
    match cmd {
        Command::Fan(FanCmd::Check { file }) => {
            let c = "fan check";
            let text = read(file)?;
            let f = match load_fan(&text) {
                Ok(f) => f,
                Err(Error::InvalidFan(_)) => crate::io::parse_fan(&text).expect("parsed once").to_fan(),
                Err(e) => return Err(input_error(c, file, e)),
            };
            let v = validate_fan(&f);
            let body = json!({
                "violations": v.iter().map(|x| json!({"kind": x.kind(), "message": x.to_string()})).collect::<Vec<_>>(),
                "num_rays": f.rays().len(),
                "num_cones": f.num_cones(),
            });
            Ok(Outcome::Report(Report::new(
                c,
                vec![Clause::new("fan_validity", v.iter().map(ToString::to_string).collect())],
                body,
            )))
        }
        Command::Fan(FanCmd::Quotient { cone, file }) => {
            let c = "fan quotient";
            let f = fan_input(c, file)?;
            let sigma = cone
                .split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| Failure::Usage(format!("--cone: `{t}` is not a ray index"))))
                .collect::<Step<Vec<usize>>>()
                .map(Cone::new)?;
            let q = quotient_fan(&f, &sigma).map_err(|e| fail(c, "cone", e.to_string()))?;
            Ok(Outcome::Text(emit_fan(&q.fan, None)))
        }
        Command::Fan(FanCmd::Complete { file }) => {
            let c = "fan complete";
            let f = fan_input(c, file)?;
            let w = if is_complete(&f) { vec![] } else { vec!["support is not the whole space".to_string()] };
            Ok(Outcome::Report(Report::new(c, vec![Clause::new("complete", w)], fan_json(&f))))
        }
        Command::Fltz(FltzCmd::Strata { file }) => {
            let c = "fltz strata";
            let f = fan_input(c, file)?;
            let strata = fltz_strata(&f);
            let w = strata
                .iter()
                .filter(|s| s.dim != f.rank())
                .map(|s| format!("{}: dimension {} but rank {}", s.cone, s.dim, f.rank()))
                .collect();
            let body: Vec<Value> = strata
                .iter()
                .map(|s| json!({"cone": s.cone, "perp_rank": s.perp.rank(), "dim": s.dim, "perp_basis": s.perp.basis.to_string()}))
                .collect();
            Ok(Outcome::Report(Report::new(c, vec![Clause::new("half_dimensional", w)], Value::from(body))))
        }
        Command::Fltz(FltzCmd::Boundary { file }) => {
            let c = "fltz boundary";
            let f = fan_input(c, file)?;
            let strata = boundary_strata(&f);
            Ok(Outcome::Report(Report::new(c, vec![], json!({ "count": strata.len(), "strata": strata }))))
        }
        Command::Fltz(FltzCmd::CoverCheck { file }) => {
            let c = "fltz cover-check";
            let f = fan_input(c, file)?;
            let r = check_cover(&f);
            let pieces: Vec<Value> = r
                .pieces
                .iter()
                .map(|p| json!({"cone": p.index_cone, "members": p.members.len(), "fiber_rank": p.fiber_fan.rank()}))
                .collect();
            Ok(Outcome::Report(Report::new(c, r.clauses, json!({"strata": r.strata.len(), "pieces": pieces}))))
        }
        Command::Fanifold(FanifoldCmd::Check { file }) => {
            let c = "fanifold check";
            let phi = fanifold_input(c, file)?;
            let r = validate_fanifold(&phi);
            let body =
                json!({"dim": phi.dim, "strata": phi.num_strata(), "arrows": phi.num_arrows(), "closed": phi.closed});
            Ok(Outcome::Report(Report::new(c, r.clauses, body)))
        }
        Command::Fanifold(FanifoldCmd::Sphere { file }) => {
            let c = "fanifold sphere";
            let f = fan_input(c, file)?;
            let phi = sphere_fanifold(&f).map_err(|e| input_error(c, file, e))?;
            Ok(Outcome::Text(emit_fanifold(&phi)))
        }
        Command::Fanifold(FanifoldCmd::Filtration { file }) => {
            let c = "fanifold filtration";
            let phi = fanifold_input(c, file)?;
            let fl = filtration(&phi);
            let w =
                if fl.replay(phi.dim, phi.closed) == phi { vec![] } else { vec!["replayed schedule differs".into()] };
            let schedule: Vec<Value> = fl
                .schedule
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "stratum": r.stratum.id,
                        "lattice_rank": r.stratum.lattice_rank,
                        "glued_from": r.gluing.iter().map(|a| a.source.clone()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let levels: Vec<usize> = fl.levels.iter().map(Fanifold::num_strata).collect();
            Ok(Outcome::Report(Report::new(
                c,
                vec![Clause::new("replay", w)],
                json!({"levels": levels, "schedule": schedule}),
            )))
        }
        Command::Cover(CoverCmd::Nerve { file }) => {
            let c = "cover nerve";
            let phi = fanifold_input(c, file)?;
            let regions = barycentric_cover(&phi).map_err(|e| fail(c, "cover", e.to_string()))?;
            let n = nerve(&regions, &phi);
            let simplices: Vec<Value> = n
                .simplices
                .iter()
                .map(|s| json!({"vertices": s.vertices.iter().map(|&v| n.vertices[v].clone()).collect::<Vec<_>>(), "carriers": s.carriers}))
                .collect();
            let body = json!({"vertices": n.vertices, "counts_by_dim": n.count_by_dim(), "simplices": simplices});
            Ok(Outcome::Report(Report::new(c, vec![], body)))
        }
        Command::Mirror(MirrorCmd::Boundary { file }) => {
            let c = "mirror boundary";
            let f = fan_input(c, file)?;
            let d = boundary_diagram(&f).map_err(|e| input_error(c, file, e))?;
            let objects: Vec<Value> =
                d.objects.iter().map(|o| json!({"label": o.label, "fan": fan_json(&o.fan)})).collect();
            let body = json!({"objects": objects, "arrows": d.arrows.len()});
            Ok(Outcome::Report(Report::new(c, vec![Clause::new("coherence", d.coherence())], body)))
        }
        Command::Mirror(MirrorCmd::Verify { file }) => {
            let c = "mirror verify";
            let f = fan_input(c, file)?;
            let phi = sphere_fanifold(&f).map_err(|e| input_error(c, file, e))?;
            let b = boundary_diagram(&f).map_err(|e| input_error(c, file, e))?;
            let bside = match_bside(&fanifold_bside(&phi), &b);
            let regions = barycentric_cover(&phi).map_err(|e| fail(c, "cover", e.to_string()))?;
            let n = nerve(&regions, &phi);
            let hms = match_hms(&n, &b);
            let mut clauses = vec![Clause::new("coherence", b.coherence())];
            clauses.extend(bside.clauses.iter().map(|x| renamed("bside", x)));
            clauses.extend(hms.clauses.iter().map(|x| renamed("hms", x)));
            let body = json!({
                "nerve_counts_by_dim": n.count_by_dim(),
                "diagram_objects": b.len(),
                "diagram_arrows": b.arrows.len(),
                "bside": match_json(&bside),
                "hms": match_json(&hms),
            });
            Ok(Outcome::Report(Report::new(c, clauses, body)))
        }
        Command::Emit(EmitCmd::Dot { of, file }) => {
            let c = "emit dot";
            let dot = match of {
                DotKind::FacePoset => face_poset_dot(&face_poset(&fan_input(c, file)?)),
                DotKind::Nerve => {
                    let phi = fanifold_input(c, file)?;
                    let regions = barycentric_cover(&phi).map_err(|e| fail(c, "cover", e.to_string()))?;
                    nerve_dot(&nerve(&regions, &phi))
                }
                DotKind::Diagram => {
                    let f = fan_input(c, file)?;
                    diagram_dot(&boundary_diagram(&f).map_err(|e| input_error(c, file, e))?)
                }
            };
            Ok(Outcome::Text(dot))
        }
    }
}

fn print_report(r: &Report, format: Format, out: &mut dyn Write) {
    let text = match format {
        Format::Json => r.to_json() + "\n",
        Format::Text => r.to_text(),
    };
    let _ = out.write_all(text.as_bytes());
}

/// Runs the command line `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(Outcome::Text(t)) => {
            let _ = out.write_all(t.as_bytes());
            0
        }
        Ok(Outcome::Report(r)) => {
            print_report(&r, cli.format, out);
            if r.passed() {
                0
            } else {
                1
            }
        }
        Err(Failure::Check(r)) => {
            print_report(&r, cli.format, out);
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

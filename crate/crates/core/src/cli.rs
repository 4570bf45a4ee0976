//! Command-line front end: parses a problem file, dispatches one command and
//! renders a single JSON (or TSV) document plus an exit code.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::abelian::GroupPresentation;
use crate::arith::{format_rational, parse_rational};
use crate::chars::{self, CharacterList};
use crate::dm;
use crate::error::{Error, Result};
use crate::filtration::{self, Mode};
use crate::partition;
use crate::series::GammaFunction;
use crate::verify;
use crate::window::{Table, Window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dmspace", version, about = "Dahmen-Micchelli spaces of character lists, in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem file: {"group": {...}, "X": [...], "window"?: R, "seed"?: N}.
    pub problem: Option<PathBuf>,
    /// Max-norm radius of the working window (overrides the problem file).
    #[arg(long)]
    pub window: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rational subspaces spanned by sublists, by dimension.
    Subspaces(Common),
    Cocircuits(Common),
    Bases(Common),
    /// δ(X) and the predicted ℤ-rank of DM(X).
    Delta(Common),
    /// Special points P(X) with their fixed sublists.
    Points(Common),
    /// Big cells of a pointed list.
    Cells(Common),
    ZonotopePoints {
        #[command(flatten)]
        common: Common,
        /// Comma-separated rationals; a generic shift is drawn from the seed if absent.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
    },
    DmBasis(Common),
    DmCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: PathBuf,
    },
    /// ℤ-rank of DM(X) from window solutions; `--window` sets the rim margin.
    DmRank(Common),
    DSpace(Common),
    Localize {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: PathBuf,
    },
    ExactSeq {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: usize,
    },
    FCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: PathBuf,
        #[arg(long, default_value = "strict")]
        mode: String,
    },
    FDecompose {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: PathBuf,
    },
    GenF(Common),
    Partition {
        #[command(flatten)]
        common: Common,
        /// Comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    CellQuasipoly {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cell: usize,
    },
    Verify {
        #[command(flatten)]
        common: Common,
        /// A suite name or `all`.
        #[arg(long)]
        suite: String,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Subspaces(c)
            | Command::Cocircuits(c)
            | Command::Bases(c)
            | Command::Delta(c)
            | Command::Points(c)
            | Command::Cells(c)
            | Command::DmBasis(c)
            | Command::DmRank(c)
            | Command::DSpace(c)
            | Command::GenF(c) => c,
            Command::ZonotopePoints { common, .. }
            | Command::DmCheck { common, .. }
            | Command::Localize { common, .. }
            | Command::ExactSeq { common, .. }
            | Command::FCheck { common, .. }
            | Command::FDecompose { common, .. }
            | Command::Partition { common, .. }
            | Command::CellQuasipoly { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}

#[derive(Deserialize)]
struct ProblemFile {
    #[serde(flatten)]
    list: CharacterList,
    window: Option<i64>,
    seed: Option<u64>,
}

/// A loaded problem with flag overrides applied.
pub struct Problem {
    pub x: CharacterList,
    pub window: Option<i64>,
    pub seed: u64,
}

impl Problem {
    fn working_window(&self) -> Window {
        match self.window {
            Some(r) => Window::cube(self.x.rank(), r),
            None => Window::default_for(&self.x),
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    /// The rendered document (empty when written to `--out`).
    pub stdout: String,
    /// Progress lines (verify suites).
    pub stderr: Vec<String>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::WindowTooSmall(_) | Error::NonGeneric(_) => EXIT_RESOURCE,
        Error::NotInDM(_) | Error::NotInF(_) | Error::ComponentNotInDM(_) | Error::FitInconsistent(_) | Error::SolveFailed(_) => {
            EXIT_VIOLATION
        }
        _ => EXIT_INVALID,
    }
}

pub fn error_payload(e: &Error) -> Value {
    json!({"error": {"reason": e.reason(), "message": e.to_string()}})
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn load_problem(common: &Common) -> Result<Problem> {
    let path = common.problem.as_ref().ok_or_else(|| Error::InvalidInput("missing problem file".into()))?;
    let v = read_json(path)?;
    let p: ProblemFile =
        serde_json::from_value(v).map_err(|e| Error::InvalidInput(format!("malformed problem file: {e}")))?;
    let window = common.window.or(p.window);
    if let Some(r) = window {
        if r < 0 {
            return Err(Error::InvalidInput("window radius must be non-negative".into()));
        }
    }
    Ok(Problem { x: p.list, window, seed: common.seed.or(p.seed).unwrap_or(0) })
}

fn load_function(path: &Path, group: &GroupPresentation) -> Result<(GammaFunction, Window)> {
    let table = Table::from_json(&read_json(path)?, group)?;
    let w = table.window.clone();
    Ok((GammaFunction::from_table(group, table), w))
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(|t| f(t.trim())).collect()
}

fn parse_int(s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}")))
}

/// Runs one command; the payload and a status code (0 or 2 for a certified
/// property violation).
fn dispatch(cmd: &Command, stderr: &mut Vec<String>) -> Result<(Value, i32)> {
    if let Command::Verify { common, suite } = cmd {
        let seed = common.seed.unwrap_or(0);
        let names: Vec<&str> = if suite == "all" { verify::SUITES.to_vec() } else { vec![suite.as_str()] };
        let mut reports = Vec::new();
        for n in names {
            let r = verify::run_suite(n, seed)?;
            stderr.extend(r.lines());
            reports.push(r);
        }
        let pass = reports.iter().all(|r| r.pass);
        let summary: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({"suite": r.suite, "pass": r.pass, "checks": r.checks.len(),
                       "failed": r.checks.iter().filter(|c| !c.pass).map(|c| &c.label).collect::<Vec<_>>()})
            })
            .collect();
        return Ok((json!({"pass": pass, "seed": seed, "suites": summary}), if pass { EXIT_OK } else { EXIT_VIOLATION }));
    }

    let p = load_problem(cmd.common())?;
    let x = &p.x;
    let ok = |v: Value| Ok((v, EXIT_OK));
    match cmd {
        Command::Subspaces(_) => {
            let by_dim: serde_json::Map<String, Value> = chars::rational_subspaces(x)
                .into_iter()
                .map(|(d, v)| (d.to_string(), Value::Array(v.iter().map(|r| r.to_json()).collect())))
                .collect();
            ok(json!({"subspaces": by_dim}))
        }
        Command::Cocircuits(_) => ok(json!({"cocircuits": chars::cocircuits(x)?})),
        Command::Bases(_) => ok(json!({"bases": chars::bases(x)})),
        Command::Delta(_) => {
            let d = chars::delta(x);
            ok(json!({"delta": d, "z_rank": d * x.group.torsion_size() as u64}))
        }
        Command::Points(_) => {
            let pts: Vec<Value> = chars::special_points(x)
                .iter()
                .map(|q| {
                    let (idx, _) = chars::fixed_sublist(x, q);
                    json!({"point": q.to_json(), "order": q.order(), "fixed": idx})
                })
                .collect();
            ok(json!({"points": pts}))
        }
        Command::Cells(_) => ok(json!({"cells": chars::big_cells(x)?})),
        Command::ZonotopePoints { u, .. } => {
            let u = match u {
                Some(s) => parse_list(s, parse_rational)?,
                None => chars::generic_u(x, p.seed)?,
            };
            if u.len() != x.rank() {
                return Err(Error::InvalidInput(format!("u has length {} but s = {}", u.len(), x.rank())));
            }
            let (u, pts) = chars::zonotope_points(x, &u)?;
            ok(json!({"u": u.iter().map(format_rational).collect::<Vec<_>>(), "count": pts.len(), "points": pts}))
        }
        Command::DmBasis(_) => {
            let w = p.working_window();
            let basis = dm::dm_basis_or_empty(x)?;
            let el = basis.iter().map(|e| e.to_json(&w)).collect::<Result<Vec<_>>>()?;
            ok(json!({"size": basis.len(), "window": w, "elements": el}))
        }
        Command::DmCheck { f, .. } => {
            let (f, w) = load_function(f, &x.group)?;
            let m = dm::is_member_dm(&f, x, &w)?;
            let code = if m.member { EXIT_OK } else { EXIT_VIOLATION };
            Ok((serde_json::to_value(&m).expect("serializable"), code))
        }
        Command::DmRank(_) => ok(serde_json::to_value(dm::dm_rank(x, p.window)?).expect("serializable")),
        Command::DSpace(_) => {
            let b = dm::d_space_basis(x)?;
            ok(json!({"dim": b.len(), "basis": b.iter().map(|q| q.to_json()).collect::<Vec<_>>()}))
        }
        Command::Localize { f, .. } => {
            let (f, w) = load_function(f, &x.group)?;
            let m = dm::is_member_dm(&f, x, &w)?;
            if !m.member {
                return Ok((json!({"member": false, "certificate": m}), EXIT_VIOLATION));
            }
            ok(dm::local_decomposition(&f, x, &w)?.to_json())
        }
        Command::ExactSeq { a, .. } => {
            if *a >= x.len() {
                return Err(Error::InvalidInput(format!("index {a} out of range")));
            }
            let w = p.window.map(|r| Window::cube(x.rank(), r));
            let r = dm::deletion_restriction(x, *a, w.as_ref())?;
            let code = if r.exact { EXIT_OK } else { EXIT_VIOLATION };
            Ok((serde_json::to_value(&r).expect("serializable"), code))
        }
        Command::FCheck { f, mode, .. } => {
            let mode: Mode = mode.parse()?;
            let (f, w) = load_function(f, &x.group)?;
            let c = filtration::is_member_f(&f, x, &w, mode)?;
            let code = if c.member { EXIT_OK } else { EXIT_VIOLATION };
            Ok((serde_json::to_value(&c).expect("serializable"), code))
        }
        Command::FDecompose { f, .. } => {
            let (f, w) = load_function(f, &x.group)?;
            let d = filtration::f_decompose(&f, x, &HashMap::new(), &w)?;
            let code = if d.roundtrip.exact { EXIT_OK } else { EXIT_VIOLATION };
            Ok((d.to_json()?, code))
        }
        Command::GenF(_) => {
            let w = p.working_window();
            let gens = filtration::generators_f(x)?;
            let el = gens
                .iter()
                .map(|(face, g)| {
                    Ok(json!({"face": face.functional.iter().map(format_rational).collect::<Vec<_>>(),
                              "table": g.tabulate(&w)?.to_json()}))
                })
                .collect::<Result<Vec<_>>>()?;
            ok(json!({"count": gens.len(), "generators": el}))
        }
        Command::Partition { lambda, .. } => {
            let l = parse_list(lambda, parse_int)?;
            ok(json!({"count": partition::partition_count(x, &l)?}))
        }
        Command::CellQuasipoly { cell, .. } => {
            let cells = chars::big_cells(x)?;
            let c = cells
                .get(*cell)
                .ok_or_else(|| Error::InvalidInput(format!("cell {cell} out of range (have {})", cells.len())))?;
            let q = partition::cell_quasipoly(x, c, &p.working_window())?;
            let code = if q.membership.member { EXIT_OK } else { EXIT_VIOLATION };
            Ok((q.to_json(&p.working_window())?, code))
        }
        Command::Verify { .. } => unreachable!("handled above"),
    }
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// TSV rendering: one `key<TAB>value` row per top-level field; arrays of
/// records expand to one row per entry.
pub fn render_tsv(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                match val {
                    Value::Array(items) => {
                        for (i, it) in items.iter().enumerate() {
                            out.push_str(&format!("{k}\t{i}\t{}\n", tsv_cell(it)));
                        }
                    }
                    other => out.push_str(&format!("{k}\t{}\n", tsv_cell(other))),
                }
            }
        }
        other => out.push_str(&format!("{}\n", tsv_cell(other))),
    }
    out
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_OK, stdout: e.to_string(), stderr: vec![] };
            }
            let payload = json!({"error": {"reason": "InvalidInput", "message": e.to_string()}});
            return Outcome { code: EXIT_INVALID, stdout: format!("{payload}\n"), stderr: vec![] };
        }
    };
    let common = cli.command.common().clone();
    let mut stderr = Vec::new();
    let (doc, code) = match dispatch(&cli.command, &mut stderr) {
        Ok(r) => r,
        Err(e) => (error_payload(&e), exit_code(&e)),
    };
    let text = match common.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")),
        Format::Tsv => render_tsv(&doc),
    };
    if let Some(path) = &common.out {
        if let Err(e) = std::fs::write(path, &text) {
            let err = Error::InvalidInput(format!("cannot write {}: {e}", path.display()));
            return Outcome { code: EXIT_INVALID, stdout: format!("{}\n", error_payload(&err)), stderr };
        }
        return Outcome { code, stdout: String::new(), stderr };
    }
    Outcome { code, stdout: text, stderr }
}

/// Builds a problem document for `x`.
pub fn problem_json(x: &CharacterList, window: Option<i64>) -> Value {
    let mut v = x.to_json();
    if let Some(r) = window {
        v["window"] = json!(r);
    }
    v
}


//! The `klcy` command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use klcy::cells::{CellKind, Cells};
use klcy::coxeter::{CoxeterGroup, Element};
use klcy::findimalg::{ext_table, minimal_resolution, BettiTable, DEFAULT_MAX_LEN};
use klcy::serre::{classify_cy, cy_check, sl2_candidates, CYReport, CYStatus};
use klcy::typea::{self, Partition, StandardTableau};
use klcy::{catalog, shifts, verify, Error, KLTable};

mod input;

#[derive(Debug)]
pub enum CliError {
    Domain(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

fn positive() -> clap::builder::RangedU64ValueParser<usize> {
    clap::builder::RangedU64ValueParser::new().range(1..)
}

#[derive(Parser, Debug)]
#[command(name = "klcy", version, about = "Kazhdan-Lusztig cells, shifts and Calabi-Yau objects in graded category O")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct RunConfig {
    /// Cartan type such as A3, B4 or I2(5)
    #[arg(long = "type", global = true, value_name = "TYPE")]
    pub ty: Option<String>,
    /// JSON file holding `{"matrix": [[...]]}` or `{"type": ...}`
    #[arg(long, global = true, value_name = "FILE")]
    pub matrix_file: Option<PathBuf>,
    /// Catalog name (see `catalog list`) or presentation file
    #[arg(long, global = true, value_name = "NAME|FILE")]
    pub algebra: Option<String>,
    /// Write the artifact here instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Longest resolution computed before giving up
    #[arg(long, visible_alias = "max", global = true, default_value_t = DEFAULT_MAX_LEN,
          value_parser = positive())]
    pub max_len: usize,
    /// Largest group enumerated
    #[arg(long, global = true, value_parser = positive())]
    pub cap: Option<usize>,
    /// Seed for sampled elements
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kazhdan-Lusztig polynomials h_{x,y} and μ(x,y)
    Kl {
        /// `all`, or one pair `x,y` given as words such as `s1s2,s1s2s1`
        #[arg(long, default_value = "all")]
        pairs: String,
    },
    /// Left, right or two-sided cells
    Cells {
        #[arg(long, default_value = "left", value_parser = ["left", "right", "two-sided"])]
        kind: String,
    },
    /// Lusztig's a-function
    Afun {
        /// Elements to evaluate; every element when omitted
        #[arg(long = "element", value_name = "WORD")]
        elements: Vec<String>,
        /// Evaluate this many elements drawn with --seed
        #[arg(long, conflicts_with = "elements")]
        sample: Option<usize>,
    },
    /// Robinson-Schensted correspondence
    Rs {
        /// One-line notation, e.g. 4,2,3,1
        #[arg(long)]
        perm: String,
    },
    /// Calabi-Yau shifts of every two-sided cell
    ShiftsTable,
    /// The (hom, grade) scatter of the shifts of S_n
    Figure1 {
        #[arg(long)]
        n: usize,
        /// Also write the scatter as SVG
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Minimal projective resolution of a module
    Resolve {
        /// P_v, I_v, L_v, delta_e or nabla_e, with optional shift such as P_s<1>
        #[arg(long)]
        module: String,
    },
    /// Graded ext dimensions ext^m(M, N<j>)
    Ext {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
    },
    /// Serre functor test for Calabi-Yau objects
    CyCheck {
        /// A module, or `all` for every standard module
        #[arg(long, default_value = "all")]
        module: String,
        /// Shorthand for --format json
        #[arg(long)]
        json: bool,
    },
    /// Run verification suites; exits 2 when a check fails
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Bundled algebras
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
    /// Print a presentation as JSON
    Show { name: String },
}

pub enum Outcome {
    Ok,
    Failed,
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Kl { pairs } => kl(cfg, pairs),
        Command::Cells { kind } => cells(cfg, kind),
        Command::Afun { elements, sample } => afun(cfg, elements, *sample),
        Command::Rs { perm } => rs(cfg, perm),
        Command::ShiftsTable => shifts_table(cfg),
        Command::Figure1 { n, svg } => figure1(cfg, *n, svg.as_ref()),
        Command::Resolve { module } => resolve(cfg, module),
        Command::Ext { from, to, max_deg } => ext(cfg, from, to, *max_deg),
        Command::CyCheck { module, json } => cy(cfg, module, *json),
        Command::Verify { suite } => run_verify(cfg, suite),
        Command::Catalog { action } => catalog_cmd(cfg, action),
    }
}

fn format_or(cfg: &RunConfig, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = cfg.format.unwrap_or(default);
    if !allowed.contains(&f) {
        let names: Vec<String> = allowed.iter().map(|a| format!("{a:?}").to_lowercase()).collect();
        return Err(CliError::Usage(format!("--format {f:?} is not available here; use {}", names.join(" or ")).to_lowercase()));
    }
    Ok(f)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<(), CliError> {
    emit(cfg, &serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?)
}

fn to_csv<R: Serialize>(rows: &[R]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn load_group(cfg: &RunConfig) -> Result<Arc<CoxeterGroup>, CliError> {
    input::group(cfg.ty.as_deref(), cfg.matrix_file.as_deref(), cfg.cap)
}

fn word(g: &CoxeterGroup, w: Element) -> String {
    g.format_word(w.index())
}

#[derive(Serialize)]
struct KlRow {
    x: String,
    y: String,
    h: Value,
    mu: i64,
}

fn kl(cfg: &RunConfig, pairs: &str) -> Result<Outcome, CliError> {
    let fmt = format_or(cfg, Format::Json, &[Format::Json, Format::Text])?;
    let g = load_group(cfg)?;
    let kl = KLTable::new(g.clone());
    let mut selected = Vec::new();
    if pairs == "all" {
        for y in g.enumerate() {
            for x in g.enumerate() {
                if g.bruhat_leq(x, y)? {
                    selected.push((x, y));
                }
            }
        }
    } else {
        let (x, y) = pairs
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("bad --pairs `{pairs}`; expected `all` or `x,y`")))?;
        selected.push((g.parse(x.trim())?, g.parse(y.trim())?));
    }
    let mut rows = Vec::new();
    for (x, y) in selected {
        let h = kl.kl_poly(x, y)?;
        rows.push(KlRow { x: word(&g, x), y: word(&g, y), h: h.to_json(), mu: kl.mu(x, y)? });
    }
    if fmt == Format::Text {
        let lines: Vec<String> = rows
            .iter()
            .map(|r| format!("h[{}, {}] = {}  mu = {}", r.x, r.y, klcy::LaurentPoly::from_json(&r.h).unwrap(), r.mu))
            .collect();
        emit(cfg, &lines.join("\n"))?;
    } else {
        emit_json(cfg, &rows)?;
    }
    Ok(Outcome::Ok)
}

fn cells(cfg: &RunConfig, kind: &str) -> Result<Outcome, CliError> {
    let fmt = format_or(cfg, Format::Json, &[Format::Json, Format::Text])?;
    let kind: CellKind = kind.parse()?;
    let g = load_group(cfg)?;
    let kl = KLTable::new(g.clone());
    let cells = Cells::new(&kl);
    let classes: Vec<Vec<String>> =
        cells.partition(kind).classes().iter().map(|c| c.iter().map(|&w| g.format(w)).collect()).collect();
    if fmt == Format::Text {
        let lines: Vec<String> = classes.iter().map(|c| format!("{{{}}}", c.join("; "))).collect();
        emit(cfg, &lines.join("\n"))?;
    } else {
        emit_json(cfg, &json!({ "type": g.system().name(), "kind": kind, "cells": classes }))?;
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct AfunRow {
    element: String,
    a: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<String>,
}

fn afun(cfg: &RunConfig, elements: &[String], sample: Option<usize>) -> Result<Outcome, CliError> {
    let fmt = format_or(cfg, Format::Json, &[Format::Json, Format::Csv, Format::Text])?;
    let g = load_group(cfg)?;
    let kl = KLTable::new(g.clone());
    let cells = Cells::new(&kl);
    let chosen: Vec<Element> = if !elements.is_empty() {
        elements.iter().map(|e| g.parse(e)).collect::<Result<_, _>>()?
    } else if let Some(k) = sample {
        let mut rng = rand::rngs::StdRng::seed_from_u64(cfg.seed);
        let mut all: Vec<Element> = g.enumerate().collect();
        all.shuffle(&mut rng);
        all.truncate(k);
        all.sort();
        all
    } else {
        g.enumerate().collect()
    };
    let mut rows = Vec::new();
    for w in chosen {
        let shape = typea::shape_of(&g, w).ok().map(|p| p.to_string());
        rows.push(AfunRow { element: word(&g, w), a: cells.a_function(w)?, shape });
    }
    match fmt {
        Format::Csv => emit(cfg, &to_csv(&rows)?)?,
        Format::Text => {
            let lines: Vec<String> = rows.iter().map(|r| format!("a({}) = {}", r.element, r.a)).collect();
            emit(cfg, &lines.join("\n"))?;
        }
        _ => emit_json(cfg, &rows)?,
    }
    Ok(Outcome::Ok)
}

fn tableau_rows(t: &StandardTableau) -> String {
    t.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("\n")
}

fn rs(cfg: &RunConfig, perm: &str) -> Result<Outcome, CliError> {
    let fmt = format_or(cfg, Format::Text, &[Format::Json, Format::Text])?;
    let p: Vec<usize> = perm
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad --perm `{perm}`; expected one-line notation such as 4,2,3,1")))?;
    let (pt, qt) = typea::rs(&p)?;
    let value = json!({ "perm": p, "P": pt.rows(), "Q": qt.rows(), "shape": pt.shape().parts() });
    if fmt == Format::Json {
        emit_json(cfg, &value)?;
    } else {
        let text = format!(
            "P\n{}\n\nQ\n{}\n\nshape {}\n{}",
            tableau_rows(&pt),
            tableau_rows(&qt),
            pt.shape(),
            serde_json::to_string(&value).unwrap()
        );
        emit(cfg, &text)?;
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct ShiftRow {
    cell: String,
    w0_cell: String,
    a: u32,
    a_w0: u32,
    hom_shift: i64,
    grade_shift: i64,
}

fn shifts_table(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let fmt = format_or(cfg, Format::Csv, &[Format::Json, Format::Csv])?;
    let g = load_group(cfg)?;
    let mut rows = Vec::new();
    if let (Some(n), None) = (g.type_a_degree(), &cfg.matrix_file) {
        for lambda in Partition::all(n) {
            let w0 = typea::w0_shape(&lambda);
            let s = shifts::shift_of_shape(&lambda);
            rows.push(ShiftRow {
                cell: lambda.to_string(),
                w0_cell: w0.to_string(),
                a: typea::shape_a(&lambda) as u32,
                a_w0: typea::shape_a(&w0) as u32,
                hom_shift: s.hom_shift,
                grade_shift: s.grade_shift,
            });
        }
    } else {
        let kl = KLTable::new(g.clone());
        let cells = Cells::new(&kl);
        let j = cells.partition(CellKind::TwoSided);
        let mut seen = std::collections::BTreeSet::new();
        for (d, class, s) in shifts::shift_table(&cells)? {
            if !seen.insert(class) {
                continue;
            }
            let w0d = g.w0_mult(d);
            rows.push(ShiftRow {
                cell: word(&g, d),
                w0_cell: word(&g, j.classes()[j.class_of(w0d)][0]),
                a: cells.a_function(d)?,
                a_w0: cells.a_function(w0d)?,
                hom_shift: s.hom_shift,
                grade_shift: s.grade_shift,
            });
        }
    }
    if fmt == Format::Json {
        emit_json(cfg, &rows)?;
    } else {
        emit(cfg, &to_csv(&rows)?)?;
    }
    Ok(Outcome::Ok)
}

fn figure1(cfg: &RunConfig, n: usize, svg: Option<&PathBuf>) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let fmt = format_or(cfg, Format::Json, &[Format::Json, Format::Csv, Format::Svg])?;
    let dots = shifts::figure1_coordinates(n);
    if let Some(path) = svg {
        std::fs::write(path, shifts::figure1_svg(&dots)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    match fmt {
        Format::Svg => emit(cfg, &shifts::figure1_svg(&dots))?,
        Format::Csv => {
            let rows: Vec<_> = dots
                .iter()
                .map(|d| (d.partition.to_string(), d.w0_partition.to_string(), d.a, d.a_w0, d.x, d.y))
                .collect();
            let mut text = String::from("cell,w0_cell,a,a_w0,hom_shift,grade_shift\n");
            text.push_str(&to_csv(&rows)?);
            emit(cfg, &text)?;
        }
        _ => {
            let collisions: Vec<Value> = shifts::hom_collisions(&dots)
                .into_iter()
                .map(|(x, ds)| json!({ "hom_shift": x, "cells": ds.iter().map(|d| d.partition.to_string()).collect::<Vec<_>>() }))
                .collect();
            let dots: Vec<Value> = dots
                .iter()
                .map(|d| {
                    json!({ "cell": d.partition.to_string(), "w0_cell": d.w0_partition.to_string(),
                            "a": d.a, "a_w0": d.a_w0, "hom_shift": d.x, "grade_shift": d.y })
                })
                .collect();
            emit_json(cfg, &json!({ "n": n, "dots": dots, "collisions": collisions }))?;
        }
    }
    Ok(Outcome::Ok)
}

fn betti_json(b: &BettiTable) -> Vec<Value> {
    b.iter().map(|(k, row)| json!({ "position": k, "summands": row })).collect()
}

fn betti_text(b: &BettiTable) -> String {
    b.iter()
        .map(|(k, row)| {
            let terms: Vec<String> = row.iter().map(|(v, s)| format!("P_{v}<{s}>")).collect();
            format!("P^-{k}: {}", terms.join(" + "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn resolve(cfg: &RunConfig, module: &str) -> Result<Outcome, CliError> {
    let fmt = format_or(cfg, Format::Json, &[Format::Json, Format::Text])?;
    let pres = input::algebra(cfg.algebra.as_deref())?;
    let alg = pres.algebra()?;
    let m = input::module(&alg, module)?;
    let p = minimal_resolution(&m, cfg.max_len);
    let betti = p.betti_table();
    if fmt == Format::Text {
        let mut text = betti_text(&betti);
        if let Some(k) = p.truncated() {
            text.push_str(&format!("\n(truncated after {k} terms)"));
        }
        emit(cfg, &text)?;
    } else {
        emit_json(
            cfg,
            &json!({
                "algebra": pres.name,
                "module": module,
                "graded_dims": m.dump().graded_dims,
                "resolution": betti_json(&betti),
                "truncated": p.truncated(),
            }),
        )?;
    }
    Ok(Outcome::Ok)
}

fn ext(cfg: &RunConfig, from: &str, to: &str, max_deg: usize) -> Result<Outcome, CliError> {
    let fmt = format_or(cfg, Format::Json, &[Format::Json, Format::Csv, Format::Text])?;
    let pres = input::algebra(cfg.algebra.as_deref())?;
    let alg = pres.algebra()?;
    let m = input::module(&alg, from)?;
    let n = input::module(&alg, to)?;
    let table = ext_table(&m, &n, max_deg)?;
    let rows: Vec<(i32, i32, usize)> = table.iter().map(|(&(k, j), &d)| (k, j, d)).collect();
    match fmt {
        Format::Csv => {
            let mut text = String::from("m,j,dim\n");
            text.push_str(&to_csv(&rows)?);
            emit(cfg, &text)?;
        }
        Format::Text => {
            let lines: Vec<String> = rows.iter().map(|(k, j, d)| format!("ext^{k}({from}, {to}<{j}>) = {d}")).collect();
            emit(cfg, &lines.join("\n"))?;
        }
        _ => {
            let rows: Vec<Value> = rows.iter().map(|(k, j, d)| json!({ "m": k, "j": j, "dim": d })).collect();
            emit_json(cfg, &json!({ "algebra": pres.name, "from": from, "to": to, "max_deg": max_deg, "ext": rows }))?;
        }
    }
    Ok(Outcome::Ok)
}

fn report_json(r: &CYReport) -> Value {
    let mut v = json!({ "module": r.name, "summary": r.summary() });
    let (status, extra) = match &r.status {
        CYStatus::CY { hom_shift, grade_shift, .. } => ("cy", json!({ "hom_shift": hom_shift, "grade_shift": grade_shift })),
        CYStatus::NotCY { support, reason } => ("not_cy", json!({ "homology_support": support, "reason": reason })),
        CYStatus::Undecided { hom_shift, grade_shift } => {
            ("undecided", json!({ "hom_shift": hom_shift, "grade_shift": grade_shift }))
        }
        CYStatus::Truncated { max_len } => ("truncated", json!({ "max_len": max_len })),
    };
    let obj = v.as_object_mut().unwrap();
    obj.insert("status".into(), status.into());
    obj.extend(extra.as_object().unwrap().clone());
    v
}

fn cy(cfg: &RunConfig, module: &str, json_flag: bool) -> Result<Outcome, CliError> {
    let default = if json_flag { Format::Json } else { Format::Text };
    let fmt = format_or(cfg, default, &[Format::Json, Format::Text])?;
    let pres = input::algebra(cfg.algebra.as_deref())?;
    let alg = pres.algebra()?;
    if module != "all" {
        let m = input::module(&alg, module)?;
        let r = cy_check(module, &m, None, cfg.max_len)?;
        if fmt == Format::Json {
            emit_json(cfg, &report_json(&r))?;
        } else {
            emit(cfg, &format!("{}: {}", r.name, r.summary()))?;
        }
        return Ok(Outcome::Ok);
    }
    let candidates = if pres.name == "sl2" { sl2_candidates(&alg)? } else { input::standard_modules(&alg) };
    let c = classify_cy(&candidates, cfg.max_len)?;
    if fmt == Format::Json {
        let classes: Vec<Value> =
            c.classes.iter().map(|k| json!({ "members": k.members, "report": report_json(&k.report) })).collect();
        emit_json(
            cfg,
            &json!({ "algebra": pres.name, "classes": classes, "by_dimension": c.by_dimension, "not_cy": c.not_cy }),
        )?;
    } else {
        let lines: Vec<String> =
            c.classes.iter().map(|k| format!("{{{}}}: {}", k.members.join(", "), k.report.summary())).collect();
        emit(cfg, &lines.join("\n"))?;
    }
    Ok(Outcome::Ok)
}

fn run_verify(cfg: &RunConfig, suite: &str) -> Result<Outcome, CliError> {
    let fmt = format_or(cfg, Format::Text, &[Format::Json, Format::Text])?;
    let pres = cfg.algebra.as_deref().map(|a| input::algebra(Some(a))).transpose()?;
    let reports = verify::run(suite, pres.as_ref())?;
    let ok = reports.iter().all(|r| r.passed());
    if fmt == Format::Json {
        emit_json(cfg, &json!({ "passed": ok, "suites": reports }))?;
    } else {
        let mut lines = Vec::new();
        for r in &reports {
            for c in &r.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                lines.push(format!("{mark} {}/{}: {}", r.suite, c.name, c.detail));
            }
            let mark = if r.passed() { "PASS" } else { "FAIL" };
            lines.push(format!("{mark} {} ({} ms)", r.suite, r.millis));
        }
        emit(cfg, &lines.join("\n"))?;
    }
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}

fn catalog_cmd(cfg: &RunConfig, action: &CatalogAction) -> Result<Outcome, CliError> {
    match action {
        CatalogAction::List => {
            let fmt = format_or(cfg, Format::Text, &[Format::Json, Format::Text])?;
            let entries = catalog::list();
            if fmt == Format::Json {
                emit_json(cfg, &entries)?;
            } else {
                let lines: Vec<String> = entries.iter().map(|e| format!("{:<16} {}", e.name, e.description)).collect();
                emit(cfg, &lines.join("\n"))?;
            }
        }
        CatalogAction::Show { name } => {
            let pres = input::algebra(Some(name))?;
            let text = pres
                .to_json()
                .ok_or_else(|| CliError::Usage(format!("`{name}` is given by structure constants and has no quiver presentation")))?;
            emit(cfg, &text)?;
        }
    }
    Ok(Outcome::Ok)
}

//! Command-line front end: literal and file parsers, the shipped catalog, and
//! deterministic text/JSON reports.

pub mod input;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use vfield::apps::{self, MetricCheck, SystemGeometry};
use vfield::casimir::{casimir_metric_with, CasimirMetricResult};
use vfield::catalog::{verify_entry, Catalog, CatalogEntry, EntryReport, Status};
use vfield::distr::{find_invariant_distributions, generic_domain, killing_obstruction_constant_frame};
use vfield::geom::{bracket, conformal_factor, is_killing, lie_derivative_cov, scalar_curvature};
use vfield::liealg::{killing_form, structure_constants, LieError};
use vfield::{Expr, Parameter, Scope};

use input::{parse_algebra_file, parse_field, parse_metric, parse_param_decl, AlgebraFile, InputError};
use report::{code, matrix, matrix_json, Format, Report};

/// The catalog shipped with the tool.
pub const CATALOG_JSON: &str = include_str!("../data/catalog.json");

pub fn builtin_catalog() -> Catalog {
    serde_json::from_str(CATALOG_JSON).expect("shipped catalog parses")
}

#[derive(Parser, Debug)]
#[command(name = "vfield", version, about = "Lie algebras of planar vector fields: brackets, Killing and conformal geometry, Casimir metrics")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Declare a parameter usable in literals: NAME or NAME:free|nonzero|positive|integer.
    #[arg(long = "param", value_name = "DECL", global = true)]
    pub params: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lie bracket [A, B] of two fields.
    Bracket { a: String, b: String },
    /// Lie derivative of a metric along a field.
    Lieder { field: String, metric: String },
    /// Conformal factor f with L_X g = f g, if one exists.
    Conformal { field: String, metric: String },
    /// Whether L_X g = 0.
    Killing { field: String, metric: String },
    /// Scalar curvature (R = 2K).
    Curvature { metric: String },
    /// Casimir tensor fields and induced metrics of an algebra file.
    CasimirMetric { file: PathBuf },
    /// Invariant rank-one distributions of an algebra file.
    InvariantDist {
        file: PathBuf,
        /// Additional candidate generator.
        #[arg(long = "candidate", value_name = "FIELD")]
        candidates: Vec<String>,
    },
    /// Generic domain of an algebra file.
    Domain { file: PathBuf },
    /// Constant-frame Killing metrics for a commuting pair Xi, Xj (1-based).
    Obstruction { file: PathBuf, i: usize, j: usize },
    /// The classification table.
    Catalog {
        /// Read the catalog from a file instead of the shipped one.
        #[arg(long, value_name = "PATH")]
        catalog: Option<PathBuf>,
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Worked Lie systems.
    Example {
        #[command(subcommand)]
        which: ExampleKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// List all rows.
    List,
    /// Show a row and its instantiated basis.
    Show {
        id: String,
        /// Parameter assignment NAME=VALUE.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Verify a row, or `all` rows over the default grid.
    Verify {
        id: String,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExampleKind {
    /// x'' = -omega(t)^2 x + c/x^3.
    MilnePinney {
        /// Value of c; symbolic (nonzero) when omitted.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Two-level Schrödinger equation on CP1.
    Schrodinger,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Degenerate(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Algebra(e) => lie_failure(e),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn lie_failure(e: LieError) -> Failure {
    match e {
        LieError::Empty | LieError::Dependent { .. } | LieError::Mismatch { .. } => Failure::Usage(e.to_string()),
        e => Failure::Degenerate(e.to_string()),
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        lie_failure(e)
    }
}

/// Parses `argv` (including the program name) and executes.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let is_info = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            return if is_info {
                Outcome { code: code::OK, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: code::USAGE, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => Outcome { code: r.code, stdout: r.render(cli.format), stderr: String::new() },
        Err(Failure::Usage(m)) => Outcome { code: code::USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Degenerate(m)) => {
            Outcome { code: code::DEGENERATE, stdout: String::new(), stderr: format!("error: {m}\n") }
        }
    }
}

fn scope(cli: &Cli) -> Result<Scope, Failure> {
    let mut s = Scope::new();
    for p in &cli.params {
        let p = parse_param_decl(p)?;
        s.declare(p);
    }
    Ok(s)
}

fn read_algebra(path: &PathBuf, scope: &Scope) -> Result<AlgebraFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_algebra_file(&text, scope)?)
}

fn algebra_inputs(r: &mut Report, f: &AlgebraFile) {
    for (n, x) in f.names.iter().zip(f.algebra.basis()) {
        r.input(n, x);
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let sc = scope(cli)?;
    match &cli.command {
        Command::Bracket { a, b } => {
            let (x, y) = (parse_field(a, &sc)?, parse_field(b, &sc)?);
            let z = bracket(&x, &y);
            let mut r = Report::new("bracket");
            r.input("A", &x).input("B", &y);
            r.line("[A, B]", &z).data("bracket", &z).data("canonical", z.to_string());
            Ok(r)
        }
        Command::Lieder { field, metric } => {
            let (x, g) = (parse_field(field, &sc)?, parse_metric(metric, &sc)?);
            let l = lie_derivative_cov(&x, &g);
            let z = l.is_zero();
            let mut r = Report::new("lieder");
            r.input("X", &x).input("g", &g);
            r.line("L_X g", &l).line("zero", z);
            r.data("lie_derivative", &l).data("canonical", l.to_string()).data("zero", z);
            Ok(r)
        }
        Command::Conformal { field, metric } => {
            let (x, g) = (parse_field(field, &sc)?, parse_metric(metric, &sc)?);
            let f = conformal_factor(&x, &g);
            let mut r = Report::new("conformal");
            r.input("X", &x).input("g", &g);
            match &f {
                Some(c) => {
                    r.line("conformal", format!("yes, L_X g = ({}) g [{}]", c.value, c.certainty));
                }
                None => {
                    r.line("conformal", "no");
                }
            }
            r.data("conformal", f.is_some())
                .data("factor", f.as_ref().map(|c| c.value.to_string()))
                .data("certainty", f.as_ref().map(|c| c.certainty));
            Ok(r)
        }
        Command::Killing { field, metric } => {
            let (x, g) = (parse_field(field, &sc)?, parse_metric(metric, &sc)?);
            let v = is_killing(&x, &g);
            let mut r = Report::new("killing");
            r.input("X", &x).input("g", &g);
            r.line("killing", v).data("killing", v);
            Ok(r)
        }
        Command::Curvature { metric } => {
            let g = parse_metric(metric, &sc)?;
            let k = scalar_curvature(&g).map_err(|e| Failure::Degenerate(e.to_string()))?;
            let mut r = Report::new("curvature");
            r.input("g", &g);
            r.line("R", format!("{} [{}]", k.value, k.certainty));
            r.data("scalar_curvature", k.value.to_string()).data("certainty", k.certainty);
            r.data("constant", k.value.is_constant());
            Ok(r)
        }
        Command::CasimirMetric { file } => casimir_report(&read_algebra(file, &sc)?),
        Command::InvariantDist { file, candidates } => {
            let f = read_algebra(file, &sc)?;
            let scope = f.algebra.scope().clone();
            let extra = candidates.iter().map(|c| parse_field(c, &scope)).collect::<Result<Vec<_>, _>>()?;
            let s = find_invariant_distributions(&f.algebra, &extra);
            let mut r = Report::new("invariant-dist");
            algebra_inputs(&mut r, &f);
            for (k, c) in extra.iter().enumerate() {
                r.input(&format!("candidate {}", k + 1), c);
            }
            for d in &s.distributions {
                r.line("distribution", format!("{} [{}]", d.generator, d.verdict.certainty));
            }
            for fam in &s.families {
                let (a, b) = (&f.names[fam.i], &f.names[fam.j]);
                r.line("family", format!("lambda1*{a} + lambda2*{b}, all (lambda1 : lambda2)"));
            }
            if s.distributions.is_empty() && s.families.is_empty() {
                r.line("distribution", "none found");
            }
            r.line("exhaustive", s.exhaustive);
            r.data("distributions", &s.distributions).data("families", &s.families).data("exhaustive", s.exhaustive);
            Ok(r)
        }
        Command::Domain { file } => {
            let f = read_algebra(file, &sc)?;
            let d = generic_domain(&f.algebra);
            let mut r = Report::new("domain");
            algebra_inputs(&mut r, &f);
            r.line("generic rank", d.generic_rank).line("domain", &d.description);
            r.data("domain", &d);
            Ok(r)
        }
        Command::Obstruction { file, i, j } => {
            let f = read_algebra(file, &sc)?;
            if *i == 0 || *j == 0 {
                return Err(Failure::Usage("field indices are 1-based".into()));
            }
            let s = killing_obstruction_constant_frame(&f.algebra, i - 1, j - 1)
                .map_err(|e| Failure::Degenerate(e.to_string()))?;
            let mut r = Report::new("obstruction");
            algebra_inputs(&mut r, &f);
            r.input("pair", format!("{}, {}", f.names[i - 1], f.names[j - 1]));
            r.line("dimension", s.dimension);
            for g in &s.metrics {
                r.line("solution", g);
            }
            let deg = vfield::distr::all_degenerate(&s.metrics);
            r.line("all degenerate", deg);
            r.data("solutions", &s).data("all_degenerate", deg);
            Ok(r)
        }
        Command::Catalog { catalog, action } => {
            let cat = match catalog {
                Some(p) => {
                    let text =
                        std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
                }
                None => builtin_catalog(),
            };
            catalog_command(&cat, action)
        }
        Command::Example { which } => match which {
            ExampleKind::MilnePinney { c } => milne_pinney(c.as_deref()),
            ExampleKind::Schrodinger => schrodinger(),
        },
    }
}

fn casimir_lines(r: &mut Report, res: &[CasimirMetricResult]) {
    for (k, c) in res.iter().enumerate() {
        let p = format!("casimir {}", k + 1);
        r.line(format!("{p} C"), &c.casimir);
        r.line(format!("{p} G"), &c.tensor);
        r.line(format!("{p} det G"), format!("{} [{}]", c.det, c.det_test));
        match &c.metric {
            Some(g) => {
                r.line(format!("{p} g"), g);
            }
            None => {
                r.line(format!("{p} g"), "degenerate");
            }
        }
        if let Some(w) = &c.symplectic {
            r.line(format!("{p} omega"), w);
        }
        r.line(format!("{p} invariance"), c.all_invariant());
    }
}

fn casimir_report(f: &AlgebraFile) -> Result<Report, Failure> {
    let sc = structure_constants(&f.algebra)?;
    let kappa = killing_form(&sc);
    let res = casimir_metric_with(&f.algebra, &sc)?;
    let mut r = Report::new("casimir-metric");
    algebra_inputs(&mut r, f);
    r.line("brackets", &sc).line("killing form", matrix(&kappa));
    r.data("killing_form", matrix_json(&kappa));
    if res.is_empty() {
        r.line("casimirs", "none");
    }
    casimir_lines(&mut r, &res);
    r.data("casimirs", &res);
    if res.iter().all(|c| c.is_degenerate()) {
        r.code = code::DEGENERATE;
        r.note("no nondegenerate Casimir tensor");
    }
    Ok(r)
}

fn parse_assignment(set: &[String]) -> Result<BTreeMap<String, String>, Failure> {
    let mut out = BTreeMap::new();
    for s in set {
        let (k, v) = s.split_once('=').ok_or_else(|| Failure::Usage(format!("expected NAME=VALUE, got '{s}'")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn find<'a>(cat: &'a Catalog, id: &str) -> Result<&'a CatalogEntry, Failure> {
    cat.get(id).ok_or_else(|| Failure::Usage(format!("unknown catalog id '{id}'")))
}

fn catalog_failure(e: vfield::catalog::CatalogError) -> Failure {
    match e {
        vfield::catalog::CatalogError::Lie(l) => lie_failure(l),
        e => Failure::Usage(e.to_string()),
    }
}

fn assignments(e: &CatalogEntry, set: &BTreeMap<String, String>) -> Vec<BTreeMap<String, String>> {
    if !set.is_empty() || e.grid.is_empty() {
        vec![set.clone()]
    } else {
        e.grid.clone()
    }
}

fn params_text(e: &CatalogEntry) -> String {
    e.params
        .iter()
        .map(|p| {
            let mut s = format!("{} {}", p.name, p.constraint.name());
            if let Some(m) = &p.min {
                s.push_str(&format!(" >= {m}"));
            }
            if let Some(m) = &p.abs_below {
                s.push_str(&format!(" |.| < {m}"));
            }
            for x in &p.exclude {
                s.push_str(&format!(" != {x}"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn entry_lines(r: &mut Report, e: &EntryReport) {
    let label = e.label();
    for c in &e.cells {
        r.line(format!("{label} {}", c.column), format!("{} [{}] {}", c.status, c.certainty, c.detail));
    }
    if let Some(n) = &e.note {
        r.line(format!("{label} note"), format!("{n}; results are instance-level"));
    }
}

fn catalog_command(cat: &Catalog, action: &CatalogAction) -> Result<Report, Failure> {
    match action {
        CatalogAction::List => {
            let mut r = Report::new("catalog list");
            let mut rows = Vec::new();
            for e in &cat.entries {
                let params = params_text(e);
                let p = if params.is_empty() { String::new() } else { format!(" ({params})") };
                r.line(&e.id, format!("{}{p}, dim {} basis template", e.isomorphism, e.basis.len()));
                rows.push(json!({"id": e.id, "class": e.class, "isomorphism": e.isomorphism, "params": e.params}));
            }
            r.data("entries", rows);
            Ok(r)
        }
        CatalogAction::Show { id, set } => {
            let e = find(cat, id)?;
            let set = parse_assignment(set)?;
            let a = assignments(e, &set).into_iter().next().unwrap_or_default();
            let inst = e.instantiate(&a).map_err(catalog_failure)?;
            let mut r = Report::new("catalog show");
            r.input("id", &e.id);
            for (k, v) in &inst.assignment {
                r.input(k, v);
            }
            r.line("class", serde_json::to_value(e.class).unwrap().as_str().unwrap_or(""));
            r.line("isomorphism", &e.isomorphism);
            if !e.params.is_empty() {
                r.line("parameters", params_text(e));
            }
            for (k, x) in inst.algebra.basis().iter().enumerate() {
                r.line(format!("X{}", k + 1), x);
            }
            r.line("domain", inst.domain.as_ref().map_or("R^2".to_string(), |d| format!("{d} != 0")));
            for d in &inst.distributions {
                r.line("distribution", d);
            }
            for f in &e.families {
                r.line("family", format!("lambda1*X{} + lambda2*X{}", f[0] + 1, f[1] + 1));
            }
            r.line("kill", serde_json::to_value(inst.kill).unwrap().as_str().unwrap_or(""));
            r.line("conf", serde_json::to_value(e.conf).unwrap().as_str().unwrap_or(""));
            if let Some(n) = &e.note {
                r.note(n.clone());
            }
            r.data("entry", e).data("basis", inst.algebra.basis());
            Ok(r)
        }
        CatalogAction::Verify { id, set } => {
            let set = parse_assignment(set)?;
            let entries: Vec<&CatalogEntry> =
                if id.eq_ignore_ascii_case("all") { cat.entries.iter().collect() } else { vec![find(cat, id)?] };
            if id.eq_ignore_ascii_case("all") && !set.is_empty() {
                return Err(Failure::Usage("--set applies to a single id".into()));
            }
            let mut r = Report::new("catalog verify");
            r.input("id", id);
            for (k, v) in &set {
                r.input(k, v);
            }
            let mut reports = Vec::new();
            for e in entries {
                for a in assignments(e, &set) {
                    let rep = verify_entry(e, &a).map_err(catalog_failure)?;
                    entry_lines(&mut r, &rep);
                    reports.push(rep);
                }
            }
            let count = |s: Status| reports.iter().flat_map(|e| &e.cells).filter(|c| c.status == s).count();
            let (pass, fail, theory) = (count(Status::Pass), count(Status::Fail), count(Status::TheoryOnly));
            r.line("summary", format!("{pass} PASS, {fail} FAIL, {theory} THEORY-ONLY"));
            r.data("entries", &reports).data("pass", pass).data("fail", fail).data("theory_only", theory);
            if fail > 0 {
                r.code = code::MISMATCH;
            }
            Ok(r)
        }
    }
}

fn geometry_lines(r: &mut Report, s: &apps::LieSystemDecomposition, g: &SystemGeometry) {
    for (k, (x, c)) in s.basis().iter().zip(&s.coefficients).enumerate() {
        let coef = c.as_deref().map_or(String::from("(absent)"), |c| format!("coefficient {c}"));
        r.line(format!("X{}", k + 1), format!("{x}  [{coef}]"));
    }
    r.line("brackets", &g.structure);
    r.line("killing form", matrix(&g.killing_form));
    r.line("cartan criterion", g.cartan);
    r.line("classification", g.classification);
    casimir_lines(r, std::slice::from_ref(&g.casimir));
    for (k, h) in g.hamiltonian.iter().enumerate() {
        r.line(format!("X{} locally hamiltonian", k + 1), h);
    }
    if let Some(c) = &g.curvature {
        r.line("scalar curvature", format!("{} [{}]", c.value, c.certainty));
    }
    r.data("system", s)
        .data("killing_form", matrix_json(&g.killing_form))
        .data("cartan", g.cartan)
        .data("classification", g.classification.to_string())
        .data("casimir", &g.casimir)
        .data("hamiltonian", &g.hamiltonian)
        .data("scalar_curvature", g.curvature.as_ref().map(|c| c.value.to_string()));
}

fn milne_pinney(c: Option<&str>) -> Result<Report, Failure> {
    let mut p = Parameter::new("c", vfield::Constraint::Nonzero);
    let mut r = Report::new("example milne-pinney");
    if let Some(text) = c {
        let v = Expr::parse(text, &Scope::new())
            .ok()
            .and_then(|e| e.as_rational())
            .ok_or_else(|| Failure::Usage(format!("--c expects a rational number, got '{text}'")))?;
        if Expr::rational(v.clone()).is_zero_canonical() {
            return Err(Failure::Degenerate("c must be nonzero".into()));
        }
        r.input("c", Expr::rational(v.clone()));
        p = p.with_value(v);
    } else {
        r.input("c", "symbolic, nonzero");
    }
    let s = apps::milne_pinney_system(&p)?;
    let g = apps::system_geometry(&s)?;
    geometry_lines(&mut r, &s, &g);
    let checks = apps::mp_casimir_checks(&p)?;
    for c in &checks {
        r.line(format!("casimir check {}", c.label), if c.ad_invariant { "ad-invariant" } else { "not ad-invariant" });
    }
    r.data("casimir_checks", &checks);
    r.note("v1*v3 + v3*v1 - 2*v1*v1 is not ad-invariant; v1*v3 + v3*v1 - 2*v2*v2 is, and it maps to the tensor built from -2*X2*X2");
    Ok(r)
}

fn metric_check_lines(r: &mut Report, m: &MetricCheck) {
    for res in &m.residuals {
        r.line(format!("check {} L_X{} g", m.label, res.field + 1), format!("{} [{}]", res.lie_derivative, res.test));
    }
}

fn schrodinger() -> Result<Report, Failure> {
    let mut r = Report::new("example schrodinger");
    let s = apps::projective_schrodinger_system()?;
    let g = apps::system_geometry(&s)?;
    geometry_lines(&mut r, &s, &g);
    let checks = apps::so3_metric_checks();
    for m in &checks {
        metric_check_lines(&mut r, m);
    }
    r.data("metric_checks", &checks);
    r.note("the metric -2*log(1 + x^2 + y^2) gE leaves a nonzero Lie derivative along X2 of the so(3) row; (1 + x^2 + y^2)^-2 gE is invariant");
    Ok(r)
}

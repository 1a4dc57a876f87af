//! Table of planar Lie algebras of vector fields as data, with verification of
//! every machine-checkable column.
//!
//! Entries are deserialized from the JSON catalog shipped with the CLI. Basis
//! templates may contain `{r}` (an integer parameter substituted textually) and
//! repeat items with index `{k}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::casimir::{casimir_metric_with, CasimirMetricResult};
use crate::distr::{
    all_degenerate, find_invariant_distributions, generic_domain, killing_constant_frame,
    killing_obstruction_constant_frame, DistributionSearch, DomainReport,
};
use crate::expr::{Certainty, Constraint, Expr, Parameter, Scope, Substitution};
use crate::geom::{
    bracket, conformal_factor, lie_derivative_cov, sign_report, wedge_det, CovTensor2, SignReport, Verdict,
    VectorField,
};
use crate::liealg::{classify_3d_semisimple, killing_form, structure_constants, LieAlgebra, LieError, Semisimple3};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub schema: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id.eq_ignore_ascii_case(id))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructuralClass {
    Primitive,
    OneImprimitive,
    MultiplyImprimitive,
}

/// Claim of the Kill column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KillFlag {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// Claim of the Conf column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfFlag {
    None,
    #[serde(rename = "gE")]
    Euclidean,
    #[serde(rename = "gH")]
    Hyperbolic,
    #[serde(rename = "gE-and-gH")]
    Both,
}

impl ConfFlag {
    fn wants_e(self) -> bool {
        matches!(self, ConfFlag::Euclidean | ConfFlag::Both)
    }

    fn wants_h(self) -> bool {
        matches!(self, ConfFlag::Hyperbolic | ConfFlag::Both)
    }
}

/// Declared parameter with its admissible range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamDecl {
    pub name: String,
    #[serde(default = "free")]
    pub constraint: Constraint,
    /// Inclusive lower bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<String>,
    /// Exclusive bound on the absolute value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_below: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclude: Vec<String>,
}

fn free() -> Constraint {
    Constraint::Free
}

/// A single field or a run `k = from..=to` of fields with `{k}` substituted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisItem {
    Repeat { x: String, y: String, from: String, to: String },
    Field { x: String, y: String },
}

/// Conditional Kill flag: `kill` applies when every listed parameter has the
/// listed value, `otherwise` applies else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillCondition {
    pub when: BTreeMap<String, String>,
    pub otherwise: KillFlag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub class: StructuralClass,
    pub isomorphism: String,
    #[serde(default)]
    pub params: Vec<ParamDecl>,
    pub basis: Vec<BasisItem>,
    /// Domain condition `f != 0`; absent means the whole plane.
    #[serde(default)]
    pub domain: Option<String>,
    /// Expected isolated invariant distributions (generators).
    #[serde(default)]
    pub distributions: Vec<[String; 2]>,
    /// Expected projective-line families, as basis index pairs (0-based).
    #[serde(default)]
    pub families: Vec<[usize; 2]>,
    /// Candidate generators not discoverable from constant combinations.
    #[serde(default)]
    pub candidates: Vec<[String; 2]>,
    pub kill: KillFlag,
    #[serde(default)]
    pub kill_condition: Option<KillCondition>,
    pub conf: ConfFlag,
    /// Frame for a constant-frame Kill witness.
    #[serde(default)]
    pub witness_frame: Option<[[String; 2]; 2]>,
    /// Default verification grid: each map assigns every parameter.
    #[serde(default)]
    pub grid: Vec<BTreeMap<String, String>>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog id '{0}'")]
    UnknownId(String),
    #[error("parameter '{name}': {reason}")]
    Constraint { name: String, reason: String },
    #[error("parameter '{0}' is not declared by this entry")]
    UndeclaredParam(String),
    #[error("parameter '{0}' needs a value")]
    MissingParam(String),
    #[error("template error in {context}: {message}")]
    Template { context: String, message: String },
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A concrete algebra from a catalog row.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub id: String,
    pub assignment: Vec<(String, String)>,
    pub algebra: LieAlgebra,
    pub candidates: Vec<VectorField>,
    pub distributions: Vec<VectorField>,
    pub domain: Option<Expr>,
    pub witness_frame: Option<[VectorField; 2]>,
    pub kill: KillFlag,
}

fn rational(s: &str, ctx: &str) -> Result<BigRational, CatalogError> {
    Expr::parse(s, &Scope::new())
        .ok()
        .and_then(|e| e.as_rational())
        .ok_or_else(|| CatalogError::Template { context: ctx.to_string(), message: format!("'{s}' is not a number") })
}

fn check_value(d: &ParamDecl, v: &BigRational) -> Result<(), CatalogError> {
    let err = |reason: String| Err(CatalogError::Constraint { name: d.name.clone(), reason });
    if !d.constraint.admits(v) {
        return err(format!("must be {}", d.constraint.name()));
    }
    if let Some(m) = &d.min {
        if v < &rational(m, &d.name)? {
            return err(format!("must be >= {m}"));
        }
    }
    if let Some(m) = &d.abs_below {
        if v.abs() >= rational(m, &d.name)? {
            return err(format!("must satisfy |{}| < {m}", d.name));
        }
    }
    for x in &d.exclude {
        if v == &rational(x, &d.name)? {
            return err(format!("must differ from {x}"));
        }
    }
    Ok(())
}

fn fill(template: &str, ints: &[(&str, i64)]) -> String {
    let mut s = template.to_string();
    for (name, v) in ints {
        s = s.replace(&format!("{{{name}}}"), &v.to_string());
    }
    s
}

impl CatalogEntry {
    pub fn param(&self, name: &str) -> Option<&ParamDecl> {
        self.params.iter().find(|p| p.name == name)
    }

    /// Kill flag for an assignment.
    pub fn kill_for(&self, assignment: &BTreeMap<String, String>) -> KillFlag {
        match &self.kill_condition {
            None => self.kill,
            Some(c) => {
                let matches = c.when.iter().all(|(k, v)| {
                    assignment.get(k).is_some_and(|a| {
                        rational(a, k).ok().zip(rational(v, k).ok()).is_some_and(|(p, q)| p == q)
                    })
                });
                if matches {
                    self.kill
                } else {
                    c.otherwise
                }
            }
        }
    }

    /// Concrete basis for an assignment. Unassigned parameters stay symbolic
    /// with their declared sign constraint; integer parameters used in templates
    /// must be assigned.
    pub fn instantiate(&self, assignment: &BTreeMap<String, String>) -> Result<Instance, CatalogError> {
        for k in assignment.keys() {
            if self.param(k).is_none() {
                return Err(CatalogError::UndeclaredParam(k.clone()));
            }
        }
        let mut ints: Vec<(&str, i64)> = Vec::new();
        let mut scope = Scope::new();
        let mut subst = Substitution::new();
        let mut pairs = Vec::new();
        for d in &self.params {
            match assignment.get(&d.name) {
                Some(s) => {
                    let v = rational(s, &d.name)?;
                    check_value(d, &v)?;
                    pairs.push((d.name.clone(), format!("{}", Expr::rational(v.clone()))));
                    if d.constraint == Constraint::Integer {
                        ints.push((d.name.as_str(), v.to_integer().to_i64().unwrap_or(0)));
                    } else {
                        scope = scope.with(Parameter::new(&d.name, d.constraint));
                        subst = subst.param(&d.name, Expr::rational(v));
                    }
                }
                None if d.constraint == Constraint::Integer => return Err(CatalogError::MissingParam(d.name.clone())),
                None => scope = scope.with(Parameter::new(&d.name, d.constraint)),
            }
        }
        let expr = |s: &str, extra: &[(&str, i64)]| -> Result<Expr, CatalogError> {
            let mut all = ints.clone();
            all.extend_from_slice(extra);
            let text = fill(s, &all);
            let e = Expr::parse(&text, &scope)
                .map_err(|e| CatalogError::Template { context: self.id.clone(), message: format!("{text}: {e}") })?;
            e.substitute(&subst).map_err(|e| CatalogError::Template {
                context: self.id.clone(),
                message: format!("{text}: {e:?}"),
            })
        };
        let field = |p: &[String; 2]| -> Result<VectorField, CatalogError> {
            Ok(VectorField::new(expr(&p[0], &[])?, expr(&p[1], &[])?))
        };
        let mut basis = Vec::new();
        for item in &self.basis {
            match item {
                BasisItem::Field { x, y } => basis.push(VectorField::new(expr(x, &[])?, expr(y, &[])?)),
                BasisItem::Repeat { x, y, from, to } => {
                    let bound = |s: &str| -> Result<i64, CatalogError> {
                        expr(s, &[])?.as_integer().and_then(|n| n.to_i64()).ok_or_else(|| CatalogError::Template {
                            context: self.id.clone(),
                            message: format!("bound '{s}' is not an integer"),
                        })
                    };
                    for k in bound(from)?..=bound(to)? {
                        basis.push(VectorField::new(expr(x, &[("k", k)])?, expr(y, &[("k", k)])?));
                    }
                }
            }
        }
        let algebra = LieAlgebra::new(basis, scope.clone())?;
        let candidates = self.candidates.iter().map(field).collect::<Result<Vec<_>, _>>()?;
        let distributions = self.distributions.iter().map(field).collect::<Result<Vec<_>, _>>()?;
        let domain = self.domain.as_deref().map(|d| expr(d, &[])).transpose()?;
        let witness_frame = match &self.witness_frame {
            Some([a, b]) => Some([field(a)?, field(b)?]),
            None => None,
        };
        Ok(Instance {
            id: self.id.clone(),
            assignment: pairs,
            algebra,
            candidates,
            distributions,
            domain,
            witness_frame,
            kill: self.kill_for(assignment),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "THEORY-ONLY")]
    TheoryOnly,
}

impl core::fmt::Display for Status {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::TheoryOnly => "THEORY-ONLY",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    Closure,
    Classification,
    Domain,
    Distributions,
    Kill,
    Conf,
}

impl core::fmt::Display for Column {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Column::Closure => "closure",
            Column::Classification => "classification",
            Column::Domain => "domain",
            Column::Distributions => "distributions",
            Column::Kill => "kill",
            Column::Conf => "conf",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub column: Column,
    pub status: Status,
    pub certainty: Certainty,
    pub detail: String,
}

impl Cell {
    fn new(column: Column, status: Status, certainty: Certainty, detail: String) -> Self {
        Cell { column, status, certainty, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub assignment: Vec<(String, String)>,
    pub dimension: usize,
    pub cells: Vec<Cell>,
    /// Instance-level results: family functions and parameters are fixed.
    pub instance_level: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kill_witness: Option<CovTensor2>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl EntryReport {
    pub fn cell(&self, c: Column) -> Option<&Cell> {
        self.cells.iter().find(|x| x.column == c)
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn label(&self) -> String {
        if self.assignment.is_empty() {
            self.id.clone()
        } else {
            let a: Vec<String> = self.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}[{}]", self.id, a.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub entries: Vec<EntryReport>,
    pub pass: usize,
    pub fail: usize,
    pub theory_only: usize,
}

fn same_distribution(a: &VectorField, b: &VectorField) -> bool {
    wedge_det(a, b).is_zero().is_zero()
}

fn check_closure(inst: &Instance) -> (Cell, Option<crate::liealg::StructureConstants>) {
    match structure_constants(&inst.algebra) {
        Ok(c) => {
            let ok = c.is_antisymmetric() && c.satisfies_jacobi();
            let status = if ok { Status::Pass } else { Status::Fail };
            (Cell::new(Column::Closure, status, Certainty::Proved, format!("{c}")), Some(c))
        }
        Err(e) => (Cell::new(Column::Closure, Status::Fail, Certainty::Proved, format!("{e}")), None),
    }
}

fn check_classification(entry: &CatalogEntry, c: &crate::liealg::StructureConstants) -> Option<Cell> {
    let want = match entry.isomorphism.as_str() {
        "sl(2)" => Semisimple3::Sl2,
        "so(3)" => Semisimple3::So3,
        _ => return None,
    };
    let k = killing_form(c);
    Some(match classify_3d_semisimple(&k) {
        Ok(got) => Cell::new(
            Column::Classification,
            if got == want { Status::Pass } else { Status::Fail },
            Certainty::Proved,
            format!("Killing form signature gives {got}"),
        ),
        Err(e) => Cell::new(Column::Classification, Status::Fail, Certainty::Proved, format!("{e}")),
    })
}

fn check_domain(inst: &Instance, d: &DomainReport) -> Cell {
    let expected = inst.domain.as_ref().map(|e| e.numerator_radical());
    let ok = match (&expected, &d.condition) {
        (None, None) => true,
        (Some(a), Some(b)) => d.exact && (a / b).is_constant(),
        _ => false,
    };
    let status = if ok { Status::Pass } else { Status::Fail };
    Cell::new(Column::Domain, status, Certainty::Proved, d.description.clone())
}

fn check_distributions(inst: &Instance, entry: &CatalogEntry, s: &DistributionSearch) -> Cell {
    let found: Vec<&VectorField> = s.generators();
    let expected = &inst.distributions;
    let mut missing = Vec::new();
    for e in expected {
        if !found.iter().any(|f| same_distribution(f, e)) {
            missing.push(format!("{e}"));
        }
    }
    let mut extra = Vec::new();
    for f in &found {
        if !expected.iter().any(|e| same_distribution(f, e)) {
            extra.push(format!("{f}"));
        }
    }
    let fams: Vec<[usize; 2]> = s.families.iter().map(|f| [f.i, f.j]).collect();
    let fam_ok = fams == entry.families;
    let mut certainty = Certainty::Proved;
    for d in &s.distributions {
        certainty = certainty.min(d.verdict.certainty);
    }
    let ok = missing.is_empty() && extra.is_empty() && fam_ok;
    let mut detail = String::new();
    let shown: Vec<String> = found.iter().map(|f| format!("{f}")).collect();
    detail.push_str(&format!("found [{}]", shown.join("; ")));
    for f in &s.families {
        detail.push_str(&format!("; family lambda1*X{} + lambda2*X{}", f.i + 1, f.j + 1));
    }
    if !missing.is_empty() {
        detail.push_str(&format!("; missing [{}]", missing.join("; ")));
    }
    if !extra.is_empty() {
        detail.push_str(&format!("; unexpected [{}]", extra.join("; ")));
    }
    if !fam_ok {
        detail.push_str(&format!("; expected families {:?}", entry.families));
    }
    detail.push_str(if s.exhaustive { "; search exhaustive" } else { "; search limited to basis and candidates" });
    Cell::new(Column::Distributions, if ok { Status::Pass } else { Status::Fail }, certainty, detail)
}

fn commuting_independent_pairs(v: &LieAlgebra) -> Vec<(usize, usize)> {
    let b = v.basis();
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if bracket(&b[i], &b[j]).is_zero().holds && !wedge_det(&b[i], &b[j]).is_zero().is_zero() {
                out.push((i, j));
            }
        }
    }
    out
}

fn is_killing_for_all(v: &LieAlgebra, g: &CovTensor2) -> Verdict {
    let mut out = Verdict::proved(true);
    for x in v.basis() {
        out = out.and(lie_derivative_cov(x, g).is_zero());
    }
    out
}

/// A nondegenerate member of a solution space, preferring a definite one. Tries
/// basis elements, pairwise sums and differences, then the total sum.
fn nondegenerate_member(metrics: &[CovTensor2]) -> Option<CovTensor2> {
    let mut tries: Vec<CovTensor2> = metrics.to_vec();
    for i in 0..metrics.len() {
        for j in i + 1..metrics.len() {
            tries.push(metrics[i].add(&metrics[j]));
            tries.push(metrics[i].sub(&metrics[j]));
        }
    }
    let mut sum = CovTensor2::zero();
    for g in metrics {
        sum = sum.add(g);
    }
    tries.push(sum);
    let mut fallback = None;
    for g in tries {
        let det = g.det();
        if det.is_zero().is_zero() {
            continue;
        }
        if sign_report(&det).0 == SignReport::Positive {
            return Some(g);
        }
        fallback.get_or_insert(g);
    }
    fallback
}

/// A Killing metric for the algebra, from the Casimir construction, the witness
/// frame, or a commuting coordinate pair.
fn kill_witness(inst: &Instance, casimirs: &[CasimirMetricResult]) -> Option<(CovTensor2, Certainty, String)> {
    for r in casimirs {
        if let Some(g) = &r.metric {
            let v = r.all_invariant();
            if v.holds {
                return Some((g.clone(), v.certainty, format!("Casimir tensor of C = {}", r.casimir)));
            }
        }
    }
    let v = &inst.algebra;
    let mut frames: Vec<([VectorField; 2], String)> = Vec::new();
    if let Some(f) = &inst.witness_frame {
        frames.push((f.clone(), format!("constant coefficients in the coframe dual to {{{}, {}}}", f[0], f[1])));
    }
    for (i, j) in commuting_independent_pairs(v) {
        let b = v.basis();
        frames.push(([b[i].clone(), b[j].clone()], format!("constant coefficients in the coframe dual to X{}, X{}", i + 1, j + 1)));
    }
    for ([f1, f2], how) in frames {
        let sol = killing_constant_frame(v, &f1, &f2);
        if let Some(g) = nondegenerate_member(&sol.metrics) {
            let verdict = is_killing_for_all(v, &g);
            if verdict.holds {
                return Some((g, verdict.certainty, how));
            }
        }
    }
    None
}

fn check_kill(inst: &Instance, witness: &Option<(CovTensor2, Certainty, String)>) -> Cell {
    match inst.kill {
        KillFlag::Plus => match witness {
            Some((g, c, how)) => Cell::new(Column::Kill, Status::Pass, *c, format!("+ witnessed by g = {g} ({how})")),
            None => Cell::new(Column::Kill, Status::Fail, Certainty::Proved, "+ claimed but no witness metric found".into()),
        },
        KillFlag::Minus => {
            let v = &inst.algebra;
            let pairs = commuting_independent_pairs(v);
            for &(i, j) in &pairs {
                let Ok(sol) = killing_obstruction_constant_frame(v, i, j) else {
                    continue;
                };
                if sol.dimension == 0 {
                    return Cell::new(
                        Column::Kill,
                        Status::Pass,
                        Certainty::Proved,
                        format!("- refuted: constant-frame solution space for X{}, X{} has dimension 0", i + 1, j + 1),
                    );
                }
                let deg = all_degenerate(&sol.metrics);
                if deg.holds {
                    return Cell::new(
                        Column::Kill,
                        Status::Pass,
                        deg.certainty,
                        format!(
                            "- refuted: constant-frame solutions for X{}, X{} (dimension {}) are all degenerate",
                            i + 1,
                            j + 1,
                            sol.dimension
                        ),
                    );
                }
            }
            if let Some((g, _, how)) = witness {
                if !pairs.is_empty() {
                    return Cell::new(Column::Kill, Status::Fail, Certainty::Proved, format!("- claimed but g = {g} ({how}) is Killing"));
                }
            }
            Cell::new(
                Column::Kill,
                Status::TheoryOnly,
                Certainty::Proved,
                String::from("- not machine-checkable: no commuting pair independent at generic points"),
            )
        }
    }
}

fn metric_kind(g: &CovTensor2) -> SignReport {
    sign_report(&g.det()).0
}

fn check_conf(entry: &CatalogEntry, inst: &Instance, witness: &Option<(CovTensor2, Certainty, String)>) -> Cell {
    let basis = inst.algebra.basis();
    let ge = CovTensor2::euclidean();
    let gh = CovTensor2::hyperbolic();
    let against = |g: &CovTensor2| -> (Vec<usize>, Certainty) {
        let mut missing = Vec::new();
        let mut c = Certainty::Proved;
        for (i, x) in basis.iter().enumerate() {
            match conformal_factor(x, g) {
                Some(f) => c = c.min(f.certainty),
                None => missing.push(i),
            }
        }
        (missing, c)
    };
    let (miss_e, ce) = against(&ge);
    let (miss_h, ch) = against(&gh);
    let names = |v: &[usize]| v.iter().map(|i| format!("X{}", i + 1)).collect::<Vec<_>>().join(", ");
    let flag = entry.conf;
    if flag == ConfFlag::None {
        let ok = !miss_e.is_empty() && !miss_h.is_empty();
        let detail = if ok {
            format!(
                "- in row coordinates: no gE factor for {}; no gH factor for {}; absence for every metric is theory-only",
                names(&miss_e),
                names(&miss_h)
            )
        } else if miss_e.is_empty() {
            String::from("- contradicted: every basis element is conformal for gE")
        } else {
            String::from("- contradicted: every basis element is conformal for gH")
        };
        return Cell::new(Column::Conf, if ok { Status::Pass } else { Status::Fail }, ce.min(ch), detail);
    }
    let mut parts = Vec::new();
    let mut ok = true;
    let mut cert = Certainty::Proved;
    let witness_kind = witness.as_ref().map(|(g, _, _)| metric_kind(g));
    for (want, miss, c, name, kind) in [
        (flag.wants_e(), &miss_e, ce, "gE", SignReport::Positive),
        (flag.wants_h(), &miss_h, ch, "gH", SignReport::Negative),
    ] {
        if !want {
            continue;
        }
        if miss.is_empty() {
            cert = cert.min(c);
            parts.push(format!("every basis element conformal for {name}"));
        } else if witness_kind == Some(kind) {
            parts.push(format!(
                "{name} fails in row coordinates for {}; Killing witness metric has {} signature",
                names(miss),
                if kind == SignReport::Positive { "definite" } else { "indefinite" }
            ));
        } else {
            ok = false;
            parts.push(format!("no {name} factor for {}", names(miss)));
        }
    }
    Cell::new(Column::Conf, if ok { Status::Pass } else { Status::Fail }, cert, parts.join("; "))
}

/// Recomputes every machine-checkable column for one instantiation.
pub fn verify_entry(entry: &CatalogEntry, assignment: &BTreeMap<String, String>) -> Result<EntryReport, CatalogError> {
    let inst = entry.instantiate(assignment)?;
    let mut cells = Vec::new();
    let (closure, sc) = check_closure(&inst);
    cells.push(closure);
    let mut witness = None;
    if let Some(sc) = &sc {
        if let Some(c) = check_classification(entry, sc) {
            cells.push(c);
        }
        let casimirs = if inst.kill == KillFlag::Plus { casimir_metric_with(&inst.algebra, sc)? } else { Vec::new() };
        witness = kill_witness(&inst, &casimirs);
    }
    cells.push(check_domain(&inst, &generic_domain(&inst.algebra)));
    let search = find_invariant_distributions(&inst.algebra, &inst.candidates);
    cells.push(check_distributions(&inst, entry, &search));
    cells.push(check_kill(&inst, &witness));
    cells.push(check_conf(entry, &inst, &witness));
    let instance_level = !entry.params.is_empty() || entry.note.is_some();
    Ok(EntryReport {
        id: entry.id.clone(),
        assignment: inst.assignment.clone(),
        dimension: inst.algebra.dim(),
        cells,
        instance_level,
        kill_witness: witness.map(|w| w.0),
        note: entry.note.clone(),
    })
}

/// Runs every entry over its default grid (a single run when it has none).
pub fn verify_all(catalog: &Catalog) -> Result<TableReport, CatalogError> {
    let mut entries = Vec::new();
    for e in &catalog.entries {
        if e.grid.is_empty() {
            entries.push(verify_entry(e, &BTreeMap::new())?);
        } else {
            for a in &e.grid {
                entries.push(verify_entry(e, a)?);
            }
        }
    }
    let count = |s: Status| entries.iter().flat_map(|e| &e.cells).filter(|c| c.status == s).count();
    let (pass, fail, theory_only) = (count(Status::Pass), count(Status::Fail), count(Status::TheoryOnly));
    Ok(TableReport { entries, pass, fail, theory_only })
}

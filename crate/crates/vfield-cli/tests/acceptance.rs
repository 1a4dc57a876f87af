//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero on any FAIL.

#[path = "../../vfield/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;

use support::oracle::{brioschi_gauss, christoffel_scalar, conformal_gauss};
use support::properties;
use vfield::apps::{
    milne_pinney_geometry, milne_pinney_system, mp_casimir_checks, projective_schrodinger_geometry,
    projective_schrodinger_system, so3_metric_checks,
};
use vfield::casimir::casimir_metric;
use vfield::catalog::{Column, Instance, KillFlag, Status};
use vfield::distr::{find_invariant_distributions, generic_domain, killing_obstruction_constant_frame, Family};
use vfield::geom::{conformal_factor, hodge_unit, scalar_curvature, wedge_det, CovTensor2, VectorField};
use vfield::liealg::{is_semisimple, killing_form, structure_constants, Semisimple3};
use vfield::{Constraint, Expr, Parameter, Scope};

type Outcome = Result<String, String>;

fn c_param() -> Parameter {
    Parameter::new("c", Constraint::Nonzero)
}

fn e(s: &str) -> Expr {
    Expr::parse(s, &Scope::new().with(c_param())).expect("literal")
}

fn same(a: &Expr, b: &Expr) -> bool {
    (a - b).is_zero().is_zero()
}

fn same_metric(a: &CovTensor2, b: &CovTensor2) -> bool {
    a.sub(b).is_zero().holds
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn instance(id: &str, pairs: &[(&str, &str)]) -> Instance {
    let a: BTreeMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    vfield_cli::builtin_catalog().get(id).expect("row exists").instantiate(&a).expect("instantiates")
}

fn int_matrix(m: &[Vec<Expr>]) -> Option<Vec<Vec<i64>>> {
    m.iter().map(|r| r.iter().map(|x| x.as_integer().and_then(|n| i64::try_from(n).ok())).collect()).collect()
}

fn first_metric(v: &vfield::liealg::LieAlgebra) -> Result<vfield::casimir::CasimirMetricResult, String> {
    casimir_metric(v)
        .map_err(|e| e.to_string())?
        .into_iter()
        .find(|r| !r.is_degenerate())
        .ok_or_else(|| "no nondegenerate Casimir tensor".to_string())
}

fn killing_forms() -> Outcome {
    let mp = milne_pinney_system(&c_param()).map_err(|e| e.to_string())?;
    let k = killing_form(&structure_constants(&mp.algebra).map_err(|e| e.to_string())?);
    ensure(int_matrix(&k) == Some(vec![vec![0, 0, -4], vec![0, 2, 0], vec![-4, 0, 0]]), || format!("MP κ = {k:?}"))?;
    let p3 = projective_schrodinger_system().map_err(|e| e.to_string())?;
    let k = killing_form(&structure_constants(&p3.algebra).map_err(|e| e.to_string())?);
    ensure(int_matrix(&k) == Some(vec![vec![-8, 0, 0], vec![0, -8, 0], vec![0, 0, -2]]), || format!("P3 κ = {k:?}"))?;
    Ok("MP [[0,0,-4],[0,2,0],[-4,0,0]], P3 diag(-8,-8,-2)".into())
}

fn closed_forms() -> Outcome {
    let g = first_metric(&instance("P2", &[]).algebra)?.metric.unwrap();
    ensure(same_metric(&g, &CovTensor2::diagonal(e("-1/(2*y^2)"))), || format!("P2 g = {g}"))?;
    let g = first_metric(&instance("P1", &[("alpha", "0")]).algebra)?.metric.unwrap();
    ensure(same_metric(&g, &CovTensor2::euclidean()), || format!("P1 g = {g}"))?;
    let cp1 = projective_schrodinger_geometry().map_err(|e| e.to_string())?;
    let s = e("(1 + x^2 + y^2)^-2");
    let g = cp1.casimir.metric.as_ref().unwrap();
    ensure(same_metric(g, &CovTensor2::diagonal(s.clone())), || format!("CP1 g = {g}"))?;
    let w = &cp1.casimir.symplectic.as_ref().unwrap().coefficient;
    ensure(same(w, &s), || format!("CP1 ω = {w}"))?;
    let mp = milne_pinney_geometry(&c_param()).map_err(|e| e.to_string())?;
    let g = mp.casimir.metric.as_ref().unwrap();
    let expected = CovTensor2::new(e("-(2/x^2 + y^2/(2*c))"), e("x*y/(2*c)"), e("-x^2/(2*c)"));
    ensure(same_metric(g, &expected), || format!("MP g = {g}"))?;
    ensure(mp.casimir.det == e("c"), || format!("MP det G = {}", mp.casimir.det))?;
    Ok("P2, P1(alpha=0), CP1 g and omega, MP g with det G = c".into())
}

fn classifications() -> Outcome {
    let mp = milne_pinney_geometry(&c_param()).map_err(|e| e.to_string())?;
    let cp1 = projective_schrodinger_geometry().map_err(|e| e.to_string())?;
    ensure(mp.classification == Semisimple3::Sl2, || format!("MP is {}", mp.classification))?;
    ensure(cp1.classification == Semisimple3::So3, || format!("Schrodinger is {}", cp1.classification))?;
    ensure(is_semisimple(&mp.killing_form).holds && is_semisimple(&cp1.killing_form).holds, || "Cartan".into())?;
    Ok("MP sl(2), Schrodinger so(3), Cartan criterion holds for both".into())
}

fn generators_match(found: &[&VectorField], expected: &[VectorField]) -> bool {
    found.len() == expected.len()
        && expected.iter().all(|x| found.iter().any(|y| wedge_det(x, y).is_zero().is_zero()))
}

fn distributions() -> Outcome {
    let dx = VectorField::dx();
    let dy = VectorField::dy();
    let cases: [(&str, &[(&str, &str)], Vec<VectorField>); 6] = [
        ("I4", &[], vec![dx.clone(), dy.clone()]),
        ("I6", &[], vec![dx.clone(), dy.clone()]),
        ("I9", &[], vec![dx.clone(), dy.clone()]),
        ("I10", &[], vec![dx.clone(), dy.clone()]),
        ("I11", &[], vec![dx.clone(), dy.clone()]),
        ("I7", &[], vec![dy.clone()]),
    ];
    for (id, a, expected) in cases {
        let inst = instance(id, a);
        let s = find_invariant_distributions(&inst.algebra, &inst.candidates);
        ensure(s.families.is_empty() && generators_match(&s.generators(), &expected), || {
            format!("{id}: found {:?}", s.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>())
        })?;
    }
    for (id, a) in [("I8a1", &[][..]), ("I14B", &[])] {
        let inst = instance(id, a);
        let s = find_invariant_distributions(&inst.algebra, &inst.candidates);
        ensure(s.families == [Family { i: 0, j: 1 }], || format!("{id}: families {:?}", s.families))?;
    }
    let cat = vfield_cli::builtin_catalog();
    for entry in cat.entries.iter().filter(|e| e.id.starts_with('P')) {
        let grid = if entry.grid.is_empty() { vec![BTreeMap::new()] } else { entry.grid.clone() };
        for a in grid {
            let inst = entry.instantiate(&a).map_err(|e| e.to_string())?;
            let s = find_invariant_distributions(&inst.algebra, &inst.candidates);
            ensure(s.distributions.is_empty() && s.families.is_empty(), || format!("{} {a:?}: found some", entry.id))?;
        }
    }
    Ok("I4, I6, I9, I10, I11 {dx, dy}; I7 {dy}; I8(alpha=1), I14B full line; P1-P8 none".into())
}

fn domains() -> Outcome {
    let d = generic_domain(&instance("I4", &[]).algebra);
    let c = d.condition.clone().ok_or("I4 domain is the whole plane")?;
    ensure(d.exact && (&c / &e("x - y")).is_constant(), || format!("I4 domain {}", d.description))?;
    let d = generic_domain(&instance("P2", &[]).algebra);
    let c = d.condition.clone().ok_or("P2 domain is the whole plane")?;
    ensure(d.exact && (&c / &e("y")).is_constant(), || format!("P2 domain {}", d.description))?;
    Ok("I4: x - y != 0, P2: y != 0".into())
}

fn obstructions() -> Outcome {
    let mut parts = Vec::new();
    for (id, a, dim) in [
        ("P4", &[][..], 0),
        ("P1", &[("alpha", "2")][..], 0),
        ("I8a1", &[], 0),
        ("I9", &[], 0),
        ("I14B", &[], 3),
        ("P1", &[("alpha", "0")], 1),
    ] {
        let inst = instance(id, a);
        let s = killing_obstruction_constant_frame(&inst.algebra, 0, 1).map_err(|e| format!("{id}: {e}"))?;
        ensure(s.dimension == dim, || format!("{id}{a:?}: dimension {} != {dim}", s.dimension))?;
        if dim == 1 {
            ensure(same_metric(&s.metrics[0], &CovTensor2::euclidean()), || format!("{id}: basis {}", s.metrics[0]))?;
        }
        let label = if a.is_empty() { id.to_string() } else { format!("{id}[{}={}]", a[0].0, a[0].1) };
        parts.push(format!("{label} {dim}"));
    }
    Ok(format!("{}; P1(alpha=0) basis gE", parts.join(", ")))
}

fn conformal_all(inst: &Instance, g: &CovTensor2) -> bool {
    inst.algebra.basis().iter().all(|x| conformal_factor(x, g).is_some())
}

fn conf_spot_checks() -> Outcome {
    let (ge, gh) = (CovTensor2::euclidean(), CovTensor2::hyperbolic());
    ensure(conformal_all(&instance("P7", &[]), &ge), || "P7 not gE-conformal".into())?;
    ensure(conformal_all(&instance("I11", &[]), &gh), || "I11 not gH-conformal".into())?;
    let i8 = instance("I8a1", &[]);
    ensure(conformal_all(&i8, &ge) && conformal_all(&i8, &gh), || "I8(alpha=1) not conformal for both".into())?;
    let i5 = instance("I5", &[]);
    let x = &i5.algebra.basis()[1];
    let other = &i5.algebra.basis()[2];
    let refuted = conformal_factor(other, &ge).is_none() && conformal_factor(other, &gh).is_none();
    let fe = conformal_factor(x, &ge);
    let fh = conformal_factor(x, &gh);
    ensure(fe.is_none() && fh.is_none(), || {
        let show = |f: &Option<vfield::geom::Certified<Expr>>| f.as_ref().map_or("none".to_string(), |c| c.value.to_string());
        format!(
            "I5 element {x}: gE factor {}, gH factor {} (expected none for both); {other} has {} factor for either",
            show(&fe),
            show(&fh),
            if refuted { "no" } else { "some" }
        )
    })?;
    Ok("P7 gE, I11 gH, I8(alpha=1) both, I5 2x dx + y dy neither".into())
}

fn property_suites() -> Outcome {
    properties::bracket_laws(100).map_err(|e| format!("bracket: {e}"))?;
    properties::conformal_rescaling(50).map_err(|e| format!("rescaling: {e}"))?;
    let pairs = properties::casimir_duality(8).map_err(|e| format!("duality: {e}"))?;
    properties::curvature_scaling(20).map_err(|e| format!("curvature: {e}"))?;
    let kill = properties::kill1_pairings().map_err(|e| format!("kill1: {e}"))?;
    Ok(format!(
        "bracket laws x100, rescaling x50, duality on {pairs} Casimir pairs, curvature scaling x20, {kill} commuting Killing pairs"
    ))
}

fn oracles() -> Outcome {
    let cp1 = CovTensor2::diagonal(e("(1 + x^2 + y^2)^-2"));
    let r = scalar_curvature(&cp1).map_err(|e| e.to_string())?.value;
    let k = conformal_gauss(&-&e("log(1 + x^2 + y^2)"), &e("(1 + x^2 + y^2)^2"));
    ensure(r == Expr::int(8) && same(&r, &(&k * &Expr::int(2))), || format!("CP1 R = {r}, oracle 2K = {}", &k * &Expr::int(2)))?;

    let i4 = first_metric(&instance("I4", &[]).algebra)?.metric.unwrap();
    let r = scalar_curvature(&i4).map_err(|e| e.to_string())?.value;
    let oracle = christoffel_scalar(&i4);
    let brioschi = &brioschi_gauss(&i4) * &Expr::int(2);
    ensure(r.is_constant() && same(&r, &oracle) && same(&r, &brioschi), || {
        format!("I4 R = {r}, Christoffel oracle {oracle}, Brioschi {brioschi}")
    })?;

    let mp = milne_pinney_geometry(&c_param()).map_err(|e| e.to_string())?;
    let g = mp.casimir.metric.unwrap();
    let w = hodge_unit(&g).map_err(|e| e.to_string())?.value.coefficient;
    let c = e("c");
    ensure(same(&g.det(), &c.recip()), || format!("det g = {}", g.det()))?;
    ensure(same(&(&w * &w), &c.abs().recip()) && (&w * &c.abs().sqrt()).is_one(), || format!("ω coefficient {w}"))?;
    Ok(format!("CP1 R = 8 = 2K, I4 R = {r} (Christoffel and Brioschi agree), MP omega = {w} = |c|^(-1/2)"))
}

fn errata() -> Outcome {
    let checks = so3_metric_checks();
    let (log, good) = (&checks[0], &checks[1]);
    let r2 = &log.residuals[1];
    ensure(!r2.test.holds, || "log metric residual along X2 vanishes".into())?;
    ensure(
        good.residuals.iter().all(|r| r.test.holds && r.test.certainty.is_proved()),
        || "(1 + x^2 + y^2)^-2 gE residuals not proved zero".into(),
    )?;
    let mp = mp_casimir_checks(&c_param()).map_err(|e| e.to_string())?;
    ensure(!mp[0].ad_invariant && mp[1].ad_invariant, || "Casimir ad-invariance verdicts".into())?;
    Ok(format!(
        "L_X2 of {} = {}; {} proved invariant; '{}' not ad-invariant, '{}' ad-invariant",
        log.label, r2.lie_derivative, good.label, mp[0].label, mp[1].label
    ))
}

fn full_catalog() -> Outcome {
    let out = vfield_cli::run(["vfield", "catalog", "verify", "all"]);
    let summary = out.stdout.lines().find_map(|l| l.strip_prefix("summary: ")).unwrap_or("?").to_string();
    let report = vfield::catalog::verify_all(&vfield_cli::builtin_catalog()).map_err(|e| e.to_string())?;
    let cat = vfield_cli::builtin_catalog();
    let mut fails = Vec::new();
    for r in &report.entries {
        let entry = cat.get(&r.id).expect("row");
        let a: BTreeMap<String, String> = r.assignment.iter().cloned().collect();
        for c in &r.cells {
            match c.status {
                Status::Fail => fails.push(format!("{} {}: {}", r.label(), c.column, c.detail)),
                Status::TheoryOnly if !(c.column == Column::Kill && entry.kill_for(&a) == KillFlag::Minus) => {
                    fails.push(format!("{} {}: unexpected THEORY-ONLY", r.label(), c.column))
                }
                _ => {}
            }
        }
    }
    ensure(out.code == 0 && fails.is_empty(), || format!("exit {}, {summary}; {}", out.code, fails.join("; ")))?;
    Ok(format!("{summary}; THEORY-ONLY only on Kill '-' claims"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Killing forms", killing_forms),
        ("Casimir pipeline closed forms", closed_forms),
        ("classifications", classifications),
        ("invariant distributions", distributions),
        ("generic domains", domains),
        ("Killing obstructions", obstructions),
        ("Conf spot checks", conf_spot_checks),
        ("property suites", property_suites),
        ("oracle values", oracles),
        ("errata surfacing", errata),
        ("full catalog run", full_catalog),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

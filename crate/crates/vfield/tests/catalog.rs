use std::collections::BTreeMap;

use vfield::catalog::*;
use vfield::geom::{CovTensor2, VectorField};
use vfield::{Expr, Scope};

fn catalog() -> Catalog {
    serde_json::from_str(include_str!("../../vfield-cli/data/catalog.json")).unwrap()
}

fn e(s: &str) -> Expr {
    Expr::parse(s, &Scope::new()).unwrap()
}

fn f(a: &str, b: &str) -> VectorField {
    VectorField::new(e(a), e(b))
}

fn set(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn verify(id: &str, pairs: &[(&str, &str)]) -> EntryReport {
    verify_entry(catalog().get(id).unwrap(), &set(pairs)).unwrap()
}

#[test]
fn catalog_has_all_rows() {
    let c = catalog();
    assert_eq!(c.schema, 1);
    let ids: Vec<&str> = c.entries.iter().map(|e| e.id.as_str()).collect();
    for id in ["P1", "P8", "I1", "I8", "I8a1", "I14A", "I14B", "I15A", "I15B", "I20"] {
        assert!(ids.contains(&id), "{id} missing");
    }
    assert!(c.get("i4").is_some());
    let primitive = c.entries.iter().filter(|e| e.class == StructuralClass::Primitive).count();
    assert_eq!(primitive, 8);
}

#[test]
fn instantiate_plain_and_parametric() {
    let c = catalog();
    let i4 = c.get("I4").unwrap().instantiate(&BTreeMap::new()).unwrap();
    assert_eq!(i4.algebra.basis(), [f("1", "1"), f("x", "y"), f("x^2", "y^2")]);
    assert_eq!(i4.domain, Some(e("x - y")));

    let p1 = c.get("P1").unwrap().instantiate(&set(&[("alpha", "0")])).unwrap();
    assert_eq!(p1.algebra.basis(), [f("1", "0"), f("0", "1"), f("y", "-x")]);
    assert_eq!(p1.kill, KillFlag::Plus);
    let p1b = c.get("P1").unwrap().instantiate(&set(&[("alpha", "2")])).unwrap();
    assert_eq!(p1b.algebra.basis()[2], f("2*x + y", "2*y - x"));
    assert_eq!(p1b.kill, KillFlag::Minus);

    let i16 = c.get("I16").unwrap().instantiate(&set(&[("alpha", "2"), ("r", "1")])).unwrap();
    assert_eq!(i16.algebra.basis(), [f("1", "0"), f("0", "1"), f("x", "2*y"), f("0", "x")]);

    let i14 = c.get("I14").unwrap().instantiate(&set(&[("r", "3")])).unwrap();
    assert_eq!(i14.algebra.dim(), 4);
    assert_eq!(i14.algebra.basis()[3], f("0", "x^2*exp(x)"));
}

#[test]
fn instantiate_rejects_bad_assignments() {
    let c = catalog();
    let i8 = c.get("I8").unwrap();
    assert!(matches!(i8.instantiate(&set(&[("alpha", "0")])), Err(CatalogError::Constraint { .. })));
    assert!(matches!(i8.instantiate(&set(&[("alpha", "1")])), Err(CatalogError::Constraint { .. })));
    let symbolic = i8.instantiate(&BTreeMap::new()).unwrap();
    assert_eq!(symbolic.algebra.scope().names(), ["alpha"]);
    assert!(matches!(i8.instantiate(&set(&[("alpha", "1/2"), ("q", "1")])), Err(CatalogError::UndeclaredParam(_))));
    let i14 = c.get("I14").unwrap();
    assert!(matches!(i14.instantiate(&set(&[("r", "1")])), Err(CatalogError::Constraint { .. })));
    assert!(i14.instantiate(&set(&[("r", "3/2")])).is_err());
    assert!(matches!(i14.instantiate(&BTreeMap::new()), Err(CatalogError::MissingParam(_))));
}

#[test]
fn p2_row() {
    let r = verify("P2", &[]);
    assert_eq!(r.failures(), 0, "{r:?}");
    assert_eq!(r.cell(Column::Domain).unwrap().status, Status::Pass);
    let g = r.kill_witness.unwrap();
    let expected = CovTensor2::diagonal(e("-1/(2*y^2)"));
    assert!(g.sub(&expected).is_zero().holds, "{g}");
}

#[test]
fn i11_row() {
    let r = verify("I11", &[]);
    assert_eq!(r.failures(), 0, "{r:?}");
    assert_eq!(r.cell(Column::Kill).unwrap().status, Status::Pass);
    assert_eq!(r.cell(Column::Distributions).unwrap().status, Status::Pass);
}

#[test]
fn p4_row() {
    let r = verify("P4", &[]);
    assert_eq!(r.failures(), 0, "{r:?}");
    assert_eq!(r.cell(Column::Kill).unwrap().status, Status::Pass);
    assert!(r.kill_witness.is_none());
}

#[test]
fn i8_conf_cell_disagrees_with_table() {
    let r = verify("I8", &[("alpha", "1/2")]);
    let conf = r.cell(Column::Conf).unwrap();
    assert_eq!(conf.status, Status::Fail);
    assert!(conf.detail.contains("gH"), "{}", conf.detail);
    assert_eq!(r.failures(), 1);
}

#[test]
fn whole_table() {
    let t = verify_all(&catalog()).unwrap();
    let failing: Vec<String> = t
        .entries
        .iter()
        .flat_map(|r| r.cells.iter().filter(|c| c.status == Status::Fail).map(move |c| format!("{} {}", r.label(), c.column)))
        .collect();
    assert_eq!(failing, ["I8[alpha=1/2] conf"]);
    for r in &t.entries {
        for c in &r.cells {
            if c.status == Status::TheoryOnly {
                assert_eq!(c.column, Column::Kill, "{} {}", r.label(), c.column);
            }
        }
    }
    assert_eq!(t.theory_only, 12);
}

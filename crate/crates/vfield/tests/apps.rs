use vfield::apps::*;
use vfield::geom::{lie_derivative_cov, CovTensor2, VectorField};
use vfield::liealg::Semisimple3;
use vfield::{Constraint, Expr, Parameter, Scope};

fn c_param() -> Parameter {
    Parameter::new("c", Constraint::Nonzero)
}

fn scope() -> Scope {
    Scope::new().with(c_param())
}

fn e(s: &str) -> Expr {
    Expr::parse(s, &scope()).unwrap()
}

fn same(a: &Expr, b: &Expr) -> bool {
    (a - b).is_zero().is_zero()
}

fn ints(m: &[Vec<Expr>]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.iter().map(|x| x.as_integer().unwrap().try_into().unwrap()).collect()).collect()
}

#[test]
fn milne_pinney_system_fields() {
    let s = milne_pinney_system(&c_param()).unwrap();
    assert_eq!(
        s.basis(),
        [VectorField::new(e("0"), e("-x")), VectorField::new(e("-x/2"), e("y/2")), VectorField::new(e("y"), e("c/x^3"))]
    );
    assert_eq!(s.coefficients[1], None);
    let zero = c_param().with_value(Expr::zero().as_rational().unwrap());
    assert!(milne_pinney_system(&zero).is_err());
}

#[test]
fn milne_pinney_geometry_closed_forms() {
    let g = milne_pinney_geometry(&c_param()).unwrap();
    assert_eq!(ints(&g.killing_form), [[0, 0, -4], [0, 2, 0], [-4, 0, 0]]);
    assert!(g.cartan.holds && g.cartan.certainty.is_proved());
    assert_eq!(g.classification, Semisimple3::Sl2);

    let big = &g.casimir.tensor;
    assert!(same(&big.xx, &e("-x^2/2")));
    assert!(same(&big.xy, &e("-x*y/2")));
    assert!(same(&big.yy, &e("(-4*c - x^2*y^2)/(2*x^2)")));
    assert!(same(&g.casimir.det, &e("c")));

    let m = g.casimir.metric.as_ref().unwrap();
    let expected = CovTensor2::new(e("(-4*c - x^2*y^2)/(2*x^2*c)"), e("x*y/(2*c)"), e("-x^2/(2*c)"));
    assert!(m.sub(&expected).is_zero().holds, "{m}");
    assert!(g.hamiltonian.iter().all(|v| v.holds));
    assert_eq!(g.hamiltonian.len(), 3);
    assert_eq!(g.curvature.unwrap().value, Expr::int(4));
    assert!(g.casimir.all_invariant().holds);
}

#[test]
fn schrodinger_geometry_closed_forms() {
    let g = projective_schrodinger_geometry().unwrap();
    assert_eq!(ints(&g.killing_form), [[-8, 0, 0], [0, -8, 0], [0, 0, -2]]);
    assert_eq!(g.classification, Semisimple3::So3);
    let s = e("(1 + x^2 + y^2)^2");
    let big = &g.casimir.tensor;
    assert!(same(&big.xx, &s) && same(&big.yy, &s) && big.xy.is_zero_canonical());
    let m = g.casimir.metric.as_ref().unwrap();
    assert!(m.sub(&CovTensor2::diagonal(s.recip())).is_zero().holds);
    assert!(same(&g.casimir.symplectic.as_ref().unwrap().coefficient, &s.recip()));
    assert_eq!(g.curvature.unwrap().value, Expr::int(8));
}

#[test]
fn so3_log_metric_is_not_invariant() {
    let checks = so3_metric_checks();
    let (log, good) = (&checks[0], &checks[1]);
    assert!(!log.passes());
    assert!(log.residuals[0].test.holds);
    let expected = CovTensor2::diagonal(e("-4*x - 8*x*log(1 + x^2 + y^2)"));
    assert!(log.residuals[1].lie_derivative.sub(&expected).is_zero().holds);
    assert!(!log.residuals[2].test.holds);
    assert!(good.passes());
    assert!(good.residuals.iter().all(|r| r.test.certainty.is_proved()));
    let v = so3_row();
    for x in v.basis() {
        assert!(lie_derivative_cov(x, &good.metric).is_zero().holds);
    }
}

#[test]
fn milne_pinney_casimir_sign_slip() {
    let checks = mp_casimir_checks(&c_param()).unwrap();
    assert!(!checks[0].ad_invariant);
    assert!(!checks[0].result.all_invariant().holds);
    assert!(checks[1].ad_invariant);
    assert!(checks[1].result.all_invariant().holds);
}

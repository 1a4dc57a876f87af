//! Property suites, driven by a deterministic proptest runner so that every run
//! draws the same cases.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use vfield::casimir::casimir_metric;
use vfield::catalog::{verify_entry, Catalog, KillFlag};
use vfield::geom::{
    bracket, conformal_factor, lie_derivative_contra, lie_derivative_cov, pairing, scalar_curvature, wedge_det,
    ContraTensor2, CovTensor2, VectorField,
};
use vfield::liealg::LieAlgebra;
use vfield::{Constraint, Expr, Parameter, Scope};

pub fn catalog() -> Catalog {
    serde_json::from_str(include_str!("../../../vfield-cli/data/catalog.json")).expect("catalog parses")
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

/// Exponents `(i, j)` with `i + j <= deg`.
fn monomials(deg: u32) -> Vec<(u32, u32)> {
    (0..=deg).flat_map(|t| (0..=t).map(move |j| (t - j, j))).collect()
}

fn poly_from(coeffs: &[i64], deg: u32) -> Expr {
    monomials(deg)
        .into_iter()
        .zip(coeffs)
        .map(|((i, j), &c)| &Expr::int(c) * &(&Expr::x().pow(i as i64) * &Expr::y().pow(j as i64)))
        .sum()
}

pub fn poly(deg: u32) -> impl Strategy<Value = Expr> {
    let n = monomials(deg).len();
    prop::collection::vec(-3i64..=3, n).prop_map(move |c| poly_from(&c, deg))
}

pub fn poly_field(deg: u32) -> impl Strategy<Value = VectorField> {
    (poly(deg), poly(deg)).prop_map(|(a, b)| VectorField::new(a, b))
}

/// `Re p(z) ∂x + Im p(z) ∂y` for a random complex polynomial `p` of degree ≤ 3.
fn holomorphic_field() -> impl Strategy<Value = VectorField> {
    prop::collection::vec((-3i64..=3, -3i64..=3), 4).prop_map(|cs| {
        let (mut re, mut im) = (Expr::zero(), Expr::zero());
        let (mut zr, mut zi) = (Expr::one(), Expr::zero());
        for (a, b) in cs {
            let (a, b) = (Expr::int(a), Expr::int(b));
            re = &re + &(&(&a * &zr) - &(&b * &zi));
            im = &im + &(&(&a * &zi) + &(&b * &zr));
            let nr = &(&zr * &Expr::x()) - &(&zi * &Expr::y());
            let ni = &(&zr * &Expr::y()) + &(&zi * &Expr::x());
            zr = nr;
            zi = ni;
        }
        VectorField::new(re, im)
    })
}

/// `a(x) ∂x + b(y) ∂y`, conformal for the split metric.
fn split_field() -> impl Strategy<Value = VectorField> {
    (prop::collection::vec(-3i64..=3, 4), prop::collection::vec(-3i64..=3, 4)).prop_map(|(a, b)| {
        let p = |c: &[i64], v: Expr| -> Expr { c.iter().enumerate().map(|(k, &c)| &Expr::int(c) * &v.pow(k as i64)).sum() };
        VectorField::new(p(&a, Expr::x()), p(&b, Expr::y()))
    })
}

fn same(a: &Expr, b: &Expr) -> bool {
    (a - b).is_zero().is_zero()
}

/// Antisymmetry and the Jacobi identity of the bracket on random polynomial fields.
pub fn bracket_laws(cases: u32) -> Result<(), String> {
    run(cases, (poly_field(3), poly_field(3), poly_field(3)), |(a, b, c)| {
        let anti = bracket(&a, &b).add(&bracket(&b, &a));
        check(anti.is_zero_canonical(), || format!("[X,Y] + [Y,X] = {anti}"))?;
        let jac = bracket(&a, &bracket(&b, &c))
            .add(&bracket(&b, &bracket(&c, &a)))
            .add(&bracket(&c, &bracket(&a, &b)));
        check(jac.is_zero_canonical(), || format!("Jacobi residual {jac}"))
    })
}

/// `ℒ_X g = f g` implies `ℒ_X (s g) = (f + X(s)/s) s g`.
pub fn conformal_rescaling(cases: u32) -> Result<(), String> {
    let strategy = prop_oneof![
        holomorphic_field().prop_map(|x| (x, CovTensor2::euclidean())),
        split_field().prop_map(|x| (x, CovTensor2::hyperbolic())),
    ];
    run(cases, (strategy, poly(2)), |((x, g), q)| {
        let f = conformal_factor(&x, &g).ok_or_else(|| TestCaseError::fail(format!("{x} not conformal for {g}")))?;
        let s = &Expr::one() + &(&q * &q);
        let scaled = g.scale(&s);
        let expected = &f.value + &(&x.apply(&s) / &s);
        let got = conformal_factor(&x, &scaled)
            .ok_or_else(|| TestCaseError::fail(format!("{x} not conformal for {scaled}")))?;
        check(same(&got.value, &expected), || format!("factor {} != {expected}", got.value))
    })
}

/// `R(λ g) = R(g)/λ` for constant `λ ≠ 0`.
pub fn curvature_scaling(cases: u32) -> Result<(), String> {
    let lambda = (prop_oneof![-5i64..=-1, 1i64..=5], 1i64..=4);
    run(cases, (poly(1), -1i64..=1, poly(1), lambda), |(p, c, q, (n, d))| {
        let g = CovTensor2::new(&Expr::one() + &(&p * &p), Expr::int(c), &Expr::int(2) + &q);
        let Ok(r) = scalar_curvature(&g) else {
            return Err(TestCaseError::reject("degenerate"));
        };
        let l = Expr::frac(n, d);
        let r2 = scalar_curvature(&g.scale(&l)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(same(&r2.value, &(&r.value / &l)), || format!("R(λg) = {} vs R(g)/λ = {}", r2.value, &r.value / &l))
    })
}

/// Casimir-produced `(G, g)` pairs from the catalog grid and the two applications.
pub fn casimir_pairs() -> Vec<(String, LieAlgebra, ContraTensor2, CovTensor2)> {
    let mut out = Vec::new();
    let cat = catalog();
    for entry in &cat.entries {
        let grid = if entry.grid.is_empty() { vec![BTreeMap::new()] } else { entry.grid.clone() };
        for a in grid {
            let inst = entry.instantiate(&a).expect("grid instantiates");
            let Ok(results) = casimir_metric(&inst.algebra) else { continue };
            for r in results {
                if let Some(g) = r.metric {
                    out.push((format!("{} {:?}", entry.id, a), inst.algebra.clone(), r.tensor, g));
                }
            }
        }
    }
    let mp = vfield::apps::milne_pinney_system(&Parameter::new("c", Constraint::Nonzero)).expect("mp");
    let sch = vfield::apps::projective_schrodinger_system().expect("schrodinger");
    for s in [mp, sch] {
        for r in casimir_metric(&s.algebra).expect("casimir") {
            if let Some(g) = r.metric {
                out.push((s.name.clone(), s.algebra.clone(), r.tensor, g));
            }
        }
    }
    out
}

/// `ℒ_X G = 0 ⇔ ℒ_X g = 0` on every produced pair, for basis fields and for
/// random constant combinations optionally perturbed by a polynomial field.
pub fn casimir_duality(cases_per_pair: u32) -> Result<usize, String> {
    let pairs = casimir_pairs();
    for (label, v, big, g) in &pairs {
        for x in v.basis() {
            let a = lie_derivative_contra(x, big).is_zero().holds;
            let b = lie_derivative_cov(x, g).is_zero().holds;
            if a != b {
                return Err(format!("{label}: duality fails for {x}"));
            }
        }
        let dim = v.dim();
        let strategy = (prop::collection::vec(-2i64..=2, dim), any::<bool>(), poly_field(1));
        run(cases_per_pair, strategy, |(cs, perturb, p)| {
            let mut x = VectorField::zero();
            for (c, b) in cs.iter().zip(v.basis()) {
                x = x.add(&b.scale(&Expr::int(*c)));
            }
            if perturb {
                x = x.add(&p);
            }
            let a = lie_derivative_contra(&x, big).is_zero().holds;
            let b = lie_derivative_cov(&x, g).is_zero().holds;
            check(a == b, || format!("{label}: ℒG = 0 is {a} but ℒg = 0 is {b} for {x}"))
        })
        .map_err(|e| format!("{label}: {e}"))?;
    }
    Ok(pairs.len())
}

/// For every Kill `+` instance with a derived metric: commuting, generically
/// independent Killing fields have constant mutual pairings, and a field `Y`
/// parallel to one of them is orthogonal to or commutes with the other.
pub fn kill1_pairings() -> Result<usize, String> {
    let cat = catalog();
    let mut checked = 0;
    for entry in &cat.entries {
        let grid = if entry.grid.is_empty() { vec![BTreeMap::new()] } else { entry.grid.clone() };
        for a in grid {
            if entry.kill_for(&a) != KillFlag::Plus {
                continue;
            }
            let report = verify_entry(entry, &a).map_err(|e| e.to_string())?;
            let Some(g) = &report.kill_witness else { continue };
            let inst = entry.instantiate(&a).map_err(|e| e.to_string())?;
            let b = inst.algebra.basis();
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    if !bracket(&b[i], &b[j]).is_zero().holds || wedge_det(&b[i], &b[j]).is_zero().is_zero() {
                        continue;
                    }
                    for (u, w) in [(i, i), (i, j), (j, j)] {
                        let p = pairing(g, &b[u], &b[w]);
                        if !p.is_constant() {
                            return Err(format!("{}: g(X{u}, X{w}) = {p} is not constant", report.label()));
                        }
                    }
                    for (k, y) in b.iter().enumerate() {
                        for (xi, xj) in [(i, j), (j, i)] {
                            if k == xi || !wedge_det(y, &b[xi]).is_zero().is_zero() {
                                continue;
                            }
                            let orth = pairing(g, y, &b[xj]).is_zero().is_zero();
                            let comm = bracket(y, &b[xj]).is_zero().holds;
                            if !(orth || comm) {
                                return Err(format!("{}: X{k} ∥ X{xi} but neither ⊥ nor commuting with X{xj}", report.label()));
                            }
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// `parse(print(e)) = e` on random expressions.
pub fn expr_round_trip(cases: u32) -> Result<(), String> {
    let c = Parameter::new("c", Constraint::Nonzero);
    let scope = Scope::new().with(c.clone());
    let leaf = prop_oneof![
        Just(Expr::x()),
        Just(Expr::y()),
        Just(Expr::param(&c)),
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Expr::frac(n, d)),
    ];
    let tree = leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a * &b),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| if b.is_zero_canonical() { a } else { &a / &b }),
            (inner.clone(), -2i64..=3).prop_map(|(a, k)| if a.is_zero_canonical() { a } else { a.pow(k) }),
            inner.clone().prop_map(|a| a.exp()),
            inner.clone().prop_map(|a| (&Expr::one() + &(&a * &a)).log()),
            inner.clone().prop_map(|a| a.abs()),
            inner.prop_map(|a| (&Expr::int(2) + &(&a * &a)).sqrt()),
        ]
    });
    run(cases, tree, |e| {
        let text = e.to_string();
        let back = Expr::parse(&text, &scope).map_err(|err| TestCaseError::fail(format!("'{text}': {err}")))?;
        check(back == e, || format!("'{text}' reparses as '{back}'"))
    })
}

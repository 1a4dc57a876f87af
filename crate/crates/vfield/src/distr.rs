//! Invariant rank-one distributions, generic domains and constant-frame Killing metrics.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::expr::{Certainty, Expr, Point};
use crate::geom::{bracket, lie_derivative_cov, sign_report, wedge_det, CovTensor2, SignReport, Verdict, VectorField};
use crate::liealg::LieAlgebra;
use crate::linalg::{constant_combination, constant_relations, expr_echelon_basis, matching_rows};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DistrError {
    #[error("X{} and X{} must commute and be independent at generic points", .0 + 1, .1 + 1)]
    Hypotheses(usize, usize),
    #[error("basis index out of range")]
    Index,
}

/// `D` is invariant under `V` iff `[X_i, Y] ∧ Y = 0` for every basis element.
pub fn is_invariant(y: &VectorField, v: &LieAlgebra) -> Verdict {
    Verdict::all_zero(v.basis().iter().map(|x| wedge_det(&bracket(x, y), y).is_zero()))
}

fn check_pair(v: &LieAlgebra, i: usize, j: usize) -> Result<(&VectorField, &VectorField), DistrError> {
    let b = v.basis();
    if i >= b.len() || j >= b.len() || i == j {
        return Err(DistrError::Index);
    }
    let (xi, xj) = (&b[i], &b[j]);
    if wedge_det(xi, xj).is_zero().is_zero() || !bracket(xi, xj).is_zero().holds {
        return Err(DistrError::Hypotheses(i, j));
    }
    Ok((xi, xj))
}

/// Projective solutions `(λ1 : λ2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProjectiveSet {
    /// Finitely many classes, each normalized with first nonzero entry 1.
    Points { points: Vec<(Expr, Expr)> },
    /// Every class.
    Line,
}

fn normalize_pair(a: Expr, b: Expr) -> (Expr, Expr) {
    if a.is_zero_canonical() {
        (Expr::zero(), Expr::one())
    } else {
        let b = &b / &a;
        (Expr::one(), b)
    }
}

/// Classes `(λ1 : λ2)` with `λ1 X_i + λ2 X_j` spanning an invariant distribution.
pub fn constant_combination_invariants(v: &LieAlgebra, i: usize, j: usize) -> Result<ProjectiveSet, DistrError> {
    let (xi, xj) = check_pair(v, i, j)?;
    // wedge([X, λ1 Xi + λ2 Xj], λ1 Xi + λ2 Xj) = λ1² a + λ1λ2 b + λ2² c
    let mut rows: Vec<[Expr; 3]> = Vec::new();
    for x in v.basis() {
        let p = bracket(x, xi);
        let q = bracket(x, xj);
        let a = wedge_det(&p, xi);
        let b = &wedge_det(&p, xj) + &wedge_det(&q, xi);
        let c = wedge_det(&q, xj);
        for r in matching_rows(&[vec![a], vec![b], vec![c]]) {
            if r.iter().any(|e| !e.is_zero_canonical()) {
                rows.push([r[0].clone(), r[1].clone(), r[2].clone()]);
            }
        }
    }
    let Some(first) = rows.first() else {
        return Ok(ProjectiveSet::Line);
    };
    let [a, b, c] = first.clone();
    let mut cands: Vec<(Expr, Expr)> = Vec::new();
    if a.is_zero_canonical() {
        cands.push((Expr::one(), Expr::zero()));
        if !b.is_zero_canonical() {
            cands.push((-&(&c / &b), Expr::one()));
        }
    } else {
        let disc = &(&b * &b) - &(&(&a * &c) * &Expr::int(4));
        let two_a = &a * &Expr::int(2);
        match sign_report(&disc).0 {
            SignReport::Zero => cands.push((-&(&b / &two_a), Expr::one())),
            SignReport::Negative => {}
            _ => {
                let s = disc.sqrt();
                cands.push((&(&(-&b) + &s) / &two_a, Expr::one()));
                cands.push((&(&(-&b) - &s) / &two_a, Expr::one()));
            }
        }
    }
    let mut points: Vec<(Expr, Expr)> = Vec::new();
    for (l1, l2) in cands {
        let ok = rows.iter().all(|[a, b, c]| {
            let r = &(&(&(a * &l1) * &l1) + &(&(b * &l1) * &l2)) + &(&(c * &l2) * &l2);
            r.is_zero().is_zero()
        });
        let p = normalize_pair(l1, l2);
        if ok && !points.contains(&p) {
            points.push(p);
        }
    }
    points.sort_by_key(|p| (p.0.is_zero_canonical(), format!("{}", p.1)));
    Ok(ProjectiveSet::Points { points })
}

/// How a generator was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Combination { i: usize, j: usize, coefficients: (Expr, Expr) },
    Basis { index: usize },
    Candidate { index: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rank1Distribution {
    pub generator: VectorField,
    pub provenance: Provenance,
    pub verdict: Verdict,
}

/// A whole projective line `λ1 X_i + λ2 X_j` of invariant distributions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionSearch {
    pub distributions: Vec<Rank1Distribution>,
    pub families: Vec<Family>,
    /// The search space provably contains every invariant distribution: either a
    /// commuting pair independent at generic points exists (then only constant
    /// combinations qualify) or a commuting pair `X1, X2 = f X1` exists (then only
    /// `X1` qualifies).
    pub exhaustive: bool,
}

impl DistributionSearch {
    pub fn generators(&self) -> Vec<&VectorField> {
        self.distributions.iter().map(|d| &d.generator).collect()
    }
}

fn commuting_pairs(v: &LieAlgebra) -> (Vec<(usize, usize)>, bool) {
    let b = v.basis();
    let mut independent = Vec::new();
    let mut dependent = false;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if !bracket(&b[i], &b[j]).is_zero().holds {
                continue;
            }
            if wedge_det(&b[i], &b[j]).is_zero().is_zero() {
                dependent = true;
            } else {
                independent.push((i, j));
            }
        }
    }
    (independent, dependent)
}

/// Union of constant-combination solutions, basis elements and `extra` candidates
/// that span invariant distributions, deduplicated up to functional multiples.
pub fn find_invariant_distributions(v: &LieAlgebra, extra: &[VectorField]) -> DistributionSearch {
    let (pairs, dependent) = commuting_pairs(v);
    let mut families: Vec<Family> = Vec::new();
    let mut found: Vec<Rank1Distribution> = Vec::new();
    let b = v.basis();
    let in_family = |y: &VectorField, fams: &[Family]| {
        fams.iter().any(|f| {
            constant_combination(&[b[f.i].components().to_vec(), b[f.j].components().to_vec()], &y.components()).is_some()
        })
    };
    let push = |found: &mut Vec<Rank1Distribution>, fams: &[Family], y: VectorField, provenance: Provenance| {
        if y.is_zero().holds || in_family(&y, fams) {
            return;
        }
        if found.iter().any(|d| wedge_det(&d.generator, &y).is_zero().is_zero()) {
            return;
        }
        let verdict = is_invariant(&y, v);
        if verdict.holds {
            found.push(Rank1Distribution { generator: y, provenance, verdict });
        }
    };
    for &(i, j) in &pairs {
        match constant_combination_invariants(v, i, j) {
            Ok(ProjectiveSet::Line) => families.push(Family { i, j }),
            Ok(ProjectiveSet::Points { points }) => {
                for (l1, l2) in points {
                    let y = b[i].scale(&l1).add(&b[j].scale(&l2));
                    push(&mut found, &families, y, Provenance::Combination { i, j, coefficients: (l1, l2) });
                }
            }
            Err(_) => {}
        }
    }
    for (index, x) in b.iter().enumerate() {
        push(&mut found, &families, x.clone(), Provenance::Basis { index });
    }
    for (index, x) in extra.iter().enumerate() {
        push(&mut found, &families, x.clone(), Provenance::Candidate { index });
    }
    DistributionSearch { distributions: found, families, exhaustive: !pairs.is_empty() || dependent }
}

/// The set where the basis spans the plane (or its generic rank).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DomainReport {
    /// 2×2 minors `X_i ∧ X_j`, `i < j`; the components themselves for rank one.
    pub minors: Vec<Expr>,
    pub generic_rank: usize,
    /// Polynomial whose nonvanishing defines the domain; `None` for the whole plane.
    pub condition: Option<Expr>,
    /// Whether `condition = 0` is exactly the singular set, rather than a superset.
    pub exact: bool,
    pub description: String,
}

/// Rank of the basis at a point, if every component evaluates.
pub fn rank_at(v: &LieAlgebra, p: &Point) -> Option<usize> {
    let mut vals = Vec::new();
    for x in v.basis() {
        let a = x.xx.eval_at(p).ok()?;
        let b = x.yy.eval_at(p).ok()?;
        vals.push((a, b));
    }
    let nonzero = |v: &crate::expr::Value| !v.is_negligible();
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            let d = &vals[i].0.to_f64() * vals[j].1.to_f64() - vals[i].1.to_f64() * vals[j].0.to_f64();
            let scale = vals[i].0.to_f64().abs().max(vals[i].1.to_f64().abs())
                * vals[j].0.to_f64().abs().max(vals[j].1.to_f64().abs());
            if d.abs() > 1e-12 * scale.max(1.0) {
                return Some(2);
            }
        }
    }
    Some(if vals.iter().any(|(a, b)| nonzero(a) || nonzero(b)) { 1 } else { 0 })
}

pub fn generic_domain(v: &LieAlgebra) -> DomainReport {
    let b = v.basis();
    let mut minors = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            minors.push(wedge_det(&b[i], &b[j]));
        }
    }
    let mut generic_rank = 2;
    if minors.iter().all(|m| m.is_zero().is_zero()) {
        minors = b.iter().flat_map(|x| x.components()).collect();
        generic_rank = if minors.iter().all(|m| m.is_zero().is_zero()) { 0 } else { 1 };
    }
    let nonzero: Vec<&Expr> = minors.iter().filter(|m| !m.is_zero_canonical()).collect();
    let mut g = Expr::zero();
    for m in &nonzero {
        g = Expr::gcd_numerators(&g, m);
    }
    let exact = nonzero.iter().any(|m| m.divide_numerator(&g).is_some_and(|q| q.is_constant()));
    let mut poles = Expr::one();
    for x in b {
        for c in x.components() {
            let d = c.denominator();
            let common = Expr::gcd_numerators(&poles, &d);
            poles = &poles * &(&d / &common);
        }
    }
    let cond = (&g * &poles).numerator_radical();
    let cond = if cond.is_constant() || cond.is_manifestly_positive() { None } else { Some(cond) };
    let description = match &cond {
        None => String::from("R^2"),
        Some(c) if exact => format!("{c} != 0"),
        Some(c) => format!("contains {c} != 0"),
    };
    DomainReport { minors, generic_rank, condition: cond, exact, description }
}

/// Solution space of `ℒ_X (c_kl θ^k θ^l) = 0` over constants `c_kl`, for the coframe
/// dual to a frame `{F1, F2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantFrameSolutions {
    pub dimension: usize,
    /// Coefficients `(c11, c12, c22)` of each basis solution.
    pub coefficients: Vec<[Expr; 3]>,
    /// The same solutions written in coordinates.
    pub metrics: Vec<CovTensor2>,
}

/// `θ1θ1`, `θ1θ2 + θ2θ1`, `θ2θ2` in coordinates.
pub fn coframe_products(f1: &VectorField, f2: &VectorField) -> [CovTensor2; 3] {
    let delta = wedge_det(f1, f2);
    // θ1 = (F2^y dx − F2^x dy)/Δ, θ2 = (−F1^y dx + F1^x dy)/Δ
    let t1 = [&f2.yy / &delta, -&(&f2.xx / &delta)];
    let t2 = [-&(&f1.yy / &delta), &f1.xx / &delta];
    let sym = |a: &[Expr; 2], b: &[Expr; 2]| {
        CovTensor2::new(
            &(&a[0] * &b[0]) * &Expr::int(2),
            &(&a[0] * &b[1]) + &(&a[1] * &b[0]),
            &(&a[1] * &b[1]) * &Expr::int(2),
        )
    };
    let half = Expr::frac(1, 2);
    [sym(&t1, &t1).scale(&half), sym(&t1, &t2), sym(&t2, &t2).scale(&half)]
}

/// Constant-coefficient metrics in an arbitrary frame preserved by every basis field.
pub fn killing_constant_frame(v: &LieAlgebra, f1: &VectorField, f2: &VectorField) -> ConstantFrameSolutions {
    let prods = coframe_products(f1, f2);
    let cols: Vec<Vec<Expr>> = prods
        .iter()
        .map(|t| v.basis().iter().flat_map(|x| lie_derivative_cov(x, t).components()).collect())
        .collect();
    let rels = constant_relations(&cols);
    let rels = if rels.is_empty() { rels } else { expr_echelon_basis(&rels) };
    let coefficients: Vec<[Expr; 3]> = rels.into_iter().map(|r| [r[0].clone(), r[1].clone(), r[2].clone()]).collect();
    let metrics = coefficients
        .iter()
        .map(|c| prods[0].scale(&c[0]).add(&prods[1].scale(&c[1])).add(&prods[2].scale(&c[2])))
        .collect();
    ConstantFrameSolutions { dimension: coefficients.len(), coefficients, metrics }
}

/// The constant-frame obstruction for a commuting pair `X_i, X_j` independent at
/// generic points: any metric preserved by `V` has constant coefficients in the
/// dual coframe, so dimension 0 rules out Killing metrics.
pub fn killing_obstruction_constant_frame(
    v: &LieAlgebra,
    i: usize,
    j: usize,
) -> Result<ConstantFrameSolutions, DistrError> {
    let (xi, xj) = check_pair(v, i, j)?;
    Ok(killing_constant_frame(v, xi, xj))
}

/// Whether every member of a solution space is degenerate: `det(Σ t_k g_k) ≡ 0`
/// for independent symbolic `t_k`.
pub fn all_degenerate(metrics: &[CovTensor2]) -> Verdict {
    if metrics.is_empty() {
        return Verdict::proved(true);
    }
    let mut sum = CovTensor2::zero();
    for (k, g) in metrics.iter().enumerate() {
        let t = crate::expr::Parameter::free(&format!("t{}", k + 1));
        sum = sum.add(&g.scale(&Expr::param(&t)));
    }
    let z = sum.det().is_zero();
    Verdict { holds: z.is_zero(), certainty: z.certainty() }
}

/// Minors certainty helper for reports.
pub fn domain_certainty(d: &DomainReport) -> Certainty {
    if d.exact {
        Certainty::Proved
    } else {
        Certainty::Sampled { samples: 0 }
    }
}

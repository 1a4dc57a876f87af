//! Finite-dimensional Lie algebras of planar vector fields.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::expr::{Certainty, Expr, Parameter, Sampler, Scope};
use crate::geom::{bracket, Verdict, VectorField};
use crate::linalg::{
    constant_combination, constant_relations, determinant, expr_echelon_basis, expr_nullspace, inertia, inverse,
    to_rational, Matrix,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("empty basis")]
    Empty,
    #[error("basis elements are linearly dependent (relation {relation:?})")]
    Dependent { relation: Vec<String>, certainty: Certainty },
    #[error("[X{i}, X{j}] = {residual} is not a constant combination of the basis", i = .i + 1, j = .j + 1)]
    NotClosed { i: usize, j: usize, residual: VectorField },
    #[error("expected a 3-dimensional algebra, got dimension {0}")]
    Dimension(usize),
    #[error("Killing form is degenerate")]
    Degenerate,
    #[error("Killing form has non-rational entries")]
    NonRational,
    #[error("positive-definite Killing form is impossible for a real semisimple algebra")]
    Inconsistent,
    #[error("dimension mismatch: {expected} basis elements, {got} coefficients")]
    Mismatch { expected: usize, got: usize },
}

/// An ordered basis of vector fields together with the parameters it mentions.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    basis: Vec<VectorField>,
    scope: Scope,
}

impl Serialize for LieAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

impl LieAlgebra {
    /// Checks that no nontrivial constant combination of the basis vanishes.
    pub fn new(basis: Vec<VectorField>, scope: Scope) -> Result<Self, LieError> {
        if basis.is_empty() {
            return Err(LieError::Empty);
        }
        let v = LieAlgebra { basis, scope };
        if let Some((rel, certainty)) = v.dependency() {
            return Err(LieError::Dependent { relation: rel.iter().map(|e| alloc::format!("{e}")).collect(), certainty });
        }
        Ok(v)
    }

    /// Skips the independence check.
    pub fn new_unchecked(basis: Vec<VectorField>, scope: Scope) -> Self {
        LieAlgebra { basis, scope }
    }

    pub fn basis(&self) -> &[VectorField] {
        &self.basis
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn columns(&self) -> Vec<Vec<Expr>> {
        self.basis.iter().map(|x| x.components().to_vec()).collect()
    }

    fn dependency(&self) -> Option<(Vec<Expr>, Certainty)> {
        if let Some(r) = constant_relations(&self.columns()).into_iter().next() {
            return Some((r, Certainty::Proved));
        }
        let n = self.dim();
        let rank = sampled_rank(&self.basis)?;
        (rank < n).then(|| (Vec::new(), Certainty::Sampled { samples: SAMPLE_POINTS as u32 }))
    }
}

const SAMPLE_POINTS: usize = 12;

/// Numeric rank of the stacked component matrices at deterministic sample points.
/// `None` when too few points evaluate.
fn sampled_rank(fields: &[VectorField]) -> Option<usize> {
    let n = fields.len();
    let mut params: Vec<Parameter> = Vec::new();
    for f in fields {
        params.extend(f.params());
    }
    params.sort();
    params.dedup();
    let mut sampler = Sampler::new(7);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut got = 0;
    for _ in 0..4 * SAMPLE_POINTS {
        if got == SAMPLE_POINTS {
            break;
        }
        let pt = sampler.point(&params);
        let mut rx = Vec::with_capacity(n);
        let mut ry = Vec::with_capacity(n);
        let mut ok = true;
        for f in fields {
            match (f.xx.eval_at(&pt), f.yy.eval_at(&pt)) {
                (Ok(a), Ok(b)) => {
                    rx.push(a.to_f64());
                    ry.push(b.to_f64());
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            rows.push(rx);
            rows.push(ry);
            got += 1;
        }
    }
    if got < SAMPLE_POINTS / 2 {
        return None;
    }
    Some(float_rank(rows, n))
}

fn float_rank(mut a: Vec<Vec<f64>>, cols: usize) -> usize {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let tol = 1e-9 * scale;
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else {
            break;
        };
        if a[p][c].abs() <= tol {
            continue;
        }
        a.swap(r, p);
        for i in r + 1..a.len() {
            let f = a[i][c] / a[r][c];
            for j in c..cols {
                a[i][j] -= f * a[r][j];
            }
        }
        r += 1;
    }
    r
}

/// `[X_i, X_j] = Σ_k c[i][j][k] X_k`, entries constant in `x`, `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureConstants {
    c: Vec<Vec<Vec<Expr>>>,
}

impl StructureConstants {
    pub fn from_array(c: Vec<Vec<Vec<Expr>>>) -> Self {
        StructureConstants { c }
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.c[i][j][k]
    }

    pub fn as_array(&self) -> &Vec<Vec<Vec<Expr>>> {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().flatten().flatten().all(|e| e.as_rational().is_some())
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| (&self.c[i][j][k] + &self.c[j][i][k]).is_zero_canonical())))
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim();
        let c = &self.c;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Expr::zero();
                        for m in 0..n {
                            s = &s + &(&c[i][j][m] * &c[m][k][l]);
                            s = &s + &(&c[j][k][m] * &c[m][i][l]);
                            s = &s + &(&c[k][i][m] * &c[m][j][l]);
                        }
                        if !s.is_zero_canonical() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Structure constants in the basis `Y_i = Σ_a p[i][a] X_a`.
    pub fn change_basis(&self, p: &Matrix<BigRational>) -> Option<StructureConstants> {
        let n = self.dim();
        let pinv = inverse(p)?;
        let mut out = vec![vec![vec![Expr::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = Expr::zero();
                    for a in 0..n {
                        for b in 0..n {
                            let w = &p[i][a] * &p[j][b];
                            if w.is_zero() {
                                continue;
                            }
                            for m in 0..n {
                                let t = &w * &pinv[m][k];
                                if !t.is_zero() {
                                    s = &s + &(&self.c[a][b][m] * &Expr::rational(t));
                                }
                            }
                        }
                    }
                    out[i][j][k] = s;
                }
            }
        }
        Some(StructureConstants { c: out })
    }
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let mut first = true;
        for i in 0..n {
            for j in i + 1..n {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "[X{}, X{}] = ", i + 1, j + 1)?;
                write_combination(f, &self.c[i][j], "X")?;
            }
        }
        Ok(())
    }
}

fn write_combination(f: &mut fmt::Formatter<'_>, coeffs: &[Expr], sym: &str) -> fmt::Result {
    let mut any = false;
    for (k, e) in coeffs.iter().enumerate() {
        if e.is_zero_canonical() {
            continue;
        }
        if any {
            f.write_str(" + ")?;
        }
        any = true;
        if e.is_one() {
            write!(f, "{sym}{}", k + 1)?;
        } else {
            write!(f, "({e})*{sym}{}", k + 1)?;
        }
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

/// Expresses every bracket in the basis.
pub fn structure_constants(v: &LieAlgebra) -> Result<StructureConstants, LieError> {
    let n = v.dim();
    let cols = v.columns();
    let mut c = vec![vec![vec![Expr::zero(); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let b = bracket(&v.basis[i], &v.basis[j]);
            let coeffs = match constant_combination(&cols, &b.components()) {
                Some(k) => k,
                None => sampled_combination(&v.basis, &b).ok_or(LieError::NotClosed { i, j, residual: b })?,
            };
            for k in 0..n {
                c[j][i][k] = -&coeffs[k];
                c[i][j][k] = coeffs[k].clone();
            }
        }
    }
    Ok(StructureConstants { c })
}

/// Rational coefficients fitted at sample points, accepted only if the symbolic
/// residual vanishes. Used when coefficient matching cannot see a relation
/// between transcendental atoms.
fn sampled_combination(basis: &[VectorField], target: &VectorField) -> Option<Vec<Expr>> {
    let mut params: Vec<Parameter> = Vec::new();
    for f in basis.iter().chain([target]) {
        params.extend(f.params());
    }
    if !params.is_empty() {
        return None;
    }
    let n = basis.len();
    let mut rows: Matrix<BigRational> = Vec::new();
    let mut sampler = Sampler::new(11);
    let mut got = 0;
    for _ in 0..4 * SAMPLE_POINTS {
        if got == SAMPLE_POINTS {
            break;
        }
        let pt = sampler.point(&[]);
        let eval = |e: &Expr| e.eval_at(&pt).ok().and_then(|v| v.as_rational().cloned());
        let mut rx = Vec::new();
        let mut ry = Vec::new();
        for f in basis.iter().chain([target]) {
            rx.push(eval(&f.xx)?);
            ry.push(eval(&f.yy)?);
        }
        rows.push(rx);
        rows.push(ry);
        got += 1;
    }
    let ns = crate::linalg::nullspace(&rows, n + 1);
    let rel = ns.into_iter().find(|r| !r[n].is_zero())?;
    let k = -&rel[n];
    let coeffs: Vec<Expr> = rel[..n].iter().map(|c| Expr::rational(c / &k)).collect();
    let mut sum = VectorField::zero();
    for (c, f) in coeffs.iter().zip(basis) {
        sum = sum.add(&f.scale(c));
    }
    sum.sub(target).is_zero().holds.then_some(coeffs)
}

/// `κ[a][b] = tr(ad_a ∘ ad_b)`.
pub fn killing_form(c: &StructureConstants) -> Matrix<Expr> {
    let n = c.dim();
    let mut k = vec![vec![Expr::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            let mut s = Expr::zero();
            for m in 0..n {
                for p in 0..n {
                    let t = &c.c[a][m][p] * &c.c[b][p][m];
                    s = &s + &t;
                }
            }
            k[b][a] = s.clone();
            k[a][b] = s;
        }
    }
    k
}

/// `κ([a,b], c) + κ(b, [a,c]) = 0` for all basis triples.
pub fn is_ad_invariant_form(c: &StructureConstants, kappa: &Matrix<Expr>) -> bool {
    let n = c.dim();
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let mut s = Expr::zero();
                for m in 0..n {
                    s = &s + &(&c.c[a][b][m] * &kappa[m][d]);
                    s = &s + &(&c.c[a][d][m] * &kappa[b][m]);
                }
                if !s.is_zero_canonical() {
                    return false;
                }
            }
        }
    }
    true
}

/// Cartan criterion: `det κ ≠ 0`.
pub fn is_semisimple(kappa: &Matrix<Expr>) -> Verdict {
    if kappa.is_empty() {
        return Verdict::proved(false);
    }
    let t = determinant(kappa).is_zero();
    Verdict { holds: !t.is_zero(), certainty: t.certainty() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semisimple3 {
    Sl2,
    So3,
}

impl fmt::Display for Semisimple3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semisimple3::Sl2 => "sl(2)",
            Semisimple3::So3 => "so(3)",
        })
    }
}

/// Real form of a 3-dimensional semisimple algebra from the signature of κ.
pub fn classify_3d_semisimple(kappa: &Matrix<Expr>) -> Result<Semisimple3, LieError> {
    if kappa.len() != 3 {
        return Err(LieError::Dimension(kappa.len()));
    }
    let q = to_rational(kappa).ok_or(LieError::NonRational)?;
    match inertia(&q) {
        (_, _, z) if z > 0 => Err(LieError::Degenerate),
        (0, 3, 0) => Ok(Semisimple3::So3),
        (3, 0, 0) => Err(LieError::Inconsistent),
        _ => Ok(Semisimple3::Sl2),
    }
}

/// Symmetric `Σ C[i][j] v_i ⊗ v_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CasimirElement {
    pub matrix: Matrix<Expr>,
}

impl CasimirElement {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn scale(&self, s: &Expr) -> Self {
        CasimirElement { matrix: self.matrix.iter().map(|r| r.iter().map(|e| e * s).collect()).collect() }
    }
}

impl fmt::Display for CasimirElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.is_zero_canonical() {
                    continue;
                }
                if any {
                    f.write_str(" + ")?;
                }
                any = true;
                if !e.is_one() {
                    write!(f, "({e})*")?;
                }
                write!(f, "v{}*v{}", i + 1, j + 1)?;
            }
        }
        if !any {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Ad-invariance: `Σ_i (c[k][i][m] C[i][j] + c[k][i][j] C[m][i]) = 0` for all `k, m, j`.
pub fn is_casimir(c: &StructureConstants, cas: &CasimirElement) -> bool {
    let n = c.dim();
    if cas.dim() != n {
        return false;
    }
    let m = &cas.matrix;
    for k in 0..n {
        for a in 0..n {
            for j in 0..n {
                let mut s = Expr::zero();
                for i in 0..n {
                    s = &s + &(&c.c[k][i][a] * &m[i][j]);
                    s = &s + &(&c.c[k][i][j] * &m[a][i]);
                }
                if !s.is_zero_canonical() {
                    return false;
                }
            }
        }
    }
    true
}

fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Basis of the quadratic Casimir space in reduced echelon order over
/// `C11, C12, …, C1n, C22, …`.
pub fn quadratic_casimirs(c: &StructureConstants) -> Vec<CasimirElement> {
    let n = c.dim();
    let unknowns = n * (n + 1) / 2;
    let mut rows: Matrix<Expr> = Vec::new();
    for k in 0..n {
        for a in 0..n {
            for j in 0..n {
                let mut row = vec![Expr::zero(); unknowns];
                for i in 0..n {
                    let p = sym_index(n, i, j);
                    row[p] = &row[p] + &c.c[k][i][a];
                    let q = sym_index(n, a, i);
                    row[q] = &row[q] + &c.c[k][i][j];
                }
                if row.iter().any(|e| !e.is_zero_canonical()) {
                    rows.push(row);
                }
            }
        }
    }
    let ns = expr_nullspace(&rows, unknowns);
    let basis = if ns.is_empty() { ns } else { expr_echelon_basis(&ns) };
    basis
        .into_iter()
        .map(|v| CasimirElement {
            matrix: (0..n).map(|i| (0..n).map(|j| v[sym_index(n, i, j)].clone()).collect()).collect(),
        })
        .collect()
}

/// `κ⁻¹` as a Casimir element, for semisimple algebras.
pub fn inverse_killing_casimir(c: &StructureConstants) -> Option<CasimirElement> {
    let k = killing_form(c);
    let inv = match to_rational(&k) {
        Some(q) => crate::linalg::from_rational(&inverse(&q)?),
        None => inverse(&k)?,
    };
    Some(CasimirElement { matrix: inv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Constraint;

    fn vf(a: &str, b: &str, s: &Scope) -> VectorField {
        VectorField::new(Expr::parse(a, s).unwrap(), Expr::parse(b, s).unwrap())
    }

    fn q(n: i64) -> Expr {
        Expr::int(n)
    }

    fn mp() -> LieAlgebra {
        let s = Scope::new().with(Parameter::new("c", Constraint::Nonzero));
        LieAlgebra::new(vec![vf("0", "-x", &s), vf("-x/2", "y/2", &s), vf("y", "c/x^3", &s)], s).unwrap()
    }

    #[test]
    fn milne_pinney() {
        let c = structure_constants(&mp()).unwrap();
        assert_eq!(c.get(0, 1, 0), &q(1));
        assert_eq!(c.get(0, 2, 1), &q(2));
        assert_eq!(c.get(1, 2, 2), &q(1));
        assert!(c.is_antisymmetric() && c.satisfies_jacobi());
        let k = killing_form(&c);
        assert_eq!(k, vec![vec![q(0), q(0), q(-4)], vec![q(0), q(2), q(0)], vec![q(-4), q(0), q(0)]]);
        assert!(is_ad_invariant_form(&c, &k));
        assert!(is_semisimple(&k).holds);
        assert_eq!(classify_3d_semisimple(&k), Ok(Semisimple3::Sl2));
        let cas = quadratic_casimirs(&c);
        assert_eq!(cas.len(), 1);
        assert_eq!(cas[0].matrix[0][2], q(1));
        assert_eq!(cas[0].matrix[1][1], q(-2));
        assert!(is_casimir(&c, &inverse_killing_casimir(&c).unwrap()));
    }

    #[test]
    fn not_closed_and_dependent() {
        let s = Scope::new();
        let v = LieAlgebra::new(vec![vf("1", "0", &s), vf("x^2", "0", &s)], s.clone()).unwrap();
        assert!(matches!(structure_constants(&v), Err(LieError::NotClosed { i: 0, j: 1, .. })));
        assert!(matches!(
            LieAlgebra::new(vec![vf("1", "0", &s), vf("2", "0", &s)], s.clone()),
            Err(LieError::Dependent { .. })
        ));
    }

    #[test]
    fn transcendental_closure() {
        let s = Scope::new();
        let v = LieAlgebra::new(vec![vf("1", "0", &s), vf("0", "exp(x)", &s), vf("0", "x*exp(x)", &s)], s).unwrap();
        let c = structure_constants(&v).unwrap();
        assert_eq!(c.get(0, 1, 1), &q(1));
        assert_eq!(c.get(0, 2, 1), &q(1));
        assert_eq!(c.get(0, 2, 2), &q(1));
    }
}

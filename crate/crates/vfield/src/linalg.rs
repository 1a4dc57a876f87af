//! Exact dense linear algebra over ℚ and over constant expressions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::expr::{Expr, Monomial, Poly};

/// Exact field element.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Scalar for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn one() -> Self {
        Expr::one()
    }
    fn is_zero(&self) -> bool {
        self.is_zero_canonical()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: Scalar>(m: &mut Matrix<T>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one().div(&m[r][c]);
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{v : m v = 0}`, one vector per free column with that entry 1.
pub fn nullspace<T: Scalar>(m: &Matrix<T>, cols: usize) -> Vec<Vec<T>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); cols];
        v[f] = T::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = a[r][f].neg();
        }
        out.push(v);
    }
    out
}

/// Rewrites a spanning set in reduced echelon form: each vector has a leading 1
/// at a position where all the others vanish.
pub fn echelon_basis<T: Scalar>(vs: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut a: Matrix<T> = vs.to_vec();
    let p = rref(&mut a);
    a.truncate(p.len());
    a
}

pub fn determinant<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.len();
    let mut a = m.clone();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return T::zero();
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = T::one().div(&a[c][c]);
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let t = f.mul(&a[c][j]);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    det
}

pub fn inverse<T: Scalar>(m: &Matrix<T>) -> Option<Matrix<T>> {
    let n = m.len();
    let mut a: Matrix<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut a);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix by
/// congruence diagonalization.
pub fn inertia(m: &Matrix<BigRational>) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = m.clone();
    let mut diag = Vec::new();
    let mut k = 0;
    while k < n {
        // bring a nonzero diagonal entry to position k
        if Zero::is_zero(&a[k][k]) {
            if let Some(j) = (k + 1..n).find(|&j| !Zero::is_zero(&a[j][j])) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !Zero::is_zero(&a[k][j])) {
                // a[k][k] = a[j][j] = 0, a[k][j] != 0: replace e_k by e_k + e_j
                for i in 0..n {
                    let t = a[i][j].clone();
                    a[i][k] = &a[i][k] + &t;
                }
                for i in 0..n {
                    let t = a[j][i].clone();
                    a[k][i] = &a[k][i] + &t;
                }
            } else {
                diag.push(<BigRational as Zero>::zero());
                k += 1;
                continue;
            }
        }
        let p = a[k][k].clone();
        for i in k + 1..n {
            if Zero::is_zero(&a[i][k]) {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
            for j in k..n {
                let t = &f * &a[j][k];
                a[j][i] = &a[j][i] - &t;
            }
        }
        diag.push(p);
        k += 1;
    }
    let pos = diag.iter().filter(|d| d.is_positive()).count();
    let neg = diag.iter().filter(|d| d.is_negative()).count();
    (pos, neg, n - pos - neg)
}

/// Converts a matrix of expressions to rationals when every entry is rational.
pub fn to_rational(m: &Matrix<Expr>) -> Option<Matrix<BigRational>> {
    m.iter().map(|r| r.iter().map(|e| e.as_rational()).collect()).collect()
}

pub fn from_rational(m: &Matrix<BigRational>) -> Matrix<Expr> {
    m.iter().map(|r| r.iter().cloned().map(Expr::rational).collect()).collect()
}

/// Nullspace with the rational fast path when possible.
pub fn expr_nullspace(m: &Matrix<Expr>, cols: usize) -> Vec<Vec<Expr>> {
    match to_rational(m) {
        Some(q) => from_rational(&nullspace(&q, cols)),
        None => nullspace(m, cols),
    }
}

pub fn expr_echelon_basis(vs: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    match to_rational(&vs.to_vec()) {
        Some(q) => from_rational(&echelon_basis(&q)),
        None => echelon_basis(vs),
    }
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = crate::expr::poly_gcd(a, b);
    a.mul(&b.div_exact(&g).unwrap())
}

/// Coefficient-matching rows for `Σ λ_i columns[i] = 0` with constant `λ`.
///
/// Each column is a list of component functions. Components are brought to a
/// common denominator and split by spatial monomial; the coefficients depend only
/// on parameters.
pub fn matching_rows(columns: &[Vec<Expr>]) -> Matrix<Expr> {
    let n = columns.len();
    if n == 0 {
        return Vec::new();
    }
    let comps = columns[0].len();
    let mut rows = Vec::new();
    for a in 0..comps {
        let mut l = Poly::one();
        for col in columns {
            l = lcm(&l, col[a].den());
        }
        let mut table: BTreeMap<Monomial, Vec<Expr>> = BTreeMap::new();
        for (i, col) in columns.iter().enumerate() {
            let e = &col[a];
            if e.is_zero_canonical() {
                continue;
            }
            let p = e.num().mul(&l.div_exact(e.den()).unwrap());
            for (m, c) in crate::expr::split_spatial(&p) {
                let row = table.entry(m).or_insert_with(|| vec![Expr::zero(); n]);
                row[i] = c;
            }
        }
        rows.extend(table.into_values());
    }
    rows
}

/// Basis of constant linear relations among the columns.
pub fn constant_relations(columns: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    let rows = matching_rows(columns);
    expr_nullspace(&rows, columns.len())
}

/// Constants `λ` with `Σ λ_i basis[i] = target`, if they exist.
pub fn constant_combination(basis: &[Vec<Expr>], target: &[Expr]) -> Option<Vec<Expr>> {
    let mut cols = basis.to_vec();
    cols.push(target.to_vec());
    let n = basis.len();
    let rels = constant_relations(&cols);
    let rel = rels.into_iter().find(|r| !r[n].is_zero_canonical())?;
    let k = -&rel[n];
    Some(rel[..n].iter().map(|c| c / &k).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn det_and_inverse() {
        let m = vec![vec![q(0), q(0), q(-4)], vec![q(0), q(2), q(0)], vec![q(-4), q(0), q(0)]];
        assert_eq!(determinant(&m), q(-32));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0][2], BigRational::new((-1).into(), 4.into()));
        assert_eq!(inertia(&m), (2, 1, 0));
        let d = vec![vec![q(-8), q(0), q(0)], vec![q(0), q(-8), q(0)], vec![q(0), q(0), q(-2)]];
        assert_eq!(inertia(&d), (0, 3, 0));
    }

    #[test]
    fn nullspace_basis() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: BigRational = m[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(Zero::is_zero(&s));
        }
    }
}

//! Exact expressions: rational functions in `x`, `y` and parameters, extended by
//! `exp`, `log`, `sqrt` and `abs` atoms.
//!
//! Every [`Expr`] is stored in canonical form `num/den` with the polynomial gcd
//! removed and the denominator monic in graded-lex order.

mod atom;
mod canon;
mod eval;
mod param;
mod parse;
mod poly;
mod print;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

pub use atom::FuncKind;
pub use eval::{Certainty, EvalError, Point, Value, ZeroTest, PRECISION, SAMPLES};

pub(crate) use canon::{expr_sign, Sign};
pub(crate) use eval::Sampler;
pub use param::{Constraint, Parameter, Scope};
pub use parse::ParseError;

pub(crate) use atom::Atom;
pub(crate) use poly::{gcd as poly_gcd, Monomial, Poly};

/// Coordinate with respect to which derivatives are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Inner {
    num: Poly,
    den: Poly,
}

/// Canonical exact expression. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Inner>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("value {value} violates the {constraint} constraint of parameter {name}")]
    ConstraintViolation { name: alloc::string::String, constraint: &'static str, value: alloc::string::String },
    #[error("substitution makes a denominator vanish")]
    Pole,
}

impl Expr {
    fn raw(num: Poly, den: Poly) -> Expr {
        Expr(Arc::new(Inner { num, den }))
    }

    pub(crate) fn from_poly(p: Poly) -> Expr {
        canon::normalize(p, Poly::one())
    }

    pub(crate) fn num(&self) -> &Poly {
        &self.0.num
    }

    pub(crate) fn den(&self) -> &Poly {
        &self.0.den
    }

    pub(crate) fn atom(a: Atom) -> Expr {
        Expr::raw(Poly::atom(a), Poly::one())
    }

    pub fn zero() -> Expr {
        Expr::raw(Poly::zero(), Poly::one())
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(q: BigRational) -> Expr {
        Expr::raw(Poly::constant(q), Poly::one())
    }

    pub fn x() -> Expr {
        Expr::atom(Atom::X)
    }

    pub fn y() -> Expr {
        Expr::atom(Atom::Y)
    }

    pub fn coord(c: Coord) -> Expr {
        match c {
            Coord::X => Expr::x(),
            Coord::Y => Expr::y(),
        }
    }

    pub fn param(p: &Parameter) -> Expr {
        Expr::atom(Atom::Param(p.clone()))
    }

    pub fn exp(&self) -> Expr {
        canon::exp(self)
    }

    pub fn log(&self) -> Expr {
        canon::log(self)
    }

    pub fn sqrt(&self) -> Expr {
        canon::sqrt(self)
    }

    pub fn abs(&self) -> Expr {
        canon::abs(self)
    }

    /// Integer power; negative exponents invert. Panics on `0^k` with `k < 0`.
    pub fn pow(&self, k: i64) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        let e = k.unsigned_abs() as u32;
        let (n, d) = (self.num().pow(e), self.den().pow(e));
        if k > 0 {
            canon::normalize(n, d)
        } else {
            assert!(!self.is_zero_canonical(), "zero to a negative power");
            canon::normalize(d, n)
        }
    }

    pub fn recip(&self) -> Expr {
        self.pow(-1)
    }

    /// Literal canonical zero.
    pub fn is_zero_canonical(&self) -> bool {
        self.num().is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den().is_one() && self.num().is_one()
    }

    /// Rational value when the expression is a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den().is_one() {
            self.num().constant_value()
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// No `exp`, `log`, `sqrt` or `abs` anywhere.
    pub fn is_rational_fragment(&self) -> bool {
        !self.num().has_atom(|a| a.is_transcendental()) && !self.den().has_atom(|a| a.is_transcendental())
    }

    /// Depends on `x` or `y`.
    pub fn is_spatial(&self) -> bool {
        self.num().has_atom(|a| a.is_spatial()) || self.den().has_atom(|a| a.is_spatial())
    }

    /// Independent of `x` and `y` (parameters allowed).
    pub fn is_constant(&self) -> bool {
        !self.is_spatial()
    }

    /// Polynomial in its atoms (denominator one).
    pub fn is_polynomial(&self) -> bool {
        self.den().is_one()
    }

    pub(crate) fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = self.num().atoms();
        s.extend(self.den().atoms());
        s
    }

    /// Parameters occurring anywhere, including inside function arguments.
    pub fn params(&self) -> BTreeSet<Parameter> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            match a {
                Atom::Param(p) => {
                    out.insert(p);
                }
                Atom::Func(f) => out.extend(f.arg.params()),
                _ => {}
            }
        }
        out
    }

    pub fn diff(&self, c: Coord) -> Expr {
        if self.is_constant() {
            return Expr::zero();
        }
        let dn = diff_poly(self.num(), c);
        if self.den().is_one() {
            return dn;
        }
        let dd = diff_poly(self.den(), c);
        let n = Expr::raw(self.num().clone(), Poly::one());
        let d = Expr::raw(self.den().clone(), Poly::one());
        (&(&dn * &d) - &(&n * &dd)) / &(&d * &d)
    }

    pub fn dx(&self) -> Expr {
        self.diff(Coord::X)
    }

    pub fn dy(&self) -> Expr {
        self.diff(Coord::Y)
    }

    /// Replaces coordinates and parameters. Parameter values are checked against
    /// their constraints when they are rational.
    pub fn substitute(&self, s: &Substitution) -> Result<Expr, SubstError> {
        for (name, v) in &s.params {
            if let (Some(q), Some(p)) = (v.as_rational(), self.params().iter().find(|p| p.name() == name.as_str())) {
                if !p.constraint().admits(&q) {
                    return Err(SubstError::ConstraintViolation {
                        name: name.clone(),
                        constraint: p.constraint().name(),
                        value: alloc::format!("{}", Expr::rational(q)),
                    });
                }
            }
        }
        self.subst_unchecked(s)
    }

    fn subst_unchecked(&self, s: &Substitution) -> Result<Expr, SubstError> {
        if s.is_empty() {
            return Ok(self.clone());
        }
        let mut cache: BTreeMap<Atom, Expr> = BTreeMap::new();
        let n = subst_poly(self.num(), s, &mut cache)?;
        let d = subst_poly(self.den(), s, &mut cache)?;
        if d.is_zero_canonical() {
            return Err(SubstError::Pole);
        }
        Ok(&n / &d)
    }

    /// Evaluates at a point. Exact for the rational fragment.
    pub fn eval_at(&self, point: &Point) -> Result<Value, EvalError> {
        eval::eval(self, point)
    }

    /// Identically-zero test with certainty tag.
    pub fn is_zero(&self) -> ZeroTest {
        eval::zero_test(self)
    }

    /// Parses the expression grammar; identifiers must be `x`, `y`, a function
    /// name or a parameter declared in `scope`.
    pub fn parse(text: &str, scope: &Scope) -> Result<Expr, ParseError> {
        parse::parse(text, scope)
    }

    pub fn numerator(&self) -> Expr {
        Expr::from_poly(self.num().clone())
    }

    pub fn denominator(&self) -> Expr {
        Expr::from_poly(self.den().clone())
    }

    /// Monic gcd of the numerators of `a` and `b`.
    pub fn gcd_numerators(a: &Expr, b: &Expr) -> Expr {
        Expr::from_poly(poly::gcd(a.num(), b.num()))
    }

    /// Monic polynomial with the same zero set as the numerator, repeated factors removed.
    pub fn numerator_radical(&self) -> Expr {
        if self.num().is_constant() {
            return Expr::one();
        }
        let mut r = self.num().clone();
        loop {
            let (_, s, t) = poly::square_split(&r);
            if s.is_one() {
                return Expr::from_poly(t);
            }
            r = s.mul(&t);
        }
    }

    /// Exact quotient of numerators, if it exists.
    pub fn divide_numerator(&self, by: &Expr) -> Option<Expr> {
        self.num().div_exact(by.num()).map(Expr::from_poly)
    }

    /// Whether the expression is positive everywhere it is defined, by term inspection.
    pub fn is_manifestly_positive(&self) -> bool {
        canon::expr_sign(self) == Sign::Pos
    }
}

/// Splits a polynomial by its spatial monomials; coefficients are constant expressions.
pub(crate) fn split_spatial(p: &Poly) -> BTreeMap<Monomial, Expr> {
    let mut parts: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in &p.terms {
        let (sp, cst): (Vec<_>, Vec<_>) = m.0.iter().cloned().partition(|(a, _)| a.is_spatial());
        let e = parts.entry(Monomial(sp)).or_default();
        *e = e.add(&Poly::term(Monomial(cst), c.clone()));
    }
    parts.into_iter().map(|(m, p)| (m, Expr::from_poly(p))).collect()
}

fn atom_derivative(a: &Atom, c: Coord) -> Expr {
    match a {
        Atom::X => if c == Coord::X { Expr::one() } else { Expr::zero() },
        Atom::Y => if c == Coord::Y { Expr::one() } else { Expr::zero() },
        Atom::Param(_) => Expr::zero(),
        Atom::Func(f) => {
            let du = f.arg.diff(c);
            if du.is_zero_canonical() {
                return Expr::zero();
            }
            let me = Expr::atom(a.clone());
            match f.kind {
                FuncKind::Exp => &me * &du,
                FuncKind::Log => &du / &f.arg,
                FuncKind::Sqrt => &du / &(&Expr::int(2) * &me),
                FuncKind::Abs => &(&du * &me) / &f.arg,
            }
        }
    }
}

fn diff_poly(p: &Poly, c: Coord) -> Expr {
    let mut acc = Expr::zero();
    for a in p.atoms() {
        let da = atom_derivative(&a, c);
        if da.is_zero_canonical() {
            continue;
        }
        let part = Expr::from_poly(p.diff(&a));
        acc = &acc + &(&part * &da);
    }
    acc
}

fn subst_poly(p: &Poly, s: &Substitution, cache: &mut BTreeMap<Atom, Expr>) -> Result<Expr, SubstError> {
    let mut acc = Expr::zero();
    for (m, c) in &p.terms {
        let mut t = Expr::rational(c.clone());
        for (a, e) in &m.0 {
            let v = match cache.get(a) {
                Some(v) => v.clone(),
                None => {
                    let v = subst_atom(a, s)?;
                    cache.insert(a.clone(), v.clone());
                    v
                }
            };
            t = &t * &v.pow(*e as i64);
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

fn subst_atom(a: &Atom, s: &Substitution) -> Result<Expr, SubstError> {
    Ok(match a {
        Atom::X => s.x.clone().unwrap_or_else(Expr::x),
        Atom::Y => s.y.clone().unwrap_or_else(Expr::y),
        Atom::Param(p) => s
            .params
            .iter()
            .find(|(n, _)| n.as_str() == p.name())
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| Expr::atom(a.clone())),
        Atom::Func(f) => {
            let arg = f.arg.subst_unchecked(s)?;
            match f.kind {
                FuncKind::Exp => arg.exp(),
                FuncKind::Log => {
                    if arg.is_zero_canonical() {
                        return Err(SubstError::Pole);
                    }
                    arg.log()
                }
                FuncKind::Sqrt => arg.sqrt(),
                FuncKind::Abs => arg.abs(),
            }
        }
    })
}

/// Simultaneous replacement of `x`, `y` and named parameters.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    pub x: Option<Expr>,
    pub y: Option<Expr>,
    pub params: Vec<(alloc::string::String, Expr)>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn x(mut self, e: Expr) -> Self {
        self.x = Some(e);
        self
    }

    pub fn y(mut self, e: Expr) -> Self {
        self.y = Some(e);
        self
    }

    pub fn param(mut self, name: &str, e: Expr) -> Self {
        self.params.push((alloc::string::String::from(name), e));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_none() && self.y.is_none() && self.params.is_empty()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Expr {
        Expr::rational(q)
    }
}

fn add_exprs(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero_canonical() {
        return b.clone();
    }
    if b.is_zero_canonical() {
        return a.clone();
    }
    if a.den() == b.den() {
        if a.den().is_one() {
            let n = a.num().add(b.num());
            if !n.has_atom(|t| t.is_special()) {
                return Expr::raw(n, Poly::one());
            }
            return canon::normalize(n, Poly::one());
        }
        return canon::normalize(a.num().add(b.num()), a.den().clone());
    }
    let g = poly::gcd(a.den(), b.den());
    let ca = b.den().div_exact(&g).unwrap();
    let cb = a.den().div_exact(&g).unwrap();
    let n = a.num().mul(&ca).add(&b.num().mul(&cb));
    let d = a.den().mul(&ca);
    canon::normalize(n, d)
}

fn mul_exprs(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero_canonical() || b.is_zero_canonical() {
        return Expr::zero();
    }
    if let Some(q) = a.as_rational() {
        if q.is_one() {
            return b.clone();
        }
        return Expr::raw(b.num().scale(&q), b.den().clone());
    }
    if let Some(q) = b.as_rational() {
        if q.is_one() {
            return a.clone();
        }
        return Expr::raw(a.num().scale(&q), a.den().clone());
    }
    if a.den().is_one() && b.den().is_one() {
        let n = a.num().mul(b.num());
        if !n.has_atom(|t| t.is_special()) {
            return Expr::raw(n, Poly::one());
        }
        return canon::normalize(n, Poly::one());
    }
    // cross-cancel before multiplying
    let g1 = poly::gcd(a.num(), b.den());
    let g2 = poly::gcd(b.num(), a.den());
    let n = a.num().div_exact(&g1).unwrap().mul(&b.num().div_exact(&g2).unwrap());
    let d = a.den().div_exact(&g2).unwrap().mul(&b.den().div_exact(&g1).unwrap());
    canon::normalize_coprime(n, d)
}

fn div_exprs(a: &Expr, b: &Expr) -> Expr {
    assert!(!b.is_zero_canonical(), "division by zero expression");
    let inv = if b.num().is_constant() {
        let k = b.num().constant_value().unwrap();
        if b.den().is_one() {
            return Expr::raw(a.num().scale(&k.recip()), a.den().clone());
        }
        canon::normalize(b.den().scale(&k.recip()), Poly::one())
    } else {
        canon::normalize_coprime(b.den().clone(), b.num().clone())
    };
    mul_exprs(a, &inv)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $f(self, rhs)
            }
        }
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $f(&self, rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $f(self, &rhs)
            }
        }
    };
}

fn sub_exprs(a: &Expr, b: &Expr) -> Expr {
    add_exprs(a, &-b)
}

binop!(Add, add, add_exprs);
binop!(Sub, sub, sub_exprs);
binop!(Mul, mul, mul_exprs);
binop!(Div, div, div_exprs);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::raw(self.num().neg(), self.den().clone())
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl core::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn rational_sign(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

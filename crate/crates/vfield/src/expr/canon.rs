//! Normalization of `num/den` pairs and the rewrite rules for `exp`, `sqrt`,
//! `abs` and `log`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::atom::{Atom, FuncKind};
use super::poly::{gcd, square_split, Monomial, Poly};
use super::Expr;

pub(crate) fn normalize(num: Poly, den: Poly) -> Expr {
    normalize_impl(num, den, false)
}

/// As [`normalize`] for inputs already known to be coprime.
pub(crate) fn normalize_coprime(num: Poly, den: Poly) -> Expr {
    normalize_impl(num, den, true)
}

fn normalize_impl(mut num: Poly, mut den: Poly, coprime: bool) -> Expr {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return Expr::zero();
    }
    let special = num.has_atom(Atom::is_special) || den.has_atom(Atom::is_special);
    if special {
        let rn = rewrite(&num);
        let rd = rewrite(&den);
        if rn.is_some() || rd.is_some() {
            let n = rn.unwrap_or_else(|| Expr::raw(num, Poly::one()));
            let d = rd.unwrap_or_else(|| Expr::raw(den, Poly::one()));
            return &n / &d;
        }
    }
    if let Some(k) = den.constant_value() {
        return Expr::raw(num.scale(&k.recip()), Poly::one());
    }
    if !coprime && !num.is_constant() {
        let g = gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g).unwrap();
            den = den.div_exact(&g).unwrap();
        }
        if let Some(k) = den.constant_value() {
            return Expr::raw(num.scale(&k.recip()), Poly::one());
        }
    }
    if special && den.has_atom(Atom::is_special) {
        let mc = den.monomial_content();
        let mut conj = Expr::one();
        let mut any = false;
        for (a, e) in &mc.0 {
            if let Atom::Func(f) = a {
                match f.kind {
                    FuncKind::Exp => {
                        conj = &conj * &(&f.arg * &Expr::int(-(*e as i64))).exp();
                        any = true;
                    }
                    FuncKind::Sqrt | FuncKind::Abs => {
                        conj = &conj * &Expr::atom(a.clone()).pow(*e as i64);
                        any = true;
                    }
                    FuncKind::Log => {}
                }
            }
        }
        if any {
            let n = &Expr::raw(num, Poly::one()) * &conj;
            let d = &Expr::raw(den, Poly::one()) * &conj;
            return &n / &d;
        }
    }
    let lc = den.leading_coeff();
    if !lc.is_one() {
        let inv = lc.recip();
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    Expr::raw(num, den)
}

/// Applies monomial rewrite rules; None when nothing applies.
fn rewrite(p: &Poly) -> Option<Expr> {
    let reducible = |m: &Monomial| {
        let mut exps = 0;
        for (a, e) in &m.0 {
            match a.kind() {
                Some(FuncKind::Exp) => {
                    exps += 1;
                    if *e > 1 {
                        return true;
                    }
                }
                Some(FuncKind::Sqrt | FuncKind::Abs) if *e > 1 => return true,
                _ => {}
            }
        }
        exps > 1
    };
    if !p.terms.keys().any(reducible) {
        return None;
    }
    let mut plain = Poly::zero();
    let mut acc = Expr::zero();
    for (m, c) in &p.terms {
        if !reducible(m) {
            plain = plain.add(&Poly::term(m.clone(), c.clone()));
            continue;
        }
        let mut rest = Vec::new();
        let mut exp_arg = Expr::zero();
        let mut factor = Expr::one();
        for (a, e) in &m.0 {
            match a {
                Atom::Func(f) if f.kind == FuncKind::Exp => {
                    exp_arg = &exp_arg + &(&f.arg * &Expr::int(*e as i64));
                }
                Atom::Func(f) if f.kind == FuncKind::Sqrt && *e > 1 => {
                    factor = &factor * &f.arg.pow((*e / 2) as i64);
                    if e % 2 == 1 {
                        rest.push((a.clone(), 1));
                    }
                }
                Atom::Func(f) if f.kind == FuncKind::Abs && *e > 1 => {
                    factor = &factor * &f.arg.pow((2 * (*e / 2)) as i64);
                    if e % 2 == 1 {
                        rest.push((a.clone(), 1));
                    }
                }
                _ => rest.push((a.clone(), *e)),
            }
        }
        let base = Expr::from_poly(Poly::term(Monomial(rest), c.clone()));
        acc = &acc + &(&(&base * &factor) * &exp(&exp_arg));
    }
    Some(&Expr::from_poly(plain) + &acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Sign {
    Pos,
    NonNeg,
    Neg,
    NonPos,
    Unknown,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::NonNeg => Sign::NonPos,
            Sign::Neg => Sign::Pos,
            Sign::NonPos => Sign::NonNeg,
            Sign::Unknown => Sign::Unknown,
        }
    }

    pub fn nonneg(self) -> bool {
        matches!(self, Sign::Pos | Sign::NonNeg)
    }

    pub fn nonpos(self) -> bool {
        matches!(self, Sign::Neg | Sign::NonPos)
    }
}

/// Sign valid at every point of the real domain, from term-wise inspection.
pub(crate) fn poly_sign(p: &Poly) -> Sign {
    if p.is_zero() {
        return Sign::Unknown;
    }
    let term_nonneg = |m: &Monomial| m.0.iter().all(|(a, e)| e % 2 == 0 || a.is_nonneg());
    let term_pos = |m: &Monomial| m.0.iter().all(|(a, _)| a.is_positive());
    let lead_pos = p.leading_coeff().is_positive();
    let q = if lead_pos { p.clone() } else { p.neg() };
    let mut all_nonneg = true;
    let mut some_pos = false;
    for (m, c) in &q.terms {
        if !c.is_positive() || !term_nonneg(m) {
            all_nonneg = false;
            break;
        }
        if term_pos(m) {
            some_pos = true;
        }
    }
    let s = if !all_nonneg {
        Sign::Unknown
    } else if some_pos {
        Sign::Pos
    } else {
        Sign::NonNeg
    };
    if lead_pos {
        s
    } else {
        s.flip()
    }
}

/// Sign of an expression wherever it is defined.
pub(crate) fn expr_sign(e: &Expr) -> Sign {
    if e.is_zero_canonical() {
        return Sign::Unknown;
    }
    let n = poly_sign(e.num());
    let d = poly_sign(e.den());
    let d = match d {
        Sign::Pos | Sign::NonNeg => Sign::Pos,
        Sign::Neg | Sign::NonPos => Sign::Neg,
        Sign::Unknown => return Sign::Unknown,
    };
    if d == Sign::Pos {
        n
    } else {
        n.flip()
    }
}

pub(crate) fn exp(u: &Expr) -> Expr {
    if u.is_zero_canonical() {
        return Expr::one();
    }
    if u.den().is_one() && u.num().is_monomial() {
        let (m, c) = u.num().leading().unwrap();
        if m.0.len() == 1 && m.0[0].1 == 1 && m.0[0].0.kind() == Some(FuncKind::Log) && c.is_integer() {
            if let (Atom::Func(f), Some(k)) = (&m.0[0].0, c.to_integer().to_i64()) {
                return f.arg.pow(k);
            }
        }
    }
    Expr::atom(Atom::func(FuncKind::Exp, u.clone()))
}

fn log_atom(u: Expr) -> Expr {
    if u.is_one() {
        return Expr::zero();
    }
    if u.den().is_one() && u.num().is_monomial() {
        let (m, c) = u.num().leading().unwrap();
        if c.is_one() && m.0.len() == 1 && m.0[0].1 == 1 {
            if let Atom::Func(f) = &m.0[0].0 {
                if f.kind == FuncKind::Exp {
                    return f.arg.clone();
                }
            }
        }
    }
    Expr::atom(Atom::func(FuncKind::Log, u))
}

/// log of a polynomial split into known-positive factors, if possible.
fn log_poly_split(p: &Poly) -> Option<Expr> {
    let (k, q) = p.integer_primitive();
    if !k.is_positive() {
        return None;
    }
    let mc = q.monomial_content();
    let rest = q.div_monomial(&mc);
    if !mc.0.iter().all(|(a, _)| a.is_positive()) {
        return None;
    }
    if !rest.is_one() && poly_sign(&rest) != Sign::Pos {
        return None;
    }
    let mut out = log_atom(Expr::rational(k));
    for (a, e) in &mc.0 {
        out = &out + &(&log_atom(Expr::atom(a.clone())) * &Expr::int(*e as i64));
    }
    if !rest.is_one() {
        out = &out + &log_atom(Expr::from_poly(rest));
    }
    Some(out)
}

pub(crate) fn log(u: &Expr) -> Expr {
    assert!(!u.is_zero_canonical(), "log of zero");
    if u.is_one() {
        return Expr::zero();
    }
    if let (Some(a), Some(b)) = (log_poly_split(u.num()), log_poly_split(u.den())) {
        return &a - &b;
    }
    log_atom(u.clone())
}

/// `|p|` as an expression.
fn abs_poly(p: &Poly) -> Expr {
    if let Some(c) = p.constant_value() {
        return Expr::rational(c.abs());
    }
    match poly_sign(p) {
        s if s.nonneg() => return Expr::from_poly(p.clone()),
        s if s.nonpos() => return Expr::from_poly(p.neg()),
        _ => {}
    }
    let (k, s, t) = square_split(p);
    let mut out = Expr::rational(k.abs());
    if !s.is_one() {
        out = &out * &Expr::from_poly(s.mul(&s));
    }
    let mc = t.monomial_content();
    let rest = t.div_monomial(&mc);
    for (a, e) in &mc.0 {
        debug_assert_eq!(*e, 1);
        let ae = Expr::atom(a.clone());
        if a.is_nonneg() {
            out = &out * &ae;
        } else {
            out = &out * &Expr::atom(Atom::func(FuncKind::Abs, ae));
        }
    }
    if !rest.is_one() {
        let r = match poly_sign(&rest) {
            s if s.nonneg() => Expr::from_poly(rest),
            s if s.nonpos() => Expr::from_poly(rest.neg()),
            _ => Expr::atom(Atom::func(FuncKind::Abs, Expr::from_poly(rest.monic()))),
        };
        out = &out * &r;
    }
    out
}

pub(crate) fn abs(u: &Expr) -> Expr {
    if u.is_zero_canonical() {
        return Expr::zero();
    }
    match expr_sign(u) {
        s if s.nonneg() => return u.clone(),
        s if s.nonpos() => return -u,
        _ => {}
    }
    &abs_poly(u.num()) / &abs_poly(u.den())
}

/// Splits a positive integer as `q^2 * f` with `f` free of small square factors.
fn integer_square_part(n: &BigUint) -> (BigUint, BigUint) {
    let mut n = n.clone();
    let mut q = BigUint::one();
    let mut f = BigUint::one();
    let mut d = 2u32;
    while d < 10_000 {
        let dd = BigUint::from(d);
        if &dd * &dd > n {
            break;
        }
        let mut m = 0;
        while (&n % &dd).is_zero() {
            n /= &dd;
            m += 1;
        }
        for _ in 0..m / 2 {
            q *= &dd;
        }
        if m % 2 == 1 {
            f *= &dd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let r = n.sqrt();
    if &r * &r == n {
        q *= r;
    } else {
        f *= n;
    }
    (q, f)
}

fn sqrt_poly(p: &Poly) -> Expr {
    if p.is_one() {
        return Expr::one();
    }
    // exp content halves
    let mc = p.monomial_content();
    let exps: Vec<(Atom, u32)> = mc.0.iter().filter(|(a, _)| a.kind() == Some(FuncKind::Exp)).cloned().collect();
    let mut pre = Expr::one();
    let mut p = p.clone();
    if !exps.is_empty() {
        let m = Monomial(exps.clone());
        p = p.div_monomial(&m);
        for (a, e) in &exps {
            if let Atom::Func(f) = a {
                pre = &pre * &(&f.arg * &Expr::frac(*e as i64, 2)).exp();
            }
        }
    }
    let (k, s, t) = square_split(&p);
    let neg = k.is_negative();
    let k = k.abs();
    let nd = k.numer().magnitude() * k.denom().magnitude();
    let (q, f) = integer_square_part(&nd);
    let coeff = BigRational::new(BigInt::from(q), k.denom().clone());
    let mut out = &pre * &Expr::rational(coeff);
    if !s.is_one() {
        let se = Expr::from_poly(s);
        out = &out * &abs(&se);
    }
    let mut arg = t.scale(&BigRational::from_integer(BigInt::from(f)));
    if neg {
        arg = arg.neg();
    }
    if !arg.is_one() {
        out = &out * &Expr::atom(Atom::func(FuncKind::Sqrt, Expr::from_poly(arg)));
    }
    out
}

pub(crate) fn sqrt(u: &Expr) -> Expr {
    if u.is_zero_canonical() {
        return Expr::zero();
    }
    &sqrt_poly(u.num()) / &sqrt_poly(u.den())
}

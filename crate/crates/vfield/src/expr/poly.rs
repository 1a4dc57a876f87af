use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::atom::Atom;

/// Power product, atoms ascending, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct Monomial(pub Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(alloc::vec![(a, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *a {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *a {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((a.clone(), e - f)),
                }
            } else {
                out.push((a.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (a, e) in &self.0 {
            let f = other.exponent(a);
            if f > 0 {
                out.push((a.clone(), (*e).min(f)));
            }
        }
        Monomial(out)
    }

    pub fn without(&self, a: &Atom) -> Monomial {
        Monomial(self.0.iter().filter(|(b, _)| b != a).cloned().collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic, largest atom most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (mut i, mut j) = (self.0.len(), other.0.len());
        while i > 0 && j > 0 {
            let (a, e) = &self.0[i - 1];
            let (b, f) = &other.0[j - 1];
            match a.cmp(b) {
                Ordering::Greater => return Ordering::Greater,
                Ordering::Less => return Ordering::Less,
                Ordering::Equal => match e.cmp(f) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    o => return o,
                },
            }
        }
        (i > 0).cmp(&(j > 0))
    }
}

/// Sparse polynomial with rational coefficients over atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub(crate) struct Poly {
    pub terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn atom(a: Atom) -> Self {
        Poly::term(Monomial::atom(a, 1), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in &m.0 {
                s.insert(a.clone());
            }
        }
        s
    }

    pub fn max_atom(&self) -> Option<Atom> {
        self.terms.keys().filter_map(|m| m.0.last().map(|(a, _)| a.clone())).max()
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.exponent(a)).max().unwrap_or(0)
    }

    pub fn has_atom(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(a, _)| pred(a)))
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Integer coefficients with unit content and positive leading coefficient; also returns the factor `k` with `self = k * result`.
    pub fn integer_primitive(&self) -> (BigRational, Poly) {
        if self.is_zero() {
            return (BigRational::one(), Poly::zero());
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&l / c.denom());
            g = g.gcd(&n);
        }
        let mut k = BigRational::new(g, l);
        if self.leading_coeff().is_negative() {
            k = -k;
        }
        let inv = k.recip();
        (k, self.scale(&inv))
    }

    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut g = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(n, c)| (n.div(m).expect("monomial divides"), c.clone())).collect() }
    }

    /// Coefficients in powers of `a`.
    pub fn to_univariate(&self, a: &Atom) -> Vec<Poly> {
        let d = self.degree_in(a) as usize;
        let mut out = alloc::vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(a) as usize;
            out[e].add_term(m.without(a), c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[Poly], a: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (e, p) in coeffs.iter().enumerate() {
            let am = Monomial::atom(a.clone(), e as u32);
            for (m, c) in &p.terms {
                out.add_term(m.mul(&am), c.clone());
            }
        }
        out
    }

    /// Exact quotient, or None when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.is_monomial() {
            let (m, c) = d.leading().unwrap();
            let inv = c.recip();
            let mut out = Poly::zero();
            for (n, k) in &self.terms {
                out.terms.insert(n.div(m)?, k * &inv);
            }
            return Some(out);
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            r = r.sub(&d.mul_term(&m, &c));
            q.add_term(m, c);
        }
        Some(q)
    }

    pub fn diff(&self, a: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(a);
            if e == 0 {
                continue;
            }
            let mut n = m.clone();
            for (b, f) in n.0.iter_mut() {
                if b == a {
                    *f -= 1;
                }
            }
            n.0.retain(|(_, f)| *f > 0);
            out.add_term(n, c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }
}

fn uni_is_zero(p: &[Poly]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn uni_trim(mut p: Vec<Poly>) -> Vec<Poly> {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn uni_content(p: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in p {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn uni_div_content(p: &[Poly], g: &Poly) -> Vec<Poly> {
    p.iter().map(|c| c.div_exact(g).expect("content divides")).collect()
}

/// Pseudo-remainder of `f` by `g`, both trimmed, `g` nonzero.
fn uni_prem(f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let dg = g.len() - 1;
    let lg = &g[dg];
    let mut r: Vec<Poly> = f.to_vec();
    while r.len() > dg && !uni_is_zero(&r) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dg;
        for c in r.iter_mut() {
            *c = c.mul(lg);
        }
        for (i, gc) in g.iter().enumerate() {
            let t = gc.mul(&lr);
            r[i + shift] = r[i + shift].sub(&t);
        }
        r = uni_trim(r);
        if r.len() - 1 == dr {
            // leading term must cancel
            r.pop();
            r = uni_trim(r);
        }
    }
    r
}

/// Monic greatest common divisor; zero only when both inputs vanish.
pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.monic() == b.monic() {
        return a.monic();
    }
    if a.is_monomial() || b.is_monomial() {
        let g = a.monomial_content().gcd(&b.monomial_content());
        return Poly::term(g, BigRational::one());
    }
    let aa = a.atoms();
    let ba = b.atoms();
    if aa.is_disjoint(&ba) {
        return Poly::one();
    }
    let v = aa.iter().chain(ba.iter()).max().cloned().unwrap();
    if !aa.contains(&v) {
        return gcd(a, &uni_content(&b.to_univariate(&v)));
    }
    if !ba.contains(&v) {
        return gcd(&uni_content(&a.to_univariate(&v)), b);
    }
    let ua = a.to_univariate(&v);
    let ub = b.to_univariate(&v);
    let ca = uni_content(&ua);
    let cb = uni_content(&ub);
    let c = gcd(&ca, &cb);
    let pa = uni_div_content(&ua, &ca);
    let pb = uni_div_content(&ub, &cb);
    let (mut f, mut g) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
    loop {
        if g.len() == 1 {
            // constant in v: primitive gcd is trivial
            return c.monic();
        }
        let r = uni_prem(&f, &g);
        if uni_is_zero(&r) {
            break;
        }
        let rc = uni_content(&r);
        let r = uni_div_content(&r, &rc);
        let r = Poly::from_univariate(&r, &v).integer_primitive().1.to_univariate(&v);
        f = g;
        g = r;
    }
    let pg = uni_content(&g);
    let g = uni_div_content(&g, &pg);
    Poly::from_univariate(&g, &v).mul(&c).monic()
}

/// Writes `p = k * s^2 * t` with `s`, `t` monic and `t` free of repeated factors found by Yun's method.
pub(crate) fn square_split(p: &Poly) -> (BigRational, Poly, Poly) {
    assert!(!p.is_zero());
    if let Some(c) = p.constant_value() {
        return (c, Poly::one(), Poly::one());
    }
    let k = p.leading_coeff();
    let p = p.monic();
    let mc = p.monomial_content();
    let rest = p.div_monomial(&mc);
    let mut s = Poly::term(
        Monomial(mc.0.iter().filter(|(_, e)| e / 2 > 0).map(|(a, e)| (a.clone(), e / 2)).collect()),
        BigRational::one(),
    );
    let mut t = Poly::term(
        Monomial(mc.0.iter().filter(|(_, e)| e % 2 == 1).map(|(a, _)| (a.clone(), 1)).collect()),
        BigRational::one(),
    );
    if !rest.is_constant() {
        let v = rest.max_atom().unwrap();
        let u = rest.to_univariate(&v);
        let cont = uni_content(&u);
        let pp = Poly::from_univariate(&uni_div_content(&u, &cont), &v).monic();
        if !cont.is_constant() {
            let (_, s1, t1) = square_split(&cont);
            s = s.mul(&s1);
            t = t.mul(&t1);
        }
        let dp = pp.diff(&v);
        let mut c = gcd(&pp, &dp);
        let mut w = pp.div_exact(&c).unwrap();
        let mut i = 1u32;
        while !c.is_constant() {
            let y = gcd(&w, &c);
            let z = w.div_exact(&y).unwrap();
            if i / 2 > 0 {
                s = s.mul(&z.pow(i / 2));
            }
            if i % 2 == 1 {
                t = t.mul(&z);
            }
            i += 1;
            w = y.clone();
            c = c.div_exact(&y).unwrap();
        }
        if i / 2 > 0 {
            s = s.mul(&w.pow(i / 2));
        }
        if i % 2 == 1 {
            t = t.mul(&w);
        }
    }
    let s = s.monic();
    let t = t.monic();
    (k, s, t)
}

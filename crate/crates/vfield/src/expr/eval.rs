//! Point evaluation and the identically-zero test.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign as BfSign};
use num_bigint::{BigInt, Sign as BiSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::atom::{Atom, FuncKind};
use super::param::{Constraint, Parameter};
use super::poly::Poly;
use super::Expr;

/// Working precision of approximate evaluation, in bits.
pub const PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;
/// |v| below 2^-ZERO_EXP counts as zero.
const ZERO_EXP: i32 = 128;
/// Points used by the sampled zero test.
pub const SAMPLES: u32 = 32;
const SEED: u64 = 0x5eed_2d1e;

/// Evaluation point with parameter bindings.
#[derive(Clone, Debug, Default)]
pub struct Point {
    pub x: BigRational,
    pub y: BigRational,
    pub params: BTreeMap<String, BigRational>,
}

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Point { x, y, params: BTreeMap::new() }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    pub fn bind(mut self, name: &str, v: BigRational) -> Self {
        self.params.insert(String::from(name), v);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("pole at the evaluation point")]
    Pole,
    #[error("parameter {0} is unbound")]
    Unbound(String),
    #[error("{0} is undefined at the evaluation point")]
    Undefined(&'static str),
}

/// Result of evaluation.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(BigRational),
    Approx { value: BigFloat, precision: usize },
}

impl Value {
    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(q) => Some(q),
            _ => None,
        }
    }

    /// Zero, up to the working tolerance for approximate values.
    pub fn is_negligible(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_zero(),
            Value::Approx { value, .. } => bf_negligible(value),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => super::rational_to_f64(q),
            Value::Approx { value, .. } => bf_to_f64(value),
        }
    }

    /// -1, 0 or 1; approximate values within tolerance report 0.
    pub fn signum(&self) -> i32 {
        match self {
            Value::Exact(q) => super::rational_sign(q),
            Value::Approx { value, .. } => {
                if bf_negligible(value) {
                    0
                } else if value.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{}", Expr::rational(q.clone())),
            Value::Approx { value, .. } => write!(f, "{:e}", bf_to_f64(value)),
        }
    }
}

fn bf_negligible(v: &BigFloat) -> bool {
    v.is_zero() || v.exponent().map_or(true, |e| e < -ZERO_EXP)
}

fn bf_to_f64(v: &BigFloat) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, e, _)) = v.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *words.last().unwrap_or(&0) as f64 / 18446744073709551616.0;
    let mut out = top;
    let mut e = e as i64;
    while e > 0 {
        out *= 2.0;
        e -= 1;
    }
    while e < 0 {
        out /= 2.0;
        e += 1;
    }
    if sign == BfSign::Neg {
        -out
    } else {
        out
    }
}

fn bigint_to_bf(n: &BigInt) -> BigFloat {
    let (sign, digits) = n.to_u32_digits();
    let p = PRECISION.max(digits.len() * 32 + 64);
    let base = BigFloat::from_u64(1u64 << 32, p);
    let mut acc = BigFloat::from_u64(0, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d as u64, p), p, RM);
    }
    if sign == BiSign::Minus {
        acc.neg()
    } else {
        acc
    }
}

fn rational_to_bf(q: &BigRational) -> BigFloat {
    bigint_to_bf(q.numer()).div(&bigint_to_bf(q.denom()), PRECISION, RM)
}

#[derive(Clone, Debug)]
enum Num {
    Exact(BigRational),
    Approx(BigFloat),
}

impl Num {
    fn bf(&self) -> BigFloat {
        match self {
            Num::Exact(q) => rational_to_bf(q),
            Num::Approx(b) => b.clone(),
        }
    }

    fn add(&self, o: &Num) -> Num {
        match (self, o) {
            (Num::Exact(a), Num::Exact(b)) => Num::Exact(a + b),
            _ => Num::Approx(self.bf().add(&o.bf(), PRECISION, RM)),
        }
    }

    fn mul(&self, o: &Num) -> Num {
        match (self, o) {
            (Num::Exact(a), Num::Exact(b)) => Num::Exact(a * b),
            _ => Num::Approx(self.bf().mul(&o.bf(), PRECISION, RM)),
        }
    }

    fn pow(&self, e: u32) -> Num {
        match self {
            Num::Exact(a) => Num::Exact(num_traits::pow(a.clone(), e as usize)),
            Num::Approx(b) => Num::Approx(b.powi(e as usize, PRECISION, RM)),
        }
    }

    fn negligible(&self) -> bool {
        match self {
            Num::Exact(a) => a.is_zero(),
            Num::Approx(b) => bf_negligible(b),
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Num::Exact(a) => a.is_negative(),
            Num::Approx(b) => b.is_negative() && !bf_negligible(b),
        }
    }
}

struct Evaluator<'a> {
    point: &'a Point,
    consts: Consts,
    cache: BTreeMap<Atom, Num>,
}

impl Evaluator<'_> {
    fn param(&self, p: &Parameter) -> Result<Num, EvalError> {
        if let Some(v) = self.point.params.get(p.name()) {
            return Ok(Num::Exact(v.clone()));
        }
        p.value().map(|v| Num::Exact(v.clone())).ok_or_else(|| EvalError::Unbound(String::from(p.name())))
    }

    fn atom(&mut self, a: &Atom) -> Result<Num, EvalError> {
        if let Some(v) = self.cache.get(a) {
            return Ok(v.clone());
        }
        let v = match a {
            Atom::X => Num::Exact(self.point.x.clone()),
            Atom::Y => Num::Exact(self.point.y.clone()),
            Atom::Param(p) => self.param(p)?,
            Atom::Func(f) => {
                let u = self.expr(&f.arg)?;
                self.func(f.kind, u)?
            }
        };
        self.cache.insert(a.clone(), v.clone());
        Ok(v)
    }

    fn func(&mut self, k: FuncKind, u: Num) -> Result<Num, EvalError> {
        Ok(match k {
            FuncKind::Abs => match u {
                Num::Exact(q) => Num::Exact(q.abs()),
                Num::Approx(b) => Num::Approx(b.abs()),
            },
            FuncKind::Exp => {
                if let Num::Exact(q) = &u {
                    if q.is_zero() {
                        return Ok(Num::Exact(BigRational::one()));
                    }
                }
                Num::Approx(u.bf().exp(PRECISION, RM, &mut self.consts))
            }
            FuncKind::Log => {
                if u.negligible() || u.is_negative() {
                    return Err(EvalError::Undefined("log"));
                }
                if let Num::Exact(q) = &u {
                    if q.is_one() {
                        return Ok(Num::Exact(BigRational::zero()));
                    }
                }
                Num::Approx(u.bf().ln(PRECISION, RM, &mut self.consts))
            }
            FuncKind::Sqrt => {
                if u.is_negative() {
                    return Err(EvalError::Undefined("sqrt"));
                }
                if let Num::Exact(q) = &u {
                    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
                    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
                        return Ok(Num::Exact(BigRational::new(n, d)));
                    }
                }
                if u.negligible() {
                    return Ok(Num::Exact(BigRational::zero()));
                }
                Num::Approx(u.bf().sqrt(PRECISION, RM))
            }
        })
    }

    fn poly(&mut self, p: &Poly) -> Result<Num, EvalError> {
        let mut acc = Num::Exact(BigRational::zero());
        for (m, c) in &p.terms {
            let mut t = Num::Exact(c.clone());
            for (a, e) in &m.0 {
                let v = self.atom(a)?;
                t = t.mul(&v.pow(*e));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn expr(&mut self, e: &Expr) -> Result<Num, EvalError> {
        let n = self.poly(e.num())?;
        let d = self.poly(e.den())?;
        if d.negligible() {
            return Err(EvalError::Pole);
        }
        Ok(match (n, d) {
            (Num::Exact(a), Num::Exact(b)) => Num::Exact(a / b),
            (n, d) => Num::Approx(n.bf().div(&d.bf(), PRECISION, RM)),
        })
    }
}

pub(crate) fn eval(e: &Expr, point: &Point) -> Result<Value, EvalError> {
    let consts = Consts::new().expect("constants cache");
    let mut ev = Evaluator { point, consts, cache: BTreeMap::new() };
    Ok(match ev.expr(e)? {
        Num::Exact(q) => Value::Exact(q),
        Num::Approx(b) => Value::Approx { value: b, precision: PRECISION },
    })
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certainty {
    Proved,
    Sampled { samples: u32 },
}

impl Certainty {
    /// The weaker of two certainties.
    pub fn min(self, other: Certainty) -> Certainty {
        match (self, other) {
            (Certainty::Proved, o) => o,
            (s, Certainty::Proved) => s,
            (Certainty::Sampled { samples: a }, Certainty::Sampled { samples: b }) => {
                Certainty::Sampled { samples: a.min(b) }
            }
        }
    }

    pub fn is_proved(self) -> bool {
        self == Certainty::Proved
    }
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certainty::Proved => f.write_str("proved"),
            Certainty::Sampled { samples } => write!(f, "sampled({samples})"),
        }
    }
}

/// Outcome of the identically-zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    ProvedZero,
    ProvedNonzero,
    SampledZero { samples: u32 },
    SampledNonzero { samples: u32 },
}

impl ZeroTest {
    pub fn is_zero(self) -> bool {
        matches!(self, ZeroTest::ProvedZero | ZeroTest::SampledZero { .. })
    }

    pub fn certainty(self) -> Certainty {
        match self {
            ZeroTest::ProvedZero | ZeroTest::ProvedNonzero => Certainty::Proved,
            ZeroTest::SampledZero { samples } | ZeroTest::SampledNonzero { samples } => Certainty::Sampled { samples },
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            ZeroTest::ProvedZero => "proved-zero",
            ZeroTest::ProvedNonzero => "proved-nonzero",
            ZeroTest::SampledZero { .. } => "sampled-zero",
            ZeroTest::SampledNonzero { .. } => "sampled-nonzero",
        }
    }
}

impl serde::Serialize for ZeroTest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for ZeroTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroTest::SampledZero { samples } | ZeroTest::SampledNonzero { samples } => {
                write!(f, "{}({samples})", self.tag())
            }
            _ => f.write_str(self.tag()),
        }
    }
}

/// Deterministic stream of small rationals.
pub(crate) struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(stream: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15)) }
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.rng.next_u32() as i64).rem_euclid(hi - lo + 1)
    }

    pub fn rational(&mut self) -> BigRational {
        let n = self.int(-9, 9);
        let d = self.int(1, 7);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn constrained(&mut self, c: Constraint) -> BigRational {
        match c {
            Constraint::Free => self.rational(),
            Constraint::Nonzero => loop {
                let q = self.rational();
                if !q.is_zero() {
                    return q;
                }
            },
            Constraint::Positive => {
                let n = self.int(1, 9);
                let d = self.int(1, 5);
                BigRational::new(BigInt::from(n), BigInt::from(d))
            }
            Constraint::Integer => BigRational::from_integer(BigInt::from(self.int(-5, 5))),
        }
    }

    /// Random point binding every parameter of `params` lacking a value.
    pub fn point(&mut self, params: &[Parameter]) -> Point {
        let mut p = Point::new(self.rational(), self.rational());
        for q in params {
            if q.value().is_none() {
                let v = self.constrained(q.constraint());
                p.params.insert(String::from(q.name()), v);
            }
        }
        p
    }
}

pub(crate) fn zero_test(e: &Expr) -> ZeroTest {
    if e.is_zero_canonical() {
        return ZeroTest::ProvedZero;
    }
    if e.is_rational_fragment() {
        return ZeroTest::ProvedNonzero;
    }
    let params: Vec<Parameter> = e.params().into_iter().collect();
    let mut sampler = Sampler::new(0);
    let mut ok = 0u32;
    let mut attempts = 0;
    while ok < SAMPLES && attempts < 400 {
        attempts += 1;
        let pt = sampler.point(&params);
        match eval(e, &pt) {
            Ok(v) => {
                ok += 1;
                if !v.is_negligible() {
                    return ZeroTest::SampledNonzero { samples: ok };
                }
            }
            Err(_) => continue,
        }
    }
    if ok == 0 {
        return ZeroTest::SampledNonzero { samples: 0 };
    }
    ZeroTest::SampledZero { samples: ok }
}

#[cfg(test)]
mod tests {
    use super::super::Scope;
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s, &Scope::new()).unwrap()
    }

    #[test]
    fn exact_and_approx() {
        let v = p("x^2 + y/3").eval_at(&Point::ints(2, 3)).unwrap();
        assert_eq!(v.as_rational().unwrap(), &BigRational::from_integer(5.into()));
        let v = p("exp(x)").eval_at(&Point::ints(1, 0)).unwrap();
        assert!((v.to_f64() - core::f64::consts::E).abs() < 1e-15);
        assert!(matches!(p("1/x").eval_at(&Point::ints(0, 1)), Err(EvalError::Pole)));
    }

    #[test]
    fn sampled_verdicts() {
        let e = &p("log(1 + x^2)") - &p("log(1 + x^2)");
        assert_eq!(e.is_zero(), ZeroTest::ProvedZero);
        let e = p("log(x^2 + 1)*2 - log((x^2 + 1)^2)");
        assert!(e.is_zero().is_zero());
        assert!(!p("exp(x) - 1").is_zero().is_zero());
    }
}

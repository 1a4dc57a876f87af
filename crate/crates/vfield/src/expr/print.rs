use alloc::string::String;
use core::fmt::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::atom::Atom;
use super::poly::{Monomial, Poly};
use super::Expr;

fn write_atom(f: &mut impl Write, a: &Atom) -> fmt::Result {
    match a {
        Atom::X => f.write_str("x"),
        Atom::Y => f.write_str("y"),
        Atom::Param(p) => f.write_str(p.name()),
        Atom::Func(g) => write!(f, "{}({})", g.kind.name(), g.arg),
    }
}

fn write_monomial(f: &mut impl Write, m: &Monomial) -> fmt::Result {
    for (i, (a, e)) in m.0.iter().enumerate() {
        if i > 0 {
            f.write_char('*')?;
        }
        write_atom(f, a)?;
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Polynomial with integer coefficients, terms ascending.
fn write_int_poly(f: &mut impl Write, p: &Poly) -> fmt::Result {
    if p.is_zero() {
        return f.write_char('0');
    }
    for (i, (m, c)) in p.terms.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                f.write_char('-')?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        let a = c.abs();
        if m.is_one() {
            write!(f, "{}", a.numer())?;
        } else {
            if !a.is_one() {
                write!(f, "{}*", a.numer())?;
            }
            write_monomial(f, m)?;
        }
    }
    Ok(())
}

fn needs_parens_den(p: &Poly) -> bool {
    if p.terms.len() > 1 {
        return true;
    }
    let (m, c) = p.leading().unwrap();
    !c.is_one() || m.0.len() > 1
}

/// Scales `num/den` so that all coefficients are coprime integers.
fn clear(num: &Poly, den: &Poly) -> (Poly, Poly) {
    let mut l = BigInt::one();
    for c in num.terms.values().chain(den.terms.values()) {
        l = l.lcm(c.denom());
    }
    let lq = BigRational::from_integer(l);
    let (n, d) = (num.scale(&lq), den.scale(&lq));
    let mut g = BigInt::zero();
    for c in n.terms.values().chain(d.terms.values()) {
        g = g.gcd(c.numer());
    }
    let gq = BigRational::from_integer(g).recip();
    (n.scale(&gq), d.scale(&gq))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den().is_one() {
            if let Some(q) = self.num().constant_value() {
                return write!(f, "{q}");
            }
            let (n, d) = clear(self.num(), self.den());
            if d.is_one() {
                return write_int_poly(f, &n);
            }
            // rational coefficients: print as a fraction over an integer
            let mut s = String::new();
            if n.terms.len() > 1 {
                s.push('(');
                write_int_poly(&mut s, &n)?;
                s.push(')');
            } else {
                write_int_poly(&mut s, &n)?;
            }
            return write!(f, "{s}/{}", d.constant_value().unwrap());
        }
        let (n, d) = clear(self.num(), self.den());
        if n.terms.len() > 1 {
            f.write_char('(')?;
            write_int_poly(f, &n)?;
            f.write_char(')')?;
        } else {
            write_int_poly(f, &n)?;
        }
        f.write_char('/')?;
        if needs_parens_den(&d) {
            f.write_char('(')?;
            write_int_poly(f, &d)?;
            f.write_char(')')
        } else {
            write_int_poly(f, &d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Scope;
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> Expr {
        Expr::parse(s, &Scope::new()).unwrap()
    }

    #[test]
    fn printing() {
        assert_eq!(p("x^2 - y^2").to_string(), "x^2 - y^2");
        assert_eq!(p("y^2 - x^2").to_string(), "-x^2 + y^2");
        assert_eq!(p("-1/(2*y^2)").to_string(), "-1/(2*y^2)");
        assert_eq!(p("x/2 + y/3").to_string(), "(3*x + 2*y)/6");
        assert_eq!(p("1 + x^2 + y^2").to_string(), "1 + x^2 + y^2");
        assert_eq!(p("-3/4").to_string(), "-3/4");
        assert_eq!(p("exp(2*x)*y").to_string(), "y*exp(2*x)");
    }

    #[test]
    fn round_trip() {
        for s in ["(x - y)^-2", "x/2 + y/3", "sqrt(x)/(1 + x)", "-x^3/7", "exp(-x)*log(1 + y^2)"] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s} -> {e}");
        }
    }
}

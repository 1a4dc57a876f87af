//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | base ("^" ["-"] integer)?
//! base   := integer | x | y | ident | "(" expr ")" | fn "(" expr ")"
//! fn     := exp | log | sqrt | abs
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::atom::FuncKind;
use super::param::Scope;
use super::Expr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier '{name}' at position {position}")]
    UnknownIdentifier { name: String, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::UnknownIdentifier { position, .. } => *position,
        }
    }

    pub fn shifted(self, by: usize) -> ParseError {
        match self {
            ParseError::Syntax { position, message } => ParseError::Syntax { position: position + by, message },
            ParseError::UnknownIdentifier { name, position } => {
                ParseError::UnknownIdentifier { name, position: position + by }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(s[st..i].parse().unwrap()), st));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(s[st..i].to_string()), st));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ParseError::Syntax { position: i, message: format!("unexpected character '{c}'") });
        }
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: &'a Scope,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.at(), message: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if *self.peek() == Tok::Op('/') {
                let at = self.at();
                self.pos += 1;
                let d = self.factor()?;
                if d.is_zero_canonical() {
                    return Err(ParseError::Syntax { position: at, message: "division by zero".to_string() });
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let b = self.base()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let at = self.at();
            let Tok::Int(n) = self.peek().clone() else {
                return self.err("expected integer exponent");
            };
            self.pos += 1;
            let Some(k) = n.to_i64().filter(|k| *k <= 1_000) else {
                return Err(ParseError::Syntax { position: at, message: "exponent too large".to_string() });
            };
            let k = if neg { -k } else { k };
            if k < 0 && b.is_zero_canonical() {
                return Err(ParseError::Syntax { position: at, message: "division by zero".to_string() });
            }
            return Ok(b.pow(k));
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let at = self.at();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::rational(BigRational::from_integer(n)))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(k) = FuncKind::from_name(&name) {
                    self.expect('(')?;
                    let arg_at = self.at();
                    let u = self.expr()?;
                    self.expect(')')?;
                    return match k {
                        FuncKind::Exp => Ok(u.exp()),
                        FuncKind::Abs => Ok(u.abs()),
                        FuncKind::Sqrt => Ok(u.sqrt()),
                        FuncKind::Log => {
                            if u.is_zero_canonical() {
                                return Err(ParseError::Syntax {
                                    position: arg_at,
                                    message: "log of zero".to_string(),
                                });
                            }
                            Ok(u.log())
                        }
                    };
                }
                match name.as_str() {
                    "x" => Ok(Expr::x()),
                    "y" => Ok(Expr::y()),
                    _ => match self.scope.get(&name) {
                        Some(p) => Ok(Expr::param(p)),
                        None => Err(ParseError::UnknownIdentifier { name, position: at }),
                    },
                }
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Op(c) => self.err(&format!("unexpected '{c}'")),
        }
    }
}

pub(crate) fn parse(text: &str, scope: &Scope) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, scope };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::super::{Constraint, Parameter};
    use super::*;

    #[test]
    fn errors() {
        let s = Scope::new();
        assert!(matches!(parse("x +", &s), Err(ParseError::Syntax { position: 3, .. })));
        assert!(matches!(parse("2 x", &s), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("c*x", &s), Err(ParseError::UnknownIdentifier { position: 0, .. })));
        assert!(parse("1/(x - x)", &s).is_err());
        let s = s.with(Parameter::new("c", Constraint::Nonzero));
        assert!(parse("c*x", &s).is_ok());
    }

    #[test]
    fn precedence() {
        let s = Scope::new();
        assert_eq!(parse("-x^2", &s).unwrap(), -parse("x*x", &s).unwrap());
        assert_eq!(parse("x/2/3", &s).unwrap(), parse("x/6", &s).unwrap());
        assert_eq!(parse("2^-1", &s).unwrap(), Expr::frac(1, 2));
    }
}

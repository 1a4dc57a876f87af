//! Literal syntax for fields and metrics, and the algebra file format.

use vfield::expr::ParseError;
use vfield::geom::{CovTensor2, VectorField};
use vfield::liealg::{LieAlgebra, LieError};
use vfield::{Constraint, Expr, Parameter, Scope};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("in '{text}': {source}")]
    Expr { text: String, source: ParseError },
    #[error("in '{text}': {message}")]
    Literal { text: String, message: String },
    #[error("line {line}: {message}")]
    File { line: usize, message: String },
    #[error("{0}")]
    Algebra(#[from] LieError),
}

fn literal_err(text: &str, message: impl Into<String>) -> InputError {
    InputError::Literal { text: text.to_string(), message: message.into() }
}

/// Splits at top-level binary `+`/`-`, keeping each sign with its chunk.
fn signed_chunks(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut prev: Option<char> = None;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                let binary = prev.is_some_and(|p| !matches!(p, '*' | '/' | '^' | '(' | '+' | '-'));
                if binary {
                    out.push((start, &text[start..i]));
                    start = i;
                }
            }
            _ => {}
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    out.push((start, &text[start..]));
    out
}

/// Parses `Σ <coefficient> <symbol>` where each chunk ends in one of `symbols`.
/// A missing coefficient means 1; `*` before the symbol is optional.
fn parse_linear(text: &str, symbols: &[&str], scope: &Scope) -> Result<Vec<Expr>, InputError> {
    let mut out = vec![Expr::zero(); symbols.len()];
    let mut seen = false;
    for (offset, chunk) in signed_chunks(text) {
        let trimmed = chunk.trim_end();
        if trimmed.trim().is_empty() {
            return Err(literal_err(text, "empty term"));
        }
        let found = symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                trimmed.ends_with(*s)
                    && !trimmed[..trimmed.len() - s.len()]
                        .chars()
                        .next_back()
                        .is_some_and(|c| c.is_alphanumeric() || c == '_')
            })
            .max_by_key(|(_, s)| s.len());
        let Some((k, sym)) = found else {
            return Err(literal_err(text, format!("term '{}' lacks one of {}", chunk.trim(), symbols.join(", "))));
        };
        let mut coef = trimmed[..trimmed.len() - sym.len()].trim_end();
        if let Some(c) = coef.strip_suffix('*') {
            coef = c.trim_end();
        }
        let body = coef.trim_start();
        let value = match body {
            "" | "+" => Expr::one(),
            "-" => -&Expr::one(),
            _ => {
                let (skip, src) = match body.strip_prefix('+') {
                    Some(r) => (1, r),
                    None => (0, body),
                };
                let lead = coef.len() - body.len();
                Expr::parse(src, scope).map_err(|e| InputError::Expr {
                    text: text.to_string(),
                    source: e.shifted(offset + lead + skip),
                })?
            }
        };
        out[k] = &out[k] + &value;
        seen = true;
    }
    if !seen {
        return Err(literal_err(text, "empty literal"));
    }
    Ok(out)
}

/// `<expr> dx + <expr> dy`, in any order; either term may be omitted.
pub fn parse_field(text: &str, scope: &Scope) -> Result<VectorField, InputError> {
    let c = parse_linear(text, &["dx", "dy"], scope)?;
    Ok(VectorField::new(c[0].clone(), c[1].clone()))
}

/// `<expr> dxdx + <expr> dxdy + <expr> dydy`, where the `dxdy` coefficient is the
/// component `g_xy = g_yx`; `dydx` is accepted as a synonym. `gE` and `gH` name
/// the Euclidean and hyperbolic metrics.
pub fn parse_metric(text: &str, scope: &Scope) -> Result<CovTensor2, InputError> {
    match text.trim() {
        "gE" => return Ok(CovTensor2::euclidean()),
        "gH" => return Ok(CovTensor2::hyperbolic()),
        _ => {}
    }
    let c = parse_linear(text, &["dxdx", "dxdy", "dydx", "dydy"], scope)?;
    Ok(CovTensor2::new(c[0].clone(), &c[1] + &c[2], c[3].clone()))
}

/// `name[:constraint]` as given to `--param`.
pub fn parse_param_decl(text: &str) -> Result<Parameter, InputError> {
    let (name, constraint) = match text.split_once(':') {
        Some((n, c)) => (n.trim(), c.trim()),
        None => (text.trim(), "free"),
    };
    let constraint =
        Constraint::from_name(constraint).ok_or_else(|| literal_err(text, format!("unknown constraint '{constraint}'")))?;
    if !valid_ident(name) {
        return Err(literal_err(text, "invalid parameter name"));
    }
    Ok(Parameter::new(name, constraint))
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, "x" | "y" | "exp" | "log" | "sqrt" | "abs")
}

/// A parsed algebra file: `param <name> [constraint]` lines, `Xi = <field>` lines
/// in order, `#` comments.
#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub names: Vec<String>,
    pub algebra: LieAlgebra,
}

pub fn parse_algebra_file(text: &str, extra: &Scope) -> Result<AlgebraFile, InputError> {
    let mut scope = extra.clone();
    let mut names = Vec::new();
    let mut basis = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("param ") {
            let mut words = rest.split_whitespace();
            let name = words.next().unwrap_or("");
            let constraint = words.next().unwrap_or("free");
            if words.next().is_some() {
                return Err(InputError::File { line, message: "expected 'param <name> [constraint]'".into() });
            }
            let p = parse_param_decl(&format!("{name}:{constraint}"))
                .map_err(|e| InputError::File { line, message: e.to_string() })?;
            if scope.get(p.name()).is_some() {
                return Err(InputError::File { line, message: format!("parameter '{name}' declared twice") });
            }
            scope.declare(p);
            continue;
        }
        let Some((name, field)) = content.split_once('=') else {
            return Err(InputError::File { line, message: "expected 'Xi = <expr> dx + <expr> dy'".into() });
        };
        let name = name.trim();
        if !valid_ident(name) {
            return Err(InputError::File { line, message: format!("invalid field name '{name}'") });
        }
        if names.iter().any(|m| m == name) {
            return Err(InputError::File { line, message: format!("field '{name}' defined twice") });
        }
        let f = parse_field(field.trim(), &scope).map_err(|e| InputError::File { line, message: e.to_string() })?;
        names.push(name.to_string());
        basis.push(f);
    }
    if basis.is_empty() {
        return Err(InputError::File { line: 0, message: "no fields defined".into() });
    }
    Ok(AlgebraFile { names, algebra: LieAlgebra::new(basis, scope)? })
}

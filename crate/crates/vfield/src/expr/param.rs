use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Sign or integrality assumption attached to a symbolic parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    Free,
    Nonzero,
    Positive,
    Integer,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::Free => "free",
            Constraint::Nonzero => "nonzero",
            Constraint::Positive => "positive",
            Constraint::Integer => "integer",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "free" => Some(Constraint::Free),
            "nonzero" => Some(Constraint::Nonzero),
            "positive" => Some(Constraint::Positive),
            "integer" => Some(Constraint::Integer),
            _ => None,
        }
    }

    /// Whether `v` is an admissible value.
    pub fn admits(self, v: &BigRational) -> bool {
        match self {
            Constraint::Free => true,
            Constraint::Nonzero => !v.is_zero(),
            Constraint::Positive => v.is_positive(),
            Constraint::Integer => v.is_integer(),
        }
    }
}

/// A named symbolic constant. Identity is the name.
#[derive(Clone, Debug)]
pub struct Parameter {
    name: Arc<str>,
    constraint: Constraint,
    value: Option<BigRational>,
}

impl Parameter {
    pub fn new(name: &str, constraint: Constraint) -> Self {
        Parameter { name: Arc::from(name), constraint, value: None }
    }

    pub fn free(name: &str) -> Self {
        Self::new(name, Constraint::Free)
    }

    pub fn with_value(mut self, v: BigRational) -> Self {
        self.value = Some(v);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn value(&self) -> Option<&BigRational> {
        self.value.as_ref()
    }

    pub(crate) fn is_positive(&self) -> bool {
        self.constraint == Constraint::Positive
    }
}

impl PartialEq for Parameter {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Parameter {}

impl PartialOrd for Parameter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Parameter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

impl core::hash::Hash for Parameter {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// The set of parameters visible to the parser.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scope {
    params: Vec<Parameter>,
}

impl Scope {
    pub fn new() -> Self {
        Scope::default()
    }

    pub fn with(mut self, p: Parameter) -> Self {
        self.declare(p);
        self
    }

    /// Adds or replaces a parameter.
    pub fn declare(&mut self, p: Parameter) {
        match self.params.binary_search(&p) {
            Ok(i) => self.params[i] = p,
            Err(i) => self.params.insert(i, p),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Parameter> {
        self.params
            .binary_search_by(|p| p.name().cmp(name))
            .ok()
            .map(|i| &self.params[i])
    }

    pub fn params(&self) -> &[Parameter] {
        &self.params
    }

    pub fn names(&self) -> Vec<String> {
        self.params.iter().map(|p| String::from(p.name())).collect()
    }
}

use alloc::sync::Arc;

use super::param::Parameter;
use super::Expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FuncKind {
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl FuncKind {
    pub fn name(self) -> &'static str {
        match self {
            FuncKind::Exp => "exp",
            FuncKind::Log => "log",
            FuncKind::Sqrt => "sqrt",
            FuncKind::Abs => "abs",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "exp" => Some(FuncKind::Exp),
            "log" => Some(FuncKind::Log),
            "sqrt" => Some(FuncKind::Sqrt),
            "abs" => Some(FuncKind::Abs),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Func {
    pub kind: FuncKind,
    pub arg: Expr,
}

/// Polynomial indeterminate. Ordering: x < y < parameters < functions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Atom {
    X,
    Y,
    Param(Parameter),
    Func(Arc<Func>),
}

impl Atom {
    pub fn func(kind: FuncKind, arg: Expr) -> Atom {
        Atom::Func(Arc::new(Func { kind, arg }))
    }

    pub fn kind(&self) -> Option<FuncKind> {
        match self {
            Atom::Func(f) => Some(f.kind),
            _ => None,
        }
    }

    /// Atoms subject to monomial rewrite rules.
    pub fn is_special(&self) -> bool {
        matches!(self.kind(), Some(FuncKind::Exp | FuncKind::Sqrt | FuncKind::Abs))
    }

    pub fn is_transcendental(&self) -> bool {
        matches!(self, Atom::Func(_))
    }

    /// Depends on x or y.
    pub fn is_spatial(&self) -> bool {
        match self {
            Atom::X | Atom::Y => true,
            Atom::Param(_) => false,
            Atom::Func(f) => f.arg.is_spatial(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Atom::Param(p) => p.is_positive(),
            Atom::Func(f) => f.kind == FuncKind::Exp,
            _ => false,
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.is_positive() || matches!(self.kind(), Some(FuncKind::Sqrt | FuncKind::Abs))
    }
}

#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod apps;
pub mod casimir;
pub mod catalog;
pub mod distr;
pub mod expr;
pub mod geom;
pub mod liealg;
pub mod linalg;

pub use expr::{Certainty, Constraint, Coord, Expr, Parameter, Scope, ZeroTest};

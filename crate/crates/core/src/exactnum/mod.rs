//! Exact arithmetic on ℚ and on quadratic numbers `p + q·√D`, plus the fixed
//! enumeration of ℚ used by every construction in the crate.

mod enumerate;
mod quad;
mod rational;

pub use enumerate::{calkin_wilf, enumerate_rationals, RationalEnumeration};
pub use quad::{dyadic_between, quad_cmp, rational_between, Ext, ExtendedPoint, QuadPoint};
pub use rational::{rat_arith, ArithOp, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("empty interval ({lo}, {hi})")]
    EmptyInterval { lo: String, hi: String },
    #[error("{0}")]
    Parse(String),
}

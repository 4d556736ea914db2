//! Exact arithmetic: rationals, sparse polynomials, normalized rational functions.

mod chart;
pub mod gcd;
pub mod linalg;
mod monomial;
mod poly;
mod ratfun;

pub use chart::Chart;
pub use monomial::Monomial;
pub use poly::{EvalTarget, Polynomial};
pub use ratfun::{rf_arith, ArithOp, RationalFunction};

pub type Rational = num_rational::BigRational;

/// Small-integer rational, for literals.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

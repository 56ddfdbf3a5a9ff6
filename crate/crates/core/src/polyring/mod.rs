//! Exact multivariate polynomial arithmetic over the rationals.

mod gcd;
mod monomial;
mod parse;
mod poly;
mod ratfun;

use std::sync::Arc;

use thiserror::Error;

pub use gcd::gcd_poly;
pub use monomial::Monomial;
pub(crate) use parse::parse_product_factors;
pub use parse::{parse_poly, parse_rational_function};
pub(crate) use poly::fmt_rational;
pub use poly::{make_vars, Poly};
pub use ratfun::RationalFunction;

pub type Rational = num_rational::BigRational;

/// Ordered variable names shared by every polynomial of one ring.
pub type Vars = Arc<[String]>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("polynomials belong to different variable lists")]
    VarMismatch,
    #[error("expected a vector of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("the zero polynomial has no primitive part")]
    ZeroPolynomial,
}

/// Parses a rational constant written as `a` or `a/b`.
pub fn parse_rational(text: &str) -> Result<Rational, PolyError> {
    let bad = || PolyError::Syntax { pos: 0, msg: format!("invalid rational '{text}'") };
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if num_traits::Zero::is_zero(&d) {
        return Err(PolyError::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(c: &Rational) -> String {
    fmt_rational(c)
}

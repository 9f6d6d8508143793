//! Exact arithmetic substrate: big rationals, torus values over formal
//! irrational symbols, and integer linear algebra.

mod matrix;
mod rational;
mod snf;
mod torus;

pub use matrix::IntMatrix;
pub use rational::{
    floor_div, format_integer, format_rational, gcd, lcm, parse_integer, parse_rational,
    window_representative, Integer, Rational,
};
pub(crate) use snf::{ModEchelon, RowEchelon};
pub use snf::{hermite_rows, integer_kernel_basis, smith_normal_form, SnfResult};
pub use torus::{torus_combine, Basis, IrrationalSymbol, TorusValue};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("cannot parse integer {0:?}")]
    BadInteger(String),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("unknown symbol {0:?} (expected \"one\" or \"tau<k>\" with k >= 1)")]
    BadSymbol(String),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

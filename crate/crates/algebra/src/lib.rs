//! Exact arithmetic over ℚ and real quadratic fields ℚ(√d): scalars, sparse
//! multivariate polynomials, rational functions and matrices.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod gcd;
pub mod linsolve;
pub mod matrix;
pub mod monomial;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod scalar;
pub mod text;

pub use error::AlgebraError;
pub use linsolve::{solve_linear_scalar, RowEchelon, Solution};
pub use matrix::PolyMatrix;
pub use monomial::Monomial;
pub use poly::MultiPoly;
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use scalar::Scalar;
pub use text::{parse_poly, parse_ratfunc, render_poly, render_ratfunc};

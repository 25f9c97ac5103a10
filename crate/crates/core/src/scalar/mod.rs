//! Exact scalar arithmetic: rationals, polynomials in `eps`, and the
//! fraction field with its valuation and limit operators.

mod parse;
mod poly;
mod ratfunc;
mod rational;

pub use parse::parse_rational_function;
pub use poly::EpsPolynomial;
pub use ratfunc::RationalFunction;
pub use ratfunc::Valuation;
pub use rational::Rational;

//! Exact sparse polynomials, Gröbner bases and quotient algebras.

pub mod groebner;
pub mod monomial;
pub mod parse;
pub mod polynomial;
pub mod quotient;

pub use groebner::{groebner_basis, is_groebner_basis, reduce};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{collect_variables, parse_polynomial, ParseError};
pub use polynomial::Polynomial;
pub use quotient::QuotientAlgebra;

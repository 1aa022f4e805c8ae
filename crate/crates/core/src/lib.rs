//! Exact Hochschild and Harrison (co)homology of complete intersections,
//! with the Hodge decomposition by Eulerian idempotents and abelian star
//! products on plane curves.
//!
//! Everything is generic over a [`Field`] of exact scalars; the aliases at
//! the crate root fix it to arbitrary-precision rationals.

pub mod bar;
pub mod error;
pub mod koszul;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod starprod;
pub mod symgroup;

pub use error::{Error, Result};
pub use scalar::Field;

pub type Rational = num_rational::BigRational;
pub type Poly = poly::Polynomial<Rational>;
pub type Algebra = poly::QuotientAlgebra<Rational>;
pub type GroupElement = symgroup::GroupAlgebraElement<Rational>;

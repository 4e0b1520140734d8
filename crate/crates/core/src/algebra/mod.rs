//! Finite-field and polynomial arithmetic.

pub mod factor;
pub mod field;
pub mod poly;

pub use factor::{binomial_factor, factor, is_irreducible, Factorization};
pub use field::{Fe, Field, FieldOp};
pub use poly::Poly;

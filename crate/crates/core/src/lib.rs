//! Exact operator-product calculus for the W3 vertex algebra and its
//! Z2-orbifold, with coefficients in the field of rational functions ℚ(c).

pub mod algebra;
pub mod genericity;
pub mod scalar;
pub mod ope;
pub mod orbifold;
pub mod syntax;

//! Exact scalars: ℚ, polynomials in the central charge `c`, and ℚ(c).

mod laurent;
pub(crate) mod modular;
mod poly;
mod ratfunc;
mod resultant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use laurent::Laurent;
pub use poly::CPoly;
pub use ratfunc::CRat;
pub use resultant::resultant;

/// Arbitrary-precision rational number, always in lowest terms.
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at c = {0}")]
    PoleAtPoint(BigRat),
    #[error("limit factor must be linear and vanish at the limit point")]
    BadLimitFactor,
}

/// `n / d` as a [`BigRat`].
pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

/// Generalized binomial coefficient `n (n-1) ... (n-k+1) / k!` for any integer `n`.
pub fn binomial(n: i64, k: u32) -> BigRat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= n - i;
        den *= i + 1;
    }
    if num.is_zero() {
        return BigRat::zero();
    }
    BigRat::new(num, den)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), rat(10, 1));
        assert_eq!(binomial(2, 3), rat(0, 1));
        assert_eq!(binomial(-1, 3), rat(-1, 1));
        assert_eq!(binomial(-3, 2), rat(6, 1));
        assert_eq!(binomial(7, 0), rat(1, 1));
    }
}

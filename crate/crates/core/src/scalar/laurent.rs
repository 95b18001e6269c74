//! Laurent polynomials in `d = 22 + 5c`.
//!
//! Every structure constant of the W3 operator product expansion, and every
//! binomial produced while reordering modes, lies in ℚ[d, d⁻¹]. The engine
//! keeps its memo tables in this ring so that sums and products never need a
//! polynomial gcd; values are converted to [`CRat`] at the API boundary.

use std::ops::{Add, AddAssign, Mul, Neg};

use num_traits::{One, Zero};

use super::{BigRat, CPoly, CRat};

/// `Σ coeffs[k] d^(low + k)`; trimmed so that the first and last coefficients
/// are nonzero (empty for zero).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<BigRat>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(x: BigRat) -> Self {
        Self::from_parts(0, vec![x])
    }

    /// `x · d^e`
    pub fn monomial(x: BigRat, e: i32) -> Self {
        Self::from_parts(e, vec![x])
    }

    fn from_parts(mut low: i32, mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|x| x.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|x| x.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead_zeros);
        low += lead_zeros as i32;
        Laurent { low, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &BigRat) -> Self {
        if k.is_zero() || self.is_zero() {
            return Self::zero();
        }
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|x| x * k).collect() }
    }

    /// Accumulates `k · other` into `self`.
    pub fn add_scaled(&mut self, other: &Laurent, k: &Laurent) {
        if other.is_zero() || k.is_zero() {
            return;
        }
        let prod = other * k;
        *self += &prod;
    }

    /// Expresses a rational function whose denominator is a power of
    /// `22 + 5c` (times a constant). Returns `None` for anything else.
    pub fn from_crat(x: &CRat) -> Option<Self> {
        if x.is_zero() {
            return Some(Self::zero());
        }
        // den is monic, so den = (c + 22/5)^k = (d/5)^k when representable.
        let den = x.den();
        let k = den.degree()?;
        let root = BigRat::new((-22).into(), 5.into());
        if k > 0 && *den != CPoly::linear(22, 5).monic().pow(k as u32) {
            return None;
        }
        debug_assert!(k == 0 || den.eval(&root).is_zero());
        // c = (d - 22) / 5
        let c_in_d = CPoly::from_coeffs(vec![BigRat::new((-22).into(), 5.into()), BigRat::new(1.into(), 5.into())]);
        let num_d = x.num().compose(&c_in_d);
        let five_k = BigRat::from_integer(num_bigint::BigInt::from(5).pow(k as u32));
        Some(Self::from_parts(-(k as i32), num_d.coeffs().iter().map(|a| a * &five_k).collect()))
    }

    pub fn to_crat(&self) -> CRat {
        if self.is_zero() {
            return CRat::zero();
        }
        let d = CPoly::linear(22, 5);
        let shifted = CPoly::from_coeffs(self.coeffs.clone()).compose(&d);
        if self.low >= 0 {
            CRat::from_poly(&shifted * &d.pow(self.low as u32))
        } else {
            CRat::new(shifted, d.pow((-self.low) as u32)).expect("nonzero denominator")
        }
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        let low = self.low.min(rhs.low);
        let high = (self.low + self.coeffs.len() as i32).max(rhs.low + rhs.coeffs.len() as i32);
        if low == self.low && high == self.low + self.coeffs.len() as i32 {
            for (k, b) in rhs.coeffs.iter().enumerate() {
                self.coeffs[(rhs.low - low) as usize + k] += b;
            }
            let coeffs = std::mem::take(&mut self.coeffs);
            *self = Self::from_parts(low, coeffs);
            return;
        }
        let mut out = vec![BigRat::zero(); (high - low) as usize];
        for (k, a) in self.coeffs.iter().enumerate() {
            out[(self.low - low) as usize + k] += a;
        }
        for (k, b) in rhs.coeffs.iter().enumerate() {
            out[(rhs.low - low) as usize + k] += b;
        }
        *self = Self::from_parts(low, out);
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        if rhs.coeffs.len() == 1 && rhs.low == 0 {
            return self.scale(&rhs.coeffs[0]);
        }
        if self.coeffs.len() == 1 && self.low == 0 {
            return rhs.scale(&self.coeffs[0]);
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Laurent::from_parts(self.low + rhs.low, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn round_trip_through_crat() {
        let d = CRat::from_poly(CPoly::linear(22, 5));
        let x = CRat::from_poly(CPoly::from_ints(&[3, -1, 2])).checked_div(&d.pow(2).unwrap()).unwrap();
        let l = Laurent::from_crat(&x).unwrap();
        assert_eq!(l.to_crat(), x);
        let y = &x * &CRat::from_poly(CPoly::linear(22, 5).pow(3));
        assert_eq!(Laurent::from_crat(&y).unwrap().to_crat(), y);
    }

    #[test]
    fn rejects_other_denominators() {
        let x = CRat::one().checked_div(&CRat::from_poly(CPoly::linear(-1, 1))).unwrap();
        assert!(Laurent::from_crat(&x).is_none());
    }

    #[test]
    fn ring_operations_match_crat() {
        let d = CRat::from_poly(CPoly::linear(22, 5));
        let a = CRat::from_int(32).checked_div(&d).unwrap();
        let b = CRat::from_poly(CPoly::linear(-2, 1)).scale(&rat(3, 2)).checked_div(&d).unwrap();
        let (la, lb) = (Laurent::from_crat(&a).unwrap(), Laurent::from_crat(&b).unwrap());
        assert_eq!((&la * &lb).to_crat(), &a * &b);
        assert_eq!((&la + &lb).to_crat(), &a + &b);
        assert!((&la + &(-&la)).is_zero());
    }
}

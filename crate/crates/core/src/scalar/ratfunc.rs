//! The rational-function field ℚ(c).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{BigRat, CPoly, ScalarError};

/// An element `num / den` of ℚ(c), always stored in canonical form:
/// `gcd(num, den) = 1`, `den` monic, and zero is `0 / 1`. Equality is
/// therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CRat {
    num: CPoly,
    den: CPoly,
}

impl CRat {
    /// Canonicalizes `num / den`. Fails if `den` is zero.
    pub fn new(num: CPoly, den: CPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: CPoly, den: CPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = CPoly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        let lc = den.leading();
        if lc.is_one() {
            CRat { num, den }
        } else {
            let inv = lc.recip();
            CRat { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Self {
        CRat { num: CPoly::zero(), den: CPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_rat(BigRat::one())
    }

    pub fn from_rat(x: BigRat) -> Self {
        CRat { num: CPoly::constant(x), den: CPoly::one() }
    }

    pub fn from_int(x: i64) -> Self {
        Self::from_rat(BigRat::from_integer(x.into()))
    }

    pub fn from_poly(p: CPoly) -> Self {
        CRat { num: p, den: CPoly::one() }
    }

    /// The central charge `c` itself.
    pub fn c() -> Self {
        Self::from_poly(CPoly::c())
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Returns the value if this is a constant rational number.
    pub fn as_rat(&self) -> Option<BigRat> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn scale(&self, k: &BigRat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        CRat { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &CRat) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact value at `c = c0`.
    pub fn evaluate_at(&self, c0: &BigRat) -> Result<BigRat, ScalarError> {
        let d = self.den.eval(c0);
        if d.is_zero() {
            return Err(ScalarError::PoleAtPoint(c0.clone()));
        }
        Ok(self.num.eval(c0) / d)
    }

    /// `lim_{c → c0} factor(c) · self(c)`, where `factor` is linear and
    /// vanishes at `c0`. The product is formed in ℚ(c) first so any
    /// cancellation against the denominator happens symbolically.
    pub fn limit_scaled(&self, factor: &CPoly, c0: &BigRat) -> Result<BigRat, ScalarError> {
        if factor.degree() != Some(1) || !factor.eval(c0).is_zero() {
            return Err(ScalarError::BadLimitFactor);
        }
        (self * &CRat::from_poly(factor.clone())).evaluate_at(c0)
    }
}

impl Add for &CRat {
    type Output = CRat;
    fn add(self, rhs: &CRat) -> CRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return CRat::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        CRat::canonical(num, &self.den * &rhs.den)
    }
}

impl Sub for &CRat {
    type Output = CRat;
    fn sub(self, rhs: &CRat) -> CRat {
        self + &(-rhs)
    }
}

impl Neg for &CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &CRat {
    type Output = CRat;
    fn mul(self, rhs: &CRat) -> CRat {
        if self.is_zero() || rhs.is_zero() {
            return CRat::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return CRat { num: &self.num * &rhs.num, den: CPoly::one() };
        }
        CRat::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CRat {
            type Output = CRat;
            fn $m(self, rhs: CRat) -> CRat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        -&self
    }
}

impl From<i64> for CRat {
    fn from(x: i64) -> Self {
        CRat::from_int(x)
    }
}

impl From<BigRat> for CRat {
    fn from(x: BigRat) -> Self {
        CRat::from_rat(x)
    }
}

impl From<CPoly> for CRat {
    fn from(p: CPoly) -> Self {
        CRat::from_poly(p)
    }
}

fn write_int_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt]) -> fmt::Result {
    let p = CPoly::from_coeffs(coeffs.iter().map(|x| BigRat::from_integer(x.clone())).collect());
    write!(f, "{p}")
}

/// Splits a primitive integer polynomial into `(22+5c)^k * rest`.
fn split_normalization_factor(mut p: Vec<BigInt>) -> (u32, Vec<BigInt>) {
    let d = CPoly::linear(22, 5);
    let mut k = 0;
    loop {
        let poly = CPoly::from_coeffs(p.iter().map(|x| BigRat::from_integer(x.clone())).collect());
        if poly.degree().unwrap_or(0) == 0 {
            break;
        }
        let (q, r) = poly.div_rem(&d);
        if !r.is_zero() || q.coeffs().iter().any(|x| !x.is_integer()) {
            break;
        }
        p = q.coeffs().iter().map(|x| x.to_integer()).collect();
        k += 1;
    }
    (k, p)
}

/// Prints in the expression grammar, e.g. `-(475*c^2-5590*c-181248)/(60480*(5*c+22))`.
impl fmt::Display for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let den_int = self.den.primitive_integer_coeffs();
        let den_lc = BigRat::from_integer(den_int.last().cloned().unwrap_or_else(BigInt::one));
        let scaled = self.num.scale(&den_lc);
        let num_int = scaled.primitive_integer_coeffs();
        // scaled = k * num_int
        let k = scaled.leading() / BigRat::from_integer(num_int.last().cloned().unwrap_or_else(BigInt::one));
        if k.is_negative() {
            write!(f, "-")?;
        }
        let k = k.abs();
        let num_is_one = num_int.len() == 1 && num_int[0].is_one();
        if num_is_one {
            write!(f, "{}", k.numer())?;
        } else if k.numer().is_one() {
            write!(f, "(")?;
            write_int_poly(f, &num_int)?;
            write!(f, ")")?;
        } else {
            write!(f, "{}*(", k.numer())?;
            write_int_poly(f, &num_int)?;
            write!(f, ")")?;
        }
        let mut parts: Vec<String> = Vec::new();
        if !k.denom().is_one() {
            parts.push(k.denom().to_string());
        }
        let (power, rest) = split_normalization_factor(den_int);
        if power == 1 {
            parts.push("(5*c+22)".into());
        } else if power > 1 {
            parts.push(format!("(5*c+22)^{power}"));
        }
        if rest.len() > 1 {
            let mut s = String::new();
            {
                use std::fmt::Write;
                let p = CPoly::from_coeffs(rest.iter().map(|x| BigRat::from_integer(x.clone())).collect());
                write!(s, "({p})")?;
            }
            parts.push(s);
        } else if rest.len() == 1 && !rest[0].is_one() {
            parts.push(rest[0].to_string());
        }
        if parts.len() == 1 && parts[0].starts_with('(') {
            write!(f, "/{}", parts[0])
        } else {
            write!(f, "/({})", parts.join("*"))
        }
    }
}

impl fmt::Debug for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CRat({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn d() -> CRat {
        CRat::from_poly(CPoly::linear(22, 5))
    }

    #[test]
    fn additive_identity() {
        let x = CRat::one().checked_div(&d()).unwrap();
        assert_eq!(&x + &CRat::zero(), x);
    }

    #[test]
    fn cancellation_is_structural() {
        let x = CRat::from_int(32).checked_div(&d()).unwrap();
        assert_eq!(&d() * &x, CRat::from_int(32));
    }

    #[test]
    fn difference_of_squares() {
        let c2 = CRat::from_poly(CPoly::from_ints(&[0, 0, 1]));
        let prod = CRat::from_poly(&CPoly::linear(-1, 1) * &CPoly::linear(1, 1));
        assert_eq!(&c2 - &prod, CRat::one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(CRat::one().checked_div(&CRat::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn evaluation() {
        let x = CRat::from_int(32).checked_div(&d()).unwrap();
        assert_eq!(x.evaluate_at(&rat(2, 1)).unwrap(), rat(1, 1));
        let y = CRat::one().checked_div(&d()).unwrap();
        assert!(matches!(y.evaluate_at(&rat(-22, 5)), Err(ScalarError::PoleAtPoint(_))));
        let w14 = CRat::new(
            CPoly::from_ints(&[181248, 5590, -475]),
            &CPoly::constant(rat(60480, 1)) * &CPoly::linear(22, 5),
        )
        .unwrap();
        // 181248 / (60480 * 22), reduced
        assert_eq!(w14.evaluate_at(&rat(0, 1)).unwrap(), rat(181248, 1330560));
    }

    #[test]
    fn limits() {
        let factor = CPoly::linear(22, 5);
        let x = CRat::from_int(32).checked_div(&d()).unwrap();
        assert_eq!(x.limit_scaled(&factor, &rat(-22, 5)).unwrap(), rat(32, 1));
        assert_eq!(CRat::one().limit_scaled(&factor, &rat(-22, 5)).unwrap(), rat(0, 1));
        let double_pole = x.checked_div(&d()).unwrap();
        assert!(matches!(
            double_pole.limit_scaled(&factor, &rat(-22, 5)),
            Err(ScalarError::PoleAtPoint(_))
        ));
    }

    #[test]
    fn display_forms() {
        let x = CRat::from_int(32).checked_div(&d()).unwrap();
        assert_eq!(x.to_string(), "32/(5*c+22)");
        let w14 = CRat::new(
            CPoly::from_ints(&[181248, 5590, -475]),
            &CPoly::constant(rat(60480, 1)) * &CPoly::linear(22, 5),
        )
        .unwrap();
        assert_eq!(w14.to_string(), "-(475*c^2-5590*c-181248)/(60480*(5*c+22))");
        assert_eq!(CRat::c().scale(&rat(1, 2)).to_string(), "1/2*c");
    }
}

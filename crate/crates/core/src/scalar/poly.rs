//! Dense univariate polynomials in the central charge `c` over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::{self, Fp};
use super::BigRat;

/// A polynomial `Σ coeffs[k] c^k`. The leading coefficient is nonzero unless
/// the polynomial is zero, in which case `coeffs` is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CPoly {
    coeffs: Vec<BigRat>,
}

impl CPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|x| x.is_zero()) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    /// Builds a polynomial from integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&x| BigRat::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(x: BigRat) -> Self {
        Self::from_coeffs(vec![x])
    }

    /// The indeterminate `c`.
    pub fn c() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `a + b c`
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_ints(&[a, b])
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn scale(&self, k: &BigRat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        CPoly { coeffs: self.coeffs.iter().map(|x| x * k).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.leading();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * BigRat::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Polynomial composition `self(inner(c))`.
    pub fn compose(&self, inner: &CPoly) -> Self {
        let mut acc = Self::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(a.clone());
        }
        acc
    }

    /// Euclidean division over ℚ. Panics if `d` is zero.
    pub fn div_rem(&self, d: &CPoly) -> (CPoly, CPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lc_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] * &lc_inv;
            if q.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * di;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, d: &CPoly) -> CPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(a: &CPoly, b: &CPoly) -> CPoly {
        if a.is_zero() || b.is_zero() {
            return if a.is_zero() { b.monic() } else { a.monic() };
        }
        if a.is_constant() || b.is_constant() {
            return Self::one();
        }
        // Euclid over ℚ is fine for small degrees but its remainders blow up
        // quickly beyond that.
        if a.coeffs.len().min(b.coeffs.len()) > 4 {
            if let Some(g) = Self::modular_gcd(a, b) {
                return g;
            }
        }
        Self::euclid_gcd(a, b)
    }

    fn euclid_gcd(a: &CPoly, b: &CPoly) -> CPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    /// Reduction modulo `p`, or `None` if a denominator or the leading
    /// coefficient vanishes there.
    fn reduce_mod(&self, f: Fp) -> Option<Vec<u64>> {
        let v = self.coeffs.iter().map(|k| f.rat(k)).collect::<Option<Vec<_>>>()?;
        (v.last().is_some_and(|&l| l != 0)).then_some(v)
    }

    /// Gcd images modulo primes, combined and lifted until stable, then
    /// checked by exact division. For primes not dividing a leading
    /// coefficient the image has degree at least that of the true gcd, so a
    /// lifted common divisor of minimal image degree is the gcd.
    fn modular_gcd(a: &CPoly, b: &CPoly) -> Option<CPoly> {
        let mut deg = usize::MAX;
        let mut residues: Vec<BigInt> = Vec::new();
        let mut modulus = BigInt::one();
        let mut last: Option<CPoly> = None;
        for p in modular::primes().take(64) {
            let f = Fp(p);
            let (Some(ap), Some(bp)) = (a.reduce_mod(f), b.reduce_mod(f)) else { continue };
            let g = modular::pgcd(f, &ap, &bp);
            let d = g.len() - 1;
            if d == 0 {
                return Some(Self::one());
            }
            if d > deg {
                continue;
            }
            let pb = BigInt::from(p);
            if d < deg {
                deg = d;
                residues = g.iter().map(|&k| BigInt::from(k)).collect();
                modulus = pb;
                last = None;
            } else {
                let inv = BigInt::from(f.inv(f.int(&modulus)));
                for (acc, &r) in residues.iter_mut().zip(&g) {
                    let delta = (BigInt::from(r) - &*acc).mod_floor(&pb) * &inv % &pb;
                    *acc = &*acc + &modulus * delta;
                }
                modulus *= &pb;
            }
            let Some(ks) = residues.iter().map(|r| modular::rational_lift(r, &modulus)).collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let cand = CPoly::from_coeffs(ks);
            if last.as_ref() == Some(&cand) && a.div_rem(&cand).1.is_zero() && b.div_rem(&cand).1.is_zero() {
                return Some(cand);
            }
            last = Some(cand);
        }
        None
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> CPoly {
        if self.is_constant() {
            return if self.is_zero() { Self::zero() } else { Self::one() };
        }
        let g = CPoly::gcd(self, &self.derivative());
        self.div_exact(&g).monic()
    }

    /// Smallest positive integer `k` such that `k * self` has integer coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Integer coefficients of the primitive associate with positive leading
    /// coefficient. The zero polynomial maps to an empty vector.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = BigRat::from_integer(self.denominator_lcm());
        let ints: Vec<BigInt> = self.coeffs.iter().map(|x| (x * &l).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if ints.last().is_some_and(|x| x.is_negative()) {
            g = -g;
        }
        ints.into_iter().map(|x| x / &g).collect()
    }

    /// True when `other` is a nonzero scalar multiple of `self`.
    pub fn is_associate_of(&self, other: &CPoly) -> bool {
        !self.is_zero() && !other.is_zero() && self.monic() == other.monic()
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        CPoly::from_coeffs(out)
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        self + &(-rhs)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly { coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CPoly {
            type Output = CPoly;
            fn $m(self, rhs: CPoly) -> CPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Writes the polynomial in the expression grammar, highest degree first,
/// e.g. `-475*c^2+5590*c+181248`.
impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            if k == 0 || !unit {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
                if k > 0 {
                    write!(f, "*")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "c")?,
                _ => write!(f, "c^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPoly({self})")
    }
}

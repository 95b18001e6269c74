//! Word-sized prime fields: arithmetic, dense polynomials over 𝔽_p, and
//! lifting residues back to ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BigRat;

#[derive(Clone, Copy)]
pub(crate) struct Fp(pub u64);

impl Fp {
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 { s - self.0 } else { s }
    }
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.0 - b }
    }
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }
    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.0 - 2)
    }
    pub fn int(self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.0)).to_u64().expect("reduced")
    }
    pub fn rat(self, x: &BigRat) -> Option<u64> {
        let d = self.int(x.denom());
        (d != 0).then(|| self.mul(self.int(x.numer()), self.inv(d)))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let f = Fp(n);
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, largest first.
pub(crate) fn primes() -> impl Iterator<Item = u64> {
    (0..).map(|k| (1u64 << 62) - 1 - 2 * k).filter(|&n| is_prime(n))
}

// --- polynomials over 𝔽_p, low degree first ------------------------------

pub(crate) fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

pub(crate) fn eval(f: Fp, p: &[u64], x: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &k| f.add(f.mul(acc, x), k))
}

pub(crate) fn pmul(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

pub(crate) fn psub(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
    }
    trim(out)
}

pub(crate) fn pdivrem(f: Fp, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = f.inv(*b.last().expect("nonzero divisor"));
    let mut q = vec![0; r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let t = f.mul(r[k + b.len() - 1], inv);
        q[k] = t;
        if t != 0 {
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(t, y));
            }
        }
    }
    (trim(q), trim(r))
}

// --- rational number reconstruction --------------------------------------

/// `n/d ≡ a (mod m)` with `|n|, |d| ≤ √(m/2)`, if one exists.
pub(crate) fn rational_lift(a: &BigInt, m: &BigInt) -> Option<BigRat> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        let s = &s0 - &q * &s1;
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRat::new(r1, s1))
}

/// Monic gcd over 𝔽_p.
pub(crate) fn pgcd(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = pdivrem(f, &x, &y).1;
        x = y;
        y = r;
    }
    match x.last() {
        None => x,
        Some(&l) => {
            let inv = f.inv(l);
            x.into_iter().map(|k| f.mul(k, inv)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn primes_and_lifting() {
        let p: Vec<u64> = primes().take(2).collect();
        assert!(p[0] > p[1] && is_prime(p[0]) && !is_prime(p[0] - 2 * 3 * 5 * 7 + 1));
        let m = BigInt::from(p[0]) * BigInt::from(p[1]);
        let x = rat(-355, 113);
        let f = |q: u64| BigInt::from(Fp(q).rat(&x).unwrap());
        // Recombine by hand for two primes.
        let (a, b) = (f(p[0]), f(p[1]));
        let inv = BigInt::from(Fp(p[1]).inv(Fp(p[1]).int(&BigInt::from(p[0]))));
        let r = &a + BigInt::from(p[0]) * ((&b - &a).mod_floor(&BigInt::from(p[1])) * inv % BigInt::from(p[1]));
        assert_eq!(rational_lift(&r, &m), Some(x));
    }

    #[test]
    fn gcd_mod_p() {
        let f = Fp(primes().next().unwrap());
        // (c+1)(c+2) and (c+1)(c+3)
        assert_eq!(pgcd(f, &[2, 3, 1], &[3, 4, 1]), vec![1, 1]);
    }
}

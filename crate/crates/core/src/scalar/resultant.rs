//! Resultants by the subresultant polynomial remainder sequence.

use num_traits::{One, Zero};

use super::{BigRat, CPoly};

fn pow(x: &BigRat, e: usize) -> BigRat {
    let mut acc = BigRat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn pseudo_rem(a: &CPoly, b: &CPoly) -> CPoly {
    let da = a.degree().unwrap_or(0);
    let db = b.degree().unwrap_or(0);
    let k = pow(&b.leading(), da + 1 - db);
    a.scale(&k).div_rem(b).1
}

/// Resultant of `p` and `q` with respect to `c`.
///
/// Zero when either input is zero or when they share a root over the
/// algebraic closure. A nonzero constant paired with a polynomial of degree
/// `m` gives the constant to the power `m`.
pub fn resultant(p: &CPoly, q: &CPoly) -> BigRat {
    if p.is_zero() || q.is_zero() {
        return BigRat::zero();
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut sign = BigRat::one();
    let deg = |x: &CPoly| x.degree().unwrap_or(0);
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = -sign;
        }
    }
    if deg(&b) == 0 {
        return sign * pow(&b.leading(), deg(&a));
    }
    let mut g = BigRat::one();
    let mut h = BigRat::one();
    loop {
        let (da, db) = (deg(&a), deg(&b));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = pseudo_rem(&a, &b);
        if r.is_zero() {
            return BigRat::zero();
        }
        a = b;
        b = r.scale(&(&g * pow(&h, delta)).recip());
        g = a.leading();
        // h <- g^delta / h^(delta - 1)
        if delta > 0 {
            h = pow(&g, delta) / pow(&h, delta - 1);
        }
        if deg(&b) == 0 {
            let da = deg(&a);
            let hh = if da == 0 { BigRat::one() } else { pow(&b.leading(), da) / pow(&h, da - 1) };
            return sign * hh;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    /// Sylvester-matrix determinant by exact Gaussian elimination.
    fn sylvester(p: &CPoly, q: &CPoly) -> BigRat {
        let m = p.degree().unwrap();
        let n = q.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return BigRat::one();
        }
        let mut rows = vec![vec![BigRat::zero(); size]; size];
        for i in 0..n {
            for k in 0..=m {
                rows[i][i + k] = p.coeff(m - k);
            }
        }
        for i in 0..m {
            for k in 0..=n {
                rows[n + i][i + k] = q.coeff(n - k);
            }
        }
        let mut det = BigRat::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
                return BigRat::zero();
            };
            if piv != col {
                rows.swap(piv, col);
                det = -det;
            }
            let pv = rows[col][col].clone();
            det *= &pv;
            for r in col + 1..size {
                let f = &rows[r][col] / &pv;
                if f.is_zero() {
                    continue;
                }
                for k in col..size {
                    let t = &f * &rows[col][k];
                    rows[r][k] -= t;
                }
            }
        }
        det
    }

    #[test]
    fn small_cases() {
        let a = CPoly::linear(-1, 1);
        let b = CPoly::linear(1, 1);
        assert_eq!(resultant(&a, &a), rat(0, 1));
        // Res(c-1, c+1) = (c+1)|_{c=1}; swapping the arguments flips the sign.
        assert_eq!(resultant(&a, &b), rat(2, 1));
        assert_eq!(resultant(&b, &a), rat(-2, 1));
        assert_eq!(sylvester(&b, &a), rat(-2, 1));
    }

    #[test]
    fn agrees_with_sylvester() {
        let polys = [
            CPoly::from_ints(&[720, 384, 12]),
            CPoly::from_ints(&[-466200, 20580, 2100]),
            CPoly::from_ints(&[1, 0, 0, 1]),
            CPoly::from_ints(&[-3, 2, 5, 0, 7]),
            CPoly::from_ints(&[4, -4, 1]),
            CPoly::from_ints(&[-2, 1]),
            CPoly::from_ints(&[5]),
        ];
        for p in &polys {
            for q in &polys {
                assert_eq!(resultant(p, q), sylvester(p, q), "{p} vs {q}");
            }
        }
    }
}

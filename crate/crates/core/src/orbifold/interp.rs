//! Solving `A(c) x = b(c)` over ℚ(c) without symbolic elimination.
//!
//! Gaussian elimination over ℚ(c), or even over ℚ at a single point, blows
//! up long before weight 16. Instead the system is reduced modulo word-sized
//! primes, solved at many points `c = 1, 2, …`, each unknown is rebuilt as a
//! rational function over 𝔽_p, and the coefficients are lifted to ℚ by
//! Chinese remaindering and rational number reconstruction. Nothing here is
//! trusted: callers check the lifted answer exactly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{Element, Monomial};
use crate::scalar::modular::{eval, pdivrem, pmul, primes, psub, rational_lift, trim, Fp};
use crate::scalar::{CPoly, CRat};

/// Numerator and monic denominator of the rational function of total degree
/// below `xs.len()` through the samples, by the extended Euclidean algorithm.
fn rational_interpolate(f: Fp, xs: &[u64], ys: &[u64]) -> Option<(Vec<u64>, Vec<u64>)> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let den = f.sub(xs[i], xs[i - level]);
            dd[i] = f.mul(f.sub(dd[i], dd[i - 1]), f.inv(den));
        }
    }
    let mut interp = vec![dd[n - 1]];
    for i in (0..n - 1).rev() {
        interp = pmul(f, &interp, &[f.sub(0, xs[i]), 1]);
        if interp.is_empty() {
            interp.push(0);
        }
        interp[0] = f.add(interp[0], dd[i]);
    }
    let mut r1 = trim(interp);
    let mut r0 = xs.iter().fold(vec![1], |acc, &x| pmul(f, &acc, &[f.sub(0, x), 1]));
    let (mut t0, mut t1) = (Vec::new(), vec![1]);
    let bound = (n - 1) / 2;
    while r1.len() > bound + 1 {
        let (q, r) = pdivrem(f, &r0, &r1);
        let t = psub(f, &t0, &pmul(f, &q, &t1));
        (r0, r1) = (r1, r);
        (t0, t1) = (t1, t);
    }
    let lead = *t1.last()?;
    if xs.iter().any(|&x| eval(f, &t1, x) == 0) {
        return None;
    }
    let inv = f.inv(lead);
    let norm = |p: Vec<u64>| p.into_iter().map(|k| f.mul(k, inv)).collect::<Vec<_>>();
    Some((norm(r1), norm(t1)))
}

// --- the system -----------------------------------------------------------

/// A sparse entry: numerator and denominator coefficients over ℚ.
struct Entry {
    row: usize,
    value: CRat,
}

/// An entry reduced modulo a prime.
struct ModEntry {
    row: usize,
    num: Vec<u64>,
    den: Vec<u64>,
}

/// Columns and target, restricted to the monomials that occur.
pub(crate) struct System {
    nrows: usize,
    cols: Vec<Vec<Entry>>,
    target: Vec<Entry>,
}

struct ModSystem {
    f: Fp,
    nrows: usize,
    cols: Vec<Vec<ModEntry>>,
    target: Vec<ModEntry>,
}

impl System {
    pub fn new(cols: &[Element], target: &Element) -> Self {
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        let mut sparse = |e: &Element| -> Vec<Entry> {
            e.terms()
                .map(|(m, k)| {
                    let n = index.len();
                    let row = *index.entry(m.clone()).or_insert(n);
                    Entry { row, value: k.clone() }
                })
                .collect()
        };
        let cols: Vec<_> = cols.iter().map(&mut sparse).collect();
        let target = sparse(target);
        System { nrows: index.len(), cols, target }
    }

    fn reduce(&self, p: u64) -> Option<ModSystem> {
        let f = Fp(p);
        let poly = |q: &CPoly| q.coeffs().iter().map(|k| f.rat(k)).collect::<Option<Vec<_>>>();
        let entry = |e: &Entry| -> Option<ModEntry> {
            let den = trim(poly(e.value.den())?);
            // The denominator must keep its degree, or reduction loses information.
            (den.len() == e.value.den().coeffs().len()).then_some(())?;
            Some(ModEntry { row: e.row, num: poly(e.value.num())?, den })
        };
        let col = |c: &Vec<Entry>| c.iter().map(entry).collect::<Option<Vec<_>>>();
        Some(ModSystem {
            f,
            nrows: self.nrows,
            cols: self.cols.iter().map(col).collect::<Option<Vec<_>>>()?,
            target: col(&self.target)?,
        })
    }

    /// Unknowns `x` (indexed by column) with `Σ x_j col_j = target`, for the
    /// columns kept by greedy selection in offering order. Each candidate is
    /// offered to `accept`; the first accepted one is returned. `None` when
    /// the target looks outside the span, or nothing was accepted.
    pub fn solve(&self, mut accept: impl FnMut(&[(usize, CRat)]) -> bool) -> Option<Vec<(usize, CRat)>> {
        let mut primes = primes();
        let mut pivots: Option<(Vec<usize>, Vec<usize>)> = None;
        for _ in 0..4 {
            let p = primes.next()?;
            let Some(m) = self.reduce(p) else { continue };
            match m.pivots(0x9e37_79b9 % p) {
                Some((cols, rows, true)) => {
                    pivots = Some((cols, rows));
                    break;
                }
                Some((_, _, false)) => return None,
                None => continue,
            }
        }
        let (cols, rows) = pivots?;

        // Degree budget fixed on the first prime, then shared.
        let mut points = 8;
        // Per unknown: numerator and denominator coefficient residues.
        let mut shape: Option<Vec<(usize, usize)>> = None;
        let mut residues: Vec<Vec<BigInt>> = Vec::new();
        let mut modulus = BigInt::one();
        let mut last: Option<Vec<CRat>> = None;
        for p in primes.take(200) {
            let Some(m) = self.reduce(p) else { continue };
            let sol = loop {
                match m.reconstruct(&cols, &rows, points) {
                    Some(s) => break Some(s),
                    None if shape.is_none() && points < 1024 => points *= 2,
                    None => break None,
                }
            };
            let Some(sol) = sol else { continue };
            let this: Vec<(usize, usize)> = sol.iter().map(|(n, d)| (n.len(), d.len())).collect();
            match &shape {
                Some(s) if *s == this => {}
                Some(s) if this.iter().zip(s).all(|(a, b)| a <= b) => continue,
                _ => {
                    shape = Some(this);
                    residues = vec![Vec::new(); sol.len()];
                    modulus = BigInt::one();
                    last = None;
                }
            }
            // Chinese remaindering, coefficient by coefficient.
            let pb = BigInt::from(p);
            let inv = BigInt::from(Fp(p).inv(Fp(p).int(&modulus)));
            for (acc, (n, d)) in residues.iter_mut().zip(&sol) {
                let flat: Vec<u64> = n.iter().chain(d.iter()).copied().collect();
                acc.resize(flat.len(), BigInt::zero());
                for (a, &r) in acc.iter_mut().zip(&flat) {
                    let delta = (BigInt::from(r) - &*a).mod_floor(&pb) * &inv % &pb;
                    *a = &*a + &modulus * delta;
                }
            }
            modulus *= &pb;
            let Some(lifted) = self.lift(&residues, &modulus, shape.as_ref().expect("set")) else { continue };
            if last.as_ref() == Some(&lifted) {
                let x: Vec<(usize, CRat)> =
                    cols.iter().copied().zip(lifted.iter().cloned()).filter(|(_, k)| !k.is_zero()).collect();
                if accept(&x) {
                    return Some(x);
                }
            }
            last = Some(lifted);
        }
        None
    }

    fn lift(&self, residues: &[Vec<BigInt>], modulus: &BigInt, shape: &[(usize, usize)]) -> Option<Vec<CRat>> {
        residues
            .iter()
            .zip(shape)
            .map(|(acc, &(nl, _))| {
                let ks = acc.iter().map(|a| rational_lift(a, modulus)).collect::<Option<Vec<_>>>()?;
                let (n, d) = ks.split_at(nl);
                CRat::new(CPoly::from_coeffs(n.to_vec()), CPoly::from_coeffs(d.to_vec())).ok()
            })
            .collect()
    }
}

impl ModSystem {
    fn dense(&self, v: &[ModEntry], x: u64) -> Option<Vec<u64>> {
        let f = self.f;
        let mut out = vec![0; self.nrows];
        for e in v {
            let d = eval(f, &e.den, x);
            if d == 0 {
                return None;
            }
            out[e.row] = f.mul(eval(f, &e.num, x), f.inv(d));
        }
        Some(out)
    }

    /// Greedy column selection at `x`: kept columns, their pivot rows, and
    /// whether the target is in their span.
    fn pivots(&self, x: u64) -> Option<(Vec<usize>, Vec<usize>, bool)> {
        let f = self.f;
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        let reduce = |basis: &[(usize, Vec<u64>)], v: &mut [u64]| {
            for (p, b) in basis {
                let a = v[*p];
                if a != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        if y != 0 {
                            *x = f.sub(*x, f.mul(a, y));
                        }
                    }
                }
            }
        };
        let mut cols = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            let mut v = self.dense(col, x)?;
            reduce(&basis, &mut v);
            if let Some(p) = v.iter().rposition(|&k| k != 0) {
                let inv = f.inv(v[p]);
                for k in v.iter_mut() {
                    *k = f.mul(*k, inv);
                }
                basis.push((p, v));
                cols.push(j);
            }
        }
        let mut t = self.dense(&self.target, x)?;
        reduce(&basis, &mut t);
        let rows = basis.iter().map(|(p, _)| *p).collect();
        Some((cols, rows, t.iter().all(|&k| k == 0)))
    }

    /// Solves the square block at `x`.
    fn solve_block(&self, cols: &[usize], rows: &[usize], x: u64) -> Option<Vec<u64>> {
        let f = self.f;
        let r = cols.len();
        let mut pos = vec![usize::MAX; self.nrows];
        for (k, &i) in rows.iter().enumerate() {
            pos[i] = k;
        }
        let mut m = vec![vec![0u64; r + 1]; r];
        let mut fill = |v: &[ModEntry], k: usize| -> Option<()> {
            for e in v {
                if pos[e.row] != usize::MAX {
                    let d = eval(f, &e.den, x);
                    if d == 0 {
                        return None;
                    }
                    m[pos[e.row]][k] = f.mul(eval(f, &e.num, x), f.inv(d));
                }
            }
            Some(())
        };
        for (k, &j) in cols.iter().enumerate() {
            fill(&self.cols[j], k)?;
        }
        fill(&self.target, r)?;
        for col in 0..r {
            let p = (col..r).find(|&i| m[i][col] != 0)?;
            m.swap(col, p);
            let inv = f.inv(m[col][col]);
            for k in m[col].iter_mut().skip(col) {
                *k = f.mul(*k, inv);
            }
            let pivot_row = m[col].clone();
            for (i, row) in m.iter_mut().enumerate() {
                let a = row[col];
                if i != col && a != 0 {
                    for (k, &y) in row.iter_mut().zip(&pivot_row).skip(col) {
                        if y != 0 {
                            *k = f.sub(*k, f.mul(a, y));
                        }
                    }
                }
            }
        }
        Some(m.into_iter().map(|row| row[r]).collect())
    }

    /// Each unknown as (numerator, monic denominator) over 𝔽_p from `points`
    /// samples, checked against three more.
    fn reconstruct(&self, cols: &[usize], rows: &[usize], points: usize) -> Option<Vec<(Vec<u64>, Vec<u64>)>> {
        let held = 3;
        let mut xs = Vec::new();
        let mut samples = Vec::new();
        let mut x = 0u64;
        while xs.len() < points + held {
            x += 1;
            if x > 4 * (points + held) as u64 + 64 {
                return None;
            }
            if let Some(s) = self.solve_block(cols, rows, x) {
                xs.push(x);
                samples.push(s);
            }
        }
        let f = self.f;
        (0..cols.len())
            .map(|k| {
                let ys: Vec<u64> = samples.iter().map(|s| s[k]).collect();
                let (n, d) = rational_interpolate(f, &xs[..points], &ys[..points])?;
                for (&x, &y) in xs[points..].iter().zip(&ys[points..]) {
                    if f.mul(eval(f, &n, x), f.inv(eval(f, &d, x))) != y {
                        return None;
                    }
                }
                Some((n, d))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_over_a_prime_field() {
        let f = Fp(primes().next().unwrap());
        // (3 - c + 2c^3) / (c + 4)^2
        let num = [3, f.sub(0, 1), 0, 2];
        let den = [16, 8, 1];
        let xs: Vec<u64> = (1..=7).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| f.mul(eval(f, &num, x), f.inv(eval(f, &den, x)))).collect();
        let (n, d) = rational_interpolate(f, &xs, &ys).unwrap();
        assert_eq!((n, d), (num.to_vec(), den.to_vec()));
    }

    #[test]
    fn solves_a_small_system() {
        use crate::algebra::Generator;
        let m = |d| Monomial::single(Generator::L, d);
        let el = |terms: &[(u32, CRat)]| {
            terms.iter().fold(Element::zero(), |acc, (d, k)| &acc + &Element::term(m(*d), k.clone()).unwrap())
        };
        let c = CRat::c();
        let one = CRat::one();
        let cols = [el(&[(0, c.clone()), (1, one.clone())]), el(&[(1, &c + &one)])];
        let target = el(&[(0, one.clone())]);
        let x = System::new(&cols, &target).solve(|_| true).unwrap();
        // 1 = (1/c)·col0 − 1/(c(c+1))·col1
        let ci = c.recip().unwrap();
        assert_eq!(x[0], (0, ci.clone()));
        assert_eq!(x[1], (1, -(&ci * &(&c + &one).recip().unwrap())));
    }
}

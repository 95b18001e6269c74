//! Incremental row echelon form over ℚ(c) with tracked column combinations.

use std::collections::BTreeMap;

use crate::algebra::{Element, Monomial};
use crate::scalar::CRat;

type Sparse<K> = BTreeMap<K, CRat>;

fn axpy<K: Ord + Clone>(v: &mut Sparse<K>, a: &CRat, x: &Sparse<K>) {
    for (k, xk) in x {
        let t = a * xk;
        match v.get_mut(k) {
            Some(y) => {
                *y = &*y + &t;
                if y.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                if !t.is_zero() {
                    v.insert(k.clone(), t);
                }
            }
        }
    }
}

struct Row {
    vec: Sparse<Monomial>,
    combo: Sparse<usize>,
}

/// Rows are keyed by their largest monomial, which carries coefficient 1.
/// Each row remembers which combination of inserted columns produced it.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: BTreeMap<Monomial, Row>,
}

impl Echelon {
    /// Reduces `v` from the top while its leading monomial is a pivot.
    /// Maintains `v = v0 + Σ combo·columns`.
    fn reduce(&self, v: &mut Sparse<Monomial>, combo: &mut Sparse<usize>) {
        while let Some((m, a)) = v.iter().next_back() {
            let Some(row) = self.rows.get(m) else { return };
            let a = -a.clone();
            axpy(v, &a, &row.vec);
            axpy(combo, &a, &row.combo);
        }
    }

    /// Adds column `idx`; returns `false` when it is already in the span.
    pub fn insert(&mut self, idx: usize, col: &Element) -> bool {
        let mut v: Sparse<Monomial> = col.terms().map(|(m, k)| (m.clone(), k.clone())).collect();
        let mut combo = Sparse::new();
        combo.insert(idx, CRat::one());
        self.reduce(&mut v, &mut combo);
        let Some((m, lead)) = v.iter().next_back().map(|(m, k)| (m.clone(), k.clone())) else {
            return false;
        };
        let inv = lead.recip().expect("nonzero pivot");
        for x in v.values_mut() {
            *x = &*x * &inv;
        }
        for x in combo.values_mut() {
            *x = &*x * &inv;
        }
        self.rows.insert(m, Row { vec: v, combo });
        true
    }

    /// Coefficients `x` with `target = Σ x[idx]·column[idx]`, if any.
    pub fn solve(&self, target: &Element) -> Option<BTreeMap<usize, CRat>> {
        let mut v: Sparse<Monomial> = target.terms().map(|(m, k)| (m.clone(), k.clone())).collect();
        let mut combo = Sparse::new();
        self.reduce(&mut v, &mut combo);
        if !v.is_empty() {
            return None;
        }
        Some(combo.into_iter().map(|(k, x)| (k, -x)).collect())
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;

    fn m(d: u32) -> Monomial {
        Monomial::single(Generator::L, d)
    }

    fn e(terms: &[(u32, i64)]) -> Element {
        let mut out = Element::zero();
        for &(d, k) in terms {
            out = &out + &Element::term(m(d), CRat::from_int(k)).unwrap();
        }
        out
    }

    #[test]
    fn solves_and_detects_dependence() {
        let mut ech = Echelon::default();
        assert!(ech.insert(0, &e(&[(2, 1), (1, 1)])));
        assert!(ech.insert(1, &e(&[(1, 2), (0, 1)])));
        assert!(!ech.insert(2, &e(&[(2, 2), (1, 4), (0, 1)])));
        assert_eq!(ech.rank(), 2);
        let x = ech.solve(&e(&[(2, 3), (1, 5), (0, 1)])).unwrap();
        assert_eq!(x.get(&0), Some(&CRat::from_int(3)));
        assert_eq!(x.get(&1), Some(&CRat::from_int(1)));
        assert!(ech.solve(&e(&[(3, 1)])).is_none());
    }
}

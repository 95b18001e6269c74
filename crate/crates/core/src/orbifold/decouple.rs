//! Decoupling relations: expressing `U_{n,0}` as a normally ordered
//! polynomial in lower strong generators by exact linear algebra over ℚ(c).

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;

use super::interp::System;
use super::linalg::Echelon;
use super::{u, OrbifoldError};
use crate::algebra::{Element, ExprTree, Generator};
use crate::ope::Engine;
use crate::scalar::{CPoly, CRat};

/// Largest weight for which words are enumerated.
pub const DEFAULT_MAX_WORD_WEIGHT: u32 = 26;
/// Longest word enumerated. Words are built from `L` (weight 2) and the
/// `U_{k,0}` (weight ≥ 6), so this admits every word up to the weight bound.
pub const DEFAULT_MAX_WORD_LEN: usize = (DEFAULT_MAX_WORD_WEIGHT / 2) as usize;

/// A strong generator of the orbifold: `L` or `U_{k,0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrongGen {
    L,
    U(u32),
}

impl StrongGen {
    pub fn weight(self) -> u32 {
        match self {
            StrongGen::L => 2,
            StrongGen::U(k) => k + 6,
        }
    }

    /// `L, U_{0,0}, U_{2,0}, …, U_{top,0}`.
    pub fn up_to(top: u32) -> Vec<StrongGen> {
        std::iter::once(StrongGen::L).chain((0..=top).step_by(2).map(StrongGen::U)).collect()
    }

    fn tree(self) -> ExprTree {
        match self {
            StrongGen::L => ExprTree::Atom(Generator::L),
            StrongGen::U(k) => ExprTree::u(k, 0),
        }
    }
}

impl fmt::Display for StrongGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrongGen::L => write!(f, "L"),
            StrongGen::U(k) => write!(f, "U({k},0)"),
        }
    }
}

/// A Wick product `:(∂^d1 g1)(:(∂^d2 g2) ⋯ :):` of strong generators.
/// Factors are kept sorted: `L` before `U`, lower `U` index first, higher
/// derivative first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorWord(Vec<(StrongGen, u32)>);

fn item_order(x: &(StrongGen, u32)) -> (StrongGen, Reverse<u32>) {
    (x.0, Reverse(x.1))
}

impl GeneratorWord {
    pub fn new(mut items: Vec<(StrongGen, u32)>) -> Self {
        items.sort_by_key(item_order);
        GeneratorWord(items)
    }

    pub fn items(&self) -> &[(StrongGen, u32)] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(g, d)| g.weight() + d).sum()
    }

    /// Largest `k` with `U_{k,0}` in the word.
    pub fn max_u(&self) -> Option<u32> {
        self.0.iter().filter_map(|(g, _)| if let StrongGen::U(k) = g { Some(*k) } else { None }).max()
    }

    pub fn to_tree(&self) -> ExprTree {
        ExprTree::nop_chain(self.0.iter().map(|&(g, d)| ExprTree::derive(d, g.tree())).collect())
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let item = |f: &mut fmt::Formatter<'_>, (g, d): &(StrongGen, u32)| match d {
            0 => write!(f, "{g}"),
            _ => write!(f, "d({d},{g})"),
        };
        match self.0.as_slice() {
            [] => write!(f, "vac"),
            [x] => item(f, x),
            xs => {
                write!(f, "no(")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    item(f, x)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `U_{n,0} = Σ coefficient · word`, valid over ℚ(c).
#[derive(Debug, Clone)]
pub struct DecouplingResult {
    pub n: u32,
    pub combination: Vec<(GeneratorWord, CRat)>,
    /// Monic square-free polynomial whose roots are the central charges at
    /// which some coefficient of this particular combination has a pole,
    /// other than `c = -22/5`.
    pub obstruction: CPoly,
    /// Coefficient of `U_{n,0}` on the relation's side: 1 for a direct solve.
    pub leading_invariant: CRat,
}

impl DecouplingResult {
    /// The combination as an expression tree.
    pub fn to_tree(&self) -> ExprTree {
        ExprTree::Sum(self.combination.iter().map(|(w, k)| ExprTree::scale(k.clone(), w.to_tree())).collect())
    }
}

/// All words of exactly `weight` in `gens`, at most `max_len` long.
pub fn enumerate_words(gens: &[StrongGen], weight: u32, max_len: usize) -> Vec<GeneratorWord> {
    let mut items: Vec<(StrongGen, u32)> = Vec::new();
    for &g in gens {
        for d in 0..=weight.saturating_sub(g.weight()) {
            if g.weight() + d <= weight {
                items.push((g, d));
            }
        }
    }
    items.sort_by_key(item_order);
    items.dedup();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        items: &[(StrongGen, u32)],
        start: usize,
        left: u32,
        max_len: usize,
        cur: &mut Vec<(StrongGen, u32)>,
        out: &mut Vec<GeneratorWord>,
    ) {
        if left == 0 {
            out.push(GeneratorWord(cur.clone()));
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for (k, &(g, d)) in items.iter().enumerate().skip(start) {
            let w = g.weight() + d;
            if w <= left {
                cur.push((g, d));
                rec(items, k, left - w, max_len, cur, out);
                cur.pop();
            }
        }
    }
    rec(&items, 0, weight, max_len, &mut cur, &mut out);
    out
}

/// Normal forms of words, sharing work between common suffixes.
pub(crate) struct WordReducer {
    suffixes: HashMap<Vec<(StrongGen, u32)>, Element>,
}

impl WordReducer {
    pub fn new() -> Self {
        WordReducer { suffixes: HashMap::new() }
    }

    fn item(&mut self, engine: &mut Engine, g: StrongGen, d: u32) -> Result<Element, OrbifoldError> {
        let key = vec![(g, d)];
        if let Some(e) = self.suffixes.get(&key) {
            return Ok(e.clone());
        }
        let base = match g {
            StrongGen::L => Element::generator(Generator::L),
            StrongGen::U(k) => u(engine, k, 0)?,
        };
        let e = engine.derive_n(&base, d)?;
        self.suffixes.insert(key, e.clone());
        Ok(e)
    }

    pub fn reduce(&mut self, engine: &mut Engine, items: &[(StrongGen, u32)]) -> Result<Element, OrbifoldError> {
        if items.is_empty() {
            return Ok(Element::scalar(CRat::one()));
        }
        if let Some(e) = self.suffixes.get(items) {
            return Ok(e.clone());
        }
        let (g, d) = items[0];
        let head = self.item(engine, g, d)?;
        if items.len() == 1 {
            return Ok(head);
        }
        let tail = self.reduce(engine, &items[1..])?;
        let e = engine.nop(&head, &tail)?;
        self.suffixes.insert(items.to_vec(), e.clone());
        Ok(e)
    }
}

fn lcm(a: &CPoly, b: &CPoly) -> CPoly {
    let g = CPoly::gcd(a, b);
    (a * b).div_exact(&g).monic()
}

/// Monic radical of the lcm of the denominators, without the factor `c + 22/5`.
pub(crate) fn obstruction_of<'a>(coeffs: impl Iterator<Item = &'a CRat>) -> CPoly {
    let mut acc = CPoly::one();
    for k in coeffs {
        acc = lcm(&acc, k.den());
    }
    let pole = CPoly::linear(22, 5).monic();
    let mut r = acc.radical();
    loop {
        let (q, rem) = r.div_rem(&pole);
        if !rem.is_zero() {
            break;
        }
        r = q;
    }
    r.monic()
}

fn exact_solve(cols: &[Element], target: &Element) -> Option<Vec<(usize, CRat)>> {
    let mut ech = Echelon::default();
    for (idx, e) in cols.iter().enumerate() {
        ech.insert(idx, e);
    }
    ech.solve(target).map(|x| x.into_iter().collect())
}

/// Modular sampling and reconstruction; the result is checked exactly here.
fn solve_sampled(cols: &[Element], target: &Element) -> Option<Vec<(usize, CRat)>> {
    System::new(cols, target).solve(|x| {
        let sum = x.iter().fold(Element::zero(), |acc, (j, k)| &acc + &cols[*j].scale(k));
        &sum == target
    })
}

/// Solves `U_{n,0} = Σ κ_w w` over the words `w` of weight `n + 6` in `gens`
/// (`U_{n,0}` itself excluded). Words containing higher `U` indices are
/// offered to the elimination first, so they are preferred as basis elements.
pub fn decouple(engine: &mut Engine, n: u32, gens: &[StrongGen]) -> Result<DecouplingResult, OrbifoldError> {
    if n % 2 == 1 {
        return Err(OrbifoldError::OddIndex(n));
    }
    let weight = n + 6;
    if weight > DEFAULT_MAX_WORD_WEIGHT {
        return Err(OrbifoldError::CutoffExceeded { weight, limit: DEFAULT_MAX_WORD_WEIGHT });
    }
    let gens: Vec<StrongGen> = gens.iter().copied().filter(|g| *g != StrongGen::U(n)).collect();
    let mut words = enumerate_words(&gens, weight, DEFAULT_MAX_WORD_LEN);
    words.sort_by(|a, b| b.max_u().cmp(&a.max_u()).then_with(|| a.cmp(b)));
    let mut reducer = WordReducer::new();
    let cols = words.iter().map(|w| reducer.reduce(engine, w.items())).collect::<Result<Vec<_>, _>>()?;
    let target = u(engine, n, 0)?;
    let x = match solve_sampled(&cols, &target) {
        Some(x) => x,
        None => exact_solve(&cols, &target).ok_or(OrbifoldError::NoRelation { n })?,
    };
    let mut combination: Vec<(GeneratorWord, CRat)> = x.into_iter().map(|(idx, k)| (words[idx].clone(), k)).collect();
    combination.sort_by(|a, b| a.0.cmp(&b.0));
    let obstruction = obstruction_of(combination.iter().map(|(_, k)| k));
    Ok(DecouplingResult { n, combination, obstruction, leading_invariant: CRat::one() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_enumeration() {
        let words = enumerate_words(&[StrongGen::L], 6, 6);
        let mut shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        shown.sort();
        assert_eq!(shown, ["d(4,L)", "no(L,L,L)", "no(d(1,L),d(1,L))", "no(d(2,L),L)"]);
        let words = enumerate_words(&StrongGen::up_to(0), 8, 6);
        assert!(words.iter().all(|w| w.weight() == 8));
        assert!(words.contains(&GeneratorWord::new(vec![(StrongGen::U(0), 0), (StrongGen::L, 0)])));
        assert!(words.contains(&GeneratorWord::new(vec![(StrongGen::U(0), 2)])));
    }

    #[test]
    fn obstruction_strips_the_normalization_pole() {
        let d = CRat::from_poly(CPoly::linear(22, 5));
        let q = CRat::from_poly(CPoly::linear(-1, 1));
        let k = CRat::one().checked_div(&(&d.pow(2).unwrap() * &q)).unwrap();
        assert_eq!(obstruction_of([k, d.clone()].iter()), CPoly::linear(-1, 1));
        assert_eq!(obstruction_of([d].iter()), CPoly::one());
    }
}


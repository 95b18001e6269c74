//! Elements of the W3 vertex algebra: generators, derivative-decorated
//! factors, PBW monomials and sparse linear combinations over ℚ(c).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::CRat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("monomial {0} is not in PBW order")]
    NotNormal(Monomial),
}

/// The two strong generators: the Virasoro field `L` and the weight-3
/// primary `W`. `L < W` in the PBW order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    L,
    W,
}

impl Generator {
    pub fn weight(self) -> u32 {
        match self {
            Generator::L => 2,
            Generator::W => 3,
        }
    }

    /// Sign under the involution fixing `L` and negating `W`.
    pub fn parity(self) -> i32 {
        match self {
            Generator::L => 1,
            Generator::W => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::L => "L",
            Generator::W => "W",
        }
    }
}

/// `∂^deriv gen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub gen: Generator,
    pub deriv: u32,
}

impl Factor {
    pub const fn new(gen: Generator, deriv: u32) -> Self {
        Factor { gen, deriv }
    }

    pub fn weight(self) -> u32 {
        self.gen.weight() + self.deriv
    }
}

/// `L` factors before `W` factors, higher derivatives first.
impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gen.cmp(&other.gen).then(other.deriv.cmp(&self.deriv))
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.deriv {
            0 => write!(f, "{}", self.gen.name()),
            k => write!(f, "d({k},{})", self.gen.name()),
        }
    }
}

/// The iterated Wick product `:f1 (:f2 ( ... fk):):` of its factors; the
/// empty word is the vacuum. PBW-normal words have their factors sorted
/// ascending by [`Factor`]'s order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<Factor>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(factors: Vec<Factor>) -> Self {
        Monomial(factors)
    }

    /// The PBW word with the given factors in any order.
    pub fn sorted(mut factors: Vec<Factor>) -> Self {
        factors.sort();
        Monomial(factors)
    }

    pub fn single(gen: Generator, deriv: u32) -> Self {
        Monomial(vec![Factor::new(gen, deriv)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn into_factors(self) -> Vec<Factor> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|f| f.weight()).sum()
    }

    pub fn w_count(&self) -> usize {
        self.0.iter().filter(|f| f.gen == Generator::W).count()
    }

    pub fn parity(&self) -> i32 {
        if self.w_count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_pbw(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// `Π deriv!`, the ratio between this Wick monomial and the
    /// corresponding product of modes applied to the vacuum.
    pub fn factorial_weight(&self) -> num_bigint::BigInt {
        self.0.iter().map(|f| crate::scalar::factorial(f.deriv)).product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.w_count().cmp(&other.w_count()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => write!(f, "vac"),
            [x] => write!(f, "{x}"),
            xs => {
                write!(f, "no(")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A finite linear combination of PBW monomials with coefficients in ℚ(c).
/// Zero coefficients are never stored; iteration follows the monomial order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, CRat>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    /// `k · vac`
    pub fn scalar(k: CRat) -> Self {
        let mut e = Element::zero();
        e.add_term(Monomial::vacuum(), k);
        e
    }

    pub fn generator(g: Generator) -> Self {
        Self::derivative_of(g, 0)
    }

    /// `∂^k g`
    pub fn derivative_of(g: Generator, k: u32) -> Self {
        let mut e = Element::zero();
        e.add_term(Monomial::single(g, k), CRat::one());
        e
    }

    /// A single term; the monomial must be PBW-normal.
    pub fn term(m: Monomial, k: CRat) -> Result<Self, AlgebraError> {
        if !m.is_pbw() {
            return Err(AlgebraError::NotNormal(m));
        }
        let mut e = Element::zero();
        e.add_term(m, k);
        Ok(e)
    }

    pub(crate) fn from_map(terms: BTreeMap<Monomial, CRat>) -> Self {
        debug_assert!(terms.iter().all(|(m, k)| m.is_pbw() && !k.is_zero()));
        Element { terms }
    }

    /// Adds `k · m` in place. `m` must be PBW-normal.
    pub(crate) fn add_term(&mut self, m: Monomial, k: CRat) {
        debug_assert!(m.is_pbw(), "non-PBW monomial {m}");
        if k.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(k);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &k;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> CRat {
        self.terms.get(m).cloned().unwrap_or_else(CRat::zero)
    }

    /// `self + s · other`
    pub fn add_scaled(&self, other: &Element, s: &CRat) -> Element {
        let mut out = self.clone();
        if s.is_zero() {
            return out;
        }
        for (m, k) in other.terms() {
            out.add_term(m.clone(), k * s);
        }
        out
    }

    pub fn scale(&self, s: &CRat) -> Element {
        if s.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * s)).collect() }
    }

    /// The common weight of all terms; `None` for zero or inhomogeneous elements.
    pub fn weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    /// Largest number of `W` factors in any monomial (0 for zero).
    pub fn filtration_degree(&self) -> usize {
        self.terms.keys().map(Monomial::w_count).max().unwrap_or(0)
    }

    /// Only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Element {
        Element {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, k)| (m.clone(), k.clone())).collect(),
        }
    }
}

impl std::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.add_scaled(rhs, &CRat::one())
    }
}

impl std::ops::Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.add_scaled(rhs, &CRat::from_int(-1))
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&CRat::from_int(-1))
    }
}

/// Prints in the expression grammar, one term per summand.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, x)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if x.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({x})*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{self}]")
    }
}

/// Unreduced input expressions. Any nesting and order of products is allowed;
/// reduction to an [`Element`] happens in the engine.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprTree {
    Vacuum,
    Atom(Generator),
    Derive(u32, Box<ExprTree>),
    /// Wick product `:a b:`.
    Nop(Box<ExprTree>, Box<ExprTree>),
    /// `a ∘_n b`
    Circ(u32, Box<ExprTree>, Box<ExprTree>),
    Scale(CRat, Box<ExprTree>),
    Sum(Vec<ExprTree>),
}

impl ExprTree {
    pub fn atom(g: Generator) -> Self {
        ExprTree::Atom(g)
    }

    pub fn derive(k: u32, e: ExprTree) -> Self {
        if k == 0 {
            e
        } else {
            ExprTree::Derive(k, Box::new(e))
        }
    }

    pub fn nop(a: ExprTree, b: ExprTree) -> Self {
        ExprTree::Nop(Box::new(a), Box::new(b))
    }

    /// `:a1 a2 ... ak:` nested as `:a1 (:a2 ... ak:):`.
    pub fn nop_chain(mut items: Vec<ExprTree>) -> Self {
        let mut acc = items.pop().expect("empty Wick product");
        while let Some(x) = items.pop() {
            acc = ExprTree::nop(x, acc);
        }
        acc
    }

    pub fn circ(n: u32, a: ExprTree, b: ExprTree) -> Self {
        ExprTree::Circ(n, Box::new(a), Box::new(b))
    }

    pub fn scale(k: CRat, e: ExprTree) -> Self {
        ExprTree::Scale(k, Box::new(e))
    }

    /// `U_{i,j} = :(∂^i W)(∂^j W):`
    pub fn u(i: u32, j: u32) -> Self {
        ExprTree::nop(ExprTree::derive(i, ExprTree::Atom(Generator::W)), ExprTree::derive(j, ExprTree::Atom(Generator::W)))
    }

    pub fn from_monomial(m: &Monomial) -> Self {
        if m.is_vacuum() {
            return ExprTree::Vacuum;
        }
        ExprTree::nop_chain(m.factors().iter().map(|f| ExprTree::derive(f.deriv, ExprTree::Atom(f.gen))).collect())
    }

    pub fn from_element(e: &Element) -> Self {
        ExprTree::Sum(e.terms().map(|(m, k)| ExprTree::scale(k.clone(), ExprTree::from_monomial(m))).collect())
    }

    /// The image under the involution `W ↦ -W`.
    pub fn theta(&self) -> Self {
        match self {
            ExprTree::Vacuum => ExprTree::Vacuum,
            ExprTree::Atom(Generator::L) => ExprTree::Atom(Generator::L),
            ExprTree::Atom(Generator::W) => ExprTree::scale(CRat::from_int(-1), ExprTree::Atom(Generator::W)),
            ExprTree::Derive(k, e) => ExprTree::Derive(*k, Box::new(e.theta())),
            ExprTree::Nop(a, b) => ExprTree::nop(a.theta(), b.theta()),
            ExprTree::Circ(n, a, b) => ExprTree::circ(*n, a.theta(), b.theta()),
            ExprTree::Scale(k, e) => ExprTree::scale(k.clone(), e.theta()),
            ExprTree::Sum(xs) => ExprTree::Sum(xs.iter().map(ExprTree::theta).collect()),
        }
    }
}

//! The reduction engine.
//!
//! States are handled in the mode basis: a PBW word `[(X1,d1),…,(Xk,dk)]`
//! stands for `X1_(-d1-1) ⋯ Xk_(-dk-1)|0>`, which is the Wick monomial
//! `:(∂^d1 X1)⋯(∂^dk Xk):` divided by `Π di!`. Every product is reduced with
//! two identities valid in any vertex algebra:
//!
//! * the commutator formula
//!   `[X_(m), Y_(q)] = Σ_j C(m,j) (X_(j)Y)_(m+q-j)`, used to move a generator
//!   mode past the leading mode of a word, and
//! * the iterate formula
//!   `(Z_(n)t)_(p) = Σ_j (-1)^j C(n,j) [Z_(n-j) t_(p+j) - (-1)^n t_(n+p-j) Z_(j)]`,
//!   which turns a mode of a composite state into modes of its parts.
//!
//! All structure constants live in ℚ[d, d⁻¹] with `d = 22 + 5c`, so the memo
//! tables hold [`Laurent`] coefficients and never need a polynomial gcd.

use std::sync::Arc;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use super::table::{OpeTable, Preset};
use crate::algebra::{Element, ExprTree, Factor, Generator, Monomial};
use crate::scalar::{binomial, factorial, BigRat, CRat, Laurent};

/// Default bound on the conformal weight of any state the engine builds.
pub const DEFAULT_MAX_WEIGHT: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("weight {weight} exceeds the reduction cutoff {limit} (raise VOA_MAX_WEIGHT)")]
    CutoffExceeded { weight: u32, limit: u32 },
    #[error("{identity} fails; first residue term: {residue}")]
    AxiomViolation { identity: String, residue: String },
}

/// Reads `VOA_MAX_WEIGHT`, falling back to [`DEFAULT_MAX_WEIGHT`].
pub fn max_weight_from_env() -> u32 {
    std::env::var("VOA_MAX_WEIGHT").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_WEIGHT)
}

pub(crate) type Word = Vec<Factor>;
type Terms = Arc<Vec<(Word, Laurent)>>;

fn word_weight(w: &[Factor]) -> i64 {
    w.iter().map(|f| f.weight() as i64).sum()
}

fn is_sorted(w: &[Factor]) -> bool {
    w.windows(2).all(|p| p[0] <= p[1])
}

fn word_factorial(w: &[Factor]) -> BigRat {
    BigRat::from_integer(w.iter().map(|f| factorial(f.deriv)).product())
}

/// Mode-basis vector under construction.
#[derive(Default, Clone)]
pub(crate) struct Vector(FxHashMap<Word, Laurent>);

impl Vector {
    fn single(w: Word, k: Laurent) -> Self {
        let mut v = Vector::default();
        v.add(&w, &k);
        v
    }

    fn add(&mut self, w: &Word, k: &Laurent) {
        if k.is_zero() {
            return;
        }
        if let Some(x) = self.0.get_mut(w) {
            *x += k;
            if x.is_zero() {
                self.0.remove(w);
            }
        } else {
            self.0.insert(w.clone(), k.clone());
        }
    }

    fn add_scaled(&mut self, terms: &[(Word, Laurent)], k: &Laurent) {
        for (w, x) in terms {
            self.add(w, &(x * k));
        }
    }

    fn add_vec(&mut self, other: &Vector, k: &Laurent) {
        for (w, x) in &other.0 {
            self.add(w, &(x * k));
        }
    }

    fn freeze(self) -> Terms {
        let mut v: Vec<_> = self.0.into_iter().filter(|(_, k)| !k.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        Arc::new(v)
    }

    fn max_weight(&self) -> u32 {
        self.0.keys().map(|w| word_weight(w) as u32).max().unwrap_or(0)
    }

    fn from_element(e: &Element) -> Option<Vector> {
        let mut v = Vector::default();
        for (m, k) in e.terms() {
            let l = Laurent::from_crat(k)?.scale(&word_factorial(m.factors()));
            v.add(&m.factors().to_vec(), &l);
        }
        Some(v)
    }

    fn to_element(&self) -> Element {
        terms_to_element(self.0.iter().map(|(w, k)| (w, k)), &CRat::one())
    }
}

fn terms_to_element<'a>(terms: impl Iterator<Item = (&'a Word, &'a Laurent)>, scale: &CRat) -> Element {
    let mut map = std::collections::BTreeMap::new();
    for (w, k) in terms {
        if k.is_zero() {
            continue;
        }
        let x = &k.to_crat().scale(&word_factorial(w).recip()) * scale;
        if !x.is_zero() {
            map.insert(Monomial::new(w.clone()), x);
        }
    }
    Element::from_map(map)
}

/// Memoized normal-ordering engine for one OPE table.
pub struct Engine {
    table: OpeTable,
    /// `X_(j)Y` in the mode basis, indexed `[X][Y][j]`.
    modes: [[Vec<Terms>; 2]; 2],
    max_weight: u32,
    gen_memo: FxHashMap<(Generator, i32, Word), Terms>,
    word_memo: FxHashMap<(Word, i32, Word), Terms>,
    deriv_memo: FxHashMap<Word, Terms>,
}

fn gidx(g: Generator) -> usize {
    match g {
        Generator::L => 0,
        Generator::W => 1,
    }
}

impl Engine {
    /// An engine whose cutoff comes from `VOA_MAX_WEIGHT`.
    pub fn new(preset: Preset) -> Self {
        Self::with_max_weight(preset, max_weight_from_env())
    }

    pub fn with_max_weight(preset: Preset, max_weight: u32) -> Self {
        let table = OpeTable::new(preset);
        let mut modes: [[Vec<Terms>; 2]; 2] = Default::default();
        for x in [Generator::L, Generator::W] {
            for y in [Generator::L, Generator::W] {
                modes[gidx(x)][gidx(y)] = (0..=OpeTable::max_order(x, y))
                    .map(|j| {
                        let v = Vector::from_element(&table.entry(x, y, j))
                            .expect("table coefficients are Laurent in 22+5c");
                        v.freeze()
                    })
                    .collect();
            }
        }
        Engine {
            table,
            modes,
            max_weight,
            gen_memo: FxHashMap::default(),
            word_memo: FxHashMap::default(),
            deriv_memo: FxHashMap::default(),
        }
    }

    pub fn preset(&self) -> Preset {
        self.table.preset()
    }

    pub fn table(&self) -> &OpeTable {
        &self.table
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    /// Number of memoized mode products.
    pub fn cache_len(&self) -> usize {
        self.gen_memo.len() + self.word_memo.len() + self.deriv_memo.len()
    }

    fn guard(&self, weight: i64) -> Result<(), EngineError> {
        if weight > self.max_weight as i64 {
            return Err(EngineError::CutoffExceeded { weight: weight as u32, limit: self.max_weight });
        }
        Ok(())
    }

    /// `X_(m) w` for a PBW word `w`.
    fn act_gen(&mut self, x: Generator, m: i32, w: &[Factor]) -> Terms {
        let out_weight = word_weight(w) + x.weight() as i64 - m as i64 - 1;
        if out_weight < 0 {
            return Arc::new(Vec::new());
        }
        if m < 0 {
            let f = Factor::new(x, (-m - 1) as u32);
            if w.first().is_none_or(|&g| f <= g) {
                let mut word = Vec::with_capacity(w.len() + 1);
                word.push(f);
                word.extend_from_slice(w);
                return Arc::new(vec![(word, Laurent::one())]);
            }
        } else if w.is_empty() {
            return Arc::new(Vec::new());
        }
        let key = (x, m, w.to_vec());
        if let Some(t) = self.gen_memo.get(&key) {
            return t.clone();
        }
        let y = w[0];
        let q = -(y.deriv as i32) - 1;
        let rest = &w[1..];
        let mut acc = Vector::default();
        // Y_(q) X_(m) rest
        let inner = self.act_gen(x, m, rest);
        for (u, k) in inner.iter() {
            let outer = self.act_gen(y.gen, q, u);
            acc.add_scaled(&outer, k);
        }
        // [X_(m), Y_(q)] rest
        for j in 0..=OpeTable::max_order(x, y.gen) {
            let s = self.modes[gidx(x)][gidx(y.gen)][j as usize].clone();
            if s.is_empty() {
                continue;
            }
            let b = binomial(m as i64, j);
            if b.is_zero() {
                continue;
            }
            let p = m + q - j as i32;
            for (sw, sk) in s.iter() {
                let r = self.act_word(sw, p, rest);
                acc.add_scaled(&r, &sk.scale(&b));
            }
        }
        let t = acc.freeze();
        self.gen_memo.insert(key, t.clone());
        t
    }

    /// `s_(p) v` for PBW words `s`, `v`.
    fn act_word(&mut self, s: &[Factor], p: i32, v: &[Factor]) -> Terms {
        if s.is_empty() {
            return if p == -1 { Arc::new(vec![(v.to_vec(), Laurent::one())]) } else { Arc::new(Vec::new()) };
        }
        let (wt_s, wt_v) = (word_weight(s), word_weight(v));
        if wt_s + wt_v - p as i64 - 1 < 0 {
            return Arc::new(Vec::new());
        }
        let z = s[0];
        let d = z.deriv as i64;
        if s.len() == 1 {
            // (∂^d Z / d!)_(p) = (-1)^d C(p,d) Z_(p-d)
            let mut b = binomial(p as i64, d as u32);
            if b.is_zero() {
                return Arc::new(Vec::new());
            }
            if d % 2 == 1 {
                b = -b;
            }
            let r = self.act_gen(z.gen, p - d as i32, v);
            if b.is_one() {
                return r;
            }
            return Arc::new(r.iter().map(|(w, k)| (w.clone(), k.scale(&b))).collect());
        }
        let key = (s.to_vec(), p, v.to_vec());
        if let Some(t) = self.word_memo.get(&key) {
            return t.clone();
        }
        let n = -(d as i32) - 1;
        let t = &s[1..];
        let wt_t = word_weight(t);
        let mut acc = Vector::default();
        // Σ_j C(j+d, j) Z_(n-j) t_(p+j) v
        let mut j = 0i64;
        while j <= wt_t + wt_v - p as i64 - 1 {
            let coef = Laurent::constant(binomial(j + d, j as u32));
            let inner = self.act_word(t, p + j as i32, v);
            for (u, k) in inner.iter() {
                let outer = self.act_gen(z.gen, n - j as i32, u);
                acc.add_scaled(&outer, &(k * &coef));
            }
            j += 1;
        }
        // -(-1)^n Σ_j C(j+d, j) t_(n+p-j) Z_(j) v
        let sign: i64 = if n % 2 == 0 { -1 } else { 1 };
        for j in 0..=(z.gen.weight() as i64 + wt_v - 1) {
            let coef = Laurent::constant(binomial(j + d, j as u32) * BigRat::from_integer(sign.into()));
            let inner = self.act_gen(z.gen, j as i32, v);
            for (u, k) in inner.iter() {
                let outer = self.act_word(t, n + p - j as i32, u);
                acc.add_scaled(&outer, &(k * &coef));
            }
        }
        let r = acc.freeze();
        self.word_memo.insert(key, r.clone());
        r
    }

    /// Re-sorts an arbitrary mode word into the PBW basis.
    fn normalize_word(&mut self, w: &[Factor]) -> Terms {
        if is_sorted(w) {
            return Arc::new(vec![(w.to_vec(), Laurent::one())]);
        }
        let mut state = Vector::single(Vec::new(), Laurent::one());
        for f in w.iter().rev() {
            let mut next = Vector::default();
            for (u, k) in &state.0 {
                let r = self.act_gen(f.gen, -(f.deriv as i32) - 1, u);
                next.add_scaled(&r, k);
            }
            state = next;
        }
        state.freeze()
    }

    /// `∂ w`, with `∂` acting on each mode by `[∂, X_(m)] = -m X_(m-1)`.
    fn derive_word(&mut self, w: &[Factor]) -> Terms {
        if let Some(t) = self.deriv_memo.get(w) {
            return t.clone();
        }
        let mut acc = Vector::default();
        for i in 0..w.len() {
            let mut raised = w.to_vec();
            raised[i].deriv += 1;
            let coef = Laurent::constant(BigRat::from_integer((w[i].deriv + 1).into()));
            let r = self.normalize_word(&raised);
            acc.add_scaled(&r, &coef);
        }
        let t = acc.freeze();
        self.deriv_memo.insert(w.to_vec(), t.clone());
        t
    }

    fn product_vec(&mut self, a: &Vector, p: i32, b: &Vector) -> Result<Vector, EngineError> {
        let mut acc = Vector::default();
        if a.0.is_empty() || b.0.is_empty() {
            return Ok(acc);
        }
        self.guard(a.max_weight() as i64 + b.max_weight() as i64 - p as i64 - 1)?;
        let mut left: Vec<_> = a.0.iter().collect();
        let mut right: Vec<_> = b.0.iter().collect();
        left.sort_by(|x, y| x.0.cmp(y.0));
        right.sort_by(|x, y| x.0.cmp(y.0));
        for (wa, ka) in &left {
            for (wb, kb) in &right {
                let r = self.act_word(wa, p, wb);
                acc.add_scaled(&r, &(*ka * *kb));
            }
        }
        Ok(acc)
    }

    fn derive_vec(&mut self, a: &Vector) -> Result<Vector, EngineError> {
        self.guard(a.max_weight() as i64 + 1)?;
        let mut acc = Vector::default();
        let mut terms: Vec<_> = a.0.iter().collect();
        terms.sort_by(|x, y| x.0.cmp(y.0));
        for (w, k) in terms {
            let r = self.derive_word(w);
            acc.add_scaled(&r, k);
        }
        Ok(acc)
    }

    /// The bilinear mode product `a_(p) b` for any integer `p`.
    pub fn mode_product(&mut self, a: &Element, p: i32, b: &Element) -> Result<Element, EngineError> {
        if let (Some(va), Some(vb)) = (Vector::from_element(a), Vector::from_element(b)) {
            return Ok(self.product_vec(&va, p, &vb)?.to_element());
        }
        // Coefficients outside ℚ[d, d⁻¹]: combine monomial products in ℚ(c).
        self.guard(a.max_weight() as i64 + b.max_weight() as i64 - p as i64 - 1)?;
        let mut out = Element::zero();
        for (ma, ka) in a.terms() {
            for (mb, kb) in b.terms() {
                let r = self.act_word(ma.factors(), p, mb.factors());
                let scale = (ka * kb).scale(&(word_factorial(ma.factors()) * word_factorial(mb.factors())));
                out = &out + &terms_to_element(r.iter().map(|(w, k)| (w, k)), &scale);
            }
        }
        Ok(out)
    }

    /// `a ∘_n b`
    pub fn circ(&mut self, a: &Element, n: u32, b: &Element) -> Result<Element, EngineError> {
        self.mode_product(a, n as i32, b)
    }

    /// The Wick product `:ab:`.
    pub fn nop(&mut self, a: &Element, b: &Element) -> Result<Element, EngineError> {
        self.mode_product(a, -1, b)
    }

    /// `∂a`
    pub fn derive(&mut self, a: &Element) -> Result<Element, EngineError> {
        self.derive_n(a, 1)
    }

    /// `∂^k a`
    pub fn derive_n(&mut self, a: &Element, k: u32) -> Result<Element, EngineError> {
        if k == 0 {
            return Ok(a.clone());
        }
        if let Some(mut v) = Vector::from_element(a) {
            for _ in 0..k {
                v = self.derive_vec(&v)?;
            }
            return Ok(v.to_element());
        }
        self.guard(a.max_weight() as i64 + k as i64)?;
        let mut cur = a.clone();
        for _ in 0..k {
            let mut out = Element::zero();
            for (m, x) in cur.terms() {
                let r = self.derive_word(m.factors());
                let scale = x.scale(&word_factorial(m.factors()));
                out = &out + &terms_to_element(r.iter().map(|(w, k)| (w, k)), &scale);
            }
            cur = out;
        }
        Ok(cur)
    }

    /// `L ∘_0 a`, which equals `∂a` because `L` is the conformal vector.
    pub fn derive_via_virasoro(&mut self, a: &Element) -> Result<Element, EngineError> {
        self.circ(&Element::generator(Generator::L), 0, a)
    }

    /// Reduces an expression tree to PBW normal form.
    pub fn normal_form(&mut self, t: &ExprTree) -> Result<Element, EngineError> {
        if let Some(v) = self.eval_laurent(t)? {
            return Ok(v.to_element());
        }
        self.eval_element(t)
    }

    fn eval_laurent(&mut self, t: &ExprTree) -> Result<Option<Vector>, EngineError> {
        Ok(Some(match t {
            ExprTree::Vacuum => Vector::single(Vec::new(), Laurent::one()),
            ExprTree::Atom(g) => Vector::single(vec![Factor::new(*g, 0)], Laurent::one()),
            ExprTree::Derive(k, e) => {
                let Some(mut v) = self.eval_laurent(e)? else { return Ok(None) };
                for _ in 0..*k {
                    v = self.derive_vec(&v)?;
                }
                v
            }
            ExprTree::Nop(a, b) | ExprTree::Circ(_, a, b) => {
                let p = match t {
                    ExprTree::Circ(n, _, _) => *n as i32,
                    _ => -1,
                };
                let Some(va) = self.eval_laurent(a)? else { return Ok(None) };
                let Some(vb) = self.eval_laurent(b)? else { return Ok(None) };
                self.product_vec(&va, p, &vb)?
            }
            ExprTree::Scale(k, e) => {
                let Some(l) = Laurent::from_crat(k) else { return Ok(None) };
                let Some(v) = self.eval_laurent(e)? else { return Ok(None) };
                let mut out = Vector::default();
                out.add_vec(&v, &l);
                out
            }
            ExprTree::Sum(xs) => {
                let mut out = Vector::default();
                for x in xs {
                    let Some(v) = self.eval_laurent(x)? else { return Ok(None) };
                    out.add_vec(&v, &Laurent::one());
                }
                out
            }
        }))
    }

    fn eval_element(&mut self, t: &ExprTree) -> Result<Element, EngineError> {
        Ok(match t {
            ExprTree::Vacuum => Element::scalar(CRat::one()),
            ExprTree::Atom(g) => Element::generator(*g),
            ExprTree::Derive(k, e) => {
                let v = self.eval_element(e)?;
                self.derive_n(&v, *k)?
            }
            ExprTree::Nop(a, b) => {
                let (x, y) = (self.eval_element(a)?, self.eval_element(b)?);
                self.nop(&x, &y)?
            }
            ExprTree::Circ(n, a, b) => {
                let (x, y) = (self.eval_element(a)?, self.eval_element(b)?);
                self.circ(&x, *n, &y)?
            }
            ExprTree::Scale(k, e) => self.eval_element(e)?.scale(k),
            ExprTree::Sum(xs) => {
                let mut out = Element::zero();
                for x in xs {
                    out = &out + &self.eval_element(x)?;
                }
                out
            }
        })
    }
}

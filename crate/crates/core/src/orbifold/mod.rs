//! The Z2-orbifold: the involution `W ↦ -W`, the quadratic generators
//! `U_{i,j} = :(∂^i W)(∂^j W):`, their coefficient invariants, and the
//! decoupling solver.

mod appendix;
mod decouple;
mod interp;
mod linalg;

use thiserror::Error;

use crate::algebra::{Element, Factor, Generator, Monomial};
use crate::ope::{Engine, EngineError};
use crate::scalar::CRat;

pub use appendix::{appendix_source, appendix_tree, verify_appendix, AppendixError};
pub use decouple::{decouple, GeneratorWord, StrongGen, DecouplingResult, DEFAULT_MAX_WORD_LEN, DEFAULT_MAX_WORD_WEIGHT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbifoldError {
    #[error("element is not homogeneous of weight {expected}")]
    BadWeight { expected: u32 },
    #[error("index {0} must be even")]
    OddIndex(u32),
    #[error("no decoupling relation for U({n},0) over the given generators")]
    NoRelation { n: u32 },
    #[error("word enumeration at weight {weight} exceeds the bound {limit}")]
    CutoffExceeded { weight: u32, limit: u32 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// `∂^i W` as a one-term element.
fn dw(i: u32) -> Element {
    Element::derivative_of(Generator::W, i)
}

/// `U_{i,j} = :(∂^i W)(∂^j W):` in normal form.
pub fn u(engine: &mut Engine, i: u32, j: u32) -> Result<Element, EngineError> {
    engine.nop(&dw(i), &dw(j))
}

/// The image under `L ↦ L`, `W ↦ -W`.
pub fn theta(e: &Element) -> Element {
    let odd = e.filter(|m| m.parity() < 0);
    &e.filter(|m| m.parity() > 0) - &odd
}

fn check_weight(e: &Element, n: u32) -> Result<(), OrbifoldError> {
    if n % 2 == 1 {
        return Err(OrbifoldError::OddIndex(n));
    }
    if !e.is_zero() && e.weight() != Some(n + 6) {
        return Err(OrbifoldError::BadWeight { expected: n + 6 });
    }
    Ok(())
}

/// The PBW monomial `:(∂^a W)(∂^b W):` with `a ≥ b`.
pub fn ww(a: u32, b: u32) -> Monomial {
    Monomial::sorted(vec![Factor::new(Generator::W, a), Factor::new(Generator::W, b)])
}

/// `C_{n,i}`: the coefficient of `:(∂^(n-i) W)(∂^i W):` in `e`.
pub fn c_coeff(e: &Element, n: u32, i: u32) -> Result<CRat, OrbifoldError> {
    check_weight(e, n)?;
    if i > n / 2 {
        return Ok(CRat::zero());
    }
    Ok(e.coeff(&ww(n - i, i)))
}

/// `C_n = Σ_i (-1)^i C_{n,i}`, the canonical coefficient of `U_{n,0}`.
pub fn c_invariant(e: &Element, n: u32) -> Result<CRat, OrbifoldError> {
    check_weight(e, n)?;
    let mut acc = CRat::zero();
    for i in 0..=n / 2 {
        let k = e.coeff(&ww(n - i, i));
        acc = if i % 2 == 0 { &acc + &k } else { &acc - &k };
    }
    Ok(acc)
}

/// `U_{i,j}` written as `Σ_m coeff · ∂^m U_{N-m,0} + remainder` with
/// `N = i + j` and a remainder in the Virasoro subalgebra.
#[derive(Debug, Clone, PartialEq)]
pub struct UReduction {
    pub i: u32,
    pub j: u32,
    /// `(m, coefficient of ∂^m U_{N-m,0})`, `N - m` even, ascending in `m`.
    pub derivative_terms: Vec<(u32, CRat)>,
    /// Pure-`L` part.
    pub remainder: Element,
}

impl UReduction {
    /// Coefficient of `U_{N,0}` itself; zero when `N` is odd.
    pub fn lead(&self) -> CRat {
        self.derivative_terms.iter().find(|(m, _)| *m == 0).map(|(_, k)| k.clone()).unwrap_or_else(CRat::zero)
    }
}

/// Expresses `U_{i,j}` through derivatives of `U_{2k,0}` plus an `L`-remainder.
/// For odd `i + j` there is no `U_{i+j,0}` term and [`UReduction::lead`] is 0.
pub fn reduce_uij(engine: &mut Engine, i: u32, j: u32) -> Result<UReduction, EngineError> {
    let n = i + j;
    let target = u(engine, i, j)?;
    let mut ms = Vec::new();
    let mut cols = Vec::new();
    for m in (n % 2..=n).step_by(2) {
        let base = u(engine, n - m, 0)?;
        cols.push(engine.derive_n(&base, m)?);
        ms.push(m);
    }
    let quadratic = |e: &Element| e.filter(|mono| mono.w_count() == 2);
    let mut ech = linalg::Echelon::default();
    for (idx, col) in cols.iter().enumerate() {
        ech.insert(idx, &quadratic(col));
    }
    let x = ech.solve(&quadratic(&target)).expect("derivatives of U_{2k,0} span the quadratic part");
    let mut remainder = target;
    let mut derivative_terms = Vec::new();
    for (idx, m) in ms.iter().enumerate() {
        let k = x.get(&idx).cloned().unwrap_or_else(CRat::zero);
        remainder = remainder.add_scaled(&cols[idx], &-k.clone());
        if !k.is_zero() {
            derivative_terms.push((*m, k));
        }
    }
    debug_assert_eq!(remainder.filtration_degree(), 0);
    Ok(UReduction { i, j, derivative_terms, remainder })
}

/// The quantum correction of the classical relation
/// `u_{i,j} u_{k,l} - u_{k,j} u_{l,i} = 0`:
/// `:U_{i,j} U_{k,l}: - :U_{k,j} U_{l,i}:` in normal form.
pub fn corrected_classical_relation(engine: &mut Engine, i: u32, j: u32, k: u32, l: u32) -> Result<Element, EngineError> {
    let a = u(engine, i, j)?;
    let b = u(engine, k, l)?;
    let c = u(engine, k, j)?;
    let d = u(engine, l, i)?;
    Ok(&engine.nop(&a, &b)? - &engine.nop(&c, &d)?)
}

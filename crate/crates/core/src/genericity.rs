//! The coefficients `F(n,c)`, `G(n,c)` of `U_{n+4,0}` in `U_{0,0}∘_1 U_{n,0}`
//! and of `U_{n+6,0}` in `U_{2,0}∘_1 U_{n,0}`, their closed forms, and the
//! exact root and common-zero analysis of the quadratics they reduce to.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{Element, Generator};
use crate::ope::{Engine, EngineError, Preset};
use crate::orbifold::{c_coeff, c_invariant, u, OrbifoldError};
use crate::scalar::{rat, resultant, BigRat, CPoly, CRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenericityError {
    #[error("{0} has no real roots")]
    ComplexRoots(CPoly),
    #[error("{0} is not a quadratic")]
    NotQuadratic(CPoly),
    #[error("the engine uses preset {0}; this needs the c = -22/5 preset")]
    WrongPreset(Preset),
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
}

impl From<EngineError> for GenericityError {
    fn from(e: EngineError) -> Self {
        GenericityError::Orbifold(e.into())
    }
}

/// `F(n,c) = C_{n+4}(U_{0,0} ∘_1 U_{n,0})`.
pub fn f_coefficient(engine: &mut Engine, n: u32) -> Result<CRat, GenericityError> {
    let a = u(engine, 0, 0)?;
    let b = u(engine, n, 0)?;
    let x = engine.circ(&a, 1, &b)?;
    Ok(c_invariant(&x, n + 4)?)
}

/// `G(n,c) = C_{n+6}(U_{2,0} ∘_1 U_{n,0})`.
pub fn g_coefficient(engine: &mut Engine, n: u32) -> Result<CRat, GenericityError> {
    let a = u(engine, 2, 0)?;
    let b = u(engine, n, 0)?;
    let x = engine.circ(&a, 1, &b)?;
    Ok(c_invariant(&x, n + 6)?)
}

const P: [[i64; 3]; 4] = [[720, 384, 12], [-5286, 125, 19], [-2160, 40, 8], [-186, 11, 1]];
const Q: [[i64; 3]; 5] = [
    [-466200, 20580, 2100],
    [-183780, -46096, 3745],
    [-74076, -31732, 2065],
    [-19116, -5624, 455],
    [-1308, -248, 35],
];

fn poly_in_n(rows: &[[i64; 3]], n: &BigRat) -> CPoly {
    let mut acc = CPoly::zero();
    let mut pow = BigRat::one();
    for row in rows {
        acc = &acc + &CPoly::from_ints(row).scale(&pow);
        pow *= n;
    }
    acc
}

/// `f(n,c) = p_0(c) + p_1(c) n + p_2(c) n² + p_3(c) n³`.
pub fn f_poly(n: &BigInt) -> CPoly {
    poly_in_n(&P, &BigRat::from_integer(n.clone()))
}

/// `g(n,c) = q_0(c) + … + q_4(c) n⁴`.
pub fn g_poly(n: &BigInt) -> CPoly {
    poly_in_n(&Q, &BigRat::from_integer(n.clone()))
}

fn d() -> CPoly {
    CPoly::linear(22, 5)
}

fn int(n: u32) -> i64 {
    n as i64
}

/// `-(10+n) f(n,c) / (36 (22+5c)(1+n)(3+n)(4+n))`.
pub fn closed_f(n: u32) -> CRat {
    let n = int(n);
    let k = rat(-(10 + n), 36 * (1 + n) * (3 + n) * (4 + n));
    let num = f_poly(&n.into()).scale(&k);
    CRat::new(num, d()).expect("nonzero denominator")
}

/// `-(12+n) g(n,c) / (1260 (22+5c)(1+n)(3+n)(4+n)(5+n))`.
pub fn closed_g(n: u32) -> CRat {
    let n = int(n);
    let k = rat(-(12 + n), 1260 * (1 + n) * (3 + n) * (4 + n) * (5 + n));
    let num = g_poly(&n.into()).scale(&k);
    CRat::new(num, d()).expect("nonzero denominator")
}

/// `F(n,c)` has no poles other than `c = -22/5`, and
/// `36(22+5c)(1+n)(3+n)(4+n) F(n,c)` has integer coefficients.
pub fn f_denominator_shape_ok(n: u32, f: &CRat) -> bool {
    let pole = d().monic();
    if !(f.den().is_one() || *f.den() == pole) {
        return false;
    }
    let n = int(n);
    let scale = CRat::from_poly(d().scale(&rat(36 * (1 + n) * (3 + n) * (4 + n), 1)));
    let p = &scale * f;
    p.den().is_one() && p.num().coeffs().iter().all(|x| x.is_integer())
}

/// `F(n)` computed in the algebra with `W` rescaled by `√(22+5c)` at `c = -22/5`.
pub fn f_special(engine: &mut Engine, n: u32) -> Result<BigRat, GenericityError> {
    if engine.preset() != Preset::CMinus22Over5 {
        return Err(GenericityError::WrongPreset(engine.preset()));
    }
    let f = f_coefficient(engine, n)?;
    Ok(f.as_rat().expect("no c-dependence at c = -22/5"))
}

/// `lim_{c→-22/5} (22+5c) f(c)`, for `f` with at most a simple pole there.
pub fn scaled_limit(f: &CRat) -> Result<BigRat, crate::scalar::ScalarError> {
    f.limit_scaled(&d(), &rat(-22, 5))
}

/// `-64 (6+n)(10+n)(1+7n) / (75 (1+n)(3+n))`.
pub fn f_special_display(n: u32) -> BigRat {
    let n = int(n);
    rat(-64 * (6 + n) * (10 + n) * (1 + 7 * n), 75 * (1 + n) * (3 + n))
}

/// A pair of quadratics sharing a root, or degenerating, at index `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub n: i64,
    pub reason: String,
}

/// Why `p` and `q` could vanish together; `None` when they provably cannot.
pub fn common_zero(p: &CPoly, q: &CPoly) -> Option<String> {
    if p.degree() != Some(2) || q.degree() != Some(2) {
        return Some("leading coefficient vanishes".into());
    }
    let r = resultant(p, q);
    r.is_zero().then(|| "resultant is zero".into())
}

/// For each even `n` in `[lo, hi]`, checks that `f(n-4, c)` and `g(n-6, c)`
/// have no common root `c`.
pub fn common_zero_scan(lo: i64, hi: i64) -> Vec<Violation> {
    let mut out = Vec::new();
    let start = lo + lo.rem_euclid(2);
    for n in (start..=hi).step_by(2) {
        let p = f_poly(&(n - 4).into());
        let q = g_poly(&(n - 6).into());
        if let Some(reason) = common_zero(&p, &q) {
            out.push(Violation { n, reason });
        }
    }
    out
}

/// A closed rational interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRat,
    pub hi: BigRat,
}

impl Interval {
    pub fn contains(&self, x: &BigRat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn width(&self) -> BigRat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRat {
        (&self.lo + &self.hi) / BigInt::from(2)
    }
}

fn sign(p: &CPoly, x: &BigRat) -> i8 {
    let v = p.eval(x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Shrinks `[lo, hi]`, across which `p` changes sign, to width at most `width`.
fn bisect(p: &CPoly, mut lo: BigRat, mut hi: BigRat, width: &BigRat) -> Interval {
    let s_lo = sign(p, &lo);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / BigInt::from(2);
        match sign(p, &mid) {
            0 => return Interval { lo: mid.clone(), hi: mid },
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Interval { lo, hi }
}

/// Isolating intervals, in increasing order, for the real roots of a
/// quadratic, by bisection on exact signs.
pub fn quadratic_root_intervals(p: &CPoly, width: &BigRat) -> Result<Vec<Interval>, GenericityError> {
    if p.degree() != Some(2) {
        return Err(GenericityError::NotQuadratic(p.clone()));
    }
    let (c0, c1, c2) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = &c1 * &c1 - BigRat::from_integer(4.into()) * &c2 * &c0;
    if disc.is_negative() {
        return Err(GenericityError::ComplexRoots(p.clone()));
    }
    let vertex = -&c1 / (BigRat::from_integer(2.into()) * &c2);
    if disc.is_zero() {
        return Ok(vec![Interval { lo: vertex.clone(), hi: vertex }]);
    }
    // Cauchy bound.
    let bound = BigRat::one() + [&c0, &c1].iter().map(|x| (*x / &c2).abs()).fold(BigRat::zero(), |a, b| a.max(b));
    Ok(vec![bisect(p, -bound.clone(), vertex.clone(), width), bisect(p, vertex, bound, width)])
}

/// Roots `r_1 < r_2` of `f(n, ·)` and `s_1 < s_2` of `g(n, ·)`.
pub fn root_intervals(n: &BigInt, width: &BigRat) -> Result<[Interval; 4], GenericityError> {
    let r = quadratic_root_intervals(&f_poly(n), width)?;
    let s = quadratic_root_intervals(&g_poly(n), width)?;
    let two = |v: Vec<Interval>| -> [Interval; 2] {
        let mut it = v.into_iter();
        let a = it.next().expect("root");
        let b = it.next().unwrap_or_else(|| a.clone());
        [a, b]
    };
    let [r1, r2] = two(r);
    let [s1, s2] = two(s);
    Ok([r1, r2, s1, s2])
}

/// True when `p` has exactly one root in `[x - width/2, x + width/2]`, i.e.
/// the decimal `x` locates a root to within `width`.
pub fn locates_root(p: &CPoly, x: &BigRat, width: &BigRat) -> bool {
    let half = width / BigInt::from(2);
    let (a, b) = (x - &half, x + &half);
    let (sa, sb) = (sign(p, &a), sign(p, &b));
    sa * sb < 0 || (sa == 0) != (sb == 0)
}

/// A quadratic with integer coefficients and its discriminant written as
/// `square² · squarefree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRoots {
    pub poly: CPoly,
    pub discriminant: BigInt,
    pub square: BigInt,
    pub squarefree: BigInt,
}

impl QuadraticRoots {
    pub fn new(poly: CPoly) -> Result<Self, GenericityError> {
        if poly.degree() != Some(2) {
            return Err(GenericityError::NotQuadratic(poly));
        }
        let k = poly.primitive_integer_coeffs();
        let disc = &k[1] * &k[1] - BigInt::from(4) * &k[2] * &k[0];
        let (square, squarefree) = split_square(&disc);
        Ok(QuadraticRoots { poly, discriminant: disc, square, squarefree })
    }

    /// `(p ± q√r)/s` in lowest terms, leading coefficient made positive.
    pub fn roots_display(&self) -> String {
        let mut k = self.poly.primitive_integer_coeffs();
        if k[2].is_negative() {
            k.iter_mut().for_each(|x| *x = -x.clone());
        }
        let (p, q, s) = (-k[1].clone(), self.square.clone(), BigInt::from(2) * &k[2]);
        let g = p.gcd(&q).gcd(&s);
        let (p, q, s) = (p / &g, q / &g, s / &g);
        let q = if q.is_one() { String::new() } else { q.to_string() };
        format!("({p} ± {q}√{})/{s}", self.squarefree)
    }
}

/// `n = square² · squarefree` by trial division; the sign stays on `squarefree`.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut free = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    (square, free * rest)
}

/// `475c² - 5590c - 181248`, whose roots are the central charges where no
/// decoupling relation for `U_{8,0}` exists.
pub fn nongeneric_c() -> QuadraticRoots {
    QuadraticRoots::new(CPoly::from_ints(&[-181248, -5590, 475])).expect("quadratic")
}

/// One comparison in a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub claim: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl Check {
    pub fn equal(claim: impl Into<String>, expected: &CRat, got: &CRat) -> Self {
        Check { claim: claim.into(), expected: expected.to_string(), got: got.to_string(), pass: expected == got }
    }

    pub fn vanishes(claim: impl Into<String>, got: &Element) -> Self {
        Check { claim: claim.into(), expected: "0".into(), got: got.to_string(), pass: got.is_zero() }
    }
}

fn q(num: i64, den: i64) -> CRat {
    CRat::from_rat(rat(num, den))
}

fn over_d(p: CPoly, k: i64) -> CRat {
    CRat::new(p, d().scale(&rat(k, 1))).expect("nonzero denominator")
}

/// The composite fields whose `C_{n+4,i}` the proof of the `F(n,c)` formula
/// relies on, with their closed forms: `(name, field, [C_{n+4,0}, C_{n+4,1},
/// C_{n+4,2}] (further ones vanish), C_{n+4})`.
type Composite = (&'static str, Element, [CRat; 3], CRat);

fn composites(engine: &mut Engine, n: u32) -> Result<Vec<Composite>, EngineError> {
    let nn = int(n);
    let (n1, n2, n3, n4) = (1 + nn, 2 + nn, 3 + nn, 4 + nn);
    let l = |k| Element::derivative_of(Generator::L, k);
    let w = |k| Element::derivative_of(Generator::W, k);
    let z = CRat::zero;
    let lw = engine.nop(&l(0), &w(0))?;
    let llw = engine.nop(&l(0), &lw)?;
    let dl_w = engine.nop(&l(1), &w(0))?;
    let dl_lw = engine.nop(&l(1), &lw)?;
    let d2l_w = engine.nop(&l(2), &w(0))?;
    let d3l_w = engine.nop(&l(3), &w(0))?;
    let left = |engine: &mut Engine, x: &Element, k: u32| -> Result<Element, EngineError> {
        let dx = engine.derive_n(x, k)?;
        engine.nop(&dx, &w(0))
    };
    let right = |engine: &mut Engine, x: &Element, k: u32| -> Result<Element, EngineError> {
        let dx = engine.derive_n(x, k)?;
        engine.nop(&w(n), &dx)
    };
    Ok(vec![
        (
            "(d^n(LLW))W",
            left(engine, &llw, n)?,
            [q(15, n1 * n2 * n3 * n4), q(7, n1 * n2 * n3), q(1, n1 * n2)],
            q(nn - 1, n2 * n3 * n4),
        ),
        (
            "(d^(n-1)((dL)LW))W",
            left(engine, &dl_lw, n - 1)?,
            [q(-24, nn * n1 * n2 * n3 * n4), q(-10, nn * n1 * n2 * n3), q(-1, nn * n1 * n2)],
            q(-(nn - 4), nn * n2 * n3 * n4),
        ),
        ("(d^(n+2)(LW))W", left(engine, &lw, n + 2)?, [q(3, n3 * n4), q(1, n3), z()], q(-n1, n3 * n4)),
        (
            "(d^(n+1)((dL)W))W",
            left(engine, &dl_w, n + 1)?,
            [q(-6, n2 * n3 * n4), q(-1, n2 * n3), z()],
            q(nn - 2, n2 * n3 * n4),
        ),
        (
            "(d^n((d^2L)W))W",
            left(engine, &d2l_w, n)?,
            [q(18, n1 * n2 * n3 * n4), q(2, n1 * n2 * n3), z()],
            q(-2 * (nn - 5), n1 * n2 * n3 * n4),
        ),
        (
            "(d^(n-1)((d^3L)W))W",
            left(engine, &d3l_w, n - 1)?,
            [q(-72, nn * n1 * n2 * n3 * n4), q(-6, nn * n1 * n2 * n3), z()],
            q(6 * (nn - 8), nn * n1 * n2 * n3 * n4),
        ),
        ("(d^nW)(LLW)", right(engine, &llw, 0)?, [q(nn - 1, n2 * n3 * n4), z(), z()], q(nn - 1, n2 * n3 * n4)),
        (
            "(d^nW)(d^2(LW))",
            right(engine, &lw, 2)?,
            [q(-2 * (nn - 5), n1 * n2 * n3 * n4), q(-2 * (nn - 3), n1 * n2 * n3), q(-(nn - 1), n1 * n2)],
            q(-n1, n3 * n4),
        ),
        (
            "(d^nW)(d((dL)W))",
            right(engine, &dl_w, 1)?,
            [q(-2 * (nn - 5), n1 * n2 * n3 * n4), q(-(nn - 3), n1 * n2 * n3), z()],
            q(nn - 2, n2 * n3 * n4),
        ),
        (
            "(d^nW)((d^2L)W)",
            right(engine, &d2l_w, 0)?,
            [q(-2 * (nn - 5), n1 * n2 * n3 * n4), z(), z()],
            q(-2 * (nn - 5), n1 * n2 * n3 * n4),
        ),
    ])
}

/// `Σ_k coefficient_k · ∂^{shift_k}(field_k)`.
fn combination(engine: &mut Engine, terms: &[(CRat, u32, &Element)]) -> Result<Element, EngineError> {
    let mut acc = Element::zero();
    for (k, m, x) in terms {
        acc = acc.add_scaled(&engine.derive_n(x, *m)?, k);
    }
    Ok(acc)
}

/// Checks, for each even `n` in `2..=n_max`: the ten composite-field
/// coefficient formulas, the vanishing of `(U_{0,0}∘_0 ∂^n W)∘_0 W`, the
/// expansions of `U_{0,0}∘_0 ∂^{n-1} W`, `U_{0,0}∘_1 ∂^n W` and `U_{0,0}∘_1 W`,
/// and the three-term split of `U_{0,0}∘_1 U_{n,0}`.
pub fn verify_composite_fields(engine: &mut Engine, n_max: u32) -> Result<Vec<Check>, GenericityError> {
    let mut out = Vec::new();
    let lin = CPoly::linear;
    let w = |k| Element::derivative_of(Generator::W, k);
    let l = |k| Element::derivative_of(Generator::L, k);
    let u00 = u(engine, 0, 0)?;
    let lw = engine.nop(&l(0), &w(0))?;
    let llw = engine.nop(&l(0), &lw)?;
    let dl_w = engine.nop(&l(1), &w(0))?;
    let dl_lw = engine.nop(&l(1), &lw)?;
    let d2l_w = engine.nop(&l(2), &w(0))?;
    let d3l_w = engine.nop(&l(3), &w(0))?;

    // U_{0,0}∘_1 W
    let u_w = engine.circ(&u00, 1, &w(0))?;
    let rhs = combination(
        engine,
        &[
            (over_d(CPoly::from_ints(&[64]), 1), 0, &llw),
            (over_d(lin(258, 15).scale(&rat(2, 1)), 3), 2, &lw),
            (-over_d(lin(236, 10), 1), 1, &dl_w),
            (over_d(lin(58, 3), 1), 0, &d2l_w),
            (over_d(CPoly::from_ints(&[-426, 91, 5]), 36), 4, &w(0)),
        ],
    )?;
    out.push(Check::vanishes("U00 o1 W expansion", &(&u_w - &rhs)));

    for n in (2..=n_max).step_by(2) {
        let nn = int(n);
        for (name, field, parts, total) in composites(engine, n)? {
            for (i, want) in parts.iter().enumerate() {
                let got = c_coeff(&field, n + 4, i as u32)?;
                out.push(Check::equal(format!("C_(n+4,{i}) {name} n={n}"), want, &got));
            }
            for i in 3..=(n + 4) / 2 {
                let got = c_coeff(&field, n + 4, i)?;
                out.push(Check::equal(format!("C_(n+4,{i}) {name} n={n}"), &CRat::zero(), &got));
            }
            let got = c_invariant(&field, n + 4)?;
            out.push(Check::equal(format!("C_(n+4) {name} n={n}"), &total, &got));
        }

        let x0 = engine.circ(&u00, 0, &w(n))?;
        let v = engine.circ(&x0, 0, &w(0))?;
        out.push(Check::vanishes(format!("(U00 o0 d^nW) o0 W n={n}"), &v));

        let lhs = engine.circ(&u00, 0, &w(n - 1))?;
        let rhs = combination(
            engine,
            &[
                (over_d(CPoly::from_ints(&[64]), 1), n, &llw),
                (-over_d(CPoly::from_ints(&[64]), 1), n - 1, &dl_lw),
                (over_d(lin(14, 1).scale(&rat(10, 1)), 3), n + 2, &lw),
                (-over_d(lin(86, 5), 1), n + 1, &dl_w),
                (over_d(lin(26, 3), 1), n, &d2l_w),
                (-over_d(lin(-2, 1).scale(&rat(2, 1)), 3), n - 1, &d3l_w),
                (over_d(CPoly::from_ints(&[-186, 11, 1]), 36), n + 4, &w(0)),
            ],
        )?;
        out.push(Check::vanishes(format!("U00 o0 d^(n-1)W expansion n={n}"), &(&lhs - &rhs)));

        let lhs = engine.circ(&u00, 1, &w(n))?;
        let cn = |a: i64, b: i64, k: i64| -> CPoly { &lin(a, b) + &lin(0, 1).scale(&rat(k, 1)) };
        let rhs = combination(
            engine,
            &[
                (over_d(CPoly::from_ints(&[64 * (1 + nn)]), 1), n, &llw),
                (-over_d(CPoly::from_ints(&[64 * nn]), 1), n - 1, &dl_lw),
                (over_d(cn(258 + 70 * nn, 15, 5 * nn).scale(&rat(2, 1)), 3), n + 2, &lw),
                (-over_d(cn(236 + 86 * nn, 10, 5 * nn), 1), n + 1, &dl_w),
                (over_d(cn(58 + 26 * nn, 3, 3 * nn), 1), n, &d2l_w),
                // Grows linearly in n: each step adds the ∘_0 coefficient.
                (-over_d(lin(-2, 1).scale(&rat(2 * nn, 1)), 3), n - 1, &d3l_w),
                (over_d(CPoly::from_ints(&[-426 - 186 * nn, 91 + 11 * nn, 5 + nn]), 36), n + 4, &w(0)),
            ],
        )?;
        out.push(Check::vanishes(format!("U00 o1 d^nW expansion n={n}"), &(&lhs - &rhs)));

        let un = u(engine, n, 0)?;
        let whole = engine.circ(&u00, 1, &un)?;
        let x1 = engine.circ(&u00, 1, &w(n))?;
        let p1 = engine.nop(&x1, &w(0))?;
        let p2 = engine.circ(&x0, 0, &w(0))?;
        let p3 = engine.nop(&w(n), &u_w)?;
        let split = &(&(&whole - &p1) - &p2) - &p3;
        out.push(Check::vanishes(format!("U00 o1 U(n,0) split n={n}"), &split));
    }
    Ok(out)
}

//! Consistency checks of the engine against identities every vertex algebra
//! satisfies.

use super::engine::{Engine, EngineError};
use crate::algebra::{Element, ExprTree, Generator};
use crate::scalar::{binomial, factorial, BigRat, CRat};

/// One triple to test; products `∘_n` are checked for `n ≤ n_max`.
#[derive(Debug, Clone)]
pub struct AxiomSample {
    pub a: Element,
    pub b: Element,
    pub c: Element,
    pub n_max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    /// Number of identities checked.
    pub checks: usize,
}

fn expect_equal(identity: impl FnOnce() -> String, lhs: &Element, rhs: &Element) -> Result<(), EngineError> {
    let diff = lhs - rhs;
    let first = diff.terms().next().map(|(m, k)| format!("({k})*{m}"));
    match first {
        None => Ok(()),
        Some(residue) => Err(EngineError::AxiomViolation { identity: identity(), residue }),
    }
}

fn sign(k: i64) -> BigRat {
    if k % 2 == 0 {
        BigRat::from_integer(1.into())
    } else {
        BigRat::from_integer((-1).into())
    }
}

impl Engine {
    /// Checks, exactly, on every sample:
    ///
    /// * skew-symmetry `a∘_n b = Σ_j (-1)^(n+j+1)/j! ∂^j (b∘_(n+j) a)`,
    /// * `(∂a)∘_n b = -n a∘_(n-1) b` and `a∘_n ∂b = ∂(a∘_n b) + n a∘_(n-1) b`,
    /// * `∂ = L∘_0` and the Leibniz rule for `∂` on Wick products,
    /// * quasi-commutativity `:ab: - :ba: = Σ_j (-1)^j/(j+1)! ∂^(j+1)(a∘_j b)`,
    /// * the commutator formula
    ///   `a∘_m(b∘_k c) - b∘_k(a∘_m c) = Σ_j C(m,j) (a∘_j b)∘_(m+k-j) c`.
    pub fn check_axioms(&mut self, samples: &[AxiomSample]) -> Result<AxiomReport, EngineError> {
        let mut checks = 0;
        for s in samples {
            let (a, b, c) = (&s.a, &s.b, &s.c);
            let top = (a.max_weight() + b.max_weight()) as i64;
            for n in 0..=s.n_max {
                let lhs = self.circ(a, n, b)?;
                // Horner in ∂: the j-th product has weight falling with j.
                let mut rhs = Element::zero();
                for j in (0..=(top - n as i64).max(0) as u32).rev() {
                    let ba = self.circ(b, n + j, a)?;
                    let k = sign((n + j + 1) as i64) / BigRat::from_integer(factorial(j));
                    rhs = self.derive(&rhs)?.add_scaled(&ba, &CRat::from_rat(k));
                }
                expect_equal(|| format!("skew-symmetry n={n} a={a} b={b}"), &lhs, &rhs)?;

                let da = self.derive(a)?;
                let lhs = self.circ(&da, n, b)?;
                let rhs = match n {
                    0 => Element::zero(),
                    _ => self.circ(a, n - 1, b)?.scale(&CRat::from_int(-(n as i64))),
                };
                expect_equal(|| format!("(∂a)∘_n b n={n} a={a} b={b}"), &lhs, &rhs)?;

                let db = self.derive(b)?;
                let lhs = self.circ(a, n, &db)?;
                let ab = self.circ(a, n, b)?;
                let mut rhs = self.derive(&ab)?;
                if n > 0 {
                    rhs = rhs.add_scaled(&self.circ(a, n - 1, b)?, &CRat::from_int(n as i64));
                }
                expect_equal(|| format!("a∘_n ∂b n={n} a={a} b={b}"), &lhs, &rhs)?;
                checks += 3;

                for k in 0..=s.n_max {
                    let bc = self.circ(b, k, c)?;
                    let ac = self.circ(a, n, c)?;
                    let lhs = &self.circ(a, n, &bc)? - &self.circ(b, k, &ac)?;
                    let mut rhs = Element::zero();
                    for j in 0..=n {
                        let abj = self.circ(a, j, b)?;
                        let term = self.circ(&abj, n + k - j, c)?;
                        rhs = rhs.add_scaled(&term, &CRat::from_rat(binomial(n as i64, j)));
                    }
                    expect_equal(|| format!("commutator m={n} k={k} a={a} b={b} c={c}"), &lhs, &rhs)?;
                    checks += 1;
                }
            }

            for x in [a, b, c] {
                let via_l = self.derive_via_virasoro(x)?;
                expect_equal(|| format!("∂ = L∘_0 on {x}"), &self.derive(x)?, &via_l)?;
            }
            let ab = self.nop(a, b)?;
            let lhs = self.derive(&ab)?;
            let (da, db) = (self.derive(a)?, self.derive(b)?);
            let rhs = &self.nop(&da, b)? + &self.nop(a, &db)?;
            expect_equal(|| format!("Leibniz a={a} b={b}"), &lhs, &rhs)?;

            let lhs = &ab - &self.nop(b, a)?;
            let mut acc = Element::zero();
            for j in (0..=top as u32).rev() {
                let abj = self.circ(a, j, b)?;
                let k = sign(j as i64) / BigRat::from_integer(factorial(j + 1));
                acc = self.derive(&acc)?.add_scaled(&abj, &CRat::from_rat(k));
            }
            let rhs = self.derive(&acc)?;
            expect_equal(|| format!("quasi-commutativity a={a} b={b}"), &lhs, &rhs)?;
            checks += 5;
        }
        Ok(AxiomReport { checks })
    }
}

impl Engine {
    /// Structural properties of the reduction on a pair of expressions:
    ///
    /// * `normal_form` is idempotent and commutes with `W ↦ -W`,
    /// * `a∘_n b` is homogeneous of weight `wt a + wt b - n - 1` when `a`, `b`
    ///   are homogeneous,
    /// * `a∘_n b` and `:ab:` have at most as many `W`s as `a` and `b` together,
    /// * the axioms of [`Engine::check_axioms`] on `(a, b, W)`.
    pub fn check_properties(&mut self, a: &ExprTree, b: &ExprTree, n_max: u32) -> Result<AxiomReport, EngineError> {
        let mut checks = 0;
        let (x, y) = (self.normal_form(a)?, self.normal_form(b)?);
        for (t, e) in [(a, &x), (b, &y)] {
            let again = self.normal_form(&ExprTree::from_element(e))?;
            expect_equal(|| format!("idempotence on {e}"), &again, e)?;
            let flipped = self.normal_form(&t.theta())?;
            expect_equal(|| format!("θ-equivariance on {e}"), &flipped, &flip_w(e))?;
            checks += 2;
        }
        let bound = x.filtration_degree() + y.filtration_degree();
        let mut products = vec![("nop".to_string(), self.nop(&x, &y)?)];
        for n in 0..=n_max {
            let p = self.circ(&x, n, &y)?;
            if let (Some(wa), Some(wb)) = (x.weight(), y.weight()) {
                let want = (wa + wb) as i64 - n as i64 - 1;
                if let Some((m, _)) = p.terms().find(|(m, _)| m.weight() as i64 != want) {
                    return Err(EngineError::AxiomViolation {
                        identity: format!("grading of a∘_{n}b for a={x} b={y}"),
                        residue: format!("term {m} has weight {}, expected {want}", m.weight()),
                    });
                }
                checks += 1;
            }
            products.push((format!("∘_{n}"), p));
        }
        for (name, p) in products {
            if p.filtration_degree() > bound {
                return Err(EngineError::AxiomViolation {
                    identity: format!("filtration of a{name}b for a={x} b={y}"),
                    residue: format!("degree {} exceeds {bound}", p.filtration_degree()),
                });
            }
            checks += 1;
        }
        let r = self.check_axioms(&[AxiomSample { a: x, b: y, c: Element::generator(Generator::W), n_max }])?;
        Ok(AxiomReport { checks: checks + r.checks })
    }
}

/// `W ↦ -W` on an element: odd powers of `W` change sign.
fn flip_w(e: &Element) -> Element {
    e.terms().fold(Element::zero(), |acc, (m, k)| {
        let k = if m.w_count() % 2 == 1 { -k } else { k.clone() };
        &acc + &Element::term(m.clone(), k).expect("normal monomial")
    })
}

impl AxiomSample {
    /// The generator pairs of the OPE table, each with `n` up to its pole order.
    pub fn generators() -> Vec<AxiomSample> {
        use Generator::{L, W};
        let g = Element::generator;
        vec![
            AxiomSample { a: g(L), b: g(L), c: g(W), n_max: 3 },
            AxiomSample { a: g(L), b: g(W), c: g(W), n_max: 4 },
            AxiomSample { a: g(W), b: g(L), c: g(L), n_max: 4 },
            AxiomSample { a: g(W), b: g(W), c: g(W), n_max: 5 },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ope::Preset;

    #[test]
    fn generators_satisfy_the_axioms() {
        for preset in [Preset::Generic, Preset::CMinus22Over5] {
            let mut e = Engine::with_max_weight(preset, 30);
            let r = e.check_axioms(&AxiomSample::generators()).unwrap();
            assert!(r.checks > 50);
        }
    }

    #[test]
    fn a_wrong_table_is_caught() {
        // W∘_0 L = ∂W instead of 2∂W breaks skew-symmetry with L∘_0 W, L∘_1 W.
        let mut e = Engine::with_max_weight(Preset::Generic, 30);
        let w = Element::generator(Generator::W);
        let l = Element::generator(Generator::L);
        let bad = &e.circ(&w, 0, &l).unwrap() - &e.derive(&w).unwrap();
        let good = e.circ(&w, 0, &l).unwrap();
        assert_ne!(bad, good);
        let r = expect_equal(|| "probe".into(), &bad, &good);
        assert!(matches!(r, Err(EngineError::AxiomViolation { .. })));
    }
}

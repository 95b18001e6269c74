//! The W3 operator product expansions `A ∘_n B` for the two generators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{Element, Factor, Generator, Monomial};
use crate::scalar::{rat, CPoly, CRat};

use Generator::{L, W};

/// Which OPE table the engine runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Symbolic central charge, `W ∘_5 W = c/3`.
    Generic,
    /// `c = -22/5` with `W` rescaled by `√(22+5c)`; `W` is then null-normed
    /// and `W ∘_n W` has only second- and first-order poles.
    CMinus22Over5,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Generic => "generic",
            Preset::CMinus22Over5 => "c22over5",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "generic" => Ok(Preset::Generic),
            "c22over5" => Ok(Preset::CMinus22Over5),
            other => Err(format!("unknown preset `{other}` (expected generic or c22over5)")),
        }
    }
}

/// `A ∘_n B` for generators `A`, `B` and `n ≥ 0`; missing entries are zero.
#[derive(Debug, Clone)]
pub struct OpeTable {
    preset: Preset,
    entries: BTreeMap<(Generator, Generator, u32), Element>,
}

fn mono(fs: &[(Generator, u32)]) -> Monomial {
    Monomial::new(fs.iter().map(|&(g, d)| Factor::new(g, d)).collect())
}

fn elem(terms: Vec<(Monomial, CRat)>) -> Element {
    let mut e = Element::zero();
    for (m, k) in terms {
        e = &e + &Element::term(m, k).expect("table monomials are PBW");
    }
    e
}

impl OpeTable {
    pub fn new(preset: Preset) -> Self {
        let c = CRat::c();
        let mut entries = BTreeMap::new();
        match preset {
            Preset::Generic => {
                entries.insert((L, L, 3), elem(vec![(Monomial::vacuum(), c.scale(&rat(1, 2)))]));
            }
            Preset::CMinus22Over5 => {
                entries.insert((L, L, 3), elem(vec![(Monomial::vacuum(), CRat::from_rat(rat(-11, 5)))]));
            }
        }
        entries.insert((L, L, 1), elem(vec![(mono(&[(L, 0)]), CRat::from_int(2))]));
        entries.insert((L, L, 0), elem(vec![(mono(&[(L, 1)]), CRat::one())]));
        entries.insert((L, W, 1), elem(vec![(mono(&[(W, 0)]), CRat::from_int(3))]));
        entries.insert((L, W, 0), elem(vec![(mono(&[(W, 1)]), CRat::one())]));
        // From skew-symmetry; check_axioms re-derives them.
        entries.insert((W, L, 1), elem(vec![(mono(&[(W, 0)]), CRat::from_int(3))]));
        entries.insert((W, L, 0), elem(vec![(mono(&[(W, 1)]), CRat::from_int(2))]));
        match preset {
            Preset::Generic => {
                let d = CRat::from_poly(CPoly::linear(22, 5));
                let inv_d = d.recip().expect("22+5c is nonzero");
                let c_minus_2 = CRat::from_poly(CPoly::linear(-2, 1));
                entries.insert((W, W, 5), elem(vec![(Monomial::vacuum(), c.scale(&rat(1, 3)))]));
                entries.insert((W, W, 3), elem(vec![(mono(&[(L, 0)]), CRat::from_int(2))]));
                entries.insert((W, W, 2), elem(vec![(mono(&[(L, 1)]), CRat::one())]));
                entries.insert(
                    (W, W, 1),
                    elem(vec![
                        (mono(&[(L, 0), (L, 0)]), inv_d.scale(&rat(32, 1))),
                        (mono(&[(L, 2)]), (&c_minus_2 * &inv_d).scale(&rat(3, 2))),
                    ]),
                );
                entries.insert(
                    (W, W, 0),
                    elem(vec![
                        (mono(&[(L, 1), (L, 0)]), inv_d.scale(&rat(32, 1))),
                        (mono(&[(L, 3)]), (&c_minus_2 * &inv_d).scale(&rat(1, 3))),
                    ]),
                );
            }
            Preset::CMinus22Over5 => {
                entries.insert(
                    (W, W, 1),
                    elem(vec![
                        (mono(&[(L, 0), (L, 0)]), CRat::from_int(32)),
                        (mono(&[(L, 2)]), CRat::from_rat(rat(-48, 5))),
                    ]),
                );
                entries.insert(
                    (W, W, 0),
                    elem(vec![
                        (mono(&[(L, 1), (L, 0)]), CRat::from_int(32)),
                        (mono(&[(L, 3)]), CRat::from_rat(rat(-32, 15))),
                    ]),
                );
            }
        }
        OpeTable { preset, entries }
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    /// `a ∘_n b`; zero beyond the pole order.
    pub fn entry(&self, a: Generator, b: Generator, n: u32) -> Element {
        self.entries.get(&(a, b, n)).cloned().unwrap_or_default()
    }

    /// Highest `n` with a possibly nonzero product, i.e. `wt a + wt b - 1`.
    pub fn max_order(a: Generator, b: Generator) -> u32 {
        a.weight() + b.weight() - 1
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Generator, Generator, u32), &Element)> {
        self.entries.iter()
    }
}

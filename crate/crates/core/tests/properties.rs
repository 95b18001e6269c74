//! Randomized, seeded invariants of the reduction engine up to weight 16.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use w3orb::algebra::{ExprTree, Generator};
use w3orb::ope::{Engine, Preset};
use w3orb::orbifold::c_invariant;
use w3orb::scalar::{CPoly, CRat};
use w3orb::syntax::{parse_expr, print_element, print_tree};

thread_local! {
    // One engine for all cases, so its product cache is shared.
    static ENGINE: std::cell::RefCell<Engine> = std::cell::RefCell::new(Engine::new(Preset::Generic));
}

fn with_engine<T>(f: impl FnOnce(&mut Engine) -> T) -> T {
    ENGINE.with(|e| f(&mut e.borrow_mut()))
}

fn config() -> Config {
    Config { cases: 128, rng_seed: RngSeed::Fixed(0x5eed_0003), failure_persistence: None, ..Config::default() }
}

/// A word of `(is_w, derivative)` factors padded to exactly `weight`.
fn word(raw: &[(bool, u32)], weight: u32, max_w: usize) -> ExprTree {
    let mut items: Vec<(Generator, u32)> = Vec::new();
    let mut left = weight;
    let mut ws = 0;
    for &(is_w, d) in raw {
        let g = if is_w && ws < max_w { Generator::W } else { Generator::L };
        let w = g.weight() + d;
        // Keep room for at least one more L unless this fills the word.
        if w == left || w + 2 <= left {
            items.push((g, d));
            left -= w;
            ws += usize::from(g == Generator::W);
        }
    }
    if left > 0 {
        match items.first_mut() {
            Some((_, d)) => *d += left,
            None if left >= 2 => items.push((Generator::L, left - 2)),
            None => items.push((Generator::L, 0)),
        }
    }
    ExprTree::nop_chain(items.into_iter().map(|(g, d)| ExprTree::derive(d, ExprTree::atom(g))).collect())
}

/// `Σ (p + q c) · word` of one weight.
fn element(weight: u32, max_w: usize) -> impl Strategy<Value = ExprTree> {
    let term = (prop::collection::vec((any::<bool>(), 0u32..3), 1..5), -6i64..=6, -3i64..=3);
    prop::collection::vec(term, 1..4).prop_map(move |terms| {
        ExprTree::Sum(
            terms
                .into_iter()
                .map(|(raw, p, q)| {
                    let k = CRat::from_poly(CPoly::from_ints(&[if p == 0 && q == 0 { 1 } else { p }, q]));
                    ExprTree::scale(k, word(&raw, weight, max_w))
                })
                .collect(),
        )
    })
}

/// Two homogeneous elements with weights adding up to at most 16.
fn pair() -> impl Strategy<Value = (ExprTree, ExprTree)> {
    (2u32..=12).prop_flat_map(|wa| (element(wa, 3), (2u32..=(16 - wa).max(2)).prop_flat_map(|wb| element(wb, 2))))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn engine_properties((a, b) in pair()) {
        let r = with_engine(|e| e.check_properties(&a, &b, 1));
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn c_invariant_kills_total_derivatives(n in (0u32..=10).prop_map(|k| 2 * (k / 2)), seed in any::<u64>()) {
        // A homogeneous element of weight n+5 with at most two W factors.
        let raw: Vec<(bool, u32)> = (0..4).map(|k| ((seed >> k) & 1 == 1, ((seed >> (4 + 2 * k)) & 3) as u32)).collect();
        let t = ExprTree::Sum(vec![word(&raw, n + 5, 2), word(&raw[1..], n + 5, 2)]);
        let x = with_engine(|e| e.normal_form(&ExprTree::derive(1, t))).unwrap();
        prop_assert!(c_invariant(&x, n).unwrap().is_zero());
    }

    #[test]
    fn printing_round_trips(t in (2u32..=16).prop_flat_map(|w| element(w, 4))) {
        with_engine(|e| -> Result<(), TestCaseError> {
            let x = e.normal_form(&t).unwrap();
            let back = e.normal_form(&parse_expr(&print_element(&x)).unwrap()).unwrap();
            prop_assert_eq!(&back, &x);
            let tree = e.normal_form(&parse_expr(&print_tree(&t)).unwrap()).unwrap();
            prop_assert_eq!(&tree, &x);
            Ok(())
        })?;
    }

    #[test]
    fn wick_nesting_is_immaterial_after_reduction((a, b) in pair()) {
        // :a(:bb:): built by the engine against the same product read from text.
        with_engine(|e| -> Result<(), TestCaseError> {
            let (wa, wb) = (e.normal_form(&a).unwrap().max_weight(), e.normal_form(&b).unwrap().max_weight());
            prop_assume!(wa + 2 * wb <= 24);
            let nested = ExprTree::nop(a.clone(), ExprTree::nop(b.clone(), b.clone()));
            let text = format!("no({}, {}, {})", print_tree(&a), print_tree(&b), print_tree(&b));
            prop_assert_eq!(e.normal_form(&nested).unwrap(), e.normal_form(&parse_expr(&text).unwrap()).unwrap());
            Ok(())
        })?;
    }
}

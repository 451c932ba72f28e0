mod common;

use std::collections::BTreeSet;

use buchi_core::gen::{random_gba, weak_random};
use buchi_core::product::{pair_state, parse_guard};
use buchi_core::{
    ascc_check, is_weak, materialize, oracle_emptiness, product_provider, validate_lasso, AutomatonProvider,
    ExplicitGba, GuardExpr, KripkeStructure, LabeledGba,
};
use common::{config, eager_product, product_edges};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ATOMS: [&str; 4] = ["p", "q", "r", "s"];

fn guard_strategy() -> impl Strategy<Value = GuardExpr> {
    let leaf = prop_oneof![
        Just(GuardExpr::True),
        Just(GuardExpr::False),
        (0..ATOMS.len()).prop_map(|i| GuardExpr::atom(ATOMS[i])),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(GuardExpr::negate),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| GuardExpr::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| GuardExpr::or(l, r)),
        ]
    })
}

fn random_guard(rng: &mut ChaCha8Rng, depth: u32) -> GuardExpr {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..6) {
            0 => GuardExpr::True,
            1 => GuardExpr::False,
            i => GuardExpr::atom(ATOMS[i - 2]),
        };
    }
    match rng.random_range(0..3) {
        0 => GuardExpr::negate(random_guard(rng, depth - 1)),
        1 => GuardExpr::and(random_guard(rng, depth - 1), random_guard(rng, depth - 1)),
        _ => GuardExpr::or(random_guard(rng, depth - 1), random_guard(rng, depth - 1)),
    }
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> KripkeStructure {
    let mut m = KripkeStructure::new(n);
    for s in 0..n {
        for _ in 0..rng.random_range(1..=3) {
            m.add_edge(s, rng.random_range(0..n));
        }
        for a in &ATOMS[..3] {
            if rng.random_bool(0.5) {
                m.add_label(s, a);
            }
        }
    }
    m
}

fn with_guards(rng: &mut ChaCha8Rng, g: ExplicitGba) -> LabeledGba {
    let guards = (0..g.n())
        .map(|s| g.succ(s).iter().map(|_| random_guard(rng, 2)).collect())
        .collect();
    LabeledGba::from_parts(g, guards).unwrap()
}

fn random_instance(seed: u64) -> (KripkeStructure, LabeledGba) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=15);
    let m = random_system(&mut rng, n);
    let g = random_gba(&config(rng.random_range(1..=5), 1.5, rng.random_range(0..=2), 0.4, seed)).unwrap();
    let a = with_guards(&mut rng, g);
    (m, a)
}

fn truth_table_agrees(e: &GuardExpr) -> bool {
    let reparsed = parse_guard(&e.to_string()).unwrap();
    (0u32..16).all(|mask| {
        let props: BTreeSet<String> =
            ATOMS.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.to_string()).collect();
        e.eval(&props) == reparsed.eval(&props)
    })
}

#[test]
fn one_state_guard_examples() {
    let m = KripkeStructure::parse("kripke 1\ninit 0\nlabel 0 p\nedge 0 0").unwrap();
    let a = LabeledGba::parse("gba 1 1\ninit 0\nacc 0 1\nedge 0 0 p").unwrap();
    let o = ascc_check(&mut product_provider(&m, &a)).unwrap();
    assert!(!o.verdict.is_empty());
    assert!(validate_lasso(&mut product_provider(&m, &a), &o.verdict));

    let a = LabeledGba::parse("gba 1 1\ninit 0\nacc 0 1\nedge 0 0 !p").unwrap();
    assert!(ascc_check(&mut product_provider(&m, &a)).unwrap().verdict.is_empty());
}

#[test]
fn guard_truth_tables_survive_printing() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let e = random_guard(&mut rng, 5);
        assert!(truth_table_agrees(&e), "{e}");
    }
}

#[test]
fn lazy_product_equals_eager_product() {
    for seed in 0..200 {
        let (m, a) = random_instance(seed);
        let (g, descriptors) = materialize(&mut product_provider(&m, &a), usize::MAX).unwrap();
        assert_eq!(product_edges(&g, &descriptors), eager_product(&m, &a), "seed {seed}");
        let states: BTreeSet<_> = descriptors.iter().map(|d| pair_state(d).unwrap()).collect();
        assert!(states.contains(&(m.init(), a.init())));
    }
}

#[test]
fn labels_are_read_lazily() {
    for seed in 0..200 {
        let (m, a) = random_instance(seed);
        let mut p = product_provider(&m, &a);
        let o = ascc_check(&mut p).unwrap();
        assert!(p.labels_read() <= p.pairs_examined());
        let expanded = o.metrics.post_calls as usize;
        assert!(p.labels_read() <= expanded * m.n());
        for u in 0..m.n() {
            if p.has_read_labels(u) {
                assert!((0..m.n()).any(|v| m.succ(v).contains(&u)), "seed {seed}: state {u} read without a predecessor");
            }
        }
    }
    let m = KripkeStructure::parse("kripke 3\ninit 0\nedge 0 0\nedge 1 2\nedge 2 1\nlabel 2 p").unwrap();
    let a = LabeledGba::parse("gba 1 1\ninit 0\nacc 0 1\nedge 0 0").unwrap();
    let mut p = product_provider(&m, &a);
    assert!(!ascc_check(&mut p).unwrap().verdict.is_empty());
    assert!(!p.has_read_labels(1) && !p.has_read_labels(2));
}

#[test]
fn weakness_transfers_to_products() {
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        let n = rng.random_range(1..=12);
    let m = random_system(&mut rng, n);
        let g = weak_random(&config(rng.random_range(1..=6), 1.5, 1, 0.4, seed)).unwrap();
        assert!(is_weak(&g).unwrap());
        let a = with_guards(&mut rng, g);
        let (prod, _) = materialize(&mut product_provider(&m, &a), usize::MAX).unwrap();
        assert!(is_weak(&prod).unwrap(), "seed {seed}");
    }
}

#[test]
fn product_emptiness_matches_oracle() {
    for seed in 0..300 {
        let (m, a) = random_instance(seed);
        let mut p = product_provider(&m, &a);
        assert_eq!(p.conditions(), a.k());
        let (g, _) = materialize(&mut p, usize::MAX).unwrap();
        let truth = oracle_emptiness(&g).is_empty();
        let o = ascc_check(&mut product_provider(&m, &a)).unwrap();
        assert_eq!(o.verdict.is_empty(), truth, "seed {seed}");
        if !truth {
            assert!(validate_lasso(&mut product_provider(&m, &a), &o.verdict));
        }
    }
}

#[test]
fn text_formats_round_trip() {
    for seed in 0..50 {
        let (m, a) = random_instance(seed);
        let m2 = KripkeStructure::parse(&m.to_text()).unwrap();
        let a2 = LabeledGba::parse(&a.to_text()).unwrap();
        assert_eq!(eager_product(&m, &a), eager_product(&m2, &a2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn guard_printing_round_trips(e in guard_strategy()) {
        let text = e.to_string();
        let back = parse_guard(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert!(truth_table_agrees(&e));
    }
}

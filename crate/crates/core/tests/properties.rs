mod common;

use causal_core::hilbert::LabeledOperator;
use proptest::prelude::*;

const WIRES: [&str; 5] = ["X", "Y", "Z", "W", "V"];

/// A random operator on a random nonempty subset of the wires, in a random order.
fn operator() -> impl Strategy<Value = LabeledOperator> {
    (any::<u64>(), proptest::sample::subsequence(WIRES.to_vec(), 1..=3), any::<bool>()).prop_map(|(seed, mut w, rev)| {
        if rev {
            w.reverse();
        }
        common::rand_op(&mut common::rng(seed), &w)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn link_is_commutative(a in operator(), b in operator()) {
        let ab = a.link(&b).unwrap();
        let ba = b.link(&a).unwrap();
        prop_assert!(ab.max_abs_diff(&ba).unwrap() < 1e-10);
    }

    #[test]
    fn link_is_associative_on_chains(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::rand_op(&mut r, &["X", "Y"]);
        let b = common::rand_op(&mut r, &["Y", "Z"]);
        let c = common::rand_op(&mut r, &["Z", "W"]);
        let left = a.link(&b).unwrap().link(&c).unwrap();
        let right = a.link(&b.link(&c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-10);
    }

    #[test]
    fn partial_trace_ignores_wire_order(a in operator()) {
        let names: Vec<String> = a.names().iter().map(|s| s.to_string()).collect();
        let mut order: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        order.reverse();
        let p = a.permute_spaces(&order).unwrap();
        let first = [order[0]];
        let d = a.partial_trace(&first).unwrap().max_abs_diff(&p.partial_trace(&first).unwrap()).unwrap();
        prop_assert!(d < 1e-12);
        prop_assert!((a.trace() - p.trace()).norm() < 1e-12);
    }
}

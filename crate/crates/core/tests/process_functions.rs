use causal_core::process_functions::*;
use causal_core::Error;

fn parse_ells(s: &str) -> Vec<Ell> {
    s.chars()
        .map(|c| match c {
            '0' => Ell::Zero,
            '1' => Ell::One,
            '+' => Ell::Plus,
            '-' | '−' => Ell::Minus,
            _ => panic!("bad symbol {c}"),
        })
        .collect()
}

pub const AGB_SET: [&str; 16] = [
    "0000", "0101", "0111", "01+0", "01−0", "001+", "001−", "1010", "1011", "1101", "1110", "1111",
    "1+00", "1−00", "+001", "−001",
];
pub const AS_SET: [&str; 16] = [
    "0000", "0+01", "+01+", "001−", "01+0", "+−01", "01−0", "0111", "1+0+", "1++−", "−01+", "1+−−",
    "1−00", "−−01", "111+", "1−1−",
];
pub const TC_SET: [&str; 16] = [
    "0000", "00+1", "0+10", "00−1", "0100", "0111", "100+", "100−", "1+10", "1+11", "1100", "1−11",
    "+101", "+−10", "−101", "−−10",
];

fn basis_labels(w: &BooleanProcessFunction) -> Vec<String> {
    let mut v: Vec<String> = nlwe_basis(w).unwrap().states.iter().map(|s| ell_string(&s.ells)).collect();
    v.sort();
    v
}

fn listed(set: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|s| ell_string(&parse_ells(s))).collect();
    v.sort();
    v
}

#[test]
fn lugano_evaluations() {
    let w = lugano();
    assert_eq!(w.evaluate(&[0, 0, 0]).unwrap(), vec![0, 0, 0]);
    assert_eq!(w.evaluate(&[0, 1, 0]).unwrap(), vec![0, 0, 1]);
    assert!(matches!(w.evaluate(&[0, 1]), Err(Error::LengthMismatch { .. })));
    // direct formula oracle on all words
    for a in all_words(3) {
        let (x, y, z) = (a[2] & (a[1] ^ 1), a[0] & (a[2] ^ 1), a[1] & (a[0] ^ 1));
        assert_eq!(w.evaluate(&a).unwrap(), vec![x, y, z]);
    }
}

#[test]
fn agb4_substitution() {
    assert_eq!(agb4().evaluate(&[0, 0, 0, 1]).unwrap(), vec![1, 0, 0, 0]);
}

#[test]
fn inputs_never_read_own_output() {
    for name in ["lugano", "agb4", "ardehali_svetlichny4", "tobar_costa4"] {
        let w = builtin(name).unwrap();
        let n = w.n_parties();
        for a in all_words(n) {
            for i in 0..n {
                let mut b = a.clone();
                b[i] ^= 1;
                assert_eq!(w.evaluate(&a).unwrap()[i], w.evaluate(&b).unwrap()[i]);
            }
        }
    }
}

#[test]
fn fixed_point_and_global_past_checks() {
    for name in ["lugano", "agb4", "ardehali_svetlichny4", "tobar_costa4"] {
        let w = builtin(name).unwrap();
        assert!(w.check_unique_fixed_point(), "{name}");
        assert!(w.check_no_global_past(), "{name}");
    }
    assert!(!bipartite_loop().check_unique_fixed_point());
    assert!(constant(3).check_unique_fixed_point());
    assert!(!constant(3).check_no_global_past());
    assert!(matches!(nlwe_basis(&constant(3)), Err(Error::HasGlobalPast(0))));
}

#[test]
fn transparency_classification() {
    assert_eq!(lugano().transparent_parties(), vec![0, 1, 2]);
    assert_eq!(agb4().transparent_parties(), vec![0, 1, 2, 3]);
    assert_eq!(ardehali_svetlichny4().transparent_parties(), vec![0, 2]);
    assert_eq!(tobar_costa4().transparent_parties(), vec![0, 2, 3]);
}

#[test]
fn nlwe_bases_match_listed_sets() {
    let mut shift = vec!["000", "+01", "01+", "01−", "1+0", "−01", "1−0", "111"]
        .into_iter()
        .map(|s| ell_string(&parse_ells(s)))
        .collect::<Vec<_>>();
    shift.sort();
    assert_eq!(basis_labels(&lugano()), shift);
    assert_eq!(basis_labels(&agb4()), listed(&AGB_SET));
    assert_eq!(basis_labels(&ardehali_svetlichny4()), listed(&AS_SET));
    assert_eq!(basis_labels(&tobar_costa4()), listed(&TC_SET));
}

#[test]
fn nlwe_bases_are_orthonormal() {
    for name in ["lugano", "agb4", "ardehali_svetlichny4", "tobar_costa4"] {
        let b = nlwe_basis(&builtin(name).unwrap()).unwrap();
        assert_eq!(b.states.len(), 1 << b.wires.len());
        for (i, s) in b.states.iter().enumerate() {
            for (j, t) in b.states.iter().enumerate() {
                let ip = s.ket.inner(&t.ket).unwrap();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((ip.norm() - e).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn lugano_game_bounds() {
    assert_eq!(causal_bound_lugano_game(&lugano()).unwrap().value, Rational::new(3, 4));
    assert_eq!(causal_bound_lugano_game(&constant(3)).unwrap().value, Rational::from_integer(1));
    let agb = causal_bound_lugano_game(&agb4()).unwrap();
    assert!(agb.value < Rational::from_integer(1));
    assert!(agb.tree.is_complete(4));
    assert_eq!(lugano_game_value_of_tree(&agb4(), &agb.tree), agb.value);
}

#[test]
fn discrimination_bounds() {
    let b = causal_bound_discrimination(&lugano()).unwrap();
    assert_eq!(b.value, Rational::new(7, 8));
    assert_eq!(discrimination_value_of_tree(&lugano(), &b.tree), b.value);
    // all settings zero: the two computational SHIFT states are always found,
    // each of the six others with probability 1/2
    let zero = StrategyTree::all_zero(3);
    assert_eq!(discrimination_value_of_tree(&lugano(), &zero), Rational::new(5, 8));
    assert_eq!(causal_bound_discrimination(&constant(3)).unwrap().value, Rational::from_integer(1));
}

#[test]
fn dynamic_program_agrees_with_explicit_enumeration() {
    let trees = enumerate_strategy_trees(3);
    assert_eq!(trees.len(), 1536);
    assert!(trees.iter().all(|t| t.is_complete(3)));
    for w in [lugano(), constant(3)] {
        let game = trees.iter().map(|t| lugano_game_value_of_tree(&w, t)).max().unwrap();
        assert_eq!(game, causal_bound_lugano_game(&w).unwrap().value);
        let disc = trees.iter().map(|t| discrimination_value_of_tree(&w, t)).max().unwrap();
        assert_eq!(disc, causal_bound_discrimination(&w).unwrap().value);
    }
    // the game value equals 1 iff some tree wins on all words
    let w = lugano();
    let perfect = trees.iter().any(|t| all_words(3).all(|a| t.inputs_for(&a) == w.evaluate(&a).unwrap()));
    assert!(!perfect);
}

#[test]
fn bounds_reject_large_party_counts() {
    let big = BooleanProcessFunction::from_rule("big", 5, |_, _| 0).unwrap();
    assert!(matches!(causal_bound_lugano_game(&big), Err(Error::TooManyParties { .. })));
}

use causal_core::hilbert::*;
use causal_core::process_functions::*;
use causal_core::process_matrices::*;
use causal_core::Error;
use num_complex::Complex64 as C64;

fn four_partite() -> Vec<BooleanProcessFunction> {
    vec![agb4(), ardehali_svetlichny4(), tobar_costa4()]
}

fn names(v: &[String]) -> Vec<&str> {
    v.iter().map(|s| s.as_str()).collect()
}

#[test]
fn diagonal_lugano_process() {
    let w = from_process_function(&lugano()).unwrap();
    let op = w.operator().unwrap();
    assert_eq!(op.side(), 64);
    assert_eq!(w.trace(), 8.0);
    assert_eq!(w.expected_trace(), 8.0);
    let m = op.matrix();
    let mut ones = 0;
    for i in 0..64usize {
        for j in 0..64usize {
            let v = m[(i, j)];
            if i != j {
                assert_eq!(v, C64::new(0.0, 0.0));
                continue;
            }
            // index bits: a,b,c then x,y,z
            let a = word_from_index(i >> 3, 3);
            let x = word_from_index(i & 7, 3);
            let expect = if lugano().evaluate(&a).unwrap() == x { 1.0 } else { 0.0 };
            assert_eq!(v.re, expect);
            ones += expect as usize;
        }
    }
    assert_eq!(ones, 8);
}

#[test]
fn diagonal_constant_process() {
    let w = from_process_function(&constant(3)).unwrap().operator().unwrap();
    let outs = LabeledOperator::identity(qubits(&["A_O^1", "A_O^2", "A_O^3"])).unwrap();
    let ins = LabeledOperator::projector(&LabeledKet::basis(&["A_I^1", "A_I^2", "A_I^3"], &[0, 0, 0]).unwrap()).unwrap();
    assert_eq!(w.max_abs_diff(&outs.tensor(&ins).unwrap()).unwrap(), 0.0);
    assert!(matches!(from_process_function(&bipartite_loop()), Err(Error::InvalidProcessFunction(_))));
}

fn recover_from_purification(w: &BooleanProcessFunction) -> LabeledOperator {
    let n = w.n_parties();
    let rev = purify(w).unwrap();
    let p: Vec<String> = (0..n).map(past_wire).collect();
    let f: Vec<String> = (0..n).map(future_wire).collect();
    let zeros = LabeledKet::basis(&names(&p), &vec![0; n]).unwrap();
    rev.ket().unwrap().contract(&zeros).unwrap().reduced(&names(&f)).unwrap()
}

#[test]
fn purification_contracts_back_to_the_diagonal_process() {
    for w in std::iter::once(lugano()).chain(four_partite()) {
        let direct = from_process_function(&w).unwrap().operator().unwrap();
        let back = recover_from_purification(&w);
        assert!(back.max_abs_diff(&direct).unwrap() < 1e-12, "{}", w.name);
    }
}

#[test]
fn purification_of_lugano_via_dense_link() {
    // same identity through dense link products on the 12-wire projector
    let w = lugano();
    let rev = purify(&w).unwrap();
    assert!(rev.is_pure());
    let dense = rev.operator().unwrap();
    let zeros = LabeledOperator::projector(&LabeledKet::basis(&["P^1", "P^2", "P^3"], &[0, 0, 0]).unwrap()).unwrap();
    let ids = LabeledOperator::identity(qubits(&["F^1", "F^2", "F^3"])).unwrap();
    let back = zeros.link(&dense).unwrap().link(&ids).unwrap();
    let direct = from_process_function(&w).unwrap().operator().unwrap();
    assert!(back.max_abs_diff(&direct).unwrap() < 1e-12);
}

#[test]
fn constant_process_purification_vector() {
    let rev = purify(&constant(3)).unwrap();
    let k = rev.ket().unwrap();
    assert_eq!(k.norm_sqr(), 64.0);
    // Σ |i,j,k⟩^P |a,b,c⟩^F |i,a⟩|j,b⟩|k,c⟩
    for i in all_words(3) {
        for a in all_words(3) {
            let mut bits = i.clone();
            bits.extend(&a);
            for j in 0..3 {
                bits.push(i[j]);
                bits.push(a[j]);
            }
            assert_eq!(k.amplitudes()[index_of_word(&bits)], C64::new(1.0, 0.0));
        }
    }
}

#[test]
fn partial_purification_identities() {
    for w in std::iter::once(lugano()).chain(four_partite()) {
        let n = w.n_parties();
        let direct = from_process_function(&w).unwrap().operator().unwrap();
        for i in 0..n {
            let prev = partial_purify(&w, i).unwrap();
            let op = prev.operator().unwrap();
            assert_eq!(op.side(), 1 << (2 * n + 1));
            let fi = future_wire(i);
            assert!(op.partial_trace(&[&fi]).unwrap().max_abs_diff(&direct).unwrap() < 1e-12);
            assert!((prev.trace() - (1u64 << n) as f64).abs() < 1e-12);
            assert!(op.min_eigenvalue() > -1e-12);
        }
    }
}

/// Per-(a,b) branch vectors of the Lugano QC-QC, from the displayed formula.
fn lugano_qcqc_branches() -> Vec<LabeledKet> {
    let order = ["P", "F", "Ft", "A_I^1", "A_O^1", "A_I^2", "A_O^2"];
    let mut out = Vec::new();
    for a in 0..2u8 {
        for b in 0..2u8 {
            let z = b & (a ^ 1);
            // P F Ft A_I A_O B_I B_O
            let first = LabeledKet::basis(&order, &[0, 0, z, 0, a, a, b]).unwrap();
            let second = LabeledKet::basis(&order, &[1, 1, z, b ^ 1, a, 0, b]).unwrap();
            out.push(first.add(&second).unwrap());
        }
    }
    out
}

#[test]
fn lugano_qcqc_matches_branch_construction() {
    let q = to_qcqc(&lugano(), 2).unwrap();
    let op = q.operator().unwrap();
    let mut expect = LabeledOperator::zeros(op.spaces().to_vec()).unwrap();
    for v in lugano_qcqc_branches() {
        expect = expect.add(&LabeledOperator::projector(&v).unwrap()).unwrap();
    }
    assert!(op.max_abs_diff(&expect).unwrap() < 1e-12);
    assert!((q.trace() - 8.0).abs() < 1e-12);
    assert_eq!(op.rank(1e-9), 4);
}

#[test]
fn coherent_sum_over_outputs_is_a_different_operator() {
    // Summing the branch vectors coherently gives a rank-one operator with
    // coherences between different output values; tracing the other parties'
    // future wires removes them, so the link product is the incoherent sum.
    let mut coherent = LabeledKet::zeros(lugano_qcqc_branches()[0].spaces().to_vec()).unwrap();
    for v in lugano_qcqc_branches() {
        coherent = coherent.add(&v).unwrap();
    }
    let rank_one = LabeledOperator::projector(&coherent).unwrap();
    let q = to_qcqc(&lugano(), 2).unwrap().operator().unwrap();
    assert!(q.max_abs_diff(&rank_one).unwrap() > 0.5);
}

#[test]
fn qcqc_equals_four_block_form() {
    for w in std::iter::once(lugano()).chain(four_partite()) {
        for i in w.transparent_parties() {
            let linked = to_qcqc(&w, i).unwrap().operator().unwrap();
            let blocks = qcqc_block_form(&w, i).unwrap().operator().unwrap();
            assert!(linked.max_abs_diff(&blocks).unwrap() < 1e-12, "{} party {i}", w.name);
            assert!((linked.trace().re - (1u64 << w.n_parties()) as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn qcqc_requires_transparency() {
    assert_eq!(to_qcqc(&ardehali_svetlichny4(), 1), Err(Error::NotTransparent(1)));
    assert_eq!(to_qcqc(&tobar_costa4(), 1), Err(Error::NotTransparent(1)));
}

#[test]
fn switch_basic_properties() {
    let w = quantum_switch().unwrap();
    let op = w.operator().unwrap();
    assert_eq!(op.side(), 64);
    assert!((w.trace() - 8.0).abs() < 1e-12);
    assert!(op.min_eigenvalue() > -1e-12);
    assert!(op.rank(1e-9) <= 2);
    // P and F in |0⟩: the fixed order A before B with target |0⟩
    let zero = LabeledOperator::projector(&LabeledKet::basis(&["P", "F"], &[0, 0]).unwrap()).unwrap();
    let comb = zero.link(&op).unwrap();
    let id = choi_vector_of_unitary(&nalgebra::Matrix2::identity(), SpaceLabel::qubit("A_O^1"), SpaceLabel::qubit("A_I^2")).unwrap();
    let expect = LabeledOperator::projector(&LabeledKet::basis(&["A_I^1"], &[0]).unwrap())
        .unwrap()
        .tensor(&LabeledOperator::projector(&id).unwrap())
        .unwrap()
        .tensor(&LabeledOperator::identity(qubits(&["A_O^2"])).unwrap())
        .unwrap();
    assert!(comb.max_abs_diff(&expect).unwrap() < 1e-12);
}

#[test]
fn validation_of_constructed_processes() {
    let mut cases = vec![
        ("switch", quantum_switch().unwrap()),
        ("lugano_w", from_process_function(&lugano()).unwrap()),
        ("lugano_qcqc", to_qcqc(&lugano(), 2).unwrap()),
    ];
    for w in four_partite() {
        for i in w.transparent_parties() {
            cases.push(("qcqc", to_qcqc(&w, i).unwrap()));
        }
        cases.push(("diag", from_process_function(&w).unwrap()));
    }
    for (name, w) in cases {
        let r = validate_process(&w, 20, 7);
        assert!(r.passed(), "{name}: {r:?}");
        assert!(r.max_deviation < 1e-10);
    }
}

#[test]
fn validation_of_pure_purification() {
    let r = validate_process(&purify(&lugano()).unwrap(), 3, 1);
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.expected_trace, 64.0);
}

#[test]
fn white_noise_passes_and_is_reported_as_necessary_only() {
    let sw = quantum_switch().unwrap();
    let noise = LabeledOperator::identity(sw.spaces().to_vec()).unwrap().scale_real(1.0 / 8.0);
    let w = ProcessMatrix::from_dense(noise, sw.roles().clone()).unwrap();
    let r = validate_process(&w, 10, 3);
    assert!(r.trace_ok && r.probabilities_ok);
    assert!(r.note.contains("necessary"));
    // a non-normalized operator fails
    let bad = ProcessMatrix::from_dense(LabeledOperator::identity(sw.spaces().to_vec()).unwrap(), sw.roles().clone()).unwrap();
    assert!(!validate_process(&bad, 2, 3).passed());
}

#[test]
fn validation_is_deterministic_given_seed() {
    let w = quantum_switch().unwrap();
    let a = validate_process(&w, 5, 42);
    let b = validate_process(&w, 5, 42);
    assert_eq!(a.max_deviation.to_bits(), b.max_deviation.to_bits());
}

#[test]
fn process_json_round_trip() {
    let w = to_qcqc(&lugano(), 2).unwrap();
    let back = ProcessMatrix::from_json(&w.to_json().unwrap()).unwrap();
    assert_eq!(back.operator().unwrap(), w.operator().unwrap());
    assert_eq!(back.roles(), w.roles());
}

#[test]
fn builtin_names_resolve() {
    assert!(builtin_process("switch").is_ok());
    assert!(builtin_process("lugano_w").is_ok());
    assert!(builtin_process("lugano_qcqc").is_ok());
    assert!(builtin_process("qcqc(tobar_costa4,D)").is_ok());
    assert_eq!(builtin_process("qcqc(tobar_costa4,B)").unwrap_err(), Error::NotTransparent(1));
    assert!(builtin_process("nope").is_err());
}

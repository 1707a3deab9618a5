mod common;

use causal_core::hilbert::{LabeledKet, LabeledOperator};
use causal_core::measurements::*;
use causal_core::process_functions::{
    agb4, ardehali_svetlichny4, aux_wire, constant, lugano, nlwe_basis, tobar_costa4, Ell,
    AUX_PAST,
};
use causal_core::process_matrices::{from_process_function, quantum_switch, to_qcqc};
use causal_core::Error;

const TOL: f64 = 1e-12;

fn hadamards(n: usize) -> Vec<ProjectiveFamily> {
    vec![ProjectiveFamily::hadamard(); n]
}

/// The SHIFT projectors relabeled into the (f, a, b) convention with Charlie as Phil.
fn shift_as_pab() -> Dpovm {
    projective_dpovm(&shift_basis().unwrap())
        .unwrap()
        .relabeled(&Relabeling::party_to_past(3, 2))
        .unwrap()
}

#[test]
fn families_are_projective() {
    assert!(ProjectiveFamily::hadamard().deviation() < TOL);
    assert!(ProjectiveFamily::computational().deviation() < TOL);
    assert!(ProjectiveFamily::from_angles([0.3, -1.1]).deviation() < TOL);
}

#[test]
fn shift_basis_is_orthonormal_and_matches_lugano_nlwe() {
    let e = shift_basis().unwrap();
    assert_eq!(e.states.len(), 8);
    let (n, p) = e.normalization_defect();
    assert!(n < TOL && p < TOL);
    for (_, a, _) in &e.states {
        for (_, b, _) in &e.states {
            let g = a.inner(b).unwrap();
            let expect = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
            assert!((g.re - expect).abs() < TOL && g.im.abs() < TOL);
        }
    }
    let names: Vec<String> = (0..3).map(aux_wire).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    for bits in [[0u8, 0, 0], [1, 1, 1]] {
        let k = LabeledKet::basis(&refs, &bits).unwrap();
        assert!(e.states.iter().any(|(_, s, _)| (s.inner(&k).unwrap().norm() - 1.0).abs() < TOL));
    }
}

#[test]
fn lopf_lugano_gives_shift_projectors() {
    let d = lopf_measurement(&lugano(), &hadamards(3)).unwrap();
    let shift = projective_dpovm(&shift_basis().unwrap()).unwrap();
    assert!(d.max_deviation(&shift).unwrap() < TOL);
    assert!(d.completeness_check() < TOL);
    for (_, e) in &d.effects {
        assert_eq!(e.rank(1e-9), 1);
    }
}

#[test]
fn lopf_constant_is_computational() {
    let d = lopf_measurement(&constant(3), &vec![ProjectiveFamily::computational(); 3]).unwrap();
    let names: Vec<String> = (0..3).map(aux_wire).collect();
    assert!(d.max_deviation(&computational_dpovm(&names).unwrap()).unwrap() < TOL);
}

#[test]
fn lopf_four_party_matches_nlwe_bases() {
    for w in [agb4(), ardehali_svetlichny4(), tobar_costa4()] {
        let d = lopf_measurement(&w, &hadamards(4)).unwrap();
        let nl = projective_dpovm(&InputEnsemble::uniform(&nlwe_basis(&w).unwrap()).unwrap()).unwrap();
        assert!(d.max_deviation(&nl).unwrap() < TOL, "{}", w.name);
    }
}

#[test]
fn lopf_rejects_bad_input() {
    assert!(matches!(lopf_measurement(&lugano(), &hadamards(2)), Err(Error::LengthMismatch { .. })));
}

#[test]
fn instruments_are_complete() {
    for scenario in [Scenario::SwitchShift, Scenario::QcqcShift, Scenario::Ndi] {
        let set = standard_instruments(scenario).unwrap();
        for ag in &set.agents {
            for inst in ag.table.values() {
                assert!(inst.all_psd());
                assert!(inst.completeness_deviation().unwrap() < TOL, "{}", ag.name);
            }
        }
    }
    let f = fiona_reports_target().unwrap();
    assert_eq!(f.elements.len(), 4);
    let x = report_setting(0).unwrap();
    assert_eq!(x.elements.iter().map(|(w, _)| w.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
    assert!(matches!("bogus".parse::<Scenario>(), Err(Error::UnknownScenario(_))));
}

#[test]
fn shift_from_switch() {
    let d = effective_dpovm(&quantum_switch().unwrap(), &standard_instruments(Scenario::SwitchShift).unwrap()).unwrap();
    assert_eq!(d.wire_names(), vec![AUX_PAST, "Aux^1", "Aux^2"]);
    assert!(d.max_deviation(&shift_as_pab()).unwrap() < TOL);
    let e000 = LabeledOperator::projector(&LabeledKet::basis(&[AUX_PAST, "Aux^1", "Aux^2"], &[0, 0, 0]).unwrap()).unwrap();
    assert!(d.effect(&[0, 0, 0]).unwrap().max_abs_diff(&e000).unwrap() < TOL);
    // (f,a,b) = (1,0,1) gives |−01⟩
    let minus01 = causal_core::process_functions::product_ket(
        &[AUX_PAST.into(), "Aux^1".into(), "Aux^2".into()],
        &[Ell::Minus, Ell::Zero, Ell::One],
    )
    .unwrap();
    let p = LabeledOperator::projector(&minus01).unwrap();
    assert!(d.effect(&[1, 0, 1]).unwrap().max_abs_diff(&p).unwrap() < TOL);
}

#[test]
fn five_constructions_coincide() {
    let reference = shift_closed_form().unwrap();
    let lopf = lopf_measurement(&lugano(), &hadamards(3)).unwrap().relabeled(&Relabeling::party_to_past(3, 2)).unwrap();
    let switch = effective_dpovm(&quantum_switch().unwrap(), &standard_instruments(Scenario::SwitchShift).unwrap()).unwrap();
    let qcqc = effective_dpovm(&to_qcqc(&lugano(), 2).unwrap(), &standard_instruments(Scenario::QcqcShift).unwrap()).unwrap();
    let losup = losupcc_measurement(&lugano(), 2).unwrap();
    for d in [&lopf, &switch, &qcqc, &losup, &shift_as_pab()] {
        assert!(reference.max_deviation(d).unwrap() < TOL);
    }
}

#[test]
fn losupcc_matches_qcqc_and_nlwe_for_transparent_parties() {
    for w in [lugano(), agb4(), ardehali_svetlichny4(), tobar_costa4()] {
        let n = w.n_parties();
        let nl = projective_dpovm(&InputEnsemble::uniform(&nlwe_basis(&w).unwrap()).unwrap()).unwrap();
        for i in w.transparent_parties() {
            let l = losupcc_measurement(&w, i).unwrap();
            assert!(l.max_deviation(&nl.relabeled(&Relabeling::party_to_past(n, i)).unwrap()).unwrap() < TOL);
            if n == 4 && i != 0 {
                continue; // one four-party QC-QC per process keeps the run short
            }
            let q = effective_dpovm(&to_qcqc(&w, i).unwrap(), &qcqc_instruments(n, i).unwrap()).unwrap();
            assert!(l.max_deviation(&q).unwrap() < 1e-10, "{} party {i}", w.name);
        }
    }
    assert!(matches!(losupcc_measurement(&ardehali_svetlichny4(), 1), Err(Error::NotTransparent(1))));
    assert!(matches!(losupcc_measurement(&lugano(), 3), Err(Error::PartyOutOfRange { .. })));
}

#[test]
fn effective_dpovm_is_valid_for_lugano_matrix() {
    // diagonal process matrix of the Lugano function with measure-and-forward parties
    let w = from_process_function(&lugano()).unwrap();
    let set = InstrumentSet {
        agents: (0..3)
            .map(|j| Agent::fixed(format!("p{j}"), measure_and_forward(j, &ProjectiveFamily::hadamard()).unwrap()))
            .collect(),
        word_perm: None,
    };
    let d = effective_dpovm(&w, &set).unwrap();
    // the classical channel reproduces the LOPF measurement directly
    assert!(d.completeness_check() < 1e-10);
    let (min_ev, herm) = d.positivity();
    assert!(min_ev > -1e-10 && herm < 1e-10);
    assert!(d.max_deviation(&lopf_measurement(&lugano(), &hadamards(3)).unwrap()).unwrap() < TOL);
}

#[test]
fn wiring_errors() {
    let mut set = standard_instruments(Scenario::SwitchShift).unwrap();
    set.agents.pop();
    assert!(matches!(effective_dpovm(&quantum_switch().unwrap(), &set), Err(Error::WireMismatch(_))));
    let set = standard_instruments(Scenario::SwitchShift).unwrap();
    assert!(matches!(effective_dpovm(&to_qcqc(&lugano(), 2).unwrap(), &set), Err(Error::WireMismatch(_))));
}

#[test]
fn ndi_dpovm_from_qcqc() {
    let d = effective_dpovm(&to_qcqc(&lugano(), 2).unwrap(), &standard_instruments(Scenario::Ndi).unwrap()).unwrap();
    assert_eq!(d.effects.len(), 16);
    assert!(d.completeness_check() < 1e-10);
    let (min_ev, _) = d.positivity();
    assert!(min_ev > -1e-10);
}

#[test]
fn lugano_channel() {
    let w = lugano();
    for bits in causal_core::process_functions::all_words(3) {
        let out = lugano_channel_from_shift([bits[0], bits[1], bits[2]]).unwrap();
        let expect = w.evaluate(&bits).unwrap();
        assert_eq!(out.distribution.len(), 1);
        assert!((out.distribution[&expect] - 1.0).abs() < TOL, "{bits:?}");
    }
    let out = lugano_channel_from_shift([0, 1, 0]).unwrap();
    assert_eq!(out.ell_outcomes.len(), 2);
    for (ells, p) in &out.ell_outcomes {
        assert!((p - 0.5).abs() < TOL);
        assert_eq!(&ells[..2], &[Ell::Zero, Ell::One]);
    }
    assert!((out.distribution[&vec![0u8, 0, 1]] - 1.0).abs() < TOL);
}

#[test]
fn completeness_of_partial_set() {
    let d = shift_closed_form().unwrap();
    assert!(completeness_check(&d) < TOL);
    let single = Dpovm::new(d.wires.clone(), vec![d.effects[0].clone()]).unwrap();
    assert!((completeness_check(&single) - 1.0).abs() < TOL);
}

#[test]
fn born_probabilities_in_range() {
    let d = shift_closed_form().unwrap();
    let e = shift_basis().unwrap();
    let r = Relabeling::party_to_past(3, 2);
    for (_, k, _) in &e.states {
        let mut k = k.renamed(&aux_wire(2), AUX_PAST).unwrap();
        k = k.aligned_to(&d.wires).unwrap();
        for (_, eff) in &d.effects {
            let p = LabeledOperator::projector(&k).unwrap().mul(eff).unwrap().trace().re;
            assert!((-1e-10..=1.0 + 1e-10).contains(&p));
        }
    }
    assert_eq!(r.apply_word(&[1, 2, 3]), vec![3, 1, 2]);
}

#[test]
fn dpovm_json_round_trip() {
    let d = shift_closed_form().unwrap();
    let back = Dpovm::from_json(&d.to_json()).unwrap();
    assert_eq!(back, d);
    assert!(Dpovm::from_json("{\"wires\":[],\"effects\":[],\"extra\":1}").is_err());
}

//! Game values (causal inequalities, discrimination, NDI) and certification of
//! causal (non)separability of distributed measurements.

pub mod conic;
pub mod seesaw;
pub mod separability;

pub use conic::Status;
pub use seesaw::{definition_relaxation_bound, seesaw_causal_bound, SeesawBound, SeesawOptions};
pub use separability::{
    causal_sep_feasibility_p2f, causal_sep_feasibility_p2f_with, causal_sep_feasibility_tripartite,
    mix_with_white_noise, mixture_threshold_estimate, mixture_threshold_p2f, Branches, CausalDecomposition, CertificateSummary, SdpResult,
    Threshold,
};

use crate::error::{Error, Result};
use crate::hilbert::{LabeledOperator, SpaceLabel};
use crate::measurements::{shift_basis, Dpovm, InputEnsemble, ProjectiveFamily, Relabeling};
use crate::process_functions::{
    all_words, lugano, lugano_game_value_of_tree, BooleanProcessFunction, Rational, StrategyTree,
};
use crate::process_matrices::{input_wire, output_wire, ProcessMatrix, Role, FUTURE, PAST, TARGET_FUTURE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameScenario {
    /// Device-independent Lugano game with classical inputs.
    LuganoDi,
    /// Identifying the SHIFT state labels with trusted quantum inputs on (P, A, B).
    ShiftSdiqi,
    /// Classical a, b for Alice and Bob, BB84 inputs for Phil.
    Ndi,
}

impl std::str::FromStr for GameScenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lugano" | "lugano_di" => Ok(GameScenario::LuganoDi),
            "shift" | "shift_sdiqi" => Ok(GameScenario::ShiftSdiqi),
            "ndi" => Ok(GameScenario::Ndi),
            _ => Err(Error::UnknownScenario(s.into())),
        }
    }
}

/// A game: its scenario and, for state-identification games, the ensemble
/// whose labels must be reproduced by the outcome word.
#[derive(Debug, Clone)]
pub struct GameSpec {
    pub scenario: GameScenario,
    pub ensemble: Option<InputEnsemble>,
}

impl GameSpec {
    pub fn lugano_di() -> Self {
        GameSpec { scenario: GameScenario::LuganoDi, ensemble: None }
    }

    /// SHIFT states on `(Aux^P, Aux^1, Aux^2)` labeled `(γ, α, β)`: Charlie's
    /// system is handed to Phil.
    pub fn shift_sdiqi() -> Result<Self> {
        let e = shift_basis()?.relabeled(&Relabeling::party_to_past(3, 2))?;
        Ok(GameSpec { scenario: GameScenario::ShiftSdiqi, ensemble: Some(e) })
    }

    /// The same game with Phil as the first Lugano party: states
    /// `H^{w_L(γ,α,β)}|γ,α,β⟩` on `(Aux^P, Aux^1, Aux^2)`.
    pub fn shift_sdiqi_phil_first() -> Result<Self> {
        let e = shift_basis()?;
        let r = Relabeling {
            wire_renames: vec![
                ("Aux^1".into(), "Aux^P".into()),
                ("Aux^2".into(), "Aux^1".into()),
                ("Aux^3".into(), "Aux^2".into()),
            ],
            word_perm: vec![0, 1, 2],
            wire_order: Some(vec!["Aux^P".into(), "Aux^1".into(), "Aux^2".into()]),
        };
        Ok(GameSpec { scenario: GameScenario::ShiftSdiqi, ensemble: Some(e.relabeled(&r)?) })
    }

    pub fn ndi() -> Self {
        GameSpec { scenario: GameScenario::Ndi, ensemble: None }
    }

    pub fn label(&self) -> &'static str {
        match self.scenario {
            GameScenario::LuganoDi => "lugano_di",
            GameScenario::ShiftSdiqi => "shift_sdiqi",
            GameScenario::Ndi => "ndi",
        }
    }
}

/// `Σ_label prior·⟨ψ_label|E_{relabel(label)}|ψ_label⟩`; the relabeling also
/// renames the ensemble's wires onto the D-POVM's.
pub fn discrimination_value(d: &Dpovm, e: &InputEnsemble, relabel: &Relabeling) -> Result<f64> {
    let r = Relabeling { wire_order: None, ..relabel.clone() };
    let e = e.relabeled(&r)?;
    let same = e.wires.len() == d.wires.len() && e.wires.iter().all(|s| d.wires.contains(s));
    if !same {
        return Err(Error::WireMismatch(format!(
            "ensemble on {:?}, measurement on {:?}",
            e.wires.iter().map(|s| &s.name).collect::<Vec<_>>(),
            d.wire_names()
        )));
    }
    let mut total = 0.0;
    for (label, psi, p) in &e.states {
        if let Some(eff) = d.effect(label) {
            let psi = psi.aligned_to(&d.wires)?;
            let v = eff.matrix() * psi.amplitudes();
            total += p * psi.amplitudes().dotc(&v).re;
        }
    }
    Ok(total)
}

/// What plays the Lugano game.
#[derive(Debug, Clone, Copy)]
pub enum LuganoResource<'a> {
    Function(&'a BooleanProcessFunction),
    Process(&'a ProcessMatrix),
    Tree(&'a StrategyTree),
}

/// Exact or numerical value of `P((x,y,z) = w_L(a,b,c))` with uniform outputs.
#[derive(Debug, Clone, PartialEq)]
pub enum GameValue {
    Exact(Rational),
    Numeric(f64),
}

impl GameValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            GameValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            GameValue::Numeric(x) => *x,
        }
    }
}

/// Success probability of the Lugano game. A process function plays with
/// echo strategies (send the random output, report the received input); a
/// process matrix plays the same strategy with computational-basis
/// operations on its party wires.
pub fn lugano_game_value(r: LuganoResource) -> Result<GameValue> {
    let wl = lugano();
    match r {
        LuganoResource::Function(w) => {
            if w.n_parties() != 3 {
                return Err(Error::ScenarioMismatch(format!("{} is not tripartite", w.name)));
            }
            let wins = all_words(3).filter(|a| w.evaluate(a).ok() == wl.evaluate(a).ok()).count();
            Ok(GameValue::Exact(Rational::new(wins as u64, 8)))
        }
        LuganoResource::Tree(t) => Ok(GameValue::Exact(lugano_game_value_of_tree(&wl, t))),
        LuganoResource::Process(w) => {
            let party_only = w.roles().values().all(|r| matches!(r, Role::PartyInput(_) | Role::PartyOutput(_)));
            if w.parties() != vec![0, 1, 2] || !party_only {
                return Err(Error::ScenarioMismatch("expects a tripartite process without global wires".into()));
            }
            let op = w.operator()?;
            let mut total = 0.0;
            for a in all_words(3) {
                let x = wl.evaluate(&a)?;
                let mut names = Vec::new();
                let mut bits = Vec::new();
                for j in 0..3 {
                    names.push(input_wire(j));
                    bits.push(x[j]);
                    names.push(output_wire(j));
                    bits.push(a[j]);
                }
                total += basis_expectation(&op, &names, &bits)?;
            }
            Ok(GameValue::Numeric(total / 8.0))
        }
    }
}

/// `⟨bits|W|bits⟩` on the named wires (a full link with a basis projector).
fn basis_expectation(op: &LabeledOperator, names: &[String], bits: &[u8]) -> Result<f64> {
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let ket = crate::hilbert::LabeledKet::basis(&refs, bits)?.aligned_to(op.spaces())?;
    let v = op.matrix() * ket.amplitudes();
    Ok(ket.amplitudes().dotc(&v).re)
}

/// Left-hand side of the NDI inequality,
/// `1/8 Σ_{a,b,γ} P(f=γ, (x,y,z) = w_L(a,b,γ) | H^{b(a⊕1)}|γ⟩ on P)`.
///
/// Alice and Bob send their classical inputs and report what they receive.
/// Fiona measures F in the basis `H^z` and reports z: read from the target
/// wire `Ft` when the process has one, otherwise obtained from Alice and Bob
/// through the side channel `z = b(a⊕1)`.
pub fn ndi_game_value(w: &ProcessMatrix) -> Result<f64> {
    let roles = w.roles();
    let need = [PAST, FUTURE];
    if need.iter().any(|n| !roles.contains_key(*n)) || w.parties() != vec![0, 1] {
        return Err(Error::WireMismatch("expects wires P, F and two parties".into()));
    }
    let has_target = roles.contains_key(TARGET_FUTURE);
    let op = w.operator()?;
    let wl = lugano();
    let h = ProjectiveFamily::hadamard();
    let mut total = 0.0;
    for a in 0..2u8 {
        for b in 0..2u8 {
            for g in 0..2u8 {
                let [x, y, z]: [u8; 3] = wl.evaluate(&[a, b, g])?.try_into().expect("three bits");
                let side = b & (a ^ 1);
                if !has_target && z != side {
                    continue;
                }
                let psi = h.element(g, side);
                let mut probe = qubit(PAST, psi).tensor(&qubit(FUTURE, h.element(g, z)))?;
                for (name, bit) in [(input_wire(0), x), (output_wire(0), a), (input_wire(1), y), (output_wire(1), b)] {
                    probe = probe.tensor(&LabeledOperator::projector(&crate::hilbert::LabeledKet::basis(&[&name], &[bit])?)?)?;
                }
                if has_target {
                    probe = probe.tensor(&LabeledOperator::projector(&crate::hilbert::LabeledKet::basis(&[TARGET_FUTURE], &[z])?)?)?;
                }
                total += op.link(&probe)?.as_scalar().ok_or_else(|| Error::WireMismatch("extra process wires".into()))?.re;
            }
        }
    }
    Ok(total / 8.0)
}

fn qubit(name: &str, m: &nalgebra::Matrix2<num_complex::Complex64>) -> LabeledOperator {
    LabeledOperator::new(vec![SpaceLabel::qubit(name)], nalgebra::DMatrix::from_fn(2, 2, |i, j| m[(i, j)]))
        .expect("one qubit")
}

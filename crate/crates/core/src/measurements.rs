//! Local instruments and the distributed measurements (D-POVMs) they induce,
//! either directly through a process function or through a process matrix.

use crate::error::{Error, Result};
use crate::hilbert::{
    choi_vector_of_unitary, hadamard_power, LabeledKet, LabeledOperator, SpaceLabel,
};
use crate::process_functions::{
    all_words, aux_wire, nlwe_basis, product_ket, BooleanProcessFunction, Ell, NlweBasis, Word,
    AUX_PAST,
};
use crate::process_matrices::{input_wire, output_wire, ProcessMatrix, FUTURE, PAST, TARGET_FUTURE};
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// For each setting x, the two projectors `M_{0|x}, M_{1|x}` (2x2).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveFamily {
    pub projectors: [[Matrix2<C64>; 2]; 2],
}

fn rank_one(v: [C64; 2]) -> Matrix2<C64> {
    Matrix2::from_fn(|i, j| v[i] * v[j].conj())
}

impl ProjectiveFamily {
    /// `M_{a|x} = H^x|a⟩⟨a|H^x`.
    pub fn hadamard() -> Self {
        let p = |x: u8, a: u8| {
            let h = hadamard_power(x);
            rank_one([h[(0, a as usize)], h[(1, a as usize)]])
        };
        ProjectiveFamily { projectors: [[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]] }
    }

    /// Computational basis for both settings.
    pub fn computational() -> Self {
        let z = |a: usize| {
            let mut v = [C64::new(0.0, 0.0); 2];
            v[a] = C64::new(1.0, 0.0);
            rank_one(v)
        };
        ProjectiveFamily { projectors: [[z(0), z(1)], [z(0), z(1)]] }
    }

    /// Real rank-one family: setting x measures the basis rotated by `theta[x]`.
    pub fn from_angles(theta: [f64; 2]) -> Self {
        let p = |t: f64, a: usize| {
            let (c, s) = (t.cos(), t.sin());
            let v = if a == 0 { [c, s] } else { [-s, c] };
            rank_one([C64::new(v[0], 0.0), C64::new(v[1], 0.0)])
        };
        ProjectiveFamily {
            projectors: [[p(theta[0], 0), p(theta[0], 1)], [p(theta[1], 0), p(theta[1], 1)]],
        }
    }

    pub fn element(&self, a: u8, x: u8) -> &Matrix2<C64> {
        &self.projectors[x as usize][a as usize]
    }

    /// Max deviation from `M_0 + M_1 = 1` and `M² = M = M†`.
    pub fn deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        let norm = |m: Matrix2<C64>| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for x in 0..2 {
            let [m0, m1] = &self.projectors[x];
            dev = dev.max(norm(m0 + m1 - Matrix2::identity()));
            for m in [m0, m1] {
                dev = dev.max(norm(m * m - m)).max(norm(m.adjoint() - m));
            }
        }
        dev
    }
}

fn qubit_op(name: &str, m: &Matrix2<C64>) -> LabeledOperator {
    LabeledOperator::new(vec![SpaceLabel::qubit(name)], DMatrix::from_fn(2, 2, |i, j| m[(i, j)]))
        .expect("one qubit wire")
}

fn basis_projector(names: &[&str], bits: &[u8]) -> Result<LabeledOperator> {
    LabeledOperator::projector(&LabeledKet::basis(names, bits)?)
}

/// Outcome-labeled CP maps as PSD Choi matrices on `inputs ++ outputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instrument {
    pub inputs: Vec<SpaceLabel>,
    pub outputs: Vec<SpaceLabel>,
    pub elements: Vec<(Word, LabeledOperator)>,
}

impl Instrument {
    pub fn new(inputs: Vec<SpaceLabel>, outputs: Vec<SpaceLabel>, elements: Vec<(Word, LabeledOperator)>) -> Result<Self> {
        let mut spaces = inputs.clone();
        spaces.extend(outputs.iter().cloned());
        let elements = elements
            .into_iter()
            .map(|(w, op)| Ok((w, op.aligned_to(&spaces)?)))
            .collect::<Result<Vec<_>>>()?;
        if elements.is_empty() {
            return Err(Error::Shape("instrument without elements".into()));
        }
        Ok(Instrument { inputs, outputs, elements })
    }

    pub fn wires(&self) -> Vec<SpaceLabel> {
        let mut s = self.inputs.clone();
        s.extend(self.outputs.iter().cloned());
        s
    }

    /// `‖Tr_out Σ_k M_k − 1_in‖_max`.
    pub fn completeness_deviation(&self) -> Result<f64> {
        let mut sum = self.elements[0].1.clone();
        for (_, m) in &self.elements[1..] {
            sum = sum.add(m)?;
        }
        let outs: Vec<&str> = self.outputs.iter().map(|s| s.name.as_str()).collect();
        let reduced = sum.partial_trace(&outs)?;
        reduced.max_abs_diff(&LabeledOperator::identity(self.inputs.clone())?)
    }

    pub fn all_psd(&self) -> bool {
        self.elements.iter().all(|(_, m)| m.is_psd())
    }
}

/// One member of an instrument set. Its instrument may depend on the outcome
/// words of other members (classical side channels); the table is keyed by
/// the concatenation of those members' outcome words.
#[derive(Debug, Clone)]
pub struct Agent {
    pub name: String,
    pub depends_on: Vec<usize>,
    pub table: BTreeMap<Word, Instrument>,
}

impl Agent {
    pub fn fixed(name: impl Into<String>, inst: Instrument) -> Self {
        let mut table = BTreeMap::new();
        table.insert(vec![], inst);
        Agent { name: name.into(), depends_on: vec![], table }
    }

    fn labels(&self) -> Vec<Word> {
        self.table.values().next().expect("non-empty table").elements.iter().map(|(w, _)| w.clone()).collect()
    }
}

/// Instruments for every party wired to a process. The D-POVM outcome word
/// is the concatenation of the members' outcome words in member order,
/// followed by the optional permutation `word_perm` (`new[k] = old[perm[k]]`).
#[derive(Debug, Clone)]
pub struct InstrumentSet {
    pub agents: Vec<Agent>,
    pub word_perm: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    SwitchShift,
    QcqcShift,
    Ndi,
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "switch_shift" => Ok(Scenario::SwitchShift),
            "qcqc_shift" => Ok(Scenario::QcqcShift),
            "ndi" => Ok(Scenario::Ndi),
            _ => Err(Error::UnknownScenario(s.into())),
        }
    }
}

/// Phil's identity channel `|1⟩⟩⟨⟨1|` from his auxiliary input into `P`.
pub fn phil_identity() -> Result<Instrument> {
    let v = choi_vector_of_unitary(&Matrix2::identity(), SpaceLabel::qubit(AUX_PAST), SpaceLabel::qubit(PAST))?;
    Instrument::new(
        vec![SpaceLabel::qubit(AUX_PAST)],
        vec![SpaceLabel::qubit(PAST)],
        vec![(vec![], LabeledOperator::projector(&v)?)],
    )
}

/// `M_a = Σ_x H^x|a⟩⟨a|H^x ⊗ |x⟩⟨x|^{A_I} ⊗ |a⟩⟨a|^{A_O}` for party j: read
/// the setting from the process, measure the auxiliary qubit, send the outcome.
pub fn measure_and_forward(j: usize, fam: &ProjectiveFamily) -> Result<Instrument> {
    let (aux, ai, ao) = (aux_wire(j), input_wire(j), output_wire(j));
    let mut elements = Vec::new();
    for a in 0..2u8 {
        let mut acc = LabeledOperator::zeros(crate::hilbert::qubits(&[&aux, &ai, &ao]))?;
        for x in 0..2u8 {
            let term = qubit_op(&aux, fam.element(a, x))
                .tensor(&basis_projector(&[&ai], &[x])?)?
                .tensor(&basis_projector(&[&ao], &[a])?)?;
            acc = acc.add(&term)?;
        }
        elements.push((vec![a], acc));
    }
    Instrument::new(
        vec![SpaceLabel::qubit(aux), SpaceLabel::qubit(ai)],
        vec![SpaceLabel::qubit(ao)],
        elements,
    )
}

/// `H^z|f⟩⟨f|H^z` on F, for a fixed z.
pub fn fiona_fixed_setting(z: u8) -> Result<Instrument> {
    let elements = (0..2u8)
        .map(|f| (vec![f], qubit_op(FUTURE, ProjectiveFamily::hadamard().element(f, z))))
        .collect();
    Instrument::new(vec![SpaceLabel::qubit(FUTURE)], vec![], elements)
}

/// `M_f = Σ_z H^z|f⟩⟨f|H^z ⊗ |z⟩⟨z|^{Ft}`.
pub fn fiona_reads_target() -> Result<Instrument> {
    let mut elements = Vec::new();
    for f in 0..2u8 {
        let mut acc = LabeledOperator::zeros(crate::hilbert::qubits(&[FUTURE, TARGET_FUTURE]))?;
        for z in 0..2u8 {
            let term = qubit_op(FUTURE, ProjectiveFamily::hadamard().element(f, z))
                .tensor(&basis_projector(&[TARGET_FUTURE], &[z])?)?;
            acc = acc.add(&term)?;
        }
        elements.push((vec![f], acc));
    }
    Instrument::new(
        vec![SpaceLabel::qubit(FUTURE), SpaceLabel::qubit(TARGET_FUTURE)],
        vec![],
        elements,
    )
}

/// `M_{f,z} = H^z|f⟩⟨f|H^z ⊗ |z⟩⟨z|^{Ft}` with both f and z reported.
pub fn fiona_reports_target() -> Result<Instrument> {
    let mut elements = Vec::new();
    for f in 0..2u8 {
        for z in 0..2u8 {
            let term = qubit_op(FUTURE, ProjectiveFamily::hadamard().element(f, z))
                .tensor(&basis_projector(&[TARGET_FUTURE], &[z])?)?;
            elements.push((vec![f, z], term));
        }
    }
    Instrument::new(
        vec![SpaceLabel::qubit(FUTURE), SpaceLabel::qubit(TARGET_FUTURE)],
        vec![],
        elements,
    )
}

/// `M_x = Σ_a |a⟩⟨a|^{Aux} ⊗ |x⟩⟨x|^{A_I} ⊗ |a⟩⟨a|^{A_O}`: forward the
/// (classical) auxiliary bit, report the received setting.
pub fn report_setting(j: usize) -> Result<Instrument> {
    let (aux, ai, ao) = (aux_wire(j), input_wire(j), output_wire(j));
    let mut elements = Vec::new();
    for x in 0..2u8 {
        let mut acc = LabeledOperator::zeros(crate::hilbert::qubits(&[&aux, &ai, &ao]))?;
        for a in 0..2u8 {
            let term = basis_projector(&[&aux], &[a])?
                .tensor(&basis_projector(&[&ai], &[x])?)?
                .tensor(&basis_projector(&[&ao], &[a])?)?;
            acc = acc.add(&term)?;
        }
        elements.push((vec![x], acc));
    }
    Instrument::new(
        vec![SpaceLabel::qubit(aux), SpaceLabel::qubit(ai)],
        vec![SpaceLabel::qubit(ao)],
        elements,
    )
}

/// Instrument presets for the two-party processes (`P`, F, parties 1 and 2),
/// plus the general QC-QC preset of [`qcqc_instruments`].
pub fn standard_instruments(scenario: Scenario) -> Result<InstrumentSet> {
    let h = ProjectiveFamily::hadamard();
    match scenario {
        Scenario::SwitchShift => {
            // Fiona's basis depends on the side-channel value z = b(a⊕1)
            let mut table = BTreeMap::new();
            for a in 0..2u8 {
                for b in 0..2u8 {
                    table.insert(vec![a, b], fiona_fixed_setting(b & (a ^ 1))?);
                }
            }
            Ok(InstrumentSet {
                agents: vec![
                    Agent::fixed("phil", phil_identity()?),
                    Agent { name: "fiona".into(), depends_on: vec![2, 3], table },
                    Agent::fixed("alice", measure_and_forward(0, &h)?),
                    Agent::fixed("bob", measure_and_forward(1, &h)?),
                ],
                word_perm: None,
            })
        }
        Scenario::QcqcShift => qcqc_instruments(3, 2),
        Scenario::Ndi => Ok(InstrumentSet {
            agents: vec![
                Agent::fixed("phil", phil_identity()?),
                Agent::fixed("fiona", fiona_reports_target()?),
                Agent::fixed("alice", report_setting(0)?),
                Agent::fixed("bob", report_setting(1)?),
            ],
            // (f, z, x, y) -> (f, x, y, z)
            word_perm: Some(vec![0, 2, 3, 1]),
        }),
    }
}

/// Instruments for the QC-QC built at party i of an n-party process: Phil's
/// identity channel, Fiona reading the target, and measure-and-forward for
/// every other party. Outcome words are `(f, a_j for j ≠ i)`.
pub fn qcqc_instruments(n: usize, i: usize) -> Result<InstrumentSet> {
    let h = ProjectiveFamily::hadamard();
    let mut agents = vec![Agent::fixed("phil", phil_identity()?), Agent::fixed("fiona", fiona_reads_target()?)];
    for j in (0..n).filter(|j| *j != i) {
        agents.push(Agent::fixed(format!("party{}", j + 1), measure_and_forward(j, &h)?));
    }
    Ok(InstrumentSet { agents, word_perm: None })
}

/// Outcome-word-labeled effects on auxiliary wires.
#[derive(Debug, Clone, PartialEq)]
pub struct Dpovm {
    pub wires: Vec<SpaceLabel>,
    pub effects: Vec<(Word, LabeledOperator)>,
}

impl Dpovm {
    pub fn new(wires: Vec<SpaceLabel>, effects: Vec<(Word, LabeledOperator)>) -> Result<Self> {
        let effects = effects
            .into_iter()
            .map(|(w, e)| Ok((w, e.aligned_to(&wires)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dpovm { wires, effects })
    }

    pub fn wire_names(&self) -> Vec<&str> {
        self.wires.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn effect(&self, word: &[u8]) -> Option<&LabeledOperator> {
        self.effects.iter().find(|(w, _)| w == word).map(|(_, e)| e)
    }

    /// Applies a relabeling to wires and outcome words.
    pub fn relabeled(&self, r: &Relabeling) -> Result<Dpovm> {
        let rename = |name: &str| -> String {
            r.wire_renames.iter().find(|(a, _)| a == name).map(|(_, b)| b.clone()).unwrap_or_else(|| name.into())
        };
        let wires: Vec<SpaceLabel> =
            self.wires.iter().map(|s| SpaceLabel::new(rename(&s.name), s.dim)).collect();
        let effects = self
            .effects
            .iter()
            .map(|(w, e)| {
                let mut op = e.clone();
                // two-phase rename avoids collisions between old and new names
                for (k, s) in self.wires.iter().enumerate() {
                    op = op.renamed(&s.name, &format!("\u{0}{k}"))?;
                }
                for (k, s) in wires.iter().enumerate() {
                    op = op.renamed(&format!("\u{0}{k}"), &s.name)?;
                }
                Ok((r.apply_word(w), op))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut wires_sorted = wires;
        if let Some(order) = &r.wire_order {
            wires_sorted = order
                .iter()
                .map(|n| wires_sorted.iter().find(|s| &s.name == n).cloned().ok_or_else(|| Error::UnknownLabel(n.clone())))
                .collect::<Result<_>>()?;
        }
        Dpovm::new(wires_sorted, effects)
    }

    /// Max entrywise deviation from another D-POVM with the same wires and words.
    pub fn max_deviation(&self, other: &Dpovm) -> Result<f64> {
        if self.effects.len() != other.effects.len() {
            return Err(Error::WireMismatch(format!(
                "{} vs {} effects",
                self.effects.len(),
                other.effects.len()
            )));
        }
        let mut dev = 0.0f64;
        for (w, e) in &self.effects {
            let o = other
                .effect(w)
                .ok_or_else(|| Error::WireMismatch(format!("outcome {w:?} missing")))?;
            dev = dev.max(e.max_abs_diff(o)?);
        }
        Ok(dev)
    }

    /// `‖Σ effects − 1‖_max`.
    pub fn completeness_check(&self) -> f64 {
        let mut sum = LabeledOperator::zeros(self.wires.clone()).expect("dense wires");
        for (_, e) in &self.effects {
            sum = sum.add(e).expect("aligned effects");
        }
        sum.max_abs_diff(&LabeledOperator::identity(self.wires.clone()).expect("dense wires"))
            .expect("same wires")
    }

    /// Smallest eigenvalue over all effects and the largest Hermiticity defect.
    pub fn positivity(&self) -> (f64, f64) {
        let mut min_ev = f64::INFINITY;
        let mut herm = 0.0f64;
        for (_, e) in &self.effects {
            min_ev = min_ev.min(e.min_eigenvalue());
            herm = herm.max(e.max_abs_diff(&e.adjoint()).unwrap_or(f64::INFINITY));
        }
        (min_ev, herm)
    }

    /// Coarse-grains outcomes through `map` (effects with equal images are summed).
    pub fn coarse_grained(&self, map: impl Fn(&[u8]) -> Word) -> Result<Dpovm> {
        let mut acc: BTreeMap<Word, LabeledOperator> = BTreeMap::new();
        for (w, e) in &self.effects {
            let k = map(w);
            let v = match acc.remove(&k) {
                Some(prev) => prev.add(e)?,
                None => e.clone(),
            };
            acc.insert(k, v);
        }
        Dpovm::new(self.wires.clone(), acc.into_iter().collect())
    }

    pub fn to_json(&self) -> String {
        let doc = DpovmDoc {
            wires: self.wires.clone(),
            effects: self
                .effects
                .iter()
                .map(|(w, e)| EffectDoc { outcome: w.clone(), operator: e.into() })
                .collect(),
        };
        serde_json::to_string(&doc).expect("dpovm serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: DpovmDoc = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        let effects = doc
            .effects
            .into_iter()
            .map(|e| Ok((e.outcome, LabeledOperator::try_from(e.operator)?)))
            .collect::<Result<Vec<_>>>()?;
        Dpovm::new(doc.wires, effects)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EffectDoc {
    outcome: Word,
    operator: crate::hilbert::OperatorDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DpovmDoc {
    wires: Vec<SpaceLabel>,
    effects: Vec<EffectDoc>,
}

/// An explicit relabeling between D-POVM conventions: wire renames, the
/// outcome-word permutation `new[k] = old[perm[k]]`, and an optional final wire order.
#[derive(Debug, Clone, PartialEq)]
pub struct Relabeling {
    pub wire_renames: Vec<(String, String)>,
    pub word_perm: Vec<usize>,
    pub wire_order: Option<Vec<String>>,
}

impl Relabeling {
    pub fn identity(n: usize) -> Self {
        Relabeling { wire_renames: vec![], word_perm: (0..n).collect(), wire_order: None }
    }

    /// Party i of an n-party D-POVM becomes the global past: its wire is
    /// renamed to `Aux^P` and its bit moves to the front of the word.
    pub fn party_to_past(n: usize, i: usize) -> Self {
        let mut perm = vec![i];
        perm.extend((0..n).filter(|j| *j != i));
        let mut order = vec![AUX_PAST.to_string()];
        order.extend((0..n).filter(|j| *j != i).map(aux_wire));
        Relabeling {
            wire_renames: vec![(aux_wire(i), AUX_PAST.to_string())],
            word_perm: perm,
            wire_order: Some(order),
        }
    }

    pub fn apply_word(&self, w: &[u8]) -> Word {
        self.word_perm.iter().map(|&p| w[p]).collect()
    }
}

/// Label-indexed pure states with a prior.
#[derive(Debug, Clone)]
pub struct InputEnsemble {
    pub wires: Vec<SpaceLabel>,
    pub states: Vec<(Word, LabeledKet, f64)>,
}

impl InputEnsemble {
    pub fn uniform(basis: &NlweBasis) -> Result<Self> {
        let p = 1.0 / basis.states.len() as f64;
        let wires = basis.wires.iter().map(|w| SpaceLabel::qubit(w.clone())).collect();
        Ok(InputEnsemble {
            wires,
            states: basis.states.iter().map(|s| (s.word.clone(), s.ket.clone(), p)).collect(),
        })
    }

    /// Renames wires and permutes labels as a [`Relabeling`] does for D-POVMs.
    pub fn relabeled(&self, r: &Relabeling) -> Result<Self> {
        let rename = |name: &str| -> String {
            r.wire_renames.iter().find(|(a, _)| a == name).map(|(_, b)| b.clone()).unwrap_or_else(|| name.into())
        };
        let mut wires: Vec<SpaceLabel> = self.wires.iter().map(|s| SpaceLabel::new(rename(&s.name), s.dim)).collect();
        if let Some(order) = &r.wire_order {
            wires = order
                .iter()
                .map(|n| wires.iter().find(|s| &s.name == n).cloned().ok_or_else(|| Error::UnknownLabel(n.clone())))
                .collect::<Result<_>>()?;
        }
        let states = self
            .states
            .iter()
            .map(|(w, k, p)| {
                let mut k = k.clone();
                for (k_idx, s) in self.wires.iter().enumerate() {
                    k = k.renamed(&s.name, &format!("\u{0}{k_idx}"))?;
                }
                for (k_idx, s) in self.wires.iter().enumerate() {
                    k = k.renamed(&format!("\u{0}{k_idx}"), &rename(&s.name))?;
                }
                Ok((r.apply_word(w), k.aligned_to(&wires)?, *p))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InputEnsemble { wires, states })
    }

    /// Largest deviation from unit norm, and |Σ prior − 1|.
    pub fn normalization_defect(&self) -> (f64, f64) {
        let norm = self.states.iter().map(|(_, k, _)| (k.norm_sqr() - 1.0).abs()).fold(0.0, f64::max);
        let prior: f64 = self.states.iter().map(|(_, _, p)| p).sum();
        (norm, (prior - 1.0).abs())
    }
}

/// The eight SHIFT states `H^{w_L(a)}|a⟩` on `Aux^1..Aux^3`, uniform prior.
pub fn shift_basis() -> Result<InputEnsemble> {
    InputEnsemble::uniform(&nlwe_basis(&crate::process_functions::lugano())?)
}

/// `E_a = ⊗_i M_{a_i | w_i(a)}` on the auxiliary wires `Aux^1..Aux^N`.
pub fn lopf_measurement(w: &BooleanProcessFunction, fams: &[ProjectiveFamily]) -> Result<Dpovm> {
    let n = w.n_parties();
    if fams.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: fams.len() });
    }
    if !w.check_unique_fixed_point() {
        return Err(Error::InvalidProcessFunction(w.name.clone()));
    }
    let wires: Vec<SpaceLabel> = (0..n).map(|j| SpaceLabel::qubit(aux_wire(j))).collect();
    let mut effects = Vec::new();
    for a in all_words(n) {
        let x = w.evaluate(&a)?;
        let mut op = LabeledOperator::scalar(C64::new(1.0, 0.0));
        for j in 0..n {
            op = op.tensor(&qubit_op(&aux_wire(j), fams[j].element(a[j], x[j])))?;
        }
        effects.push((a, op));
    }
    Dpovm::new(wires, effects)
}

/// Projectors onto an ensemble's states, labeled by the state labels.
pub fn projective_dpovm(e: &InputEnsemble) -> Result<Dpovm> {
    let effects = e
        .states
        .iter()
        .map(|(w, k, _)| Ok((w.clone(), LabeledOperator::projector(k)?)))
        .collect::<Result<Vec<_>>>()?;
    Dpovm::new(e.wires.clone(), effects)
}

/// Computational-basis measurement on the given qubit wires.
pub fn computational_dpovm(wires: &[String]) -> Result<Dpovm> {
    let refs: Vec<&str> = wires.iter().map(|s| s.as_str()).collect();
    let effects = all_words(wires.len())
        .map(|w| Ok((w.clone(), basis_projector(&refs, &w)?)))
        .collect::<Result<Vec<_>>>()?;
    Dpovm::new(crate::hilbert::qubits(&refs), effects)
}

/// `E_o = (⊗_k M_k) * W`, with each member's element selected by the outcome
/// words of the members it depends on.
pub fn effective_dpovm(w: &ProcessMatrix, set: &InstrumentSet) -> Result<Dpovm> {
    let process = w.operator()?;
    check_wiring(w, set)?;
    // auxiliary wires in member order
    let mut aux: Vec<SpaceLabel> = Vec::new();
    for ag in &set.agents {
        let inst = ag.table.values().next().expect("non-empty table");
        for s in inst.wires() {
            if !process.has_space(&s.name) && !aux.contains(&s) {
                aux.push(s);
            }
        }
    }
    let labels: Vec<Vec<Word>> = set.agents.iter().map(|a| a.labels()).collect();
    let mut effects = Vec::new();
    let mut choice = vec![0usize; set.agents.len()];
    loop {
        let words: Vec<&Word> = choice.iter().zip(&labels).map(|(c, l)| &l[*c]).collect();
        let mut cur = process.clone();
        for (k, ag) in set.agents.iter().enumerate() {
            let key: Word = ag.depends_on.iter().flat_map(|d| words[*d].iter().copied()).collect();
            let inst = ag.table.get(&key).ok_or_else(|| {
                Error::WireMismatch(format!("member `{}` has no instrument for side channel {key:?}", ag.name))
            })?;
            let el = &inst.elements.iter().find(|(l, _)| l == words[k]).expect("shared label set").1;
            cur = el.link(&cur)?;
        }
        let word: Word = words.iter().flat_map(|w| w.iter().copied()).collect();
        let word = match &set.word_perm {
            Some(p) => p.iter().map(|&i| word[i]).collect(),
            None => word,
        };
        effects.push((word, cur.aligned_to(&aux)?));
        // odometer over member outcome choices
        let mut k = choice.len();
        loop {
            if k == 0 {
                effects.sort_by(|a, b| a.0.cmp(&b.0));
                return Dpovm::new(aux, effects);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < labels[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

fn check_wiring(w: &ProcessMatrix, set: &InstrumentSet) -> Result<()> {
    let mut used: Vec<String> = Vec::new();
    for ag in &set.agents {
        let mut seen: Option<Vec<SpaceLabel>> = None;
        for inst in ag.table.values() {
            let wires = inst.wires();
            if let Some(s) = &seen {
                if s != &wires {
                    return Err(Error::WireMismatch(format!("member `{}` changes wires across its table", ag.name)));
                }
            }
            seen = Some(wires);
        }
        for s in seen.unwrap_or_default() {
            if w.roles().contains_key(&s.name) {
                if used.contains(&s.name) {
                    return Err(Error::WireMismatch(format!("wire `{}` used twice", s.name)));
                }
                used.push(s.name);
            }
        }
        for d in &ag.depends_on {
            if *d >= set.agents.len() || set.agents[*d].depends_on.contains(&set.agents.iter().position(|a| a.name == ag.name).unwrap()) {
                return Err(Error::WireMismatch(format!("bad side-channel dependency of `{}`", ag.name)));
            }
        }
    }
    for name in w.names() {
        if !used.iter().any(|u| u == name) {
            return Err(Error::WireMismatch(format!("process wire `{name}` is not connected")));
        }
    }
    Ok(())
}

/// The SHIFT D-POVM on `(Aux^P, Aux^1, Aux^2)` from the reduced-Lugano closed form:
/// `E_{f,a,b} = H^z|f⟩⟨f|H^z ⊗ M_{a|f(b⊕1)} ⊗ M_{b|a(f⊕1)}` with `z = b(a⊕1)`.
pub fn shift_closed_form() -> Result<Dpovm> {
    let h = ProjectiveFamily::hadamard();
    let (p, a1, a2) = (AUX_PAST.to_string(), aux_wire(0), aux_wire(1));
    let mut effects = Vec::new();
    for word in all_words(3) {
        let (f, a, b) = (word[0], word[1], word[2]);
        let z = b & (a ^ 1);
        let op = qubit_op(&p, h.element(f, z))
            .tensor(&qubit_op(&a1, h.element(a, f & (b ^ 1))))?
            .tensor(&qubit_op(&a2, h.element(b, a & (f ^ 1))))?;
        effects.push((word, op));
    }
    Dpovm::new(crate::hilbert::qubits(&[&p, &a1, &a2]), effects)
}

/// Measurement by local operations with superposed classical communication,
/// party i acting as the coherent control: effect for `(f, a_{∖i})` is
/// `H^{x_i}|f⟩⟨f|H^{x_i} ⊗_{j≠i} M_{a_j | w_j(a)|_{a_i=f}}`, with `x_i = w_i(a_{∖i})`.
pub fn losupcc_measurement(w: &BooleanProcessFunction, i: usize) -> Result<Dpovm> {
    let n = w.n_parties();
    if i >= n {
        return Err(Error::PartyOutOfRange { index: i, n });
    }
    if !w.check_no_global_past() {
        // report the offending party
        nlwe_basis(w)?;
    }
    if !w.check_transparent_control(i) {
        return Err(Error::NotTransparent(i));
    }
    let h = ProjectiveFamily::hadamard();
    let others: Vec<usize> = (0..n).filter(|j| *j != i).collect();
    let mut wires = vec![AUX_PAST.to_string()];
    wires.extend(others.iter().map(|j| aux_wire(*j)));
    let mut effects = Vec::new();
    for word in all_words(n) {
        let f = word[0];
        let mut a = vec![0u8; n];
        a[i] = f;
        for (k, &j) in others.iter().enumerate() {
            a[j] = word[k + 1];
        }
        let xi = w.party_input(i, &a);
        let mut op = qubit_op(AUX_PAST, h.element(f, xi));
        for &j in &others {
            op = op.tensor(&qubit_op(&aux_wire(j), h.element(a[j], w.reduced_input(i, f, j, &a))))?;
        }
        effects.push((word, op));
    }
    let refs: Vec<&str> = wires.iter().map(|s| s.as_str()).collect();
    Dpovm::new(crate::hilbert::qubits(&refs), effects)
}

/// Output of [`lugano_channel_from_shift`].
#[derive(Debug, Clone)]
pub struct ChannelOutput {
    /// Probability of each basis-state outcome `(ℓ_x, ℓ_y, ℓ_z)`; zero entries omitted.
    pub ell_outcomes: Vec<(Vec<Ell>, f64)>,
    /// Induced distribution over the bit triples `f(ℓ)`.
    pub distribution: BTreeMap<Word, f64>,
}

/// Encodes `|abc⟩`, measures it in the SHIFT basis, and maps each outcome
/// through `f(0) = f(1) = 0`, `f(+) = f(−) = 1`.
pub fn lugano_channel_from_shift(outputs: [u8; 3]) -> Result<ChannelOutput> {
    let basis = nlwe_basis(&crate::process_functions::lugano())?;
    let wires = basis.wires.clone();
    let ells: Vec<Ell> = outputs.iter().map(|b| Ell::from_bit(*b, 0)).collect();
    let input = product_ket(&wires, &ells)?;
    let mut ell_outcomes = Vec::new();
    let mut distribution = BTreeMap::new();
    for s in &basis.states {
        let p = s.ket.inner(&input)?.norm_sqr();
        if p < 1e-15 {
            continue;
        }
        let key: Word = s.ells.iter().map(|e| e.setting()).collect();
        *distribution.entry(key).or_insert(0.0) += p;
        ell_outcomes.push((s.ells.clone(), p));
    }
    Ok(ChannelOutput { ell_outcomes, distribution })
}

/// `‖Σ effects − 1‖_max`.
pub fn completeness_check(d: &Dpovm) -> f64 {
    d.completeness_check()
}

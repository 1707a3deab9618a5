//! Process matrices: diagonal forms of process functions, purifications,
//! the conversion to QC-QCs, the quantum switch, and operational validation.

use crate::error::{Error, Result};
use crate::hilbert::{
    choi_vector_of_unitary, pauli_x, LabeledKet, LabeledOperator, SpaceLabel, MAX_DENSE_WIRES,
};
use crate::process_functions::{all_words, insert_bit, BooleanProcessFunction};
use crate::random::random_instrument;
use nalgebra::{DVector, Matrix2};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const PAST: &str = "P";
pub const FUTURE: &str = "F";
pub const TARGET_FUTURE: &str = "Ft";

/// Process input wire of party `j` (0-based; the name is 1-based).
pub fn input_wire(j: usize) -> String {
    format!("A_I^{}", j + 1)
}

pub fn output_wire(j: usize) -> String {
    format!("A_O^{}", j + 1)
}

/// Per-party global-past wire allocated by a purification.
pub fn past_wire(j: usize) -> String {
    format!("P^{}", j + 1)
}

/// Per-party global-future wire allocated by a purification.
pub fn future_wire(j: usize) -> String {
    format!("F^{}", j + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Party index, 0-based.
    PartyInput(usize),
    PartyOutput(usize),
    GlobalPast,
    GlobalFuture,
    TargetFuture,
}

impl Role {
    /// Wires the process hands *to* the environment count towards the trace.
    fn is_output_like(self) -> bool {
        matches!(self, Role::PartyOutput(_) | Role::GlobalPast)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Dense(LabeledOperator),
    Pure(LabeledKet),
}

/// A process operator with role annotations on its wires.
///
/// Rank-one processes may be stored as a vector; purifications of four-party
/// processes carry 16 wires and are never materialized densely.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessMatrix {
    repr: Repr,
    roles: BTreeMap<String, Role>,
}

impl ProcessMatrix {
    pub fn from_dense(op: LabeledOperator, roles: BTreeMap<String, Role>) -> Result<Self> {
        check_roles(op.spaces(), &roles)?;
        Ok(ProcessMatrix { repr: Repr::Dense(op), roles })
    }

    pub fn from_pure(ket: LabeledKet, roles: BTreeMap<String, Role>) -> Result<Self> {
        check_roles(ket.spaces(), &roles)?;
        Ok(ProcessMatrix { repr: Repr::Pure(ket), roles })
    }

    pub fn roles(&self) -> &BTreeMap<String, Role> {
        &self.roles
    }

    pub fn spaces(&self) -> &[SpaceLabel] {
        match &self.repr {
            Repr::Dense(op) => op.spaces(),
            Repr::Pure(k) => k.spaces(),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.spaces().iter().map(|s| s.name.as_str()).collect()
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, Repr::Pure(_))
    }

    /// The vector of a rank-one process, when stored as such.
    pub fn ket(&self) -> Option<&LabeledKet> {
        match &self.repr {
            Repr::Pure(k) => Some(k),
            Repr::Dense(_) => None,
        }
    }

    /// Dense operator (materializes pure processes within the dense cap).
    pub fn operator(&self) -> Result<LabeledOperator> {
        match &self.repr {
            Repr::Dense(op) => Ok(op.clone()),
            Repr::Pure(k) => {
                if k.spaces().len() > MAX_DENSE_WIRES {
                    return Err(Error::TooLarge { wires: k.spaces().len(), cap: MAX_DENSE_WIRES });
                }
                LabeledOperator::projector(k)
            }
        }
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Dense(op) => op.trace().re,
            Repr::Pure(k) => k.norm_sqr(),
        }
    }

    /// Product of the dimensions of all output-role wires (party outputs and the global past).
    pub fn expected_trace(&self) -> f64 {
        self.spaces()
            .iter()
            .filter(|s| self.roles[&s.name].is_output_like())
            .map(|s| s.dim as f64)
            .product()
    }

    /// Party indices appearing in the roles, ascending.
    pub fn parties(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .roles
            .values()
            .filter_map(|r| match r {
                Role::PartyInput(j) | Role::PartyOutput(j) => Some(*j),
                _ => None,
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Wires carrying a given role, in wire order.
    pub fn wires_with(&self, pred: impl Fn(Role) -> bool) -> Vec<SpaceLabel> {
        self.spaces().iter().filter(|s| pred(self.roles[&s.name])).cloned().collect()
    }

    /// Link product with an operator; pure processes are materialized.
    pub fn link(&self, op: &LabeledOperator) -> Result<LabeledOperator> {
        self.operator()?.link(op)
    }

    pub fn to_json(&self) -> Result<String> {
        let op = self.operator()?;
        let doc = ProcessDoc {
            spaces: op.spaces().to_vec(),
            entries: op.entries_row_major(),
            roles: self.roles.clone(),
        };
        serde_json::to_string(&doc).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ProcessDoc = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        let op = LabeledOperator::from_row_major(doc.spaces, &doc.entries)?;
        Self::from_dense(op, doc.roles)
    }
}

/// On-disk form: the operator document plus a `roles` map.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProcessDoc {
    spaces: Vec<SpaceLabel>,
    entries: Vec<[f64; 2]>,
    roles: BTreeMap<String, Role>,
}

fn check_roles(spaces: &[SpaceLabel], roles: &BTreeMap<String, Role>) -> Result<()> {
    if roles.len() != spaces.len() {
        return Err(Error::WireMismatch(format!(
            "{} roles for {} wires",
            roles.len(),
            spaces.len()
        )));
    }
    for s in spaces {
        if !roles.contains_key(&s.name) {
            return Err(Error::WireMismatch(format!("no role for wire `{}`", s.name)));
        }
    }
    Ok(())
}

fn party_roles(n: usize, skip: Option<usize>) -> BTreeMap<String, Role> {
    let mut roles = BTreeMap::new();
    for j in (0..n).filter(|j| Some(*j) != skip) {
        roles.insert(input_wire(j), Role::PartyInput(j));
        roles.insert(output_wire(j), Role::PartyOutput(j));
    }
    roles
}

fn require_valid(w: &BooleanProcessFunction) -> Result<()> {
    if !w.check_unique_fixed_point() {
        return Err(Error::InvalidProcessFunction(format!(
            "`{}` has no unique fixed point for some local maps",
            w.name
        )));
    }
    Ok(())
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `W = Σ_a |a⟩⟨a|^{A_O} ⊗ |w(a)⟩⟨w(a)|^{A_I}` on wires `A_O^1..A_O^N, A_I^1..A_I^N`.
pub fn from_process_function(w: &BooleanProcessFunction) -> Result<ProcessMatrix> {
    require_valid(w)?;
    let n = w.n_parties();
    let mut spaces: Vec<SpaceLabel> = (0..n).map(|j| SpaceLabel::qubit(output_wire(j))).collect();
    spaces.extend((0..n).map(|j| SpaceLabel::qubit(input_wire(j))));
    let mut diag = vec![C64::new(0.0, 0.0); 1 << (2 * n)];
    for a in all_words(n) {
        let x = w.evaluate(&a)?;
        let idx = a.iter().chain(&x).fold(0usize, |acc, b| acc * 2 + *b as usize);
        diag[idx] = one();
    }
    ProcessMatrix::from_dense(LabeledOperator::diagonal(spaces, &diag)?, party_roles(n, None))
}

/// Rank-one purification `Σ_{a,i} |i⟩^{P}|a⟩^{F} ⊗_j |i_j ⊕ w_j(a), a_j⟩^{A_I^j A_O^j}`,
/// with one past wire and one future wire per party.
pub fn purify(w: &BooleanProcessFunction) -> Result<ProcessMatrix> {
    require_valid(w)?;
    let n = w.n_parties();
    let mut spaces: Vec<SpaceLabel> = (0..n).map(|j| SpaceLabel::qubit(past_wire(j))).collect();
    spaces.extend((0..n).map(|j| SpaceLabel::qubit(future_wire(j))));
    for j in 0..n {
        spaces.push(SpaceLabel::qubit(input_wire(j)));
        spaces.push(SpaceLabel::qubit(output_wire(j)));
    }
    let mut amps = DVector::zeros(1 << (4 * n));
    for a in all_words(n) {
        let x = w.evaluate(&a)?;
        for i in all_words(n) {
            let mut bits: Vec<u8> = i.clone();
            bits.extend(&a);
            for j in 0..n {
                bits.push(i[j] ^ x[j]);
                bits.push(a[j]);
            }
            amps[bits.iter().fold(0usize, |acc, b| acc * 2 + *b as usize)] = one();
        }
    }
    let mut roles = party_roles(n, None);
    for j in 0..n {
        roles.insert(past_wire(j), Role::GlobalPast);
        roles.insert(future_wire(j), Role::GlobalFuture);
    }
    ProcessMatrix::from_pure(LabeledKet::new(spaces, amps)?, roles)
}

fn check_party(w: &BooleanProcessFunction, i: usize) -> Result<()> {
    if i >= w.n_parties() {
        return Err(Error::PartyOutOfRange { index: i, n: w.n_parties() });
    }
    Ok(())
}

/// `|0…0⟩⟨0…0|^{P-wires} * W_rev * 1^{F-wires except i}`: only party i's global future stays open.
pub fn partial_purify(w: &BooleanProcessFunction, i: usize) -> Result<ProcessMatrix> {
    check_party(w, i)?;
    let rev = purify(w)?;
    let n = w.n_parties();
    let names: Vec<String> = (0..n).map(past_wire).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let zeros = LabeledKet::basis(&refs, &vec![0; n])?;
    let contracted = rev.ket().expect("purification is pure").contract(&zeros)?;
    let traced: Vec<String> = (0..n).filter(|j| *j != i).map(future_wire).collect();
    let traced: Vec<&str> = traced.iter().map(|s| s.as_str()).collect();
    let op = contracted.reduced(&traced)?;
    let mut roles = party_roles(n, None);
    roles.insert(future_wire(i), Role::GlobalFuture);
    ProcessMatrix::from_dense(op, roles)
}

fn identity_choi(a: &str, b: &str) -> Result<LabeledOperator> {
    let v = choi_vector_of_unitary(&Matrix2::identity(), SpaceLabel::qubit(a), SpaceLabel::qubit(b))?;
    LabeledOperator::projector(&v)
}

/// Canonical wire order of a (P + parties + F) process.
fn p2f_order(n: usize, skip: Option<usize>, has_target: bool) -> Vec<String> {
    let mut order = vec![PAST.to_string(), FUTURE.to_string()];
    if has_target {
        order.push(TARGET_FUTURE.to_string());
    }
    for j in (0..n).filter(|j| Some(*j) != skip) {
        order.push(input_wire(j));
        order.push(output_wire(j));
    }
    order
}

fn p2f_roles(n: usize, skip: Option<usize>, has_target: bool) -> BTreeMap<String, Role> {
    let mut roles = party_roles(n, skip);
    roles.insert(PAST.into(), Role::GlobalPast);
    roles.insert(FUTURE.into(), Role::GlobalFuture);
    if has_target {
        roles.insert(TARGET_FUTURE.into(), Role::TargetFuture);
    }
    roles
}

/// QC-QC obtained by party i swapping its process wires with a global past
/// `P` (into `A_O^i`) and a target future `Ft` (from `A_I^i`).
pub fn to_qcqc(w: &BooleanProcessFunction, i: usize) -> Result<ProcessMatrix> {
    check_party(w, i)?;
    if !w.check_transparent_control(i) {
        return Err(Error::NotTransparent(i));
    }
    let prev = partial_purify(w, i)?.operator()?;
    let linked = prev
        .link(&identity_choi(PAST, &output_wire(i))?)?
        .link(&identity_choi(&input_wire(i), TARGET_FUTURE)?)?
        .renamed(&future_wire(i), FUTURE)?;
    let n = w.n_parties();
    let order = p2f_order(n, Some(i), true);
    let refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
    ProcessMatrix::from_dense(linked.permute_spaces(&refs)?, p2f_roles(n, Some(i), true))
}

/// The QC-QC written directly in its four-block form:
/// `Σ_{c,c'} |cc⟩⟨c'c'|^{PF} ⊗ Σ_{a∖i} |a∖i⟩⟨a∖i|^{A_O} ⊗ |x^{c}_{∖i}, x_i⟩⟨x^{c'}_{∖i}, x_i|^{A_I F_t}`,
/// where `x^{c}_j` is party j's input with `a_i = c`. Built without link products.
pub fn qcqc_block_form(w: &BooleanProcessFunction, i: usize) -> Result<ProcessMatrix> {
    check_party(w, i)?;
    let n = w.n_parties();
    let order = p2f_order(n, Some(i), true);
    let spaces: Vec<SpaceLabel> = order.iter().map(|s| SpaceLabel::qubit(s.clone())).collect();
    let others: Vec<usize> = (0..n).filter(|j| *j != i).collect();
    let mut op = LabeledOperator::zeros(spaces.clone())?;
    for rest in all_words(n - 1) {
        // wire bits: P, F, Ft, then (A_I^j, A_O^j) for j ≠ i
        let branch = |c: u8| -> Vec<u8> {
            let a = insert_bit(&rest, i, c);
            let mut bits = vec![c, c, w.party_input(i, &a)];
            for &j in &others {
                bits.push(w.party_input(j, &a));
                bits.push(a[j]);
            }
            bits
        };
        for c in 0..2u8 {
            for c2 in 0..2u8 {
                let ket = ket_from_bits(&order, &branch(c))?;
                let bra = ket_from_bits(&order, &branch(c2))?;
                op = op.add(&ket.outer(&bra)?)?;
            }
        }
    }
    ProcessMatrix::from_dense(op, p2f_roles(n, Some(i), true))
}

fn ket_from_bits(order: &[String], bits: &[u8]) -> Result<LabeledKet> {
    let refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
    LabeledKet::basis(&refs, bits)
}

/// The quantum switch with the target initialized to |0⟩:
/// `W_QS = Tr_{Ft} |w⟩⟨w|`, with
/// `|w⟩ = |0⟩^P|0⟩^F|0⟩^{A_I}|1⟩⟩^{A_O B_I}|1⟩⟩^{B_O Ft} + |1⟩^P|1⟩^F|0⟩^{B_I}|X⟩⟩^{B_O A_I}|X⟩⟩^{A_O Ft}`.
pub fn quantum_switch() -> Result<ProcessMatrix> {
    let w = quantum_switch_vector()?;
    let op = w.reduced(&[TARGET_FUTURE])?;
    let order = p2f_order(2, None, false);
    let refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
    ProcessMatrix::from_dense(op.permute_spaces(&refs)?, p2f_roles(2, None, false))
}

/// The vector `|w_QS⟩` on `P, F, A_I^1, A_O^1, A_I^2, A_O^2, Ft`.
pub fn quantum_switch_vector() -> Result<LabeledKet> {
    let q = |name: &str| SpaceLabel::qubit(name);
    let (ai, ao, bi, bo) = (input_wire(0), output_wire(0), input_wire(1), output_wire(1));
    let idv = |a: &str, b: &str| choi_vector_of_unitary(&Matrix2::identity(), q(a), q(b));
    let xv = |a: &str, b: &str| choi_vector_of_unitary(&pauli_x(), q(a), q(b));
    let first = LabeledKet::product(&[
        LabeledKet::basis(&[PAST, FUTURE], &[0, 0])?,
        LabeledKet::basis(&[&ai], &[0])?,
        idv(&ao, &bi)?,
        idv(&bo, TARGET_FUTURE)?,
    ])?;
    let second = LabeledKet::product(&[
        LabeledKet::basis(&[PAST, FUTURE], &[1, 1])?,
        LabeledKet::basis(&[&bi], &[0])?,
        xv(&bo, &ai)?,
        xv(&ao, TARGET_FUTURE)?,
    ])?;
    let sum = first.add(&second)?;
    sum.permute_spaces(&[PAST, FUTURE, &ai, &ao, &bi, &bo, TARGET_FUTURE])
}

/// The fixed-order comb `P ≺ A ≺ B ≺ F` made of identity channels
/// `P → A_I`, `A_O → B_I`, `B_O → F` (and, with a target, `|0⟩` on `Ft`).
pub fn fixed_order_comb(with_target: bool) -> Result<ProcessMatrix> {
    let q = |name: &str| SpaceLabel::qubit(name);
    let (ai, ao, bi, bo) = (input_wire(0), output_wire(0), input_wire(1), output_wire(1));
    let idv = |a: &str, b: &str| choi_vector_of_unitary(&Matrix2::identity(), q(a), q(b));
    let mut parts = vec![idv(PAST, &ai)?, idv(&ao, &bi)?, idv(&bo, FUTURE)?];
    if with_target {
        parts.push(LabeledKet::basis(&[TARGET_FUTURE], &[0])?);
    }
    let v = LabeledKet::product(&parts)?;
    let order = p2f_order(2, None, with_target);
    let refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
    ProcessMatrix::from_pure(v.permute_spaces(&refs)?, p2f_roles(2, None, with_target))
}

/// Outcome of [`validate_process`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub expected_trace: f64,
    pub trace_ok: bool,
    pub samples: usize,
    pub seed: u64,
    /// max over samples of |Σ_outcomes P − 1|
    pub max_deviation: f64,
    pub min_probability: f64,
    pub probabilities_ok: bool,
    pub note: String,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.psd && self.trace_ok && self.probabilities_ok
    }
}

/// A measuring agent for validation: its inputs, outputs, and number of outcomes.
struct Agent {
    inputs: Vec<SpaceLabel>,
    outputs: Vec<SpaceLabel>,
    outcomes: usize,
}

fn agents(w: &ProcessMatrix) -> Vec<Agent> {
    let mut out = Vec::new();
    for s in w.wires_with(|r| r == Role::GlobalPast) {
        out.push(Agent { inputs: vec![], outputs: vec![s], outcomes: 1 });
    }
    for j in w.parties() {
        out.push(Agent {
            inputs: w.wires_with(|r| r == Role::PartyInput(j)),
            outputs: w.wires_with(|r| r == Role::PartyOutput(j)),
            outcomes: 2,
        });
    }
    let futures = w.wires_with(|r| matches!(r, Role::GlobalFuture | Role::TargetFuture));
    if !futures.is_empty() {
        out.push(Agent { inputs: futures, outputs: vec![], outcomes: 2 });
    }
    out
}

const PROB_TOL: f64 = 1e-10;

/// PSD check, trace normalization, and sampled probability normalization
/// over seeded random CPTP instruments for every agent the roles declare.
///
/// The sampled check is necessary, not sufficient, for validity.
pub fn validate_process(w: &ProcessMatrix, samples: usize, seed: u64) -> ValidationReport {
    let (min_eigenvalue, hermitian) = match &w.repr {
        Repr::Dense(op) => (op.min_eigenvalue(), op.is_hermitian(crate::hilbert::HERMITIAN_TOL)),
        Repr::Pure(_) => (0.0, true),
    };
    let psd = hermitian && min_eigenvalue >= -crate::hilbert::PSD_TOL;
    let trace = w.trace();
    let expected_trace = w.expected_trace();
    let trace_ok = (trace - expected_trace).abs() <= 1e-9 * expected_trace.max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ags = agents(w);
    let mut max_dev = 0.0f64;
    let mut min_p = f64::INFINITY;
    let mut failure = None;
    for _ in 0..samples.max(1) {
        let mut instruments = Vec::with_capacity(ags.len());
        for a in &ags {
            match random_instrument(&mut rng, &a.inputs, &a.outputs, a.outcomes) {
                Ok(i) => instruments.push(i),
                Err(e) => failure = Some(e.to_string()),
            }
        }
        if failure.is_some() {
            break;
        }
        let probs = match outcome_probabilities(w, &instruments) {
            Ok(p) => p,
            Err(e) => {
                failure = Some(e.to_string());
                break;
            }
        };
        let total: f64 = probs.iter().sum();
        max_dev = max_dev.max((total - 1.0).abs());
        min_p = min_p.min(probs.iter().copied().fold(f64::INFINITY, f64::min));
    }
    let probabilities_ok = failure.is_none() && max_dev < PROB_TOL && min_p >= -PROB_TOL;
    let note = match failure {
        Some(e) => format!("sampling failed: {e}"),
        None => "sampled probability normalization is a necessary, not sufficient, validity check".into(),
    };
    ValidationReport {
        psd,
        min_eigenvalue,
        trace,
        expected_trace,
        trace_ok,
        samples: samples.max(1),
        seed,
        max_deviation: max_dev,
        min_probability: min_p,
        probabilities_ok,
        note,
    }
}

/// Probabilities of all outcome tuples for instruments given by Kraus Choi vectors.
fn outcome_probabilities(w: &ProcessMatrix, instruments: &[Vec<Vec<LabeledKet>>]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    match &w.repr {
        Repr::Dense(op) => {
            let dense: Vec<Vec<LabeledOperator>> = instruments
                .iter()
                .map(|inst| inst.iter().map(|k| crate::random::choi_from_kraus(k)).collect())
                .collect::<Result<_>>()?;
            dense_tree(op, &dense, 0, &mut out)?;
        }
        Repr::Pure(k) => pure_tree(k, instruments, 0, &mut out)?,
    }
    Ok(out)
}

fn dense_tree(
    cur: &LabeledOperator,
    inst: &[Vec<LabeledOperator>],
    depth: usize,
    out: &mut Vec<f64>,
) -> Result<()> {
    if depth == inst.len() {
        out.push(cur.as_scalar().ok_or_else(|| Error::WireMismatch("uncontracted wires remain".into()))?.re);
        return Ok(());
    }
    for el in &inst[depth] {
        dense_tree(&el.link(cur)?, inst, depth + 1, out)?;
    }
    Ok(())
}

fn pure_tree(cur: &LabeledKet, inst: &[Vec<Vec<LabeledKet>>], depth: usize, out: &mut Vec<f64>) -> Result<()> {
    // probability of an outcome tuple = Σ over Kraus choices of |contraction|²
    fn rec(cur: &LabeledKet, inst: &[Vec<Vec<LabeledKet>>], depth: usize, tuple: usize, acc: &mut Vec<f64>) -> Result<()> {
        if depth == inst.len() {
            let z = cur.amplitudes()[0];
            acc[tuple] += z.norm_sqr();
            return Ok(());
        }
        let k = inst[depth].len();
        for (o, element) in inst[depth].iter().enumerate() {
            for kraus in element {
                rec(&cur.contract(kraus)?, inst, depth + 1, tuple * k + o, acc)?;
            }
        }
        Ok(())
    }
    let total: usize = inst.iter().map(|i| i.len()).product();
    let mut acc = vec![0.0; total];
    rec(cur, inst, depth, 0, &mut acc)?;
    out.extend(acc);
    Ok(())
}

/// Named built-in process matrices.
pub fn builtin_process(name: &str) -> Result<ProcessMatrix> {
    match name {
        "switch" => quantum_switch(),
        "comb" => fixed_order_comb(false),
        "lugano_w" => from_process_function(&crate::process_functions::lugano()),
        "lugano_qcqc" => to_qcqc(&crate::process_functions::lugano(), 2),
        _ => {
            if let Some(inner) = name.strip_prefix("qcqc(").and_then(|s| s.strip_suffix(')')) {
                let (p, party) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::UnknownScenario(name.into()))?;
                let w = crate::process_functions::builtin(p.trim())
                    .ok_or_else(|| Error::UnknownScenario(p.trim().into()))?;
                let i = parse_party(party.trim(), w.n_parties())?;
                to_qcqc(&w, i)
            } else {
                Err(Error::UnknownScenario(name.into()))
            }
        }
    }
}

/// Parses a party given as a letter (`A`..) or a 1-based index.
pub fn parse_party(s: &str, n: usize) -> Result<usize> {
    let idx = if let Ok(k) = s.parse::<usize>() {
        k.checked_sub(1).ok_or_else(|| Error::UnknownScenario(format!("party `{s}`")))?
    } else {
        let c = s.chars().next().ok_or_else(|| Error::UnknownScenario("empty party".into()))?;
        let up = c.to_ascii_uppercase();
        if s.len() != 1 || !up.is_ascii_uppercase() {
            return Err(Error::UnknownScenario(format!("party `{s}`")));
        }
        (up as u8 - b'A') as usize
    };
    if idx >= n {
        return Err(Error::PartyOutOfRange { index: idx, n });
    }
    Ok(idx)
}

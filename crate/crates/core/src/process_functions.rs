//! Boolean process functions: evaluation, logical-consistency checks, NLWE
//! bases and exact classical causal bounds.

use crate::error::{Error, Result};
use crate::hilbert::{LabeledKet, SpaceLabel};
use nalgebra::DVector;
use num_complex::Complex64 as C64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Exact rational used for classical bounds (denominators are powers of two).
pub type Rational = Ratio<u64>;

/// Bit word, one entry (0 or 1) per party.
pub type Word = Vec<u8>;

/// Name of the auxiliary (trusted quantum input) wire of party `j` (0-based).
pub fn aux_wire(j: usize) -> String {
    format!("Aux^{}", j + 1)
}

/// Auxiliary wire of the global-past party.
pub const AUX_PAST: &str = "Aux^P";

/// Unpacks `idx` into `n` bits, most significant first.
pub fn word_from_index(idx: usize, n: usize) -> Word {
    (0..n).map(|k| ((idx >> (n - 1 - k)) & 1) as u8).collect()
}

pub fn index_of_word(w: &[u8]) -> usize {
    w.iter().fold(0usize, |acc, b| acc * 2 + (*b & 1) as usize)
}

/// All words of length `n` in lexicographic order.
pub fn all_words(n: usize) -> impl Iterator<Item = Word> {
    (0..1usize << n).map(move |i| word_from_index(i, n))
}

/// `N` truth tables: `tables[i]` maps the other parties' outputs (ascending
/// party order, first party most significant) to party `i`'s input bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleanProcessFunction {
    pub name: String,
    tables: Vec<Vec<u8>>,
}

impl BooleanProcessFunction {
    pub fn new(name: impl Into<String>, tables: Vec<Vec<u8>>) -> Result<Self> {
        let n = tables.len();
        if n < 2 {
            return Err(Error::InvalidProcessFunction("need at least two parties".into()));
        }
        if n > 16 {
            return Err(Error::TooManyParties { got: n, max: 16 });
        }
        for (i, t) in tables.iter().enumerate() {
            if t.len() != 1 << (n - 1) {
                return Err(Error::InvalidProcessFunction(format!(
                    "table {i} has {} entries, expected {}",
                    t.len(),
                    1 << (n - 1)
                )));
            }
            if t.iter().any(|b| *b > 1) {
                return Err(Error::InvalidProcessFunction(format!("table {i} has a non-bit entry")));
            }
        }
        Ok(BooleanProcessFunction { name: name.into(), tables })
    }

    /// Builds the tables from a rule `f(i, a)` reading the full output word;
    /// `a[i]` is forced to zero so the rule cannot self-signal.
    pub fn from_rule(name: impl Into<String>, n: usize, f: impl Fn(usize, &[u8]) -> u8) -> Result<Self> {
        let tables = (0..n)
            .map(|i| {
                all_words(n - 1)
                    .map(|rest| {
                        let full = insert_bit(&rest, i, 0);
                        f(i, &full) & 1
                    })
                    .collect()
            })
            .collect();
        Self::new(name, tables)
    }

    pub fn n_parties(&self) -> usize {
        self.tables.len()
    }

    pub fn tables(&self) -> &[Vec<u8>] {
        &self.tables
    }

    /// `w_i(a_{∖i})` read from the full word (a_i is ignored).
    pub fn party_input(&self, i: usize, outputs: &[u8]) -> u8 {
        self.tables[i][index_of_word(&remove_bit(outputs, i))]
    }

    pub fn evaluate(&self, outputs: &[u8]) -> Result<Word> {
        let n = self.n_parties();
        if outputs.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: outputs.len() });
        }
        Ok((0..n).map(|i| self.party_input(i, outputs)).collect())
    }

    fn eval_unchecked(&self, outputs: &[u8]) -> Word {
        (0..self.n_parties()).map(|i| self.party_input(i, outputs)).collect()
    }

    /// Exactly one fixed point for every tuple of deterministic local maps
    /// (constant 0, constant 1, identity, negation per party).
    pub fn check_unique_fixed_point(&self) -> bool {
        let n = self.n_parties();
        let words: Vec<(Word, Word)> = all_words(n).map(|a| {
            let x = self.eval_unchecked(&a);
            (a, x)
        }).collect();
        (0..1usize << (2 * n)).all(|code| {
            let map = |k: usize, x: u8| -> u8 {
                match (code >> (2 * k)) & 3 {
                    0 => 0,
                    1 => 1,
                    2 => x,
                    _ => x ^ 1,
                }
            };
            words
                .iter()
                .filter(|(a, x)| (0..n).all(|k| a[k] == map(k, x[k])))
                .count()
                == 1
        })
    }

    /// Every party's input depends on at least one other party's output.
    pub fn check_no_global_past(&self) -> bool {
        self.global_past_party().is_none()
    }

    fn global_past_party(&self) -> Option<usize> {
        let n = self.n_parties();
        (0..n).find(|&i| {
            let t = &self.tables[i];
            t.iter().all(|b| *b == t[0])
        })
    }

    /// For every `a` with `w_i(a_{∖i}) = 1`, the other parties' inputs do not
    /// depend on `a_i`.
    pub fn check_transparent_control(&self, i: usize) -> bool {
        let n = self.n_parties();
        if i >= n {
            return false;
        }
        all_words(n - 1).all(|rest| {
            let a0 = insert_bit(&rest, i, 0);
            if self.party_input(i, &a0) == 0 {
                return true;
            }
            let a1 = insert_bit(&rest, i, 1);
            (0..n).filter(|&j| j != i).all(|j| self.party_input(j, &a0) == self.party_input(j, &a1))
        })
    }

    /// Parties satisfying the transparent control condition.
    pub fn transparent_parties(&self) -> Vec<usize> {
        (0..self.n_parties()).filter(|&i| self.check_transparent_control(i)).collect()
    }

    /// The reduced function on parties `j ≠ i` with `a_i` fixed to `f`:
    /// returns `w_j(a)` for a full word whose `i`-th bit is replaced by `f`.
    pub fn reduced_input(&self, i: usize, f: u8, j: usize, outputs: &[u8]) -> u8 {
        let mut a = outputs.to_vec();
        a[i] = f;
        self.party_input(j, &a)
    }
}

pub(crate) fn remove_bit(w: &[u8], i: usize) -> Word {
    w.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, b)| *b).collect()
}

pub(crate) fn insert_bit(w: &[u8], i: usize, b: u8) -> Word {
    let mut out = w.to_vec();
    out.insert(i, b);
    out
}

/// Lugano process: `x = c(b⊕1), y = a(c⊕1), z = b(a⊕1)`.
pub fn lugano() -> BooleanProcessFunction {
    BooleanProcessFunction::from_rule("lugano", 3, |i, a| {
        let (x, y, z) = (a[0], a[1], a[2]);
        match i {
            0 => z & (y ^ 1),
            1 => x & (z ^ 1),
            _ => y & (x ^ 1),
        }
    })
    .expect("valid tables")
}

/// Four-party generalization with inputs `x = d(b⊕1)(c⊕1)` and cyclic shifts.
pub fn agb4() -> BooleanProcessFunction {
    BooleanProcessFunction::from_rule("agb4", 4, |i, a| {
        let (p, q, r) = (a[(i + 3) % 4], a[(i + 1) % 4], a[(i + 2) % 4]);
        p & (q ^ 1) & (r ^ 1)
    })
    .expect("valid tables")
}

/// Four-party process built from the Ardehali–Svetlichny polynomial.
pub fn ardehali_svetlichny4() -> BooleanProcessFunction {
    BooleanProcessFunction::from_rule("ardehali_svetlichny4", 4, |i, v| {
        let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
        match i {
            0 => (b & c) ^ (c & d) ^ (b & d) ^ c,
            1 => (a & c) ^ (c & d) ^ (a & d) ^ a ^ d,
            2 => (a & b) ^ (b & d) ^ (a & d) ^ b,
            _ => (a & b) ^ (b & c) ^ (a & c) ^ a ^ c,
        }
    })
    .expect("valid tables")
}

/// Four-party process with `x = b(c⊕d)`, `y = c(d(a⊕1)⊕1)`,
/// `z = d(a⊕1)(b⊕1)`, `w = a(b⊕1)(c⊕1)`.
pub fn tobar_costa4() -> BooleanProcessFunction {
    BooleanProcessFunction::from_rule("tobar_costa4", 4, |i, v| {
        let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
        match i {
            0 => b & (c ^ d),
            1 => c & ((d & (a ^ 1)) ^ 1),
            2 => d & (a ^ 1) & (b ^ 1),
            _ => a & (b ^ 1) & (c ^ 1),
        }
    })
    .expect("valid tables")
}

/// All inputs constantly zero.
pub fn constant(n: usize) -> BooleanProcessFunction {
    BooleanProcessFunction::from_rule(format!("constant{n}"), n, |_, _| 0).expect("valid tables")
}

/// The inconsistent loop `x = b`, `y = a⊕1` (no fixed point for echoing parties).
pub fn bipartite_loop() -> BooleanProcessFunction {
    BooleanProcessFunction::new("bipartite_loop", vec![vec![0, 1], vec![1, 0]]).expect("valid tables")
}

/// Returns a built-in process function by name.
pub fn builtin(name: &str) -> Option<BooleanProcessFunction> {
    match name {
        "lugano" => Some(lugano()),
        "agb4" => Some(agb4()),
        "ardehali_svetlichny4" => Some(ardehali_svetlichny4()),
        "tobar_costa4" => Some(tobar_costa4()),
        "constant3" => Some(constant(3)),
        "bipartite_loop" => Some(bipartite_loop()),
        _ => None,
    }
}

pub const BUILTIN_NAMES: [&str; 6] =
    ["lugano", "agb4", "ardehali_svetlichny4", "tobar_costa4", "constant3", "bipartite_loop"];

/// Single-qubit labels of NLWE basis states: `0`, `1`, `+`, `−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ell {
    Zero,
    One,
    Plus,
    Minus,
}

impl Ell {
    pub fn from_bit(bit: u8, hadamard: u8) -> Ell {
        match (bit & 1, hadamard & 1) {
            (0, 0) => Ell::Zero,
            (1, 0) => Ell::One,
            (0, _) => Ell::Plus,
            _ => Ell::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Ell::Zero => '0',
            Ell::One => '1',
            Ell::Plus => '+',
            Ell::Minus => '-',
        }
    }

    /// Coarse-graining to the basis setting: 0,1 ↦ 0 and +,− ↦ 1.
    pub fn setting(self) -> u8 {
        match self {
            Ell::Zero | Ell::One => 0,
            Ell::Plus | Ell::Minus => 1,
        }
    }

    pub fn vector(self) -> [C64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        match self {
            Ell::Zero => [l, o],
            Ell::One => [o, l],
            Ell::Plus => [C64::new(h, 0.0), C64::new(h, 0.0)],
            Ell::Minus => [C64::new(h, 0.0), C64::new(-h, 0.0)],
        }
    }
}

/// Product state `⊗_k |ℓ_k⟩` on the given wires.
pub fn product_ket(wires: &[String], ells: &[Ell]) -> Result<LabeledKet> {
    let kets: Vec<LabeledKet> = wires
        .iter()
        .zip(ells)
        .map(|(w, e)| {
            let v = e.vector();
            LabeledKet::new(vec![SpaceLabel::qubit(w.clone())], DVector::from_column_slice(&v))
        })
        .collect::<Result<_>>()?;
    LabeledKet::product(&kets)
}

/// Renders a label string like `+01`.
pub fn ell_string(ells: &[Ell]) -> String {
    ells.iter().map(|e| e.symbol()).collect()
}

/// One basis element `H^{w(a)}|a⟩`.
#[derive(Debug, Clone)]
pub struct NlweState {
    pub word: Word,
    pub settings: Word,
    pub ells: Vec<Ell>,
    pub ket: LabeledKet,
}

/// The basis `{H^{w(a)}|a⟩}_a` on auxiliary wires.
#[derive(Debug, Clone)]
pub struct NlweBasis {
    pub wires: Vec<String>,
    pub states: Vec<NlweState>,
}

pub fn nlwe_basis(w: &BooleanProcessFunction) -> Result<NlweBasis> {
    if let Some(i) = w.global_past_party() {
        return Err(Error::HasGlobalPast(i));
    }
    let n = w.n_parties();
    nlwe_basis_on(w, &(0..n).map(aux_wire).collect::<Vec<_>>())
}

/// Same basis on caller-chosen wire names (no global-past check).
pub fn nlwe_basis_on(w: &BooleanProcessFunction, wires: &[String]) -> Result<NlweBasis> {
    let n = w.n_parties();
    if wires.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: wires.len() });
    }
    let states = all_words(n)
        .map(|a| {
            let x = w.eval_unchecked(&a);
            let ells: Vec<Ell> = a.iter().zip(&x).map(|(b, h)| Ell::from_bit(*b, *h)).collect();
            let ket = product_ket(wires, &ells)?;
            Ok(NlweState { word: a, settings: x, ells, ket })
        })
        .collect::<Result<_>>()?;
    Ok(NlweBasis { wires: wires.to_vec(), states })
}

/// Deterministic causal strategy: the acting party, the input it receives,
/// and the continuation for each of its output bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyTree {
    Leaf,
    Node { party: usize, input: u8, next: Box<[StrategyTree; 2]> },
}

impl StrategyTree {
    /// Checks that every root-to-leaf path visits each of `n` parties once.
    pub fn is_complete(&self, n: usize) -> bool {
        fn go(t: &StrategyTree, seen: &mut Vec<usize>, n: usize) -> bool {
            match t {
                StrategyTree::Leaf => seen.len() == n,
                StrategyTree::Node { party, next, .. } => {
                    if *party >= n || seen.contains(party) {
                        return false;
                    }
                    seen.push(*party);
                    let ok = go(&next[0], seen, n) && go(&next[1], seen, n);
                    seen.pop();
                    ok
                }
            }
        }
        go(self, &mut Vec::new(), n)
    }

    /// Inputs delivered to each party when the parties output `outputs`.
    pub fn inputs_for(&self, outputs: &[u8]) -> Word {
        let mut x = vec![0u8; outputs.len()];
        let mut t = self;
        while let StrategyTree::Node { party, input, next } = t {
            x[*party] = *input;
            t = &next[outputs[*party] as usize];
        }
        x
    }

    /// Trees where every party receives input 0.
    pub fn all_zero(n: usize) -> StrategyTree {
        fn build(k: usize, n: usize) -> StrategyTree {
            if k == n {
                StrategyTree::Leaf
            } else {
                StrategyTree::Node { party: k, input: 0, next: Box::new([build(k + 1, n), build(k + 1, n)]) }
            }
        }
        build(0, n)
    }
}

/// Every complete strategy tree on `n` parties (explicit enumeration; the
/// count grows as `T(k) = 2k·T(k−1)²`, i.e. 1536 trees for three parties).
pub fn enumerate_strategy_trees(n: usize) -> Vec<StrategyTree> {
    fn go(remaining: &[usize]) -> Vec<StrategyTree> {
        if remaining.is_empty() {
            return vec![StrategyTree::Leaf];
        }
        let mut out = Vec::new();
        for (pos, &k) in remaining.iter().enumerate() {
            let mut rest = remaining.to_vec();
            rest.remove(pos);
            let subs = go(&rest);
            for input in 0..2u8 {
                for s0 in &subs {
                    for s1 in &subs {
                        out.push(StrategyTree::Node {
                            party: k,
                            input,
                            next: Box::new([s0.clone(), s1.clone()]),
                        });
                    }
                }
            }
        }
        out
    }
    go(&(0..n).collect::<Vec<_>>())
}

/// Probability that all delivered inputs equal `w(a)` for uniformly random outputs `a`.
pub fn lugano_game_value_of_tree(w: &BooleanProcessFunction, tree: &StrategyTree) -> Rational {
    let n = w.n_parties();
    let wins = all_words(n).filter(|a| tree.inputs_for(a) == w.eval_unchecked(a)).count();
    Rational::new(wins as u64, 1 << n)
}

/// Average success of identifying the NLWE basis states of `w` when party k
/// measures `H^{x_k}` with `x_k` delivered by the tree and the outcome word is the guess.
pub fn discrimination_value_of_tree(w: &BooleanProcessFunction, tree: &StrategyTree) -> Rational {
    let n = w.n_parties();
    let mut total = Rational::from_integer(0);
    for label in all_words(n) {
        let x = tree.inputs_for(&label);
        let setting = w.eval_unchecked(&label);
        let mut p = Rational::from_integer(1);
        for k in 0..n {
            if x[k] != setting[k] {
                p *= Rational::new(1, 2);
            }
        }
        total += p;
    }
    total / Rational::from_integer(1 << n)
}

/// Result of an exact causal-bound computation.
#[derive(Debug, Clone)]
pub struct CausalBound {
    pub value: Rational,
    pub tree: StrategyTree,
}

const MAX_BOUND_PARTIES: usize = 4;

#[derive(Clone, Copy)]
enum Objective {
    LuganoGame,
    Discrimination,
}

/// Dynamic program over histories: the optimum over all trees decomposes
/// into independent optima of the subtrees below each output branch.
fn optimal_tree(w: &BooleanProcessFunction, obj: Objective) -> Result<CausalBound> {
    let n = w.n_parties();
    if n > MAX_BOUND_PARTIES {
        return Err(Error::TooManyParties { got: n, max: MAX_BOUND_PARTIES });
    }
    // history entries: (party, input, output)
    fn rec(
        w: &BooleanProcessFunction,
        obj: Objective,
        hist: &mut Vec<(usize, u8, u8)>,
    ) -> (Rational, StrategyTree) {
        let n = w.n_parties();
        if hist.len() == n {
            let mut a = vec![0u8; n];
            let mut x = vec![0u8; n];
            for &(k, xi, ai) in hist.iter() {
                a[k] = ai;
                x[k] = xi;
            }
            let target = w.eval_unchecked(&a);
            let v = match obj {
                Objective::LuganoGame => {
                    if x == target {
                        Rational::new(1, 1 << n)
                    } else {
                        Rational::from_integer(0)
                    }
                }
                Objective::Discrimination => {
                    let mut p = Rational::new(1, 1 << n);
                    for k in 0..n {
                        if x[k] != target[k] {
                            p *= Rational::new(1, 2);
                        }
                    }
                    p
                }
            };
            return (v, StrategyTree::Leaf);
        }
        let mut best: Option<(Rational, StrategyTree)> = None;
        for k in 0..n {
            if hist.iter().any(|h| h.0 == k) {
                continue;
            }
            for input in 0..2u8 {
                let mut sum = Rational::from_integer(0);
                let mut kids = Vec::with_capacity(2);
                for out in 0..2u8 {
                    hist.push((k, input, out));
                    let (v, t) = rec(w, obj, hist);
                    hist.pop();
                    sum += v;
                    kids.push(t);
                }
                if best.as_ref().map_or(true, |(b, _)| sum > *b) {
                    let t1 = kids.pop().unwrap();
                    let t0 = kids.pop().unwrap();
                    best = Some((sum, StrategyTree::Node { party: k, input, next: Box::new([t0, t1]) }));
                }
            }
        }
        best.expect("at least one party remains")
    }
    let (value, tree) = rec(w, obj, &mut Vec::new());
    Ok(CausalBound { value, tree })
}

/// Maximum causal success probability of the guessing game `x = w(a)`.
pub fn causal_bound_lugano_game(w: &BooleanProcessFunction) -> Result<CausalBound> {
    optimal_tree(w, Objective::LuganoGame)
}

/// Maximum causal success of discriminating `nlwe_basis(w)` with
/// Hadamard-power measurements and adaptively delivered settings.
pub fn causal_bound_discrimination(w: &BooleanProcessFunction) -> Result<CausalBound> {
    optimal_tree(w, Objective::Discrimination)
}

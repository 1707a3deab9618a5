//! Causal-separability tests for distributed measurements as conic
//! feasibility problems.

use super::conic::{
    check_blocks, check_certificate, range_basis, solve_feasibility, Block, ConicProblem, Constraint,
    FeasibilityOptions, Status,
};
use crate::hilbert::{LabeledOperator, SpaceLabel};
use crate::measurements::Dpovm;
use crate::process_functions::Word;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::collections::BTreeSet;

/// Rank cut-off used when restricting decomposition blocks to the face of an effect.
pub const FACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branches {
    /// `P≺A≺B` and `P≺B≺A`.
    Both,
    /// `P≺A≺B` only.
    OnlyAb,
}

/// Named families of decomposition elements, per causal branch and chain level.
#[derive(Debug, Clone)]
pub struct CausalDecomposition {
    pub families: Vec<(String, Vec<(Word, LabeledOperator)>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateSummary {
    /// `⟨rhs, y⟩` recomputed from the stored multipliers.
    pub value: f64,
    /// Smallest eigenvalue of the dual slack over all blocks.
    pub min_dual_eigenvalue: f64,
    /// Certified lower bound on the constraint residual of any PSD candidate.
    pub residual_lower_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SdpResult {
    pub status: Status,
    pub definition: String,
    /// Max constraint violation of the returned decomposition (re-evaluated on full blocks).
    pub residual: f64,
    pub objective: Option<f64>,
    pub iterations: usize,
    pub seed: Option<u64>,
    pub certificate: Option<CertificateSummary>,
    #[serde(skip)]
    pub decomposition: Option<CausalDecomposition>,
}

/// Operator algebra on the D-POVM's own wires.
#[derive(Clone)]
struct Wires {
    all: Vec<SpaceLabel>,
}

impl Wires {
    fn sub(&self, idx: &[usize]) -> Vec<SpaceLabel> {
        idx.iter().map(|&i| self.all[i].clone()).collect()
    }

    fn dim(&self, idx: &[usize]) -> usize {
        idx.iter().map(|&i| self.all[i].dim).product()
    }

    /// `Tr_{others} m` for m on the wires `on`, keeping `keep` (in that order).
    fn trace_to(&self, m: &DMatrix<C64>, on: &[usize], keep: &[usize]) -> DMatrix<C64> {
        let op = LabeledOperator::new(self.sub(on), m.clone()).expect("consistent wires");
        let drop: Vec<&str> =
            on.iter().filter(|i| !keep.contains(i)).map(|&i| self.all[i].name.as_str()).collect();
        op.partial_trace(&drop).and_then(|o| o.aligned_to(&self.sub(keep))).expect("subset").into_matrix()
    }

    /// `m ⊗ 1` from the wires `on` to the wires `to` (a superset), ordered as `to`.
    fn extend(&self, m: &DMatrix<C64>, on: &[usize], to: &[usize]) -> DMatrix<C64> {
        let op = LabeledOperator::new(self.sub(on), m.clone()).expect("consistent wires");
        let extra: Vec<SpaceLabel> = to.iter().filter(|i| !on.contains(i)).map(|&i| self.all[i].clone()).collect();
        let id = LabeledOperator::identity(extra).expect("small");
        op.tensor(&id).and_then(|o| o.aligned_to(&self.sub(to))).expect("superset").into_matrix()
    }
}

fn alphabets(d: &Dpovm) -> Vec<Vec<u8>> {
    let n = d.wires.len();
    (0..n)
        .map(|k| d.effects.iter().map(|(w, _)| w[k]).collect::<BTreeSet<u8>>().into_iter().collect())
        .collect()
}

fn product_words(alpha: &[Vec<u8>]) -> Vec<Word> {
    let mut out = vec![vec![]];
    for a in alpha {
        out = out.into_iter().flat_map(|w: Word| a.iter().map(move |v| [w.clone(), vec![*v]].concat())).collect();
    }
    out
}

fn effect_or_zero(d: &Dpovm, w: &Word) -> DMatrix<C64> {
    let n = d.wires.iter().map(|s| s.dim).product();
    d.effect(w).map(|e| e.matrix().clone()).unwrap_or_else(|| DMatrix::zeros(n, n))
}

fn face(e: &DMatrix<C64>) -> DMatrix<C64> {
    let scale = e.iter().map(|z| z.norm()).fold(1.0, f64::max);
    range_basis(e, FACE_TOL * scale)
}

fn kernel_projector(v: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::identity(v.nrows(), v.nrows()) - v * v.adjoint()
}

fn sum_blocks(x: &[DMatrix<C64>], idx: &[usize], n: usize) -> DMatrix<C64> {
    let mut s = DMatrix::zeros(n, n);
    for &i in idx {
        s += &x[i];
    }
    s
}

fn eye(n: usize) -> DMatrix<C64> {
    DMatrix::identity(n, n)
}

/// Index layout of the (P+2+F) problem.
pub struct P2fLayout {
    pub words: Vec<Word>,
    pub g: Vec<usize>,
    pub g2: Vec<usize>,
    pub ea: Vec<usize>,
    pub eb: Vec<usize>,
    pub ep: usize,
    pub ep2: Option<usize>,
    pub alpha: Vec<Vec<u8>>,
}

/// Builds the (P+2+F) separability problem for wires `(P, A, B)`.
///
/// Variables: `G_{fab}` (`P≺A≺B`), `G'_{fab}` (`P≺B≺A`), `E^{P≺A}_a` on (P,A),
/// `E^{P≺B}_b` on (P,B), `E^{P[A≺B]}`, `E^{P[B≺A]}` on P; the intermediate
/// `E_{a,b}` levels are the sums `Σ_f G_{fab}` and need no variables.
/// With `target = None` the decomposition rows are dropped (free D-POVM).
pub fn p2f_problem(
    wires: &[SpaceLabel],
    alpha: Vec<Vec<u8>>,
    target: Option<&Dpovm>,
    branches: Branches,
    facial: bool,
) -> (ConicProblem, P2fLayout) {
    let w = Wires { all: wires.to_vec() };
    let (n, npa, npb, np) = (w.dim(&[0, 1, 2]), w.dim(&[0, 1]), w.dim(&[0, 2]), w.dim(&[0]));
    let words = product_words(&alpha);
    let both = branches == Branches::Both;
    let mut blocks = Vec::new();
    let mut lifts = Vec::new();
    for word in &words {
        let v = match (facial, target) {
            (true, Some(d)) => Some(face(&effect_or_zero(d, word))),
            _ => None,
        };
        lifts.push(v);
    }
    let mut g = Vec::new();
    for (k, word) in words.iter().enumerate() {
        g.push(blocks.len());
        blocks.push(Block { name: format!("G[P<A<B]{word:?}"), dim: n, lift: lifts[k].clone() });
    }
    let mut g2 = Vec::new();
    if both {
        for (k, word) in words.iter().enumerate() {
            g2.push(blocks.len());
            blocks.push(Block { name: format!("G[P<B<A]{word:?}"), dim: n, lift: lifts[k].clone() });
        }
    }
    let ea: Vec<usize> = alpha[1]
        .iter()
        .map(|a| {
            blocks.push(Block::full(format!("E[P<A]_{a}"), npa));
            blocks.len() - 1
        })
        .collect();
    let eb: Vec<usize> = if both {
        alpha[2]
            .iter()
            .map(|b| {
                blocks.push(Block::full(format!("E[P<B]_{b}"), npb));
                blocks.len() - 1
            })
            .collect()
    } else {
        vec![]
    };
    blocks.push(Block::full("E[P;A<B]", np));
    let ep = blocks.len() - 1;
    let ep2 = if both {
        blocks.push(Block::full("E[P;B<A]", np));
        Some(blocks.len() - 1)
    } else {
        None
    };

    let mut constraints = Vec::new();
    let mut hints = Vec::new();
    let mut u = Vec::new();
    if let Some(d) = target {
        for (k, word) in words.iter().enumerate() {
            let (i, i2) = (g[k], g2.get(k).copied());
            constraints.push(Constraint {
                name: format!("decomposition {word:?}"),
                dim: n,
                map: Box::new(move |x| match i2 {
                    Some(j) => &x[i] + &x[j],
                    None => x[i].clone(),
                }),
                rhs: effect_or_zero(d, word),
            });
            if let Some(v) = &lifts[k] {
                hints.push((constraints.len() - 1, kernel_projector(v)));
            }
            u.push(eye(n) * C64::new(2.0, 0.0));
        }
    }
    let sel = |pos: usize, val: u8, family: &[usize]| -> Vec<usize> {
        words.iter().enumerate().filter(|(_, wd)| wd[pos] == val).map(|(k, _)| family[k]).collect()
    };
    // Σ_{f,b} G_{fab} = E^{P≺A}_a ⊗ 1^B
    for (t, a) in alpha[1].iter().enumerate() {
        let idx = sel(1, *a, &g);
        let (wc, ia) = (w.clone(), ea[t]);
        constraints.push(Constraint {
            name: format!("A-marginal a={a}"),
            dim: n,
            map: Box::new(move |x| sum_blocks(x, &idx, n) - wc.extend(&x[ia], &[0, 1], &[0, 1, 2])),
            rhs: DMatrix::zeros(n, n),
        });
        u.push(-eye(n));
    }
    if both {
        for (t, b) in alpha[2].iter().enumerate() {
            let idx = sel(2, *b, &g2);
            let (wc, ib) = (w.clone(), eb[t]);
            constraints.push(Constraint {
                name: format!("B-marginal b={b}"),
                dim: n,
                map: Box::new(move |x| sum_blocks(x, &idx, n) - wc.extend(&x[ib], &[0, 2], &[0, 1, 2])),
                rhs: DMatrix::zeros(n, n),
            });
            u.push(-eye(n));
        }
    }
    // Σ_a E^{P≺A}_a = E^{P[A≺B]} ⊗ 1^A
    {
        let (wc, idx) = (w.clone(), ea.clone());
        constraints.push(Constraint {
            name: "A-first".into(),
            dim: npa,
            map: Box::new(move |x| sum_blocks(x, &idx, npa) - wc.extend(&x[ep], &[0], &[0, 1])),
            rhs: DMatrix::zeros(npa, npa),
        });
        u.push(-eye(npa));
    }
    if let Some(ep2) = ep2 {
        let (wc, idx) = (w.clone(), eb.clone());
        constraints.push(Constraint {
            name: "B-first".into(),
            dim: npb,
            map: Box::new(move |x| sum_blocks(x, &idx, npb) - wc.extend(&x[ep2], &[0], &[0, 2])),
            rhs: DMatrix::zeros(npb, npb),
        });
        u.push(-eye(npb));
    }
    constraints.push(Constraint {
        name: "normalization".into(),
        dim: np,
        map: Box::new(move |x| match ep2 {
            Some(j) => &x[ep] + &x[j],
            None => x[ep].clone(),
        }),
        rhs: eye(np),
    });
    u.push(-eye(np));
    // with target rows, Aᵀu = 1 on G blocks and (d−1)·1 on the marginals;
    // without them no positive shift of this form exists
    let identity_multiplier = target.map(|_| u);
    let layout = P2fLayout { words, g, g2, ea, eb, ep, ep2, alpha };
    (ConicProblem { blocks, constraints, kernel_hints: hints, identity_multiplier }, layout)
}

fn summary(p: &ConicProblem, cert: &super::conic::Certificate) -> CertificateSummary {
    let (value, min_ev) = check_certificate(p, cert);
    CertificateSummary { value, min_dual_eigenvalue: min_ev, residual_lower_bound: cert.residual_lower_bound }
}

fn three_wires(d: &Dpovm) -> bool {
    d.wires.len() == 3 && d.effects.iter().all(|(w, _)| w.len() == 3)
}

fn inconclusive(definition: &str, why: &str) -> SdpResult {
    SdpResult {
        status: Status::Inconclusive,
        definition: format!("{definition} ({why})"),
        residual: f64::INFINITY,
        objective: None,
        iterations: 0,
        seed: None,
        certificate: None,
        decomposition: None,
    }
}

pub const P2F_DEFINITION: &str = "(P+2+F) causal separability: E = E[P<A<B] + E[P<B<A] with chained marginals";
pub const TRI_DEFINITION: &str = "tripartite causal separability: E = E(A) + E(B) + E(C), six ordered components";

/// Decides whether a D-POVM on `(P, A, B)` with words `(f, a, b)` is causally
/// separable in the (P+2+F) sense.
pub fn causal_sep_feasibility_p2f(d: &Dpovm, feas_tol: f64) -> SdpResult {
    causal_sep_feasibility_p2f_with(d, Branches::Both, FeasibilityOptions { feas_tol, ..Default::default() })
}

pub fn causal_sep_feasibility_p2f_with(d: &Dpovm, branches: Branches, opts: FeasibilityOptions) -> SdpResult {
    if !three_wires(d) {
        return inconclusive(P2F_DEFINITION, "expects three wires and three-letter outcomes");
    }
    let (p, layout) = p2f_problem(&d.wires, alphabets(d), Some(d), branches, true);
    let sol = solve_feasibility(&p, opts);
    let (residual, _) = check_blocks(&p, &sol.blocks);
    let mut families = Vec::new();
    let fam = |name: &str, idx: &[usize], words: &[Word], wires: Vec<SpaceLabel>| {
        (
            name.to_string(),
            idx.iter()
                .zip(words)
                .map(|(i, w)| (w.clone(), LabeledOperator::new(wires.clone(), sol.blocks[*i].clone()).expect("block")))
                .collect::<Vec<_>>(),
        )
    };
    let wd = Wires { all: d.wires.clone() };
    families.push(fam("P<A<B", &layout.g, &layout.words, d.wires.clone()));
    if !layout.g2.is_empty() {
        families.push(fam("P<B<A", &layout.g2, &layout.words, d.wires.clone()));
    }
    let a_words: Vec<Word> = layout.alpha[1].iter().map(|a| vec![*a]).collect();
    families.push(fam("P<A marginal", &layout.ea, &a_words, wd.sub(&[0, 1])));
    if !layout.eb.is_empty() {
        let b_words: Vec<Word> = layout.alpha[2].iter().map(|b| vec![*b]).collect();
        families.push(fam("P<B marginal", &layout.eb, &b_words, wd.sub(&[0, 2])));
    }
    families.push(fam("P[A<B]", &[layout.ep], &[vec![]], wd.sub(&[0])));
    if let Some(j) = layout.ep2 {
        families.push(fam("P[B<A]", &[j], &[vec![]], wd.sub(&[0])));
    }
    SdpResult {
        status: sol.status,
        definition: P2F_DEFINITION.into(),
        residual,
        objective: None,
        iterations: sol.iterations,
        seed: None,
        certificate: sol.certificate.as_ref().filter(|_| sol.status == Status::Infeasible).map(|c| summary(&p, c)),
        decomposition: Some(CausalDecomposition { families }),
    }
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 2, 0], [1, 0, 2], [2, 0, 1], [2, 1, 0]];

pub fn tripartite_problem(d: &Dpovm, facial: bool) -> (ConicProblem, Vec<Word>) {
    let w = Wires { all: d.wires.clone() };
    let alpha = alphabets(d);
    let words = product_words(&alpha);
    let n = w.dim(&[0, 1, 2]);
    let mut blocks = Vec::new();
    let lifts: Vec<Option<DMatrix<C64>>> =
        words.iter().map(|wd| if facial { Some(face(&effect_or_zero(d, wd))) } else { None }).collect();
    // block index of (perm, word)
    let mut idx = vec![vec![0usize; words.len()]; PERMS.len()];
    for (pi, perm) in PERMS.iter().enumerate() {
        for (k, wd) in words.iter().enumerate() {
            idx[pi][k] = blocks.len();
            blocks.push(Block { name: format!("E{perm:?}{wd:?}"), dim: n, lift: lifts[k].clone() });
        }
    }
    let mut constraints = Vec::new();
    let mut hints = Vec::new();
    let mut u = Vec::new();
    for (k, wd) in words.iter().enumerate() {
        let members: Vec<usize> = (0..PERMS.len()).map(|pi| idx[pi][k]).collect();
        constraints.push(Constraint {
            name: format!("decomposition {wd:?}"),
            dim: n,
            map: Box::new(move |x| sum_blocks(x, &members, n)),
            rhs: effect_or_zero(d, wd),
        });
        if let Some(v) = &lifts[k] {
            hints.push((constraints.len() - 1, kernel_projector(v)));
        }
        u.push(eye(n));
    }
    let all = [0usize, 1, 2];
    for (pi, perm) in PERMS.iter().enumerate() {
        let [x, y, z] = *perm;
        // Σ_z E_{xyz} = E_{xy} ⊗ 1^Z
        for vx in &alpha[x] {
            for vy in &alpha[y] {
                let members: Vec<usize> = words
                    .iter()
                    .enumerate()
                    .filter(|(_, wd)| wd[x] == *vx && wd[y] == *vy)
                    .map(|(k, _)| idx[pi][k])
                    .collect();
                let wc = w.clone();
                let mut keep = vec![x, y];
                keep.sort();
                constraints.push(Constraint {
                    name: format!("{perm:?} last party Z no-signalling"),
                    dim: n,
                    map: Box::new(move |m| {
                        let s = sum_blocks(m, &members, n);
                        let t = wc.trace_to(&s, &all, &keep) * C64::new(1.0 / wc.dim(&[z]) as f64, 0.0);
                        &s - wc.extend(&t, &keep, &all)
                    }),
                    rhs: DMatrix::zeros(n, n),
                });
                u.push(DMatrix::zeros(n, n));
            }
        }
        // Σ_{y,z} E_{xyz} = E_x ⊗ 1^{YZ}
        for vx in &alpha[x] {
            let members: Vec<usize> =
                words.iter().enumerate().filter(|(_, wd)| wd[x] == *vx).map(|(k, _)| idx[pi][k]).collect();
            let wc = w.clone();
            constraints.push(Constraint {
                name: format!("{perm:?} first party X no-signalling"),
                dim: n,
                map: Box::new(move |m| {
                    let s = sum_blocks(m, &members, n);
                    let t = wc.trace_to(&s, &all, &[x]) * C64::new(1.0 / wc.dim(&[y, z]) as f64, 0.0);
                    &s - wc.extend(&t, &[x], &all)
                }),
                rhs: DMatrix::zeros(n, n),
            });
            u.push(DMatrix::zeros(n, n));
        }
    }
    // each "X first" part sums to a multiple of the identity
    for first in 0..3 {
        let members: Vec<usize> = PERMS
            .iter()
            .enumerate()
            .filter(|(_, p)| p[0] == first)
            .flat_map(|(pi, _)| idx[pi].clone())
            .collect();
        constraints.push(Constraint {
            name: format!("first party {first} normalization"),
            dim: n,
            map: Box::new(move |m| {
                let s = sum_blocks(m, &members, n);
                let tr = s.trace() / C64::new(n as f64, 0.0);
                &s - eye(n) * tr
            }),
            rhs: DMatrix::zeros(n, n),
        });
        u.push(DMatrix::zeros(n, n));
    }
    (ConicProblem { blocks, constraints, kernel_hints: hints, identity_multiplier: Some(u) }, words)
}

/// Decides whether a tripartite D-POVM is a sum of "X first" parts, each built
/// from two ordered components with the no-signalling chain of its order.
pub fn causal_sep_feasibility_tripartite(d: &Dpovm, feas_tol: f64) -> SdpResult {
    if !three_wires(d) {
        return inconclusive(TRI_DEFINITION, "expects three wires and three-letter outcomes");
    }
    let (p, words) = tripartite_problem(d, true);
    let sol = solve_feasibility(&p, FeasibilityOptions { feas_tol, ..Default::default() });
    let (residual, _) = check_blocks(&p, &sol.blocks);
    let families = PERMS
        .iter()
        .enumerate()
        .map(|(pi, perm)| {
            let name = perm.iter().map(|i| d.wires[*i].name.clone()).collect::<Vec<_>>().join("<");
            let fam = words
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    (w.clone(), LabeledOperator::new(d.wires.clone(), sol.blocks[pi * words.len() + k].clone()).expect("block"))
                })
                .collect();
            (name, fam)
        })
        .collect();
    SdpResult {
        status: sol.status,
        definition: TRI_DEFINITION.into(),
        residual,
        objective: None,
        iterations: sol.iterations,
        seed: None,
        certificate: sol.certificate.as_ref().filter(|_| sol.status == Status::Infeasible).map(|c| summary(&p, c)),
        decomposition: Some(CausalDecomposition { families }),
    }
}

/// `λ·d + (1−λ)·1/|outcomes|`.
pub fn mix_with_white_noise(d: &Dpovm, lambda: f64) -> Dpovm {
    let k = d.effects.len() as f64;
    let effects = d
        .effects
        .iter()
        .map(|(w, e)| {
            let noise = LabeledOperator::identity(d.wires.clone()).expect("dense wires").scale_real((1.0 - lambda) / k);
            (w.clone(), e.scale_real(lambda).add(&noise).expect("same wires"))
        })
        .collect();
    Dpovm { wires: d.wires.clone(), effects }
}

#[derive(Debug, Clone, Serialize)]
pub struct Threshold {
    /// Largest λ certified feasible.
    pub lower: f64,
    /// Smallest λ certified infeasible.
    pub upper: f64,
    /// Solver calls made.
    pub steps: usize,
    /// Hull of the weights the solver could not decide, if any.
    pub inconclusive: Option<(f64, f64)>,
}

/// Bisection over the white-noise mixing weight with the (P+2+F) solver as
/// oracle. Only certified answers move the bracket; an inconclusive weight
/// is set aside and the search continues on the wider undecided side, until
/// both sides are narrower than `resolution` or `max_solves` calls are spent.
pub fn mixture_threshold_p2f(
    d: &Dpovm,
    feas_tol: f64,
    max_iterations: usize,
    resolution: f64,
    max_solves: usize,
) -> Threshold {
    let opts = FeasibilityOptions { feas_tol, max_iterations, ..Default::default() };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut gap: Option<(f64, f64)> = None;
    let mut steps = 0;
    while steps < max_solves {
        let (a, b) = match gap {
            None => (lo, hi),
            Some((glo, ghi)) if glo - lo >= hi - ghi => (lo, glo),
            Some((_, ghi)) => (ghi, hi),
        };
        if b - a < resolution {
            break;
        }
        let mid = 0.5 * (a + b);
        steps += 1;
        match causal_sep_feasibility_p2f_with(&mix_with_white_noise(d, mid), Branches::Both, opts).status {
            Status::Feasible => lo = mid,
            Status::Infeasible => hi = mid,
            Status::Inconclusive => gap = Some(gap.map_or((mid, mid), |(g0, g1)| (g0.min(mid), g1.max(mid)))),
        }
    }
    Threshold { lower: lo, upper: hi, steps, inconclusive: gap }
}

/// Direct estimate of the largest separable mixing weight: maximizes λ
/// subject to `G + G' = λ·d + (1−λ)·1/K` by ADMM. Uncertified (first-order
/// accuracy); compare with the certified bracket of [`mixture_threshold_p2f`].
pub fn mixture_threshold_estimate(d: &Dpovm, admm: super::conic::AdmmOptions) -> (f64, f64) {
    use super::conic::{maximize, Compiled};
    let (mut p, layout) = p2f_problem(&d.wires, alphabets(d), None, Branches::Both, false);
    let lam = p.blocks.len();
    p.blocks.push(Block::full("lambda", 1));
    let n = d.wires.iter().map(|s| s.dim).product::<usize>();
    let noise = eye(n) * C64::new(1.0 / d.effects.len() as f64, 0.0);
    for (k, word) in layout.words.iter().enumerate() {
        let (i, j) = (layout.g[k], layout.g2[k]);
        let shift = effect_or_zero(d, word) - &noise;
        p.constraints.push(Constraint {
            name: format!("mixture {word:?}"),
            dim: n,
            map: Box::new(move |x| &x[i] + &x[j] - &shift * x[lam][(0, 0)]),
            rhs: noise.clone(),
        });
    }
    let c = Compiled::new(&p);
    let mut obj: Vec<DMatrix<C64>> = p.blocks.iter().map(|b| DMatrix::zeros(b.dim, b.dim)).collect();
    obj[lam][(0, 0)] = C64::new(1.0, 0.0);
    let r = maximize(&p, &c, &c.objective(&p, &obj), None, admm);
    (r.value, r.residual)
}

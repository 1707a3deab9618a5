//! See-saw estimate of the causal bound of the SHIFT identification game.
//!
//! Alice and Bob use measure-and-forward instruments built from real rank-one
//! projective families: each reads a classical setting from the process,
//! measures her auxiliary qubit accordingly and sends the outcome on. Against
//! such instruments a causally separable process (with any final measurement)
//! acts through operators `G_{f,x,a,y,b}` on Phil's system, split into the two
//! orders with the chained marginals of the process-level definition. The
//! see-saw alternates the conic step over `G` with closed-form steps over the
//! two families.

use super::conic::{check_blocks, maximize, AdmmOptions, AdmmState, Block, Compiled, ConicProblem, Constraint, Status};
use super::separability::{p2f_problem, Branches, SdpResult};
use super::{GameScenario, GameSpec};
use crate::error::{Error, Result};
use crate::measurements::ProjectiveFamily;
use crate::process_functions::{causal_bound_lugano_game, lugano};
use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub seed: u64,
    pub branches: Branches,
    pub max_rounds: usize,
    /// Stop a restart once a full round improves the value by less than this.
    pub round_tol: f64,
    pub admm: AdmmOptions,
    pub feas_tol: f64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions {
            restarts: 32,
            seed: 0,
            branches: Branches::Both,
            max_rounds: 60,
            round_tol: 1e-8,
            admm: AdmmOptions { rho: 1.0, tol: 1e-10, max_iterations: 4000 },
            feas_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeesawBound {
    pub result: SdpResult,
    /// Value after each half-step of the best restart.
    pub history: Vec<f64>,
    /// Best value of every restart, in restart order.
    pub per_restart: Vec<f64>,
    /// Angles of the best families: Alice's (x = 0, 1), then Bob's.
    pub angles: [f64; 4],
}

/// One game state, split into Phil's, Alice's and Bob's factors.
struct GameState {
    word: [u8; 3],
    p: DVector<C64>,
    a: DVector<C64>,
    b: DVector<C64>,
    prior: f64,
}

fn game_states(game: &GameSpec) -> Result<Vec<GameState>> {
    let e = game.ensemble.as_ref().ok_or_else(|| Error::ScenarioMismatch("game without ensemble".into()))?;
    if e.wires.len() != 3 || e.wires.iter().any(|s| s.dim != 2) {
        return Err(Error::ScenarioMismatch("expects three qubit inputs".into()));
    }
    e.states
        .iter()
        .map(|(w, k, prior)| {
            // product states: read the factors off a rank-one reshaping
            let amps = k.amplitudes();
            let (i0, _) = amps.iter().enumerate().max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap()).unwrap();
            let factor = |q: usize| {
                let v = DVector::from_fn(2, |t, _| {
                    let mut i = i0 & !(1 << (2 - q));
                    i |= t << (2 - q);
                    amps[i]
                });
                let n = v.norm();
                v / C64::new(n, 0.0)
            };
            let (p, a, b) = (factor(0), factor(1), factor(2));
            Ok(GameState { word: [w[0], w[1], w[2]], p, a, b, prior: *prior })
        })
        .collect()
}

/// Index of `G_{f,x,a,y,b}` within one branch.
fn widx(f: u8, x: u8, a: u8, y: u8, b: u8) -> usize {
    ((((f as usize * 2 + x as usize) * 2 + a as usize) * 2 + y as usize) * 2) + b as usize
}

fn sum(x: &[DMatrix<C64>], idx: &[usize]) -> DMatrix<C64> {
    let mut s = DMatrix::zeros(2, 2);
    for &i in idx {
        s += &x[i];
    }
    s
}

fn assemblage_problem(branches: Branches) -> ConicProblem {
    let both = branches == Branches::Both;
    let nb = if both { 64 } else { 32 };
    let blocks: Vec<Block> = (0..nb).map(|k| Block::full(format!("G{k}"), 2)).collect();
    let mut constraints = Vec::new();
    let zero = DMatrix::zeros(2, 2);
    let mut diff = |name: String, plus: Vec<usize>, minus: Vec<usize>| {
        constraints.push(Constraint {
            name,
            dim: 2,
            map: Box::new(move |x| sum(x, &plus) - sum(x, &minus)),
            rhs: zero.clone(),
        });
    };
    let bits = [0u8, 1];
    // P≺A≺B: Σ_f G independent of b; then Σ_{f,y} independent of a
    for x in bits {
        for a in bits {
            for y in bits {
                let s = |b| bits.iter().map(|&f| widx(f, x, a, y, b)).collect();
                diff(format!("AB x={x} a={a} y={y}"), s(0), s(1));
            }
        }
        let s = |a| bits.iter().flat_map(|&f| bits.iter().map(move |&y| widx(f, x, a, y, 0))).collect();
        diff(format!("AB x={x}"), s(0), s(1));
    }
    if both {
        for y in bits {
            for b in bits {
                for x in bits {
                    let s = |a| bits.iter().map(|&f| 32 + widx(f, x, a, y, b)).collect();
                    diff(format!("BA y={y} b={b} x={x}"), s(0), s(1));
                }
            }
            let s = |b| bits.iter().flat_map(|&f| bits.iter().map(move |&x| 32 + widx(f, x, 0, y, b))).collect();
            diff(format!("BA y={y}"), s(0), s(1));
        }
    }
    let mut norm: Vec<usize> = Vec::new();
    for f in bits {
        for x in bits {
            for y in bits {
                norm.push(widx(f, x, 0, y, 0));
                if both {
                    norm.push(32 + widx(f, x, 0, y, 0));
                }
            }
        }
    }
    constraints.push(Constraint {
        name: "normalization".into(),
        dim: 2,
        map: Box::new(move |x| sum(x, &norm)),
        rhs: DMatrix::identity(2, 2),
    });
    ConicProblem { blocks, constraints, kernel_hints: vec![], identity_multiplier: None }
}

fn expect(v: &DVector<C64>, m: &Matrix2<C64>) -> f64 {
    let w = DVector::from_fn(2, |i, _| m[(i, 0)] * v[0] + m[(i, 1)] * v[1]);
    v.dotc(&w).re
}

fn expect_d(v: &DVector<C64>, m: &DMatrix<C64>) -> f64 {
    v.dotc(&(m * v)).re
}

struct Model<'a> {
    states: &'a [GameState],
    nbranch: usize,
}

impl Model<'_> {
    /// Objective blocks for the conic step.
    fn objective(&self, fa: &ProjectiveFamily, fb: &ProjectiveFamily) -> Vec<DMatrix<C64>> {
        let mut c = vec![DMatrix::zeros(2, 2); 32 * self.nbranch];
        for s in self.states {
            let [f, a, b] = s.word;
            let pp = &s.p * s.p.adjoint();
            for x in 0..2u8 {
                for y in 0..2u8 {
                    let wgt = s.prior * expect(&s.a, fa.element(a, x)) * expect(&s.b, fb.element(b, y));
                    for br in 0..self.nbranch {
                        c[32 * br + widx(f, x, a, y, b)] += &pp * C64::new(wgt, 0.0);
                    }
                }
            }
        }
        c
    }

    fn value(&self, g: &[DMatrix<C64>], fa: &ProjectiveFamily, fb: &ProjectiveFamily) -> f64 {
        self.objective(fa, fb).iter().zip(g).map(|(c, g)| super::conic::frobenius(c, g)).sum()
    }

    /// Best rank-one family for one side given everything else.
    fn best_family(&self, g: &[DMatrix<C64>], other: &ProjectiveFamily, alice: bool) -> [f64; 2] {
        let mut theta = [0.0; 2];
        for (setting, th) in theta.iter_mut().enumerate() {
            let mut q = [DMatrix::<f64>::zeros(2, 2), DMatrix::<f64>::zeros(2, 2)];
            for s in self.states {
                let [f, a, b] = s.word;
                for other_setting in 0..2u8 {
                    let (x, y) = if alice { (setting as u8, other_setting) } else { (other_setting, setting as u8) };
                    let gv: f64 = (0..self.nbranch).map(|br| expect_d(&s.p, &g[32 * br + widx(f, x, a, y, b)])).sum();
                    let (mine, out, theirs) = if alice { (&s.a, a, expect(&s.b, other.element(b, y))) } else { (&s.b, b, expect(&s.a, other.element(a, x))) };
                    let v = DVector::from_fn(2, |i, _| mine[i].re);
                    q[out as usize] += (&v * v.transpose()) * (s.prior * gv * theirs);
                }
            }
            let e = SymmetricEigen::new(&q[0] - &q[1]);
            let k = if e.eigenvalues[0] >= e.eigenvalues[1] { 0 } else { 1 };
            let v = e.eigenvectors.column(k);
            *th = v[1].atan2(v[0]);
        }
        theta
    }
}

struct RestartOutcome {
    value: f64,
    history: Vec<f64>,
    angles: [f64; 4],
    blocks: Vec<DMatrix<C64>>,
    iterations: usize,
}

fn run_restart(p: &ConicProblem, c: &Compiled, model: &Model, opts: &SeesawOptions, restart: usize) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let pi = std::f64::consts::PI;
    let mut ta = [rng.gen_range(0.0..pi), rng.gen_range(0.0..pi)];
    let mut tb = [rng.gen_range(0.0..pi), rng.gen_range(0.0..pi)];
    let mut state: Option<AdmmState> = None;
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut current = f64::NEG_INFINITY;
    let mut blocks: Vec<DMatrix<C64>> = Vec::new();
    for _ in 0..opts.max_rounds {
        let start = current;
        let (fa, fb) = (ProjectiveFamily::from_angles(ta), ProjectiveFamily::from_angles(tb));
        let obj = c.objective(p, &model.objective(&fa, &fb));
        let r = maximize(p, c, &obj, state.clone(), opts.admm);
        iterations += r.iterations;
        // the previous point stays available: never accept a worse one
        let prev = state.as_ref().map(|s| obj.dot(&s.z)).unwrap_or(f64::NEG_INFINITY);
        if r.value >= prev {
            state = Some(r.state);
        }
        let z = &state.as_ref().expect("set above").z;
        blocks = c.lift(p, z);
        current = model.value(&blocks, &fa, &fb);
        history.push(current);
        let na = model.best_family(&blocks, &fb, true);
        let va = model.value(&blocks, &ProjectiveFamily::from_angles(na), &fb);
        if va >= current {
            ta = na;
            current = va;
        }
        history.push(current);
        let fa = ProjectiveFamily::from_angles(ta);
        let nb = model.best_family(&blocks, &fa, false);
        let vb = model.value(&blocks, &fa, &ProjectiveFamily::from_angles(nb));
        if vb >= current {
            tb = nb;
            current = vb;
        }
        history.push(current);
        if current - start < opts.round_tol {
            break;
        }
    }
    RestartOutcome { value: current, history, angles: [ta[0], ta[1], tb[0], tb[1]], blocks, iterations }
}

/// See-saw lower estimate of the causal bound of a state-identification game
/// over causally separable processes (both orders unless restricted). For the
/// DI Lugano game the exact bound from strategy enumeration is returned.
pub fn seesaw_causal_bound(game: &GameSpec, opts: SeesawOptions) -> Result<SeesawBound> {
    match game.scenario {
        GameScenario::LuganoDi => {
            let b = causal_bound_lugano_game(&lugano())?;
            let v = *b.value.numer() as f64 / *b.value.denom() as f64;
            return Ok(SeesawBound {
                result: SdpResult {
                    status: Status::Feasible,
                    definition: "exact maximum over causal strategy trees".into(),
                    residual: 0.0,
                    objective: Some(v),
                    iterations: 0,
                    seed: Some(opts.seed),
                    certificate: None,
                    decomposition: None,
                },
                history: vec![v],
                per_restart: vec![v],
                angles: [0.0; 4],
            });
        }
        GameScenario::Ndi => return Err(Error::ScenarioMismatch("no see-saw model for the NDI game".into())),
        GameScenario::ShiftSdiqi => {}
    }
    let states = game_states(game)?;
    let p = assemblage_problem(opts.branches);
    let c = Compiled::new(&p);
    let model = Model { states: &states, nbranch: if opts.branches == Branches::Both { 2 } else { 1 } };
    let restarts = opts.restarts.max(1);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(restarts);
    let mut outcomes: Vec<Option<RestartOutcome>> = (0..restarts).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<(usize, &mut [Option<RestartOutcome>])> = {
            let per = restarts.div_ceil(threads);
            outcomes.chunks_mut(per).enumerate().map(|(i, ch)| (i * per, ch)).collect()
        };
        for (base, chunk) in chunks {
            let (p, c, model) = (&p, &c, &model);
            scope.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(run_restart(p, c, model, &opts, base + k));
                }
            });
        }
    });
    let outcomes: Vec<RestartOutcome> = outcomes.into_iter().map(|o| o.expect("every restart ran")).collect();
    let best = outcomes
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.value.partial_cmp(&y.1.value).unwrap().then(y.0.cmp(&x.0)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let (residual, min_ev) = check_blocks(&p, &outcomes[best].blocks);
    let o = &outcomes[best];
    let status = if residual <= 2.0 * opts.feas_tol && min_ev >= -1e-12 { Status::Feasible } else { Status::Inconclusive };
    Ok(SeesawBound {
        result: SdpResult {
            status,
            definition: match opts.branches {
                Branches::Both => "causally separable processes (both orders), measure-and-forward rank-one instruments".into(),
                Branches::OnlyAb => "fixed order P<A<B<F, measure-and-forward rank-one instruments".into(),
            },
            residual,
            objective: Some(o.value),
            iterations: outcomes.iter().map(|o| o.iterations).sum(),
            seed: Some(opts.seed),
            certificate: None,
            decomposition: None,
        },
        history: o.history.clone(),
        per_restart: outcomes.iter().map(|o| o.value).collect(),
        angles: o.angles,
    })
}

/// Maximum of the game over all D-POVMs compatible with the D-POVM-level
/// (P+2+F) definition (an upper relaxation of the process-level bound).
pub fn definition_relaxation_bound(game: &GameSpec, admm: AdmmOptions) -> Result<SdpResult> {
    let e = game.ensemble.as_ref().ok_or_else(|| Error::ScenarioMismatch("game without ensemble".into()))?;
    let alpha = vec![vec![0u8, 1]; 3];
    let (p, layout) = p2f_problem(&e.wires, alpha, None, Branches::Both, false);
    let c = Compiled::new(&p);
    let mut obj: Vec<DMatrix<C64>> = p.blocks.iter().map(|b| DMatrix::zeros(b.dim, b.dim)).collect();
    for (label, psi, prior) in &e.states {
        let k = layout.words.iter().position(|w| w == label).expect("binary labels");
        let v = psi.amplitudes();
        let pp = (v * v.adjoint()) * C64::new(*prior, 0.0);
        obj[layout.g[k]] += &pp;
        obj[layout.g2[k]] += &pp;
    }
    let r = maximize(&p, &c, &c.objective(&p, &obj), None, admm);
    let blocks = c.lift(&p, &r.state.z);
    let (residual, _) = check_blocks(&p, &blocks);
    Ok(SdpResult {
        status: Status::Feasible,
        definition: "D-POVM-level (P+2+F) separability".into(),
        residual,
        objective: Some(r.value),
        iterations: r.iterations,
        seed: None,
        certificate: None,
        decomposition: None,
    })
}

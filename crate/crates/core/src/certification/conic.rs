//! A small first-order conic solver for feasibility and linear maximization
//! over products of Hermitian PSD cones cut by affine equalities.
//!
//! Variables are Hermitian blocks, optionally restricted to a face
//! `X = V g V†` (g PSD of reduced size). Constraints are linear maps of the
//! (lifted) blocks with Hermitian right-hand sides. Everything is vectorized
//! isometrically (off-diagonals scaled by √2), so Frobenius inner products
//! are preserved.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

/// Linear map from the full (lifted) blocks to a Hermitian matrix.
pub type LinearMap = Box<dyn Fn(&[DMatrix<C64>]) -> DMatrix<C64> + Send + Sync>;

pub struct Block {
    pub name: String,
    pub dim: usize,
    /// Isometry `n×r` onto the face the block is restricted to.
    pub lift: Option<DMatrix<C64>>,
}

impl Block {
    pub fn full(name: impl Into<String>, dim: usize) -> Self {
        Block { name: name.into(), dim, lift: None }
    }

    pub fn reduced_dim(&self) -> usize {
        self.lift.as_ref().map_or(self.dim, |v| v.ncols())
    }

    fn lift_matrix(&self, g: &DMatrix<C64>) -> DMatrix<C64> {
        match &self.lift {
            Some(v) => v * g * v.adjoint(),
            None => g.clone(),
        }
    }
}

pub struct Constraint {
    pub name: String,
    pub dim: usize,
    pub map: LinearMap,
    pub rhs: DMatrix<C64>,
}

/// Feasibility problem `find X_k ⪰ 0 with map_j(X) = rhs_j`, plus optional
/// structural hints used to certify infeasibility in the full space.
pub struct ConicProblem {
    pub blocks: Vec<Block>,
    pub constraints: Vec<Constraint>,
    /// `(constraint, Π)`: adding `t·Π` to that constraint's multiplier leaves
    /// `⟨rhs, y⟩` unchanged and is PSD on some blocks (kernel of a face).
    pub kernel_hints: Vec<(usize, DMatrix<C64>)>,
    /// Multipliers `u` with `Aᵀu ⪰ c·1`, c > 0 (a trace bound on feasible points).
    pub identity_multiplier: Option<Vec<DMatrix<C64>>>,
}

pub fn herm_len(n: usize) -> usize {
    n * n
}

/// Isometric real vectorization of a Hermitian matrix.
pub fn herm_to_vec(m: &DMatrix<C64>, out: &mut [f64]) {
    let n = m.nrows();
    let s2 = std::f64::consts::SQRT_2;
    let mut k = 0;
    for i in 0..n {
        out[k] = m[(i, i)].re;
        k += 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            out[k] = s2 * z.re;
            out[k + 1] = s2 * z.im;
            k += 2;
        }
    }
}

pub fn vec_to_herm(v: &[f64], n: usize) -> DMatrix<C64> {
    let s2 = std::f64::consts::SQRT_2;
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        m[(i, i)] = C64::new(v[k], 0.0);
        k += 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = C64::new(v[k] / s2, v[k + 1] / s2);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

pub fn frobenius(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn herm_eigen(m: &DMatrix<C64>) -> (Vec<f64>, Vec<DVector<C64>>) {
    if m.nrows() == 0 {
        return (vec![], vec![]);
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let e = SymmetricEigen::new(h);
    let vecs = (0..m.nrows()).map(|k| e.eigenvectors.column(k).into_owned()).collect();
    (e.eigenvalues.iter().copied().collect(), vecs)
}

pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    herm_eigen(m).0.into_iter().fold(f64::INFINITY, f64::min)
}

/// Projection onto the PSD cone by eigenvalue clipping.
pub fn psd_projection(m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    if n == 0 {
        return m.clone();
    }
    if n == 1 {
        return DMatrix::from_element(1, 1, C64::new(m[(0, 0)].re.max(0.0), 0.0));
    }
    let (vals, vecs) = herm_eigen(m);
    let mut out = DMatrix::zeros(n, n);
    for (l, v) in vals.iter().zip(&vecs) {
        if *l > 0.0 {
            out += (v * v.adjoint()) * C64::new(*l, 0.0);
        }
    }
    out
}

/// Orthonormal basis of the range of a PSD matrix (eigenvalues above `tol`).
pub fn range_basis(m: &DMatrix<C64>, tol: f64) -> DMatrix<C64> {
    let (vals, vecs) = herm_eigen(m);
    let keep: Vec<&DVector<C64>> = vals.iter().zip(&vecs).filter(|(l, _)| **l > tol).map(|(_, v)| v).collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |i, j| keep[j][i])
}

/// The problem in reduced vectorized form, `A x = b`, with a precomputed
/// affine projection.
pub struct Compiled {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    col_offsets: Vec<usize>,
    row_offsets: Vec<usize>,
    /// `A⁺` (cols × rows).
    pinv: DMatrix<f64>,
    /// `1 − A⁺A`.
    null_proj: DMatrix<f64>,
    /// `A⁺ b`.
    x0: DVector<f64>,
    pub rank: usize,
}

fn eval_constraints(p: &ConicProblem, lifted: &[DMatrix<C64>], out: &mut [f64], row_offsets: &[usize]) {
    for (j, c) in p.constraints.iter().enumerate() {
        let m = (c.map)(lifted);
        herm_to_vec(&m, &mut out[row_offsets[j]..row_offsets[j + 1]]);
    }
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v = vec![0];
    for s in sizes {
        v.push(v.last().unwrap() + s);
    }
    v
}

impl Compiled {
    pub fn new(p: &ConicProblem) -> Compiled {
        let col_offsets = offsets(p.blocks.iter().map(|b| herm_len(b.reduced_dim())));
        let row_offsets = offsets(p.constraints.iter().map(|c| herm_len(c.dim)));
        let (ncols, nrows) = (*col_offsets.last().unwrap(), *row_offsets.last().unwrap());
        let mut a = DMatrix::zeros(nrows, ncols);
        let mut lifted: Vec<DMatrix<C64>> = p.blocks.iter().map(|b| DMatrix::zeros(b.dim, b.dim)).collect();
        let mut unit = vec![0.0; 0];
        let mut col = vec![0.0; nrows];
        for (k, blk) in p.blocks.iter().enumerate() {
            let r = blk.reduced_dim();
            unit.resize(herm_len(r), 0.0);
            for j in 0..herm_len(r) {
                unit.iter_mut().for_each(|x| *x = 0.0);
                unit[j] = 1.0;
                lifted[k] = blk.lift_matrix(&vec_to_herm(&unit, r));
                eval_constraints(p, &lifted, &mut col, &row_offsets);
                a.column_mut(col_offsets[k] + j).copy_from_slice(&col);
            }
            lifted[k] = DMatrix::zeros(blk.dim, blk.dim);
        }
        let mut b = DVector::zeros(nrows);
        for (j, c) in p.constraints.iter().enumerate() {
            herm_to_vec(&c.rhs, &mut b.as_mut_slice()[row_offsets[j]..row_offsets[j + 1]]);
        }
        let (pinv, rank) = pseudo_inverse(&a);
        let null_proj = DMatrix::identity(ncols, ncols) - &pinv * &a;
        let x0 = &pinv * &b;
        Compiled { a, b, col_offsets, row_offsets, pinv, null_proj, x0, rank }
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    pub fn project_affine(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.null_proj * x + &self.x0
    }

    pub fn project_cone(&self, p: &ConicProblem, x: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(x.len());
        for (k, blk) in p.blocks.iter().enumerate() {
            let (s, e) = (self.col_offsets[k], self.col_offsets[k + 1]);
            let m = vec_to_herm(&x.as_slice()[s..e], blk.reduced_dim());
            herm_to_vec(&psd_projection(&m), &mut out.as_mut_slice()[s..e]);
        }
        out
    }

    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        (&self.a * x - &self.b).amax()
    }

    /// Lifts a reduced vector to full blocks.
    pub fn lift(&self, p: &ConicProblem, x: &DVector<f64>) -> Vec<DMatrix<C64>> {
        p.blocks
            .iter()
            .enumerate()
            .map(|(k, blk)| {
                let (s, e) = (self.col_offsets[k], self.col_offsets[k + 1]);
                blk.lift_matrix(&vec_to_herm(&x.as_slice()[s..e], blk.reduced_dim()))
            })
            .collect()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    /// Reduced-space vectorization of full objective blocks `C_k ↦ V†C_kV`.
    pub fn objective(&self, p: &ConicProblem, c: &[DMatrix<C64>]) -> DVector<f64> {
        let mut out = DVector::zeros(self.ncols());
        for (k, blk) in p.blocks.iter().enumerate() {
            let m = match &blk.lift {
                Some(v) => v.adjoint() * &c[k] * v,
                None => c[k].clone(),
            };
            herm_to_vec(&m, &mut out.as_mut_slice()[self.col_offsets[k]..self.col_offsets[k + 1]]);
        }
        out
    }
}

/// Pseudo-inverse through the smaller Gram matrix.
fn pseudo_inverse(a: &DMatrix<f64>) -> (DMatrix<f64>, usize) {
    let (m, n) = a.shape();
    let wide = m <= n;
    let gram = if wide { a * a.transpose() } else { a.transpose() * a };
    let e = SymmetricEigen::new(gram);
    let lmax = e.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cut = lmax * 1e-12;
    let mut inv = DMatrix::zeros(m.min(n), m.min(n));
    let mut rank = 0;
    for (k, l) in e.eigenvalues.iter().enumerate() {
        if *l > cut {
            rank += 1;
            let v = e.eigenvectors.column(k);
            inv += (v * v.transpose()) / *l;
        }
    }
    let pinv = if wide { a.transpose() * inv } else { inv * a.transpose() };
    (pinv, rank)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Feasible,
    Infeasible,
    Inconclusive,
}

/// Outcome of a full-space check of an infeasibility witness.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Multipliers per constraint (Hermitian), after all corrections.
    pub multipliers: Vec<DMatrix<C64>>,
    /// `⟨rhs, y⟩` (negative for a valid witness).
    pub value: f64,
    /// Smallest eigenvalue of `Aᵀy` over all full blocks (≥ 0 for a valid witness).
    pub min_dual_eigenvalue: f64,
    /// Lower bound `−⟨rhs,y⟩/‖y‖` on `‖A x − b‖₂` over every PSD `x`.
    pub residual_lower_bound: f64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    pub residual: f64,
    pub iterations: usize,
    /// Full-space blocks of the last cone iterate.
    pub blocks: Vec<DMatrix<C64>>,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, Copy)]
pub struct FeasibilityOptions {
    pub feas_tol: f64,
    pub infeas_margin: f64,
    pub max_iterations: usize,
    pub check_every: usize,
}

impl Default for FeasibilityOptions {
    fn default() -> Self {
        FeasibilityOptions { feas_tol: 1e-7, infeas_margin: 1e-6, max_iterations: 50_000, check_every: 250 }
    }
}

/// Dykstra alternating projections between the affine set and the cone.
/// Feasible once a cone point meets every constraint to `feas_tol`;
/// infeasible only with a verified witness; otherwise inconclusive.
pub fn solve_feasibility(p: &ConicProblem, opts: FeasibilityOptions) -> Solution {
    let c = Compiled::new(p);
    // inconsistent equalities: r = A A⁺b − b satisfies Aᵀr = 0 and ⟨b, r⟩ = −‖r‖²
    let r_b = &c.a * &c.x0 - &c.b;
    if r_b.amax() > opts.infeas_margin {
        let cert = verify_certificate(p, &c, &r_b);
        if cert.residual_lower_bound >= opts.infeas_margin {
            return Solution {
                status: Status::Infeasible,
                residual: r_b.amax(),
                iterations: 0,
                blocks: c.lift(p, &c.x0),
                certificate: Some(cert),
            };
        }
    }
    let mut x = c.x0.clone();
    let mut corr = DVector::zeros(c.ncols());
    let mut k = c.project_cone(p, &x);
    let mut best_bound = 0.0f64;
    let mut last_cert = None;
    for it in 1..=opts.max_iterations {
        let y = &x + &corr;
        k = c.project_cone(p, &y);
        corr = y - &k;
        x = c.project_affine(&k);
        if it % opts.check_every == 0 || it == opts.max_iterations {
            let res = c.residual(&k);
            if res <= opts.feas_tol {
                return Solution { status: Status::Feasible, residual: res, iterations: it, blocks: c.lift(p, &k), certificate: None };
            }
            // witness candidate from the gap between the sets
            let kc = c.project_cone(p, &x);
            let gap = &x - &kc;
            let y = -(c.pinv.transpose() * gap);
            if y.norm() > 0.0 {
                let cert = verify_certificate(p, &c, &y);
                if cert.residual_lower_bound >= opts.infeas_margin {
                    return Solution {
                        status: Status::Infeasible,
                        residual: res,
                        iterations: it,
                        blocks: c.lift(p, &k),
                        certificate: Some(cert),
                    };
                }
                if cert.residual_lower_bound > best_bound {
                    best_bound = cert.residual_lower_bound;
                    last_cert = Some(cert);
                }
            }
        }
    }
    Solution {
        status: Status::Inconclusive,
        residual: c.residual(&k),
        iterations: opts.max_iterations,
        blocks: c.lift(p, &k),
        certificate: last_cert,
    }
}

/// Applies `Aᵀ` (in the full, unreduced space) to several multiplier vectors at once.
fn full_adjoint(p: &ConicProblem, row_offsets: &[usize], ys: &[&DVector<f64>]) -> Vec<Vec<DMatrix<C64>>> {
    let nrows = *row_offsets.last().unwrap();
    let mut lifted: Vec<DMatrix<C64>> = p.blocks.iter().map(|b| DMatrix::zeros(b.dim, b.dim)).collect();
    let mut col = vec![0.0; nrows];
    let mut out: Vec<Vec<DMatrix<C64>>> = vec![Vec::new(); ys.len()];
    for (k, blk) in p.blocks.iter().enumerate() {
        let n = blk.dim;
        let mut coeffs = vec![vec![0.0; herm_len(n)]; ys.len()];
        let mut unit = vec![0.0; herm_len(n)];
        for j in 0..herm_len(n) {
            unit.iter_mut().for_each(|x| *x = 0.0);
            unit[j] = 1.0;
            lifted[k] = vec_to_herm(&unit, n);
            eval_constraints(p, &lifted, &mut col, row_offsets);
            for (q, y) in ys.iter().enumerate() {
                coeffs[q][j] = col.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
            }
        }
        lifted[k] = DMatrix::zeros(n, n);
        for (q, cf) in coeffs.iter().enumerate() {
            out[q].push(vec_to_herm(cf, n));
        }
    }
    out
}

fn multipliers_to_vec(p: &ConicProblem, row_offsets: &[usize], m: &[DMatrix<C64>]) -> DVector<f64> {
    let mut v = DVector::zeros(*row_offsets.last().unwrap());
    for j in 0..p.constraints.len() {
        herm_to_vec(&m[j], &mut v.as_mut_slice()[row_offsets[j]..row_offsets[j + 1]]);
    }
    v
}

/// Verifies a candidate witness `y` in the full space: adds kernel-hint
/// multipliers and an identity shift so that `Aᵀy ⪰ 0` holds on every
/// block, then reports the certified residual lower bound.
pub fn verify_certificate(p: &ConicProblem, c: &Compiled, y: &DVector<f64>) -> Certificate {
    let ro = c.row_offsets();
    let mut delta = DVector::zeros(y.len());
    for (j, proj) in &p.kernel_hints {
        herm_to_vec(proj, &mut delta.as_mut_slice()[ro[*j]..ro[*j + 1]]);
    }
    let u = p.identity_multiplier.as_ref().map(|m| multipliers_to_vec(p, ro, m));
    let zero = DVector::zeros(y.len());
    let adj = full_adjoint(p, ro, &[y, &delta, u.as_ref().unwrap_or(&zero)]);
    let (s_y, s_d, s_u) = (&adj[0], &adj[1], &adj[2]);
    let c_u = if u.is_some() { s_u.iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min) } else { 0.0 };
    let scale = y.norm();
    let mut ts = vec![0.0];
    if !p.kernel_hints.is_empty() {
        for e in -8..=8 {
            ts.push(scale * 10f64.powi(e));
        }
    }
    let mut best: Option<Certificate> = None;
    for t in ts {
        let lam = s_y
            .iter()
            .zip(s_d)
            .map(|(a, d)| min_eigenvalue(&(a + d * C64::new(t, 0.0))))
            .fold(f64::INFINITY, f64::min);
        let mut yt = y + &delta * t;
        let mut min_ev = lam;
        if lam < 0.0 {
            match &u {
                Some(u) if c_u > 0.0 => {
                    // a little slack over the eigen-solver's accuracy
                    let s = -lam / c_u * (1.0 + 1e-9) + 1e-14 * scale;
                    yt += u * s;
                    min_ev = lam + s * c_u;
                }
                _ => {}
            }
        }
        let value = yt.dot(&c.b);
        let bound = if min_ev >= 0.0 { -value / yt.norm() } else { f64::NEG_INFINITY };
        if best.as_ref().map_or(true, |b| bound > b.residual_lower_bound) {
            let multipliers = (0..p.constraints.len())
                .map(|j| vec_to_herm(&yt.as_slice()[ro[j]..ro[j + 1]], p.constraints[j].dim))
                .collect();
            best = Some(Certificate { multipliers, value, min_dual_eigenvalue: min_ev, residual_lower_bound: bound });
        }
    }
    best.expect("at least one candidate")
}

/// Re-evaluates every constraint on full blocks: (max entry violation, min eigenvalue).
pub fn check_blocks(p: &ConicProblem, blocks: &[DMatrix<C64>]) -> (f64, f64) {
    let mut res = 0.0f64;
    for c in &p.constraints {
        let m = (c.map)(blocks) - &c.rhs;
        res = res.max(m.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let min_ev = blocks.iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min);
    (res, min_ev)
}

/// Re-checks a witness: `⟨rhs, y⟩` and the minimum eigenvalue of `Aᵀy` per full block.
pub fn check_certificate(p: &ConicProblem, cert: &Certificate) -> (f64, f64) {
    let c_rows = offsets(p.constraints.iter().map(|c| herm_len(c.dim)));
    let y = multipliers_to_vec(p, &c_rows, &cert.multipliers);
    let s = full_adjoint(p, &c_rows, &[&y]);
    let value: f64 = p.constraints.iter().zip(&cert.multipliers).map(|(c, m)| frobenius(&c.rhs, m)).sum();
    (value, s[0].iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Copy)]
pub struct AdmmOptions {
    pub rho: f64,
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        AdmmOptions { rho: 1.0, tol: 1e-9, max_iterations: 20_000 }
    }
}

#[derive(Debug, Clone)]
pub struct AdmmState {
    pub z: DVector<f64>,
    pub u: DVector<f64>,
}

#[derive(Debug, Clone)]
pub struct MaxResult {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub state: AdmmState,
}

/// Maximizes `⟨c, x⟩` over the feasible set by ADMM (x affine, z conic).
/// The value is reported at the conic iterate `z`, with its constraint residual.
pub fn maximize(p: &ConicProblem, c: &Compiled, obj: &DVector<f64>, warm: Option<AdmmState>, opts: AdmmOptions) -> MaxResult {
    let n = c.ncols();
    let AdmmState { mut z, mut u } = warm.unwrap_or_else(|| AdmmState { z: c.project_cone(p, &c.x0), u: DVector::zeros(n) });
    let step = obj / opts.rho;
    let mut iterations = opts.max_iterations;
    for it in 1..=opts.max_iterations {
        let x = c.project_affine(&(&z - &u + &step));
        let z_new = c.project_cone(p, &(&x + &u));
        let primal = (&x - &z_new).amax();
        let dual = (&z_new - &z).amax() * opts.rho;
        u += &x - &z_new;
        z = z_new;
        if primal < opts.tol && dual < opts.tol {
            iterations = it;
            break;
        }
    }
    MaxResult { value: obj.dot(&z), residual: c.residual(&z), iterations, state: AdmmState { z, u } }
}

//! Dense complex operators on ordered tensor products of named wires.
//!
//! Every operator in the toolkit (states, Choi matrices, process matrices,
//! POVM effects) is a [`LabeledOperator`]. Wires are matched by name, so
//! callers never manage subsystem order by hand.

mod gates;
mod ket;
mod layout;

pub use gates::{basis_ket, choi_vector_of_unitary, hadamard, hadamard_power, pauli_x, ChoiVector};
pub use ket::LabeledKet;

use crate::error::{Error, Result};
use layout::digits_permutation;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Maximum number of wires a dense operator may carry (side 4096 for qubits).
pub const MAX_DENSE_WIRES: usize = 12;

/// Tolerance for Hermiticity and unitarity checks.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// An operator counts as PSD when its smallest eigenvalue is at least `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceLabel {
    pub name: String,
    pub dim: usize,
}

impl SpaceLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        SpaceLabel { name: name.into(), dim }
    }

    pub fn qubit(name: impl Into<String>) -> Self {
        Self::new(name, 2)
    }
}

/// Builds qubit labels from a list of names.
pub fn qubits(names: &[&str]) -> Vec<SpaceLabel> {
    names.iter().map(|n| SpaceLabel::qubit(*n)).collect()
}

pub(crate) fn check_labels(spaces: &[SpaceLabel]) -> Result<()> {
    for (i, s) in spaces.iter().enumerate() {
        if s.dim == 0 {
            return Err(Error::Shape(format!("wire `{}` has dimension 0", s.name)));
        }
        if spaces[..i].iter().any(|t| t.name == s.name) {
            return Err(Error::DuplicateLabel(s.name.clone()));
        }
    }
    Ok(())
}

fn side_of(spaces: &[SpaceLabel]) -> usize {
    spaces.iter().map(|s| s.dim).product()
}

/// A square complex matrix on an ordered tensor product of named wires.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledOperator {
    spaces: Vec<SpaceLabel>,
    mat: DMatrix<C64>,
}

impl LabeledOperator {
    pub fn new(spaces: Vec<SpaceLabel>, mat: DMatrix<C64>) -> Result<Self> {
        check_labels(&spaces)?;
        if spaces.len() > MAX_DENSE_WIRES {
            return Err(Error::TooLarge { wires: spaces.len(), cap: MAX_DENSE_WIRES });
        }
        let side = side_of(&spaces);
        if mat.nrows() != side || mat.ncols() != side {
            return Err(Error::Shape(format!(
                "matrix is {}x{} but the wires require side {side}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("non-finite entry".into()));
        }
        Ok(LabeledOperator { spaces, mat })
    }

    /// A 1x1 operator on no wires.
    pub fn scalar(z: C64) -> Self {
        LabeledOperator { spaces: vec![], mat: DMatrix::from_element(1, 1, z) }
    }

    pub fn identity(spaces: Vec<SpaceLabel>) -> Result<Self> {
        let side = side_of(&spaces);
        Self::new(spaces, DMatrix::identity(side, side))
    }

    pub fn zeros(spaces: Vec<SpaceLabel>) -> Result<Self> {
        let side = side_of(&spaces);
        Self::new(spaces, DMatrix::zeros(side, side))
    }

    /// Diagonal operator with the given diagonal entries.
    pub fn diagonal(spaces: Vec<SpaceLabel>, diag: &[C64]) -> Result<Self> {
        let side = side_of(&spaces);
        if diag.len() != side {
            return Err(Error::Shape(format!("diagonal of length {} for side {side}", diag.len())));
        }
        let mut m = DMatrix::zeros(side, side);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        Self::new(spaces, m)
    }

    /// |k⟩⟨k| for a ket.
    pub fn projector(ket: &LabeledKet) -> Result<Self> {
        ket.outer(ket)
    }

    pub fn spaces(&self) -> &[SpaceLabel] {
        &self.spaces
    }

    pub fn names(&self) -> Vec<&str> {
        self.spaces.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn has_space(&self, name: &str) -> bool {
        self.spaces.iter().any(|s| s.name == name)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn side(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Value of a 1x1 operator (a fully contracted link product).
    pub fn as_scalar(&self) -> Option<C64> {
        (self.side() == 1).then(|| self.mat[(0, 0)])
    }

    pub fn scale(&self, z: C64) -> Self {
        LabeledOperator { spaces: self.spaces.clone(), mat: &self.mat * z }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        LabeledOperator { spaces: self.spaces.clone(), mat: self.mat.adjoint() }
    }

    /// Sum of two operators on the same set of wires (order may differ).
    pub fn add(&self, other: &LabeledOperator) -> Result<Self> {
        let o = other.aligned_to(&self.spaces)?;
        Ok(LabeledOperator { spaces: self.spaces.clone(), mat: &self.mat + o.mat })
    }

    pub fn sub(&self, other: &LabeledOperator) -> Result<Self> {
        let o = other.aligned_to(&self.spaces)?;
        Ok(LabeledOperator { spaces: self.spaces.clone(), mat: &self.mat - o.mat })
    }

    /// Operator product on the same set of wires.
    pub fn mul(&self, other: &LabeledOperator) -> Result<Self> {
        let o = other.aligned_to(&self.spaces)?;
        Ok(LabeledOperator { spaces: self.spaces.clone(), mat: &self.mat * o.mat })
    }

    /// Reorders `self` to the given label list, which must contain exactly the same wires.
    pub fn aligned_to(&self, spaces: &[SpaceLabel]) -> Result<Self> {
        if spaces.len() != self.spaces.len() {
            return Err(Error::WireMismatch(format!(
                "operator on [{}] vs [{}]",
                self.names().join(","),
                spaces.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(",")
            )));
        }
        for s in spaces {
            match self.spaces.iter().find(|t| t.name == s.name) {
                None => {
                    return Err(Error::WireMismatch(format!("wire `{}` missing", s.name)));
                }
                Some(t) if t.dim != s.dim => {
                    return Err(Error::DimensionMismatch {
                        name: s.name.clone(),
                        left: t.dim,
                        right: s.dim,
                    });
                }
                _ => {}
            }
        }
        let order: Vec<&str> = spaces.iter().map(|s| s.name.as_str()).collect();
        self.permute_spaces(&order)
    }

    /// Max-entry absolute difference after aligning wire order. Errors if wire sets differ.
    pub fn max_abs_diff(&self, other: &LabeledOperator) -> Result<f64> {
        let o = other.aligned_to(&self.spaces)?;
        Ok(self
            .mat
            .iter()
            .zip(o.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.side();
        for i in 0..n {
            for j in i..n {
                if (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Hermitian to `HERMITIAN_TOL` and smallest eigenvalue ≥ −`PSD_TOL`.
    pub fn is_psd(&self) -> bool {
        self.is_hermitian(HERMITIAN_TOL) && self.min_eigenvalue() >= -PSD_TOL
    }

    /// Numerical rank: eigenvalues above `tol` times the largest magnitude.
    pub fn rank(&self, tol: f64) -> usize {
        let ev = self.eigenvalues();
        let top = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        ev.iter().filter(|x| x.abs() > tol * top.max(1e-300)).count()
    }

    /// Renames a wire.
    pub fn renamed(&self, from: &str, to: &str) -> Result<Self> {
        let mut spaces = self.spaces.clone();
        let pos = spaces
            .iter()
            .position(|s| s.name == from)
            .ok_or_else(|| Error::UnknownLabel(from.into()))?;
        spaces[pos].name = to.into();
        check_labels(&spaces)?;
        Ok(LabeledOperator { spaces, mat: self.mat.clone() })
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.spaces
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.into()))
    }

    /// Same operator under subsystem reindexing to the given name order.
    pub fn permute_spaces(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.spaces.len() {
            return Err(Error::Shape(format!(
                "permutation of length {} for {} wires",
                order.len(),
                self.spaces.len()
            )));
        }
        let mut perm = Vec::with_capacity(order.len());
        for name in order {
            let p = self.position(name)?;
            if perm.contains(&p) {
                return Err(Error::DuplicateLabel((*name).into()));
            }
            perm.push(p);
        }
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(self.clone());
        }
        let dims: Vec<usize> = self.spaces.iter().map(|s| s.dim).collect();
        let map = digits_permutation(&dims, &perm);
        let n = self.side();
        let mat = DMatrix::from_fn(n, n, |i, j| self.mat[(map[i], map[j])]);
        let spaces = perm.iter().map(|&p| self.spaces[p].clone()).collect();
        Ok(LabeledOperator { spaces, mat })
    }

    /// Moves the named wires to the end (in the given order), keeping the rest in place.
    fn split_last(&self, names: &[&str]) -> Result<(Self, usize, usize)> {
        for n in names {
            self.position(n)?;
        }
        let mut order: Vec<&str> =
            self.names().into_iter().filter(|n| !names.contains(n)).collect();
        order.extend_from_slice(names);
        let p = self.permute_spaces(&order)?;
        let dt: usize = names
            .iter()
            .map(|n| self.spaces[self.position(n).unwrap()].dim)
            .product();
        let dk = self.side() / dt;
        Ok((p, dk, dt))
    }

    pub fn partial_trace(&self, names: &[&str]) -> Result<Self> {
        let (p, dk, dt) = self.split_last(names)?;
        let mat = DMatrix::from_fn(dk, dk, |i, j| {
            (0..dt).map(|t| p.mat[(i * dt + t, j * dt + t)]).sum()
        });
        let spaces = p.spaces[..p.spaces.len() - names.len()].to_vec();
        Ok(LabeledOperator { spaces, mat })
    }

    pub fn partial_transpose(&self, names: &[&str]) -> Result<Self> {
        let original: Vec<String> = self.names().iter().map(|s| s.to_string()).collect();
        let (p, dk, dt) = self.split_last(names)?;
        let mat = DMatrix::from_fn(dk * dt, dk * dt, |r, c| {
            let (i, t) = (r / dt, r % dt);
            let (j, u) = (c / dt, c % dt);
            p.mat[(i * dt + u, j * dt + t)]
        });
        let out = LabeledOperator { spaces: p.spaces, mat };
        let order: Vec<&str> = original.iter().map(|s| s.as_str()).collect();
        out.permute_spaces(&order)
    }

    /// Kronecker product; wire lists are concatenated.
    pub fn tensor(&self, other: &LabeledOperator) -> Result<Self> {
        let mut spaces = self.spaces.clone();
        spaces.extend(other.spaces.iter().cloned());
        check_labels(&spaces)?;
        if spaces.len() > MAX_DENSE_WIRES {
            return Err(Error::TooLarge { wires: spaces.len(), cap: MAX_DENSE_WIRES });
        }
        Ok(LabeledOperator { spaces, mat: self.mat.kronecker(&other.mat) })
    }

    /// Link product `A*B = Tr_Y[(A ⊗ 1)^{T_Y} (1 ⊗ B)]` over the shared wires Y.
    ///
    /// The result lives on A's private wires followed by B's private wires.
    pub fn link(&self, other: &LabeledOperator) -> Result<Self> {
        let shared: Vec<&str> =
            self.names().into_iter().filter(|n| other.has_space(n)).collect();
        for n in &shared {
            let da = self.spaces[self.position(n)?].dim;
            let db = other.spaces[other.position(n)?].dim;
            if da != db {
                return Err(Error::DimensionMismatch { name: (*n).into(), left: da, right: db });
            }
        }
        if shared.is_empty() {
            return self.tensor(other);
        }
        // A as [X, Y], B as [Y, Z] with Y in the same order.
        let (a, dx, dy) = self.split_last(&shared)?;
        let mut b_order = shared.clone();
        b_order.extend(other.names().into_iter().filter(|n| !shared.contains(n)));
        let b = other.permute_spaces(&b_order)?;
        let dz = b.side() / dy;
        let out_wires = a.spaces.len() - shared.len() + b.spaces.len() - shared.len();
        if out_wires > MAX_DENSE_WIRES {
            return Err(Error::TooLarge { wires: out_wires, cap: MAX_DENSE_WIRES });
        }
        // R[(x,z),(x',z')] = Σ_{y,y'} A[(x,y'),(x',y)] B[(y',z),(y,z')]
        let at = DMatrix::from_fn(dx * dx, dy * dy, |r, c| {
            let (x, xp) = (r / dx, r % dx);
            let (yp, y) = (c / dy, c % dy);
            a.mat[(x * dy + yp, xp * dy + y)]
        });
        let bt = DMatrix::from_fn(dy * dy, dz * dz, |r, c| {
            let (yp, y) = (r / dy, r % dy);
            let (z, zp) = (c / dz, c % dz);
            b.mat[(yp * dz + z, y * dz + zp)]
        });
        let rt = at * bt;
        let mat = DMatrix::from_fn(dx * dz, dx * dz, |r, c| {
            let (x, z) = (r / dz, r % dz);
            let (xp, zp) = (c / dz, c % dz);
            rt[(x * dx + xp, z * dz + zp)]
        });
        let mut spaces = a.spaces[..a.spaces.len() - shared.len()].to_vec();
        spaces.extend(b.spaces[shared.len()..].iter().cloned());
        Ok(LabeledOperator { spaces, mat })
    }

    /// Embeds `self` into a larger wire set by tensoring identities, ordered as `spaces`.
    pub fn embed(&self, spaces: &[SpaceLabel]) -> Result<Self> {
        let extra: Vec<SpaceLabel> =
            spaces.iter().filter(|s| !self.has_space(&s.name)).cloned().collect();
        let full = self.tensor(&LabeledOperator::identity(extra)?)?;
        full.aligned_to(spaces)
    }

    /// Row-major entries as `[re, im]` pairs.
    pub fn entries_row_major(&self) -> Vec<[f64; 2]> {
        let n = self.side();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.mat[(i, j)];
                out.push([z.re, z.im]);
            }
        }
        out
    }

    pub fn from_row_major(spaces: Vec<SpaceLabel>, entries: &[[f64; 2]]) -> Result<Self> {
        let side = side_of(&spaces);
        if entries.len() != side * side {
            return Err(Error::Shape(format!(
                "{} entries for side {side}",
                entries.len()
            )));
        }
        let mat = DMatrix::from_fn(side, side, |i, j| {
            let [re, im] = entries[i * side + j];
            C64::new(re, im)
        });
        Self::new(spaces, mat)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&OperatorDoc::from(self)).expect("operator serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: OperatorDoc =
            serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        doc.try_into()
    }
}

/// On-disk form: `{"spaces": [{name, dim}], "entries": [[re, im], ...]}` (row-major).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub spaces: Vec<SpaceLabel>,
    pub entries: Vec<[f64; 2]>,
}

impl From<&LabeledOperator> for OperatorDoc {
    fn from(op: &LabeledOperator) -> Self {
        OperatorDoc { spaces: op.spaces.clone(), entries: op.entries_row_major() }
    }
}

impl TryFrom<OperatorDoc> for LabeledOperator {
    type Error = Error;
    fn try_from(doc: OperatorDoc) -> Result<Self> {
        LabeledOperator::from_row_major(doc.spaces, &doc.entries)
    }
}

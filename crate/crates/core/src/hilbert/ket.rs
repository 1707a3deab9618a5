use super::layout::digits_permutation;
use super::{check_labels, side_of, LabeledOperator, SpaceLabel};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Kets may be much larger than dense operators: only vectors are stored.
pub const MAX_KET_WIRES: usize = 24;

/// A vector on an ordered tensor product of named wires.
///
/// Used for pure (rank-one) process matrices, whose dense form would exceed
/// [`super::MAX_DENSE_WIRES`]. The link product of two rank-one operators is
/// rank one, and on vectors it is the bilinear contraction [`LabeledKet::contract`].
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledKet {
    spaces: Vec<SpaceLabel>,
    amps: DVector<C64>,
}

impl LabeledKet {
    pub fn new(spaces: Vec<SpaceLabel>, amps: DVector<C64>) -> Result<Self> {
        check_labels(&spaces)?;
        if spaces.len() > MAX_KET_WIRES {
            return Err(Error::TooLarge { wires: spaces.len(), cap: MAX_KET_WIRES });
        }
        if amps.len() != side_of(&spaces) {
            return Err(Error::Shape(format!(
                "{} amplitudes for dimension {}",
                amps.len(),
                side_of(&spaces)
            )));
        }
        Ok(LabeledKet { spaces, amps })
    }

    pub fn zeros(spaces: Vec<SpaceLabel>) -> Result<Self> {
        let n = side_of(&spaces);
        Self::new(spaces, DVector::zeros(n))
    }

    /// Computational basis vector `|bits⟩` on qubit wires.
    pub fn basis(names: &[&str], bits: &[u8]) -> Result<Self> {
        if names.len() != bits.len() {
            return Err(Error::LengthMismatch { expected: names.len(), got: bits.len() });
        }
        let spaces = super::qubits(names);
        let mut v = DVector::zeros(side_of(&spaces));
        let idx = bits.iter().fold(0usize, |acc, b| acc * 2 + (*b & 1) as usize);
        v[idx] = C64::new(1.0, 0.0);
        Self::new(spaces, v)
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

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, z: C64) -> Self {
        LabeledKet { spaces: self.spaces.clone(), amps: &self.amps * z }
    }

    pub fn add(&self, other: &LabeledKet) -> Result<Self> {
        let o = other.aligned_to(&self.spaces)?;
        Ok(LabeledKet { spaces: self.spaces.clone(), amps: &self.amps + o.amps })
    }

    pub fn renamed(&self, from: &str, to: &str) -> Result<Self> {
        let mut spaces = self.spaces.clone();
        let pos = spaces
            .iter()
            .position(|s| s.name == from)
            .ok_or_else(|| Error::UnknownLabel(from.into()))?;
        spaces[pos].name = to.into();
        check_labels(&spaces)?;
        Ok(LabeledKet { spaces, amps: self.amps.clone() })
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.spaces
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.into()))
    }

    pub fn permute_spaces(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.spaces.len() {
            return Err(Error::Shape("permutation length mismatch".into()));
        }
        let mut perm = Vec::with_capacity(order.len());
        for n in order {
            let p = self.position(n)?;
            if perm.contains(&p) {
                return Err(Error::DuplicateLabel((*n).into()));
            }
            perm.push(p);
        }
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(self.clone());
        }
        let dims: Vec<usize> = self.spaces.iter().map(|s| s.dim).collect();
        let map = digits_permutation(&dims, &perm);
        let amps = DVector::from_fn(self.amps.len(), |i, _| self.amps[map[i]]);
        let spaces = perm.iter().map(|&p| self.spaces[p].clone()).collect();
        Ok(LabeledKet { spaces, amps })
    }

    pub fn aligned_to(&self, spaces: &[SpaceLabel]) -> Result<Self> {
        if spaces.len() != self.spaces.len()
            || spaces.iter().any(|s| !self.spaces.contains(s))
        {
            return Err(Error::WireMismatch(format!(
                "ket on [{}] cannot be aligned to [{}]",
                self.names().join(","),
                spaces.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(",")
            )));
        }
        let order: Vec<&str> = spaces.iter().map(|s| s.name.as_str()).collect();
        self.permute_spaces(&order)
    }

    /// Moves the named wires to the front.
    fn split_first(&self, names: &[&str]) -> Result<(Self, usize)> {
        let mut order: Vec<&str> = names.to_vec();
        order.extend(self.names().into_iter().filter(|n| !names.contains(n)));
        let p = self.permute_spaces(&order)?;
        let d: usize = p.spaces[..names.len()].iter().map(|s| s.dim).product();
        Ok((p, d))
    }

    pub fn tensor(&self, other: &LabeledKet) -> Result<Self> {
        let mut spaces = self.spaces.clone();
        spaces.extend(other.spaces.iter().cloned());
        check_labels(&spaces)?;
        let amps = self.amps.kronecker(&other.amps);
        Self::new(spaces, amps)
    }

    /// Tensor product of several kets.
    pub fn product(kets: &[LabeledKet]) -> Result<Self> {
        let mut acc = LabeledKet { spaces: vec![], amps: DVector::from_element(1, C64::new(1.0, 0.0)) };
        for k in kets {
            acc = acc.tensor(k)?;
        }
        Ok(acc)
    }

    /// Bilinear contraction over shared wires (no conjugation): the vector form
    /// of the link product, `|u⟩⟨u| * |w⟩⟨w| = |u·w⟩⟨u·w|`.
    pub fn contract(&self, other: &LabeledKet) -> Result<Self> {
        let shared: Vec<&str> = self.names().into_iter().filter(|n| other.has_space(n)).collect();
        for n in &shared {
            let da = self.spaces[self.position(n)?].dim;
            let db = other.spaces[other.position(n)?].dim;
            if da != db {
                return Err(Error::DimensionMismatch { name: (*n).into(), left: da, right: db });
            }
        }
        let (a, dy) = self.split_first(&shared)?;
        let (b, _) = other.split_first(&shared)?;
        let dx = a.amps.len() / dy;
        let dz = b.amps.len() / dy;
        // a as (dy × dx) row-major: a[y*dx + x]
        let am = DMatrix::from_fn(dy, dx, |y, x| a.amps[y * dx + x]);
        let bm = DMatrix::from_fn(dy, dz, |y, z| b.amps[y * dz + z]);
        let r = am.transpose() * bm;
        let amps = DVector::from_fn(dx * dz, |i, _| r[(i / dz, i % dz)]);
        let mut spaces = a.spaces[shared.len()..].to_vec();
        spaces.extend(b.spaces[shared.len()..].iter().cloned());
        Self::new(spaces, amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &LabeledKet) -> Result<C64> {
        let o = other.aligned_to(&self.spaces)?;
        Ok(self.amps.dotc(&o.amps))
    }

    /// `|self⟩⟨other|` on self's wire order.
    pub fn outer(&self, other: &LabeledKet) -> Result<LabeledOperator> {
        let o = other.aligned_to(&self.spaces)?;
        LabeledOperator::new(self.spaces.clone(), &self.amps * o.amps.adjoint())
    }

    /// `Tr_names |self⟩⟨self|` without forming the full projector.
    pub fn reduced(&self, names: &[&str]) -> Result<LabeledOperator> {
        let (p, dt) = self.split_first(names)?;
        let dk = p.amps.len() / dt;
        // rows: kept index, cols: traced index
        let u = DMatrix::from_fn(dk, dt, |k, t| p.amps[t * dk + k]);
        LabeledOperator::new(p.spaces[names.len()..].to_vec(), &u * u.adjoint())
    }
}

use super::{LabeledKet, SpaceLabel};
use crate::error::{Error, Result};
use nalgebra::{DVector, Matrix2};
use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_1_SQRT_2;

/// A Choi vector `Σ_i |i⟩^in ⊗ U|i⟩^out` on two wires.
pub type ChoiVector = LabeledKet;

pub fn hadamard() -> Matrix2<C64> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    Matrix2::new(h, h, h, -h)
}

pub fn pauli_x() -> Matrix2<C64> {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    Matrix2::new(o, l, l, o)
}

/// `H^0 = 1`, `H^1 = H`.
pub fn hadamard_power(x: u8) -> Matrix2<C64> {
    if x & 1 == 0 {
        Matrix2::identity()
    } else {
        hadamard()
    }
}

/// `|b⟩` on a single qubit wire.
pub fn basis_ket(name: &str, b: u8) -> LabeledKet {
    let mut v = DVector::zeros(2);
    v[(b & 1) as usize] = C64::new(1.0, 0.0);
    LabeledKet::new(vec![SpaceLabel::qubit(name)], v).expect("single wire")
}

/// Unnormalized Choi vector of a qubit unitary, column-stacking convention.
pub fn choi_vector_of_unitary(u: &Matrix2<C64>, input: SpaceLabel, output: SpaceLabel) -> Result<ChoiVector> {
    if input.dim != 2 || output.dim != 2 {
        return Err(Error::Shape("choi_vector_of_unitary expects qubit wires".into()));
    }
    let dev = (u.adjoint() * u - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > super::HERMITIAN_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let mut v = DVector::zeros(4);
    for i in 0..2 {
        for o in 0..2 {
            v[i * 2 + o] = u[(o, i)];
        }
    }
    LabeledKet::new(vec![input, output], v)
}

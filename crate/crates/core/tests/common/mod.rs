#![allow(dead_code)]

use causal_core::hilbert::{LabeledOperator, SpaceLabel};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn rand_op(rng: &mut ChaCha8Rng, names: &[&str]) -> LabeledOperator {
    let spaces: Vec<SpaceLabel> = names.iter().map(|n| SpaceLabel::qubit(*n)).collect();
    let n = 1 << names.len();
    LabeledOperator::new(spaces, rand_matrix(rng, n)).unwrap()
}

/// Straight-from-the-definition link product for A on (X,Y) and B on (Y,Z),
/// all qubits, with the Y wires in the same order in both operators:
/// build (A⊗1_Z)^{T_Y} and (1_X⊗B) as full matrices, multiply, trace out Y.
pub fn brute_link(a: &DMatrix<C64>, nx: usize, ny: usize, b: &DMatrix<C64>, nz: usize) -> DMatrix<C64> {
    let (dx, dy, dz) = (1usize << nx, 1usize << ny, 1usize << nz);
    let d = dx * dy * dz;
    let idx = |x: usize, y: usize, z: usize| (x * dy + y) * dz + z;
    let mut at = DMatrix::<C64>::zeros(d, d);
    let mut bt = DMatrix::<C64>::zeros(d, d);
    for x in 0..dx {
        for y in 0..dy {
            for z in 0..dz {
                for x2 in 0..dx {
                    for y2 in 0..dy {
                        for z2 in 0..dz {
                            // (A⊗1)[(x,y,z),(x2,y2,z2)] = A[(x,y),(x2,y2)] δ_{z,z2}; transpose on Y swaps y,y2
                            if z == z2 {
                                at[(idx(x, y, z), idx(x2, y2, z2))] = a[(x * dy + y2, x2 * dy + y)];
                            }
                            if x == x2 {
                                bt[(idx(x, y, z), idx(x2, y2, z2))] = b[(y * dz + z, y2 * dz + z2)];
                            }
                        }
                    }
                }
            }
        }
    }
    let m = at * bt;
    DMatrix::from_fn(dx * dz, dx * dz, |r, c| {
        let (x, z) = (r / dz, r % dz);
        let (x2, z2) = (c / dz, c % dz);
        (0..dy).map(|y| m[(idx(x, y, z), idx(x2, y, z2))]).sum()
    })
}

pub fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

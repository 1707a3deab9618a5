//! Seeded pseudo-random unitaries and instruments.

use crate::hilbert::{LabeledKet, LabeledOperator, SpaceLabel};
use crate::error::Result;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of R's diagonal removed.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// A random instrument from `inputs` to `outputs` with `n_outcomes` outcomes,
/// as Choi matrices on `inputs ++ outputs`.
///
/// An isometry `in → out ⊗ outcome ⊗ env` (env of the input's dimension) is
/// cut from a Haar unitary; measuring the outcome register and discarding
/// the environment gives the Kraus operators `K_{k,e}`, and element k has
/// Choi matrix `Σ_e |K_{k,e}⟩⟩⟨⟨K_{k,e}|`. Each element is returned as its
/// list of Kraus Choi vectors, so callers may also contract pure processes.
pub fn random_instrument<R: Rng + ?Sized>(
    rng: &mut R,
    inputs: &[SpaceLabel],
    outputs: &[SpaceLabel],
    n_outcomes: usize,
) -> Result<Vec<Vec<LabeledKet>>> {
    let din: usize = inputs.iter().map(|s| s.dim).product();
    let dout: usize = outputs.iter().map(|s| s.dim).product();
    let env = din;
    let u = haar_unitary(rng, dout * n_outcomes * env);
    let mut spaces = inputs.to_vec();
    spaces.extend(outputs.iter().cloned());
    let mut elements = Vec::with_capacity(n_outcomes);
    for k in 0..n_outcomes {
        let mut kraus = Vec::with_capacity(env);
        for e in 0..env {
            // K[o, i] = U[(k·dout + o)·env + e, i]
            let v = DVector::from_fn(din * dout, |idx, _| {
                let (i, o) = (idx / dout, idx % dout);
                u[((k * dout + o) * env + e, i)]
            });
            kraus.push(LabeledKet::new(spaces.clone(), v)?);
        }
        elements.push(kraus);
    }
    Ok(elements)
}

/// Sums `|v⟩⟨v|` over a list of Kraus Choi vectors.
pub fn choi_from_kraus(kraus: &[LabeledKet]) -> Result<LabeledOperator> {
    let mut acc = LabeledOperator::projector(&kraus[0])?;
    for k in &kraus[1..] {
        acc = acc.add(&LabeledOperator::projector(k)?)?;
    }
    Ok(acc)
}

//! Seeded sampling of Haar-random states and unitaries.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use rand_distr::StandardNormal;

use crate::cmatrix::{CMatrix, C64};
use crate::error::Result;
use crate::operator::{DensityMatrix, UnitaryOperator};
use crate::register::QuditRegister;

/// All randomness in the crate funnels through ChaCha8 seeded generators so
/// every result is reproducible from a single integer.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Normalized complex-Gaussian vector, Haar-distributed on the unit sphere.
pub fn haar_state_vector(dim: usize, rng: &mut ChaCha8Rng) -> DVector<C64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| gaussian(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// Haar-random pure state as a density matrix, deterministic given the seed.
pub fn haar_random_state(register: QuditRegister, seed: u64) -> Result<DensityMatrix> {
    let mut rng = rng_from_seed(seed);
    let psi = haar_state_vector(register.dim(), &mut rng);
    DensityMatrix::pure(register, &psi)
}

/// Haar-random unitary sampled inside an existing generator stream.
pub fn haar_unitary_matrix(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    // Phase-fixing by the R diagonal makes the distribution Haar.
    let mut phases = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        let rii = r[(i, i)];
        phases[(i, i)] = if rii.norm() > 0.0 {
            rii / rii.norm()
        } else {
            C64::new(1.0, 0.0)
        };
    }
    qr.q() * phases
}

/// Haar-random unitary, deterministic given the seed.
pub fn haar_random_unitary(register: QuditRegister, seed: u64) -> Result<UnitaryOperator> {
    let mut rng = rng_from_seed(seed);
    let m = haar_unitary_matrix(register.dim(), &mut rng);
    UnitaryOperator::new(register, m)
}

//! Seeded sample generators. Each sample index gets its own ChaCha stream,
//! so parallel and sequential runs draw identical values.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{CVector, ComplexMatrix, C64};

/// Default seed when neither a flag nor the environment provides one.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex(rng))
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = matrix(rng, n);
    (&a + &a.adjoint()).scale_re(0.5)
}

pub fn vector(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex(rng))
}

pub fn real_vector(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

/// Diagonal entries of a random site function.
pub fn site_function(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex(rng)).collect()
}

/// Random unitary `exp(iH)` computed from the Hermitian eigendecomposition.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let h = hermitian(rng, n);
    let eig = h.inner().clone().symmetric_eigen();
    let phases = eig.eigenvalues.map(|t| C64::new(0.0, t).exp());
    let v = &eig.eigenvectors;
    let d = nalgebra::DMatrix::from_diagonal(&phases);
    ComplexMatrix::from(v * d * v.adjoint())
}

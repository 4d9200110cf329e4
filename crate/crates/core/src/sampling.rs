//! Seeded generators for randomized property sweeps.
//!
//! Everything is driven by an explicit ChaCha stream so that identical seeds
//! reproduce identical samples across runs and platforms.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curvature_bochner::TwoVectorOperator;
use crate::exterior_basis::binomial;
use crate::exterior_operators::{PrincipalSpectrum, SymmetricOperator};

/// Deterministic stream for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    rng.random_range(-scale..scale)
}

/// Random dense symmetric operator with entries of the given scale.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymmetricOperator {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = uniform(rng, scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymmetricOperator::new(m).expect("constructed symmetric")
}

/// Random orthogonal matrix via QR of a random matrix, with the sign fixed
/// so the factor is unique.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| uniform(rng, 1.0));
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..n {
        if r[(i, i)] < 0.0 {
            for row in 0..n {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    q
}

/// Random sorted spectrum shifted just enough to make the sum of the q
/// smallest entries nonnegative.
pub fn random_qnonneg_spectrum(rng: &mut ChaCha8Rng, n: usize, q: usize) -> PrincipalSpectrum {
    let values: Vec<f64> = (0..n).map(|_| uniform(rng, 1.0)).collect();
    let spectrum = PrincipalSpectrum::new(values).expect("finite values");
    let margin = spectrum.partial_sum(q);
    if margin >= 0.0 {
        return spectrum;
    }
    let shift = -margin / q as f64;
    PrincipalSpectrum::new(spectrum.values().iter().map(|v| v + shift).collect())
        .expect("finite values")
}

/// Random symmetric operator on the two-vector space of an n-dimensional
/// base.
pub fn random_two_vector_operator(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> TwoVectorOperator {
    let dim = binomial(n, 2);
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = uniform(rng, scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    TwoVectorOperator::new(n, m).expect("constructed symmetric")
}

/// Shift a two-vector operator so that the average of its m smallest
/// eigenvalues equals exactly the prescribed value.
pub fn with_kyfan_average(r: &TwoVectorOperator, m: usize, target: f64) -> TwoVectorOperator {
    let current = crate::curvature_bochner::kyfan_average(r, m).expect("m in range");
    r.shifted(target - current)
}

/// Random orthonormal frame of n vectors in an ambient space of the given
/// dimension.
pub fn random_frame(rng: &mut ChaCha8Rng, ambient_dim: usize, n: usize) -> Vec<DVector<f64>> {
    let q = random_orthogonal(rng, ambient_dim);
    (0..n).map(|i| q.column(i).into_owned()).collect()
}

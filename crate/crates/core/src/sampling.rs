//! Seeded random inputs for property sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lie::LieFrameAlgebra;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform λ in `[-3, 3]⁴`.
pub fn random_lambda(rng: &mut impl Rng) -> [f64; 4] {
    [(); 4].map(|_| rng.gen_range(-3.0..=3.0))
}

/// A random combination, coefficients in `[-2, 2]`, of a basis of the
/// closed constant 1-forms of `alg`.
pub fn random_closed_alpha(alg: &LieFrameAlgebra, rng: &mut impl Rng) -> Vec<f64> {
    let mut alpha = vec![0.0; alg.dim()];
    for form in alg.closed_one_forms() {
        let c: f64 = rng.gen_range(-2.0..=2.0);
        for (a, f) in alpha.iter_mut().zip(&form) {
            *a += c * f;
        }
    }
    alpha
}

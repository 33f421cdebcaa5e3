//! Synthetic instances for the criterion benches and the acceptance suite.and the acceptance suite.

use dlas_core::qap::Matrix;
use dlas_core::{EdgeWeightKind, QapInstance, TspInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` cities uniform on a 10^4 x 10^4 square.
pub fn random_tsp(n: usize, seed: u64) -> TspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n)
        .map(|_| {
            (
                rng.random_range(0.0..10_000.0),
                rng.random_range(0.0..10_000.0),
            )
        })
        .collect();
    TspInstance::new(format!("rand{n}"), EdgeWeightKind::Euc2d, coords)
}

/// Dense QAP with entries in `0..100`, like the uniformly random QAPLIB
/// families.
pub fn random_qap(n: usize, seed: u64) -> QapInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = || Matrix::new(n, (0..n * n).map(|_| rng.random_range(0..100)).collect());
    let a = matrix();
    let b = matrix();
    QapInstance::new(format!("rand{n}"), a, b)
}

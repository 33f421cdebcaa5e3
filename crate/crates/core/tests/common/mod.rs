#![allow(dead_code)]

use dlas_core::qap::Matrix;
use dlas_core::{EdgeWeightKind, QapInstance, TspInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_tsp(n: usize, seed: u64) -> TspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n)
        .map(|_| {
            (
                rng.random_range(0.0..1000.0f64).round(),
                rng.random_range(0.0..1000.0f64).round(),
            )
        })
        .collect();
    TspInstance::new(format!("rand{n}"), EdgeWeightKind::Euc2d, coords)
}

pub fn random_qap(n: usize, seed: u64, lo: i64, hi: i64) -> QapInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = || Matrix::new(n, (0..n * n).map(|_| rng.random_range(lo..=hi)).collect());
    let a = matrix();
    let b = matrix();
    QapInstance::new(format!("rand{n}"), a, b)
}

pub fn to_qaplib(inst: &QapInstance) -> String {
    let n = inst.size();
    let mut out = format!("{n}\n\n");
    for m in [inst.a(), inst.b()] {
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| m.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

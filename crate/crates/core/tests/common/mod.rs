//! Random problem instances shared by the integration tests.
#![allow(dead_code)]

use pipg_core::linalg::DenseMatrix;
use pipg_core::{CanonicalProblem, CostHessian, ProductSet, SetDescriptor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

fn random_hessian(rng: &mut impl Rng, n: usize) -> CostHessian {
    if rng.random_bool(0.5) {
        CostHessian::Diagonal(uniform_vec(rng, n, 0.5, 5.0))
    } else {
        // MᵀM/n + I/2 keeps the spectrum in a moderate range.
        let m = uniform_vec(rng, n * n, -1.0, 1.0);
        let mut p = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| m[k * n + i] * m[k * n + j]).sum();
                p[i * n + j] = s / n as f64 + if i == j { 0.5 } else { 0.0 };
            }
        }
        CostHessian::Dense(DenseMatrix::from_row_major(n, n, p).unwrap())
    }
}

/// A feasible instance with `n ≤ 40`, `m ≤ 20` and `D` a product of boxes
/// and balls. `g = Hz₀` for a point `z₀` inside `D`.
pub fn random_instance(seed: u64, constrained: bool) -> CanonicalProblem {
    let mut rng = rng(seed);
    let n = rng.random_range(4..=40);
    let m = rng.random_range(1..=20.min(n - 1));
    let p = random_hessian(&mut rng, n);
    let q = uniform_vec(&mut rng, n, -5.0, 5.0);
    let h = DenseMatrix::from_row_major(m, n, uniform_vec(&mut rng, m * n, -1.0, 1.0)).unwrap();

    let mut sets = Vec::new();
    let mut z0 = Vec::with_capacity(n);
    let mut left = n;
    while left > 0 {
        let len = rng.random_range(1..=left.min(5));
        left -= len;
        if !constrained {
            sets.push((SetDescriptor::FullSpace { dim: len }, len));
            z0.extend(uniform_vec(&mut rng, len, -1.0, 1.0));
        } else if rng.random_bool(0.5) {
            let u = rng.random_range(0.5..2.0);
            sets.push((SetDescriptor::symmetric_box(len, u), len));
            z0.extend(uniform_vec(&mut rng, len, -0.5 * u, 0.5 * u));
        } else {
            let r = rng.random_range(0.5..2.0);
            let x = uniform_vec(&mut rng, len, -1.0, 1.0);
            let scale = 0.5 * r / x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            sets.push((SetDescriptor::ball(len, r), len));
            z0.extend(x.iter().map(|v| v * scale.min(1.0)));
        }
    }
    let mut g = vec![0.0; m];
    h.mul_vec_into(&z0, &mut g).unwrap();
    CanonicalProblem::new(p, q, h, g, ProductSet::from_sets(sets).unwrap()).unwrap()
}

/// `‖a − b‖∞ / ‖b‖∞`
pub fn rel_inf(a: &[f64], b: &[f64]) -> f64 {
    pipg_core::linalg::dist_inf(a, b) / pipg_core::linalg::norm_inf(b)
}

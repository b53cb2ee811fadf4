use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::norm2;

pub const DEFAULT_POWER_TOL: f64 = 1e-8;
pub const DEFAULT_POWER_MAX_ITERS: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    /// Final Rayleigh quotient.
    pub value: f64,
    pub iterations: usize,
    /// `false` when `max_iters` was hit; `value` is then the best estimate.
    pub converged: bool,
}

/// Largest eigenvalue of a symmetric positive semidefinite operator.
///
/// `apply(x, y)` must write `A x` into `y`. The start vector is a unit vector
/// drawn from a ChaCha8 stream seeded with `seed`, so results are reproducible.
pub fn power_iteration_max_eig<F>(
    mut apply: F,
    dim: usize,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> PowerIteration
where
    F: FnMut(&[f64], &mut [f64]),
{
    if dim == 0 {
        return PowerIteration {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut y = vec![0.0; dim];
    let mut lambda = f64::NAN;

    for it in 1..=max_iters {
        apply(&x, &mut y);
        let next: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ny = norm2(&y);
        if ny == 0.0 {
            return PowerIteration {
                value: 0.0,
                iterations: it,
                converged: true,
            };
        }
        let done = (next - lambda).abs() <= tol * next.abs();
        lambda = next;
        if done {
            return PowerIteration {
                value: lambda,
                iterations: it,
                converged: true,
            };
        }
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / ny);
    }
    PowerIteration {
        value: lambda,
        iterations: max_iters,
        converged: false,
    }
}

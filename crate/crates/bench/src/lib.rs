//! Seeded inputs shared by the benchmarks.

use evenq_core::linalg::{c, ComplexMatrix};
use evenq_core::states::{random_density, random_x_spec, rng_from_seed};
use evenq_core::{DensityMatrix, XStateSpec};

pub const SEED: u64 = 0x5eed;

/// Full-rank random state on `n` qubits.
pub fn density(n: usize) -> DensityMatrix {
    random_density(n, 1 << n, SEED + n as u64).expect("valid size")
}

pub fn density_rank(n: usize, rank: usize) -> DensityMatrix {
    random_density(n, rank, SEED + 100 * n as u64 + rank as u64).expect("valid rank")
}

pub fn x_spec(n: usize) -> XStateSpec {
    random_x_spec(n, &mut rng_from_seed(SEED + n as u64)).expect("even n")
}

/// Complex symmetric `dim x dim` matrix with entries of order one.
pub fn symmetric(dim: usize) -> ComplexMatrix {
    let mut k = 0u64;
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        k += 1;
        let x = (k as f64 * 0.618_033_988_749_895).fract();
        let y = (k as f64 * 0.414_213_562_373_095).fract();
        c(x - 0.5, y - 0.5)
    });
    &g + g.transpose()
}

/// First seeded state of the given rank with invariant above 0.05.
pub fn entangled(n: usize, rank: usize) -> DensityMatrix {
    (0..)
        .map(|k| random_density(n, rank, SEED + k).expect("valid rank"))
        .find(|rho| evenq_core::measures::mixed_invariant(rho).is_ok_and(|r| r.value > 0.05))
        .expect("entangled states are common")
}

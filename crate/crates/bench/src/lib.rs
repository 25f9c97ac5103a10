//! Shared fixtures for the benchmark suite: seeded instances at the sizes
//! the benchmarks exercise.

use deborder::generate::{generate, GeneratorSpec};
use deborder::{Matrix, RankOneInstance, RationalFunction};

pub fn homogeneous_instance(n: usize, r: usize, seed: u64) -> RankOneInstance<RationalFunction> {
    generate(&GeneratorSpec {
        n,
        r,
        seed,
        z_range: 3,
        mixing_steps: 4,
        include_a0: false,
    })
    .expect("valid spec")
    .instance
}

pub fn general_instance(n: usize, r: usize, seed: u64) -> RankOneInstance<RationalFunction> {
    generate(&GeneratorSpec {
        n,
        r,
        seed,
        z_range: 2,
        mixing_steps: 2,
        include_a0: true,
    })
    .expect("valid spec")
    .instance
}

/// A border factor matrix on its own, for the minor-table benchmarks.
pub fn border_factor(r: usize, n: usize, seed: u64) -> Matrix<RationalFunction> {
    homogeneous_instance(n, r, seed).left_factor().clone()
}

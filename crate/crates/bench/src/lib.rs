//! Fixtures shared by the benchmarks.

use subspace_core::generator::{generate, Generated, GeneratorSpec};

/// Three 4-dimensional clusters in 10 dimensions plus 10% noise.
pub fn planted(n: usize, seed: u64) -> Generated {
    let noise = n / 10;
    let spec = GeneratorSpec::new(n - noise, noise, 10, 3, 4, 4, seed);
    generate(&spec).expect("fixture spec is valid")
}

/// A low-dimensional fixture small enough for the exhaustive algorithms.
pub fn small(n: usize, seed: u64) -> Generated {
    let noise = n / 10;
    let spec = GeneratorSpec::new(n - noise, noise, 5, 2, 2, 3, seed);
    generate(&spec).expect("fixture spec is valid")
}

#![allow(dead_code)]

use mcsc_core::coverage::{random_instance, CoverageFunction, RandomCoverageSpec};
use mcsc_core::Instance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random coverage instance with `n` drawn from `n_range`, its other
/// parameters varied from `seed`.
pub fn varied_instance(
    seed: u64,
    n_range: std::ops::RangeInclusive<usize>,
) -> Instance<CoverageFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_cafe);
    let n = rng.random_range(n_range);
    random_instance(&RandomCoverageSpec {
        n,
        m: rng.random_range(n..=3 * n),
        density: rng.random_range(0.1..0.4),
        cost_spread: [1.5, 4.0, 10.0, 50.0][rng.random_range(0..4)],
        tau_fraction: rng.random_range(0.4..1.0),
        seed,
    })
    .expect("valid parameters")
}

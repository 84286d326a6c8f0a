//! Fixtures shared by the benchmarks.

use hyperrcd::synthgen::random_hypergraph;
use hyperrcd::{generate, GenParams, Hypergraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A connected random hypergraph with `n` vertices and about `2n` hyperedges.
pub fn random_fixture(n: usize, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_hypergraph(&mut rng, n, 2 * n, 5, (0.5, 2.0))
}

/// A two-block planted hypergraph.
pub fn planted_fixture(n: usize, avg_degree: f64) -> Hypergraph {
    generate(&GenParams {
        n,
        q: 2,
        avg_degree,
        p_intra: 0.9,
        ..GenParams::default()
    })
    .expect("feasible parameters")
    .0
}

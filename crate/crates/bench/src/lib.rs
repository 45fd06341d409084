//! Shared inputs for the benchmarks.

use kanon_core::generator::barabasi_albert;
use kanon_core::{DegreeSequence, DemandFunction, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ba(steps: usize, m0: usize) -> Graph {
    barabasi_albert(steps, m0, 42).expect("m0 is positive")
}

/// Random degree sequence on `n` vertices with values below `n / 4`.
pub fn degree_sequence(n: usize, seed: u64) -> DegreeSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hi = (n / 4).max(1);
    let mut d: Vec<usize> = (0..n).map(|_| rng.gen_range(0..hi)).collect();
    if d.iter().sum::<usize>() % 2 == 1 {
        d[0] += 1;
    }
    DegreeSequence::new(d)
}

/// Even demand of 0..=3 per vertex.
pub fn demand(g: &Graph, seed: u64) -> DemandFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut demand: Vec<usize> = (0..g.n()).map(|_| rng.gen_range(0..=3)).collect();
    if demand.iter().sum::<usize>() % 2 == 1 {
        demand[0] += 1;
    }
    DemandFunction { demand }
}

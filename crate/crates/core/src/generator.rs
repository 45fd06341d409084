//! Random instances by preferential attachment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Barabási–Albert graph: a clique on `m0 + 1` vertices, then `steps` new
/// vertices, each joined to `m0` distinct existing vertices picked with
/// probability proportional to their current degree.
///
/// Picks are drawn from the list of edge endpoints and rejected when they
/// repeat a vertex already chosen for the same step.
pub fn barabasi_albert(steps: usize, m0: usize, seed: u64) -> Result<Graph> {
    if m0 == 0 {
        return Err(Error::InvalidArgument("m0 must be at least 1".into()));
    }
    let n = m0 + 1 + steps;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m0 * (m0 + 1) / 2 + m0 * steps);
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=m0 {
        for v in u + 1..=m0 {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(m0);
    for v in m0 + 1..n {
        chosen.clear();
        while chosen.len() < m0 {
            let u = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&u) {
                chosen.push(u);
            }
        }
        for &u in &chosen {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    Graph::from_edges(n, edges)
}

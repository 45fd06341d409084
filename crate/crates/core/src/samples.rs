//! Small hand-built graphs that exercise the interesting cases of the
//! pipeline. Used by tests, benchmarks and the CLI's `oracle` subcommand.

use crate::graph::Graph;

fn one_based(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges.iter().map(|&(u, v)| (u - 1, v - 1))).expect("sample graphs are simple")
}

/// Four vertices with degrees 1,2,2,3. For k = 4 the only option is K4, two
/// edges away.
pub fn paw() -> Graph {
    Graph::from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)]).expect("sample graphs are simple")
}

/// Ten vertices, blocks {0,3,1,4,0,1,1}. For k = 2 two targets of cost two
/// exist, {0,3,0,5,0,0,2} and {0,2,2,4,0,0,2}; only the first is realizable,
/// by the edge {3, 5}.
pub fn two_targets() -> Graph {
    one_based(
        10,
        &[
            (1, 4), (2, 4), (3, 4), (4, 5), (4, 7), (5, 6), (5, 7), (5, 8),
            (5, 9), (5, 10), (6, 10), (10, 9), (9, 8), (7, 8),
        ],
    )
}

/// 24 vertices, blocks {0,15,0,3,2,1,0,2,0,1}. For k = 2 the optimum is three
/// edges, {1,2}, {1,7}, {2,7}, reachable only by lifting the degree-3 vertex
/// 7 over the degree-4 block to degree 5.
pub fn jump_required() -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // hub v1 with nine leaves, v2 and v3 with three leaves each
    edges.extend((10..=18).map(|l| (1, l)));
    edges.extend((19..=21).map(|l| (2, l)));
    edges.extend((22..=24).map(|l| (3, l)));
    edges.extend([(2, 7), (3, 9)]);
    edges.extend([
        (4, 5), (4, 7), (5, 6), (6, 8), (6, 9), (2, 4), (2, 5), (2, 6),
        (3, 4), (3, 5), (3, 6), (7, 8), (8, 9),
    ]);
    one_based(24, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_sequences() {
        assert_eq!(paw().block_sequence().counts(), &[0, 1, 2, 1]);
        assert_eq!(two_targets().block_sequence().counts(), &[0, 3, 1, 4, 0, 1, 1]);
        assert_eq!(jump_required().block_sequence().counts(), &[0, 15, 0, 3, 2, 1, 0, 2, 0, 1]);
    }
}

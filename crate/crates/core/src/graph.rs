//! Simple undirected graphs with sorted adjacency lists.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{BlockSequence, DegreeSequence};

/// Undirected simple graph on the dense vertex ids `0..n`.
///
/// Adjacency lists are kept sorted so that `has_edge` is a binary search and
/// writers can emit neighbors in ascending order without sorting again.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate edges
    /// and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj, m })
    }

    /// Builds a graph from possibly dirty input. Self-loops and repeated edges
    /// are dropped; the returned counts say how many of each were seen.
    pub fn from_edges_lossy<I>(n: usize, edges: I) -> Result<(Self, usize, usize)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut loops = 0;
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                loops += 1;
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut half_edges = 0;
        let mut dup_half_edges = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            dup_half_edges += before - list.len();
            half_edges += list.len();
        }
        Ok((Graph { adj, m: half_edges / 2 }, loops, dup_half_edges / 2))
    }

    /// Builds a graph from adjacency lists that are already symmetric.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        debug_assert!(adj.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        Graph { adj, m }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Maximum degree, zero for the empty graph.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::new(self.degrees())
    }

    pub fn block_sequence(&self) -> BlockSequence {
        BlockSequence::from_degrees(self.adj.iter().map(Vec::len))
    }

    /// Vertex ids grouped by degree: `blocks[d]` lists the vertices of degree `d`
    /// in ascending order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.max_degree() + 1];
        for (v, list) in self.adj.iter().enumerate() {
            blocks[list.len()].push(v);
        }
        blocks
    }

    /// Returns `self + s`. The receiver is left untouched.
    pub fn add_edges(&self, s: &EdgeInsertionSet) -> Result<Graph> {
        let mut adj = self.adj.clone();
        for &(u, v) in s.edges() {
            check_vertex(u, self.n())?;
            check_vertex(v, self.n())?;
            if self.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Graph { adj, m: self.m + s.len() })
    }
}

fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v >= n {
        Err(Error::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

/// A set of new edges, each stored as `(min, max)`, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeInsertionSet {
    edges: Vec<(usize, usize)>,
}

impl EdgeInsertionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates that the pairs form a duplicate-free set without self-loops.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            edges.push(e);
        }
        Ok(EdgeInsertionSet { edges })
    }

    /// Wraps pairs without validation; used where the producer guarantees the
    /// set invariants.
    pub(crate) fn from_normalized(edges: Vec<(usize, usize)>) -> Self {
        EdgeInsertionSet { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Same edge set, sorted ascending.
    pub fn sorted(&self) -> Self {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        EdgeInsertionSet { edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paw_degrees() {
        let g = crate::samples::paw();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 4);
        assert_eq!(g.max_degree(), 3);
        let mut d = g.degrees();
        d.sort();
        assert_eq!(d, vec![1, 2, 2, 3]);
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(matches!(Graph::from_edges(2, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(
            Graph::from_edges(2, [(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn lossy_construction_counts_drops() {
        let (g, loops, dups) = Graph::from_edges_lossy(3, [(0, 1), (1, 0), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(loops, 1);
        assert_eq!(dups, 1);
    }

    #[test]
    fn add_edges_makes_k4() {
        let g = crate::samples::paw();
        let s = EdgeInsertionSet::from_pairs([(0, 2), (0, 3)]).unwrap();
        let h = g.add_edges(&s).unwrap();
        assert_eq!(h.m(), 6);
        assert_eq!(h.block_sequence().counts(), &[0, 0, 0, 4]);
        // input untouched
        assert_eq!(g.m(), 4);
    }

    #[test]
    fn add_edges_rejects_existing_edge() {
        let g = crate::samples::paw();
        let s = EdgeInsertionSet::from_pairs([(1, 0)]).unwrap();
        assert!(matches!(g.add_edges(&s), Err(Error::DuplicateEdge(0, 1))));
        assert!(EdgeInsertionSet::from_pairs([(2, 2)]).is_err());
    }

    #[test]
    fn add_empty_set_is_identity() {
        let g = crate::samples::two_targets();
        assert_eq!(g.add_edges(&EdgeInsertionSet::new()).unwrap(), g);
    }

    #[test]
    fn two_targets_realizing_edge() {
        let g = crate::samples::two_targets();
        assert_eq!(g.block_sequence().counts(), &[0, 3, 1, 4, 0, 1, 1]);
        let s = EdgeInsertionSet::from_pairs([(3, 5)]).unwrap();
        let h = g.add_edges(&s).unwrap();
        assert_eq!(h.block_sequence().counts(), &[0, 3, 0, 5, 0, 0, 2]);
    }
}

//! Realizability of difference sequences.
//!
//! The plain test is the Erdős–Gallai characterization evaluated once per
//! block. The advanced test also looks at the input graph: vertices that
//! every degree-vertex mapping must raise are known by identity, so edges
//! among them in `G` cannot be inserted and do not count towards the clique
//! term.

use serde::{Deserialize, Serialize};

use crate::dp::{degree_cap, AnonymizationSolution, DpSpace, DpTable};
use crate::graph::Graph;
use crate::sequence::{difference, BlockSequence, DegreeSequence};

/// Outcome of an Erdős–Gallai style test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EGVerdict {
    pub realizable: bool,
    /// Smallest number `r` of top-degree vertices whose inequality fails.
    pub first_failing_r: Option<usize>,
    pub parity_ok: bool,
}

impl EGVerdict {
    fn pass() -> Self {
        EGVerdict { realizable: true, first_failing_r: None, parity_ok: true }
    }

    fn fail_at(r: usize) -> Self {
        EGVerdict { realizable: false, first_failing_r: Some(r), parity_ok: true }
    }
}

/// Erdős–Gallai test on a sequence given as per-degree counts.
///
/// Only the last index of every block is evaluated, which suffices.
pub fn erdos_gallai_blocks(b: &BlockSequence) -> EGVerdict {
    let counts = b.counts();
    let top = counts.len();
    // cnt_below[x] / sum_below[x]: number and degree sum of values < x.
    let mut cnt_below = vec![0u64; top + 1];
    let mut sum_below = vec![0u64; top + 1];
    for d in 0..top {
        cnt_below[d + 1] = cnt_below[d] + counts[d] as u64;
        sum_below[d + 1] = sum_below[d] + (d * counts[d]) as u64;
    }
    let parity_ok = sum_below[top].is_multiple_of(2);
    let mut first_failing_r = None;
    let (mut r, mut lhs) = (0u64, 0u64);
    for d in (1..top).rev() {
        let c = counts[d] as u64;
        if c == 0 {
            continue;
        }
        r += c;
        lhs += d as u64 * c;
        let rest = if r >= d as u64 {
            sum_below[d]
        } else {
            let ru = r as usize;
            sum_below[ru] + r * (cnt_below[d] - cnt_below[ru])
        };
        if lhs > r * (r - 1) + rest {
            first_failing_r = Some(r as usize);
            break;
        }
    }
    EGVerdict { realizable: parity_ok && first_failing_r.is_none(), first_failing_r, parity_ok }
}

/// Erdős–Gallai test on a degree sequence.
pub fn erdos_gallai_test(d: &DegreeSequence) -> EGVerdict {
    erdos_gallai_blocks(&d.block_sequence())
}

/// Havel–Hakimi construction. Vertex `i` of the result has degree
/// `d.values()[i]`.
pub fn realize_sequence(d: &DegreeSequence) -> Option<Graph> {
    let n = d.len();
    let mut residual: Vec<(usize, usize)> = d.values().iter().enumerate().map(|(v, &x)| (x, v)).collect();
    let mut adj = vec![Vec::new(); n];
    loop {
        residual.sort_unstable_by(|a, b| b.cmp(a));
        let (need, v) = residual[0..].first().copied().unwrap_or((0, 0));
        if need == 0 {
            break;
        }
        if need >= residual.len() {
            return None;
        }
        residual[0].0 = 0;
        for slot in residual[1..=need].iter_mut() {
            if slot.0 == 0 {
                return None;
            }
            slot.0 -= 1;
            adj[v].push(slot.1);
            adj[slot.1].push(v);
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    Some(Graph::from_sorted_adjacency(adj))
}

/// Largest forced set the advanced test walks through.
const MAX_FORCED_PREFIX: usize = 4096;

/// Graph-aware Erdős–Gallai test for `sol` as a solution for `g`.
///
/// Sound for every degree-vertex mapping, jumps included: it only rejects a
/// target that no insertion set can produce.
///
/// 1. The difference from the sorted pairing is majorized by the demand
///    sequence of every mapping, so it must pass the plain test.
/// 2. A source block that the target leaves empty is drained: each of its
///    vertices is raised at least to the next non-empty target degree. For
///    `X`, the top `r` drained vertices, the demand inside `X` must fit into
///    the non-edges of `g[X]` plus what the rest of the graph can send into
///    `X`, bounded per block by how many of its vertices can be raised and
///    how many non-neighbors in `X` each one has.
pub fn advanced_erdos_gallai_test(g: &Graph, sol: &AnonymizationSolution) -> EGVerdict {
    let source = g.block_sequence();
    let target = &sol.target;
    let Ok(diff) = difference(target, &source) else {
        return EGVerdict::fail_at(0);
    };
    let plain = erdos_gallai_blocks(diff.blocks());
    if !plain.realizable {
        return plain;
    }
    let n = g.n();
    if target.max_degree() + 1 > n.max(1) {
        return EGVerdict::fail_at(1);
    }
    let s = diff.norm();
    if s == 0 {
        return EGVerdict::pass();
    }
    let max_t = target.max_degree();
    let top = source.max_degree().max(max_t) + 1;

    // carry[j]: vertices of degree <= j that every mapping raises above j.
    let mut carry = vec![0usize; top];
    let (mut cs, mut ct) = (0usize, 0usize);
    for (j, c) in carry.iter_mut().enumerate() {
        cs += source.get(j);
        ct += target.get(j);
        *c = cs - ct;
    }
    let raised_max: Vec<usize> = (0..top)
        .map(|j| {
            let bj = source.get(j);
            let prev = if j == 0 { 0 } else { carry[j - 1] };
            (bj + prev).saturating_sub(target.get(j)).min(bj)
        })
        .collect();

    let blocks = g.blocks();
    let mut forced: Vec<(usize, usize)> = Vec::new();
    for (j, verts) in blocks.iter().enumerate() {
        if verts.is_empty() || target.get(j) > 0 {
            continue;
        }
        let next = (j + 1..=max_t).find(|&t| target.get(t) > 0).expect("target dominates source");
        forced.extend(verts.iter().map(|&v| (next - j, v)));
    }
    if forced.is_empty() {
        return plain;
    }
    forced.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    forced.truncate(MAX_FORCED_PREFIX);

    let mut in_x = vec![false; n];
    let mut hits = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut x_per_block = vec![0usize; top];
    let (mut inner_edges, mut demand) = (0u64, 0u64);
    for (idx, &(need, v)) in forced.iter().enumerate() {
        let r = idx as u64 + 1;
        inner_edges += hits[v] as u64;
        in_x[v] = true;
        x_per_block[g.degree(v)] += 1;
        for &w in g.neighbors(v) {
            if hits[w] == 0 {
                touched.push(w);
            }
            hits[w] += 1;
        }
        demand += need as u64;
        let inside = r * (r - 1) - 2 * inner_edges;
        if demand <= inside {
            continue;
        }
        let cap = outside_capacity(g, r as usize, max_t, &raised_max, &blocks, &in_x, &hits, &touched, &x_per_block);
        if demand > inside + cap.min(s - demand.min(s)) {
            return EGVerdict::fail_at(r as usize);
        }
    }
    plain
}

/// Upper bound on the number of new edges between `X` and the rest.
#[allow(clippy::too_many_arguments)]
fn outside_capacity(
    g: &Graph,
    r: usize,
    max_t: usize,
    raised_max: &[usize],
    blocks: &[Vec<usize>],
    in_x: &[bool],
    hits: &[usize],
    touched: &[usize],
    x_per_block: &[usize],
) -> u64 {
    let mut partial: Vec<Vec<usize>> = vec![Vec::new(); blocks.len()];
    for &w in touched {
        if !in_x[w] {
            partial[g.degree(w)].push(r - hits[w].min(r));
        }
    }
    let mut total = 0u64;
    for (j, verts) in blocks.iter().enumerate() {
        let outside = verts.len() - x_per_block[j];
        let p = raised_max[j].min(outside);
        if p == 0 || j >= max_t {
            continue;
        }
        let full = r.min(max_t - j);
        let vals = &mut partial[j];
        let free = outside - vals.len();
        if free >= p {
            total += (p * full) as u64;
            continue;
        }
        total += (free * full) as u64;
        vals.sort_unstable_by(|a, b| b.cmp(a));
        total += vals.iter().take(p - free).map(|&x| x.min(full) as u64).sum::<u64>();
    }
    total
}

/// Waste amounts above this only use the block-shift fast path.
const FALLBACK_MAX_WASTE: usize = 64;
/// Largest window of the fallback table.
const FALLBACK_MAX_WINDOW: usize = 64;

/// Candidate targets obtained by wasting `w` extra increments on top of
/// `sol`, cheapest first.
///
/// The fast path lifts `w` degrees from a target block to the next degree
/// when both blocks hold at least `2k` entries. For small `w` a table over
/// `sol.target` adds k-anonymous sequences dominating it at cost `w`.
pub struct Wasting<'g> {
    graph: &'g Graph,
    source: BlockSequence,
    base: AnonymizationSolution,
    k: usize,
    table: Option<DpTable>,
    cap: usize,
}

impl<'g> Wasting<'g> {
    pub fn new(graph: &'g Graph, base: &AnonymizationSolution, k: usize) -> Self {
        let source = graph.block_sequence();
        let cap = degree_cap(graph.n(), source.max_degree()).max(base.target.max_degree());
        Wasting { graph, source, base: base.clone(), k, table: None, cap }
    }

    fn fast_path(&self, w: usize) -> Vec<BlockSequence> {
        let t = &self.base.target;
        let mut out = Vec::new();
        let mut pairs: Vec<usize> = (0..t.max_degree())
            .filter(|&i| t.get(i) >= 2 * self.k && t.get(i + 1) >= 2 * self.k && t.get(i) - self.k >= w)
            .collect();
        pairs.sort_by_key(|&i| std::cmp::Reverse(t.get(i) + t.get(i + 1)));
        for i in pairs {
            let mut counts = t.counts().to_vec();
            counts[i] -= w;
            counts[i + 1] += w;
            out.push(BlockSequence::from_counts(counts));
        }
        out
    }

    fn table_for(&mut self, w: usize) -> &mut DpTable {
        let t = &self.base.target;
        let needed = w + 1;
        let stale = self
            .table
            .as_ref()
            .is_none_or(|tab| tab.space().window < needed.min(FALLBACK_MAX_WINDOW).min(t.n() + 1));
        if stale {
            let window = needed.next_power_of_two().clamp(8, FALLBACK_MAX_WINDOW).min(t.n() + 1).max(2 * self.k);
            let space = DpSpace {
                window,
                max_degree: self.cap.min(t.max_degree() + window),
                raised_only_blocks: true,
            };
            self.table = Some(DpTable::new(t, self.k, space));
        }
        self.table.as_mut().expect("table just built")
    }

    /// Targets with exactly `w` wasted increments, at most `limit` of them.
    pub fn candidates(&mut self, w: usize, limit: usize) -> Vec<AnonymizationSolution> {
        if w == 0 {
            return vec![self.base.clone()];
        }
        let mut targets = self.fast_path(w);
        if w > FALLBACK_MAX_WASTE {
            return self.finish(targets, limit);
        }
        let table = self.table_for(w);
        if table.feasible(w as u64) {
            if let Ok(it) = table.solutions(w as u64, limit) {
                targets.extend(it.map(|s| s.target));
            }
        }
        self.finish(targets, limit)
    }

    fn finish(&self, mut targets: Vec<BlockSequence>, limit: usize) -> Vec<AnonymizationSolution> {
        let mut seen = std::collections::HashSet::new();
        targets.retain(|t| seen.insert(t.clone()));
        targets.truncate(limit);
        targets
            .into_iter()
            .filter_map(|t| AnonymizationSolution::from_target(&self.source, t).ok())
            .collect()
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }
}

/// Cheapest wasted target passing the advanced test, with the amount wasted.
pub fn waste_to_realizable(
    g: &Graph,
    sol: &AnonymizationSolution,
    k: usize,
    budget: usize,
) -> Option<(AnonymizationSolution, u64)> {
    let mut wasting = Wasting::new(g, sol, k);
    for w in 0..=budget {
        if (sol.cost + w as u64) % 2 == 1 {
            continue;
        }
        for cand in wasting.candidates(w, 256) {
            if advanced_erdos_gallai_test(g, &cand).realizable {
                return Some((cand, w as u64));
            }
        }
    }
    None
}

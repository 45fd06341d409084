//! Brute-force reference solvers for small instances.
//!
//! Nothing here shares algorithmic code with the production modules; only the
//! graph and sequence types are reused. Every solver refuses inputs above its
//! size limit instead of running for hours.

use crate::error::{Error, Result};
use crate::graph::{EdgeInsertionSet, Graph};
use crate::sequence::{BlockSequence, DegreeSequence};

/// Vertex limit of [`brute_force_min_insertion`] and
/// [`brute_force_realize_target`].
pub const MAX_INSERTION_VERTICES: usize = 10;
/// Vertex limit of [`brute_force_kdsa`].
pub const MAX_KDSA_VERTICES: usize = 12;
/// Degree limit of [`brute_force_kdsa`].
pub const MAX_KDSA_DEGREE: usize = 6;
/// Vertex limit of [`brute_force_realizable`].
pub const MAX_REALIZABLE_VERTICES: usize = 8;

fn limit(what: &str, value: usize, max: usize) -> Result<()> {
    if value > max {
        Err(Error::OracleLimit(format!("{what} = {value} exceeds {max}")))
    } else {
        Ok(())
    }
}

fn anonymous(degrees: &[usize], k: usize) -> bool {
    let mut counts = std::collections::HashMap::new();
    for &d in degrees {
        *counts.entry(d).or_insert(0usize) += 1;
    }
    counts.values().all(|&c| c >= k)
}

fn complement_edges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Searches subsets of `pool` of exactly `size` edges, in lexicographic
/// order, for one where `accept` holds on the resulting degrees.
fn subsets_of_size(
    pool: &[(usize, usize)],
    size: usize,
    degrees: &mut Vec<usize>,
    chosen: &mut Vec<(usize, usize)>,
    start: usize,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if chosen.len() == size {
        return accept(degrees);
    }
    let need = size - chosen.len();
    for idx in start..pool.len() {
        if pool.len() - idx < need {
            break;
        }
        let (u, v) = pool[idx];
        degrees[u] += 1;
        degrees[v] += 1;
        chosen.push((u, v));
        if subsets_of_size(pool, size, degrees, chosen, idx + 1, accept) {
            return true;
        }
        chosen.pop();
        degrees[u] -= 1;
        degrees[v] -= 1;
    }
    false
}

/// Minimum-size k-insertion set with at most `edge_cap` edges, by iterative
/// deepening over subsets of the non-edges.
pub fn brute_force_min_insertion(g: &Graph, k: usize, edge_cap: usize) -> Result<Option<EdgeInsertionSet>> {
    limit("n", g.n(), MAX_INSERTION_VERTICES)?;
    let pool = complement_edges(g);
    for size in 0..=edge_cap.min(pool.len()) {
        let mut degrees = g.degrees();
        let mut chosen = Vec::new();
        if subsets_of_size(&pool, size, &mut degrees, &mut chosen, 0, &mut |d| anonymous(d, k)) {
            return Ok(Some(EdgeInsertionSet::from_pairs(chosen)?));
        }
    }
    Ok(None)
}

/// An insertion set `S` with `block_sequence(g + S) == target`, if any.
pub fn brute_force_realize_target(g: &Graph, target: &BlockSequence) -> Result<Option<EdgeInsertionSet>> {
    limit("n", g.n(), MAX_INSERTION_VERTICES)?;
    if target.n() != g.n() {
        return Ok(None);
    }
    let base: u64 = g.degrees().iter().map(|&d| d as u64).sum();
    let Some(gap) = target.norm().checked_sub(base) else {
        return Ok(None);
    };
    if gap % 2 == 1 {
        return Ok(None);
    }
    let mut want = Vec::new();
    for (d, &c) in target.counts().iter().enumerate() {
        want.extend(std::iter::repeat_n(d, c));
    }
    let pool = complement_edges(g);
    let mut degrees = g.degrees();
    let mut chosen = Vec::new();
    let found = subsets_of_size(&pool, (gap / 2) as usize, &mut degrees, &mut chosen, 0, &mut |d| {
        let mut s = d.to_vec();
        s.sort_unstable();
        s == want
    });
    Ok(found.then(|| EdgeInsertionSet::from_pairs(chosen).expect("pool edges are distinct")))
}

/// All nondecreasing sequences dominating `lower` with values at most
/// `cap`, whose runs all have length at least `k`, reported with their cost.
fn kdsa_search(
    lower: &[usize],
    k: usize,
    cap: usize,
    budget: u64,
    visit: &mut dyn FnMut(&[usize], u64),
) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        lower: &[usize],
        k: usize,
        cap: usize,
        budget: u64,
        cur: &mut Vec<usize>,
        run: usize,
        cost: u64,
        visit: &mut dyn FnMut(&[usize], u64),
    ) {
        let i = cur.len();
        if i == lower.len() {
            if run >= k || i == 0 {
                visit(cur, cost);
            }
            return;
        }
        let prev = cur.last().copied();
        let lo = lower[i].max(prev.unwrap_or(0));
        for v in lo..=cap {
            let extra = (v - lower[i]) as u64;
            if cost + extra > budget {
                break;
            }
            let same = prev == Some(v);
            if !same && prev.is_some() && run < k {
                continue;
            }
            cur.push(v);
            go(lower, k, cap, budget, cur, if same { run + 1 } else { 1 }, cost + extra, visit);
            cur.pop();
        }
    }
    go(lower, k, cap, budget, &mut Vec::new(), 0, 0, visit);
}

/// Minimum number of increments that make `b` k-anonymous.
///
/// Values above `Δ` never help a minimum solution (clamping them to `Δ`
/// keeps domination and anonymity while lowering the cost), so the search is
/// exhaustive over values in `0..=Δ`.
pub fn brute_force_kdsa(b: &BlockSequence, k: usize) -> Result<u64> {
    limit("n", b.n(), MAX_KDSA_VERTICES)?;
    limit("max degree", b.max_degree(), MAX_KDSA_DEGREE)?;
    if k > b.n() && b.n() > 0 {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {}", b.n())));
    }
    let lower = b.degree_sequence().values().to_vec();
    let mut best = u64::MAX;
    kdsa_search(&lower, k.max(1), b.max_degree(), u64::MAX, &mut |_, c| best = best.min(c));
    Ok(best)
}

/// Every k-anonymous sequence dominating `b` with values at most `cap` and
/// cost exactly `cost`.
pub fn brute_force_kdsa_targets(b: &BlockSequence, k: usize, cap: usize, cost: u64) -> Result<Vec<BlockSequence>> {
    limit("n", b.n(), MAX_KDSA_VERTICES)?;
    limit("cap", cap, 2 * MAX_KDSA_DEGREE)?;
    let lower = b.degree_sequence().values().to_vec();
    let mut out = Vec::new();
    kdsa_search(&lower, k.max(1), cap.max(b.max_degree()), cost, &mut |seq, c| {
        if c == cost {
            out.push(BlockSequence::from_degrees(seq.iter().copied()));
        }
    });
    out.sort_by(|a, b| a.counts().cmp(b.counts()));
    Ok(out)
}

/// True iff some simple graph has degree sequence `d`, by exhaustive
/// backtracking over the edges of the complete graph.
pub fn brute_force_realizable(d: &DegreeSequence) -> Result<bool> {
    limit("n", d.len(), MAX_REALIZABLE_VERTICES)?;
    let n = d.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut residual = d.values().to_vec();

    fn go(pairs: &[(usize, usize)], idx: usize, residual: &mut [usize]) -> bool {
        if residual.iter().all(|&r| r == 0) {
            return true;
        }
        let Some(&(u, v)) = pairs.get(idx) else {
            return false;
        };
        // `u` gets no further chances once all of its pairs are passed.
        if residual[u] > 0 && residual[u] > pairs[idx..].iter().filter(|p| p.0 == u).count() {
            return false;
        }
        if residual[u] > 0 && residual[v] > 0 {
            residual[u] -= 1;
            residual[v] -= 1;
            if go(pairs, idx + 1, residual) {
                return true;
            }
            residual[u] += 1;
            residual[v] += 1;
        }
        go(pairs, idx + 1, residual)
    }

    Ok(go(&pairs, 0, &mut residual))
}

//! Exact k-anonymization of block sequences.
//!
//! `T[i][u][c]` is true iff the ascending degree sequence of blocks `0..=i`,
//! minus its `u` highest degrees, can be made k-anonymous using values at
//! most `i` with exactly `c` increments. The `u` removed degrees are the ones
//! carried to values above `i`. The table is filled one cost level at a
//! time, so it only grows as far as the caller asks.
//!
//! At level `i` with `u` carried degrees, the next target block (value `i`)
//! takes the top `j` remaining degrees, where `j == 0` or `j >= k`:
//!
//! * `u < b_i`: the `b_i - u` originals that stay are joined by the top `t'`
//!   degrees of blocks `0..i`, with `t' >= k - (b_i - u)` and `t' < window`.
//! * `u >= b_i`: the whole block is carried and `u - b_i` degrees of blocks
//!   `0..i` are carried past `i` as well. With
//!   [`DpSpace::raised_only_blocks`] a block made only of raised degrees may
//!   also be opened here.
//!
//! [`DpSpace::classic`] with window `2k`, values up to `Δ` and no raised-only
//! blocks is the classic recursion; it contains every minimum-cost solution.
//! [`DpSpace::complete`] contains every k-anonymous dominating sequence whose
//! values respect the degree cap, at every cost.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{natural_moves, BlockSequence, Move};

/// Largest target degree worth considering for an `n`-vertex graph of
/// maximum degree `delta`: a minimum insertion set never lifts the maximum
/// degree above `2Δ²`, and no simple graph exceeds `n - 1`.
pub fn degree_cap(n: usize, delta: usize) -> usize {
    let bound = delta.max(2 * delta * delta);
    bound.min(n.saturating_sub(1)).max(delta)
}

/// Shape of the search space explored by the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpSpace {
    /// Exclusive bound on the number of degrees carried past a block.
    pub window: usize,
    /// Largest target degree.
    pub max_degree: usize,
    /// Allow target blocks that contain no original degree of their value.
    pub raised_only_blocks: bool,
}

impl DpSpace {
    pub fn classic(b: &BlockSequence, k: usize) -> Self {
        DpSpace { window: 2 * k.max(1), max_degree: b.max_degree(), raised_only_blocks: false }
    }

    pub fn complete(b: &BlockSequence) -> Self {
        let n = b.n();
        DpSpace { window: n + 1, max_degree: degree_cap(n, b.max_degree()), raised_only_blocks: true }
    }

    /// True when every k-anonymous sequence dominating `b` with values up to
    /// the degree cap is represented.
    pub fn is_complete_for(&self, b: &BlockSequence) -> bool {
        self.raised_only_blocks
            && self.window > b.n()
            && self.max_degree >= degree_cap(b.n(), b.max_degree())
    }
}

/// Cumulative sums of the highest degrees of each prefix `B(i)`.
///
/// `cost(i, t)`, the number of increments that lift the `t` highest degrees
/// of `B(i)` to `i + 1`, is `t·(i+1)` minus the stored sum.
#[derive(Clone, Debug)]
pub struct CostTable {
    width: usize,
    /// `top[i * width + t]`: sum of the `t` largest degrees of blocks `0..=i`.
    top: Vec<u64>,
    /// `prefix[i]`: number of degrees in blocks `0..=i`.
    prefix: Vec<usize>,
}

impl CostTable {
    /// Table for `t < width` over levels `0..=max_degree`.
    pub fn with_width(b: &BlockSequence, max_degree: usize, width: usize) -> Self {
        let levels = max_degree + 1;
        let mut top = vec![0u64; levels * width];
        let mut prefix = vec![0usize; levels];
        let mut acc = 0;
        for (i, p) in prefix.iter_mut().enumerate() {
            acc += b.get(i);
            *p = acc;
        }
        for i in 0..levels {
            let row = &mut top[i * width..(i + 1) * width];
            let mut t = 1;
            let mut sum = 0u64;
            let mut d = i as isize;
            let mut left = if i <= b.max_degree() { b.get(i) } else { 0 };
            while t < width && d >= 0 {
                if left == 0 {
                    d -= 1;
                    if d >= 0 {
                        left = b.get(d as usize);
                    }
                    continue;
                }
                sum += d as u64;
                row[t] = sum;
                left -= 1;
                t += 1;
            }
        }
        CostTable { width, top, prefix }
    }

    /// The table over `0 ≤ i < Δ`, `0 ≤ t < 2k`.
    pub fn new(b: &BlockSequence, k: usize) -> Self {
        Self::with_width(b, b.max_degree(), 2 * k.max(1))
    }

    /// Degrees in blocks `0..=i`.
    pub fn prefix_count(&self, i: usize) -> usize {
        self.prefix[i]
    }

    /// Sum of the `t` highest degrees of `B(i)`; `None` if `B(i)` has fewer
    /// than `t` degrees or `t` is outside the table.
    pub fn top_sum(&self, i: usize, t: usize) -> Option<u64> {
        if t >= self.width || i >= self.prefix.len() || t > self.prefix[i] {
            return None;
        }
        Some(self.top[i * self.width + t])
    }

    /// Increments needed to lift the `t` highest degrees of `B(i)` to `i + 1`.
    pub fn cost(&self, i: usize, t: usize) -> Option<u64> {
        self.top_sum(i, t).map(|s| t as u64 * (i as u64 + 1) - s)
    }

    /// Increments needed to lift the degrees of `B(i)` ranked `a+1..=a+len`
    /// from the top to `value`.
    fn raise_range(&self, i: usize, a: usize, len: usize, value: usize) -> Option<u64> {
        let hi = self.top_sum(i, a + len)?;
        let lo = self.top_sum(i, a)?;
        Some(len as u64 * value as u64 - (hi - lo))
    }
}

#[derive(Clone, Debug)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet { words: vec![0; bits.div_ceil(64)] }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }
}

/// One candidate choice for a target block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Step {
    /// Size of the target block at this level.
    block: usize,
    /// Degrees carried out of the previous prefix.
    carried: usize,
    cost: u64,
}

/// The cost-layered DP table for one `(B, k)` instance.
#[derive(Clone, Debug)]
pub struct DpTable {
    source: BlockSequence,
    k: usize,
    space: DpSpace,
    costs: CostTable,
    levels: Vec<BitSet>,
}

impl DpTable {
    pub fn new(b: &BlockSequence, k: usize, space: DpSpace) -> Self {
        assert!(k >= 1, "k must be positive");
        let max_degree = space.max_degree.max(b.max_degree());
        let space = DpSpace { max_degree, window: space.window.max(1), ..space };
        let costs = CostTable::with_width(b, max_degree, space.window);
        DpTable { source: b.clone(), k, space, costs, levels: Vec::new() }
    }

    /// Table over the classic search space.
    pub fn classic(b: &BlockSequence, k: usize) -> Self {
        Self::new(b, k, DpSpace::classic(b, k))
    }

    pub fn source(&self) -> &BlockSequence {
        &self.source
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn space(&self) -> DpSpace {
        self.space
    }

    /// Highest cost any target in the space can have: every degree at the cap.
    pub fn max_cost(&self) -> u64 {
        self.source.n() as u64 * self.space.max_degree as u64 - self.source.norm()
    }

    /// Number of cost levels filled so far.
    pub fn filled_levels(&self) -> u64 {
        self.levels.len() as u64
    }

    #[inline]
    fn idx(&self, i: usize, u: usize) -> usize {
        i * self.space.window + u
    }

    fn entry(&self, i: usize, u: usize, c: u64) -> bool {
        self.levels[c as usize].get(self.idx(i, u))
    }

    /// Choices at level `i > 0` with `u` carried degrees, in ascending order of
    /// block size.
    fn steps(&self, i: usize, u: usize, mut f: impl FnMut(Step)) {
        let bi = self.source.get(i);
        let w = self.space.window;
        let below = self.costs.prefix_count(i - 1);
        let k = self.k;
        if u >= bi {
            let a = u - bi;
            f(Step { block: 0, carried: a, cost: 0 });
            if self.space.raised_only_blocks {
                let mut j = k;
                while a + j < w && a + j <= below {
                    if let Some(cost) = self.costs.raise_range(i - 1, a, j, i) {
                        f(Step { block: j, carried: a + j, cost });
                    }
                    j += 1;
                }
            }
        } else {
            let stay = bi - u;
            let mut t = k.saturating_sub(stay);
            while t < w && t <= below {
                if let Some(cost) = self.costs.raise_range(i - 1, 0, t, i) {
                    f(Step { block: stay + t, carried: t, cost });
                }
                t += 1;
            }
        }
    }

    fn base(&self, u: usize, c: u64) -> bool {
        let b0 = self.source.get(0);
        c == 0 && u <= b0 && (b0 - u == 0 || b0 - u >= self.k)
    }

    /// Fills cost levels up to and including `c`.
    pub fn ensure_level(&mut self, c: u64) {
        while self.levels.len() as u64 <= c {
            self.fill_next_level();
        }
    }

    fn fill_next_level(&mut self) {
        let c = self.levels.len() as u64;
        let w = self.space.window;
        let levels = self.space.max_degree + 1;
        let mut cur = BitSet::new(levels * w);
        for u in 0..w {
            if self.base(u, c) {
                cur.set(self.idx(0, u));
            }
        }
        for i in 1..levels {
            let limit = self.costs.prefix_count(i);
            for u in 0..w.min(limit + 1) {
                let mut hit = false;
                self.steps(i, u, |s| {
                    if hit || s.cost > c {
                        return;
                    }
                    let prev = self.idx(i - 1, s.carried);
                    hit = if s.cost == 0 {
                        cur.get(prev)
                    } else {
                        self.levels[(c - s.cost) as usize].get(prev)
                    };
                });
                if hit {
                    cur.set(self.idx(i, u));
                }
            }
        }
        self.levels.push(cur);
    }

    /// True iff some k-anonymous target in the space costs exactly `c`.
    pub fn feasible(&mut self, c: u64) -> bool {
        if c > self.max_cost() {
            return false;
        }
        self.ensure_level(c);
        self.entry(self.space.max_degree, 0, c)
    }

    /// Raw table entry; fills levels as needed.
    pub fn get(&mut self, i: usize, t: usize, c: u64) -> bool {
        if i > self.space.max_degree || t >= self.space.window {
            return false;
        }
        self.ensure_level(c);
        self.entry(i, t, c)
    }

    /// Smallest feasible cost not exceeding `budget`.
    pub fn min_cost(&mut self, budget: u64) -> Option<u64> {
        (0..=budget.min(self.max_cost())).find(|&c| self.feasible(c))
    }

    /// All solutions of cost exactly `s`, at most `limit` of them, in a fixed
    /// depth-first order (smaller blocks at higher degrees first).
    pub fn solutions(&mut self, s: u64, limit: usize) -> Result<Solutions<'_>> {
        if !self.feasible(s) {
            return Err(Error::InfeasibleCost(s));
        }
        let top = self.space.max_degree;
        let mut it = Solutions {
            table: self,
            stack: Vec::new(),
            blocks: vec![0; top + 1],
            seen: HashSet::new(),
            remaining: limit,
        };
        it.push_frame(top, 0, s);
        Ok(it)
    }
}

/// A k-anonymous target together with the raises that produce it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnonymizationSolution {
    pub target: BlockSequence,
    pub cost: u64,
    pub moves: Vec<Move>,
}

impl AnonymizationSolution {
    /// Solution for `target ⊵ source`, with moves from the sorted pairing.
    pub fn from_target(source: &BlockSequence, target: BlockSequence) -> Result<Self> {
        let moves = natural_moves(source, &target)?;
        let cost = target.norm() - source.norm();
        Ok(AnonymizationSolution { target, cost, moves })
    }

    /// The zero-cost solution for an already anonymous sequence.
    pub fn identity(source: &BlockSequence) -> Self {
        AnonymizationSolution { target: source.clone(), cost: 0, moves: Vec::new() }
    }
}

struct Frame {
    level: usize,
    cost: u64,
    steps: Vec<Step>,
    next: usize,
    carried: usize,
}

/// Iterator over the solutions of one cost; see [`DpTable::solutions`].
pub struct Solutions<'a> {
    table: &'a DpTable,
    stack: Vec<Frame>,
    blocks: Vec<usize>,
    seen: HashSet<BlockSequence>,
    remaining: usize,
}

impl Solutions<'_> {
    fn push_frame(&mut self, level: usize, carried: usize, cost: u64) {
        let mut steps = Vec::new();
        if level > 0 {
            let t = self.table;
            t.steps(level, carried, |s| {
                if s.cost <= cost && t.entry(level - 1, s.carried, cost - s.cost) {
                    steps.push(s);
                }
            });
        }
        self.stack.push(Frame { level, cost, steps, next: 0, carried });
    }
}

impl Iterator for Solutions<'_> {
    type Item = AnonymizationSolution;

    fn next(&mut self) -> Option<AnonymizationSolution> {
        while self.remaining > 0 {
            let frame = self.stack.last_mut()?;
            if frame.level == 0 {
                self.blocks[0] = self.table.source.get(0) - frame.carried;
                self.stack.pop();
                let target = BlockSequence::from_counts(self.blocks.clone());
                if !self.seen.insert(target.clone()) {
                    continue;
                }
                self.remaining -= 1;
                let sol = AnonymizationSolution::from_target(&self.table.source, target)
                    .expect("DP targets dominate their source");
                return Some(sol);
            }
            if frame.next == frame.steps.len() {
                self.stack.pop();
                continue;
            }
            let step = frame.steps[frame.next];
            frame.next += 1;
            let (level, cost) = (frame.level, frame.cost);
            self.blocks[level] = step.block;
            self.push_frame(level - 1, step.carried, cost - step.cost);
        }
        None
    }
}

/// Cost table for `(b, k)`.
pub fn compute_cost_table(b: &BlockSequence, k: usize) -> CostTable {
    CostTable::new(b, k)
}

/// Classic table for `(b, k)` with cost levels `0..=s_max` filled.
pub fn run_dp(b: &BlockSequence, k: usize, s_max: u64) -> DpTable {
    let mut t = DpTable::classic(b, k);
    t.ensure_level(s_max);
    t
}

/// Minimum number of increments that make `b` k-anonymous, if at most `budget`.
pub fn min_cost(b: &BlockSequence, k: usize, budget: u64) -> Option<u64> {
    DpTable::classic(b, k).min_cost(budget)
}

/// Solutions of cost exactly `s`, up to `limit`.
pub fn enumerate_solutions(
    table: &mut DpTable,
    s: u64,
    limit: usize,
) -> Result<impl Iterator<Item = AnonymizationSolution> + '_> {
    table.solutions(s, limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(c: &[usize]) -> BlockSequence {
        BlockSequence::from_counts(c.to_vec())
    }

    /// Direct summation over the sorted prefix.
    fn cost_by_sorting(b: &BlockSequence, i: usize, t: usize) -> Option<u64> {
        let mut prefix: Vec<usize> = b.degree_sequence().values().iter().copied().filter(|&d| d <= i).collect();
        if t > prefix.len() {
            return None;
        }
        prefix.reverse();
        Some(prefix[..t].iter().map(|&d| (i + 1 - d) as u64).sum())
    }

    #[test]
    fn cost_table_examples() {
        let fig2 = bs(&[0, 3, 1, 4, 0, 1, 1]);
        let ct = compute_cost_table(&fig2, 2);
        assert_eq!(ct.cost(1, 1), Some(1));
        for i in 0..fig2.max_degree() {
            assert_eq!(ct.cost(i, 0), Some(0));
            for t in 0..4 {
                assert_eq!(ct.cost(i, t), cost_by_sorting(&fig2, i, t), "i={i} t={t}");
            }
        }
        let small = bs(&[0, 2]);
        let ct = compute_cost_table(&small, 2);
        assert_eq!(ct.cost(1, 1), Some(1));
        assert_eq!(ct.cost(1, 2), Some(2));
        assert_eq!(ct.cost(1, 3), None);
    }

    #[test]
    fn paw_min_cost() {
        let mut t = run_dp(&bs(&[0, 1, 2, 1]), 4, 8);
        assert!(!t.feasible(3));
        assert!(t.feasible(4));
        assert_eq!(min_cost(&bs(&[0, 1, 2, 1]), 4, 100), Some(4));
    }

    #[test]
    fn already_anonymous_costs_nothing() {
        let b = bs(&[0, 3, 0, 5, 0, 0, 2]);
        let mut t = run_dp(&b, 2, 0);
        assert!(t.get(b.max_degree(), 0, 0));
        let sols: Vec<_> = t.solutions(0, 10).unwrap().collect();
        assert_eq!(sols, vec![AnonymizationSolution::identity(&b)]);
    }

    #[test]
    fn two_targets_of_cost_two() {
        let b = bs(&[0, 3, 1, 4, 0, 1, 1]);
        assert_eq!(min_cost(&b, 2, 100), Some(2));
        let mut t = DpTable::classic(&b, 2);
        let targets: HashSet<_> = t.solutions(2, 100).unwrap().map(|s| s.target).collect();
        let expected: HashSet<_> = [bs(&[0, 3, 0, 5, 0, 0, 2]), bs(&[0, 2, 2, 4, 0, 0, 2])].into_iter().collect();
        assert_eq!(targets, expected);
    }

    #[test]
    fn small_examples() {
        assert_eq!(min_cost(&bs(&[0, 4, 1]), 2, 10), Some(1));
        assert_eq!(min_cost(&bs(&[0, 15, 0, 3, 2, 1, 0, 2, 0, 1]), 2, 100), Some(4));
        assert_eq!(min_cost(&bs(&[0, 4, 1]), 6, 100), None);
    }

    #[test]
    fn infeasible_cost_is_an_error() {
        let mut t = DpTable::classic(&bs(&[0, 1, 2, 1]), 4);
        assert!(matches!(t.solutions(3, 10), Err(Error::InfeasibleCost(3))));
    }

    #[test]
    fn solutions_respect_invariants() {
        let b = bs(&[0, 3, 1, 3, 1, 3]);
        let mut t = DpTable::classic(&b, 2);
        let s = t.min_cost(100).unwrap();
        let sols: Vec<_> = t.solutions(s, 1000).unwrap().collect();
        assert!(sols.len() >= 2);
        for sol in &sols {
            assert!(sol.target.is_k_anonymous(2));
            assert!(sol.target.dominates(&b).unwrap());
            assert_eq!(sol.cost, s);
            assert_eq!(sol.moves.iter().map(Move::cost).sum::<u64>(), s);
        }
    }

    #[test]
    fn limit_stops_enumeration() {
        let b = bs(&[0, 3, 1, 3, 1, 3, 1, 3]);
        let mut t = DpTable::classic(&b, 2);
        let s = t.min_cost(100).unwrap();
        assert_eq!(t.solutions(s, 2).unwrap().count(), 2);
    }

    #[test]
    fn complete_space_reaches_beyond_max_degree() {
        // Triangle plus an isolated vertex, k = 4: only K4 works, which needs
        // degree 3 > Δ = 2.
        let b = bs(&[1, 0, 3]);
        let mut classic = DpTable::classic(&b, 4);
        assert_eq!(classic.min_cost(100), Some(2));
        assert!(!classic.feasible(6));
        let mut full = DpTable::new(&b, 4, DpSpace::complete(&b));
        assert!(full.feasible(6));
        let targets: Vec<_> = full.solutions(6, 10).unwrap().map(|s| s.target).collect();
        assert_eq!(targets, vec![bs(&[0, 0, 0, 4])]);
    }

    #[test]
    fn degree_cap_values() {
        assert_eq!(degree_cap(4, 2), 3);
        assert_eq!(degree_cap(100, 3), 18);
        assert_eq!(degree_cap(1, 0), 0);
    }
}

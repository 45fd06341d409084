//! Realizing a k-anonymous target inside the input graph.
//!
//! A target is first turned into per-vertex demands by a degree-vertex
//! mapping (which vertex of each source block goes where, possibly jumping
//! over non-empty blocks) and then the local exchange heuristic tries to
//! insert edges meeting every demand exactly.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dp::AnonymizationSolution;
use crate::graph::{EdgeInsertionSet, Graph};
use crate::sequence::{BlockSequence, Move};

/// Jumps applied on top of the natural interpretation: `(block, count)`
/// pairs, ascending by block.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JumpConfiguration {
    pub jumps: Vec<(usize, usize)>,
}

impl JumpConfiguration {
    pub fn natural() -> Self {
        Self::default()
    }

    pub fn is_natural(&self) -> bool {
        self.jumps.is_empty()
    }

    /// Number of jumped blocks.
    pub fn alpha(&self) -> usize {
        self.jumps.len()
    }
}

/// Blocks that can be jumped over, with the largest possible count: some
/// degree is raised into the block and some degree of the block is raised
/// out of it.
pub fn jump_blocks(moves: &[Move]) -> Vec<(usize, usize)> {
    let mut inflow = std::collections::BTreeMap::new();
    let mut outflow = std::collections::BTreeMap::new();
    for m in moves {
        *inflow.entry(m.to).or_insert(0usize) += m.count;
        *outflow.entry(m.from).or_insert(0usize) += m.count;
    }
    inflow
        .into_iter()
        .filter_map(|(i, a)| outflow.get(&i).map(|&b| (i, a.min(b))))
        .collect()
}

fn add_move(moves: &mut Vec<Move>, from: usize, to: usize, count: usize) {
    if count == 0 || from == to {
        return;
    }
    match moves.iter_mut().find(|m| m.from == from && m.to == to) {
        Some(m) => m.count += count,
        None => moves.push(Move { from, to, count }),
    }
}

/// Moves after applying `jumps` to `moves`, or `None` if some jump asks for
/// more degrees than pass through its block.
///
/// Jumping `x` degrees over block `i` replaces `x` raises `a → i` and `x`
/// raises `i → b` by `x` raises `a → b`; `x` vertices of block `i` then keep
/// their degree. Inflow is taken from the closest source blocks first and
/// outflow goes to the closest targets first.
pub fn apply_jumps(moves: &[Move], jumps: &JumpConfiguration) -> Option<Vec<Move>> {
    let mut cur: Vec<Move> = moves.to_vec();
    for &(i, x) in &jumps.jumps {
        let mut ins: Vec<(usize, usize)> = cur.iter().filter(|m| m.to == i).map(|m| (m.from, m.count)).collect();
        let mut outs: Vec<(usize, usize)> = cur.iter().filter(|m| m.from == i).map(|m| (m.to, m.count)).collect();
        ins.sort_unstable_by_key(|e| std::cmp::Reverse(e.0));
        outs.sort_unstable_by_key(|o| o.0);
        if ins.iter().map(|p| p.1).sum::<usize>() < x || outs.iter().map(|p| p.1).sum::<usize>() < x {
            return None;
        }
        let mut left = x;
        let (mut ai, mut bi) = (0, 0);
        while left > 0 {
            let take = left.min(ins[ai].1).min(outs[bi].1);
            let (a, b) = (ins[ai].0, outs[bi].0);
            for m in cur.iter_mut() {
                if (m.from == a && m.to == i) || (m.from == i && m.to == b) {
                    m.count -= take;
                }
            }
            add_move(&mut cur, a, b, take);
            ins[ai].1 -= take;
            outs[bi].1 -= take;
            left -= take;
            if ins[ai].1 == 0 {
                ai += 1;
            }
            if outs[bi].1 == 0 {
                bi += 1;
            }
        }
        cur.retain(|m| m.count > 0);
    }
    cur.sort_unstable();
    Some(cur)
}

/// Lazy enumeration of jump configurations: all subsets of jump blocks of
/// size `α = 0, 1, …` in lexicographic order, and for each subset every
/// combination of counts `1..=min(cap, max)`.
pub struct JumpConfigs {
    blocks: Vec<(usize, usize)>,
    max_alpha: usize,
    count_cap: usize,
    alpha: usize,
    subset: Vec<usize>,
    counts: Vec<usize>,
    fresh: bool,
    done: bool,
}

impl JumpConfigs {
    fn limit(&self, pos: usize) -> usize {
        self.blocks[self.subset[pos]].1.min(self.count_cap)
    }

    fn start_alpha(&mut self) -> bool {
        if self.alpha > self.max_alpha.min(self.blocks.len()) {
            return false;
        }
        self.subset = (0..self.alpha).collect();
        self.counts = vec![1; self.alpha];
        true
    }

    fn next_subset(&mut self) -> bool {
        let (a, nb) = (self.alpha, self.blocks.len());
        let Some(pos) = (0..a).rev().find(|&p| self.subset[p] < nb - a + p) else {
            return false;
        };
        self.subset[pos] += 1;
        for p in pos + 1..a {
            self.subset[p] = self.subset[p - 1] + 1;
        }
        self.counts = vec![1; a];
        true
    }

    fn next_counts(&mut self) -> bool {
        for p in (0..self.alpha).rev() {
            if self.counts[p] < self.limit(p) {
                self.counts[p] += 1;
                for q in p + 1..self.alpha {
                    self.counts[q] = 1;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> JumpConfiguration {
        JumpConfiguration {
            jumps: self.subset.iter().zip(&self.counts).map(|(&s, &c)| (self.blocks[s].0, c)).collect(),
        }
    }
}

impl Iterator for JumpConfigs {
    type Item = JumpConfiguration;

    fn next(&mut self) -> Option<JumpConfiguration> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(self.current());
        }
        if !self.next_counts() && !self.next_subset() {
            self.alpha += 1;
            if !self.start_alpha() {
                self.done = true;
                return None;
            }
        }
        Some(self.current())
    }
}

/// Jump configurations for `sol`, the natural interpretation first.
pub fn enumerate_jump_configs(sol: &AnonymizationSolution, max_jump_blocks: usize, count_cap: usize) -> JumpConfigs {
    JumpConfigs {
        blocks: jump_blocks(&sol.moves),
        max_alpha: max_jump_blocks,
        count_cap: count_cap.max(1),
        alpha: 0,
        subset: Vec::new(),
        counts: Vec::new(),
        fresh: true,
        done: false,
    }
}

/// Target degree per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVertexMapping {
    pub assignment: Vec<usize>,
}

impl DegreeVertexMapping {
    pub fn demand(&self, g: &Graph) -> DemandFunction {
        DemandFunction { demand: self.assignment.iter().enumerate().map(|(v, &d)| d - g.degree(v)).collect() }
    }

    pub fn target_blocks(&self) -> BlockSequence {
        BlockSequence::from_degrees(self.assignment.iter().copied())
    }
}

/// New incident edges required per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemandFunction {
    pub demand: Vec<usize>,
}

impl DemandFunction {
    pub fn total(&self) -> u64 {
        self.demand.iter().map(|&d| d as u64).sum()
    }

    /// Vertices with positive demand.
    pub fn support(&self) -> Vec<usize> {
        (0..self.demand.len()).filter(|&v| self.demand[v] > 0).collect()
    }
}

/// True if every source block is either untouched or raised entirely to a
/// single degree, so every mapping for `moves` is the same.
pub fn mapping_is_forced(blocks: &[Vec<usize>], moves: &[Move]) -> bool {
    blocks.iter().enumerate().all(|(j, verts)| {
        let out: Vec<&Move> = moves.iter().filter(|m| m.from == j).collect();
        let total: usize = out.iter().map(|m| m.count).sum();
        total == 0 || (total == verts.len() && out.len() == 1)
    })
}

/// Samples a mapping: within each source block, the raised vertices are a
/// uniform random ordered sample without replacement.
pub fn sample_mapping<R: Rng + ?Sized>(g: &Graph, blocks: &[Vec<usize>], moves: &[Move], rng: &mut R) -> DegreeVertexMapping {
    let mut assignment = g.degrees();
    let mut by_source: Vec<Vec<&Move>> = vec![Vec::new(); blocks.len()];
    for m in moves {
        by_source[m.from].push(m);
    }
    for (j, ms) in by_source.iter().enumerate() {
        let need: usize = ms.iter().map(|m| m.count).sum();
        if need == 0 {
            continue;
        }
        let mut pool = blocks[j].clone();
        let (chosen, _) = pool.partial_shuffle(rng, need);
        let mut it = chosen.iter();
        for m in ms {
            for &v in it.by_ref().take(m.count) {
                assignment[v] = m.to;
            }
        }
    }
    DegreeVertexMapping { assignment }
}

#[inline]
fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

struct Exchange<'g> {
    g: &'g Graph,
    demand: Vec<usize>,
    edges: Vec<(usize, usize)>,
    present: HashSet<(usize, usize)>,
}

impl Exchange<'_> {
    fn insertable(&self, u: usize, v: usize) -> bool {
        u != v && !self.g.has_edge(u, v) && !self.present.contains(&key(u, v))
    }

    fn insert(&mut self, u: usize, v: usize) {
        let e = key(u, v);
        self.edges.push(e);
        self.present.insert(e);
    }

    fn remove_at(&mut self, idx: usize) -> (usize, usize) {
        let e = self.edges.remove(idx);
        self.present.remove(&e);
        e
    }

    fn active(&self) -> Vec<usize> {
        (0..self.demand.len()).filter(|&v| self.demand[v] > 0).collect()
    }

    /// Random greedy insertion until no pair of demanding vertices is
    /// insertable.
    fn greedy<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        loop {
            let mut act = self.active();
            if act.len() < 2 {
                return;
            }
            act.shuffle(rng);
            let mut progress = false;
            for i in 0..act.len() {
                let v = act[i];
                if self.demand[v] == 0 {
                    continue;
                }
                let offset = rng.gen_range(0..act.len());
                for step in 0..act.len() {
                    if self.demand[v] == 0 {
                        break;
                    }
                    let u = act[(offset + step) % act.len()];
                    if self.demand[u] > 0 && self.insertable(u, v) {
                        self.insert(u, v);
                        self.demand[u] -= 1;
                        self.demand[v] -= 1;
                        progress = true;
                    }
                }
            }
            if !progress {
                return;
            }
        }
    }

    /// One exchange on a stuck state. Returns false if none applies.
    fn exchange(&mut self) -> bool {
        let act = self.active();
        if act.len() >= 2 {
            for (a, &v1) in act.iter().enumerate() {
                for &v2 in &act[a + 1..] {
                    for idx in 0..self.edges.len() {
                        let (u, w) = self.edges[idx];
                        let pick = if self.insertable(v1, u) && self.insertable(v2, w) && key(v1, u) != key(v2, w) {
                            Some((u, w))
                        } else if self.insertable(v1, w) && self.insertable(v2, u) && key(v1, w) != key(v2, u) {
                            Some((w, u))
                        } else {
                            None
                        };
                        if let Some((x, y)) = pick {
                            self.remove_at(idx);
                            self.insert(v1, x);
                            self.insert(v2, y);
                            self.demand[v1] -= 1;
                            self.demand[v2] -= 1;
                            return true;
                        }
                    }
                }
            }
            return false;
        }
        if let [v] = act[..] {
            if self.demand[v] < 2 {
                return false;
            }
            for idx in 0..self.edges.len() {
                let (u, w) = self.edges[idx];
                if self.insertable(v, u) && self.insertable(v, w) {
                    self.remove_at(idx);
                    self.insert(v, u);
                    self.insert(v, w);
                    self.demand[v] -= 2;
                    return true;
                }
            }
        }
        false
    }
}

/// Local exchange heuristic: random greedy insertion, and when stuck, swap
/// one inserted edge for two edges serving the remaining demand.
pub fn local_exchange<R: Rng + ?Sized>(g: &Graph, demand: &DemandFunction, rng: &mut R) -> Option<EdgeInsertionSet> {
    if demand.total() % 2 == 1 || demand.demand.len() != g.n() {
        return None;
    }
    let mut st = Exchange { g, demand: demand.demand.clone(), edges: Vec::new(), present: HashSet::new() };
    loop {
        st.greedy(rng);
        if st.demand.iter().all(|&d| d == 0) {
            return Some(EdgeInsertionSet::from_normalized(st.edges));
        }
        if !st.exchange() {
            return None;
        }
    }
}

/// Trial schedule for [`realize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizeConfig {
    /// Mappings sampled per jump configuration.
    pub mappings: usize,
    /// Local exchange runs per mapping.
    pub trials: usize,
    pub max_jump_blocks: usize,
    /// Largest number of degrees jumping over one block.
    pub jump_count_cap: usize,
}

impl Default for RealizeConfig {
    fn default() -> Self {
        RealizeConfig { mappings: 100, trials: 25, max_jump_blocks: 10, jump_count_cap: 5 }
    }
}

/// What [`realize`] did.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizeOutcome {
    pub insertion: Option<EdgeInsertionSet>,
    /// Jump configuration of the successful mapping.
    pub jumps: Option<JumpConfiguration>,
    pub configurations_tried: usize,
    /// Local exchange runs up to and including the successful one.
    pub attempts: u64,
    pub timed_out: bool,
}

/// Derives independent stream seeds from the run seed.
pub(crate) fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut x = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// Tries to realize `sol` in `g`. Jump configurations are visited in order;
/// each gets `mappings × trials` local exchange runs. Mappings run in
/// parallel and the lowest-indexed success wins, so the result depends only
/// on the inputs and `seed`.
pub fn realize(
    g: &Graph,
    sol: &AnonymizationSolution,
    cfg: &RealizeConfig,
    seed: u64,
    deadline: Option<Instant>,
) -> RealizeOutcome {
    let mut out = RealizeOutcome::default();
    if sol.cost == 0 {
        out.insertion = Some(EdgeInsertionSet::new());
        out.jumps = Some(JumpConfiguration::natural());
        return out;
    }
    if sol.cost % 2 == 1 {
        return out;
    }
    let blocks = g.blocks();
    for (ci, jc) in enumerate_jump_configs(sol, cfg.max_jump_blocks, cfg.jump_count_cap).enumerate() {
        if expired(deadline) {
            out.timed_out = true;
            return out;
        }
        let Some(moves) = apply_jumps(&sol.moves, &jc) else {
            continue;
        };
        out.configurations_tried += 1;
        let mappings = if mapping_is_forced(&blocks, &moves) { 1 } else { cfg.mappings.max(1) };
        let trials = cfg.trials.max(1);
        let stop = AtomicBool::new(false);
        let found = (0..mappings).into_par_iter().find_map_first(|mi| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, ci as u64, mi as u64));
            let mapping = sample_mapping(g, &blocks, &moves, &mut rng);
            let demand = mapping.demand(g);
            for t in 0..trials {
                if stop.load(Ordering::Relaxed) || expired(deadline) {
                    stop.store(true, Ordering::Relaxed);
                    return None;
                }
                if let Some(s) = local_exchange(g, &demand, &mut rng) {
                    return Some((mi, t, s));
                }
            }
            None
        });
        match found {
            Some((mi, t, s)) => {
                out.attempts += (mi * trials + t + 1) as u64;
                out.insertion = Some(s);
                out.jumps = Some(jc);
                return out;
            }
            None if stop.load(Ordering::Relaxed) => {
                out.timed_out = true;
                return out;
            }
            None => out.attempts += (mappings * trials) as u64,
        }
    }
    out
}

/// A problem found by [`verify_insertion`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    SelfLoop { vertex: usize },
    OutOfRange { vertex: usize },
    Duplicate { u: usize, v: usize },
    ExistingEdge { u: usize, v: usize },
    NotAnonymous { degree: usize, count: usize },
}

/// Result of checking an insertion set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub k: usize,
    pub edges: usize,
    /// Block sequence of `g + s`; absent if `s` is not a valid insertion set.
    pub block_sequence: Option<BlockSequence>,
    pub violations: Vec<Violation>,
}

/// Checks that `pairs` is a valid insertion set for `g` and that the result
/// is k-anonymous.
pub fn verify_pairs(g: &Graph, pairs: &[(usize, usize)], k: usize) -> VerificationReport {
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for &(u, v) in pairs {
        if u >= g.n() || v >= g.n() {
            violations.push(Violation::OutOfRange { vertex: u.max(v) });
        } else if u == v {
            violations.push(Violation::SelfLoop { vertex: u });
        } else if !seen.insert(key(u, v)) {
            violations.push(Violation::Duplicate { u: u.min(v), v: u.max(v) });
        } else if g.has_edge(u, v) {
            violations.push(Violation::ExistingEdge { u: u.min(v), v: u.max(v) });
        }
    }
    let mut block_sequence = None;
    if violations.is_empty() {
        let mut deg = g.degrees();
        for &(u, v) in pairs {
            deg[u] += 1;
            deg[v] += 1;
        }
        let b = BlockSequence::from_degrees(deg);
        for (d, &c) in b.counts().iter().enumerate() {
            if c > 0 && c < k {
                violations.push(Violation::NotAnonymous { degree: d, count: c });
            }
        }
        block_sequence = Some(b);
    }
    VerificationReport { valid: violations.is_empty(), k, edges: pairs.len(), block_sequence, violations }
}

pub fn verify_insertion(g: &Graph, s: &EdgeInsertionSet, k: usize) -> VerificationReport {
    verify_pairs(g, s.edges(), k)
}

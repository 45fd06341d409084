//! Degree sequences, block sequences and their algebra.
//!
//! A block sequence `b_0..b_Δ` counts vertices per degree. All positionwise
//! notions (domination, difference) refer to the ascending-sorted degree
//! sequence the blocks expand to.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiset of degrees, stored ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeSequence {
    values: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(mut values: Vec<usize>) -> Self {
        values.sort_unstable();
        DegreeSequence { values }
    }

    /// Ascending values.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> usize {
        self.values.last().copied().unwrap_or(0)
    }

    pub fn sum(&self) -> u64 {
        self.values.iter().map(|&d| d as u64).sum()
    }

    pub fn block_sequence(&self) -> BlockSequence {
        BlockSequence::from_degrees(self.values.iter().copied())
    }
}

/// Vertex counts per degree. The last entry is non-zero unless the sequence
/// represents no vertices at all.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockSequence {
    counts: Vec<usize>,
}

impl fmt::Debug for BlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for BlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl BlockSequence {
    /// Trailing zero counts are dropped.
    pub fn from_counts(mut counts: Vec<usize>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        BlockSequence { counts }
    }

    pub fn from_degrees<I: IntoIterator<Item = usize>>(degrees: I) -> Self {
        let mut counts: Vec<usize> = Vec::new();
        for d in degrees {
            if d >= counts.len() {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        Self::from_counts(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Count of degree `d`, zero past the end.
    pub fn get(&self, d: usize) -> usize {
        self.counts.get(d).copied().unwrap_or(0)
    }

    /// Number of represented vertices.
    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Largest degree present; zero for an empty sequence.
    pub fn max_degree(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    /// Sum of all degrees.
    pub fn norm(&self) -> u64 {
        self.counts.iter().enumerate().map(|(d, &c)| d as u64 * c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut values = Vec::with_capacity(self.n());
        for (d, &c) in self.counts.iter().enumerate() {
            values.extend(std::iter::repeat_n(d, c));
        }
        DegreeSequence { values }
    }

    /// Runs of the ascending degree sequence as `(degree, count)` with
    /// non-zero counts.
    pub fn runs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(d, &c)| (d, c))
    }

    pub fn is_k_anonymous(&self, k: usize) -> bool {
        is_k_anonymous(self, k)
    }

    /// `self ⊵ other`.
    pub fn dominates(&self, other: &BlockSequence) -> Result<bool> {
        dominates(self, other)
    }
}

/// True iff every block is empty or holds at least `k` vertices.
pub fn is_k_anonymous(b: &BlockSequence, k: usize) -> bool {
    b.counts.iter().all(|&c| c == 0 || c >= k)
}

/// `upper ⊵ lower`: the ascending degree sequence of `upper` is positionwise
/// at least that of `lower`.
pub fn dominates(upper: &BlockSequence, lower: &BlockSequence) -> Result<bool> {
    let (nu, nl) = (upper.n(), lower.n());
    if nu != nl {
        return Err(Error::VertexCountMismatch { left: nu, right: nl });
    }
    // Positionwise domination holds iff, for every threshold d, `upper` has no
    // more values <= d than `lower` does.
    let len = upper.counts.len().max(lower.counts.len());
    let (mut cu, mut cl) = (0usize, 0usize);
    for d in 0..len {
        cu += upper.get(d);
        cl += lower.get(d);
        if cu > cl {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Block sequence of positionwise differences `upper − lower`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DifferenceSequence(pub BlockSequence);

impl DifferenceSequence {
    pub fn blocks(&self) -> &BlockSequence {
        &self.0
    }

    pub fn norm(&self) -> u64 {
        self.0.norm()
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        self.0.degree_sequence()
    }

    /// True when every difference is zero.
    pub fn is_zero(&self) -> bool {
        self.0.counts.len() <= 1
    }
}

/// `upper ⊖ lower`; requires `upper ⊵ lower`.
pub fn difference(upper: &BlockSequence, lower: &BlockSequence) -> Result<DifferenceSequence> {
    if !dominates(upper, lower)? {
        return Err(Error::NotDominating);
    }
    let mut counts: Vec<usize> = Vec::new();
    for (from, to, count) in aligned_runs(lower, upper) {
        let diff = to - from;
        if diff >= counts.len() {
            counts.resize(diff + 1, 0);
        }
        counts[diff] += count;
    }
    Ok(DifferenceSequence(BlockSequence::from_counts(counts)))
}

/// Number of vertices raised from degree `from` to degree `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub from: usize,
    pub to: usize,
    pub count: usize,
}

impl Move {
    pub fn cost(&self) -> u64 {
        (self.to - self.from) as u64 * self.count as u64
    }
}

/// Moves induced by pairing the ascending sequences of `source` and `target`
/// position by position. Every degree is raised to the nearest target value
/// the sorted order allows. Sorted by `(from, to)`; only proper raises are
/// listed.
pub fn natural_moves(source: &BlockSequence, target: &BlockSequence) -> Result<Vec<Move>> {
    if !dominates(target, source)? {
        return Err(Error::NotDominating);
    }
    let mut moves: Vec<Move> = Vec::new();
    for (from, to, count) in aligned_runs(source, target) {
        if to == from {
            continue;
        }
        match moves.last_mut() {
            Some(last) if last.from == from && last.to == to => last.count += count,
            _ => moves.push(Move { from, to, count }),
        }
    }
    moves.sort_unstable();
    Ok(moves)
}

/// Maximal runs `(source value, target value, length)` of the two ascending
/// sequences laid side by side. Both sequences must have the same length.
fn aligned_runs<'a>(
    source: &'a BlockSequence,
    target: &'a BlockSequence,
) -> impl Iterator<Item = (usize, usize, usize)> + 'a {
    let mut s = source.runs().peekable();
    let mut t = target.runs().peekable();
    let mut s_left = 0usize;
    let mut t_left = 0usize;
    let mut s_val = 0usize;
    let mut t_val = 0usize;
    std::iter::from_fn(move || {
        if s_left == 0 {
            let (v, c) = s.next()?;
            s_val = v;
            s_left = c;
        }
        if t_left == 0 {
            let (v, c) = t.next()?;
            t_val = v;
            t_left = c;
        }
        let len = s_left.min(t_left);
        s_left -= len;
        t_left -= len;
        Some((s_val, t_val, len))
    })
}

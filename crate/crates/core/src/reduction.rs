//! Data reduction for block sequences with many equivalent minimum solutions.
//!
//! A stretch `B_i..B_j` enclosed by a large anchor block `B_i` and a run of
//! large blocks starting at `B_j` can be anonymized independently of the rest.
//! When one of its minimum anonymizations raises degrees by at most one and
//! keeps the anchor at size `k` or more, that anonymization is fixed in place.

use serde::{Deserialize, Serialize};

use crate::dp::{AnonymizationSolution, DpTable};
use crate::error::Result;
use crate::sequence::{difference, BlockSequence};

/// Minimum solutions inspected per candidate stretch.
const STRETCH_ENUMERATION_LIMIT: usize = 4096;

/// One fixed stretch: degrees `start..=end` were replaced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub start: usize,
    pub end: usize,
    pub before: Vec<usize>,
    pub after: Vec<usize>,
    /// Increments spent by the substitution.
    pub cost: u64,
}

/// Substitutions in the order they were applied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLog {
    pub substitutions: Vec<Substitution>,
}

impl ReductionLog {
    pub fn is_empty(&self) -> bool {
        self.substitutions.is_empty()
    }

    /// Increments already spent by the reduced sequence.
    pub fn cost(&self) -> u64 {
        self.substitutions.iter().map(|s| s.cost).sum()
    }

    /// Expresses a solution for the reduced sequence as one for `original`.
    pub fn translate(&self, original: &BlockSequence, sol: &AnonymizationSolution) -> Result<AnonymizationSolution> {
        AnonymizationSolution::from_target(original, sol.target.clone())
    }
}

/// Smallest `j >= from` where a run of blocks of size at least `k` starts
/// whose prefix reaches the required mass.
fn run_start(b: &[usize], k: usize, from: usize) -> Option<usize> {
    'outer: for j in from..b.len() {
        let mut sum = 0;
        for (t, &bl) in b[j..].iter().enumerate() {
            if bl < k {
                continue 'outer;
            }
            sum += bl;
            if sum >= (t + 1) * k + k - 1 {
                return Some(j);
            }
        }
    }
    None
}

/// Minimum anonymization of `stretch` (degrees shifted to start at zero)
/// with all raises equal to one and the first block of size at least `k`.
fn fix_stretch(stretch: &[usize], k: usize) -> Option<BlockSequence> {
    let sub = BlockSequence::from_counts(stretch.to_vec());
    if sub.is_k_anonymous(k) {
        return None;
    }
    let mut table = DpTable::classic(&sub, k);
    let s = table.min_cost(sub.n() as u64 * sub.max_degree() as u64)?;
    let found = table.solutions(s, STRETCH_ENUMERATION_LIMIT).ok()?.find(|sol| {
        sol.target.get(0) >= k
            && difference(&sol.target, &sub).map(|d| d.blocks().max_degree() <= 1).unwrap_or(false)
    });
    found.map(|sol| sol.target)
}

/// One left-to-right pass; returns whether anything changed.
fn single_pass(counts: &mut [usize], k: usize, log: &mut ReductionLog) -> bool {
    let mut changed = false;
    let mut i = 0;
    while i < counts.len() {
        if counts[i] < k {
            i += 1;
            continue;
        }
        let Some(j) = run_start(counts, k, i + 2) else {
            break;
        };
        let stretch = &counts[i..=j];
        match fix_stretch(stretch, k) {
            Some(target) => {
                let mut after = target.counts().to_vec();
                after.resize(j - i + 1, 0);
                let before = stretch.to_vec();
                let cost = target.norm() - BlockSequence::from_counts(before.clone()).norm();
                counts[i..=j].copy_from_slice(&after);
                log.substitutions.push(Substitution { start: i, end: j, before, after, cost });
                changed = true;
                i = j;
            }
            None => i += 1,
        }
    }
    changed
}

/// Applies the rule until nothing changes.
pub fn apply_reduction_rule(b: &BlockSequence, k: usize) -> (BlockSequence, ReductionLog) {
    let mut counts = b.counts().to_vec();
    let mut log = ReductionLog::default();
    if k >= 2 {
        while single_pass(&mut counts, k, &mut log) {}
    }
    (BlockSequence::from_counts(counts), log)
}
